import collections

import numpy as np
import pytest

from lfc_egbo.plant import PlantParams
from lfc_egbo.reference import published_gains


class ScriptedRng:
    """Stand-in for ``RngStream`` that replays queued values.

    Each method pops from its own queue; ``size`` draws pop one value per
    element.  Running out of script fails the test loudly.
    """

    def __init__(self, rand=(), randn=(), integers=(), distinct=()):
        self.queues = {
            "rand": collections.deque(rand),
            "randn": collections.deque(randn),
            "integers": collections.deque(integers),
            "distinct": collections.deque(distinct),
        }

    def _pop(self, name, size):
        q = self.queues[name]
        if size is None:
            return q.popleft()
        n = int(np.prod(size))
        return np.array([q.popleft() for _ in range(n)], dtype=float).reshape(size)

    def rand(self, size=None):
        return self._pop("rand", size)

    def randn(self, size=None):
        return self._pop("randn", size)

    def integers(self, low, high, size=None):
        v = self._pop("integers", size)
        return v if size is None else v.astype(int)

    def distinct(self, n, k, exclude):
        return np.asarray(self.queues["distinct"].popleft(), dtype=int)

    def exhausted(self):
        return all(not q for q in self.queues.values())


@pytest.fixture
def scripted():
    return ScriptedRng


@pytest.fixture
def params():
    return PlantParams()


@pytest.fixture
def egbo_case1_gains():
    return published_gains(1, "egbo")
