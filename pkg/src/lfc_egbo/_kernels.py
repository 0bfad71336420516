"""Compiled inner loops for fixed-step RK4 on ``dx/dt = A x + d``.

``d`` is the constant forcing ``B_w @ w`` of a step load.  Both kernels stop at
the first step where a state leaves ``[-limit, limit]`` or becomes non-finite
and report that step; ``-1`` means the run completed.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


@njit(cache=True)
def _deriv(a, d, x, out):
    n = x.shape[0]
    for i in range(n):
        acc = d[i]
        for j in range(n):
            acc += a[i, j] * x[j]
        out[i] = acc


@njit(cache=True)
def _rk4_step(a, d, x, h, k1, k2, k3, k4, tmp):
    n = x.shape[0]
    _deriv(a, d, x, k1)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * h * k1[i]
    _deriv(a, d, tmp, k2)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * h * k2[i]
    _deriv(a, d, tmp, k3)
    for i in range(n):
        tmp[i] = x[i] + h * k3[i]
    _deriv(a, d, tmp, k4)
    for i in range(n):
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True)
def _out_of_range(x, limit):
    for i in range(x.shape[0]):
        v = x[i]
        if not (abs(v) <= limit):
            return True
    return False


@njit(cache=True)
def rk4_trajectory(a, d, h, n_steps, stride, limit):
    """Integrate from the zero state; keep every ``stride``-th sample.

    Returns ``(samples, diverged_step)``.  ``samples[0]`` is the zero state.
    On divergence the buffer is truncated after the last kept sample.
    """
    n = a.shape[0]
    n_keep = n_steps // stride + 1
    out = np.zeros((n_keep, n))
    x = np.zeros(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    kept = 1
    for s in range(1, n_steps + 1):
        _rk4_step(a, d, x, h, k1, k2, k3, k4, tmp)
        if _out_of_range(x, limit):
            return out[:kept], s
        if s % stride == 0:
            for i in range(n):
                out[kept, i] = x[i]
            kept += 1
    return out[:kept], -1


@njit(cache=True)
def rk4_itae(a, d, h, n_steps, limit):
    """Trapezoidal ITAE of ``t*(|x1| + |x4| + |x7|)`` at full step resolution.

    Returns ``(itae, diverged_step)``.
    """
    n = a.shape[0]
    x = np.zeros(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    total = 0.0
    prev = 0.0
    for s in range(1, n_steps + 1):
        _rk4_step(a, d, x, h, k1, k2, k3, k4, tmp)
        if _out_of_range(x, limit):
            return total, s
        cur = s * h * (abs(x[0]) + abs(x[3]) + abs(x[6]))
        total += 0.5 * h * (prev + cur)
        prev = cur
    return total, -1
