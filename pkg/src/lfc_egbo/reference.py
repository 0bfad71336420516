"""Published optimal gains and ITAE values for the five load cases.

Gains are ordered ``(kp1, ki1, kd1, kp2, ki2, kd2)``.  ``exe_time`` is the
reported wall-clock time in seconds on unknown hardware; it is carried for
reference only.
"""

from __future__ import annotations

from typing import NamedTuple

__all__ = ["AFTER_50_ITERATIONS", "PUBLISHED", "PublishedRow", "published_gains", "published_itae"]


class PublishedRow(NamedTuple):
    gains: tuple[float, float, float, float, float, float]
    itae: float
    exe_time: float


# (case id, algorithm key) -> row
PUBLISHED: dict[tuple[int, str], PublishedRow] = {
    (1, "choa"): PublishedRow((-14.9522, -41.6957, -5.6072, -14.7309, -43.1649, -5.618), 0.2344, 94.3089),
    (1, "egbo"): PublishedRow((-15.1838, -43.5993, -5.7641, -15.1738, -45.0, -5.761), 0.2292, 74.8221),
    (1, "gbo"): PublishedRow((-15.2024, -43.5671, -5.7899, -15.178, -44.9967, -5.7857), 0.2293, 76.1791),
    (1, "gwo"): PublishedRow((-15.1871, -43.7646, -5.7986, -15.0911, -45.0, -5.7799), 0.2298, 95.7718),
    (1, "pso"): PublishedRow((-15.2116, -43.837, -5.8098, -15.1177, -45.0, -5.7709), 0.2296, 81.6852),
    (1, "sca"): PublishedRow((-16.0, -45.0, -6.103, -16.0, -45.0, -5.9294), 0.2359, 97.6668),
    (2, "choa"): PublishedRow((-10.9494, -45.0, -4.7316, -16.0, -45.0, -5.0483), 0.9384, 95.4597),
    (2, "egbo"): PublishedRow((-10.8375, -45.0, -4.7069, -16.0, -39.1146, -4.8704), 0.9378, 98.3608),
    (2, "gbo"): PublishedRow((-10.8375, -45.0, -4.7069, -16.0, -39.1148, -4.8702), 0.9378, 100.6737),
    (2, "gwo"): PublishedRow((-10.8392, -45.0, -4.7091, -15.955, -41.607, -4.9248), 0.9379, 96.9174),
    (2, "pso"): PublishedRow((-10.8375, -45.0, -4.7069, -16.0, -39.1335, -4.8708), 0.9378, 105.1054),
    (2, "sca"): PublishedRow((-10.8832, -45.0, -4.7175, -15.0735, -21.4369, -5.774), 0.939, 100.0173),
    (3, "choa"): PublishedRow((-16.0, -43.5345, -5.0029, -10.7151, -45.0, -4.6522), 0.9507, 97.3061),
    (3, "egbo"): PublishedRow((-16.0, -45.0, -4.9366, -10.6501, -45.0, -4.6468), 0.95, 99.9523),
    (3, "gbo"): PublishedRow((-16.0, -45.0, -4.9366, -10.6501, -45.0, -4.6468), 0.95, 105.6416),
    (3, "gwo"): PublishedRow((-16.0, -45.0, -4.9314, -10.6555, -45.0, -4.6481), 0.9501, 103.3018),
    (3, "pso"): PublishedRow((-16.0, -45.0, -4.9366, -10.6501, -45.0, -4.6468), 0.95, 113.7967),
    (3, "sca"): PublishedRow((-11.3121, -45.0, -5.0956, -10.6818, -45.0, -4.6705), 0.9528, 101.2585),
    (4, "choa"): PublishedRow((-15.64, -45.0, -5.931, -16.0, -23.8575, -5.6133), 0.2805, 93.7092),
    (4, "egbo"): PublishedRow((-15.292, -45.0, -5.856, -15.3763, -23.4416, -5.4057), 0.2735, 82.1557),
    (4, "gbo"): PublishedRow((-15.309, -45.0, -5.8478, -15.4755, -23.4111, -5.382), 0.2736, 82.6738),
    (4, "gwo"): PublishedRow((-15.2249, -45.0, -5.8318, -15.4385, -23.404, -5.3673), 0.2739, 92.401),
    (4, "pso"): PublishedRow((-15.2937, -45.0, -5.863, -15.425, -23.4928, -5.4229), 0.2737, 85.5741),
    (4, "sca"): PublishedRow((-16.0, -45.0, -5.9795, -15.478, -22.6949, -5.3067), 0.2821, 101.5411),
    (5, "choa"): PublishedRow((-15.0874, -22.0303, -5.4886, -14.6593, -45.0, -5.7556), 0.285, 92.4471),
    (5, "egbo"): PublishedRow((-15.1578, -21.3754, -5.3152, -15.0066, -45.0, -5.3152), 0.2772, 78.7314),
    (5, "gbo"): PublishedRow((-15.1262, -21.3442, -5.3058, -15.0664, -44.9952, -5.7503), 0.2773, 79.3398),
    (5, "gwo"): PublishedRow((-15.1036, -21.3543, -5.3137, -15.0168, -45.0, -5.7608), 0.2775, 93.1188),
    (5, "pso"): PublishedRow((-15.1633, -21.3759, -5.3172, -15.0122, -45.0, -5.7557), 0.2773, 84.7991),
    (5, "sca"): PublishedRow((-16.0, -22.3174, -5.519, -15.3498, -45.0, -5.6841), 0.2892, 97.3272),
}

# case-5 comparison after 50 of 500 iterations: algorithm -> (fitness at 50, final ITAE)
AFTER_50_ITERATIONS: dict[str, tuple[float, float]] = {
    "choa": (0.3861, 0.285),
    "egbo": (0.2776, 0.2772),
    "gbo": (0.2779, 0.2773),
    "gwo": (0.3007, 0.2775),
    "pso": (0.2793, 0.2773),
    "sca": (0.3943, 0.2892),
}


def published_gains(case: int, algorithm: str = "egbo") -> tuple[float, ...]:
    return PUBLISHED[(case, algorithm.lower())].gains


def published_itae(case: int, algorithm: str = "egbo") -> float:
    return PUBLISHED[(case, algorithm.lower())].itae
