"""The correlation-free containing variety of a trio's sketch.

In shifted coordinates ``pi_il = P_il - f_il`` (accuracy minus observed vote
frequency), every trio, correlated or not, has its true point on the surface

    P_a * pi_ia - (1 - P_a) * pi_ib = 0                      (i = 1, 2, 3)
    pi_ia * pi_jb - pi_ib * pi_ja = 0                        (i < j)

No correlation value enters these equations, so they can be checked from the
sketch alone. The surface has dimension four: ``P_a`` plus one free ``pi_ia``
per classifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import format_scalar, golden_section_min
from .points import PAIRS, EvaluationPoint
from .sketch import as_frequencies, statistics


@dataclass(frozen=True)
class VarietyResiduals:
    linear: tuple
    cross: dict

    def all_zero(self, tol=0) -> bool:
        return all(abs(v) <= tol for v in (*self.linear, *self.cross.values()))

    def to_dict(self) -> dict:
        return {
            "linear": [format_scalar(v) for v in self.linear],
            "cross": {f"{i + 1}{j + 1}": format_scalar(v) for (i, j), v in self.cross.items()},
        }


@dataclass(frozen=True)
class VarietyProjection:
    closest_point: tuple
    distance: float
    p_alpha_star: float
    t: tuple
    closest_in_unit_cube: bool

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "p_alpha_star": self.p_alpha_star,
            "t": list(self.t),
            "closest_point": list(self.closest_point),
            "closest_in_unit_cube": self.closest_in_unit_cube,
        }


def _as_point(point) -> EvaluationPoint:
    if isinstance(point, EvaluationPoint):
        return point
    return EvaluationPoint.from_vector(list(point))


def shifted_coordinates(point, data, exact: bool | None = None) -> tuple[tuple, tuple]:
    """``(pi_alpha, pi_beta)`` per classifier."""
    p = _as_point(point)
    st = statistics(data, exact)
    pi_a = tuple(p.acc_alpha[i] - st.f_alpha[i] for i in range(3))
    pi_b = tuple(p.acc_beta[i] - st.f_beta[i] for i in range(3))
    return pi_a, pi_b


def residuals(point, data, exact: bool | None = None) -> VarietyResiduals:
    """Values of the six containing-variety polynomials at ``point``."""
    p = _as_point(point)
    pi_a, pi_b = shifted_coordinates(p, data, exact)
    pa = p.prevalence
    linear = tuple(pa * pi_a[i] - (1 - pa) * pi_b[i] for i in range(3))
    cross = {(i, j): pi_a[i] * pi_b[j] - pi_b[i] * pi_a[j] for i, j in PAIRS}
    return VarietyResiduals(linear, cross)


def _objective(a: np.ndarray, b: np.ndarray, p0: float):
    # Squared distance after the inner minimisation over t, multiplied through
    # by (1 - P)^2 so that P = 0 and P = 1 are regular points.
    def h(pa: float) -> float:
        den = pa * pa + (1.0 - pa) ** 2
        return (pa - p0) ** 2 + float(np.sum((pa * a - (1.0 - pa) * b) ** 2)) / den

    return h


def surface_point(pa: float, t: Sequence[float], f_alpha, f_beta) -> tuple:
    """The variety point with prevalence ``pa`` and ``pi_ia = t_i``.

    Requires ``pa < 1``; at ``pa == 1`` use :func:`project` output directly.
    """
    rho = pa / (1.0 - pa)
    out = [pa]
    for i in range(3):
        out += [f_alpha[i] + t[i], f_beta[i] + rho * t[i]]
    return tuple(out)


def project(point, data, grid: int = 512, refinements: int = 40) -> VarietyProjection:
    """Euclidean projection of a 7-vector onto the containing variety.

    The surface is parametrised by ``(P_a, t_1, t_2, t_3)`` as
    ``(P_a, f_ia + t_i, f_ib + rho t_i)`` with ``rho = P_a / (1 - P_a)``. For
    fixed ``P_a`` the best ``t_i`` is ``(a_i + rho b_i) / (1 + rho^2)`` where
    ``a_i, b_i`` are the input's offsets from the vote frequencies. The outer
    search scans ``grid`` prevalences on ``[0, 1]`` and refines the best bracket
    with ``refinements`` golden-section steps. The endpoints are the limits
    ``pi_b = 0`` (``P_a = 0``) and ``pi_a = 0`` (``P_a = 1``).
    """
    if grid < 3:
        raise ValueError("grid needs at least 3 points")
    q = [float(x) for x in _as_point(point).as_vector()]
    st = statistics(as_frequencies(data, exact=False))
    f_alpha = np.array([float(x) for x in st.f_alpha])
    f_beta = np.array([float(x) for x in st.f_beta])
    a = np.array([q[1], q[3], q[5]]) - f_alpha
    b = np.array([q[2], q[4], q[6]]) - f_beta
    h = _objective(a, b, q[0])

    xs = np.linspace(0.0, 1.0, grid)
    vals = [h(x) for x in xs]
    k = int(np.argmin(vals))
    best_x, best_v = float(xs[k]), vals[k]
    lo, hi = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, grid - 1)])
    x, v = golden_section_min(h, lo, hi, refinements)
    if v < best_v:
        best_x, best_v = x, v

    pa = best_x
    den = pa * pa + (1.0 - pa) ** 2
    # pi_a and pi_b of the closest point, written to avoid dividing by 1 - pa
    pi_a = ((1.0 - pa) ** 2 * a + pa * (1.0 - pa) * b) / den
    pi_b = (pa * (1.0 - pa) * a + pa * pa * b) / den
    closest = [pa]
    for i in range(3):
        closest += [float(f_alpha[i] + pi_a[i]), float(f_beta[i] + pi_b[i])]
    dist = math.sqrt(sum((c - x0) ** 2 for c, x0 in zip(closest, q)))
    return VarietyProjection(
        tuple(closest),
        dist,
        pa,
        tuple(float(t) for t in pi_a),
        all(0.0 <= c <= 1.0 for c in closest),
    )


def blind_spot_report(point, data, threshold=0.1) -> list[dict]:
    """Per classifier: shifted accuracies, ``g = P_ia + P_ib - 1`` and flags.

    A flag is raised when a magnitude falls below ``threshold``; the
    independent evaluator cannot register correlation near these loci.
    """
    p = _as_point(point)
    pi_a, pi_b = shifted_coordinates(p, data)
    g = p.g()
    out = []
    for i in range(3):
        out.append(
            {
                "classifier": i + 1,
                "pi_alpha": pi_a[i],
                "pi_beta": pi_b[i],
                "g": g[i],
                "flag_pi_alpha": abs(pi_a[i]) < threshold,
                "flag_pi_beta": abs(pi_b[i]) < threshold,
                "flag_g": abs(g[i]) < threshold,
            }
        )
    return out
