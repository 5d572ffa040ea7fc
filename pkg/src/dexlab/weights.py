"""Even exponential weights w = exp(-Q) on the line and their admissibility.

The built-in family is Q(x) = |x|^beta with beta > 1 (w is then of smooth
faster-than-polynomial decay).  Admissibility asks for

  (a) Q continuously differentiable, even, Q(0) = 0;
  (b) x Q'(x) / Q(x) in (eta, C] away from 0, for some eta > 1;
  (c) a local Lipschitz-1/2 control of Q': for given (eps, delta) the integral
      of |Q'(s) - Q'(x)| / |s-x|^(3/2) over |s-x| <= delta |x| stays below
      eps |Q'(x)|.

``admissibility_report`` evaluates all three numerically on a log grid and
returns witnesses; it never raises on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_legendre


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Weight w = exp(-Q) with an explicit derivative rule for Q."""

    Q: Callable
    Qprime: Callable
    beta: Optional[float] = None
    label: str = "custom"

    @classmethod
    def power(cls, beta: float) -> "WeightSpec":
        """The family Q(x) = |x|^beta, beta > 1."""
        if beta <= 1.0:
            raise ValueError("power weight requires beta > 1")

        def Q(x):
            return np.abs(np.asarray(x, dtype=float)) ** beta

        def Qprime(x):
            x = np.asarray(x, dtype=float)
            return beta * np.sign(x) * np.abs(x) ** (beta - 1.0)

        return cls(Q, Qprime, beta=beta, label=f"exp(-|x|^{beta:g})")

    def w(self, x):
        return np.exp(-np.asarray(self.Q(x), dtype=float))

    def w2(self, x):
        """Squared weight, the density of the orthogonality measure."""
        return np.exp(-2.0 * np.asarray(self.Q(x), dtype=float))


@dataclass(frozen=True)
class ConditionVerdict:
    passed: bool
    witnesses: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AdmissibilityReport:
    cond_a: ConditionVerdict
    cond_b: ConditionVerdict
    cond_c: ConditionVerdict

    def to_dict(self) -> dict:
        return {name: {"passed": v.passed, **v.witnesses}
                for name, v in (("a", self.cond_a), ("b", self.cond_b), ("c", self.cond_c))}


def _lipschitz_half_integral(weight: WeightSpec, x: float, delta: float,
                             quad_nodes: int = 240) -> float:
    """Integral of |Q'(s)-Q'(x)| / |s-x|^(3/2) over s in [x - d|x|, x + d|x|].

    The substitution s = x +/- v^2 removes the |s-x|^(-1/2) endpoint
    singularity, leaving a smooth integrand for Gauss-Legendre.
    """
    vmax = np.sqrt(delta * abs(x))
    t, w = roots_legendre(quad_nodes)
    v = 0.5 * (t + 1.0) * vmax
    wv = w * 0.5 * vmax
    qpx = float(weight.Qprime(x))
    total = 0.0
    for sign in (1.0, -1.0):
        s = x + sign * v**2
        integrand = np.abs(np.asarray(weight.Qprime(s), dtype=float) - qpx) / v**2
        total += float(np.sum(wv * 2.0 * integrand))
    return total


def admissibility_report(weight: WeightSpec, eta: float, big_c: float,
                         eps: float = 0.5, delta: float = 0.1,
                         grid_min: float = 0.01, grid_max: float = 10.0,
                         grid_points: int = 64) -> AdmissibilityReport:
    """Numerical admissibility check of a weight on a log-spaced grid.

    Args:
        eta, big_c: the window (eta, big_c] for x Q'(x)/Q(x); eta must be > 1.
        eps, delta: the pair for the Lipschitz-1/2 control (condition c).
        grid_min, grid_max, grid_points: the positive log grid; evenness uses
            mirrored points.

    Returns a report with per-condition pass flags and numeric witnesses.
    """
    if eta <= 1.0:
        raise ValueError("eta must exceed 1")
    x = np.geomspace(grid_min, grid_max, grid_points)

    # (a) even, C^1 (by the declared derivative rule), Q(0) = 0
    q_pos = np.asarray(weight.Q(x), dtype=float)
    q_neg = np.asarray(weight.Q(-x), dtype=float)
    even_defect = float(np.max(np.abs(q_pos - q_neg) / (1.0 + np.abs(q_pos))))
    q0 = abs(float(weight.Q(0.0)))
    a_pass = even_defect <= 1e-12 and q0 <= 1e-12
    cond_a = ConditionVerdict(a_pass, {"even_defect": even_defect, "Q_at_zero": q0})

    # (b) window for x Q'(x) / Q(x) on the punctured grid
    ratio = x * np.asarray(weight.Qprime(x), dtype=float) / q_pos
    rmin, rmax = float(np.min(ratio)), float(np.max(ratio))
    b_pass = rmin > eta and rmax <= big_c
    cond_b = ConditionVerdict(b_pass, {
        "ratio_min": rmin, "ratio_min_at": float(x[np.argmin(ratio)]),
        "ratio_max": rmax, "ratio_max_at": float(x[np.argmax(ratio)]),
        "eta": eta, "C": big_c})

    # (c) worst ratio of the local Lipschitz-1/2 integral to eps-free |Q'(x)|
    ratios = []
    for xi in x:
        integral = _lipschitz_half_integral(weight, float(xi), delta)
        qp = abs(float(weight.Qprime(xi)))
        ratios.append(integral / qp if qp > 0 else np.inf)
    ratios = np.asarray(ratios)
    worst = float(np.max(ratios))
    c_pass = bool(np.isfinite(worst) and worst <= eps)
    cond_c = ConditionVerdict(c_pass, {
        "worst_ratio": worst, "worst_at": float(x[np.argmax(ratios)]),
        "eps": eps, "delta": delta})

    return AdmissibilityReport(cond_a, cond_b, cond_c)
