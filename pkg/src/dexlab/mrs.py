"""Scaled extremal-support numbers a_u and the infinite-finite inequalities.

For an even weight w = exp(-Q), a_u is the positive root of

    u = (2/pi) * integral_0^1 a_u t Q'(a_u t) / sqrt(1 - t^2) dt,

the scaled endpoint of the support of the equilibrium measure for w^2.  The
integral is evaluated after the substitution t = sin(theta), which absorbs
the endpoint singularity; the root is found by bisection on the monotone left
side (no Q'' required, matching the weight class's regularity).

Why a_u matters computationally: for polynomials P of degree <= n the
weighted sup norm over the whole line is attained on [-a_n, a_n], and beyond
s a_n (s > 1) the weighted polynomial is exponentially small.  The
``infinite_finite_check`` experiment measures both facts on random
polynomials; ``ratio_diagnostic`` tracks alpha_n / a_n against its limit 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .errors import BracketFailure, DegreeOutOfRange, NoConvergence
from .orthopoly import RecurrenceTable, eval_orthopoly_all
from .weights import WeightSpec

_THETA_NODES = 256
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_THETA_RULE: list = []


def _equilibrium_lhs(weight: WeightSpec, a: float) -> float:
    """G(a) = (2/pi) integral_0^{pi/2} a sin(theta) Q'(a sin theta) d theta."""
    if not _THETA_RULE:
        t, w = roots_legendre(_THETA_NODES)
        _THETA_RULE.append((np.sin(0.25 * np.pi * (t + 1.0)), w * 0.25 * np.pi))
    sin_theta, wq = _THETA_RULE[0]
    s = a * sin_theta
    qp = np.asarray(weight.Qprime(s), dtype=float)
    return float(2.0 / np.pi * np.sum(wq * s * qp))


def mrs_number(weight: WeightSpec, u: float, tol: float = 1e-12) -> float:
    """Solve G(a) = u for the scaled support endpoint a_u.

    Returns a with |G(a) - u| <= tol * u.  The initial bracket is
    [u^(1/beta)/10, 10 u^(1/beta)] (beta = 1 when the weight is not a power
    weight), expanded by doubling as needed.

    Raises:
        BracketFailure: bracket expansion exceeded 60 doublings.
        NoConvergence: bisection exhausted floating-point resolution with the
            residual still above tol * u (quadrature noise floor).
    """
    if u <= 0.0:
        raise ValueError("u must be positive")
    beta = weight.beta if weight.beta is not None else 1.0
    lo = u ** (1.0 / beta) / 10.0
    hi = 10.0 * u ** (1.0 / beta)
    for _ in range(60):
        if _equilibrium_lhs(weight, lo) <= u:
            break
        lo /= 2.0
    else:
        raise BracketFailure("lower bracket expansion exceeded 60 doublings")
    for _ in range(60):
        if _equilibrium_lhs(weight, hi) >= u:
            break
        hi *= 2.0
    else:
        raise BracketFailure("upper bracket expansion exceeded 60 doublings")
    mid = 0.5 * (lo + hi)
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        g = _equilibrium_lhs(weight, mid)
        if abs(g - u) <= tol * u:
            return mid
        if g < u:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, mid):
            break
    g = _equilibrium_lhs(weight, mid)
    if abs(g - u) <= tol * u:
        return mid
    raise NoConvergence(f"root residual {abs(g - u):.3e} above {tol * u:.3e} "
                        "at floating-point resolution")


@dataclass
class MRSTable:
    """Solved (u, a_u) pairs for a weight; strictly increasing in u."""

    weight: WeightSpec
    tol: float = 1e-12
    entries: dict = field(default_factory=dict)

    @classmethod
    def build(cls, weight: WeightSpec, us, tol: float = 1e-12) -> "MRSTable":
        table = cls(weight, tol)
        for u in us:
            table.value(float(u))
        return table

    def value(self, u: float) -> float:
        """a_u, solving and caching on first request."""
        u = float(u)
        if u not in self.entries:
            self.entries[u] = mrs_number(self.weight, u, self.tol)
        return self.entries[u]

    def rows(self) -> list:
        return sorted(self.entries.items())


# ---------------------------------------------------------------------------
# experiments


def _golden_max(fn, lo: float, hi: float, iters: int = 70) -> tuple[float, float]:
    """Golden-section maximization of a scalar function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    x = c if fc >= fd else d
    return x, max(fc, fd)


@dataclass(frozen=True)
class InfiniteFiniteReport:
    n: int
    s: float
    a_n: float
    trials: int
    fraction_argmax_inside: float
    max_outer_inner_ratio: float
    argmaxima: tuple

    def to_dict(self) -> dict:
        return {"n": self.n, "s": self.s, "a_n": self.a_n, "trials": self.trials,
                "fraction_argmax_inside": self.fraction_argmax_inside,
                "max_outer_inner_ratio": self.max_outer_inner_ratio,
                "argmaxima": list(self.argmaxima)}


def infinite_finite_check(table: RecurrenceTable, mrs: MRSTable, n: int, s: float,
                          trials: int, seed: int,
                          inside_tol: float = 1e-3) -> InfiniteFiniteReport:
    """Locate argmax of |P w| for seeded random P of degree <= n.

    Each trial draws standard-normal coefficients for P = sum c_j p_j,
    j <= n, scans a dense grid on [-3 a_n, 3 a_n], and refines the maximum by
    golden section.  Reported are the fraction of trials whose argmax lies in
    [-a_n (1 + inside_tol), +a_n (1 + inside_tol)] and the largest ratio of
    the sup of |P w| over |x| >= s a_n to the sup over [-a_n, a_n].
    """
    if n > table.N:
        raise DegreeOutOfRange(f"degree {n} exceeds table range {table.N}")
    if s <= 1.0:
        raise ValueError("s must exceed 1")
    a_n = mrs.value(float(n))
    weight = table.weight
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal((trials, n + 1))

    grid = np.linspace(-3.0 * a_n, 3.0 * a_n, 6001)
    spacing = grid[1] - grid[0]
    basis = eval_orthopoly_all(table, n, grid)
    wvals = weight.w(grid)
    inner_mask = np.abs(grid) <= a_n
    outer_mask = np.abs(grid) >= s * a_n

    def pw_abs(c, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        vals = c @ eval_orthopoly_all(table, n, x)
        return float(np.abs(vals[0]) * weight.w(x)[0])

    argmaxima = []
    inside = 0
    worst_ratio = 0.0
    for c in coeffs:
        vals = np.abs(c @ basis) * wvals

        j = int(np.argmax(vals))
        x_star, _ = _golden_max(lambda x: pw_abs(c, x),
                                grid[j] - spacing, grid[j] + spacing)
        argmaxima.append(x_star)
        if abs(x_star) <= a_n * (1.0 + inside_tol):
            inside += 1

        ji = int(np.argmax(np.where(inner_mask, vals, -np.inf)))
        _, inner_sup = _golden_max(lambda x: pw_abs(c, x),
                                   max(grid[ji] - spacing, -a_n),
                                   min(grid[ji] + spacing, a_n))
        jo = int(np.argmax(np.where(outer_mask, vals, -np.inf)))
        if grid[jo] >= 0.0:
            olo, ohi = max(grid[jo] - spacing, s * a_n), grid[jo] + spacing
        else:
            olo, ohi = grid[jo] - spacing, min(grid[jo] + spacing, -s * a_n)
        _, outer_sup = _golden_max(lambda x: pw_abs(c, x), olo, ohi)
        worst_ratio = max(worst_ratio, outer_sup / inner_sup)

    return InfiniteFiniteReport(n=n, s=s, a_n=a_n, trials=trials,
                                fraction_argmax_inside=inside / trials,
                                max_outer_inner_ratio=worst_ratio,
                                argmaxima=tuple(argmaxima))


@dataclass(frozen=True)
class RatioRow:
    n: int
    alpha_n: float
    a_n: float
    ratio: float
    deviation: float  # |ratio - 1/2|


def ratio_diagnostic(table: RecurrenceTable, mrs: MRSTable, n_list) -> list:
    """The sequence alpha_n / a_n with its distance from the limit 1/2."""
    rows = []
    for n in n_list:
        n = int(n)
        if n > table.N:
            raise DegreeOutOfRange(f"degree {n} exceeds table range {table.N}")
        alpha_n = float(table.alphas[n])
        a_n = mrs.value(float(n))
        ratio = alpha_n / a_n
        rows.append(RatioRow(n, alpha_n, a_n, ratio, abs(ratio - 0.5)))
    return rows
