"""Expansion coefficients, partial sums, weighted norms, and growth conditions.

For the measure d-alpha = w^2 dx the expansion of f is sum c_l p_l with
c_l = integral f p_l d-alpha, and S_n(f) = sum_{j < n} c_j p_j is the
(n-1)-th partial sum.  Two-weight norms |f w u_gamma|_p with
u_gamma(y) = (1 + |y|)^gamma control when sup_n |S_n(f) w u_b|_p <=
c |f w u_B|_p can hold; ``condition_check`` evaluates the known necessary /
sufficient exponent conditions for the power weights, where a_n grows exactly
like n^(1/beta), and ``convergence_experiment`` measures the corresponding
ratio and error sequences (the constants c are not specified by the theory,
so experiments report trends rather than asserting inequalities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeOutOfRange, IntegrationDivergence, InvalidExponent, NonFinite
from .orthopoly import (RecurrenceTable, _discretized_measure, _gauss_rule, _stieltjes,
                        eval_orthopoly_all)
from .weights import WeightSpec

_EXT_RULES: dict = {}
_RADIUS_CACHE: dict = {}
_MAX_RULE_SIZE = 2048


def _extended_rule(weight: WeightSpec, size: int):
    """Gauss rule for d-alpha with ``size`` nodes, beyond any user table.

    The recurrence pass here skips the orthonormality certificate of the
    public generator: the substituted discretization is spectrally accurate,
    and the rule's degree exactness is what the coefficient integrals rely on.
    """
    key = (weight.beta, size)
    if key not in _EXT_RULES:
        from .mrs import mrs_number

        rkey = (weight.beta, 2 * size + 4)
        if rkey not in _RADIUS_CACHE:
            _RADIUS_CACHE[rkey] = 1.5 * mrs_number(weight, 2.0 * size + 4.0, tol=1e-12)
        x, w = _discretized_measure(weight, _RADIUS_CACHE[rkey], 2 * size + 192)
        alphas, p0, _ = _stieltjes(x, w, size)
        _EXT_RULES[key] = _gauss_rule(alphas, p0, size, measure=f"w2:{weight.label}")
    return _EXT_RULES[key]


@dataclass(frozen=True, eq=False)
class ExpansionCoefficients:
    table: RecurrenceTable
    coeffs: np.ndarray
    nodes_used: int

    @property
    def N(self) -> int:
        return self.coeffs.size

    def parseval_partial_sums(self) -> np.ndarray:
        """Cumulative sums of c_l^2; nondecreasing and bounded by |f|^2_alpha."""
        return np.cumsum(self.coeffs**2)


def expansion_coefficients(table: RecurrenceTable, f, N: int,
                           rtol: float = 1e-10) -> ExpansionCoefficients:
    """c_0..c_{N-1} by Gauss quadrature with node doubling.

    Gauss rules for d-alpha are drawn from internally extended recurrence
    tables; doubling stops once successive coefficient vectors agree to rtol
    relative to the largest coefficient.

    Raises:
        IntegrationDivergence: estimates fail to stabilize after 6 doublings
            (f not admissible for this measure at quadrature resolution).
    """
    if N < 1 or N - 1 > table.N:
        raise DegreeOutOfRange(f"need 1 <= N and N-1 <= {table.N}")
    weight = table.weight
    m = max(2 * N + 16, 64)
    prev = None
    while m <= _MAX_RULE_SIZE:
        rule = _extended_rule(weight, m)
        fx = np.asarray(f(rule.nodes), dtype=float)
        basis = eval_orthopoly_all(table, N - 1, rule.nodes)
        coeffs = basis @ (rule.weights * fx)
        if prev is not None:
            scale = 1.0 + float(np.max(np.abs(coeffs)))
            if float(np.max(np.abs(coeffs - prev))) <= rtol * scale:
                return ExpansionCoefficients(table, coeffs, nodes_used=m)
        prev = coeffs
        m *= 2
    raise IntegrationDivergence("coefficient estimates failed to stabilize "
                                "within the node-doubling budget")


def partial_sum_eval(coeffs: ExpansionCoefficients, n: int, x):
    """S_n(f)(x) = sum_{j < n} c_j p_j(x); the empty sum (n = 0) is 0."""
    if n < 0 or n > coeffs.N:
        raise DegreeOutOfRange(f"partial sum order {n} outside 0..{coeffs.N}")
    arr = np.asarray(x, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if n == 0:
        vals = np.zeros_like(flat)
    else:
        basis = eval_orthopoly_all(coeffs.table, n - 1, flat)
        vals = coeffs.coeffs[:n] @ basis
    if arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(arr.shape)


def delta_u(f, u: float, x):
    """Forward difference f(x + u) - f(x)."""
    x = np.asarray(x, dtype=float)
    return np.asarray(f(x + u), dtype=float) - np.asarray(f(x), dtype=float)


def u_gamma(gamma: float, y):
    """The polynomial weight (1 + |y|)^gamma."""
    return (1.0 + np.abs(np.asarray(y, dtype=float))) ** gamma


# ---------------------------------------------------------------------------
# weighted norms


def _truncation_radius(weight: WeightSpec, degree_cap: int) -> float:
    from .mrs import mrs_number

    if weight.beta is None:  # custom weights are not cache-keyable
        return 2.0 * mrs_number(weight, float(degree_cap), tol=1e-10)
    key = ("norm-radius", weight.beta, degree_cap)
    if key not in _RADIUS_CACHE:
        _RADIUS_CACHE[key] = 2.0 * mrs_number(weight, float(degree_cap), tol=1e-10)
    return _RADIUS_CACHE[key]


def weighted_norm(f, weight: WeightSpec, gamma: float, p: float,
                  degree_cap: int = 64) -> float:
    """|f w u_gamma|_p for p in (1, inf].

    The sup norm is a refined grid maximum on |x| <= 2 a_{degree_cap}; finite
    p integrates |f w u_gamma|^p by node-doubled Gauss-Legendre on the same
    symmetric window.  Either way the tail beyond the window is probed and
    must decay.

    Raises:
        NonFinite: the probe grid shows a non-decaying tail.
    """
    if not (p > 1.0):
        raise InvalidExponent("p must exceed 1")
    radius = _truncation_radius(weight, degree_cap)

    def g(x):
        x = np.asarray(x, dtype=float)
        return np.abs(np.asarray(f(x), dtype=float)) * weight.w(x) * u_gamma(gamma, x)

    # tail probe: the integrand must fall off beyond the window
    probes = radius * np.array([1.0, 1.25, 1.5, 2.0])
    tail = np.maximum(g(probes), g(-probes))
    if not np.all(np.isfinite(tail)) or np.any(np.diff(tail) > 0.0):
        raise NonFinite("weighted integrand does not decay beyond the truncation window")

    if math.isinf(p):
        grid = np.linspace(-radius, radius, 4001)
        vals = g(grid)
        if not np.all(np.isfinite(vals)):
            raise NonFinite("weighted integrand not finite on the grid")
        best = float(np.max(vals))
        spacing = grid[1] - grid[0]
        for j in np.argsort(vals)[::-1][:5]:
            lo = max(float(grid[j]) - spacing, -radius)
            hi = min(float(grid[j]) + spacing, radius)
            for _ in range(4):
                tt = np.linspace(lo, hi, 65)
                vv = g(tt)
                i = int(np.argmax(vv))
                best = max(best, float(vv[i]))
                lo, hi = max(tt[i] - (hi - lo) / 64, -radius), min(tt[i] + (hi - lo) / 64, radius)
        return max(best, float(np.max(tail)))

    from scipy.special import roots_legendre

    prev = None
    m = 512
    for _ in range(9):
        t, wq = roots_legendre(m)
        x = t * radius
        wq = wq * radius
        total = float(np.sum(wq * g(x) ** p))
        if prev is not None and abs(total - prev) <= 1e-9 * (1.0 + abs(total)):
            break
        prev = total
        m *= 2
    return total ** (1.0 / p)


# ---------------------------------------------------------------------------
# growth-condition evaluation


@dataclass(frozen=True)
class ConditionReport:
    """Verdicts of the norm-growth conditions at parameters (p, b, B, beta).

    ``exponents`` holds the net power of n in each tested product after
    substituting a_n = n^(1/beta); a product is O(1) iff its exponent is
    negative, or zero without the log factor.
    """

    p: float
    b: float
    B: float
    beta: float
    case: str
    c_tag: str  # "1" or "log n"
    verdicts: dict = field(default_factory=dict)
    exponents: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {"p": ("inf" if math.isinf(self.p) else self.p), "b": self.b,
                "B": self.B, "beta": self.beta, "case": self.case,
                "c_tag": self.c_tag, "verdicts": dict(self.verdicts),
                "exponents": dict(self.exponents), "overall": self.overall}


_EQ_TOL = 1e-12


def condition_check(p: float, b: float, B: float, beta: float) -> ConditionReport:
    """Evaluate the necessary growth conditions for two-weight partial-sum bounds.

    For the power weights a_n = n^(1/beta) exactly, so a product
    a_n^E n^F C_{B,n} is O(1) iff E/beta + F < 0, or E/beta + F = 0 with
    C_{B,n} = 1 (the log-n factor appears exactly when B = 1).

    Raises:
        InvalidExponent: p <= 1.
    """
    if not (p > 1.0):
        raise InvalidExponent("p must exceed 1")
    if beta <= 1.0:
        raise ValueError("beta must exceed 1")
    log_factor = abs(B - 1.0) <= _EQ_TOL
    c_tag = "log n" if log_factor else "1"
    verdicts: dict = {}
    exponents: dict = {}

    def bounded(E: float, F: float) -> bool:
        e = E / beta + F
        if e < -_EQ_TOL:
            return True
        if abs(e) <= _EQ_TOL and not log_factor:
            return True
        return False

    def net(E: float, F: float) -> float:
        return E / beta + F

    if math.isinf(p):
        case = "sup"
        verdicts["weight_exponent_positive"] = B > 0.0
        E = b - min(B, 1.0)
        F = 1.0 / 6.0
        verdicts["sup_growth_bounded"] = bounded(E, F)
        exponents["sup_growth_bounded"] = net(E, F)
    else:
        verdicts["norm_exponent_window"] = (b < 1.0 - 1.0 / p) and (B > -1.0 / p)
        if p < 4.0 / 3.0 - _EQ_TOL:
            case = "low_p"
            E = max(b, -1.0 / p) - B
            F = (4.0 / p - 3.0) / 6.0
            verdicts["low_p_growth_bounded"] = bounded(E, F)
            exponents["low_p_growth_bounded"] = net(E, F)
        elif abs(p - 4.0 / 3.0) <= _EQ_TOL or abs(p - 4.0) <= _EQ_TOL:
            case = "critical_p"
            verdicts["critical_p_strict_order"] = b < B
        elif p > 4.0 + _EQ_TOL:
            case = "high_p"
            E = b - min(B, 1.0 - 1.0 / p)
            F = (1.0 - 4.0 / p) / 6.0
            verdicts["high_p_growth_bounded"] = bounded(E, F)
            exponents["high_p_growth_bounded"] = net(E, F)
        else:
            case = "mid_p"

    return ConditionReport(p=p, b=b, B=B, beta=beta, case=case, c_tag=c_tag,
                           verdicts=verdicts, exponents=exponents)


# ---------------------------------------------------------------------------
# convergence experiments


@dataclass(frozen=True)
class ConvergenceResult:
    """Measured partial-sum ratios and errors over a degree sweep.

    rows: (n, r_n, e_n) with r_n = |S_n(f) w u_b|_p / |f w u_B|_p and
    e_n = |(S_n(f) - f) w u_b|_p; slope is the fitted log-log trend of e_n
    over the entries with e_n > 1e-14 (nan when fewer than two remain).
    """

    rows: tuple
    slope: float
    norm_f: float

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "slope": self.slope,
                "norm_f": self.norm_f}


def convergence_experiment(table: RecurrenceTable, f, p: float, b: float, B: float,
                           n_list, degree_cap: int = 64) -> ConvergenceResult:
    """Ratio and error sequences r_n, e_n for the partial sums of f."""
    n_list = [int(n) for n in n_list]
    n_max = max(n_list)
    coeffs = expansion_coefficients(table, f, n_max)
    weight = table.weight
    norm_f = weighted_norm(f, weight, B, p, degree_cap)
    rows = []
    for n in sorted(n_list):
        def s_n(x, _n=n):
            return partial_sum_eval(coeffs, _n, x)

        def err(x, _n=n):
            return partial_sum_eval(coeffs, _n, x) - np.asarray(f(x), dtype=float)

        r_n = weighted_norm(s_n, weight, b, p, degree_cap) / norm_f
        e_n = weighted_norm(err, weight, b, p, degree_cap)
        rows.append((n, float(r_n), float(e_n)))
    ns = np.array([r[0] for r in rows], dtype=float)
    es = np.array([r[2] for r in rows], dtype=float)
    keep = es > 1e-14
    if np.count_nonzero(keep) >= 2:
        slope = float(np.polyfit(np.log(ns[keep]), np.log(es[keep]), 1)[0])
    else:
        slope = float("nan")
    return ConvergenceResult(tuple(rows), slope, float(norm_f))
