"""Finite jet fields and the Taylor compatibility residual.

A jet field assigns to each point of a finite set E in R^n a complete table
of candidate derivatives f_alpha, |alpha| <= m.  For the tables to come from
an actual C^m function, each f_alpha must be reproduced by the Taylor
polynomial of the others:

    f_alpha(x) ~ sum_{|beta| <= m - |alpha|} f_{alpha+beta}(a) / beta! (x-a)^beta

``compatibility_residual`` measures the defect of that relation for every
ordered point pair, normalized by |x-a|^(m-|alpha|) so that polynomial fields
of degree <= m are exactly compatible and the residual of a smooth field
shrinks as E refines.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import IndexOutOfRange, TooFewPoints

MultiIndex = Tuple[int, ...]

FACTORIAL_ORDER_LIMIT = 20


def multi_indices(n: int, max_order: int) -> List[MultiIndex]:
    """All n-dimensional multi-indices with |alpha| <= max_order, graded order."""
    out: List[MultiIndex] = []
    for order in range(max_order + 1):
        for combo in itertools.combinations_with_replacement(range(n), order):
            alpha = [0] * n
            for i in combo:
                alpha[i] += 1
            out.append(tuple(alpha))
    # combinations_with_replacement yields each alpha exactly once per order
    return sorted(set(out), key=lambda a: (sum(a), a))


def mi_order(alpha: MultiIndex) -> int:
    return sum(alpha)


def mi_factorial(alpha: MultiIndex) -> int:
    """alpha! = prod alpha_i!, exact integer arithmetic (|alpha| <= 20)."""
    if mi_order(alpha) > FACTORIAL_ORDER_LIMIT:
        raise IndexOutOfRange(f"|alpha| = {mi_order(alpha)} exceeds exact-factorial limit "
                              f"{FACTORIAL_ORDER_LIMIT}")
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def mi_add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


def mi_power(x: np.ndarray, alpha: MultiIndex) -> float:
    out = 1.0
    for xi, a in zip(x, alpha):
        out *= float(xi) ** a
    return out


@dataclass
class WhitneyField:
    """Finite point set with a complete jet table per point.

    jets[i] maps each multi-index alpha (|alpha| <= order) to f_alpha(points[i]).
    """

    points: np.ndarray
    order: int
    jets: List[Dict[MultiIndex, float]]

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        k, n = self.points.shape
        if len(self.jets) != k:
            raise ValueError(f"{len(self.jets)} jet tables for {k} points")
        required = set(multi_indices(n, self.order))
        for i, table in enumerate(self.jets):
            missing = required - set(table)
            if missing:
                raise ValueError(f"jet table {i} missing entries, e.g. {sorted(missing)[0]}")
        if k >= 2:
            from scipy.spatial.distance import pdist
            if np.min(pdist(self.points)) == 0.0:
                raise ValueError("points must be distinct")

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def k(self) -> int:
        return self.points.shape[0]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.order,
            "points": self.points.tolist(),
            "jets": [{",".join(map(str, a)): v for a, v in sorted(t.items())}
                     for t in self.jets],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WhitneyField":
        jets = [{tuple(int(s) for s in key.split(",")): float(v) for key, v in t.items()}
                for t in d["jets"]]
        return cls(np.asarray(d["points"], dtype=float), int(d["m"]), jets)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "WhitneyField":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def jets_from_derivatives(points, m: int,
                          derivative: Callable[[MultiIndex, np.ndarray], float]) -> WhitneyField:
    """Build a field by evaluating a derivative rule at every point and index."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = points.shape[1]
    idx = multi_indices(n, m)
    jets = [{alpha: float(derivative(alpha, p)) for alpha in idx} for p in points]
    return WhitneyField(points, m, jets)


def jets_from_polynomial(coeffs: Dict[MultiIndex, float], points, m: int) -> WhitneyField:
    """Exact jets of the polynomial sum_gamma c_gamma x^gamma.

    D^alpha x^gamma = gamma! / (gamma - alpha)! x^(gamma - alpha) when
    alpha <= gamma componentwise, else 0; coefficients stay in integer-exact
    factorial arithmetic.
    """
    def derivative(alpha: MultiIndex, x: np.ndarray) -> float:
        total = 0.0
        for gamma, c in coeffs.items():
            if any(a > g for a, g in zip(alpha, gamma)):
                continue
            shifted = tuple(g - a for g, a in zip(gamma, alpha))
            scale = 1
            for g, s in zip(gamma, shifted):
                scale *= math.factorial(g) // math.factorial(s)
            total += c * scale * mi_power(x, shifted)
        return total

    return jets_from_derivatives(points, m, derivative)


def taylor_poly_eval(field: WhitneyField, base: int, alpha: MultiIndex, x) -> float:
    """Taylor value of f_alpha at x, expanded from the jets at point ``base``.

    Returns sum over |beta| <= m - |alpha| of f_{alpha+beta}(a) / beta! (x-a)^beta.
    """
    if not (0 <= base < field.k):
        raise IndexOutOfRange(f"base index {base} out of range")
    if mi_order(alpha) > field.order:
        raise IndexOutOfRange(f"|alpha| = {mi_order(alpha)} exceeds field order {field.order}")
    a = field.points[base]
    x = np.asarray(x, dtype=float).reshape(-1)
    table = field.jets[base]
    total = 0.0
    for beta in multi_indices(field.n, field.order - mi_order(alpha)):
        total += table[mi_add(alpha, beta)] / mi_factorial(beta) * mi_power(x - a, beta)
    return total


@dataclass(frozen=True)
class ResidualReport:
    """Per-(alpha, x, a) compatibility residuals and their maximum."""

    entries: Dict[Tuple[MultiIndex, int, int], float]
    summary_max: float

    def rows(self) -> list:
        return [(alpha, i, j, r) for (alpha, i, j), r in sorted(self.entries.items())]


def compatibility_residual(field: WhitneyField) -> ResidualReport:
    """Normalized Taylor-consistency defect over all ordered point pairs.

    For points x != a and each |alpha| <= m the entry is

        |f_alpha(x) - taylor_poly_eval(field, a, alpha, x)| / |x-a|^(m-|alpha|).

    Jets sampled from a polynomial of degree <= m give summary_max at
    rounding level.
    """
    if field.k < 2:
        raise TooFewPoints("need k >= 2 points")
    idx = multi_indices(field.n, field.order)
    entries: Dict[Tuple[MultiIndex, int, int], float] = {}
    summary = 0.0
    for i in range(field.k):          # evaluation point x
        for j in range(field.k):      # expansion point a
            if i == j:
                continue
            gap = float(np.linalg.norm(field.points[i] - field.points[j]))
            for alpha in idx:
                predicted = taylor_poly_eval(field, j, alpha, field.points[i])
                defect = abs(field.jets[i][alpha] - predicted)
                r = defect / gap ** (field.order - mi_order(alpha))
                entries[(alpha, i, j)] = r
                summary = max(summary, r)
    return ResidualReport(entries, summary)
