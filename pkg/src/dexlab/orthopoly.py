"""Recurrence coefficients and Gauss rules for d-alpha = w(x)^2 dx.

Orthonormal polynomials for an even measure satisfy the two-term-coefficient
recurrence

    x p_n(x) = alpha_n p_{n+1}(x) + alpha_{n-1} p_{n-1}(x),
    p_{-1} = 0,  p_0 = (integral of d-alpha)^(-1/2),

with all diagonal terms vanishing by symmetry.  Coefficients are generated by
the discretized Stieltjes procedure: the measure is replaced by a high-order
quadrature on [-r, r] (r = 1.5 * a_{2N+4}, the scaled extremal-support
endpoint, beyond which weighted polynomials of the relevant degree are
negligible) and the recurrence is run on the discrete inner products.  Node
counts double until the orthonormality residual, measured against an
independently doubled rule, meets the requested tolerance.

Raw Gram-Schmidt on monomial moments is avoided on purpose: those moments are
catastrophically ill-conditioned past degree ~10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_legendre

from .errors import DegreeOutOfRange, NoConvergence
from .weights import WeightSpec

MIN_TOL = 1e-12
MAX_DOUBLINGS = 6


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights approximating integration against a measure."""

    nodes: np.ndarray
    weights: np.ndarray
    measure: str

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if np.any(weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        if nodes.size > 1 and np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, fn: Callable) -> float:
        return float(np.sum(self.weights * np.asarray(fn(self.nodes), dtype=float)))


@dataclass(frozen=True, eq=False)
class RecurrenceTable:
    """alpha_0..alpha_N for a weight, plus quadrature provenance.

    ``residual`` is the achieved orthonormality defect
    max_{i,j <= N} |integral p_i p_j d-alpha - delta_ij| on a doubled rule.
    """

    weight: WeightSpec
    N: int
    p0: float
    alphas: np.ndarray
    residual: float
    nodes_used: int
    radius: float

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float)
        if alphas.shape != (self.N + 1,):
            raise ValueError(f"expected {self.N + 1} coefficients, got {alphas.shape}")
        if np.any(alphas <= 0.0):
            raise ValueError("recurrence coefficients must be positive")
        alphas.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)

    def to_dict(self) -> dict:
        return {
            "beta": self.weight.beta,
            "N": self.N,
            "p0": self.p0,
            "alphas": self.alphas.tolist(),
            "residual": self.residual,
            "nodes_used": self.nodes_used,
            "radius": self.radius,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RecurrenceTable":
        return cls(WeightSpec.power(d["beta"]), int(d["N"]), float(d["p0"]),
                   np.asarray(d["alphas"], dtype=float), float(d["residual"]),
                   int(d["nodes_used"]), float(d["radius"]))


def _discretized_measure(weight: WeightSpec, radius: float, half_nodes: int):
    """Quadrature for w(x)^2 dx on [-r, r], symmetric under negation.

    Gauss-Legendre in t with x = t^2 per half line: the substitution lifts the
    |x|^beta kink at the origin to t^(2 beta), restoring fast convergence for
    non-integer beta.
    """
    t, wt = roots_legendre(half_nodes)
    t = 0.5 * (t + 1.0) * np.sqrt(radius)
    wt = wt * 0.5 * np.sqrt(radius)
    x_half = t**2
    w_half = wt * 2.0 * t * weight.w2(x_half)
    x = np.concatenate([-x_half[::-1], x_half])
    w = np.concatenate([w_half[::-1], w_half])
    return x, w


def _stieltjes(x: np.ndarray, w: np.ndarray, N: int):
    """Run the Stieltjes recurrence on a discrete measure; returns (alphas, p0, max_diag)."""
    mu0 = float(np.sum(w))
    p0 = 1.0 / np.sqrt(mu0)
    p_prev = np.zeros_like(x)
    p_cur = np.full_like(x, p0)
    alphas = np.empty(N + 1)
    b_prev = 0.0
    max_diag = 0.0
    for n in range(N + 1):
        max_diag = max(max_diag, abs(float(np.sum(w * x * p_cur**2))))
        q = x * p_cur - b_prev * p_prev
        b_next = float(np.sqrt(np.sum(w * q**2)))
        alphas[n] = b_next
        p_prev, p_cur = p_cur, q / b_next
        b_prev = b_next
    return alphas, p0, max_diag


def _eval_all_on(alphas: np.ndarray, p0: float, n_max: int, x: np.ndarray) -> np.ndarray:
    """p_0..p_{n_max} at the given abscissas, shape (n_max + 1, len(x))."""
    out = np.empty((n_max + 1, x.size))
    p_prev = np.zeros_like(x)
    p_cur = np.full_like(x, p0)
    out[0] = p_cur
    for n in range(n_max):
        b_prev = alphas[n - 1] if n > 0 else 0.0
        p_next = (x * p_cur - b_prev * p_prev) / alphas[n]
        out[n + 1] = p_next
        p_prev, p_cur = p_cur, p_next
    return out


def recurrence_coefficients(weight: WeightSpec, N: int, tol: float = 1e-10) -> RecurrenceTable:
    """Compute alpha_0..alpha_N for the built-in power weight family.

    Args:
        weight: a power weight (``WeightSpec.power``); arbitrary weights are
            accepted by the admissibility report but not here, because the
            truncation radius relies on the extremal-support numbers a_u.
        N: highest coefficient index.
        tol: orthonormality tolerance, at least 1e-12.

    Raises:
        NoConvergence: if the residual stays above tol after 6 node doublings.
    """
    if weight.beta is None:
        raise ValueError("recurrence generation requires the power weight family")
    if N < 0:
        raise ValueError("N must be non-negative")
    if tol < MIN_TOL:
        raise ValueError(f"tol must be at least {MIN_TOL}")
    from .mrs import mrs_number  # deferred: mrs imports this module for tables

    radius = 1.5 * mrs_number(weight, 2.0 * N + 4.0, tol=1e-12)
    half_nodes = max(128, 2 * (N + 2))
    last_residual = np.inf
    for _ in range(MAX_DOUBLINGS + 1):
        x, w = _discretized_measure(weight, radius, half_nodes)
        alphas, p0, max_diag = _stieltjes(x, w, N)
        # independent check on a doubled rule
        x2, w2 = _discretized_measure(weight, radius, 2 * half_nodes)
        P = _eval_all_on(alphas, p0, N, x2)
        gram = (P * w2) @ P.T
        residual = float(np.max(np.abs(gram - np.eye(N + 1))))
        if residual <= tol and max_diag <= tol:
            return RecurrenceTable(weight, N, p0, alphas, residual,
                                   nodes_used=2 * half_nodes, radius=radius)
        last_residual = residual
        half_nodes *= 2
    raise NoConvergence(f"orthonormality residual {last_residual:.3e} above {tol:.1e} "
                        f"after {MAX_DOUBLINGS} doublings")


def eval_orthopoly(table: RecurrenceTable, n: int, x):
    """p_n(x) by the forward recurrence; x may be a scalar or an array."""
    if n < 0 or n > table.N:
        raise DegreeOutOfRange(f"degree {n} outside table range 0..{table.N}")
    arr = np.asarray(x, dtype=float)
    vals = _eval_all_on(table.alphas, table.p0, n, np.atleast_1d(arr).ravel())[n]
    if arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(arr.shape)


def eval_orthopoly_all(table: RecurrenceTable, n_max: int, x: np.ndarray) -> np.ndarray:
    """Stacked values p_0..p_{n_max} on an array of abscissas."""
    if n_max < 0 or n_max > table.N:
        raise DegreeOutOfRange(f"degree {n_max} outside table range 0..{table.N}")
    return _eval_all_on(table.alphas, table.p0, n_max, np.asarray(x, dtype=float))


def _gauss_rule(alphas: np.ndarray, p0: float, N: int, measure: str) -> QuadratureRule:
    mu0 = 1.0 / p0**2
    if N == 1:
        return QuadratureRule(np.zeros(1), np.array([mu0]), measure=measure)
    diag = np.zeros(N)
    off = np.asarray(alphas[: N - 1], dtype=float)
    nodes, vectors = eigh_tridiagonal(diag, off)
    weights = mu0 * vectors[0, :] ** 2
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]
    # extreme-node Christoffel weights underflow double precision for fast
    # decaying measures; dropping them changes no representable integral
    keep = weights > 0.0
    return QuadratureRule(nodes[keep], weights[keep], measure=measure)


def gauss_from_recurrence(table: RecurrenceTable, N: int) -> QuadratureRule:
    """N-point Gauss rule for d-alpha from the symmetric tridiagonal matrix.

    Nodes are the eigenvalues of the N x N Jacobi matrix (zero diagonal,
    off-diagonal alpha_0..alpha_{N-2}); the weight of node i is
    mu_0 v_{0,i}^2 with v the normalized eigenvector and mu_0 the measure
    mass.  Exact for polynomials of degree <= 2N - 1.
    """
    if N < 1 or N > table.N:
        raise DegreeOutOfRange(f"node count {N} outside range 1..{table.N}")
    return _gauss_rule(table.alphas, table.p0, N, measure=f"w2:{table.weight.label}")
