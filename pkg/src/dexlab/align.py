"""Rigid alignment of point sets and geometric degeneracy diagnostics.

``procrustes_align`` solves min_A sum_i |A(y_i) - z_i|^2 over Euclidean
motions A(x) = Mx + t: centroids are removed, the orthogonal factor comes
from the SVD of the cross-covariance, and the proper variant flips the sign
of the smallest singular direction (last SVD index, which also breaks ties).

``degeneracy_report`` measures how far a finite set is from the degenerate
configurations that break alignment guarantees: its diameter, the minimum
pairwise separation, and for each l the largest l-simplex volume V_l over
vertex subsets (Cayley-Menger determinant).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import CoincidentSourcePoints, EmptyInput, TooFewPoints
from .motions import EuclideanMotion


@dataclass(frozen=True)
class ProcrustesResult:
    motion: EuclideanMotion
    residual: float
    max_dev: float
    max_dev_over_diam: float


def procrustes_align(Y, Z, prefer_proper: bool = False) -> ProcrustesResult:
    """Best rigid motion taking Y onto Z in least squares.

    With ``prefer_proper`` the search is restricted to proper motions; for
    k <= d points this costs nothing because the centered configuration is
    rank deficient and the smallest singular direction is free to flip.

    Returns the motion together with residual = sqrt(sum |A(y_i) - z_i|^2),
    max_dev = max_i |A(y_i) - z_i| and max_dev / diam(Y).
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Y.size == 0 or Z.size == 0:
        raise EmptyInput("need at least one point in each set")
    if Y.shape != Z.shape:
        raise ValueError(f"point sets differ in shape: {Y.shape} vs {Z.shape}")
    k, d = Y.shape
    cy = Y.mean(axis=0)
    cz = Z.mean(axis=0)
    H = (Y - cy).T @ (Z - cz)
    U, _, Vt = np.linalg.svd(H)
    M = Vt.T @ U.T
    if prefer_proper and np.linalg.det(M) < 0:
        flip = np.ones(d)
        flip[-1] = -1.0
        M = Vt.T @ np.diag(flip) @ U.T
    t = cz - M @ cy
    motion = EuclideanMotion(M, t)
    dev = np.linalg.norm(motion.apply(Y) - Z, axis=1)
    residual = float(np.sqrt(np.sum(dev**2)))
    max_dev = float(np.max(dev))
    diam = float(np.max(pdist(Y))) if k >= 2 else 0.0
    if diam > 0:
        ratio = max_dev / diam
    else:
        ratio = 0.0 if max_dev == 0.0 else math.inf
    return ProcrustesResult(motion, residual, max_dev, ratio)


@dataclass(frozen=True)
class RatioCheck:
    passed: bool
    worst_lo: float
    worst_hi: float


def pairwise_ratio_check(Y, Z, c_prime: float) -> RatioCheck:
    """Do all pairwise ratios |z_i - z_j| / |y_i - y_j| lie in (1-c', 1+c']?"""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Y.shape != Z.shape:
        raise ValueError(f"point sets differ in shape: {Y.shape} vs {Z.shape}")
    if Y.shape[0] < 2:
        raise TooFewPoints("need k >= 2 points")
    den = pdist(Y)
    if np.min(den) == 0.0:
        raise CoincidentSourcePoints("coincident points in Y")
    ratios = pdist(Z) / den
    lo, hi = float(np.min(ratios)), float(np.max(ratios))
    passed = bool(lo > 1.0 - c_prime and hi <= 1.0 + c_prime)
    return RatioCheck(passed, lo, hi)


# ---------------------------------------------------------------------------
# simplex volumes and degeneracy


def simplex_volume(vertices) -> float:
    """l-dimensional volume of the simplex on l+1 vertices (Cayley-Menger).

    The determinant is clamped to zero when numerical noise drives the
    squared volume slightly negative (threshold -1e-12).
    """
    pts = np.atleast_2d(np.asarray(vertices, dtype=float))
    l = pts.shape[0] - 1
    if l == 0:
        return 0.0
    sq = squareform(pdist(pts) ** 2)
    B = np.ones((l + 2, l + 2))
    B[0, 0] = 0.0
    B[1:, 1:] = sq
    det = np.linalg.det(B)
    v2 = (-1.0) ** (l + 1) / (2.0**l * math.factorial(l) ** 2) * det
    if v2 < 0.0:
        v2 = 0.0
    return math.sqrt(v2)


def _max_simplex_volume_greedy(pts: np.ndarray, l: int) -> float:
    """Greedy seed plus local vertex swaps; a lower bound on max V_l."""
    k = pts.shape[0]
    dist = squareform(pdist(pts))
    i, j = np.unravel_index(np.argmax(dist), dist.shape)
    chosen = [int(i), int(j)]
    while len(chosen) < l + 1:
        best_v, best_idx = -1.0, -1
        for c in range(k):
            if c in chosen:
                continue
            v = simplex_volume(pts[chosen + [c]])
            if v > best_v:
                best_v, best_idx = v, c
        chosen.append(best_idx)
    best = simplex_volume(pts[chosen])
    improved = True
    while improved:
        improved = False
        for pos in range(len(chosen)):
            for c in range(k):
                if c in chosen:
                    continue
                trial = list(chosen)
                trial[pos] = c
                v = simplex_volume(pts[trial])
                if v > best * (1.0 + 1e-12):
                    chosen, best = trial, v
                    improved = True
    return best


@dataclass(frozen=True)
class DegeneracyReport:
    diameter: float
    min_separation: float
    simplex_volumes: tuple  # V_l for l = 1 .. min(k-1, d)
    exhaustive: bool

    def to_dict(self) -> dict:
        return {"diameter": self.diameter, "min_separation": self.min_separation,
                "simplex_volumes": list(self.simplex_volumes),
                "exhaustive": self.exhaustive}


EXHAUSTIVE_LIMIT = 12


def degeneracy_report(E) -> DegeneracyReport:
    """Diameter, minimum separation, and max simplex volumes V_l of a point set.

    V_l is exact (exhaustive over subsets) for k <= 12 points; beyond that a
    greedy search with local swaps reports a lower bound and the report is
    flagged ``exhaustive=False``.
    """
    pts = np.atleast_2d(np.asarray(E, dtype=float))
    k, d = pts.shape
    if k < 2:
        raise TooFewPoints("need k >= 2 points")
    dists = pdist(pts)
    diameter = float(np.max(dists))
    min_sep = float(np.min(dists))
    exhaustive = k <= EXHAUSTIVE_LIMIT
    volumes = []
    for l in range(1, min(k - 1, d) + 1):
        if l == 1:
            best = diameter  # V_1 is exactly the farthest pair distance
        elif exhaustive:
            best = max(simplex_volume(pts[list(combo)])
                       for combo in itertools.combinations(range(k), l + 1))
        else:
            best = _max_simplex_volume_greedy(pts, l)
        volumes.append(float(best))
    return DegeneracyReport(diameter, min_sep, tuple(volumes), exhaustive)
