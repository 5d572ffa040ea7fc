"""Distortion maps on R^d: slow twists, slides, motions, compositions.

A slow twist evaluates M^T T_x (M x) where T_x is block diagonal with 1x1
identity blocks and 2x2 rotation blocks whose angles are radial profiles
f_i(|x|); it preserves |x| exactly.  A slide adds a per-coordinate
displacement g_i(x_i).  A map is certified by sampling pairwise distance
ratios |F(x)-F(y)| / |x-y| over a seeded uniform sample in a box; the
certificate records the observed envelope [lo, hi].

The decay budgets that keep these maps near-isometric are

* twists:  sup_{t >= 0} t |f'(t)|  small,
* slides:  sup_{t >= 0} |g'(t)|    small,

and ``decay_check`` measures either supremum on a refined grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegenerateSample, DimensionMismatch, RatioTooSmall
from .motions import EuclideanMotion

_PROFILE_CHECK_TOL = 1e-6


def _vectorize_if_needed(fn: Callable) -> Callable:
    try:
        out = fn(np.array([0.5, 1.0]))
        np.asarray(out, dtype=float) + 0.0
        if np.shape(out) != (2,):
            raise TypeError
        return fn
    except Exception:
        return np.vectorize(fn, otypes=[float])


@dataclass(eq=False)
class AngleProfile:
    """A scalar profile t -> f(t) with an explicit derivative rule.

    Used both as the angle law of a twist block and as a per-coordinate slide
    displacement.  Consistency of ``f`` and ``df`` is verified at construction
    by central finite differences on a fixed grid (1e-6 relative).
    """

    f: Callable
    df: Callable
    family: str = "custom"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.f = _vectorize_if_needed(self.f)
        self.df = _vectorize_if_needed(self.df)
        self._check_consistency()

    def _check_consistency(self, t_max: float = 10.0, n: int = 61):
        # two offset grids: a probe straddling a C^1 knot of a piecewise
        # profile inflates one grid's error but not the other's
        errs = []
        for offset in (0.0007, 0.00041):
            t = np.linspace(0.013, t_max, n) + offset
            h = 1e-5 * (1.0 + t)
            fd = (self.f(t + h) - self.f(t - h)) / (2.0 * h)
            d = self.df(t)
            errs.append(np.max(np.abs(fd - d) / (1.0 + np.abs(d))))
        err = min(errs)
        if not np.isfinite(err) or err > _PROFILE_CHECK_TOL:
            raise ValueError(f"profile derivative rule inconsistent with f (error {err:.3e})")

    @classmethod
    def constant(cls, theta: float) -> "AngleProfile":
        return cls(lambda t: np.full_like(np.asarray(t, dtype=float), theta),
                   lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                   family="constant")

    @classmethod
    def exponential(cls, amplitude: float = 1.0, rate: float = 1.0) -> "AngleProfile":
        """f(t) = amplitude * exp(-rate * t)."""
        return cls(lambda t: amplitude * np.exp(-rate * np.asarray(t, dtype=float)),
                   lambda t: -amplitude * rate * np.exp(-rate * np.asarray(t, dtype=float)),
                   family="exponential")

    @classmethod
    def power(cls, amplitude: float = 1.0, exponent: float = 1.0) -> "AngleProfile":
        """f(t) = amplitude * t**exponent (a fast twist for exponent >= 1)."""
        def f(t):
            return amplitude * np.asarray(t, dtype=float) ** exponent

        def df(t):
            t = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = amplitude * exponent * t ** (exponent - 1.0)
            if exponent == 1.0:
                out = np.full_like(t, amplitude)
            return out

        return cls(f, df, family="power")


class DistortionMap:
    """Base class: a map R^d -> R^d applied to point arrays of shape (k, d)."""

    dim: int

    def apply(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return apply_map(self, points)


@dataclass(eq=False)
class Motion(DistortionMap):
    motion: EuclideanMotion

    @property
    def dim(self) -> int:
        return self.motion.dim

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.motion.apply(points)


@dataclass(eq=False)
class SlowTwist(DistortionMap):
    """M^T T_x (M x) with T_x block diagonal from radial angle profiles.

    ``blocks`` lists the diagonal layout: ``None`` is a 1x1 identity block, an
    :class:`AngleProfile` is the 2x2 rotation block
    [[cos f(|x|), sin f(|x|)], [-sin f(|x|), cos f(|x|)]].
    """

    dim: int
    base: EuclideanMotion
    blocks: Sequence[Optional[AngleProfile]]

    def __post_init__(self):
        sizes = sum(1 if b is None else 2 for b in self.blocks)
        if sizes != self.dim:
            raise ValueError(f"block sizes sum to {sizes}, expected {self.dim}")
        if self.base.dim != self.dim:
            raise ValueError("base rotation dimension mismatch")
        if not self.base.proper:
            raise ValueError("base rotation must be proper")
        if np.any(self.base.translation != 0.0):
            raise ValueError("base rotation must have zero translation")

    @classmethod
    def planar(cls, profile: AngleProfile, dim: int = 2,
               base: EuclideanMotion | None = None) -> "SlowTwist":
        """Twist acting in the leading coordinate plane, identity elsewhere."""
        blocks: list[Optional[AngleProfile]] = [profile] + [None] * (dim - 2)
        return cls(dim, base if base is not None else EuclideanMotion.identity(dim), blocks)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        y = pts @ self.base.matrix.T
        out = y.copy()
        offset = 0
        for block in self.blocks:
            if block is None:
                offset += 1
                continue
            ang = np.asarray(block.f(r), dtype=float)
            c, s = np.cos(ang), np.sin(ang)
            u, v = y[:, offset], y[:, offset + 1]
            out[:, offset] = c * u + s * v
            out[:, offset + 1] = -s * u + c * v
            offset += 2
        return out @ self.base.matrix


@dataclass(eq=False)
class Slide(DistortionMap):
    """x -> x + (g_1(x_1), ..., g_d(x_d)) with bounded |g_i'|.

    A sampled bound on each |g_i'| is recorded at construction.
    """

    profiles: Sequence[AngleProfile]
    derivative_bounds: tuple = field(init=False)

    def __post_init__(self):
        t = np.linspace(0.0, 20.0, 2001)
        bounds = []
        for g in self.profiles:
            d = np.abs(np.asarray(g.df(t), dtype=float))
            bounds.append(float(np.max(d)) if np.all(np.isfinite(d)) else math.inf)
        self.derivative_bounds = tuple(bounds)

    @property
    def dim(self) -> int:
        return len(self.profiles)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = pts.copy()
        for i, g in enumerate(self.profiles):
            out[:, i] = pts[:, i] + np.asarray(g.f(pts[:, i]), dtype=float)
        return out


@dataclass(eq=False)
class Composition(DistortionMap):
    """Applies its component maps left to right in list order."""

    maps: Sequence[DistortionMap]

    def __post_init__(self):
        if len(self.maps) == 0:
            raise ValueError("composition requires at least one map")
        dims = {m.dim for m in self.maps}
        if len(dims) != 1:
            raise ValueError(f"component dimensions differ: {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    def apply(self, points: np.ndarray) -> np.ndarray:
        out = np.atleast_2d(np.asarray(points, dtype=float))
        for m in self.maps:
            out = m.apply(out)
        return out


def apply_map(dmap: DistortionMap, points) -> np.ndarray:
    """Apply a distortion map to points of shape (k, d) (or a single point)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != dmap.dim:
        raise DimensionMismatch(f"points have dimension {pts.shape[1]}, map expects {dmap.dim}")
    out = dmap.apply(pts)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# decay budgets


def _refined_sup(fn: Callable, lo: float, hi: float,
                 coarse: int = 2001, rounds: int = 4, fine: int = 129) -> float:
    """Sup of fn on [lo, hi]: coarse grid plus local refinement at top maxima."""
    t = np.linspace(lo, hi, coarse)
    v = np.asarray(fn(t), dtype=float)
    if not np.all(np.isfinite(v)):
        return math.inf
    # refine around the five best coarse points
    order = np.argsort(v)[::-1][:5]
    best = float(np.max(v))
    span = (hi - lo) / (coarse - 1)
    for idx in order:
        center, width = float(t[idx]), span
        for _ in range(rounds):
            tt = np.clip(np.linspace(center - width, center + width, fine), lo, hi)
            vv = np.asarray(fn(tt), dtype=float)
            if not np.all(np.isfinite(vv)):
                return math.inf
            j = int(np.argmax(vv))
            center = float(tt[j])
            best = max(best, float(vv[j]))
            width = 2.0 * width / (fine - 1)
    return best


def decay_check(profile, domain_max: float, threshold: float):
    """Measure the decay budget of a twist profile or a slide on [0, domain_max].

    For an :class:`AngleProfile` the supremum of t |f'(t)| is returned; for a
    :class:`Slide` the largest per-coordinate sup of |g'(t)|.  Returns
    ``(sup_value, passed)`` with ``passed = sup_value < threshold``; a profile
    with a non-finite derivative reports ``(inf, False)``.
    """
    if domain_max <= 0:
        raise ValueError("domain_max must be positive")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if isinstance(profile, Slide):
        sups = [_refined_sup(lambda t, g=g: np.abs(np.asarray(g.df(t), dtype=float)),
                             0.0, domain_max)
                for g in profile.profiles]
        sup = max(sups)
    elif isinstance(profile, AngleProfile):
        # start just off 0 so an integrable derivative singularity does not
        # turn the finite budget t|f'(t)| into 0 * inf = nan
        sup = _refined_sup(lambda t: t * np.abs(np.asarray(profile.df(t), dtype=float)),
                           domain_max * 1e-12, domain_max)
    else:
        raise TypeError("decay_check expects an AngleProfile or a Slide")
    return sup, bool(sup < threshold)


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class BoxSampler:
    """Uniform sampler of ``count`` points in the box [low, high]^d."""

    low: tuple
    high: tuple
    count: int
    seed: int

    @classmethod
    def centered(cls, half_width: float, dim: int, count: int, seed: int) -> "BoxSampler":
        return cls((-half_width,) * dim, (half_width,) * dim, count, seed)

    @property
    def dim(self) -> int:
        return len(self.low)

    def draw(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        lo = np.asarray(self.low, dtype=float)
        hi = np.asarray(self.high, dtype=float)
        for _ in range(4):  # initial draw plus up to 3 resamples
            pts = rng.uniform(lo, hi, size=(self.count, self.dim))
            if self.count < 2 or np.min(pdist(pts)) > 0.0:
                return pts
        raise DegenerateSample("sampled points coincide after 3 resamples")


@dataclass(frozen=True)
class DistortionCertificate:
    """Observed pairwise-ratio envelope of a map over a seeded sample."""

    lo: float
    hi: float
    k: int
    pairs: int
    seed: int

    def __post_init__(self):
        if not (0.0 < self.lo <= self.hi):
            raise ValueError("certificate requires 0 < lo <= hi")

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "k": self.k,
                "pairs": self.pairs, "seed": self.seed}


def ratio_extremes(dmap: DistortionMap, points: np.ndarray) -> tuple[float, float]:
    """Min and max of |F(x)-F(y)| / |x-y| over all point pairs."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 2:
        raise DegenerateSample("need at least 2 points")
    den = pdist(pts)
    if np.min(den) == 0.0:
        raise DegenerateSample("coincident points in sample")
    num = pdist(apply_map(dmap, pts))
    ratios = num / den
    return float(np.min(ratios)), float(np.max(ratios))


def distortion_certificate(dmap: DistortionMap, sampler: BoxSampler) -> DistortionCertificate:
    """Certify a map on k seeded uniform points; deterministic given the seed."""
    if sampler.count < 2:
        raise ValueError("need k >= 2 sample points")
    if sampler.dim != dmap.dim:
        raise DimensionMismatch(f"sampler dimension {sampler.dim} != map dimension {dmap.dim}")
    pts = sampler.draw()
    lo, hi = ratio_extremes(dmap, pts)
    k = sampler.count
    return DistortionCertificate(lo=lo, hi=hi, k=k, pairs=k * (k - 1) // 2, seed=sampler.seed)


# ---------------------------------------------------------------------------
# constructive transition twist


def build_transition_twist(theta: float, c1: float, c2: float, epsilon: float) -> SlowTwist:
    """Planar twist equal to rotation by theta inside |x| <= c1, identity outside |x| >= c2.

    The angle decays log-linearly between the radii, so t |f'(t)| is constant
    there; the two corners are rounded C^1 in log-radius over bands of width
    min(1%, L/22) which keeps the supremum within 10% of |theta|/L where
    L = ln(c2/c1).

    Raises:
        RatioTooSmall: when |theta|/ln(c2/c1) > epsilon/2, i.e. the radius
            ratio is below exp(2|theta|/epsilon).
    """
    if not (0.0 < c1 < c2):
        raise ValueError("require 0 < c1 < c2")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    big_l = math.log(c2 / c1)
    if abs(theta) / big_l > epsilon / 2.0:
        required = math.exp(2.0 * abs(theta) / epsilon)
        raise RatioTooSmall(
            f"c2/c1 = {c2 / c1:.6g} below required ratio exp(2|theta|/eps) = {required:.6g}")

    h = min(math.log(1.01), big_l / 22.0)
    tau1, tau2 = math.log(c1), math.log(c2)
    slope = -theta / (big_l - 2.0 * h)  # angle slope per unit log-radius

    def f(t):
        t = np.asarray(t, dtype=float)
        tau = np.log(np.maximum(t, 1e-300))
        inner = theta + slope * (tau - (tau1 + h))
        band1 = theta + (slope / (4.0 * h)) * (tau - tau1) ** 2
        band2 = -(slope / (4.0 * h)) * (tau - tau2) ** 2
        mid = np.where(tau < tau1 + 2.0 * h, band1,
                       np.where(tau > tau2 - 2.0 * h, band2, inner))
        return np.where(tau <= tau1, theta, np.where(tau >= tau2, 0.0, mid))

    def df(t):
        t = np.asarray(t, dtype=float)
        tau = np.log(np.maximum(t, 1e-300))
        band1 = slope * (tau - tau1) / (2.0 * h)
        band2 = -slope * (tau - tau2) / (2.0 * h)
        mid = np.where(tau < tau1 + 2.0 * h, band1,
                       np.where(tau > tau2 - 2.0 * h, band2, slope))
        dtau = np.where((tau <= tau1) | (tau >= tau2), 0.0, mid)
        with np.errstate(divide="ignore"):
            out = dtau / np.maximum(t, 1e-300)
        return np.where(t > 0, out, 0.0)

    sup_bound = abs(theta) / (big_l - 2.0 * h)
    profile = AngleProfile(
        f, df, family="log-transition",
        meta={"theta": theta, "c1": c1, "c2": c2, "epsilon": epsilon,
              "sup_bound": sup_bound,
              "required_ratio": math.exp(2.0 * abs(theta) / epsilon)})
    return SlowTwist.planar(profile, dim=2)
