import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dexlab import (AngleProfile, BoxSampler, Composition, EuclideanMotion, Motion,
                    Slide, SlowTwist, apply_map, build_transition_twist, decay_check,
                    distortion_certificate, ratio_extremes)
from dexlab.errors import DegenerateSample, DimensionMismatch, RatioTooSmall


def _slide_example():
    """The asymmetric planar slide (1/(1+t^2), e^{-|t|}/2)."""
    g1 = AngleProfile(lambda t: 1.0 / (1.0 + t**2),
                      lambda t: -2.0 * t / (1.0 + t**2) ** 2)
    g2 = AngleProfile(lambda t: 0.5 * np.exp(-np.abs(t)),
                      lambda t: -0.5 * np.sign(t) * np.exp(-np.abs(t)))
    return Slide([g1, g2])


def test_zero_slide_is_identity(rng):
    zero = Slide([AngleProfile.constant(0.0)] * 3)
    pts = rng.uniform(-5, 5, size=(40, 3))
    assert np.array_equal(apply_map(zero, pts), pts)


def test_slide_matches_direct_arithmetic():
    t = np.linspace(-4.0, 4.0, 17)
    pts = np.stack([t, -t], axis=1)  # grid on the line y = -x
    moved = apply_map(_slide_example(), pts)
    expected = pts + np.stack([1.0 / (1.0 + t**2), 0.5 * np.exp(-np.abs(-t))], axis=1)
    assert np.array_equal(moved, expected)


@settings(deadline=None, max_examples=30)
@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(0.001, 0.5))
def test_slow_twist_preserves_norm(x, y, amp):
    twist = SlowTwist.planar(AngleProfile.exponential(amp, 1.0))
    p = np.array([x, y])
    q = apply_map(twist, p)
    assert abs(np.linalg.norm(q) - np.linalg.norm(p)) <= 1e-12 * (1.0 + np.linalg.norm(p))


def test_slow_twist_with_base_rotation_preserves_norm(rng):
    base = EuclideanMotion.random(3, rng, proper=True)
    base = EuclideanMotion(base.matrix, np.zeros(3))
    twist = SlowTwist(3, base, [None, AngleProfile.exponential(0.3, 0.5)])
    pts = rng.uniform(-8, 8, size=(50, 3))
    out = apply_map(twist, pts)
    r_in, r_out = np.linalg.norm(pts, axis=1), np.linalg.norm(out, axis=1)
    assert np.max(np.abs(r_in - r_out) / (1.0 + r_in)) <= 1e-12


def test_dimension_mismatch():
    twist = SlowTwist.planar(AngleProfile.constant(0.2))
    with pytest.raises(DimensionMismatch):
        apply_map(twist, np.zeros((4, 3)))


def test_composition_applies_left_to_right():
    slide = _slide_example()
    twist = SlowTwist.planar(AngleProfile.exponential(0.2, 1.0))
    pts = np.array([[1.0, 2.0], [-0.5, 0.25]])
    combo = Composition([twist, slide])
    assert np.array_equal(apply_map(combo, pts), apply_map(slide, apply_map(twist, pts)))


def test_profile_derivative_consistency_enforced():
    with pytest.raises(ValueError):
        AngleProfile(lambda t: np.exp(-t), lambda t: np.exp(-t))  # sign error


# ---------------------------------------------------------------------------
# decay checks


def test_decay_constant_profile():
    sup, ok = decay_check(AngleProfile.constant(0.7), 50.0, 1e-9)
    assert sup == 0.0 and ok


def test_decay_fast_twist_unbounded():
    sup, ok = decay_check(AngleProfile.power(1.0, 1.0), 7.0, 0.1)
    assert not ok
    assert abs(sup - 7.0) <= 1e-6  # t|f'| = t, sup at domain_max


def test_decay_exponential_maximum():
    # calculus oracle: max of t e^{-t} is 1/e at t = 1
    sup, ok = decay_check(AngleProfile.exponential(1.0, 1.0), 10.0, 0.5)
    assert abs(sup - 1.0 / math.e) <= 1e-6
    assert ok


def test_decay_slide_uses_plain_derivative():
    sup, _ = decay_check(_slide_example(), 10.0, 1.0)
    # oracle: max |g1'| = 3 sqrt(3) / 8 at t = 1/sqrt(3); max |g2'| = 1/2 at 0
    assert abs(sup - max(3.0 * math.sqrt(3.0) / 8.0, 0.5)) <= 1e-6


def test_decay_nonfinite_derivative_fails():
    def bad_df(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return 0.5 * np.sign(t) / np.sqrt(np.abs(t))

    bad = AngleProfile(lambda t: np.sqrt(np.abs(t)), bad_df)
    sup, ok = decay_check(Slide([bad, bad]), 5.0, 10.0)
    assert math.isinf(sup) and not ok


# ---------------------------------------------------------------------------
# certificates


def test_identity_certificate_exact():
    cert = distortion_certificate(Motion(EuclideanMotion.identity(2)),
                                  BoxSampler.centered(5.0, 2, 60, seed=1))
    assert cert.lo == 1.0 and cert.hi == 1.0
    assert cert.pairs == 60 * 59 // 2


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_euclidean_motion_certifies_rigid(seed):
    motion = EuclideanMotion.random(3, np.random.default_rng(seed + 100), proper=bool(seed % 2))
    cert = distortion_certificate(Motion(motion), BoxSampler.centered(4.0, 3, 80, seed=seed))
    assert 1.0 - 1e-12 <= cert.lo <= cert.hi <= 1.0 + 1e-12


def test_slow_twist_certificate_envelope():
    # dense-sample oracle (k = 2000, same box) gives [0.99818, 1.00180];
    # the k = 200 certificate must sit inside the slightly padded envelope
    twist = SlowTwist.planar(AngleProfile.exponential(0.01, 1.0))
    cert = distortion_certificate(twist, BoxSampler.centered(10.0, 2, 200, seed=0))
    assert 0.95 <= cert.lo <= cert.hi <= 1.05
    assert 0.995 <= cert.lo <= cert.hi <= 1.005
    assert cert.seed == 0 and cert.k == 200


def test_certificate_monotone_in_profile_scale():
    pts = BoxSampler.centered(10.0, 2, 300, seed=7).draw()
    widths = []
    for s in (1.0, 0.75, 0.5, 0.25):
        twist = SlowTwist.planar(AngleProfile.exponential(0.05 * s, 1.0))
        lo, hi = ratio_extremes(twist, pts)
        widths.append(hi - lo)
    assert all(widths[i + 1] <= widths[i] for i in range(len(widths) - 1))


def test_certificate_composition_bound():
    g = SlowTwist.planar(AngleProfile.exponential(0.05, 1.0))
    h = _slide_example()
    pts = BoxSampler.centered(6.0, 2, 150, seed=11).draw()
    lo_g, hi_g = ratio_extremes(g, pts)
    lo_h, hi_h = ratio_extremes(h, apply_map(g, pts))
    lo_c, hi_c = ratio_extremes(Composition([g, h]), pts)
    assert lo_c >= lo_g * lo_h - 1e-9
    assert hi_c <= hi_g * hi_h + 1e-9


def test_degenerate_sampler_errors():
    with pytest.raises(DegenerateSample):
        distortion_certificate(Motion(EuclideanMotion.identity(2)),
                               BoxSampler((0.0, 0.0), (0.0, 0.0), 5, seed=0))


def test_certificate_json_fields():
    cert = distortion_certificate(Motion(EuclideanMotion.identity(2)),
                                  BoxSampler.centered(1.0, 2, 10, seed=3))
    assert cert.to_dict() == {"lo": 1.0, "hi": 1.0, "k": 10, "pairs": 45, "seed": 3}


# ---------------------------------------------------------------------------
# transition twist


def test_transition_zero_angle_valid():
    twist = build_transition_twist(0.0, 0.5, 0.6, 1e-6)
    pts = np.array([[0.1, 0.2], [3.0, -4.0]])
    assert np.allclose(apply_map(twist, pts), pts, atol=1e-15)


def test_transition_minimal_ratio_boundary():
    # sup t|f'| = |theta| / ln(c2/c1), so theta=0.1, eps=0.1, c1=1 admits
    # exactly c2 >= e^2
    e2 = math.exp(2.0)
    build_transition_twist(0.1, 1.0, e2 + 1e-3, 0.1)
    with pytest.raises(RatioTooSmall):
        build_transition_twist(0.1, 1.0, e2 - 1e-3, 0.1)


def test_transition_large_angle_needs_huge_ratio():
    with pytest.raises(RatioTooSmall):
        build_transition_twist(math.pi / 2, 1.0, 10.0, 0.1)


def test_transition_profile_structure_and_budget():
    theta, c1, c2, eps = 0.1, 1.0, 8.0, 0.1
    twist = build_transition_twist(theta, c1, c2, eps)
    prof = twist.blocks[0]
    # exact plateau and tail
    assert float(prof.f(0.0)) == theta
    assert float(prof.f(c1)) == theta
    assert float(prof.f(c2)) == 0.0
    assert float(prof.f(2 * c2)) == 0.0
    # numeric-maximization oracle of the log-profile budget
    sup, ok = decay_check(prof, 2.0 * c2, eps)
    assert ok
    base = abs(theta) / math.log(c2 / c1)
    assert sup <= base * 1.1
    assert sup >= base * 0.99  # the budget is genuinely attained mid-profile


def test_transition_certificate_recorded_envelope():
    # recorded empirical envelope on [-2 c2, 2 c2]^2: eps' = 0.03
    twist = build_transition_twist(0.1, 1.0, 8.0, 0.1)
    cert = distortion_certificate(twist, BoxSampler.centered(16.0, 2, 400, seed=0))
    assert 1.0 - 0.03 <= cert.lo <= cert.hi <= 1.0 + 0.03


def test_transition_rotates_inside_core():
    theta = 0.1
    twist = build_transition_twist(theta, 1.0, 8.0, 0.1)
    p = np.array([0.5, 0.0])
    q = apply_map(twist, p)
    # T_x convention rotates by -theta in standard orientation
    expected = np.array([0.5 * math.cos(theta), -0.5 * math.sin(theta)])
    assert np.allclose(q, expected, atol=1e-15)
