import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from cribcoop.errors import BadBits, EmptyGrid, NonPositiveParameter, SampleCountTooSmall
from cribcoop.gaussian import (
    GaussianConfig,
    cond_z_entropy,
    draw,
    gaussian_sweep,
    inner_bound,
    lloyd_max_quantizer,
    log_tn2_conv,
    log_tn_conv,
    make_quantizer,
    mc_region_point,
    mi_additive_gaussian,
    mi_binned,
    mi_ksg,
    outer_bound,
    outer_bound_point,
    output_log_density,
    sample_truncated,
)

HALF_LOG3 = 0.5 * math.log2(3)


def tn_pdf(x, lo, hi, sd):
    return stats.truncnorm.pdf(x, lo / sd, hi / sd, scale=sd)


def test_inner_bound_values():
    b = inner_bound(1.0, 1.0, 0.5)
    assert np.allclose(b.rhs, [HALF_LOG3, HALF_LOG3, 0.5 * math.log2(5)], atol=1e-15)


def test_outer_bound_corners():
    full = outer_bound_point(1.0, 1.0, 0.5, 1.0)
    assert full.by_label("R2").rhs == 0.0
    assert full.by_label("R1+R2").rhs == pytest.approx(0.5 * math.log2(9))
    front = outer_bound(1.0, 1.0, 0.5, np.linspace(0, 1, 51))
    assert front.max_sum_rate() == pytest.approx(0.5 * math.log2(9), abs=1e-12)
    inner = inner_bound(1.0, 1.0, 0.5)
    for v in [(HALF_LOG3, 0.5 * math.log2(5) - HALF_LOG3), (0, HALF_LOG3)]:
        assert inner.contains({"r1": v[0], "r2": v[1]}, tol=1e-12)
        assert front.contains(v)
    with pytest.raises(EmptyGrid):
        outer_bound(1, 1, 0.5, [])


def test_quantizers():
    assert np.array_equal(make_quantizer(1).thresholds, [0.0])
    q = make_quantizer(2, spread=4, sigma=2)
    assert q.levels == 4 and np.allclose(q.thresholds, [-8, 0, 8])
    assert np.array_equal(q(np.array([-9.0, -1.0, 1.0, 9.0])), [0, 1, 2, 3])
    # classic optimal 2-bit Gaussian quantizer thresholds are 0, +-0.9816 sigma
    lm = lloyd_max_quantizer(2, sigma=1.0)
    assert np.allclose(lm.thresholds, [-0.9816, 0.0, 0.9816], atol=1e-4)
    assert np.array_equal(lloyd_max_quantizer(1).thresholds, [0.0])
    with pytest.raises(BadBits):
        make_quantizer(0)
    with pytest.raises(BadBits):
        GaussianConfig(quant_bits=1.5)


@pytest.mark.parametrize("lo,hi", [(-np.inf, 0.0), (0.0, np.inf), (-0.5, 1.2), (2.0, 6.0),
                                   (-7.0, -3.0)])
def test_truncated_convolution_density_matches_quadrature(lo, hi):
    s1, v = 1.3, 0.5
    sd = math.sqrt(s1)
    for y in (-2.0, 0.3, 4.0):
        ref, _ = integrate.quad(lambda x: tn_pdf(x, lo, hi, sd) * stats.norm.pdf(y - x, scale=math.sqrt(v)),
                                max(lo, -12 * sd), min(hi, 12 * sd), epsabs=0, epsrel=1e-13)
        got = log_tn_conv(np.array([y]), np.array([lo]), np.array([hi]), s1, v)[0]
        assert got == pytest.approx(math.log(ref), abs=1e-9)


@pytest.mark.parametrize("lo,hi", [(-np.inf, 0.0), (0.0, np.inf), (-0.5, 1.2), (1.5, 4.0),
                                   (3.0, np.inf), (-np.inf, np.inf)])
def test_two_fold_truncated_convolution_matches_quadrature(lo, hi):
    s1, v = 1.0, 0.5
    sd = 1.0
    lo_a, hi_a = np.array([lo]), np.array([hi])
    for y in (-3.0, -1.0, 0.5, 3.0, 6.0):
        def inner(x):
            return tn_pdf(x, lo, hi, sd) * math.exp(
                log_tn_conv(np.array([y - x]), lo_a, hi_a, s1, v)[0])
        ref, _ = integrate.quad(inner, max(lo, -14), min(hi, 14), epsabs=0, epsrel=1e-13,
                                limit=400)
        got = log_tn2_conv(np.array([y]), lo_a, hi_a, s1, v)[0]
        assert got == pytest.approx(math.log(ref), abs=1e-9)


def test_truncated_sampler_matches_distribution():
    rng = np.random.default_rng(0)
    for lo, hi in [(-np.inf, 0.0), (0.5, np.inf), (3.0, 5.0), (-1.0, 1.0)]:
        x = sample_truncated(rng, np.full(20000, lo), np.full(20000, hi), 1.5)
        assert x.min() >= lo and x.max() <= hi
        ks = stats.kstest(x, stats.truncnorm(lo / 1.5, hi / 1.5, scale=1.5).cdf)
        assert ks.pvalue > 1e-3


def test_output_density_of_gaussian_samples():
    rng = np.random.default_rng(1)
    s = rng.standard_normal(400_000)
    pts = np.linspace(-3, 3, 13)
    got = output_log_density(s, 0.5, pts)
    ref = stats.norm.logpdf(pts, scale=math.sqrt(1.5))
    assert np.abs(got - ref).max() < 0.02


def test_awgn_mutual_information_estimators():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(200_000)
    est = mi_additive_gaussian(x, 0.5, rng)
    assert abs(est.value - HALF_LOG3) <= 3 * est.std_error
    y = x[:20000] + math.sqrt(0.5) * rng.standard_normal(20000)
    assert mi_ksg(x[:20000], y) == pytest.approx(HALF_LOG3, abs=0.03)
    assert mi_binned(x[:20000], y, bins=32) == pytest.approx(HALF_LOG3, abs=0.1)


def test_symmetric_one_bit_crib_entropy():
    cfg = GaussianConfig(beta1=1.0, beta2=1.0, quant_bits=1)
    h = cond_z_entropy(cfg, np.zeros(10))
    assert np.allclose(h, 1.0, atol=1e-15)
    assert np.allclose(cond_z_entropy(replace(cfg, quant_bits=0), np.zeros(3)), 0.0)


def test_construction_respects_powers():
    cfg = GaussianConfig(beta1=0.5, beta2=0.75, rho=0.0, samples=1000)
    s = draw(cfg, np.random.default_rng(3), 400_000)
    assert np.var(s.x1) == pytest.approx(cfg.p1, rel=0.02)
    assert np.var(s.x2) == pytest.approx(cfg.x2_power, rel=0.02)
    # with rho = 1 the second input copies encoder 1's private part within its cell
    cfg = GaussianConfig(beta1=1.0, beta2=1.0, rho=1.0, samples=1000)
    s = draw(cfg, np.random.default_rng(4), 100_000)
    assert np.all(np.sign(s.x2p) == np.sign(s.x1p))


def test_power_violations_are_skipped():
    base = GaussianConfig(samples=2000)
    assert not replace(base, beta1=1.0, beta2=0.5, rho=0.5).power_ok
    assert replace(base, beta1=0.5, beta2=1.0, rho=1.0).power_ok
    sweep = gaussian_sweep(base, [1.0], [0.5, 1.0], [0.0, 1.0])
    assert (1.0, 0.5, 1.0) in sweep.skipped
    assert len(sweep.points) == 3


def test_cooperation_free_point_reproduces_inner_bound():
    cfg = GaussianConfig(quant_bits=0, c12=0.0, rho=0.0, beta1=1.0, beta2=1.0, samples=50_000)
    pt = mc_region_point(cfg)
    ref = dict(zip(["R1", "R2", "R1+R2:coop", "R1+R2:mac"],
                   [HALF_LOG3, HALF_LOG3, 0.5 * math.log2(5), 0.5 * math.log2(5)]))
    for k, est in pt.estimates.items():
        assert abs(est.value - ref[k]) <= 3 * est.std_error + 1e-12, k


def test_link_shifts_only_the_link_bounds():
    cfg = GaussianConfig(quant_bits=1, samples=5000, seed=3)
    a = mc_region_point(cfg)
    b = mc_region_point(replace(cfg, c12=0.4))
    for k in ("R1", "R1+R2:coop"):
        assert b.estimates[k].value == pytest.approx(a.estimates[k].value + 0.4, abs=1e-12)
    for k in ("R2", "R1+R2:mac"):
        assert b.estimates[k].value == a.estimates[k].value


def test_sweep_is_deterministic_and_order_free():
    base = GaussianConfig(samples=3000, c12=0.4, seed=9)
    a = gaussian_sweep(base, [0.5, 1.0], [1.0], [0.0, 1.0])
    b = gaussian_sweep(base, [1.0, 0.5], [1.0], [1.0, 0.0])
    assert np.array_equal(a.frontier.points, b.frontier.points)
    assert a.rows() == b.rows()
    assert all(p is None or set(p) == {"beta1", "beta2", "rho", "max_std_error"}
               for p in a.frontier.provenance)


def test_config_validation():
    with pytest.raises(NonPositiveParameter):
        GaussianConfig(noise_n=0.0)
    with pytest.raises(SampleCountTooSmall):
        GaussianConfig(samples=10)
    with pytest.raises(EmptyGrid):
        gaussian_sweep(GaussianConfig(samples=2000), [], [1.0], [0.0])


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_power_formula(b1, b2, rho):
    cfg = GaussianConfig(beta1=b1, beta2=b2, rho=rho, samples=1000)
    assert cfg.x2_power == pytest.approx(1 + rho * (b1 - b2))
    assert cfg.lam + cfg.lam_bar == pytest.approx(1.0)
    assert cfg.p0 == pytest.approx((math.sqrt(1 - b1) + math.sqrt(1 - b2)) ** 2)
