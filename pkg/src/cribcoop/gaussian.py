"""Gaussian MAC with one-sided cooperation and quantized cribbing.

Encoder 1 sends ``X1 = lam*U + X1'``, encoder 2 sends ``X2 = lam_bar*U + X2'``
with ``U ~ N(0, P0)`` and ``X1' ~ N(0, beta1*P1)``. Encoder 2 cribs
``Z = Q(X1)`` through a scalar quantizer. With probability ``rho`` (drawn per
symbol) ``X2'`` is a fresh draw from the law of ``X1'`` given ``(Z, U)``,
otherwise it is an independent ``N(0, beta2*P2)``. The receiver sees
``Y = X1 + X2 + W`` with ``W ~ N(0, N)``.

The achievable bounds are evaluated by Monte Carlo over per-sample
information densities. Given ``(Z, U)``, ``X1'`` is a normal truncated to
the quantizer cell, so every conditional output density except the
unconditional one has a closed form (or a one-dimensional integral). The
unconditional output density is estimated from an independent sample. The
mean of the per-sample density is the estimate and its standard error is
``std / sqrt(n)``.

``Var(X2) = P2 + rho*(beta1*P1 - beta2*P2)``, so points with
``rho > 0`` and ``beta1*P1 > beta2*P2`` exceed encoder 2's power and are
skipped by sweeps.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import special
from scipy.signal import fftconvolve
from scipy.spatial import cKDTree

from .errors import (
    BadBits,
    EmptyGrid,
    NonPositiveParameter,
    SampleCountTooSmall,
    ValidationError,
)
from .regions import (
    Frontier,
    RegionBounds,
    _bounds,
    bounds_to_polytope,
    comprehensive_hull,
)

LN2 = math.log(2.0)
MIN_SAMPLES = 1000
GL_NODES = 12
GL_PANELS = 4
POWER_TOL = 1e-12


def _log2(x):
    return np.log2(x)


def inner_bound(p1: float, p2: float, noise_n: float) -> RegionBounds:
    """Region of the Gaussian MAC with neither cooperation nor cribbing."""
    if noise_n <= 0 or p1 < 0 or p2 < 0:
        raise NonPositiveParameter("noise must be positive and powers nonnegative")
    rows = [
        ("R1", {"r1": 1.0}, 0.5 * _log2(1 + p1 / noise_n)),
        ("R2", {"r2": 1.0}, 0.5 * _log2(1 + p2 / noise_n)),
        ("R1+R2", {"r1": 1.0, "r2": 1.0}, 0.5 * _log2(1 + (p1 + p2) / noise_n)),
    ]
    return _bounds(rows, ("r1", "r2"), "gaussian-inner")


def outer_bound_point(p1: float, p2: float, noise_n: float, rho: float) -> RegionBounds:
    """Full-cooperation region at input correlation ``rho``."""
    rows = [
        ("R2", {"r2": 1.0}, 0.5 * _log2(1 + p2 / noise_n * (1 - rho ** 2))),
        ("R1+R2", {"r1": 1.0, "r2": 1.0},
         0.5 * _log2(1 + (p1 + 2 * rho * math.sqrt(p1 * p2) + p2) / noise_n)),
    ]
    return _bounds(rows, ("r1", "r2"), "gaussian-outer")


def outer_bound(p1: float, p2: float, noise_n: float, rho_grid: Iterable[float]) -> Frontier:
    if p1 <= 0 or p2 <= 0 or noise_n <= 0:
        raise NonPositiveParameter("powers and noise must be positive")
    rhos = sorted(float(r) for r in rho_grid)
    if not rhos:
        raise EmptyGrid("rho grid is empty")
    if rhos[0] < 0 or rhos[-1] > 1:
        raise ValidationError("rho must lie in [0, 1]")
    pts = np.vstack([bounds_to_polytope(outer_bound_point(p1, p2, noise_n, r)).points
                     for r in rhos])
    return Frontier(comprehensive_hull(pts))


# ---------------------------------------------------------------------------
# quantizers

@dataclass(frozen=True)
class Quantizer:
    thresholds: np.ndarray

    def __post_init__(self):
        t = np.array(self.thresholds, dtype=float).ravel()
        if len(t) and np.any(np.diff(t) <= 0):
            raise ValidationError("quantizer thresholds must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "thresholds", t)

    @property
    def levels(self) -> int:
        return len(self.thresholds) + 1

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate([[-np.inf], self.thresholds, [np.inf]])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.thresholds, x, side="right")


def make_quantizer(bits: int, spread: float = 4.0, sigma: float = 1.0) -> Quantizer:
    """Uniform thresholds over ``[-spread*sigma, spread*sigma]``; one bit gives ``[0]``."""
    if not isinstance(bits, (int, np.integer)) or bits < 1:
        raise BadBits(f"bits must be a positive integer, got {bits!r}")
    if spread <= 0 or sigma <= 0:
        raise NonPositiveParameter("spread and sigma must be positive")
    k = 2 ** bits - 1
    if k == 1:
        return Quantizer(np.zeros(1))
    return Quantizer(np.linspace(-spread * sigma, spread * sigma, k))


def _trunc_mean(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Mean of a standard normal restricted to [lo, hi]."""
    mass = np.exp(_log_phi_diff(lo, hi))
    return (np.exp(-0.5 * lo ** 2) - np.exp(-0.5 * hi ** 2)) / math.sqrt(2 * math.pi) / mass


def lloyd_max_quantizer(bits: int, sigma: float = 1.0, iters: int = 500) -> Quantizer:
    """MSE-optimal scalar quantizer of ``N(0, sigma^2)`` by Lloyd iteration."""
    if not isinstance(bits, (int, np.integer)) or bits < 1:
        raise BadBits(f"bits must be a positive integer, got {bits!r}")
    k = 2 ** bits
    t = special.ndtri(np.arange(1, k) / k)
    for _ in range(iters):
        edges = np.concatenate([[-np.inf], t, [np.inf]])
        c = _trunc_mean(edges[:-1], edges[1:])
        new = 0.5 * (c[:-1] + c[1:])
        if np.abs(new - t).max() < 1e-13:
            t = new
            break
        t = new
    return Quantizer(sigma * t)


# ---------------------------------------------------------------------------
# densities

def _log_phi_diff(lo, hi):
    """log(Phi(hi) - Phi(lo)) for lo < hi, accurate in both tails."""
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    flip = lo > 0
    a = np.where(flip, -hi, lo)
    b = np.where(flip, -lo, hi)
    la, lb = special.log_ndtr(b), special.log_ndtr(a)
    with np.errstate(divide="ignore"):
        return la + np.log(-np.expm1(lb - la))


def _log_normal(x, var):
    return -0.5 * x * x / var - 0.5 * np.log(2 * np.pi * var)


def log_tn_conv(y, lo, hi, s1, v):
    """log density at ``y`` of ``X + V``: X ~ N(0, s1) truncated to [lo, hi], V ~ N(0, v)."""
    if s1 == 0:
        return _log_normal(y, v)
    sd = math.sqrt(s1)
    m = y * s1 / (s1 + v)
    tau = math.sqrt(s1 * v / (s1 + v))
    return (_log_normal(y, s1 + v) + _log_phi_diff((lo - m) / tau, (hi - m) / tau)
            - _log_phi_diff(lo / sd, hi / sd))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


def log_tn2_conv(y, lo, hi, s1, v):
    """log density of ``X + X' + V`` with X, X' i.i.d. truncated normals on one cell.

    The two Gaussian factors in the integral over X' combine into
    ``N(y; 0, 2*s1 + v) * N(x'; mu, sig^2)``. What is left is the bounded cell
    probability of ``X`` given ``X + V = y - x'``. The integral runs over the
    cell clipped to ``mu +- 8 sig`` with composite Gauss-Legendre panels.
    """
    if s1 == 0:
        return _log_normal(y, v)
    sd = math.sqrt(s1)
    mu = y * s1 / (2 * s1 + v)
    sig = math.sqrt(s1 * (s1 + v) / (2 * s1 + v))
    a = np.maximum(lo, mu - 8 * sig)
    b = np.minimum(hi, mu + 8 * sig)
    b = np.maximum(a, b)
    width = (b - a) / GL_PANELS
    k = np.arange(GL_PANELS)
    # (n, panels, nodes) abscissae
    xs = (a[:, None, None] + width[:, None, None] * (k[None, :, None] + 0.5 * (_GL_X + 1)))
    xs = xs.reshape(len(y), -1)
    m = (y[:, None] - xs) * s1 / (s1 + v)
    tau = math.sqrt(s1 * v / (s1 + v))
    log_f = (_log_normal(xs - mu[:, None], sig * sig)
             + _log_phi_diff((lo[:, None] - m) / tau, (hi[:, None] - m) / tau))
    w = np.tile(_GL_W, GL_PANELS)[None, :] * (0.5 * width)[:, None]
    with np.errstate(divide="ignore"):
        log_int = special.logsumexp(log_f, axis=1, b=w)
    return _log_normal(y, 2 * s1 + v) + log_int - 2 * _log_phi_diff(lo / sd, hi / sd)


def sample_truncated(rng: np.random.Generator, lo, hi, sd: float) -> np.ndarray:
    """Inverse-CDF draws of ``N(0, sd^2)`` restricted to [lo, hi] (elementwise)."""
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if sd == 0:
        return np.zeros(lo.shape)
    a, b = lo / sd, hi / sd
    flip = a > -b
    a2, b2 = np.where(flip, -b, a), np.where(flip, -a, b)
    pa, pb = special.ndtr(a2), special.ndtr(b2)
    u = pa + rng.random(lo.shape) * (pb - pa)
    x = special.ndtri(np.clip(u, 1e-300, 1 - 1e-16))
    x = np.clip(x, a2, b2)
    return sd * np.where(flip, -x, x)


def output_log_density(samples: np.ndarray, noise_var: float, points: np.ndarray,
                       bins_per_sd: int = 40) -> np.ndarray:
    """log density of ``S + W`` at ``points``; ``S`` is represented by samples, W ~ N(0, noise_var).

    The empirical law of ``S`` is binned on a fine grid and convolved with
    the Gaussian kernel by FFT, then linearly interpolated.
    """
    sd = math.sqrt(noise_var)
    h = sd / bins_per_sd
    lo = min(samples.min(), points.min()) - 8 * sd
    hi = max(samples.max(), points.max()) + 8 * sd
    nb = int(math.ceil((hi - lo) / h)) + 1
    counts = np.bincount(np.clip(np.round((samples - lo) / h).astype(np.int64), 0, nb - 1),
                         minlength=nb) / len(samples)
    kx = np.arange(-int(8 * bins_per_sd), int(8 * bins_per_sd) + 1) * h
    kernel = np.exp(_log_normal(kx, noise_var))
    dens = fftconvolve(counts, kernel, mode="same")
    grid = lo + h * np.arange(nb)
    return np.log(np.maximum(np.interp(points, grid, dens), 1e-300))


# ---------------------------------------------------------------------------
# Monte Carlo region points

@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    samples: int

    def __post_init__(self):
        if self.std_error < 0 or self.samples <= 0:
            raise ValidationError("std_error must be >= 0 and samples > 0")

    @classmethod
    def of(cls, per_sample: np.ndarray, offset: float = 0.0) -> "McEstimate":
        n = len(per_sample)
        return cls(float(per_sample.mean() + offset), float(per_sample.std(ddof=1) / math.sqrt(n)), n)


@dataclass(frozen=True)
class GaussianConfig:
    """Parameters of one evaluation; ``quant_bits = 0`` means no cribbing (constant Z)."""

    p1: float = 1.0
    p2: float = 1.0
    noise_n: float = 0.5
    c12: float = 0.0
    beta1: float = 1.0
    beta2: float = 1.0
    rho: float = 0.0
    quant_bits: int = 1
    samples: int = 100_000
    seed: int = 0
    spread: float = 4.0
    quantizer: str = "uniform"

    def __post_init__(self):
        if self.p1 <= 0 or self.p2 <= 0 or self.noise_n <= 0:
            raise NonPositiveParameter("p1, p2 and noise_n must be positive")
        for name in ("beta1", "beta2", "rho"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        if self.c12 < 0 or not math.isfinite(self.c12):
            raise ValidationError("c12 must be finite and nonnegative")
        if not isinstance(self.quant_bits, (int, np.integer)) or self.quant_bits < 0:
            raise BadBits(f"quant_bits must be a nonnegative integer, got {self.quant_bits!r}")
        if self.samples < MIN_SAMPLES:
            raise SampleCountTooSmall(f"need at least {MIN_SAMPLES} samples, got {self.samples}")
        if self.quantizer not in ("uniform", "lloyd"):
            raise ValidationError("quantizer must be 'uniform' or 'lloyd'")

    @property
    def p0(self) -> float:
        return (math.sqrt((1 - self.beta1) * self.p1) + math.sqrt((1 - self.beta2) * self.p2)) ** 2

    @property
    def lam(self) -> float:
        p0 = self.p0
        return math.sqrt((1 - self.beta1) * self.p1 / p0) if p0 > 0 else 0.0

    @property
    def lam_bar(self) -> float:
        return 1.0 - self.lam

    @property
    def x2_power(self) -> float:
        return self.p2 + self.rho * (self.beta1 * self.p1 - self.beta2 * self.p2)

    @property
    def power_ok(self) -> bool:
        return self.x2_power <= self.p2 + POWER_TOL

    def make_quantizer(self) -> Quantizer:
        if self.quant_bits == 0:
            return Quantizer(np.zeros(0))
        # scale of X1'; a degenerate X1' falls back to the scale of X1
        sigma = math.sqrt(self.beta1 * self.p1) or math.sqrt(self.p1)
        if self.quantizer == "lloyd":
            return lloyd_max_quantizer(self.quant_bits, sigma)
        return make_quantizer(self.quant_bits, self.spread, sigma)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GaussianSamples:
    u: np.ndarray
    x1p: np.ndarray
    z: np.ndarray
    lo: np.ndarray  # quantizer cell of X1' given (Z, U)
    hi: np.ndarray
    mimic: np.ndarray
    x2p: np.ndarray
    w: np.ndarray

    @property
    def x1(self):
        return self.x1p + self._lam * self.u

    _lam: float = 0.0
    _lam_bar: float = 1.0

    @property
    def x2(self):
        return self._lam_bar * self.u + self.x2p

    @property
    def y(self):
        return self.x1 + self.x2 + self.w


def draw(cfg: GaussianConfig, rng: np.random.Generator, n: int) -> GaussianSamples:
    """i.i.d. realizations of the construction (all branches drawn for common randomness)."""
    q = cfg.make_quantizer()
    s1, s2 = cfg.beta1 * cfg.p1, cfg.beta2 * cfg.p2
    u = math.sqrt(cfg.p0) * rng.standard_normal(n)
    x1p = math.sqrt(s1) * rng.standard_normal(n)
    z = q(cfg.lam * u + x1p)
    edges = q.edges
    lo, hi = edges[z] - cfg.lam * u, edges[z + 1] - cfg.lam * u
    mimic = rng.random(n) < cfg.rho
    fresh = math.sqrt(s2) * rng.standard_normal(n)
    copy = sample_truncated(rng, lo, hi, math.sqrt(s1))
    w = math.sqrt(cfg.noise_n) * rng.standard_normal(n)
    return GaussianSamples(u, x1p, z, lo, hi, mimic, np.where(mimic, copy, fresh), w,
                           cfg.lam, cfg.lam_bar)


def cond_z_entropy(cfg: GaussianConfig, u: np.ndarray) -> np.ndarray:
    """H(Z | U=u) in bits for each u, from the exact cell probabilities."""
    q = cfg.make_quantizer()
    s1 = cfg.beta1 * cfg.p1
    if q.levels == 1 or s1 == 0:
        return np.zeros(len(u))
    edges = q.edges
    sd = math.sqrt(s1)
    lo = (edges[None, :-1] - cfg.lam * u[:, None]) / sd
    hi = (edges[None, 1:] - cfg.lam * u[:, None]) / sd
    p = np.exp(_log_phi_diff(lo, hi))
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=1)


@dataclass(frozen=True)
class GaussianPoint:
    config: GaussianConfig
    bounds: RegionBounds
    estimates: Mapping[str, McEstimate]
    terms: Mapping[str, McEstimate] = field(default_factory=dict)

    @property
    def max_std_error(self) -> float:
        return max(e.std_error for e in self.estimates.values())

    def std_error(self, label: str) -> float:
        return self.estimates[label].std_error


LABELS = ("R1", "R2", "R1+R2:coop", "R1+R2:mac")


def mc_region_point(cfg: GaussianConfig, rng: np.random.Generator | None = None) -> GaussianPoint:
    """Monte Carlo values of the four cribbing-case bounds with ``Z2`` constant and ``C21 = 0``.

    R1    <= I(X1;Y|X2,Z,U) + H(Z|U) + C12
    R2    <= I(X2;Y|X1,U)
    R1+R2 <= I(X1,X2;Y|U,Z) + H(Z|U) + C12
    R1+R2 <= I(X1,X2;Y)
    """
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    n = cfg.samples
    s = draw(cfg, rng, n)
    s1, s2, nv = cfg.beta1 * cfg.p1, cfg.beta2 * cfg.p2, cfg.noise_n
    rho = cfg.rho
    log_w = _log_normal(s.w, nv)

    i1 = log_w - log_tn_conv(s.x1p + s.w, s.lo, s.hi, s1, nv)

    y2 = s.x2p + s.w
    parts = []
    if rho < 1:
        parts.append(math.log1p(-rho) + _log_normal(y2, s2 + nv))
    if rho > 0:
        parts.append(math.log(rho) + log_tn_conv(y2, s.lo, s.hi, s1, nv))
    i2 = log_w - np.logaddexp.reduce(parts, axis=0)

    y3 = s.x1p + s.x2p + s.w
    parts = []
    if rho < 1:
        parts.append(math.log1p(-rho) + log_tn_conv(y3, s.lo, s.hi, s1, s2 + nv))
    if rho > 0:
        parts.append(math.log(rho) + log_tn2_conv(y3, s.lo, s.hi, s1, nv))
    i3 = log_w - np.logaddexp.reduce(parts, axis=0)

    # unconditional output density from an independent sample of the noiseless sum
    ref = draw(cfg, rng, 4 * n)
    i4 = log_w - output_log_density(ref.x1 + ref.x2, nv, s.y)

    hz = cond_z_entropy(cfg, s.u)
    i1, i2, i3, i4 = (v / LN2 for v in (i1, i2, i3, i4))
    est = {
        "R1": McEstimate.of(i1 + hz, cfg.c12),
        "R2": McEstimate.of(i2),
        "R1+R2:coop": McEstimate.of(i3 + hz, cfg.c12),
        "R1+R2:mac": McEstimate.of(i4),
    }
    terms = {"I(X1;Y|X2,Z,U)": McEstimate.of(i1), "I(X2;Y|X1,U)": McEstimate.of(i2),
             "I(X1,X2;Y|U,Z)": McEstimate.of(i3), "I(X1,X2;Y)": McEstimate.of(i4),
             "H(Z|U)": McEstimate.of(hz)}
    coeffs = {"R1": {"r1": 1.0}, "R2": {"r2": 1.0}, "R1+R2:coop": {"r1": 1.0, "r2": 1.0},
              "R1+R2:mac": {"r1": 1.0, "r2": 1.0}}
    rows = [(k, coeffs[k], est[k].value) for k in LABELS]
    return GaussianPoint(cfg, _bounds(rows, ("r1", "r2"), "gaussian-mc"), est, terms)


# ---------------------------------------------------------------------------
# generic estimators, used for cross-checks

def mi_additive_gaussian(x: np.ndarray, noise_var: float, rng: np.random.Generator,
                         reference: np.ndarray | None = None) -> McEstimate:
    """I(X; X+W) in bits for ``W ~ N(0, noise_var)`` from samples of ``X`` alone.

    ``reference`` is an independent sample of ``X`` for the output density;
    by default the second half of ``x`` serves as the reference.
    """
    if reference is None:
        half = len(x) // 2
        x, reference = x[:half], x[half:]
    w = math.sqrt(noise_var) * rng.standard_normal(len(x))
    dens = _log_normal(w, noise_var) - output_log_density(reference, noise_var, x + w)
    return McEstimate.of(dens / LN2)


def mi_binned(x: np.ndarray, y: np.ndarray, bins: int = 64) -> float:
    """Plug-in I(X;Y) in bits over equal-mass bins per coordinate (biased upward)."""
    def ranks(v):
        edges = np.quantile(v, np.linspace(0, 1, bins + 1)[1:-1])
        return np.searchsorted(edges, v, side="right")

    joint = np.zeros((bins, bins))
    np.add.at(joint, (ranks(x), ranks(y)), 1.0)
    joint /= joint.sum()
    px, py = joint.sum(1), joint.sum(0)
    nz = joint > 0
    return float((joint[nz] * np.log2(joint[nz] / np.outer(px, py)[nz])).sum())


def mi_ksg(x: np.ndarray, y: np.ndarray, k: int = 3) -> float:
    """Kraskov-Stoegbauer-Grassberger estimator (first variant) in bits."""
    x = np.asarray(x, dtype=float).reshape(len(x), -1)
    y = np.asarray(y, dtype=float).reshape(len(y), -1)
    n = len(x)
    xy = np.hstack([x, y])
    d, _ = cKDTree(xy).query(xy, k=k + 1, p=np.inf)
    eps = np.nextafter(d[:, -1], 0)
    nx = cKDTree(x).query_ball_point(x, eps, p=np.inf, return_length=True) - 1
    ny = cKDTree(y).query_ball_point(y, eps, p=np.inf, return_length=True) - 1
    val = special.digamma(k) + special.digamma(n) - np.mean(special.digamma(nx + 1) + special.digamma(ny + 1))
    return float(val / LN2)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class GaussianSweep:
    points: tuple[GaussianPoint, ...]
    frontier: Frontier
    skipped: tuple[tuple[float, float, float], ...] = ()

    def rows(self) -> list[dict]:
        out = []
        for pt in self.points:
            c = pt.config
            row = {"beta1": c.beta1, "beta2": c.beta2, "rho": c.rho}
            for k in LABELS:
                row[f"bound_{k}"] = pt.estimates[k].value
            for k in LABELS:
                row[f"se_{k}"] = pt.estimates[k].std_error
            out.append(row)
        return out


def sweep_seed(seed: int, key: tuple[float, float, float]) -> np.random.SeedSequence:
    """Per-point seed stream, addressed by the sweep key rather than its position."""
    ints = [int(round(v * 1_000_000)) for v in key]
    return np.random.SeedSequence([int(seed) & (2 ** 63 - 1)] + ints)


def gaussian_sweep(base: GaussianConfig, beta1s: Sequence[float], beta2s: Sequence[float],
                   rhos: Sequence[float], skip_power_violations: bool = True) -> GaussianSweep:
    """Evaluate every sweep point and hull the resulting polytopes.

    Keys are sorted before evaluation, so the output does not depend on the
    order of the grids. Provenance records (beta1, beta2, rho) and the
    largest standard error of the point's bounds.
    """
    grids = [sorted({float(v) for v in g}) for g in (beta1s, beta2s, rhos)]
    if any(not g for g in grids):
        raise EmptyGrid("every sweep grid needs at least one value")
    points, skipped = [], []
    for b1 in grids[0]:
        for b2 in grids[1]:
            for r in grids[2]:
                cfg = replace(base, beta1=b1, beta2=b2, rho=r)
                if skip_power_violations and not cfg.power_ok:
                    skipped.append((b1, b2, r))
                    continue
                rng = np.random.default_rng(sweep_seed(base.seed, (b1, b2, r)))
                points.append(mc_region_point(cfg, rng))
    if not points:
        raise EmptyGrid("every sweep point violates the power constraint")
    all_v, owner = [], []
    for i, pt in enumerate(points):
        v = bounds_to_polytope(pt.bounds).points
        all_v.append(v)
        owner.extend([i] * len(v))
    flat = np.vstack(all_v)
    owner = np.array(owner)
    hull = comprehensive_hull(flat)
    prov = []
    for v in hull:
        match = np.flatnonzero(np.abs(flat - v).max(axis=1) <= 1e-9)
        pt = points[int(owner[match[0]])] if len(match) else None
        prov.append(None if pt is None else {
            "beta1": pt.config.beta1, "beta2": pt.config.beta2, "rho": pt.config.rho,
            "max_std_error": pt.max_std_error})
    return GaussianSweep(tuple(points), Frontier(hull, ("r1", "r2"), tuple(prov)), tuple(skipped))


def gaussian_frontier(base: GaussianConfig, beta1s: Sequence[float], beta2s: Sequence[float],
                      rhos: Sequence[float]) -> Frontier:
    return gaussian_sweep(base, beta1s, beta2s, rhos).frontier
