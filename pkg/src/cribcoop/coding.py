"""Monte Carlo simulation of the block-Markov, rate-splitting random code.

Indices are 0-based throughout. Each trial draws fresh codebooks:

* ``u_book[i]`` for ``i = (m0*M1p + m1p_prev)*M2p + m2p_prev``,
* ``z1_book[i, m1p]`` drawn from P(z1|u) along ``u_book[i]``,
* ``x1_book[i, m1p, m1pp]`` drawn from P(x1|u,z1), and the same for encoder 2.

In block ``b`` encoder 1 sends ``x1_book[u(b), m1p[b], m1pp[b]]`` where
``u(b)`` chains the previous block's split messages. The final block's
split messages are pinned to 0. At each block end the encoders decode the
other side's split message from the crib, which is exact here because the
crib is a deterministic function of the channel input. The receiver decodes
backwards with strong typicality, pruning candidates with necessary
conditions on marginal types before checking the full joint type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import binomtest

from .errors import (
    AmbiguousCandidate,
    IndexOutOfRange,
    NoCandidate,
    SizeOverflow,
    ValidationError,
)
from .search import FactorizedDist, assemble

MAX_STORED_SYMBOLS = 100_000_000
SIM_AXES = ("U", "Z1", "Z2", "X1", "X2", "Y")


@dataclass(frozen=True)
class SimConfig:
    n: int
    b_blocks: int
    trials: int
    epsilon: float
    rates: tuple[float, float, float, float, float]  # r0, r1', r1'', r2', r2''
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.b_blocks < 1 or self.trials < 1:
            raise ValidationError("n, b_blocks and trials must be positive")
        if not 0 < self.epsilon < 1:
            raise ValidationError("epsilon must lie in (0, 1)")
        if len(self.rates) != 5 or any(r < 0 or not math.isfinite(r) for r in self.rates):
            raise ValidationError("rates must be five finite nonnegative numbers")
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))

    @property
    def counts(self) -> tuple[int, int, int, int, int]:
        """Messages per layer, ``ceil(2^(n*R))``."""
        return tuple(max(1, math.ceil(2.0 ** (self.n * r) - 1e-9)) for r in self.rates)

    @property
    def realized_rates(self) -> tuple[float, ...]:
        return tuple(math.log2(c) / self.n for c in self.counts)

    def to_dict(self) -> dict:
        return {"n": self.n, "b_blocks": self.b_blocks, "trials": self.trials,
                "epsilon": self.epsilon, "rates": list(self.rates), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimConfig":
        return cls(int(d["n"]), int(d["b_blocks"]), int(d["trials"]), float(d["epsilon"]),
                   tuple(d["rates"]), int(d.get("seed", 0)))


@dataclass(frozen=True)
class SimLaw:
    """Conditionals the codebooks are drawn from, derived from a cribbing-case-A distribution."""

    joint: np.ndarray        # over SIM_AXES
    p_u: np.ndarray
    p_z1_u: np.ndarray       # (U, Z1)
    p_z2_u: np.ndarray
    p_x1_uz1: np.ndarray     # (U, Z1, X1)
    p_x2_uz2: np.ndarray
    channel: np.ndarray      # (X1, X2, Y)

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.joint.shape


def _conditional(joint: np.ndarray, n_parents: int) -> np.ndarray:
    parents = joint.sum(axis=tuple(range(n_parents, joint.ndim)), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = np.where(parents > 0, joint / np.where(parents > 0, parents, 1.0), 0.0)
    # rows with no mass are never sampled; make them valid anyway
    flat = cond.reshape(int(np.prod(joint.shape[:n_parents])), -1)
    empty = flat.sum(axis=1) == 0
    flat[empty] = 1.0 / flat.shape[1]
    return flat.reshape(joint.shape)


def sim_law(dist: FactorizedDist) -> SimLaw:
    if dist.pattern != "Thm1A":
        raise ValidationError("only the strictly causal cribbing case (Thm1A) is simulated")
    p = assemble(dist).transpose(SIM_AXES)
    t = p.table
    p_uz1x1 = p.marginal(("U", "Z1", "X1"))
    p_uz2x2 = p.marginal(("U", "Z2", "X2"))
    return SimLaw(
        joint=np.array(t),
        p_u=p.marginal("U"),
        p_z1_u=_conditional(p.marginal(("U", "Z1")), 1),
        p_z2_u=_conditional(p.marginal(("U", "Z2")), 1),
        p_x1_uz1=_conditional(p_uz1x1, 2),
        p_x2_uz2=_conditional(p_uz2x2, 2),
        channel=np.array(dist.channel),
    )


def _draw(rng: np.random.Generator, cond: np.ndarray, parents: tuple, shape) -> np.ndarray:
    """Symbols from ``cond[parents..., :]`` with ``parents`` broadcast to ``shape``."""
    cdf = np.cumsum(cond, axis=-1)
    rows = cdf[parents] if parents else np.broadcast_to(cdf, shape + cdf.shape[-1:])
    u = rng.random(shape)
    k = (u[..., None] >= rows[..., :-1]).sum(axis=-1)
    return k.astype(np.int8)


@dataclass(frozen=True)
class CodebookSet:
    u_book: np.ndarray    # (Nu, n)
    z1_book: np.ndarray   # (Nu, M1p, n)
    z2_book: np.ndarray
    x1_book: np.ndarray   # (Nu, M1p, M1pp, n)
    x2_book: np.ndarray
    counts: tuple[int, int, int, int, int]

    @property
    def n(self) -> int:
        return self.u_book.shape[1]

    def u_index(self, m0: int, m1p_prev: int, m2p_prev: int) -> int:
        _, M1p, _, M2p, _ = self.counts
        return (m0 * M1p + m1p_prev) * M2p + m2p_prev


def stored_symbols(cfg: SimConfig) -> int:
    M0, M1p, M1pp, M2p, M2pp = cfg.counts
    nu = M0 * M1p * M2p
    return cfg.n * nu * (1 + M1p * (1 + M1pp) + M2p * (1 + M2pp))


def build_codebooks(dist: FactorizedDist | SimLaw, cfg: SimConfig,
                    rng: np.random.Generator | None = None) -> CodebookSet:
    """Random codebooks with ``ceil(2^(nR))`` entries per layer, drawn i.i.d. from the law."""
    law = dist if isinstance(dist, SimLaw) else sim_law(dist)
    total = stored_symbols(cfg)
    if total > MAX_STORED_SYMBOLS:
        raise SizeOverflow(f"codebooks would store {total:,} symbols (cap {MAX_STORED_SYMBOLS:,})")
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    M0, M1p, M1pp, M2p, M2pp = cfg.counts
    n, nu = cfg.n, M0 * M1p * M2p
    u = _draw(rng, law.p_u, (), (nu, n))
    z1 = _draw(rng, law.p_z1_u, (u[:, None, :],), (nu, M1p, n))
    x1 = _draw(rng, law.p_x1_uz1, (u[:, None, None, :], z1[:, :, None, :]), (nu, M1p, M1pp, n))
    z2 = _draw(rng, law.p_z2_u, (u[:, None, :],), (nu, M2p, n))
    x2 = _draw(rng, law.p_x2_uz2, (u[:, None, None, :], z2[:, :, None, :]), (nu, M2p, M2pp, n))
    return CodebookSet(u, z1, z2, x1, x2, cfg.counts)


# ---------------------------------------------------------------------------
# typicality

@dataclass(frozen=True)
class TypicalityTest:
    """Strong typicality against ``pmf`` over a subset of the simulation axes.

    A joint type passes if every cell frequency is within ``slack`` of its
    probability and cells of probability zero are empty. For a marginal test
    used as a prefilter, ``slack`` grows with the number of positive cells
    in each marginal cell's fiber, which makes it a necessary condition for
    the full test.
    """

    sizes: tuple[int, ...]
    pmf: np.ndarray
    slack: np.ndarray

    @classmethod
    def full(cls, joint: np.ndarray, eps: float) -> "TypicalityTest":
        return cls(joint.shape, joint.ravel(), np.full(joint.size, eps))

    @classmethod
    def marginal(cls, joint: np.ndarray, keep: Sequence[int], eps: float) -> "TypicalityTest":
        drop = tuple(i for i in range(joint.ndim) if i not in keep)
        m = joint.sum(axis=drop)
        fiber = (joint > 0).sum(axis=drop)
        order = np.argsort(keep)
        m = np.transpose(m, np.argsort(order)) if len(keep) > 1 else m
        fiber = np.transpose(fiber, np.argsort(order)) if len(keep) > 1 else fiber
        return cls(tuple(joint.shape[i] for i in keep), m.ravel(), eps * fiber.ravel())

    def __call__(self, *seqs: np.ndarray) -> np.ndarray:
        """Boolean pass flags over the broadcast leading dims of ``seqs`` (last dim = n)."""
        seqs = np.broadcast_arrays(*[np.asarray(s, dtype=np.int64) for s in seqs])
        lead, n = seqs[0].shape[:-1], seqs[0].shape[-1]
        idx = np.ravel_multi_index(tuple(seqs), self.sizes)
        m = int(np.prod(lead)) if lead else 1
        k = self.pmf.size
        flat = idx.reshape(m, n) + (np.arange(m) * k)[:, None]
        counts = np.bincount(flat.ravel(), minlength=m * k).reshape(m, k)
        freq = counts / n
        ok = np.all(np.abs(freq - self.pmf) <= self.slack + 1e-12, axis=1)
        ok &= np.all((self.pmf > 0) | (counts == 0), axis=1)
        return ok.reshape(lead)


def is_typical(joint: np.ndarray, eps: float, *seqs: np.ndarray) -> bool:
    return bool(TypicalityTest.full(joint, eps)(*seqs))


# ---------------------------------------------------------------------------
# encoding and decoding

@dataclass(frozen=True)
class Messages:
    m0: np.ndarray
    m1p: np.ndarray
    m1pp: np.ndarray
    m2p: np.ndarray
    m2pp: np.ndarray

    def as_tuple(self):
        return (self.m0, self.m1p, self.m1pp, self.m2p, self.m2pp)

    @classmethod
    def random(cls, rng: np.random.Generator, counts, b_blocks: int) -> "Messages":
        parts = [rng.integers(0, c, size=b_blocks) for c in counts]
        parts[1][-1] = 0
        parts[3][-1] = 0
        return cls(*parts)

    @classmethod
    def zeros(cls, b_blocks: int) -> "Messages":
        return cls(*[np.zeros(b_blocks, dtype=np.int64) for _ in range(5)])


def _check_messages(msgs: Messages, counts) -> None:
    for name, arr, c in zip(("m0", "m1p", "m1pp", "m2p", "m2pp"), msgs.as_tuple(), counts):
        if np.any(arr < 0) or np.any(arr >= c):
            raise IndexOutOfRange(f"{name} outside [0, {c})")
    if msgs.m1p[-1] != 0 or msgs.m2p[-1] != 0:
        raise ValidationError("the last block's split messages must be pinned to 0")


def encode_superblock(books: CodebookSet, msgs: Messages) -> tuple[np.ndarray, np.ndarray]:
    """Channel inputs of both encoders over all blocks, with correct shared histories."""
    _check_messages(msgs, books.counts)
    x1, x2 = [], []
    prev1 = prev2 = 0
    for b in range(len(msgs.m0)):
        i = books.u_index(int(msgs.m0[b]), prev1, prev2)
        x1.append(books.x1_book[i, msgs.m1p[b], msgs.m1pp[b]])
        x2.append(books.x2_book[i, msgs.m2p[b], msgs.m2pp[b]])
        prev1, prev2 = int(msgs.m1p[b]), int(msgs.m2p[b])
    return np.concatenate(x1), np.concatenate(x2)


def encoder_decode_step(books: CodebookSet, law: SimLaw | np.ndarray, u_index: int,
                        crib: np.ndarray, side: int, eps: float) -> int:
    """Split-message index of the *other* encoder from its crib.

    ``side`` is the decoding encoder. A candidate must reproduce the observed
    crib exactly and be jointly typical with the cloud center.
    """
    if side not in (1, 2):
        raise ValidationError("side must be 1 or 2")
    joint = law.joint if isinstance(law, SimLaw) else law
    book = books.z1_book if side == 2 else books.z2_book
    crib = np.asarray(crib)
    if crib.shape != (books.n,):
        raise ValidationError(f"crib must have length {books.n}")
    axis = 1 if side == 2 else 2
    drop = tuple(a for a in range(joint.ndim) if a not in (0, axis))
    test = TypicalityTest.full(joint.sum(axis=drop), eps)
    cands = book[u_index]
    match = np.all(cands == crib, axis=1)
    match &= test(books.u_book[u_index][None, :], cands)
    found = np.flatnonzero(match)
    if len(found) == 0:
        raise NoCandidate(f"no split-message codeword matches the crib (side {side})")
    if len(found) > 1:
        raise AmbiguousCandidate(f"{len(found)} codewords match the crib (side {side})")
    return int(found[0])


@dataclass
class _ReceiverTests:
    uy: TypicalityTest
    uzzy: TypicalityTest
    x1: TypicalityTest
    x2: TypicalityTest
    full: TypicalityTest

    @classmethod
    def build(cls, joint: np.ndarray, eps: float) -> "_ReceiverTests":
        return cls(TypicalityTest.marginal(joint, (0, 5), eps),
                   TypicalityTest.marginal(joint, (0, 1, 2, 5), eps),
                   TypicalityTest.marginal(joint, (0, 1, 2, 3, 5), eps),
                   TypicalityTest.marginal(joint, (0, 1, 2, 4, 5), eps),
                   TypicalityTest.full(joint, eps))


def decode_block(books: CodebookSet, tests: _ReceiverTests, y: np.ndarray, m1p: int, m2p: int,
                 first_block: bool) -> tuple[int, int, int, int, int]:
    """Unique (m0, m1p_prev, m2p_prev, m1pp, m2pp) typical with ``y``, given the block's split messages."""
    M0, M1p, M1pp, M2p, M2pp = books.counts
    if first_block:
        cand = np.array([books.u_index(m0, 0, 0) for m0 in range(M0)])
    else:
        cand = np.arange(books.u_book.shape[0])
    cand = cand[tests.uy(books.u_book[cand], y[None, :])]
    if len(cand):
        z1 = books.z1_book[cand, m1p]
        z2 = books.z2_book[cand, m2p]
        keep = tests.uzzy(books.u_book[cand], z1, z2, y[None, :])
        cand = cand[keep]
    hits = []
    for i in cand:
        u, z1, z2 = books.u_book[i], books.z1_book[i, m1p], books.z2_book[i, m2p]
        j_ok = np.flatnonzero(tests.x1(u, z1, z2, books.x1_book[i, m1p], y))
        k_ok = np.flatnonzero(tests.x2(u, z1, z2, books.x2_book[i, m2p], y))
        if len(j_ok) == 0 or len(k_ok) == 0:
            continue
        x1 = books.x1_book[i, m1p][j_ok][:, None, :]
        x2 = books.x2_book[i, m2p][k_ok][None, :, :]
        ok = tests.full(u, z1, z2, x1, x2, y)
        for a, c in zip(*np.nonzero(ok)):
            hits.append((int(i), int(j_ok[a]), int(k_ok[c])))
            if len(hits) > 1:
                raise AmbiguousCandidate("more than one message tuple is typical")
    if not hits:
        raise NoCandidate("no message tuple is typical with the block output")
    i, j, k = hits[0]
    m0, rest = divmod(i, M1p * M2p)
    p1, p2 = divmod(rest, M2p)
    return m0, p1, p2, j, k


def backward_decode(books: CodebookSet, law: SimLaw, y: np.ndarray, b_blocks: int,
                    eps: float) -> Messages:
    """Receiver estimates for every block, decoding from the last block to the first."""
    n = books.n
    if y.shape != (n * b_blocks,):
        raise ValidationError(f"y must have length {n * b_blocks}")
    tests = _ReceiverTests.build(law.joint, eps)
    est = [np.zeros(b_blocks, dtype=np.int64) for _ in range(5)]
    m1p = m2p = 0
    for b in reversed(range(b_blocks)):
        m0, p1, p2, j, k = decode_block(books, tests, y[b * n:(b + 1) * n], m1p, m2p, b == 0)
        est[0][b], est[1][b], est[2][b], est[3][b], est[4][b] = m0, m1p, j, m2p, k
        m1p, m2p = p1, p2
    return Messages(*est)


def transmit(law: SimLaw, x1: np.ndarray, x2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(law.channel, axis=-1)[x1, x2]
    u = rng.random(len(x1))
    return (u[:, None] >= cdf[:, :-1]).sum(axis=1)


# ---------------------------------------------------------------------------
# trials

@dataclass(frozen=True)
class Failure:
    trial: int
    stage: str  # "encoder-1", "encoder-2" or "receiver"
    block: int
    kind: str   # "none", "ambiguous" or "wrong"

    def to_dict(self) -> dict:
        return {"trial": self.trial, "stage": self.stage, "block": self.block, "kind": self.kind}


def wilson_interval(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class ErrorEstimate:
    block_errors: int
    trials: int
    rate: float
    wilson_95: tuple[float, float]
    failures: tuple[Failure, ...] = ()
    requested_rates: tuple[float, ...] = ()
    realized_rates: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {"block_errors": self.block_errors, "trials": self.trials, "rate": self.rate,
                "wilson_95": list(self.wilson_95),
                "requested_rates": list(self.requested_rates),
                "realized_rates": list(self.realized_rates),
                "failures": [f.to_dict() for f in self.failures]}


def run_trial(law: SimLaw, cfg: SimConfig, rng: np.random.Generator, trial: int = 0) -> Failure | None:
    """One superblock with fresh codebooks; returns the first failure or ``None``."""
    books = build_codebooks(law, cfg, rng)
    msgs = Messages.random(rng, cfg.counts, cfg.b_blocks)
    B, n, eps = cfg.b_blocks, cfg.n, cfg.epsilon
    # each encoder's view of the other's split message from the previous block
    view1_of_2 = view2_of_1 = 0
    prev1 = prev2 = 0
    x1s, x2s = [], []
    for b in range(B):
        i1 = books.u_index(int(msgs.m0[b]), prev1, view1_of_2)
        i2 = books.u_index(int(msgs.m0[b]), view2_of_1, prev2)
        x1 = books.x1_book[i1, msgs.m1p[b], msgs.m1pp[b]]
        x2 = books.x2_book[i2, msgs.m2p[b], msgs.m2pp[b]]
        x1s.append(x1)
        x2s.append(x2)
        if b == B - 1:
            break
        z1 = books.z1_book[i1, msgs.m1p[b]]
        z2 = books.z2_book[i2, msgs.m2p[b]]
        try:
            view2_of_1 = encoder_decode_step(books, law, i2, z1, 2, eps)
        except NoCandidate:
            return Failure(trial, "encoder-2", b, "none")
        except AmbiguousCandidate:
            return Failure(trial, "encoder-2", b, "ambiguous")
        try:
            view1_of_2 = encoder_decode_step(books, law, i1, z2, 1, eps)
        except NoCandidate:
            return Failure(trial, "encoder-1", b, "none")
        except AmbiguousCandidate:
            return Failure(trial, "encoder-1", b, "ambiguous")
        prev1, prev2 = int(msgs.m1p[b]), int(msgs.m2p[b])
    y = transmit(law, np.concatenate(x1s), np.concatenate(x2s), rng)
    tests = _ReceiverTests.build(law.joint, eps)
    m1p = m2p = 0
    for b in reversed(range(B)):
        try:
            m0, p1, p2, j, k = decode_block(books, tests, y[b * n:(b + 1) * n], m1p, m2p, b == 0)
        except NoCandidate:
            return Failure(trial, "receiver", b, "none")
        except AmbiguousCandidate:
            return Failure(trial, "receiver", b, "ambiguous")
        truth = (msgs.m0[b], msgs.m1pp[b], msgs.m2pp[b]) + (
            (msgs.m1p[b - 1], msgs.m2p[b - 1]) if b > 0 else (0, 0))
        if (m0, j, k, p1, p2) != tuple(int(t) for t in truth):
            return Failure(trial, "receiver", b, "wrong")
        m1p, m2p = p1, p2
    return None


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2 ** 63 - 1), trial]))


def estimate_error(dist: FactorizedDist, cfg: SimConfig) -> ErrorEstimate:
    """Average block error over independent trials, each with fresh codebooks and messages."""
    if stored_symbols(cfg) > MAX_STORED_SYMBOLS:
        raise SizeOverflow(f"codebooks would store {stored_symbols(cfg):,} symbols")
    law = sim_law(dist)
    failures = []
    for t in range(cfg.trials):
        f = run_trial(law, cfg, trial_rng(cfg.seed, t), t)
        if f is not None:
            failures.append(f)
    k = len(failures)
    return ErrorEstimate(k, cfg.trials, k / cfg.trials, wilson_interval(k, cfg.trials),
                         tuple(failures), cfg.rates, cfg.realized_rates)
