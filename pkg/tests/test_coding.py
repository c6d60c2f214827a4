import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from cribcoop.coding import (
    Messages,
    SimConfig,
    TypicalityTest,
    build_codebooks,
    encode_superblock,
    encoder_decode_step,
    estimate_error,
    is_typical,
    sim_law,
    stored_symbols,
    trial_rng,
    wilson_interval,
)
from cribcoop.errors import IndexOutOfRange, SizeOverflow, ValidationError
from cribcoop.fixtures import binary_families, clean_parallel_dist, interior_sim_dist

GOLDEN = Path(__file__).parent / "golden" / "encode_n16.json"


def test_counts_and_realized_rates():
    cfg = SimConfig(10, 2, 1, 0.1, (0.3, 0.0, 0.25, 0.1, 0.05))
    assert cfg.counts == (8, 1, 6, 2, 2)
    assert cfg.realized_rates[0] == pytest.approx(0.3)
    assert all(r >= q - 1e-12 for r, q in zip(cfg.realized_rates, cfg.rates))
    assert SimConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_config_validation():
    for bad in [dict(n=0), dict(epsilon=1.0), dict(rates=(0, 0, 0, 0)), dict(rates=(0, 0, -1, 0, 0))]:
        kw = dict(n=8, b_blocks=1, trials=1, epsilon=0.1, rates=(0, 0, 0, 0, 0)) | bad
        with pytest.raises(ValidationError):
            SimConfig(**kw)


def test_size_overflow_before_allocation():
    cfg = SimConfig(200, 6, 1, 0.1, (0.1, 0.05, 0.05, 0.05, 0.05))
    assert stored_symbols(cfg) > 10 ** 8
    with pytest.raises(SizeOverflow):
        build_codebooks(interior_sim_dist(), cfg)
    with pytest.raises(SizeOverflow):
        estimate_error(interior_sim_dist(), cfg)


def test_codebook_shapes_and_statistics():
    cfg = SimConfig(400, 1, 1, 0.1, (0.01, 0.005, 0.01, 0.005, 0.01), seed=3)
    books = build_codebooks(interior_sim_dist(), cfg)
    M0, M1p, M1pp, M2p, M2pp = cfg.counts
    nu = M0 * M1p * M2p
    assert books.u_book.shape == (nu, 400) and books.u_book.dtype == np.int8
    assert books.x1_book.shape == (nu, M1p, M1pp, 400)
    assert books.x2_book.shape == (nu, M2p, M2pp, 400)
    assert abs(books.u_book.mean() - 0.5) < 0.05
    # X1 = U in this fixture, so every x1 codeword repeats its cloud center
    assert np.array_equal(books.x1_book, np.broadcast_to(books.u_book[:, None, None], books.x1_book.shape))


def naive_typical(pmf, eps, seqs):
    n = len(seqs[0])
    counts = np.zeros(pmf.shape)
    for t in range(n):
        counts[tuple(s[t] for s in seqs)] += 1
    freq = counts / n
    return all(abs(freq[c] - pmf[c]) <= eps + 1e-12 and (pmf[c] > 0 or counts[c] == 0)
               for c in np.ndindex(pmf.shape))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.01, 0.3), st.integers(5, 60))
def test_typicality_matches_naive_count(seed, eps, n):
    rng = np.random.default_rng(seed)
    pmf = rng.dirichlet(np.ones(6)).reshape(2, 3)
    pmf[rng.random(pmf.shape) < 0.2] = 0.0
    if pmf.sum() == 0:
        pmf[0, 0] = 1.0
    pmf /= pmf.sum()
    a = rng.integers(0, 2, (4, n))
    b = rng.integers(0, 3, (4, n))
    got = TypicalityTest.full(pmf, eps)(a, b)
    assert list(got) == [naive_typical(pmf, eps, (a[i], b[i])) for i in range(4)]
    # a marginal test never rejects a sequence pair the full test accepts
    marg = TypicalityTest.marginal(pmf, (1,), eps)(b)
    assert np.all(marg[got])


def test_typical_sequences_are_likely():
    pmf = np.array([[0.9, 0.02], [0.03, 0.05]])
    rng = np.random.default_rng(5)
    flat = rng.choice(4, size=(2000, 200), p=pmf.ravel())
    a, b = np.divmod(flat, 2)
    passed = TypicalityTest.full(pmf, 0.05)(a, b)
    assert 1 - passed.mean() < 0.05
    assert is_typical(pmf, 0.05, a[np.argmax(passed)], b[np.argmax(passed)])


def test_encoding_matches_golden_file():
    doc = json.loads(GOLDEN.read_text())
    cfg = SimConfig.from_dict(doc["config"])
    books = build_codebooks(interior_sim_dist(), cfg, np.random.default_rng(
        np.random.SeedSequence(doc["codebook_seed"])))
    m = doc["messages"]
    msgs = Messages(*(np.array(m[k]) for k in ("m0", "m1p", "m1pp", "m2p", "m2pp")))
    x1, x2 = encode_superblock(books, msgs)
    assert x1.tolist() == doc["x1"] and x2.tolist() == doc["x2"]


def test_message_validation():
    cfg = SimConfig(16, 2, 1, 0.2, (0.125, 0.0625, 0.0, 0.0, 0.0))
    books = build_codebooks(interior_sim_dist(), cfg, np.random.default_rng(0))
    z = np.zeros(2, dtype=int)
    with pytest.raises(IndexOutOfRange):
        encode_superblock(books, Messages(np.array([0, 4]), z, z, z, z))
    with pytest.raises(ValidationError):
        encode_superblock(books, Messages(z, np.array([0, 1]), z, z, z))


def test_encoder_recovers_split_message_from_crib():
    dist = clean_parallel_dist(crib=True)
    cfg = SimConfig(64, 2, 1, 0.25, (0.0, 0.05, 0.0, 0.05, 0.0), seed=2)
    law = sim_law(dist)
    books = build_codebooks(law, cfg, np.random.default_rng(2))
    for m in range(cfg.counts[1]):
        assert encoder_decode_step(books, law, 0, books.z1_book[0, m], 2, 0.25) == m
    with pytest.raises(ValidationError):
        encoder_decode_step(books, law, 0, books.z1_book[0, 0], 3, 0.25)


def test_wilson_interval_matches_closed_form():
    z = stats.norm.ppf(0.975)
    for k, n in [(0, 500), (7, 500), (50, 100), (100, 100)]:
        p = k / n
        centre = (p + z * z / (2 * n)) / (1 + z * z / n)
        half = z / (1 + z * z / n) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
        lo, hi = wilson_interval(k, n)
        assert lo == pytest.approx(max(0.0, centre - half), abs=1e-12)
        assert hi == pytest.approx(min(1.0, centre + half), abs=1e-12)


def test_only_strictly_causal_distributions_simulate():
    fam = binary_families("Thm1B")["parallel"]
    from cribcoop.search import random_factorized

    with pytest.raises(ValidationError):
        sim_law(random_factorized(fam, np.random.default_rng(0)))


def test_private_messages_decode_on_noiseless_channel():
    cfg = SimConfig(200, 3, 20, 0.12, (0.0, 0.0, 0.03, 0.0, 0.03), seed=4)
    est = estimate_error(clean_parallel_dist(), cfg)
    assert est.block_errors == 0 and est.wilson_95[0] == 0.0


def test_split_messages_travel_over_the_crib():
    cfg = SimConfig(64, 3, 40, 0.25, (0.0, 0.05, 0.0, 0.05, 0.0), seed=6)
    est = estimate_error(clean_parallel_dist(crib=True), cfg)
    assert est.block_errors == 0


def test_error_estimate_is_deterministic():
    cfg = SimConfig(64, 2, 10, 0.12, (0.03, 0.0, 0.0, 0.0, 0.0), seed=8)
    a = estimate_error(interior_sim_dist(), cfg)
    b = estimate_error(interior_sim_dist(), cfg)
    assert a.to_dict() == b.to_dict()
    r1, r2 = trial_rng(8, 3), trial_rng(8, 3)
    assert r1.random() == r2.random()
