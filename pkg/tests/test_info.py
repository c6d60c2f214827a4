import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cribcoop.errors import (
    NegativeMass,
    NotNormalized,
    OverlappingAxes,
    SizeMismatch,
    TableTooLarge,
    UnknownAxis,
)
from cribcoop.info import (
    DeterministicMap,
    JointPmf,
    binary_entropy,
    cond_entropy,
    cond_mutual_info,
    entropy,
    mutual_info,
    product_pmf,
    pushforward,
    validate_pmf,
)


def direct_cmi(t):
    """I(A;B|C) for a 3-D table p[a, b, c], summed cell by cell."""
    pc = t.sum(axis=(0, 1))
    pac = t.sum(axis=1)
    pbc = t.sum(axis=0)
    total = 0.0
    for a, b, c in itertools.product(*map(range, t.shape)):
        if t[a, b, c] > 0:
            total += t[a, b, c] * np.log2(t[a, b, c] * pc[c] / (pac[a, c] * pbc[b, c]))
    return total


def direct_entropy(t):
    t = t.ravel()
    return -sum(v * np.log2(v) for v in t if v > 0)


@st.composite
def joints(draw, max_size=3):
    sizes = draw(st.lists(st.integers(1, max_size), min_size=3, max_size=3))
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=int(np.prod(sizes)),
                            max_size=int(np.prod(sizes))))
    t = np.array(weights) + 1e-3 * draw(st.booleans())
    if t.sum() == 0:
        t[0] = 1.0
    t = (t / t.sum()).reshape(sizes)
    return JointPmf((("A", sizes[0]), ("B", sizes[1]), ("C", sizes[2])), t)


def test_entropy_of_uniform_bits():
    p = product_pmf(("X", [0.5, 0.5]), ("Y", [0.5, 0.5]))
    assert entropy(p, "X") == pytest.approx(1.0, abs=1e-15)
    assert entropy(p, ("X", "Y")) == pytest.approx(2.0, abs=1e-15)
    assert mutual_info(p, "X", "Y") == 0.0


def test_binary_entropy_known_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.4999, abs=1e-4)


def test_cmi_matches_direct_sum():
    rng = np.random.default_rng(3)
    for _ in range(20):
        t = rng.dirichlet(np.ones(12)).reshape(2, 3, 2)
        p = JointPmf((("A", 2), ("B", 3), ("C", 2)), t)
        assert cond_mutual_info(p, "A", "B", "C") == pytest.approx(direct_cmi(t), abs=1e-12)


def test_axis_order_does_not_matter():
    rng = np.random.default_rng(4)
    t = rng.dirichlet(np.ones(12)).reshape(2, 3, 2)
    p = JointPmf((("A", 2), ("B", 3), ("C", 2)), t)
    q = p.transpose(("C", "A", "B"))
    assert entropy(q, ("B", "A")) == pytest.approx(entropy(p, ("A", "B")), abs=1e-15)
    assert np.allclose(q.marginal(("B", "C")), t.sum(axis=0))


@settings(max_examples=60, deadline=None)
@given(joints())
def test_chain_rule_and_nonnegativity(p):
    h_ab = entropy(p, ("A", "B"))
    assert h_ab == pytest.approx(entropy(p, "A") + cond_entropy(p, "B", "A"), abs=1e-10)
    assert cond_mutual_info(p, "A", "B", "C") >= 0.0
    assert cond_entropy(p, "A", ("B", "C")) <= entropy(p, "A") + 1e-12
    assert entropy(p, ("A", "B", "C")) == pytest.approx(direct_entropy(p.table), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(joints())
def test_mutual_info_symmetric(p):
    assert mutual_info(p, "A", "B") == pytest.approx(mutual_info(p, "B", "A"), abs=1e-12)
    assert cond_mutual_info(p, "A", "B", "C") == pytest.approx(
        cond_mutual_info(p, "B", "A", "C"), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(joints())
def test_json_round_trip(p):
    q = JointPmf.from_json(p.to_json())
    assert q.axes == p.axes
    assert np.array_equal(q.table, p.table)


def test_pushforward_adds_deterministic_axis():
    p = product_pmf(("X", [0.2, 0.3, 0.5]))
    parity = DeterministicMap.from_function(3, lambda x: x % 2)
    q = pushforward(p, "X", parity, "Z")
    assert q.names == ("X", "Z")
    assert cond_entropy(q, "Z", "X") == 0.0
    assert np.allclose(q.marginal("Z"), [0.7, 0.3])


def test_pushforward_over_two_axes_in_any_order():
    rng = np.random.default_rng(5)
    t = rng.dirichlet(np.ones(6)).reshape(2, 3)
    p = JointPmf((("A", 2), ("B", 3)), t)
    fmap = DeterministicMap.from_function(6, lambda i: i)  # product alphabet of (B, A)
    q = pushforward(p, ("B", "A"), fmap, "Z")
    for a, b in itertools.product(range(2), range(3)):
        assert q.table[a, b, b * 2 + a] == pytest.approx(t[a, b])


def test_validation_errors():
    with pytest.raises(NegativeMass):
        validate_pmf(np.array([1.1, -0.1]))
    with pytest.raises(NotNormalized):
        validate_pmf(np.array([0.5, 0.4]))
    with pytest.raises(SizeMismatch):
        JointPmf((("A", 2),), np.ones(3) / 3)
    with pytest.raises(TableTooLarge):
        JointPmf((("A", 10_000), ("B", 10_000)), np.zeros(1))
    p = product_pmf(("A", [0.5, 0.5]), ("B", [0.5, 0.5]))
    with pytest.raises(UnknownAxis):
        entropy(p, "Q")
    with pytest.raises(OverlappingAxes):
        cond_mutual_info(p, "A", "A", "B")
    with pytest.raises(SizeMismatch):
        pushforward(p, "A", DeterministicMap.identity(3), "Z")


def test_deterministic_map_round_trip():
    m = DeterministicMap.from_function(4, lambda x: x // 2)
    assert DeterministicMap.from_dict(json.loads(json.dumps(m.to_dict()))) == m
    assert m.codomain_size == 2
