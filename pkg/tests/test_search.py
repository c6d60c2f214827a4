import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cribcoop.errors import (
    CapExceeded,
    InconsistentShapes,
    MissingAxis,
    NotNormalized,
    UnboundedRegion,
    ValidationError,
)
from cribcoop.fixtures import FIXTURE_LINKS, IDENTITY2, binary_families, parallel_channel
from cribcoop.info import DeterministicMap, validate_pmf
from cribcoop.regions import LinkCapacities, bounds_to_polytope, hull_distance
from cribcoop.search import (
    PATTERNS,
    FactorizedDist,
    Family,
    SearchConfig,
    achievable_frontier,
    assemble,
    enumerate_grid,
    evaluate,
    grid_count,
    lattice_count,
    make_family,
    max_weighted_sum,
    random_factorized,
    simplex_lattice,
)

from oracles import brute_force_two_way, compositions, match_vertices


def families_for_every_pattern(rng):
    ch = rng.dirichlet(np.ones(2), size=(2, 2))
    ch_s = rng.dirichlet(np.ones(2), size=(2, 2, 2))
    return {
        "Thm1A": make_family("Thm1A", channel=ch, crib_maps={"Z1": IDENTITY2}),
        "Thm1B": make_family("Thm1B", channel=ch, crib_maps={"Z1": IDENTITY2, "Z2": IDENTITY2}),
        "Thm2": make_family("Thm2", channel=ch, crib_maps={"Z": IDENTITY2}),
        "Thm3": make_family("Thm3", source=[0.3, 0.7], crib_maps={
            "Z": IDENTITY2, "Xhat2": DeterministicMap(4, 2, (0, 1, 0, 1))}),
        "Thm4sc": make_family("Thm4sc", channel=ch_s, state=[0.4, 0.6], crib_maps={"Z": IDENTITY2}),
        "Thm4c": make_family("Thm4c", channel=ch_s, state=[0.4, 0.6], crib_maps={"Z": IDENTITY2}),
        "Thm5sc": make_family("Thm5sc", channel=ch_s, state=[[0.9, 0.1], [0.2, 0.8]],
                              cards={"A": 2}),
        "Thm5c": make_family("Thm5c", channel=ch_s, state=[[0.9, 0.1], [0.2, 0.8]],
                             cards={"A": 2}),
    }


def test_lattice_order_and_count():
    lat = simplex_lattice(2, 2)
    assert np.allclose(lat, [[0, 1], [0.5, 0.5], [1, 0]])
    for k, steps in [(1, 5), (2, 8), (3, 4), (4, 3)]:
        lat = simplex_lattice(k, steps)
        assert len(lat) == lattice_count(k, steps) == math.comb(steps + k - 1, k - 1)
        assert np.allclose(lat.sum(axis=1), 1.0)
        ref = {tuple(r) for r in np.round(compositions(k, steps) * steps).astype(int)}
        assert {tuple(r) for r in np.round(lat * steps).astype(int)} == ref


def test_grid_count_and_enumeration_agree():
    fam = binary_families()["parallel"]
    cfg = SearchConfig(grid_steps=2, batch_size=5)
    dists = list(enumerate_grid(fam, cfg))
    assert len(dists) == grid_count(fam, 2) == 3 * 3 ** 2 * 3 ** 2
    keys = {json.dumps({k: v.tolist() for k, v in d.factors.items()}) for d in dists}
    assert len(keys) == len(dists)


def test_cap_exceeded_before_work():
    fam = binary_families()["parallel"]
    with pytest.raises(CapExceeded):
        achievable_frontier(fam, LinkCapacities(), SearchConfig(grid_steps=200))


@pytest.mark.parametrize("pattern", PATTERNS)
def test_every_pattern_assembles_a_distribution(pattern):
    rng = np.random.default_rng(7)
    fam = families_for_every_pattern(rng)[pattern]
    for _ in range(5):
        fd = random_factorized(fam, rng)
        p = assemble(fd)
        validate_pmf(p)
        assert p.names == fam.axes
        back = FactorizedDist.from_dict(json.loads(json.dumps(fd.to_dict())))
        assert np.array_equal(assemble(back).table, p.table)


def test_crib_axes_are_functions_of_inputs():
    rng = np.random.default_rng(8)
    fam = families_for_every_pattern(rng)["Thm1B"]
    p = assemble(random_factorized(fam, rng))
    pxz = p.marginal(("X1", "Z1"))
    assert np.count_nonzero(pxz) <= 2 and np.allclose(pxz, np.diag(np.diag(pxz)))


def test_strictly_causal_input_ignores_crib():
    # in the strictly causal layout X2 depends on U only, so X2 - U - X1
    rng = np.random.default_rng(9)
    fam = families_for_every_pattern(rng)["Thm1A"]
    p = assemble(random_factorized(fam, rng))
    from cribcoop.info import cond_mutual_info

    assert cond_mutual_info(p, "X1", "X2", "U") < 1e-12


def test_family_validation():
    with pytest.raises(ValidationError):
        make_family("Thm9", channel=parallel_channel())
    with pytest.raises(MissingAxis):
        make_family("Thm1A")
    with pytest.raises(InconsistentShapes):
        make_family("Thm1A", channel=parallel_channel(),
                    crib_maps={"Z1": DeterministicMap.identity(3)})
    with pytest.raises(MissingAxis):
        make_family("Thm3", source=[0.5, 0.5])
    fam = binary_families()["parallel"]
    with pytest.raises(NotNormalized):
        FactorizedDist(fam, {"U": [0.5, 0.6], "X1": np.full((2, 2), .5), "X2": np.full((2, 2), .5)})
    with pytest.raises(InconsistentShapes):
        FactorizedDist(fam, {"U": [0.5, 0.5], "X1": np.full((2, 2), .5)})


def test_family_round_trip():
    fam = families_for_every_pattern(np.random.default_rng(1))["Thm5c"]
    again = Family.from_dict(json.loads(json.dumps(fam.to_dict())))
    assert again.sizes == fam.sizes and again.crib_maps == fam.crib_maps
    assert all(np.array_equal(again.fixed[k], fam.fixed[k]) for k in fam.fixed)


def test_refinement_pattern_has_no_frontier():
    fam = families_for_every_pattern(np.random.default_rng(1))["Thm3"]
    with pytest.raises(UnboundedRegion):
        achievable_frontier(fam, LinkCapacities(), SearchConfig(grid_steps=1))


@pytest.mark.parametrize("name", ["parallel", "and", "bsc"])
def test_frontier_matches_brute_force_small_grid(name):
    fam = binary_families()[name]
    links = FIXTURE_LINKS[name]
    ours = achievable_frontier(fam, links, SearchConfig(grid_steps=4))
    ref = brute_force_two_way(fam.fixed["Y"], fam.crib_maps["Z1"].table,
                              fam.crib_maps["Z2"].table, links.c12, links.c21, 2, 4)
    fwd, back = match_vertices(ours.points, ref)
    assert fwd <= 1e-9 and back <= 1e-9


def test_provenance_reproduces_each_vertex():
    fam = binary_families()["parallel"]
    links = FIXTURE_LINKS["parallel"]
    front = achievable_frontier(fam, links, SearchConfig(grid_steps=3))
    for v, fd in zip(front.points, front.provenance):
        if fd is None:
            assert np.allclose(v, 0.0)
            continue
        poly = bounds_to_polytope(evaluate(fd, links)).points
        assert np.abs(poly - v).max(axis=1).min() <= 1e-9


def test_batch_size_and_order_do_not_change_the_result():
    fam = binary_families()["bsc"]
    links = FIXTURE_LINKS["bsc"]
    a = achievable_frontier(fam, links, SearchConfig(grid_steps=3, batch_size=4096))
    b = achievable_frontier(fam, links, SearchConfig(grid_steps=3, batch_size=7))
    assert np.array_equal(a.points, b.points)
    assert [p.to_dict() if p else None for p in a.provenance] == \
        [p.to_dict() if p else None for p in b.provenance]


def test_random_samples_are_seeded():
    fam = binary_families("Thm1B")["bsc"]
    cfg = SearchConfig(grid=False, random_samples=300, seed=4)
    a = achievable_frontier(fam, FIXTURE_LINKS["bsc"], cfg)
    b = achievable_frontier(fam, FIXTURE_LINKS["bsc"], cfg)
    assert np.array_equal(a.points, b.points)


@pytest.mark.parametrize("name", ["parallel", "and", "bsc"])
def test_frontier_grows_with_links(name):
    fam = binary_families()[name]
    cfg = SearchConfig(grid_steps=3)
    small = achievable_frontier(fam, LinkCapacities(0.0, 0.0), cfg)
    big = achievable_frontier(fam, LinkCapacities(0.2, 0.1), cfg)
    assert all(big.contains(v) for v in small.points)


@pytest.mark.parametrize("name", ["parallel", "and", "bsc"])
def test_finer_cribbing_never_shrinks_the_frontier(name):
    fam = binary_families()[name]
    ch = fam.fixed["Y"]
    coarse = make_family("Thm1A", channel=ch)
    fine = make_family("Thm1A", channel=ch, crib_maps={"Z1": IDENTITY2, "Z2": IDENTITY2})
    cfg = SearchConfig(grid_steps=3)
    a = achievable_frontier(coarse, FIXTURE_LINKS[name], cfg)
    b = achievable_frontier(fine, FIXTURE_LINKS[name], cfg)
    assert all(b.contains(v) for v in a.points)


def test_max_weighted_sum_dominates_grid_and_is_attained():
    fam = binary_families()["bsc"]
    links = FIXTURE_LINKS["bsc"]
    cfg = SearchConfig(grid_steps=3, refine_iters=30)
    front = achievable_frontier(fam, links, SearchConfig(grid_steps=3))
    for lam in (0.0, 0.3, 0.5, 1.0):
        pt, fd = max_weighted_sum(fam, links, lam, cfg)
        grid_best, _ = front.max_weighted(lam)
        assert lam * pt.r1 + (1 - lam) * pt.r2 >= grid_best - 1e-12
        poly = bounds_to_polytope(evaluate(fd, links)).points
        assert hull_distance(poly, [pt.r1, pt.r2]) <= 1e-9


def test_max_weighted_sum_rejects_bad_weight():
    with pytest.raises(ValidationError):
        max_weighted_sum(binary_families()["and"], LinkCapacities(), 1.5, SearchConfig(grid_steps=1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_distribution_lies_inside_frontier_hull(seed):
    # every distribution's polytope lies inside the hull of the union (checked on random samples)
    fam = binary_families("Thm1B")["parallel"]
    links = FIXTURE_LINKS["parallel"]
    rng = np.random.default_rng(seed)
    dists = [random_factorized(fam, rng) for _ in range(5)]
    cfg = SearchConfig(grid_steps=1)
    front = achievable_frontier(fam, links, cfg)
    outer = np.vstack([front.points] + [bounds_to_polytope(evaluate(d, links)).points for d in dists])
    from cribcoop.regions import comprehensive_hull

    hull = comprehensive_hull(outer)
    for d in dists:
        for v in bounds_to_polytope(evaluate(d, links)).points:
            assert hull_distance(hull, v) <= 1e-9


def test_search_config_validation():
    with pytest.raises(ValidationError):
        SearchConfig(grid_steps=0)
    with pytest.raises(ValidationError):
        SearchConfig(grid=False)
    assert SearchConfig.from_dict({"grid_steps": 5, "unknown": 1}).grid_steps == 5
