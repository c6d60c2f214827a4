"""Quick property suites over the shipped fixtures, used by ``cribcoop verify``.

Each check returns ``(name, passed, detail)``. The suites are small enough to
run in well under a minute; the full test suite covers the same properties
at larger sizes.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .coding import SimConfig, estimate_error
from .fixtures import (
    FIXTURE_LINKS,
    binary_families,
    clean_parallel_dist,
)
from .info import DeterministicMap, JointPmf, cond_entropy, entropy, pushforward
from .regions import (
    LinkCapacities,
    bounds_to_polytope,
    check_duality_corners,
    eval_action_case2,
    eval_theorem1,
    eval_theorem4,
    eval_theorem5,
    theorem1_via_common_message,
    DUALITY_MAP,
)
from .search import (
    SearchConfig,
    achievable_frontier,
    assemble,
    make_family,
    random_factorized,
)

Check = tuple[str, bool, str]


def random_joint(rng: np.random.Generator, sizes=(2, 3, 2)) -> JointPmf:
    t = rng.dirichlet(np.ones(int(np.prod(sizes)))).reshape(sizes)
    return JointPmf(tuple((f"A{i}", s) for i, s in enumerate(sizes)), t)


def state_free_as_thm1(p4: JointPmf) -> JointPmf:
    """Drop a singleton state axis and add a constant ``Z2`` so the table fits the two-way axes."""
    p = p4.marginal_pmf(("U", "X1", "Z", "X2", "Y")).rename({"Z": "Z1"})
    p = pushforward(p, "X2", DeterministicMap.constant(p.size_of("X2")), "Z2")
    return p.transpose(("U", "X1", "Z1", "X2", "Z2", "Y"))


def random_channel(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.dirichlet(np.ones(shape[-1]), size=shape[:-1])


def check_chain_rule(rng, count=20) -> Check:
    worst = 0.0
    for _ in range(count):
        p = random_joint(rng)
        lhs = entropy(p, ("A0", "A1"))
        rhs = entropy(p, "A0") + cond_entropy(p, "A1", "A0")
        worst = max(worst, abs(lhs - rhs))
    return "chain rule H(A,B) = H(A) + H(B|A)", worst < 1e-10, f"max error {worst:.2e}"


def check_common_message(rng, count=20) -> Check:
    worst = 0.0
    for case in ("A", "B"):
        fam = make_family(f"Thm1{case}", channel=random_channel(rng, (2, 2, 3)),
                          crib_maps={"Z1": DeterministicMap.identity(2),
                                     "Z2": DeterministicMap.identity(2)}, cards={"U": 2})
        for _ in range(count):
            p = assemble(random_factorized(fam, rng))
            links = LinkCapacities(*rng.uniform(0, 1, 2))
            d = np.abs(eval_theorem1(p, links, case).rhs - theorem1_via_common_message(p, links).rhs)
            worst = max(worst, d.max())
    return "rate substitution identity", bool(worst < 1e-12), f"max |drhs| {worst:.2e}"


def check_state_reduction(rng, count=20) -> Check:
    worst = 0.0
    fam = make_family("Thm4sc", channel=random_channel(rng, (2, 2, 1, 3)), state=[1.0],
                      crib_maps={"Z": DeterministicMap.identity(2)}, cards={"U": 2})
    for _ in range(count):
        p4 = assemble(random_factorized(fam, rng))
        links = LinkCapacities(*rng.uniform(0, 1, 2))
        b4 = eval_theorem4(p4, links)
        b1 = eval_theorem1(state_free_as_thm1(p4), links)
        for c in b4.constraints:
            worst = max(worst, abs(c.rhs - b1.by_label(c.label).rhs))
    return "state reduction with a single state", worst < 1e-12, f"max |d| {worst:.2e}"


def check_action_reduction(rng, count=20) -> Check:
    worst = 0.0
    fam = make_family("Thm5sc", channel=random_channel(rng, (2, 2, 2, 2)),
                      state=rng.dirichlet(np.ones(2), size=1), cards={"U": 2, "V": 2, "W": 2, "A": 1})
    for _ in range(count):
        p = assemble(random_factorized(fam, rng))
        b5 = eval_theorem5(p, 0.0)
        b2 = eval_action_case2(p)
        pairs = [(b5.by_label("R1").rhs, min(b2.by_label("R1").rhs, b2.by_label("R1+R2:coop").rhs))]
        pairs += [(b5.by_label(k).rhs, b2.by_label(k).rhs) for k in ("R2", "R1+R2:coop", "R1+R2:mac")]
        worst = max(worst, max(abs(a - b) for a, b in pairs))
    return "action reduction with a single action", worst < 1e-12, f"max |d| {worst:.2e}"


def check_duality(rng, count=20) -> Check:
    worst = 0.0
    fam = make_family("Thm2", channel=random_channel(rng, (2, 2, 3)),
                      crib_maps={"Z": DeterministicMap.identity(2)}, cards={"U": 2})
    for _ in range(count):
        p = assemble(random_factorized(fam, rng))
        rep = check_duality_corners(p, p.rename(DUALITY_MAP), float(rng.uniform(0, 1)))
        worst = max(worst, rep.max_difference)
    return "channel/source corner duality", worst < 1e-12, f"max |d| {worst:.2e}"


def check_polytope(rng) -> Check:
    b = eval_theorem1(assemble(clean_parallel_dist()), LinkCapacities())
    verts = bounds_to_polytope(b).points
    ok = np.allclose(verts, [[0, 0], [1, 0], [1, 1], [0, 1]], atol=1e-12)
    ok &= all(b.contains({"r1": x, "r2": y}) for x, y in verts)
    return "clean parallel square", bool(ok), f"vertices {verts.tolist()}"


def check_link_monotonicity(rng) -> Check:
    cfg = SearchConfig(grid_steps=3)
    fam = binary_families()["parallel"]
    small = achievable_frontier(fam, LinkCapacities(0.0, 0.0), cfg)
    big = achievable_frontier(fam, FIXTURE_LINKS["parallel"], cfg)
    ok = all(big.contains(v) for v in small.points)
    return "frontier grows with the links", ok, f"{len(small.points)} vertices checked"


def check_case_containment(rng) -> Check:
    cfg = SearchConfig(grid_steps=2)
    links = FIXTURE_LINKS["bsc"]
    a = achievable_frontier(binary_families("Thm1A")["bsc"], links, cfg)
    b = achievable_frontier(binary_families("Thm1B")["bsc"], links, cfg)
    ok = all(b.contains(v) for v in a.points)
    return "strictly causal family inside causal family", ok, f"{len(a.points)} vertices checked"


def check_zero_rate_simulation(rng) -> Check:
    dist = clean_parallel_dist()
    est = estimate_error(dist, SimConfig(64, 3, 20, 0.3, (0, 0, 0, 0, 0), seed=1))
    return "zero rates on a noiseless channel never fail", est.block_errors == 0, \
        f"{est.block_errors}/{est.trials} errors"


SUITES: tuple[Callable, ...] = (
    check_chain_rule, check_common_message, check_state_reduction, check_action_reduction,
    check_duality, check_polytope, check_link_monotonicity, check_case_containment,
    check_zero_rate_simulation,
)


def run_all(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    return [suite(rng) for suite in SUITES]
