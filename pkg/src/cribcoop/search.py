"""Search over the admissible factorized distribution families.

A ``Family`` fixes everything the search may not touch (channel, state law,
source, cribbing maps, alphabet sizes) and lists the free conditional
factors. A ``FactorizedDist`` is a family plus one choice of free factors.

Distributions are evaluated in batches: free factors are stacked along a
leading axis, the joint tables are formed with one ``einsum`` per factor and
the region formulas from :mod:`cribcoop.regions` run on the whole stack.

Hull merging is order-insensitive: each batch's vertices are merged with the
running hull, and the hull of a point set does not depend on the order in
which the points arrive. Provenance ties are broken by the smallest
enumeration index, so the result is also independent of batch size.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    InconsistentShapes,
    MissingAxis,
    NegativeMass,
    NotNormalized,
    UnboundedRegion,
    ValidationError,
)
from .info import PROB_TOL, DeterministicMap, JointPmf, entropy_fn
from .regions import (
    DEDUP_TOL,
    THM1_AXES,
    THM2_AXES,
    THM3_AXES,
    THM4_AXES,
    THM5_AXES,
    Frontier,
    LinkCapacities,
    RatePoint,
    RegionBounds,
    _bounds,
    comprehensive_hull,
    polytope_vertices_batch,
    theorem1_rows,
    theorem2_rows,
    theorem3_rows,
    theorem4_rows,
    theorem5_rows,
)

MAX_DISTRIBUTIONS = 100_000_000


@dataclass(frozen=True)
class Node:
    children: tuple[str, ...]
    parents: tuple[str, ...]
    kind: str  # "free", "fixed" or "map"

    @property
    def key(self) -> str:
        return ",".join(self.children)


def _n(children, parents, kind):
    return Node(tuple(children.split(",")), tuple(parents), kind)


LAYOUTS: dict[str, tuple[Node, ...]] = {
    "Thm1A": (_n("U", (), "free"), _n("X1", ("U",), "free"), _n("Z1", ("X1",), "map"),
              _n("X2", ("U",), "free"), _n("Z2", ("X2",), "map"),
              _n("Y", ("X1", "X2"), "fixed")),
    "Thm1B": (_n("U", (), "free"), _n("X1", ("U",), "free"), _n("Z1", ("X1",), "map"),
              _n("X2", ("U", "Z1"), "free"), _n("Z2", ("X2",), "map"),
              _n("Y", ("X1", "X2"), "fixed")),
    "Thm2": (_n("U", (), "free"), _n("X1", ("U",), "free"), _n("Z", ("X1",), "map"),
             _n("X2", ("U", "Z"), "free"), _n("Y", ("X1", "X2"), "fixed")),
    "Thm3": (_n("X", (), "fixed"), _n("U", ("X",), "free"), _n("Xhat1", ("X", "U"), "free"),
             _n("Z", ("Xhat1",), "map"), _n("Xhat2", ("U", "Z"), "map")),
    "Thm4sc": (_n("S", (), "fixed"), _n("U", ("S",), "free"), _n("X1", ("U",), "free"),
               _n("Z", ("X1",), "map"), _n("X2", ("S", "U"), "free"),
               _n("Y", ("X1", "X2", "S"), "fixed")),
    "Thm4c": (_n("S", (), "fixed"), _n("U", ("S",), "free"), _n("X1", ("U",), "free"),
              _n("Z", ("X1",), "map"), _n("X2", ("S", "U", "Z"), "free"),
              _n("Y", ("X1", "X2", "S"), "fixed")),
    "Thm5sc": (_n("W", (), "free"), _n("V", ("W",), "free"), _n("A", ("W",), "free"),
               _n("S", ("A",), "fixed"), _n("X1", ("V", "W"), "free"),
               _n("U,X2", ("S", "V", "A", "W"), "free"), _n("Y", ("X1", "X2", "S"), "fixed")),
    "Thm5c": (_n("W", (), "free"), _n("V", ("W",), "free"), _n("A", ("W",), "free"),
              _n("S", ("A",), "fixed"), _n("X1", ("V", "W"), "free"),
              _n("U", ("S", "V", "A", "W"), "free"),
              _n("X2", ("V", "U", "S", "A", "W", "X1"), "free"),
              _n("Y", ("X1", "X2", "S"), "fixed")),
}

CANONICAL_AXES = {"Thm1A": THM1_AXES, "Thm1B": THM1_AXES, "Thm2": THM2_AXES,
                  "Thm3": THM3_AXES, "Thm4sc": THM4_AXES, "Thm4c": THM4_AXES,
                  "Thm5sc": THM5_AXES, "Thm5c": THM5_AXES}

PATTERNS = tuple(LAYOUTS)
AUX_AXES = ("U", "V", "W", "A", "Xhat1")


def _check_rows(name: str, table: np.ndarray) -> None:
    if table.size == 0:
        raise InconsistentShapes(f"factor {name} is empty")
    if table.min() < -1e-15:
        raise NegativeMass(f"factor {name} has a negative entry")
    sums = table.reshape(-1, table.shape[-1]).sum(axis=1)
    if np.abs(sums - 1.0).max() > PROB_TOL:
        raise NotNormalized(f"rows of factor {name} do not sum to 1")


@dataclass(frozen=True)
class Family:
    """The fixed part of a factorization pattern.

    ``fixed`` holds conditional tables laid out as (parents..., child): the
    channel under key ``"Y"``, the state law ``"S"`` and the source ``"X"``.
    Cribbing and reconstruction maps are keyed by the axis they produce.
    """

    pattern: str
    sizes: Mapping[str, int]
    fixed: Mapping[str, np.ndarray]
    crib_maps: Mapping[str, DeterministicMap]

    @property
    def nodes(self) -> tuple[Node, ...]:
        return LAYOUTS[self.pattern]

    @property
    def free_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind == "free")

    @property
    def axes(self) -> tuple[str, ...]:
        return CANONICAL_AXES[self.pattern]

    @property
    def rates(self) -> tuple[str, str]:
        return ("r0", "r1") if self.pattern in ("Thm2", "Thm3") else ("r1", "r2")

    def node_shape(self, node: Node) -> tuple[int, ...]:
        return tuple(self.sizes[a] for a in node.parents + node.children)

    def row_layout(self, node: Node) -> tuple[int, int]:
        """(number of conditional rows, row length) of a free factor."""
        rows = math.prod(self.sizes[a] for a in node.parents)
        return rows, math.prod(self.sizes[a] for a in node.children)

    def map_table(self, node: Node) -> np.ndarray:
        fmap = self.crib_maps[node.key]
        ind = np.zeros((fmap.domain_size, fmap.codomain_size))
        ind[np.arange(fmap.domain_size), fmap.table] = 1.0
        return ind.reshape(self.node_shape(node))

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "sizes": dict(self.sizes),
                "fixed": {k: v.tolist() for k, v in self.fixed.items()},
                "crib_maps": {k: m.to_dict() for k, m in self.crib_maps.items()}}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Family":
        return make_family(d["pattern"],
                           channel=d["fixed"].get("Y"), state=d["fixed"].get("S"),
                           source=d["fixed"].get("X"),
                           crib_maps={k: DeterministicMap.from_dict(v)
                                      for k, v in d.get("crib_maps", {}).items()},
                           cards={k: v for k, v in d["sizes"].items() if k in AUX_AXES})


def make_family(pattern: str, *, channel=None, crib_maps: Mapping[str, DeterministicMap] | None = None,
                state=None, source=None, cards: Mapping[str, int] | None = None) -> Family:
    """Build a family, inferring alphabet sizes from the fixed tables.

    ``channel`` is P(y|x1,x2) or P(y|x1,x2,s) with shape (|X1|, |X2|[, |S|], |Y|).
    ``state`` is P(s) for the state patterns and P(s|a) (shape (|A|, |S|)) for
    the action patterns. ``source`` is P(x) for the source-coding pattern.
    Missing cribbing maps default to constants (no cribbing).
    """
    if pattern not in LAYOUTS:
        raise ValidationError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    cards = dict(cards or {})
    crib_maps = dict(crib_maps or {})
    sizes: dict[str, int] = {}
    fixed: dict[str, np.ndarray] = {}

    def put(name, size):
        if name in sizes and sizes[name] != size:
            raise InconsistentShapes(f"axis {name}: size {size} conflicts with {sizes[name]}")
        sizes[name] = int(size)

    layout = LAYOUTS[pattern]
    for node in layout:
        if node.kind != "fixed":
            continue
        key = node.children[0]
        raw = {"Y": channel, "S": state, "X": source}[key]
        if raw is None:
            raise MissingAxis(f"pattern {pattern} needs a fixed table for {key}")
        t = np.array(raw, dtype=float)
        if t.ndim != len(node.parents) + 1:
            raise InconsistentShapes(
                f"table for {key} must have {len(node.parents) + 1} dims, got {t.shape}")
        for a, s in zip(node.parents + node.children, t.shape):
            put(a, s)
        _check_rows(key, t)
        t.setflags(write=False)
        fixed[key] = t
    for name, size in cards.items():
        if int(size) < 1:
            raise ValidationError(f"cardinality of {name} must be positive")
        put(name, size)
    for a in ("U", "V", "W", "A"):
        if any(a in n.children for n in layout) and a not in sizes:
            sizes[a] = 2 if a == "U" else 1
    if pattern == "Thm3" and "Xhat1" not in sizes:
        sizes["Xhat1"] = sizes["X"]
    for node in layout:
        if node.kind != "map":
            continue
        key = node.key
        dom = math.prod(sizes[a] for a in node.parents)
        if key not in crib_maps:
            if key == "Xhat2":
                raise MissingAxis("the refinement pattern needs a reconstruction map for Xhat2")
            crib_maps[key] = DeterministicMap.constant(dom)
        fmap = crib_maps[key]
        if fmap.domain_size != dom:
            raise InconsistentShapes(f"map for {key} has domain {fmap.domain_size}, needs {dom}")
        put(key, fmap.codomain_size)
    unknown = set(crib_maps) - {n.key for n in layout if n.kind == "map"}
    if unknown:
        raise ValidationError(f"pattern {pattern} has no mapped axes {sorted(unknown)}")
    return Family(pattern, sizes, fixed, crib_maps)


@dataclass(frozen=True)
class FactorizedDist:
    family: Family
    factors: Mapping[str, np.ndarray]

    def __post_init__(self):
        out = {}
        for node in self.family.free_nodes:
            if node.key not in self.factors:
                raise InconsistentShapes(f"missing factor {node.key}")
            t = np.array(self.factors[node.key], dtype=float)
            shape = self.family.node_shape(node)
            if t.size != math.prod(shape):
                raise InconsistentShapes(f"factor {node.key}: shape {t.shape}, expected {shape}")
            t = t.reshape(shape)
            rows, k = self.family.row_layout(node)
            _check_rows(node.key, t.reshape(rows, k))
            t.setflags(write=False)
            out[node.key] = t
        extra = set(self.factors) - set(out)
        if extra:
            raise InconsistentShapes(f"unexpected factors {sorted(extra)}")
        object.__setattr__(self, "factors", out)

    @property
    def pattern(self) -> str:
        return self.family.pattern

    @property
    def crib_maps(self) -> Mapping[str, DeterministicMap]:
        return self.family.crib_maps

    @property
    def channel(self) -> np.ndarray | None:
        return self.family.fixed.get("Y")

    def to_dict(self) -> dict:
        return {"family": self.family.to_dict(),
                "factors": {k: v.tolist() for k, v in self.factors.items()}}

    @classmethod
    def from_dict(cls, d: Mapping) -> "FactorizedDist":
        return cls(Family.from_dict(d["family"]), {k: np.asarray(v) for k, v in d["factors"].items()})


@dataclass(frozen=True)
class SearchConfig:
    aux_cardinalities: Mapping[str, int] = field(default_factory=lambda: {"U": 2})
    grid_steps: int = 8
    random_samples: int = 0
    refine_iters: int = 0
    seed: int = 0
    grid: bool = True
    batch_size: int = 4096

    def __post_init__(self):
        if self.grid_steps < 1:
            raise ValidationError("grid_steps must be at least 1")
        if self.random_samples < 0 or self.refine_iters < 0:
            raise ValidationError("random_samples and refine_iters must be nonnegative")
        if not self.grid and self.random_samples == 0:
            raise ValidationError("enable the grid or ask for random samples")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be positive")
        for k, v in self.aux_cardinalities.items():
            if int(v) < 1:
                raise ValidationError(f"cardinality of {k} must be positive")

    @classmethod
    def from_dict(cls, d: Mapping) -> "SearchConfig":
        known = {"aux_cardinalities", "grid_steps", "random_samples", "refine_iters", "seed",
                 "grid", "batch_size"}
        return cls(**{k: v for k, v in d.items() if k in known})


# ---------------------------------------------------------------------------
# assembly

def _letters(names: Sequence[str]) -> dict[str, str]:
    return {n: chr(ord("a") + i) for i, n in enumerate(names)}


def joint_tables(family: Family, factors: Mapping[str, np.ndarray], batch: bool) -> np.ndarray:
    """Multiply out the factorization; with ``batch`` the free factors carry a leading axis."""
    names = [a for n in family.nodes for a in n.children]
    letter = _letters(names)
    table = np.ones(1) if batch else np.ones(())
    current = ""
    for node in family.nodes:
        if node.kind == "free":
            op = np.asarray(factors[node.key])
            op_batched = batch
        elif node.kind == "fixed":
            op, op_batched = family.fixed[node.key], False
        else:
            op, op_batched = family.map_table(node), False
        sub_node = "".join(letter[a] for a in node.parents + node.children)
        new = "".join(letter[a] for a in node.children)
        lhs_t = ("Z" if batch else "") + current
        lhs_n = ("Z" if op_batched else "") + sub_node
        out = ("Z" if batch else "") + current + new
        table = np.einsum(f"{lhs_t},{lhs_n}->{out}", table, op)
        current += new
    order = [names.index(a) for a in family.axes]
    if batch:
        return np.transpose(table, [0] + [i + 1 for i in order])
    return np.transpose(table, order)


def assemble(fd: FactorizedDist) -> JointPmf:
    """The joint law over the pattern's canonical axes."""
    fam = fd.family
    table = joint_tables(fam, fd.factors, batch=False)
    return JointPmf(tuple((a, fam.sizes[a]) for a in fam.axes), table)


def pattern_rows(pattern: str, H, links: LinkCapacities):
    """Bound rows and feasibility for a pattern; shared by single and batched evaluation."""
    if pattern in ("Thm1A", "Thm1B"):
        return theorem1_rows(H, links), True
    if pattern == "Thm2":
        return theorem2_rows(H, links.c12), True
    if pattern == "Thm3":
        return theorem3_rows(H, links.c12), True
    if pattern in ("Thm4sc", "Thm4c"):
        return theorem4_rows(H, links)
    return theorem5_rows(H, links.c12), True


def evaluate(fd: FactorizedDist, links: LinkCapacities) -> RegionBounds:
    p = assemble(fd)
    rows, feasible = pattern_rows(fd.pattern, entropy_fn(p.names, p.table), links)
    sense = ">=" if fd.pattern == "Thm3" else "<="
    return _bounds(rows, fd.family.rates, fd.pattern, feasible=feasible, sense=sense)


def batch_vertices(family: Family, links: LinkCapacities,
                   factors: Mapping[str, np.ndarray]) -> np.ndarray:
    """Candidate polytope vertices, shape (batch, K, 2), for stacked free factors."""
    if family.pattern == "Thm3":
        raise UnboundedRegion("the refinement region is a lower-bound region; it has no frontier")
    table = joint_tables(family, factors, batch=True)
    H = entropy_fn(family.axes, table, batch_ndim=1)
    rows, feasible = pattern_rows(family.pattern, H, links)
    nb = table.shape[0]
    x, y = family.rates
    coeffs = np.array([[c.get(x, 0.0), c.get(y, 0.0)] for _, c, _ in rows])
    rhs = np.stack([np.broadcast_to(np.asarray(r, dtype=float), (nb,)) for _, _, r in rows], axis=1)
    if feasible is not True:
        rhs = np.where(np.asarray(feasible)[:, None], rhs, 0.0)
    return polytope_vertices_batch(coeffs, rhs)


# ---------------------------------------------------------------------------
# enumeration

def simplex_lattice(k: int, steps: int) -> np.ndarray:
    """All compositions of ``steps`` into ``k`` parts, divided by ``steps``.

    Ascending lexicographic order, e.g. k=2, steps=2 gives (0,1), (.5,.5), (1,0).
    """
    rows = []
    for bars in itertools.combinations(range(steps + k - 1), k - 1):
        edges = (-1,) + bars + (steps + k - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(k)])
    return np.array(rows, dtype=float).reshape(-1, k) / steps


def lattice_count(k: int, steps: int) -> int:
    return math.comb(steps + k - 1, k - 1)


def _with_cards(family: Family, config: SearchConfig) -> Family:
    """Apply the config's auxiliary cardinalities to a family that leaves them open."""
    cards = {k: int(v) for k, v in config.aux_cardinalities.items() if k in family.sizes}
    if all(family.sizes[k] == v for k, v in cards.items()):
        return family
    sizes = dict(family.sizes)
    sizes.update(cards)
    return make_family(family.pattern, channel=family.fixed.get("Y"), state=family.fixed.get("S"),
                       source=family.fixed.get("X"), crib_maps=family.crib_maps,
                       cards={k: v for k, v in sizes.items() if k in AUX_AXES})


def grid_count(family: Family, steps: int) -> int:
    total = 1
    for node in family.free_nodes:
        rows, k = family.row_layout(node)
        total *= lattice_count(k, steps) ** rows
    return total


def _grid_batch(family: Family, steps: int, start: int, stop: int) -> dict[str, np.ndarray]:
    # mixed radix over all free rows, last row of the last factor fastest
    idx = np.arange(start, stop, dtype=np.int64)
    plan = []
    for node in family.free_nodes:
        rows, k = family.row_layout(node)
        plan.append((node, rows, k, simplex_lattice(k, steps)))
    out = {}
    for node, rows, k, lat in reversed(plan):
        digits = np.empty((len(idx), rows), dtype=np.int64)
        for r in reversed(range(rows)):
            idx, digits[:, r] = np.divmod(idx, len(lat))
        out[node.key] = lat[digits].reshape((len(digits),) + family.node_shape(node))
    return out


def _random_batch(family: Family, rng: np.random.Generator, n: int) -> dict[str, np.ndarray]:
    out = {}
    for node in family.free_nodes:
        rows, k = family.row_layout(node)
        out[node.key] = rng.dirichlet(np.ones(k), size=(n, rows)).reshape(
            (n,) + family.node_shape(node))
    return out


def _batches(family: Family, config: SearchConfig) -> Iterator[tuple[int, dict]]:
    """(first global index, stacked factors) for the grid, then random samples."""
    g = grid_count(family, config.grid_steps) if config.grid else 0
    if g + config.random_samples > MAX_DISTRIBUTIONS:
        raise CapExceeded(f"{g + config.random_samples:,} distributions exceed the cap "
                          f"of {MAX_DISTRIBUTIONS:,}")
    for start in range(0, g, config.batch_size):
        yield start, _grid_batch(family, config.grid_steps, start, min(g, start + config.batch_size))
    rng = np.random.default_rng(config.seed)
    for start in range(0, config.random_samples, config.batch_size):
        n = min(config.batch_size, config.random_samples - start)
        yield g + start, _random_batch(family, rng, n)


def enumerate_grid(family: Family, config: SearchConfig) -> Iterator[FactorizedDist]:
    """Every lattice assignment of the free factors, in a fixed order."""
    family = _with_cards(family, config)
    g = grid_count(family, config.grid_steps)
    if g > MAX_DISTRIBUTIONS:
        raise CapExceeded(f"{g:,} lattice distributions exceed the cap of {MAX_DISTRIBUTIONS:,}")
    for start in range(0, g, config.batch_size):
        batch = _grid_batch(family, config.grid_steps, start, min(g, start + config.batch_size))
        n = len(next(iter(batch.values()))) if batch else 1
        for i in range(n):
            yield FactorizedDist(family, {k: v[i] for k, v in batch.items()})
        if not batch:
            return


def _slice(factors: Mapping[str, np.ndarray], i: int) -> dict[str, np.ndarray]:
    return {k: v[i] for k, v in factors.items()}


def _pareto(points: np.ndarray) -> np.ndarray:
    """Rows of ``points`` not weakly dominated by another row (one copy of duplicates)."""
    if len(points) == 0:
        return points
    order = np.lexsort((-points[:, 1], -points[:, 0]))
    p = points[order]
    best = np.maximum.accumulate(p[:, 1])
    keep = np.ones(len(p), dtype=bool)
    keep[1:] = p[1:, 1] > best[:-1]
    return p[keep]


class _HullScan:
    """Running comprehensive hull with first-index provenance per vertex."""

    def __init__(self, family: Family):
        self.family = family
        self.hull = np.zeros((1, 2))
        self.keys = np.array([-1])
        self.dists: dict[int, FactorizedDist] = {}

    def add(self, start: int, factors: Mapping[str, np.ndarray], verts: np.ndarray) -> None:
        nb, kv, _ = verts.shape
        flat = verts.reshape(-1, 2)
        fkeys = start + np.repeat(np.arange(nb), kv)
        pool = np.vstack([self.hull, _pareto(flat)])
        hull = comprehensive_hull(pool)
        keys = np.empty(len(hull), dtype=np.int64)
        for j, v in enumerate(hull):
            old = np.flatnonzero(np.abs(self.hull - v).max(axis=1) <= DEDUP_TOL)
            new = np.flatnonzero(np.abs(flat - v).max(axis=1) <= DEDUP_TOL)
            cands = [(int(self.keys[i]), self.hull[i]) for i in old if self.keys[i] >= 0]
            cands += [(int(fkeys[i]), flat[i]) for i in new]
            if not cands:
                keys[j] = -1
                continue
            # snap to the owner's own coordinates so batching cannot change the last bits
            k, coords = min(cands, key=lambda c: (c[0], tuple(c[1])))
            keys[j], hull[j] = k, coords
        dists = {}
        for k in keys:
            if k < 0:
                continue
            k = int(k)
            dists[k] = self.dists[k] if k in self.dists else FactorizedDist(
                self.family, _slice(factors, k - start))
        self.hull, self.keys, self.dists = hull, keys, dists

    def frontier(self) -> Frontier:
        prov = tuple(self.dists.get(int(k)) for k in self.keys)
        return Frontier(self.hull, self.family.rates, prov)


def achievable_frontier(family: Family, links: LinkCapacities, config: SearchConfig) -> Frontier:
    """Comprehensive hull of the polytopes of all scanned distributions."""
    family = _with_cards(family, config)
    scan = _HullScan(family)
    for start, factors in _batches(family, config):
        scan.add(start, factors, batch_vertices(family, links, factors))
    return scan.frontier()


def _weighted(verts: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray]:
    vals = lam * verts[..., 0] + (1 - lam) * verts[..., 1]
    best = vals.argmax(axis=1)
    return vals[np.arange(len(vals)), best], best


def _perturbations(factors: Mapping[str, np.ndarray], family: Family, step: float):
    """Stacked coordinatewise moves of every free row toward and away from each vertex."""
    moves = []
    for node in family.free_nodes:
        rows, k = family.row_layout(node)
        base = factors[node.key].reshape(rows, k)
        for r in range(rows):
            for j in range(k):
                toward = base.copy()
                toward[r] = (1 - step) * base[r]
                toward[r, j] += step
                moves.append((node, toward))
                if base[r, j] > 0 and k > 1:
                    away = base.copy()
                    cut = min(step, base[r, j])
                    away[r, j] -= cut
                    away[r] /= away[r].sum()
                    moves.append((node, away))
    out = {n.key: np.repeat(np.asarray(factors[n.key])[None], len(moves), axis=0)
           for n in family.free_nodes}
    for i, (node, t) in enumerate(moves):
        out[node.key][i] = t.reshape(family.node_shape(node))
    return out, len(moves)


def max_weighted_sum(family: Family, links: LinkCapacities, lam: float,
                     config: SearchConfig) -> tuple[RatePoint, FactorizedDist]:
    """Maximize ``lam*x + (1-lam)*y`` over polytope vertices, then refine locally."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError("weight must lie in [0, 1]")
    family = _with_cards(family, config)
    best_val, best_pt, best_factors = -np.inf, None, None
    for start, factors in _batches(family, config):
        verts = batch_vertices(family, links, factors)
        vals, which = _weighted(verts, lam)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_pt = vals[i], verts[i, which[i]]
            best_factors = _slice(factors, i)
    step = 0.25
    for _ in range(config.refine_iters):
        cand, n = _perturbations(best_factors, family, step)
        if n == 0:
            break
        verts = batch_vertices(family, links, cand)
        vals, which = _weighted(verts, lam)
        i = int(np.argmax(vals))
        if vals[i] > best_val + 1e-15:
            best_val, best_pt = vals[i], verts[i, which[i]]
            best_factors = _slice(cand, i)
        else:
            step /= 2
    x, y = (float(v) for v in best_pt)
    point = RatePoint(r1=y, r0=x) if family.rates == ("r0", "r1") else RatePoint(x, y)
    return point, FactorizedDist(family, best_factors)


def random_factorized(family: Family, rng: np.random.Generator) -> FactorizedDist:
    """One distribution with every free row drawn from a flat Dirichlet."""
    batch = _random_batch(family, rng, 1)
    return FactorizedDist(family, _slice(batch, 0))
