"""Single-letter rate regions and their 2-D geometry.

Each ``eval_*`` function takes one joint distribution and returns the
right-hand sides of the region's linear inequalities as a ``RegionBounds``.
The bound formulas are written once, against an entropy callable, so the
same expressions serve a single ``JointPmf`` and the batched tables used by
:mod:`cribcoop.search`.

Axis naming:

=============  ==========================================
MAC, two-way   ``U, X1, Z1, X2, Z2, Y``
common msg     ``U, X1, Z, X2, Y``
SR (source)    ``X, Xhat1, Xhat2, Z, U``
state          ``S, U, X1, Z, X2, Y``
action/state   ``W, V, A, S, X1, U, X2, Y``
=============  ==========================================

Gelfand-Pinsker penalties may drive a right-hand side negative. The raw
value is kept in ``RegionBounds`` and clamped to 0 only when a polytope is
built.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AxisMapMismatch,
    Infeasible,
    MissingAxis,
    NonDeterministicReconstruction,
    SourceMismatch,
    UnboundedRegion,
    ValidationError,
)
from .info import (
    EntropyFn,
    JointPmf,
    Pmf,
    PROB_TOL,
    cond_entropy_from,
    cond_mutual_info_from,
    entropy_fn,
)

COLLINEAR_TOL = 1e-12
DEDUP_TOL = 1e-9
FEAS_TOL = 1e-12

THM1_AXES = ("U", "X1", "Z1", "X2", "Z2", "Y")
THM2_AXES = ("U", "X1", "Z", "X2", "Y")
THM3_AXES = ("X", "Xhat1", "Xhat2", "Z", "U")
THM4_AXES = ("S", "U", "X1", "Z", "X2", "Y")
THM5_AXES = ("W", "V", "A", "S", "X1", "U", "X2", "Y")

# channel-side names -> source-side names for the corner duality
DUALITY_MAP = {"Y": "X", "X1": "Xhat1", "X2": "Xhat2"}


@dataclass(frozen=True)
class LinkCapacities:
    c12: float = 0.0
    c21: float = 0.0

    def __post_init__(self):
        for name in ("c12", "c21"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValidationError(f"{name} must be finite and nonnegative, got {v}")


@dataclass(frozen=True)
class Constraint:
    """``sum(coeffs[r] * r) <sense> rhs`` over named rates."""

    coeffs: tuple[tuple[str, float], ...]
    rhs: float
    sense: str = "<="
    label: str = ""

    def coeff(self, rate: str) -> float:
        return dict(self.coeffs).get(rate, 0.0)

    def value(self, point: Mapping[str, float]) -> float:
        return sum(c * point.get(r, 0.0) for r, c in self.coeffs)

    def satisfied(self, point: Mapping[str, float], tol: float = 1e-10) -> bool:
        v = self.value(point)
        return v <= self.rhs + tol if self.sense == "<=" else v >= self.rhs - tol

    def to_dict(self) -> dict:
        return {"label": self.label, "coeffs": dict(self.coeffs), "sense": self.sense,
                "rhs": self.rhs}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Constraint":
        return cls(tuple((k, float(v)) for k, v in d["coeffs"].items()), float(d["rhs"]),
                   d.get("sense", "<="), d.get("label", ""))


@dataclass(frozen=True)
class RegionBounds:
    constraints: tuple[Constraint, ...]
    feasible: bool = True
    rates: tuple[str, ...] = ("r1", "r2")
    theorem: str = ""
    report: Mapping[str, Any] | None = None

    def __post_init__(self):
        for c in self.constraints:
            if not math.isfinite(c.rhs):
                raise ValidationError(f"non-finite rhs in {c.label or c}")

    @property
    def rhs(self) -> np.ndarray:
        return np.array([c.rhs for c in self.constraints])

    def by_label(self, label: str) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)

    def contains(self, point: Mapping[str, float], tol: float = 1e-10) -> bool:
        if any(point.get(r, 0.0) < -tol for r in self.rates):
            return False
        return all(c.satisfied(point, tol) for c in self.constraints)

    def to_dict(self) -> dict:
        d = {"theorem": self.theorem, "rates": list(self.rates), "feasible": self.feasible,
             "constraints": [c.to_dict() for c in self.constraints]}
        if self.report is not None:
            d["report"] = dict(self.report)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "RegionBounds":
        return cls(tuple(Constraint.from_dict(c) for c in d["constraints"]),
                   bool(d.get("feasible", True)), tuple(d.get("rates", ("r1", "r2"))),
                   d.get("theorem", ""), d.get("report"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float = 0.0
    r0: float | None = None

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0 or (self.r0 is not None and self.r0 < 0):
            raise ValidationError(f"rates must be nonnegative: {self}")


@dataclass(frozen=True)
class Frontier:
    """Counterclockwise vertex list of a comprehensive region, starting at the origin."""

    points: np.ndarray
    axes: tuple[str, str] = ("r1", "r2")
    provenance: tuple[Any, ...] = field(default=())

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.provenance and len(self.provenance) != len(pts):
            raise ValidationError("provenance length must match vertex count")

    @property
    def vertices(self) -> list[RatePoint]:
        if self.axes == ("r0", "r1"):
            return [RatePoint(r1=float(y), r0=float(x)) for x, y in self.points]
        return [RatePoint(float(x), float(y)) for x, y in self.points]

    def contains(self, point: Sequence[float], tol: float = 1e-9) -> bool:
        return hull_distance(self.points, np.asarray(point, dtype=float)) <= tol

    def max_weighted(self, lam: float) -> tuple[float, int]:
        vals = lam * self.points[:, 0] + (1 - lam) * self.points[:, 1]
        i = int(np.argmax(vals))
        return float(vals[i]), i

    def max_sum_rate(self) -> float:
        return float((self.points[:, 0] + self.points[:, 1]).max())

    def to_dict(self) -> dict:
        return {"axes": list(self.axes), "vertices": self.points.tolist(),
                "provenance": [_jsonable(p) for p in self.provenance] if self.provenance else []}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Frontier":
        return cls(np.asarray(d["vertices"], dtype=float).reshape(-1, 2), tuple(d["axes"]),
                   tuple(d.get("provenance") or ()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.axes)
        for x, y in self.points:
            w.writerow([repr(float(x)), repr(float(y))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Frontier":
        rows = list(csv.reader(io.StringIO(text)))
        return cls(np.array([[float(a), float(b)] for a, b in rows[1:]]).reshape(-1, 2),
                   tuple(rows[0]))


def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# bound formulas, written against an entropy callable

Rows = list  # of (label, coeffs, rhs)


def _ops(H: EntropyFn):
    def I(a, b, c=()):
        return cond_mutual_info_from(H, a, b, c)

    def Hc(a, c=()):
        return cond_entropy_from(H, a, c)

    return I, Hc


def theorem1_rows(H: EntropyFn, links: LinkCapacities) -> Rows:
    I, Hc = _ops(H)
    return [
        ("R1", {"r1": 1.0}, I("X1", "Y", ("X2", "Z1", "U")) + Hc("Z1", "U") + links.c12),
        ("R2", {"r2": 1.0}, I("X2", "Y", ("X1", "Z2", "U")) + Hc("Z2", "U") + links.c21),
        ("R1+R2:coop", {"r1": 1.0, "r2": 1.0},
         I(("X1", "X2"), "Y", ("U", "Z1", "Z2")) + Hc(("Z1", "Z2"), "U") + links.c12 + links.c21),
        ("R1+R2:mac", {"r1": 1.0, "r2": 1.0}, I(("X1", "X2"), "Y")),
    ]


def common_message_rows(H: EntropyFn) -> Rows:
    """MAC with a common message and partially cribbing encoders, in (t0, t1, t2)."""
    I, Hc = _ops(H)
    return [
        ("R1", {"t1": 1.0}, Hc("Z1", "U") + I("X1", "Y", ("X2", "Z1", "U"))),
        ("R2", {"t2": 1.0}, Hc("Z2", "U") + I("X2", "Y", ("X1", "Z2", "U"))),
        ("R1+R2:coop", {"t1": 1.0, "t2": 1.0},
         I(("X1", "X2"), "Y", ("U", "Z1", "Z2")) + Hc(("Z1", "Z2"), "U")),
        ("R1+R2:mac", {"t0": 1.0, "t1": 1.0, "t2": 1.0}, I(("X1", "X2"), "Y")),
    ]


def theorem2_rows(H: EntropyFn, c12: float) -> Rows:
    I, Hc = _ops(H)
    return [
        ("R1", {"r1": 1.0}, I("X1", "Y", ("Z", "U")) + Hc("Z", "U") + c12),
        ("R0+R1", {"r0": 1.0, "r1": 1.0}, I(("X1", "U"), "Y")),
    ]


def theorem3_rows(H: EntropyFn, c12: float) -> Rows:
    I, Hc = _ops(H)
    r0 = I("X", ("Z", "U")) - Hc("Z", "U") - c12
    r0 = np.maximum(r0, 0.0) if isinstance(r0, np.ndarray) else max(r0, 0.0)
    return [
        ("R0", {"r0": 1.0}, r0),
        ("R0+R1", {"r0": 1.0, "r1": 1.0}, I(("Xhat1", "U"), "X")),
    ]


def theorem4_rows(H: EntropyFn, links: LinkCapacities):
    I, Hc = _ops(H)
    penalty = I("U", "S")
    rows = [
        ("R1", {"r1": 1.0}, Hc("Z", "U") + I("X1", "Y", ("S", "U", "X2", "Z")) + links.c12),
        ("R2", {"r2": 1.0}, I("X2", "Y", ("X1", "S", "U")) + links.c21 - penalty),
        ("R1+R2:mac", {"r1": 1.0, "r2": 1.0}, I(("X1", "X2"), "Y", "S")),
        ("R1+R2:coop", {"r1": 1.0, "r2": 1.0},
         I(("X1", "X2"), "Y", ("U", "Z", "S")) + Hc("Z", "U") + links.c12 + links.c21 - penalty),
    ]
    feasible = links.c21 >= penalty - FEAS_TOL
    return rows, feasible


def theorem5_rows(H: EntropyFn, c12: float) -> Rows:
    I, Hc = _ops(H)
    gp = I("U", "S", ("W", "V", "A"))
    r1 = np.minimum(Hc("X1", ("V", "W")), I("Y", ("V", "X1", "U"), ("W", "A")) - gp) + c12
    return [
        ("R1", {"r1": 1.0}, r1),
        ("R2", {"r2": 1.0}, I(("U", "A"), "Y", ("X1", "V", "W")) - gp),
        ("R1+R2:coop", {"r1": 1.0, "r2": 1.0}, I(("X1", "V", "U", "A"), "Y", "W") - gp + c12),
        ("R1+R2:mac", {"r1": 1.0, "r2": 1.0}, I(("X1", "V", "U", "A", "W"), "Y") - gp),
    ]


def action_case2_rows(H: EntropyFn) -> Rows:
    """The no-action, no-link specialization (state known at a cribbing encoder)."""
    I, Hc = _ops(H)
    gp = I("U", "S", ("W", "V"))
    return [
        ("R1", {"r1": 1.0}, Hc("X1", ("V", "W"))),
        ("R2", {"r2": 1.0}, I("U", "Y", ("X1", "V", "W")) - gp),
        ("R1+R2:coop", {"r1": 1.0, "r2": 1.0}, I(("X1", "V", "U"), "Y", "W") - gp),
        ("R1+R2:mac", {"r1": 1.0, "r2": 1.0}, I(("X1", "V", "U", "W"), "Y") - gp),
    ]


def _require(p: JointPmf, axes: Iterable[str]) -> None:
    missing = [a for a in axes if a not in p.names]
    if missing:
        raise MissingAxis(f"distribution lacks axes {missing}; has {p.names}")


def _bounds(rows: Rows, rates, theorem, feasible=True, sense="<=", report=None) -> RegionBounds:
    cons = tuple(Constraint(tuple(coeffs.items()), float(rhs), sense, label)
                 for label, coeffs, rhs in rows)
    return RegionBounds(cons, bool(feasible), tuple(rates), theorem, report)


def _H(p: JointPmf) -> EntropyFn:
    return entropy_fn(p.names, p.table)


def eval_theorem1(p: JointPmf, links: LinkCapacities, case: str = "A") -> RegionBounds:
    """Two-way conferencing plus partial cribbing; ``case`` only labels the family.

    Both cribbing cases share the inequalities; they differ in which
    distributions are admissible, which the caller guarantees.
    """
    if case not in ("A", "B"):
        raise ValidationError(f"case must be 'A' or 'B', got {case!r}")
    _require(p, THM1_AXES)
    return _bounds(theorem1_rows(_H(p), links), ("r1", "r2"), f"thm1{case}")


def substitute(rows: Rows, matrix: Mapping[str, Mapping[str, float]],
               offset: Mapping[str, float]) -> Rows:
    """Rewrite constraints in old variables ``t = M r + c`` as constraints in ``r``."""
    out = []
    for label, coeffs, rhs in rows:
        new: dict[str, float] = {}
        shift = 0.0
        for t, a in coeffs.items():
            for r, m in matrix.get(t, {}).items():
                new[r] = new.get(r, 0.0) + a * m
            shift += a * offset.get(t, 0.0)
        new = {r: v for r, v in new.items() if v != 0.0}
        out.append((label, new, rhs - shift))
    return out


def theorem1_via_common_message(p: JointPmf, links: LinkCapacities) -> RegionBounds:
    """Theorem-1 bounds obtained from the common-message region by rate substitution.

    The conference traffic becomes the common message, ``t0 = C12 + C21``, and the
    unshared parts are the private messages, ``t1 = R1 - C12``, ``t2 = R2 - C21``.
    """
    _require(p, THM1_AXES)
    rows = substitute(
        common_message_rows(_H(p)),
        matrix={"t0": {}, "t1": {"r1": 1.0}, "t2": {"r2": 1.0}},
        offset={"t0": links.c12 + links.c21, "t1": -links.c12, "t2": -links.c21},
    )
    return _bounds(rows, ("r1", "r2"), "thm1-via-common")


def eval_theorem2(p: JointPmf, c12: float) -> RegionBounds:
    _require(p, THM2_AXES)
    LinkCapacities(c12, 0.0)
    return _bounds(theorem2_rows(_H(p), c12), ("r0", "r1"), "thm2")


@dataclass(frozen=True)
class SRSpec:
    """Source, per-decoder distortion matrices ``d_i[x, xhat_i]`` and targets."""

    source: Pmf
    distortion1: np.ndarray
    distortion2: np.ndarray
    d1: float
    d2: float

    def __post_init__(self):
        d1 = np.asarray(self.distortion1, dtype=float)
        d2 = np.asarray(self.distortion2, dtype=float)
        k = self.source.alphabet_size
        if d1.ndim != 2 or d2.ndim != 2 or d1.shape[0] != k or d2.shape[0] != k:
            raise ValidationError("distortion matrices must have one row per source symbol")
        if (d1 < 0).any() or (d2 < 0).any() or self.d1 < 0 or self.d2 < 0:
            raise ValidationError("distortions and targets must be nonnegative")
        object.__setattr__(self, "distortion1", d1)
        object.__setattr__(self, "distortion2", d2)

    @classmethod
    def hamming(cls, source: Pmf, d1: float = 0.0, d2: float = 0.0) -> "SRSpec":
        k = source.alphabet_size
        d = 1.0 - np.eye(k)
        return cls(source, d, d, d1, d2)


def _check_deterministic(p: JointPmf, child: str, parents: Sequence[str]) -> None:
    joint = p.marginal(tuple(parents) + (child,))
    k = joint.shape[-1]
    rows = joint.reshape(-1, k)
    support = (rows > PROB_TOL).sum(axis=1)
    if (support > 1).any():
        raise NonDeterministicReconstruction(
            f"{child} is not a deterministic function of {tuple(parents)}")


def eval_theorem3(spec: SRSpec, p: JointPmf, c12: float) -> RegionBounds:
    """Lower bounds on (R0, R0+R1) for successive refinement with cribbing decoders."""
    _require(p, THM3_AXES)
    LinkCapacities(c12, 0.0)
    px = p.marginal("X")
    if px.shape != spec.source.probs.shape or np.abs(px - spec.source.probs).max() > PROB_TOL:
        raise SourceMismatch("X-marginal of the test channel differs from the source")
    _check_deterministic(p, "Xhat2", ("U", "Z"))
    pxx1 = p.marginal(("X", "Xhat1"))
    pxx2 = p.marginal(("X", "Xhat2"))
    if pxx1.shape != spec.distortion1.shape or pxx2.shape != spec.distortion2.shape:
        raise ValidationError("distortion matrix shapes do not match reconstruction alphabets")
    e1 = float((pxx1 * spec.distortion1).sum())
    e2 = float((pxx2 * spec.distortion2).sum())
    report = {"expected_d1": e1, "expected_d2": e2,
              "meets_d1": e1 <= spec.d1 + 1e-12, "meets_d2": e2 <= spec.d2 + 1e-12}
    return _bounds(theorem3_rows(_H(p), c12), ("r0", "r1"), "thm3", sense=">=", report=report)


def eval_theorem4(p: JointPmf, links: LinkCapacities, case: str = "sc") -> RegionBounds:
    if case not in ("sc", "c"):
        raise ValidationError(f"case must be 'sc' or 'c', got {case!r}")
    _require(p, THM4_AXES)
    rows, feasible = theorem4_rows(_H(p), links)
    return _bounds(rows, ("r1", "r2"), f"thm4{case}", feasible=feasible)


def eval_theorem5(p: JointPmf, c12: float, case: str = "sc") -> RegionBounds:
    if case not in ("sc", "c"):
        raise ValidationError(f"case must be 'sc' or 'c', got {case!r}")
    _require(p, THM5_AXES)
    LinkCapacities(c12, 0.0)
    return _bounds(theorem5_rows(_H(p), c12), ("r1", "r2"), f"thm5{case}")


def eval_action_case2(p: JointPmf) -> RegionBounds:
    """State known at a cribbing encoder, no actions and no conference link.

    ``p`` may carry a singleton ``A`` axis; it is ignored.
    """
    _require(p, ("W", "V", "S", "X1", "U", "X2", "Y"))
    if "A" in p.names:
        if p.size_of("A") != 1:
            raise ValidationError("action alphabet must be a singleton")
        p = p.marginal_pmf(tuple(n for n in p.names if n != "A"))
    return _bounds(action_case2_rows(_H(p)), ("r1", "r2"), "action-case2")


# ---------------------------------------------------------------------------
# geometry

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: np.ndarray, tol: float = COLLINEAR_TOL) -> np.ndarray:
    """Andrew's monotone chain; counterclockwise from the lowest-leftmost point.

    The chains use the exact turn sign. Afterwards a vertex is dropped when its
    turn is within ``tol`` of collinear and it lies between its neighbours; a
    tolerance inside the chains would also discard true vertices where the
    boundary doubles back across points a few ulps apart.
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    changed = True
    while changed and len(hull) > 2:
        changed = False
        for i in range(len(hull)):
            a, b, c = hull[i - 1], hull[i], hull[(i + 1) % len(hull)]
            if _cross(a, b, c) <= tol and np.dot(b - a, c - b) > 0:
                del hull[i]
                changed = True
                break
    return np.array(hull)


def comprehensive_hull(points: np.ndarray) -> np.ndarray:
    """Vertices of the convex, downward-closed hull of ``points`` in the positive quadrant.

    The result is counterclockwise from the origin. Merging is order-insensitive:
    the input is sorted before the hull is built.
    """
    pts = np.clip(np.asarray(points, dtype=float).reshape(-1, 2), 0.0, None)
    if len(pts) == 0:
        return np.zeros((1, 2))
    xmax, ymax = pts[:, 0].max(), pts[:, 1].max()
    pts = np.vstack([pts, [[0.0, 0.0], [xmax, 0.0], [0.0, ymax]]])
    hull = convex_hull(pts)
    if len(hull) == 0:
        return np.zeros((1, 2))
    start = int(np.argmin(hull[:, 0] + hull[:, 1]))
    hull = np.roll(hull, -start, axis=0)
    keep = [hull[0]]
    for v in hull[1:]:
        if np.abs(v - keep[-1]).max() > DEDUP_TOL:
            keep.append(v)
    if len(keep) > 1 and np.abs(keep[-1] - keep[0]).max() <= DEDUP_TOL:
        keep.pop()
    return np.array(keep)


def hull_distance(vertices: np.ndarray, point: np.ndarray) -> float:
    """How far ``point`` lies outside the comprehensive region spanned by ``vertices``.

    Returns 0 for points inside (or on the boundary). Points with negative
    coordinates are projected to the quadrant first, matching downward closure.
    """
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    q = np.clip(np.asarray(point, dtype=float), 0.0, None)
    if len(v) == 1:
        return float(np.abs(q - v[0]).max())
    # region = {x >= 0} intersected with halfplanes of each edge (ccw => inside is left)
    worst = 0.0
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        e = b - a
        length = math.hypot(*e)
        if length == 0:
            continue
        # signed distance to the right of edge a->b
        d = -((e[0]) * (q[1] - a[1]) - (e[1]) * (q[0] - a[0])) / length
        worst = max(worst, d)
    if n == 2:
        # degenerate segment region: distance to the segment itself
        a, b = v
        e = b - a
        t = np.clip(np.dot(q - a, e) / np.dot(e, e), 0.0, 1.0)
        worst = max(worst, float(np.linalg.norm(q - (a + t * e))) if _outside_segment_cone(v, q) else 0.0)
    return float(worst)


def _outside_segment_cone(v: np.ndarray, q: np.ndarray) -> bool:
    # a 2-vertex region is the origin plus one axis segment; any point not on it is outside
    a, b = v
    e = b - a
    cross = e[0] * (q[1] - a[1]) - e[1] * (q[0] - a[0])
    return abs(cross) > 1e-15 or np.dot(q - a, e) < 0 or np.dot(q - b, a - b) < 0


def bounds_to_polytope(b: RegionBounds) -> Frontier:
    """Vertices of ``{rates >= 0 : constraints}`` counterclockwise from the origin."""
    if not b.feasible:
        raise Infeasible(f"{b.theorem} bounds are infeasible for this distribution")
    if len(b.rates) != 2:
        raise ValidationError("only two-rate regions have a 2-D polytope")
    if any(c.sense != "<=" for c in b.constraints):
        raise UnboundedRegion("lower-bound regions are upward closed and have no finite polytope")
    x, y = b.rates
    # halfplanes a.r <= c, including the quadrant
    lines = [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
    for c in b.constraints:
        lines.append((c.coeff(x), c.coeff(y), max(c.rhs, 0.0)))
    A = np.array([[l[0], l[1]] for l in lines])
    rhs = np.array([l[2] for l in lines])
    cand = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            M = A[[i, j]]
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-15:
                continue
            cand.append(np.linalg.solve(M, rhs[[i, j]]))
    cand = np.array(cand)
    ok = np.all(cand @ A.T <= rhs + 1e-12, axis=1)
    verts = np.clip(cand[ok], 0.0, None)
    return Frontier(comprehensive_hull(verts), (x, y))


def polytope_vertices_batch(coeffs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Vectorized vertex candidates for many 2-D polytopes sharing constraint coefficients.

    ``coeffs`` is (m, 2), ``rhs`` is (B, m). Returns (B, K, 2) candidate
    vertices, with infeasible candidates replaced by the origin (which every
    polytope contains), so the hull of each row equals that polytope.
    """
    m = coeffs.shape[0]
    A = np.vstack([[-1.0, 0.0], [0.0, -1.0], coeffs])
    R = np.hstack([np.zeros((rhs.shape[0], 2)), np.clip(rhs, 0.0, None)])
    pairs = [(i, j) for i in range(m + 2) for j in range(i + 1, m + 2)
             if abs(A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]) >= 1e-15]
    out = np.zeros((rhs.shape[0], len(pairs), 2))
    for k, (i, j) in enumerate(pairs):
        M = A[[i, j]]
        inv = np.linalg.inv(M)
        out[:, k, :] = R[:, [i, j]] @ inv.T
    feas = np.all(np.einsum("bkd,md->bkm", out, A) <= R[:, None, :] + 1e-12, axis=2)
    out[~feas] = 0.0
    return np.clip(out, 0.0, None)


# ---------------------------------------------------------------------------
# duality

@dataclass(frozen=True)
class DualityReport:
    mac_corners: tuple[tuple[float, float], tuple[float, float]]
    sr_corners: tuple[tuple[float, float], tuple[float, float]]
    differences: tuple[tuple[float, float], tuple[float, float]]

    @property
    def max_difference(self) -> float:
        return max(abs(v) for pair in self.differences for v in pair)

    def to_dict(self) -> dict:
        return {"mac_corners": [list(c) for c in self.mac_corners],
                "sr_corners": [list(c) for c in self.sr_corners],
                "differences": [list(c) for c in self.differences],
                "max_difference": self.max_difference}


def corner_points(H: EntropyFn, out: str, inp: str, c12: float):
    """The two (R0, R1) corners shared by the channel and source regions."""
    I, Hc = _ops(H)
    hz = Hc("Z", "U")
    c1 = (I(out, ("Z", "U")) - hz - c12, I(out, inp, ("Z", "U")) + hz + c12)
    c2 = (I(out, (inp, "U")), 0.0)
    return c1, c2


def check_duality_corners(p_mac: JointPmf, p_sr: JointPmf, c12: float) -> DualityReport:
    _require(p_mac, THM2_AXES)
    _require(p_sr, ("U", "Xhat1", "Z", "Xhat2", "X"))
    renamed = p_mac.rename(DUALITY_MAP)
    if sorted(renamed.names) != sorted(p_sr.names):
        raise AxisMapMismatch(f"{p_sr.names} is not a renaming of {p_mac.names}")
    aligned = renamed.transpose(p_sr.names)
    if aligned.shape != p_sr.shape or np.abs(aligned.table - p_sr.table).max() > PROB_TOL:
        raise AxisMapMismatch("source-side table is not the renamed channel-side table")
    mac = corner_points(_H(p_mac), "Y", "X1", c12)
    sr = corner_points(_H(p_sr), "X", "Xhat1", c12)
    diff = tuple((a[0] - b[0], a[1] - b[1]) for a, b in zip(mac, sr))
    return DualityReport(mac, sr, diff)
