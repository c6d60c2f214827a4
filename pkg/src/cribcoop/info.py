"""Finite-alphabet probability tables and information measures.

All logarithms are base 2. ``0 log 0`` is taken as 0, so conditioning events of
probability zero contribute nothing.

The measures are computed from marginal entropies,

    H(A|B)   = H(A,B) - H(B)
    I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)

and the same code path serves single tables (``JointPmf``) and stacks of
tables with a leading batch axis (used by the distribution search).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    NegativeMass,
    NotNormalized,
    OverlappingAxes,
    SizeMismatch,
    TableTooLarge,
    UnknownAxis,
    ValidationError,
)

PROB_TOL = 1e-12
NEG_TOL = 1e-15
IDENTITY_TOL = 1e-10
MAX_CELLS = 10_000_000

AxisSpec = Union[str, Sequence[str]]


def _as_names(axes: AxisSpec) -> tuple[str, ...]:
    if isinstance(axes, str):
        return (axes,)
    return tuple(axes)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Pmf:
    """A distribution over ``{0, ..., alphabet_size - 1}``."""

    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(np.ravel(self.probs))
        if p.size == 0:
            raise ValidationError("empty pmf")
        object.__setattr__(self, "probs", p)

    @property
    def alphabet_size(self) -> int:
        return int(self.probs.size)

    def as_joint(self, name: str = "X") -> "JointPmf":
        return JointPmf(((name, self.alphabet_size),), self.probs)


@dataclass(frozen=True)
class JointPmf:
    """Dense joint table over named axes, row-major with the last axis fastest."""

    axes: tuple[tuple[str, int], ...]
    table: np.ndarray

    def __post_init__(self):
        axes = tuple((str(n), int(k)) for n, k in self.axes)
        names = [n for n, _ in axes]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate axis names in {names}")
        if any(k < 1 for _, k in axes):
            raise ValidationError("axis sizes must be positive")
        shape = tuple(k for _, k in axes)
        cells = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if cells > MAX_CELLS:
            raise TableTooLarge(f"{cells} cells exceeds cap {MAX_CELLS}")
        t = np.asarray(self.table, dtype=float)
        if t.size != cells:
            raise SizeMismatch(f"table has {t.size} entries, axes need {cells}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "table", _frozen(t.reshape(shape)))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.axes)

    def size_of(self, name: str) -> int:
        return self.shape[self.axis_index(name)]

    def axis_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownAxis(f"axis {name!r} not in {self.names}") from None

    def marginal(self, axes: AxisSpec) -> np.ndarray:
        """Marginal table on ``axes``, in the order given."""
        names = _as_names(axes)
        idx = [self.axis_index(n) for n in names]
        drop = tuple(i for i in range(len(self.axes)) if i not in idx)
        m = self.table.sum(axis=drop)
        kept = [i for i in range(len(self.axes)) if i in idx]
        return np.transpose(m, [kept.index(i) for i in idx])

    def marginal_pmf(self, axes: AxisSpec) -> "JointPmf":
        names = _as_names(axes)
        return JointPmf(tuple((n, self.size_of(n)) for n in names), self.marginal(names))

    def transpose(self, order: Sequence[str]) -> "JointPmf":
        order = tuple(order)
        if sorted(order) != sorted(self.names):
            raise UnknownAxis(f"{order} is not a permutation of {self.names}")
        perm = [self.axis_index(n) for n in order]
        return JointPmf(tuple(self.axes[i] for i in perm), np.transpose(self.table, perm))

    def rename(self, mapping: Mapping[str, str]) -> "JointPmf":
        for old in mapping:
            self.axis_index(old)
        return JointPmf(tuple((mapping.get(n, n), k) for n, k in self.axes), self.table)

    def to_dict(self) -> dict:
        return {
            "axes": [{"name": n, "size": k} for n, k in self.axes],
            "table": [float(v) for v in self.table.ravel()],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "JointPmf":
        try:
            axes = tuple((a["name"], int(a["size"])) for a in d["axes"])
            table = np.asarray(d["table"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed JointPmf document: {exc}") from None
        return cls(axes, table)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "JointPmf":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DeterministicMap:
    """A function ``{0..domain_size-1} -> {0..codomain_size-1}`` given as a table."""

    domain_size: int
    codomain_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        if len(table) != self.domain_size:
            raise SizeMismatch(f"map table has {len(table)} entries for domain {self.domain_size}")
        if any(v < 0 or v >= self.codomain_size for v in table):
            raise ValidationError(f"map values must lie in [0, {self.codomain_size})")
        object.__setattr__(self, "table", table)

    @classmethod
    def identity(cls, k: int) -> "DeterministicMap":
        return cls(k, k, tuple(range(k)))

    @classmethod
    def constant(cls, k: int) -> "DeterministicMap":
        return cls(k, 1, (0,) * k)

    @classmethod
    def from_function(cls, k: int, fn: Callable[[int], int], codomain_size: int | None = None):
        values = tuple(int(fn(i)) for i in range(k))
        return cls(k, codomain_size if codomain_size is not None else max(values) + 1, values)

    def __call__(self, x):
        return np.asarray(self.table)[x]

    def to_dict(self) -> dict:
        return {"domain_size": self.domain_size, "codomain_size": self.codomain_size,
                "table": list(self.table)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DeterministicMap":
        return cls(int(d["domain_size"]), int(d["codomain_size"]), tuple(d["table"]))


def validate_pmf(p: Union[Pmf, JointPmf, np.ndarray]) -> None:
    """Raise ``NegativeMass`` or ``NotNormalized`` unless ``p`` is a distribution."""
    t = np.asarray(p.probs if isinstance(p, Pmf) else p.table if isinstance(p, JointPmf) else p,
                   dtype=float)
    if not np.all(np.isfinite(t)):
        raise NotNormalized("non-finite probability mass")
    if t.size and t.min() < -NEG_TOL:
        raise NegativeMass(f"entry {t.min():.3e} is negative")
    total = t.sum()
    if abs(total - 1.0) > PROB_TOL:
        raise NotNormalized(f"mass sums to {total!r}")


def xlogx_sum(t: np.ndarray, axis=None) -> np.ndarray:
    """``-sum t log2 t`` over ``axis`` with the 0 log 0 = 0 convention."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    logs = np.zeros_like(t)
    np.log2(t, out=logs, where=pos)
    return -np.sum(np.where(pos, t * logs, 0.0), axis=axis)


def table_entropy(table: np.ndarray, keep: Sequence[int], batch_ndim: int = 0) -> np.ndarray:
    """Entropy of the marginal of ``table`` on axes ``keep``.

    Axis numbers in ``keep`` are relative to the distribution axes, i.e. after
    the first ``batch_ndim`` axes. Returns an array of the batch shape.
    """
    nd = table.ndim - batch_ndim
    keep = set(keep)
    drop = tuple(batch_ndim + i for i in range(nd) if i not in keep)
    m = table.sum(axis=drop) if drop else table
    flat = m.reshape(m.shape[:batch_ndim] + (-1,))
    return xlogx_sum(flat, axis=-1)


EntropyFn = Callable[[AxisSpec], Union[float, np.ndarray]]


def entropy_fn(names: Sequence[str], table: np.ndarray, batch_ndim: int = 0) -> EntropyFn:
    """A memoized ``H(axes)`` over a (possibly batched) table with named axes."""
    names = tuple(names)
    cache: dict[frozenset, np.ndarray] = {}

    def H(axes: AxisSpec):
        sel = frozenset(_as_names(axes))
        if not sel:
            return 0.0 if batch_ndim == 0 else np.zeros(table.shape[:batch_ndim])
        if sel not in cache:
            missing = sel.difference(names)
            if missing:
                raise UnknownAxis(f"axes {sorted(missing)} not in {names}")
            value = table_entropy(table, [names.index(n) for n in sel], batch_ndim)
            cache[sel] = float(value) if batch_ndim == 0 else value
        return cache[sel]

    return H


def _disjoint(*groups: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for g in groups:
        if len(set(g)) != len(g) or seen.intersection(g):
            raise OverlappingAxes(f"axis groups {groups} overlap")
        seen.update(g)


def entropy(p: JointPmf, axes: AxisSpec) -> float:
    names = _as_names(axes)
    if not names:
        raise ValidationError("entropy needs at least one axis")
    return entropy_fn(p.names, p.table)(names)


def cond_entropy_from(H: EntropyFn, target: AxisSpec, given: AxisSpec = ()):
    t, g = _as_names(target), _as_names(given)
    _disjoint(t, g)
    return H(t + g) - H(g)


def cond_mutual_info_from(H: EntropyFn, a: AxisSpec, b: AxisSpec, given: AxisSpec = (),
                          clamp: bool = True):
    a, b, c = _as_names(a), _as_names(b), _as_names(given)
    _disjoint(a, b, c)
    value = H(a + c) + H(b + c) - H(a + b + c) - H(c)
    if clamp:
        value = np.maximum(value, 0.0) if isinstance(value, np.ndarray) else max(value, 0.0)
    return value


def cond_entropy(p: JointPmf, target_axes: AxisSpec, given_axes: AxisSpec = ()) -> float:
    """H(target | given) in bits."""
    return max(cond_entropy_from(entropy_fn(p.names, p.table), target_axes, given_axes), 0.0)


def cond_mutual_info(p: JointPmf, a_axes: AxisSpec, b_axes: AxisSpec,
                     given_axes: AxisSpec = ()) -> float:
    """I(A;B|C) in bits; round-off negatives are clamped to 0."""
    return cond_mutual_info_from(entropy_fn(p.names, p.table), a_axes, b_axes, given_axes)


def mutual_info(p: JointPmf, a_axes: AxisSpec, b_axes: AxisSpec) -> float:
    return cond_mutual_info(p, a_axes, b_axes, ())


def pushforward(p: JointPmf, source_axis: AxisSpec, fmap: DeterministicMap,
                new_axis_name: str) -> JointPmf:
    """Append an axis carrying ``fmap(source)``.

    ``source_axis`` may name several axes, in which case the map's domain is
    their product alphabet in row-major order.
    """
    src = _as_names(source_axis)
    idx = [p.axis_index(n) for n in src]
    dom = int(np.prod([p.shape[i] for i in idx]))
    if fmap.domain_size != dom:
        raise SizeMismatch(f"map domain {fmap.domain_size} != source alphabet {dom}")
    if new_axis_name in p.names:
        raise ValidationError(f"axis {new_axis_name!r} already exists")
    # indicator[x..., z] = 1{z = f(x)}, broadcast against the table
    ind = np.zeros((dom, fmap.codomain_size))
    ind[np.arange(dom), fmap.table] = 1.0
    ind_shape = [1] * len(p.axes) + [fmap.codomain_size]
    for i in idx:
        ind_shape[i] = p.shape[i]
    # reshape respects row-major order only if the source axes appear in table order
    order = sorted(range(len(idx)), key=lambda j: idx[j])
    if order != list(range(len(idx))):
        ind = ind.reshape([p.shape[i] for i in idx] + [fmap.codomain_size])
        ind = np.transpose(ind, order + [len(idx)])
    table = p.table[..., None] * ind.reshape(ind_shape)
    return JointPmf(p.axes + ((new_axis_name, fmap.codomain_size),), table)


def product_pmf(*factors: tuple[str, np.ndarray]) -> JointPmf:
    """Independent joint of several named one-dimensional pmfs."""
    table = np.ones(())
    axes = []
    for name, probs in factors:
        probs = np.asarray(probs, dtype=float)
        table = np.multiply.outer(table, probs)
        axes.append((name, probs.size))
    return JointPmf(tuple(axes), table)


def load_joint(path) -> JointPmf:
    with open(path) as fh:
        return JointPmf.from_dict(json.load(fh))


def binary_entropy(q: float) -> float:
    return float(xlogx_sum(np.array([q, 1.0 - q])))
