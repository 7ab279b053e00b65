"""Finite staircases (order ideals) in N^d.

A staircase is stored as an explicit, lexicographically sorted ``(n, d)``
integer array. Axes are numbered from 1 in the public API, matching the usual
coordinate notation x_1, ..., x_d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, NotDownwardClosed, ParseError

MAX_DIM = 8


def as_array(points, dim: int | None = None) -> np.ndarray:
    """Coerce points to an ``(n, dim)`` int64 array (no sorting, no dedup)."""
    if isinstance(points, Staircase):
        points = points.array
    arr = np.asarray(points, dtype=np.int64)
    if arr.size == 0:
        if dim is None:
            dim = arr.shape[1] if arr.ndim == 2 else 0
        return np.zeros((0, dim), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a list of points, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"points have length {arr.shape[1]}, expected {dim}")
    return arr


def canonical(arr: np.ndarray) -> np.ndarray:
    """Sorted, duplicate-free copy of a point array (ascending lexicographic)."""
    if len(arr) == 0:
        arr = np.zeros((0, arr.shape[1]), dtype=np.int64)
        arr.setflags(write=False)
        return arr
    arr = np.unique(arr, axis=0)  # np.unique sorts rows lexicographically
    arr.setflags(write=False)
    return arr


def _packing(arrays: list[np.ndarray]):
    """Mixed-radix int64 weights that injectively encode rows, or None on overflow."""
    dim = arrays[0].shape[1]
    top = max((int(a.max()) for a in arrays if a.size), default=0)
    base = top + 1
    if base ** max(dim, 1) >= 2**62:
        return None
    return base ** np.arange(dim, dtype=np.int64)


def isin(points: np.ndarray, pool: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of ``points`` occur in ``pool``."""
    if len(points) == 0:
        return np.zeros(0, dtype=bool)
    if len(pool) == 0:
        return np.zeros(len(points), dtype=bool)
    if (points < 0).any():
        # negative coordinates never belong to a subset of N^d
        mask = np.zeros(len(points), dtype=bool)
        ok = (points >= 0).all(axis=1)
        mask[ok] = isin(points[ok], pool)
        return mask
    weights = _packing([points, pool])
    if weights is None:
        pool_set = set(map(tuple, pool.tolist()))
        return np.array([tuple(r) in pool_set for r in points.tolist()], dtype=bool)
    return np.isin(points @ weights, pool @ weights)


def _closure_witness(arr: np.ndarray):
    """First (p, p - e_i) with p in arr and p - e_i not in arr, else None."""
    for i in range(arr.shape[1]):
        rows = arr[arr[:, i] > 0]
        if not len(rows):
            continue
        lower = rows.copy()
        lower[:, i] -= 1
        bad = ~isin(lower, arr)
        if bad.any():
            j = int(np.argmax(bad))
            return tuple(rows[j].tolist()), tuple(lower[j].tolist())
    return None


def _down_closure(arr: np.ndarray) -> np.ndarray:
    dim = arr.shape[1]
    if len(arr) == 0:
        return arr
    # union of boxes [0, p] for every generator p
    maxima = canonical(arr)
    pieces = []
    for p in maxima:
        grids = np.meshgrid(*[np.arange(v + 1) for v in p], indexing="ij")
        pieces.append(np.stack([g.ravel() for g in grids], axis=1).reshape(-1, dim))
    return canonical(np.concatenate(pieces))


class Staircase:
    """Immutable finite downward-closed subset of N^d.

    Build one with :func:`make_staircase` or :func:`regular_staircase`; the
    constructor trusts its input to be canonical and closed.
    """

    __slots__ = ("dim", "_arr", "_tuples")

    def __init__(self, dim: int, arr: np.ndarray):
        self.dim = dim
        if not arr.flags.writeable:
            self._arr = arr
        else:
            self._arr = arr.copy()
            self._arr.setflags(write=False)
        self._tuples = None

    @property
    def array(self) -> np.ndarray:
        return self._arr

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        if self._tuples is None:
            self._tuples = tuple(map(tuple, self._arr.tolist()))
        return self._tuples

    def __len__(self) -> int:
        return len(self._arr)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point) -> bool:
        p = as_array([point], self.dim)
        return bool(isin(p, self._arr)[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Staircase):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._arr, other._arr)

    def __hash__(self) -> int:
        return hash((self.dim, self._arr.tobytes()))

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"Staircase(dim={self.dim}, points={list(self.points)})"
        return f"Staircase(dim={self.dim}, card={len(self)})"

    def to_json(self) -> str:
        return serialize(self)


def make_staircase(dim: int, points: Iterable = (), close: bool = False) -> Staircase:
    """Validate ``points`` as a staircase in N^dim.

    With ``close=True`` the downward closure of the generating set is
    returned; otherwise a set that is not closed raises
    :class:`NotDownwardClosed` carrying a witness.
    """
    if not 1 <= dim <= MAX_DIM:
        raise DimensionMismatch(f"dimension {dim} outside 1..{MAX_DIM}")
    arr = as_array(list(points) if not isinstance(points, np.ndarray) else points, dim)
    if (arr < 0).any():
        raise ValueError("coordinates must be non-negative")
    if close:
        return Staircase(dim, _down_closure(arr))
    arr = canonical(arr)
    witness = _closure_witness(arr)
    if witness is not None:
        raise NotDownwardClosed(*witness)
    return Staircase(dim, arr)


def empty_staircase(dim: int) -> Staircase:
    return Staircase(dim, canonical(np.zeros((0, dim), dtype=np.int64)))


def _points_with_sum_below(d: int, m: int) -> np.ndarray:
    if m <= 0:
        return np.zeros((0, d), dtype=np.int64)
    arr = np.arange(m, dtype=np.int64).reshape(-1, 1)
    for _ in range(d - 1):
        budget = m - arr.sum(axis=1)  # next coordinate ranges over 0..budget-1
        reps = np.repeat(arr, budget, axis=0)
        starts = np.cumsum(budget) - budget
        nxt = np.arange(budget.sum(), dtype=np.int64) - np.repeat(starts, budget)
        arr = np.column_stack([reps, nxt])
    return arr


def regular_staircase(d: int, m: int) -> Staircase:
    """R_m: all exponents with coordinate sum < m. ``|R_m| = C(m-1+d, d)``."""
    if d < 1 or m < 0:
        raise ValueError("need d >= 1 and m >= 0")
    return Staircase(d, canonical(_points_with_sum_below(d, m)))


def shell(d: int, m: int) -> np.ndarray:
    """S_m = R_{m+1} - R_m, the points of coordinate sum exactly m."""
    arr = _points_with_sum_below(d, m + 1)
    return canonical(arr[arr.sum(axis=1) == m])


def cardinality(E: Staircase) -> int:
    return len(E)


def _check_dims(*items) -> int:
    dims = {x.dim if isinstance(x, Staircase) else x.shape[1] for x in items}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return dims.pop()


def contains(E: Staircase, F) -> bool:
    """True iff F is a subset of E."""
    _check_dims(E, F)
    F = F.array if isinstance(F, Staircase) else F
    return bool(isin(F, E.array).all())


def missing(E: Staircase, F) -> np.ndarray:
    """Points of F not in E."""
    _check_dims(E, F)
    F = F.array if isinstance(F, Staircase) else F
    return F[~isin(F, E.array)]


@dataclass(frozen=True)
class HeightFunction:
    """h(b) = number of x with (b with x inserted at ``axis``) in E."""

    dim: int
    axis: int
    support: dict = field(default_factory=dict)

    def __call__(self, base) -> int:
        return self.support.get(tuple(base), 0)

    def total(self) -> int:
        return sum(self.support.values())

    def is_monotone(self) -> bool:
        # checking unit translates on the support plus its boundary suffices
        for a, h in self.support.items():
            for j in range(self.dim):
                up = list(a)
                up[j] += 1
                if self(up) > h:
                    return False
                if a[j] > 0:
                    down = list(a)
                    down[j] -= 1
                    if self(down) < h:
                        return False
        return True


def height_function(E: Staircase, axis: int) -> HeightFunction:
    if not 1 <= axis <= E.dim:
        raise ValueError(f"axis {axis} outside 1..{E.dim}")
    base = np.delete(E.array, axis - 1, axis=1)
    if len(base) == 0:
        return HeightFunction(E.dim - 1, axis, {})
    keys, counts = np.unique(base, axis=0, return_counts=True)
    support = {tuple(k): int(c) for k, c in zip(keys.tolist(), counts.tolist())}
    return HeightFunction(E.dim - 1, axis, support)


def from_heights(dim: int, axis: int, support: dict) -> Staircase:
    """Rebuild a staircase from a height function along ``axis``."""
    rows = []
    for b, h in support.items():
        for x in range(h):
            p = list(b)
            p.insert(axis - 1, x)
            rows.append(p)
    arr = as_array(rows, dim) if rows else np.zeros((0, dim), dtype=np.int64)
    return make_staircase(dim, arr)


def slice_at(E: Staircase, index: int) -> Staircase:
    """T_i = {m in N^(d-1) : (i, m) in E}, slicing along the first axis."""
    if E.dim < 2:
        raise DimensionMismatch("slicing needs d >= 2")
    rows = E.array[E.array[:, 0] == index][:, 1:]
    return Staircase(E.dim - 1, canonical(np.ascontiguousarray(rows)))


def serialize(E: Staircase) -> str:
    return json.dumps({"dim": E.dim, "points": E.array.tolist()}, separators=(",", ":"))


def parse(text: str) -> Staircase:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or set(obj) != {"dim", "points"}:
        raise ParseError('expected an object with keys "dim" and "points"')
    dim, pts = obj["dim"], obj["points"]
    if not isinstance(dim, int) or isinstance(dim, bool) or not isinstance(pts, list):
        raise ParseError("bad types for dim/points")
    for p in pts:
        if not (isinstance(p, list) and len(p) == dim
                and all(isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in p)):
            raise ParseError(f"bad point {p!r}")
    return make_staircase(dim, np.array(pts, dtype=np.int64).reshape(-1, dim))


def regular_cardinality(d: int, m: int) -> int:
    return comb(m - 1 + d, d) if m > 0 else 0
