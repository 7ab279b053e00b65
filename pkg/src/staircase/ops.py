"""Staircase operators: sum along an axis, dilation, and Delta-specialization.

Delta-specialization pushes every line of direction Delta towards its +Delta
end while keeping the number of points on each line. On a line L the points
of L ∩ N^d are ordered m_1 < m_2 < ... with m_1 the point furthest along
+Delta, and ``p < q`` iff ``p = q + i*Delta`` for some integer ``i >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidDirection, NotDisjoint, NotOnSameLine
from .lattice import (
    Staircase,
    as_array,
    canonical,
    from_heights,
    height_function,
    make_staircase,
)


@dataclass(frozen=True)
class Direction:
    """Primitive integer vector with entries of both signs."""

    delta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(int(v) for v in self.delta))
        if not validate_direction(self.delta, "weak"):
            raise InvalidDirection(f"{self.delta} is not primitive with mixed signs")

    @property
    def dim(self) -> int:
        return len(self.delta)

    @property
    def strong(self) -> bool:
        return validate_direction(self.delta, "strong")

    @property
    def pivot(self) -> int | None:
        """0-based index of the entry equal to 1 for a strongly valid direction."""
        if not self.strong:
            return None
        return self.delta.index(1)

    def to_json(self) -> dict:
        return {"delta": list(self.delta)}

    def __iter__(self):
        return iter(self.delta)

    def __len__(self):
        return len(self.delta)


def as_direction(delta) -> Direction:
    return delta if isinstance(delta, Direction) else Direction(tuple(delta))


def validate_direction(delta: Sequence[int], level: str = "weak") -> bool:
    """Weak: primitive with two entries of opposite sign.

    Strong: exactly one entry equals 1, every other entry is <= 0 and at least
    one of them is nonzero (this makes the image of a staircase a staircase).
    """
    delta = tuple(int(v) for v in delta)
    if level not in ("weak", "strong"):
        raise ValueError(f"unknown level {level!r}")
    if not delta:
        return False
    g = 0
    for v in delta:
        g = gcd(g, v)
    if g != 1:
        return False
    weak = any(v > 0 for v in delta) and any(v < 0 for v in delta)
    if level == "weak":
        return weak
    positives = [i for i, v in enumerate(delta) if v > 0]
    return (len(positives) == 1 and delta[positives[0]] == 1
            and any(v != 0 for i, v in enumerate(delta) if i != positives[0]))


# --- line indexing ----------------------------------------------------------


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (1 if a >= 0 else -1), 0, abs(a)
    x, y, g = _ext_gcd(b, a % b)
    return y, x - (a // b) * y, g


def _hermite(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (full row rank)."""
    A = [r[:] for r in rows]
    m, n = len(A), len(A[0]) if A else 0
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            x, y, g = _ext_gcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(ra, rb)]
            A[i] = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            A[i] = [u - q * v for u, v in zip(A[i], A[r])]
        r += 1
    return A


@lru_cache(maxsize=None)
def line_forms(delta: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Canonical basis (Hermite form) of the integer forms vanishing on delta.

    Two lattice points lie on the same Delta-line iff all forms agree on them.
    """
    Direction(delta)
    d = len(delta)
    # unimodular column operations U with delta @ U = (±1, 0, ..., 0)
    U = [[int(i == j) for j in range(d)] for i in range(d)]
    v = list(delta)
    for j in range(1, d):
        if v[j] == 0:
            continue
        x, y, g = _ext_gcd(v[0], v[j])
        a, b = v[0] // g, v[j] // g
        for row in U:
            c0, cj = row[0], row[j]
            row[0], row[j] = x * c0 + y * cj, -b * c0 + a * cj
        v[0], v[j] = g, 0
    kernel = [[U[i][j] for i in range(d)] for j in range(1, d)]
    return tuple(tuple(r) for r in _hermite(kernel))


def line_keys(points: np.ndarray, delta: tuple[int, ...]) -> np.ndarray:
    forms = np.array(line_forms(delta), dtype=np.int64).reshape(-1, len(delta))
    return points @ forms.T


def _forward_steps(points: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """How many +Delta steps stay inside N^d; equals the 0-based rank on the line."""
    neg = delta < 0
    return (points[:, neg] // -delta[neg]).min(axis=1)


def _backward_steps(points: np.ndarray, delta: np.ndarray) -> np.ndarray:
    pos = delta > 0
    return (points[:, pos] // delta[pos]).min(axis=1)


def line_through(point, delta) -> np.ndarray:
    """All of L ∩ N^d for the Delta-line L through ``point``, as m_1, m_2, ..."""
    dvec = np.array(as_direction(delta).delta, dtype=np.int64)
    p = as_array([point], len(dvec))
    if (p < 0).any():
        raise ValueError("point must lie in N^d")
    fwd = int(_forward_steps(p, dvec)[0])
    back = int(_backward_steps(p, dvec)[0])
    steps = np.arange(fwd, -back - 1, -1, dtype=np.int64)
    return p[0] + steps[:, None] * dvec


def delta_order_less(p, q, delta) -> bool:
    """The strict order on a Delta-line: p < q iff p = q + i*Delta with i >= 1."""
    delta = as_direction(delta).delta
    diff = [a - b for a, b in zip(p, q)]
    if len(p) != len(delta) or len(q) != len(delta):
        raise DimensionMismatch("point/direction lengths differ")
    pivot = next(i for i, v in enumerate(delta) if v != 0)
    if diff[pivot] % delta[pivot]:
        raise NotOnSameLine(f"{tuple(p)} and {tuple(q)} are not on one {delta}-line")
    i = diff[pivot] // delta[pivot]
    if any(a != i * v for a, v in zip(diff, delta)):
        raise NotOnSameLine(f"{tuple(p)} and {tuple(q)} are not on one {delta}-line")
    return i >= 1


@dataclass(frozen=True)
class LineBucket:
    key: tuple[int, ...]
    representative: tuple[int, ...]  # m_1, the +Delta end of the full line
    members: tuple[tuple[int, ...], ...]  # ordered by (<)

    def to_json(self) -> dict:
        return {"key": list(self.key), "representative": list(self.representative),
                "members": [list(m) for m in self.members]}


def _grouping(points: np.ndarray, delta: tuple[int, ...]):
    """Sort order grouping points by line, each line in (<) order.

    Returns (order, keys, ranks, group_start) where ``group_start`` flags the
    first element of each line in the sorted order.
    """
    dvec = np.array(delta, dtype=np.int64)
    keys = line_keys(points, delta)
    ranks = _forward_steps(points, dvec)
    order = np.lexsort((ranks,) + tuple(keys.T[::-1]))
    skeys = keys[order]
    start = np.ones(len(points), dtype=bool)
    if len(points) > 1:
        start[1:] = (skeys[1:] != skeys[:-1]).any(axis=1)
    return order, keys, ranks, start


def line_decompose(S, delta) -> list[LineBucket]:
    direction = as_direction(delta)
    pts = canonical(as_array(S, direction.dim))
    if len(pts) == 0:
        return []
    dvec = np.array(direction.delta, dtype=np.int64)
    order, keys, ranks, start = _grouping(pts, direction.delta)
    buckets = []
    bounds = list(np.flatnonzero(start)) + [len(pts)]
    for a, b in zip(bounds[:-1], bounds[1:]):
        idx = order[a:b]
        first = pts[idx[0]]
        head = first + ranks[idx[0]] * dvec
        buckets.append(LineBucket(tuple(keys[idx[0]].tolist()), tuple(head.tolist()),
                                  tuple(map(tuple, pts[idx].tolist()))))
    return buckets


def _images(points: np.ndarray, delta: tuple[int, ...]) -> np.ndarray:
    """Image of each point under the increasing correspondence on its line."""
    if len(points) == 0:
        return points.copy()
    dvec = np.array(delta, dtype=np.int64)
    order, _, ranks, start = _grouping(points, delta)
    n = len(points)
    group_id = np.cumsum(start) - 1
    first_pos = np.flatnonzero(start)
    position = np.arange(n) - first_pos[group_id]  # 0-based place within its line
    shift = np.empty(n, dtype=np.int64)
    shift[order] = ranks[order] - position
    return points + shift[:, None] * dvec


def delta_specialize(delta, S):
    """Delta(S): on every Delta-line keep the count, occupy the first slots.

    A :class:`Staircase` input with a strongly valid direction returns a
    validated Staircase; anything else returns a canonical point array.
    """
    direction = as_direction(delta)
    is_stair = isinstance(S, Staircase)
    pts = as_array(S, direction.dim)
    if not is_stair:
        pts = canonical(pts)
    out = canonical(_images(pts, direction.delta))
    if len(out) != len(pts):
        raise AssertionError("specialization collided two points")
    if is_stair and direction.strong:
        return make_staircase(direction.dim, out)
    return out


def delta_on_union(delta, parts: Sequence) -> list[np.ndarray]:
    """Images Delta(E_i) of disjoint parts under the per-line correspondence."""
    direction = as_direction(delta)
    arrays = [canonical(as_array(p, direction.dim)) for p in parts]
    if not arrays:
        return []
    allpts = np.concatenate(arrays)
    if len(canonical(allpts)) != len(allpts):
        raise NotDisjoint("parts overlap")
    labels = np.repeat(np.arange(len(arrays)), [len(a) for a in arrays])
    imgs = _images(allpts, direction.delta)
    return [canonical(imgs[labels == i]) for i in range(len(arrays))]


def per_line_counts(S, delta) -> dict[tuple[int, ...], int]:
    direction = as_direction(delta)
    pts = canonical(as_array(S, direction.dim))
    if len(pts) == 0:
        return {}
    keys, counts = np.unique(line_keys(pts, direction.delta), axis=0, return_counts=True)
    return {tuple(k): int(c) for k, c in zip(keys.tolist(), counts.tolist())}


# --- sum along an axis and dilation ------------------------------------------


def sum_along_axis(axis: int, *staircases: Staircase) -> Staircase:
    """S_i(E_1, ..., E_j): add the height functions along ``axis`` (1-based)."""
    if not staircases:
        raise ValueError("need at least one staircase")
    dim = staircases[0].dim
    if any(E.dim != dim for E in staircases):
        raise DimensionMismatch("all staircases must share a dimension")
    total: dict = {}
    for E in staircases:
        for b, h in height_function(E, axis).support.items():
            total[b] = total.get(b, 0) + h
    return from_heights(dim, axis, total)


def dilate(a, E: Staircase) -> Staircase:
    """(a_1, ..., a_d).E: x belongs iff (floor(x_1/a_1), ..., floor(x_d/a_d)) is in E."""
    if isinstance(a, int):
        a = (a,) * E.dim
    a = np.array(a, dtype=np.int64)
    if len(a) != E.dim:
        raise DimensionMismatch("scale vector length differs from staircase dimension")
    if (a < 1).any():
        raise ValueError("scale factors must be positive")
    grids = np.meshgrid(*[np.arange(v) for v in a], indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=1)
    pts = (E.array * a)[:, None, :] + offsets[None, :, :]
    return Staircase(E.dim, canonical(pts.reshape(-1, E.dim)))
