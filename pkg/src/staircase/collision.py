"""Chains of Delta-specializations sending s.R_mu onto a superset of R_{s*mu+1}.

Built-in chains put their nonzero entries in the last coordinates. The
dimension induction slices along the first coordinate, so lifted directions
get a leading 0 and the closing direction is (1, -1, -1, 0, ..., 0).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadHypotheses,
    InternalContradiction,
    NotFound,
    UnsupportedCase,
)
from .lattice import (
    Staircase,
    as_array,
    canonical,
    contains,
    isin,
    missing,
    regular_staircase,
)
from .ops import Direction, as_direction, delta_specialize, dilate, validate_direction

log = logging.getLogger(__name__)

EXCLUDED = frozenset({(2, 2), (2, 3), (3, 2)})
PROVENANCES = ("builtin-remark", "induction", "search")


@dataclass(frozen=True)
class DeltaChain:
    dim: int
    directions: tuple[Direction, ...]
    provenance: str = "builtin-remark"

    def __post_init__(self):
        dirs = tuple(as_direction(x) for x in self.directions)
        object.__setattr__(self, "directions", dirs)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for x in dirs:
            if x.dim != self.dim:
                raise ValueError(f"direction {x.delta} has length != {self.dim}")
            if not x.strong:
                raise ValueError(f"direction {x.delta} is not strongly valid")

    def vectors(self) -> list[list[int]]:
        return [list(x.delta) for x in self.directions]

    def __len__(self):
        return len(self.directions)


@dataclass
class ChainReport:
    s: int
    d: int
    mu: int
    chain: DeltaChain
    image: Staircase
    target: Staircase
    missing: list[tuple[int, ...]] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.missing

    def to_record(self) -> dict:
        rec = {
            "claim": "key-lemma",
            "s": self.s,
            "d": self.d,
            "mu": self.mu,
            "chain": self.chain.vectors(),
            "pass": self.passed,
            "missing": [list(p) for p in self.missing],
            "provenance": self.chain.provenance,
            "status": "pass" if self.passed else "fail",
        }
        if self.note:
            rec["note"] = self.note
        return rec


def check_admissible(s: int, d: int) -> None:
    if s < 2 or d < 2 or (s, d) in EXCLUDED:
        raise UnsupportedCase(f"(s, d) = ({s}, {d}) is excluded")


def _pad(vec, d):
    return (0,) * (d - len(vec)) + tuple(vec)


def _tail(i: int, d: int) -> tuple[int, ...]:
    # Delta_i for the tail of the chain: the 1 sits at 1-based position 1+d-i
    v = [0] * d
    p = d - i  # 0-based
    v[p], v[p + 1], v[p + 2] = 1, -1, -1
    return tuple(v)


def _initial(s: int) -> tuple[int, list[tuple[int, ...]]]:
    """The base case of the induction for a given s: (dimension, directions)."""
    if s > 3:
        return 2, [(1, 1 - s), (2 - s, 1)]
    if s == 3:
        return 3, [(1, -2, 0), (-3, 0, 1), (0, 1, -2)]
    if s == 2:
        return 4, [(1, -1, -1, -1), (-1, 1, -1, 0), (-1, 0, 1, -1), (-1, -1, 0, 1)]
    raise UnsupportedCase(f"s = {s} < 2")


def builtin_chain(s: int, d: int) -> DeltaChain:
    check_admissible(s, d)
    base_dim, base = _initial(s)
    dirs = [_pad(v, d) for v in base]
    dirs += [_tail(i, d) for i in range(base_dim + 1, d + 1)]
    return DeltaChain(d, tuple(dirs), "builtin-remark")


def induction_chain(s: int, d: int) -> DeltaChain:
    """Lift the (d-1)-chain with a leading 0 and close with (1, -1, -1, 0, ...)."""
    check_admissible(s, d)
    base_dim, base = _initial(s)
    if d == base_dim:
        return DeltaChain(d, tuple(base), "induction")
    if d < base_dim:
        raise UnsupportedCase(f"no induction start below d = {base_dim} for s = {s}")
    lower = induction_chain(s, d - 1)
    dirs = [(0,) + x.delta for x in lower.directions]
    dirs.append((1, -1, -1) + (0,) * (d - 3))
    return DeltaChain(d, tuple(dirs), "induction")


def apply_chain(chain: DeltaChain, E: Staircase) -> Staircase:
    """Apply Delta_1 first. Every intermediate result is re-validated as a staircase."""
    if chain.dim != E.dim:
        raise ValueError(f"chain dimension {chain.dim} != staircase dimension {E.dim}")
    n = len(E)
    for x in chain.directions:
        E = delta_specialize(x, E)  # raises NotDownwardClosed if the image is not closed
        if len(E) != n:
            raise InternalContradiction("cardinality changed under specialization")
    return E


def _run(s: int, d: int, mu: int, chain: DeltaChain) -> ChainReport:
    start = dilate(s, regular_staircase(d, mu))
    image = apply_chain(chain, start)
    target = regular_staircase(d, s * mu + 1)
    absent = [tuple(p) for p in missing(image, target).tolist()]
    return ChainReport(s, d, mu, chain, image, target, absent)


def verify_key_lemma(s: int, d: int, mu: int, chain: DeltaChain | None = None) -> ChainReport:
    """Check Delta_d(...Delta_1(s.R_mu)) ⊇ R_{s*mu+1} pointwise.

    Without an explicit chain the built-in one is used; if it fails, the
    induction chain is tried and the discrepancy is recorded in ``note``.
    """
    check_admissible(s, d)
    if mu < 1:
        raise ValueError("mu must be >= 1")
    if chain is not None:
        return _run(s, d, mu, chain)
    report = _run(s, d, mu, builtin_chain(s, d))
    if report.passed:
        return report
    fallback = _run(s, d, mu, induction_chain(s, d))
    fallback.note = f"builtin chain missed {len(report.missing)} points; used induction chain"
    log.warning("(s=%d, d=%d, mu=%d): %s", s, d, mu, fallback.note)
    return fallback


def line_hits(m, P, delta) -> bool:
    """Is there an integer i with m + i*Delta in P?"""
    delta = np.array(as_direction(delta).delta, dtype=np.int64)
    P = as_array(P, len(delta))
    if len(P) == 0:
        return False
    diff = P - np.array(m, dtype=np.int64)
    k = int(np.flatnonzero(delta)[0])
    steps = diff[:, k] // delta[k]
    return bool((diff == steps[:, None] * delta).all(axis=1).any())


def check_fill_hole(mu: int, P, m, delta) -> bool:
    """Fill-the-last-hole lemma for E = R_mu ∪ P - {m}.

    Returns whether P meets the Delta-line of m. When it does, Delta(E) ⊇ R_mu
    is asserted and a failure raises :class:`InternalContradiction`.
    """
    direction = as_direction(delta)
    d = direction.dim
    if not direction.strong:
        raise BadHypotheses(f"{direction.delta} is not strongly valid")
    R = regular_staircase(d, mu)
    P = canonical(as_array(P, d))
    m = tuple(int(v) for v in m)
    if m not in R:
        raise BadHypotheses(f"{m} is not in R_{mu}")
    if isin(P, R.array).any():
        raise BadHypotheses("P meets R_mu")
    if not line_hits(m, P, direction.delta):
        return False
    E = np.concatenate([R.array[~(R.array == np.array(m)).all(axis=1)], P])
    image = delta_specialize(direction, E)
    if not isin(R.array, image).all():
        raise InternalContradiction(f"Delta(E) misses part of R_{mu} for m={m}")
    return True


def strong_directions(d: int, bound: int) -> list[tuple[int, ...]]:
    """Strongly valid directions with entries in [-bound, 1], ordered by
    (max |entry|, lexicographic)."""
    out = []
    for c in range(d):
        for rest in itertools.product(range(-bound, 1), repeat=d - 1):
            if not any(rest):
                continue
            v = rest[:c] + (1,) + rest[c:]
            if validate_direction(v, "strong"):
                out.append(v)
    out.sort(key=lambda v: (max(abs(x) for x in v), v))
    return out


def search_chain(s: int, d: int, mu_probe: int, entry_bound: int = 3,
                 step_budget: int | None = None) -> DeltaChain:
    """Iterative-deepening search for a chain that passes for mu = 1..mu_probe.

    Raises :class:`NotFound` when nothing within the bounds works; that is
    evidence about the bounds only, never a proof that no chain exists.
    """
    if mu_probe < 1:
        raise ValueError("mu_probe must be >= 1")
    if step_budget is None:
        step_budget = d
    dirs = strong_directions(d, entry_bound)
    starts = [dilate(s, regular_staircase(d, mu)) for mu in range(1, mu_probe + 1)]
    targets = [regular_staircase(d, s * mu + 1) for mu in range(1, mu_probe + 1)]
    if any(len(a) < len(t) for a, t in zip(starts, targets)):
        log.info("(s=%d, d=%d): |s.R_mu| < |R_{s mu+1}|, search cannot succeed", s, d)

    def dfs(states, depth, prefix):
        if prefix and all(contains(img, t) for img, t in zip(states, targets)):
            return prefix
        if depth == 0:
            return None
        for v in dirs:
            nxt = [delta_specialize(v, img) for img in states]
            found = dfs(nxt, depth - 1, prefix + [v])
            if found:
                return found
        return None

    for length in range(1, step_budget + 1):
        found = dfs(starts, length, [])
        if found:
            return DeltaChain(d, tuple(found), "search")
    raise NotFound(f"no chain for (s={s}, d={d}) with |entries| <= {entry_bound}, "
                   f"length <= {step_budget}")


def chain_from_vectors(vectors, provenance: str = "search") -> DeltaChain:
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise ValueError("empty chain needs an explicit dimension")
    return DeltaChain(len(vectors[0]), tuple(vectors), provenance)

