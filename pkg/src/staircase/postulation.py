"""Postulation of monomial subschemes: dimension counts and a rank oracle.

l(d, delta, E_1, ..., E_r) is the dimension of the degree-``delta`` forms on
P^d whose local Taylor coefficients indexed by E_j vanish at the j-th point.
In an affine chart the forms are polynomials with exponents in R_{delta+1},
and the coefficient of y^alpha in F(y + q) is

    sum_beta c_beta * C(beta, alpha) * q^(beta - alpha),

so each (E_j, q_j) contributes |E_j| rows of integers. The oracle computes the
rank of that matrix over F_p at random points; by semicontinuity the result
bounds the generic value from above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .collision import apply_chain, builtin_chain, check_admissible
from .errors import DuplicatePoints, FieldTooSmall, MatrixTooLarge
from .lattice import (
    Staircase,
    contains,
    regular_cardinality,
    regular_staircase,
)
from .ops import delta_specialize, dilate

MERSENNE_61 = 2**61 - 1
DEFAULT_MODULUS = MERSENNE_61
DEFAULT_SEED = 20060417
DEFAULT_MAX_ENTRIES = 50_000
EXACT_POINT_RANGE = 1000  # integer points for the rational route lie in [-R, R]


def ambient_dimension(d: int, delta: int) -> int:
    return comb(delta + d, d)


def _condition_size(d: int, cond) -> int:
    if isinstance(cond, Staircase):
        return len(cond)
    return regular_cardinality(d, int(cond))


def virtual_dimension(d: int, delta: int, conditions: Sequence = ()) -> int:
    """C(delta+d, d) minus the total number of conditions.

    ``conditions`` mixes multiplicities (fat points R_mu) and staircases.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return ambient_dimension(d, delta) - sum(_condition_size(d, c) for c in conditions)


def monomial_postulation(d: int, delta: int, E: Staircase) -> int:
    """Number of monomials of R_{delta+1} outside E."""
    inside = int((E.array.sum(axis=1) <= delta).sum()) if len(E) else 0
    return ambient_dimension(d, delta) - inside


@dataclass(frozen=True)
class ConditionSystem:
    dim: int
    degree: int
    conditions: tuple  # of (Staircase, point) pairs
    modulus: int = DEFAULT_MODULUS  # 0 selects exact rational arithmetic

    def __post_init__(self):
        object.__setattr__(self, "conditions",
                           tuple((E, tuple(int(v) for v in q)) for E, q in self.conditions))
        if self.modulus and self.modulus <= self.degree:
            raise FieldTooSmall(f"modulus {self.modulus} <= degree {self.degree}")
        pts = [q for _, q in self.conditions]
        if len(set(pts)) != len(pts):
            raise DuplicatePoints("condition points must be pairwise distinct")
        for E, q in self.conditions:
            if E.dim != self.dim or len(q) != self.dim:
                raise ValueError("condition dimension mismatch")

    @property
    def n_conditions(self) -> int:
        return sum(len(E) for E, _ in self.conditions)


@dataclass(frozen=True)
class PostulationResult:
    ell: int
    rank: int
    ambient: int
    virtual: int
    route: str
    seed: int | None
    modulus: int

    @property
    def expected(self) -> int:
        return max(0, self.virtual)


def random_points(d: int, n: int, seed: int, modulus: int = DEFAULT_MODULUS) -> list[tuple[int, ...]]:
    """n distinct points, uniform in F_p^d (or small integers when modulus == 0)."""
    rng = random.Random(seed)
    seen: set = set()
    out = []
    while len(out) < n:
        if modulus:
            q = tuple(rng.randrange(modulus) for _ in range(d))
        else:
            q = tuple(rng.randint(-EXACT_POINT_RANGE, EXACT_POINT_RANGE) for _ in range(d))
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def random_system(d: int, delta: int, staircases: Sequence[Staircase], seed: int,
                  modulus: int = DEFAULT_MODULUS) -> ConditionSystem:
    pts = random_points(d, len(staircases), seed, modulus)
    return ConditionSystem(d, delta, tuple(zip(staircases, pts)), modulus)


def condition_matrix(system: ConditionSystem) -> list[list[int]]:
    """One row per (E_j, alpha), one column per monomial of degree <= delta."""
    d, delta, p = system.dim, system.degree, system.modulus
    monomials = regular_staircase(d, delta + 1).points
    binom = [[comb(n, k) for k in range(delta + 1)] for n in range(delta + 1)]
    rows = []
    for E, q in system.conditions:
        if p:
            powers = [[pow(c, e, p) for e in range(delta + 1)] for c in q]
        else:
            powers = [[c**e for e in range(delta + 1)] for c in q]
        for alpha in E.points:
            if sum(alpha) > delta:
                rows.append([0] * len(monomials))
                continue
            row = []
            for beta in monomials:
                v = 1
                for i in range(d):
                    b, a = beta[i], alpha[i]
                    if b < a:
                        v = 0
                        break
                    v *= binom[b][a] * powers[i][b - a]
                row.append(v % p if p else v)
            rows.append(row)
    return rows


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    A = [r[:] for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        prow = [v * inv % p for v in A[rank][c:]]
        for i in range(rank + 1, m):
            f = A[i][c]
            if f:
                A[i][c:] = [(a - f * b) % p for a, b in zip(A[i][c:], prow)]
        rank += 1
        if rank == m:
            break
    return rank


def rank_exact(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    A = [r[:] for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][c]
        for i in range(rank + 1, m):
            f = A[i][c]
            A[i] = [(a * pv - f * b) // prev for a, b in zip(A[i], A[rank])]
        prev = pv
        rank += 1
        if rank == m:
            break
    return rank


def oracle_dimension(system: ConditionSystem, seed: int | None = None,
                     max_entries: int = DEFAULT_MAX_ENTRIES) -> PostulationResult:
    ambient = ambient_dimension(system.dim, system.degree)
    if system.n_conditions * ambient > max_entries:
        raise MatrixTooLarge(f"{system.n_conditions} x {ambient} exceeds {max_entries} entries")
    rows = condition_matrix(system)
    rank = rank_mod_p(rows, system.modulus) if system.modulus else rank_exact(rows)
    virtual = virtual_dimension(system.dim, system.degree, [E for E, _ in system.conditions])
    return PostulationResult(ambient - rank, rank, ambient, virtual, "oracle", seed, system.modulus)


def oracle_postulation(d: int, delta: int, staircases: Sequence[Staircase],
                       seed: int = DEFAULT_SEED, modulus: int = DEFAULT_MODULUS,
                       max_entries: int = DEFAULT_MAX_ENTRIES) -> PostulationResult:
    """Oracle at freshly sampled random points."""
    system = random_system(d, delta, staircases, seed, modulus)
    return oracle_dimension(system, seed, max_entries)


def fat_points_oracle(d: int, delta: int, mu: int, r: int, seed: int = DEFAULT_SEED,
                      modulus: int = DEFAULT_MODULUS) -> PostulationResult:
    return oracle_postulation(d, delta, [regular_staircase(d, mu)] * r, seed, modulus)


# --- theorem verifiers ---------------------------------------------------------


@dataclass
class VerificationReport:
    claim: str
    route: str
    status: str  # pass | fail | inconclusive | skipped
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_record(self) -> dict:
        return {"claim": self.claim, "route": self.route, **self.params, **self.details,
                "pass": self.passed, "status": self.status}


def _oracle_fields(res: PostulationResult) -> dict:
    return {"ell": res.ell, "v": res.virtual, "rank": res.rank,
            "modulus": res.modulus, "seed": res.seed}


def verify_strict_theorem(s: int, d: int, mu: int, delta: int) -> VerificationReport:
    """delta < s*mu: s.R_mu alone already contains R_{delta+1}."""
    if s < 1 or d < 2 or mu < 1:
        raise ValueError("need s >= 1, d >= 2, mu >= 1")
    if delta >= s * mu:
        raise ValueError(f"strict route needs delta < s*mu = {s * mu}")
    ok = contains(dilate(s, regular_staircase(d, mu)), regular_staircase(d, delta + 1))
    return VerificationReport(
        "strict", "dilation", "pass" if ok else "fail",
        {"s": s, "d": d, "mu": mu, "delta": delta, "mult": {"mu": mu, "r": s**d}},
    )


def verify_vanishing_theorem(s: int, d: int, mu: int, delta: int, oracle: bool = False,
                             seed: int = DEFAULT_SEED,
                             modulus: int = DEFAULT_MODULUS) -> VerificationReport:
    """l(d, delta, mu^(s^d)) = 0 for delta <= s*mu, via the built-in chain.

    The chain image F must contain R_{delta+1}. For delta < s*mu the dilation
    alone is checked too. With ``oracle=True`` the prime-field rank is
    computed at s^d random points; a positive value there is reported as
    inconclusive, not as a failure.
    """
    check_admissible(s, d)
    if delta > s * mu or delta < 0 or mu < 1:
        raise ValueError(f"need 0 <= delta <= s*mu = {s * mu} and mu >= 1")
    start = dilate(s, regular_staircase(d, mu))
    target = regular_staircase(d, delta + 1)
    F = apply_chain(builtin_chain(s, d), start)
    chain_ok = contains(F, target)
    details = {"chain_pass": chain_ok,
               "strict_pass": contains(start, target) if delta < s * mu else None}
    status = "pass" if chain_ok else "fail"
    if oracle:
        res = fat_points_oracle(d, delta, mu, s**d, seed, modulus)
        details.update(_oracle_fields(res))
        if chain_ok and res.ell != 0:
            details["flag"] = "characteristic-p phenomenon or non-generic points"
            status = "inconclusive"
    return VerificationReport(
        "vanishing", "chain+oracle" if oracle else "chain", status,
        {"s": s, "d": d, "mu": mu, "delta": delta, "mult": {"mu": mu, "r": s**d}}, details,
    )


EIGHT_POINTS_DIRECTION = (1, -1, -1)


def eight_points_staircase(mu: int) -> Staircase:
    return delta_specialize(EIGHT_POINTS_DIRECTION, dilate(2, regular_staircase(3, mu)))


def verify_eight_points(mu: int, delta: int, seed: int = DEFAULT_SEED,
                        modulus: int = DEFAULT_MODULUS) -> VerificationReport:
    """Eight fat points in P^3 have the expected postulation max(0, v).

    Checks R_{2mu} ⊆ E ⊆ R_{2mu+1} for E = Delta(2.R_mu), the monomial count
    for E, and the oracle at 8 random points.
    """
    if mu < 1 or delta < 0:
        raise ValueError("need mu >= 1 and delta >= 0")
    E = eight_points_staircase(mu)
    sandwich = (contains(E, regular_staircase(3, 2 * mu))
                and contains(regular_staircase(3, 2 * mu + 1), E))
    v = virtual_dimension(3, delta, [mu] * 8)
    expected = max(0, v)
    count = monomial_postulation(3, delta, E)
    res = fat_points_oracle(3, delta, mu, 8, seed, modulus)
    if not sandwich or count != expected:
        status = "fail"
    elif res.ell == expected:
        status = "pass"
    else:
        status = "inconclusive"  # oracle is only an upper bound for the generic value
    details = {"sandwich": sandwich, "count": count, "expected": expected, **_oracle_fields(res)}
    return VerificationReport(
        "eight-points", "count+oracle", status,
        {"d": 3, "mu": mu, "delta": delta, "mult": {"mu": mu, "r": 8}}, details,
    )


def verify_fat_points_vanish(d: int, delta: int, mu: int, r: int, seed: int = DEFAULT_SEED,
                             modulus: int = DEFAULT_MODULUS) -> VerificationReport:
    """Oracle-only check that l(d, delta, mu^r) = 0."""
    res = fat_points_oracle(d, delta, mu, r, seed, modulus)
    return VerificationReport(
        "vanishing", "oracle", "pass" if res.ell == 0 else "inconclusive",
        {"d": d, "delta": delta, "mult": {"mu": mu, "r": r}}, _oracle_fields(res),
    )
