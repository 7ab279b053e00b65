"""Algebraic check that the flat limit of Phi(I^E) is the monomial ideal I^{Delta(E)}.

Work one Delta-line at a time. With c the coordinate where Delta has its 1, the
line's monomials are m_1 < ... < m_k and m_i has degree k - i in x_c. The
monomials n_1..n_l of I^E on the line deform to
    Phi(n_i) = sum_j C(alpha_c(i), j) t^j m_{k-j},
so the span of the Phi(n_i) is the row space of P · diag(t^0, ..., t^{k-1})
with P_ij = C(alpha_c(i), j). Its limit at t = 0 is spanned by the
m_{k-j} whose column j is a pivot of the reduced row echelon form of P.
Everything below is exact integer/rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

import numpy as np

from .errors import EmptyLine, InvalidDirection, SingularQ
from .lattice import Staircase, as_array, isin
from .ops import as_direction, delta_specialize, line_forms, line_keys


@dataclass(frozen=True)
class GradingForms:
    forms: tuple[tuple[int, ...], ...]

    def degree(self, point) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(f, point)) for f in self.forms)


def grading_forms(delta) -> GradingForms:
    direction = as_direction(delta)
    if direction.dim < 2:
        raise InvalidDirection("need d >= 2")
    return GradingForms(line_forms(direction.delta))


@dataclass(frozen=True)
class LineLimitProblem:
    key: tuple[int, ...]
    line: tuple[tuple[int, ...], ...]  # m_1 < ... < m_k
    generators: tuple[tuple[int, ...], ...]  # line monomials lying in I^E
    alphas: tuple[int, ...]  # their x_c exponents
    specialized: tuple[tuple[int, ...], ...] = ()  # Delta(E) ∩ L from the combinatorial route

    @property
    def k(self) -> int:
        return len(self.line)

    @property
    def l(self) -> int:
        return len(self.generators)

    @property
    def matrix(self) -> list[list[int]]:
        return binomial_matrix(self.alphas, self.k)


@dataclass
class LineResult:
    key: tuple[int, ...]
    k: int
    l: int
    det_q: int
    limit: tuple[tuple[int, ...], ...]
    passed: bool
    identity_block: bool

    def to_record(self) -> dict:
        return {"line_key": list(self.key), "k": self.k, "l": self.l,
                "detQ": str(self.det_q), "pass": self.passed}


def binomial_matrix(alphas, k: int) -> list[list[int]]:
    return [[comb(a, j) for j in range(k)] for a in alphas]


def bareiss_det(M: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for c in range(n - 1):
        if A[c][c] == 0:
            swap = next((r for r in range(c + 1, n) if A[r][c] != 0), None)
            if swap is None:
                return 0
            A[c], A[swap] = A[swap], A[c]
            sign = -sign
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                A[r][j] = (A[r][j] * A[c][c] - A[r][c] * A[c][j]) // prev
        prev = A[c][c]
    return sign * A[n - 1][n - 1]


def rref_pivots(M: list[list[int]]) -> tuple[int, ...]:
    """Pivot columns of the reduced row echelon form over Q."""
    A = [[Fraction(v) for v in row] for row in M]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return tuple(pivots)


@lru_cache(maxsize=65536)
def _solve(alphas: tuple[int, ...], k: int) -> tuple[int, tuple[int, ...]]:
    l = len(alphas)
    P = binomial_matrix(alphas, k)
    det_q = bareiss_det([row[:l] for row in P])
    pivots = rref_pivots(P) if l else ()
    return det_q, pivots


def vandermonde_over_factorials(alphas) -> Fraction:
    """prod_{i<j}(alpha_j - alpha_i) / prod_{j<l} j!, which equals det Q."""
    l = len(alphas)
    num = prod(alphas[j] - alphas[i] for i in range(l) for j in range(i + 1, l))
    return Fraction(num, prod(factorial(j) for j in range(l)))


def _line_from_key(key, delta: tuple[int, ...]) -> np.ndarray:
    """Lattice points of the line with the given form values, as m_1..m_k."""
    c = delta.index(1)
    forms = line_forms(delta)
    d = len(delta)
    others = [j for j in range(d) if j != c]
    # solve forms restricted to the non-pivot coordinates; x_c = 0 is the -Delta end
    A = [[Fraction(f[j]) for j in others] + [Fraction(v)] for f, v in zip(forms, key)]
    n = len(others)
    for col in range(n):
        p = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[p] = A[p], A[col]
        A[col] = [v / A[col][col] for v in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    x0 = [0] * d
    for j, row in zip(others, A):
        if row[-1].denominator != 1:
            raise EmptyLine(f"no lattice point with line key {tuple(key)}")
        x0[j] = int(row[-1])
    if any(v < 0 for v in x0):
        raise EmptyLine(f"line {tuple(key)} misses N^d")
    dvec = np.array(delta, dtype=np.int64)
    x0 = np.array(x0, dtype=np.int64)
    neg = dvec < 0
    r = int((x0[neg] // -dvec[neg]).min())
    return x0 + np.arange(r, -1, -1, dtype=np.int64)[:, None] * dvec


def _problem(line, in_E, in_DE, key, c: int) -> LineLimitProblem:
    """Assemble a problem from plain lists: line points, E-membership, Delta(E)-membership."""
    gens = tuple(m for m, e in zip(line, in_E) if not e)
    return LineLimitProblem(
        key=tuple(key),
        line=tuple(line),
        generators=gens,
        alphas=tuple(g[c] for g in gens),
        specialized=tuple(m for m, e in zip(line, in_DE) if e),
    )


def build_line_problem(E, delta, line_key) -> LineLimitProblem:
    direction = as_direction(delta)
    if not direction.strong:
        raise InvalidDirection(f"{direction.delta} is not strongly valid")
    pts = as_array(E, direction.dim)
    line = _line_from_key(tuple(line_key), direction.delta)
    image = delta_specialize(direction, pts)
    return _problem(list(map(tuple, line.tolist())), isin(line, pts).tolist(),
                    isin(line, image).tolist(), [int(v) for v in line_key], direction.pivot)


def verify_line_limit(problem: LineLimitProblem) -> LineResult:
    """Limit of the deformed span on one line, compared with Delta(E) ∩ L.

    Raises :class:`SingularQ` if the leading l x l block of P is singular,
    which cannot happen in characteristic zero.
    """
    k, l = problem.k, problem.l
    det_q, pivots = _solve(problem.alphas, k)
    if det_q == 0:
        raise SingularQ(f"line {problem.key}: alphas {problem.alphas} give det Q = 0")
    limit = tuple(problem.line[k - 1 - j] for j in pivots)
    identity_block = pivots == tuple(range(l))
    complement = set(problem.line) - set(problem.specialized)
    passed = identity_block and set(limit) == complement
    return LineResult(problem.key, k, l, det_q, tuple(sorted(limit)), passed, identity_block)


def char_p_probe(alphas, primes=(2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)) -> list[int]:
    """Small primes dividing det Q: where the characteristic-zero argument breaks."""
    det_q, _ = _solve(tuple(alphas), len(alphas))
    return [p for p in primes if det_q % p == 0]


@dataclass
class LimitReport:
    delta: tuple[int, ...]
    card: int
    box_margin: int
    lines: list[LineResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.lines)

    def to_record(self) -> dict:
        return {
            "claim": "limit-ideal",
            "route": "line-limit",
            "d": len(self.delta),
            "dir": list(self.delta),
            "card": self.card,
            "box_margin": self.box_margin,
            "lines": len(self.lines),
            "nonzero_detQ": all(r.det_q != 0 for r in self.lines),
            "pass": self.passed,
            "status": "pass" if self.passed else "fail",
        }


def verify_limit_ideal(E: Staircase, delta, box_margin: int = 1) -> LimitReport:
    """Run :func:`verify_line_limit` on every Delta-line meeting the box
    [0, max(E) + box_margin]^d."""
    direction = as_direction(delta)
    if not direction.strong:
        raise InvalidDirection(f"{direction.delta} is not strongly valid")
    dvec = np.array(direction.delta, dtype=np.int64)
    c = direction.pivot
    d = direction.dim
    top = E.array.max(axis=0) if len(E) else np.zeros(d, dtype=np.int64)
    grids = np.meshgrid(*[np.arange(v + box_margin + 1) for v in top], indexing="ij")
    box = np.stack([g.ravel() for g in grids], axis=1)
    # the x_c = 0 end of each line identifies it
    ends = np.unique(box - box[:, [c]] * dvec, axis=0)
    ends = ends[(ends >= 0).all(axis=1)]
    image = delta_specialize(direction, E.array)
    report = LimitReport(direction.delta, len(E), box_margin)
    neg = dvec < 0
    lengths = (ends[:, neg] // -dvec[neg]).min(axis=1) + 1
    offsets = np.concatenate([[0], np.cumsum(lengths)])
    owner = np.repeat(np.arange(len(ends)), lengths)
    steps = lengths[owner] - 1 - (np.arange(offsets[-1]) - offsets[owner])
    all_pts = ends[owner] + steps[:, None] * dvec
    in_E = isin(all_pts, E.array).tolist()
    in_DE = isin(all_pts, image).tolist()
    pts = list(map(tuple, all_pts.tolist()))
    keys = line_keys(ends, direction.delta).tolist()
    offsets = offsets.tolist()
    for i, key in enumerate(keys):
        a, b = offsets[i], offsets[i + 1]
        problem = _problem(pts[a:b], in_E[a:b], in_DE[a:b], key, c)
        report.lines.append(verify_line_limit(problem))
    return report
