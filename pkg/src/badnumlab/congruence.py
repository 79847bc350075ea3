"""Digit-matrix search over SL±(2, Z/ijZ).

Appending digit a multiplies the convergent matrix on the left by
g_a = [[0,1],[1,a]].  Over Z/nZ these generate the full group of
determinant-±1 matrices (for digit alphabet {1,...,M} with M >= 2),
which makes "force j | p and i | q with boundedly many digits" a
breadth-first search problem.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cf import ConvergentState, step

# Matrices are row-major tuples (a, b, c, d) for [[a, b], [c, d]].
Mat2 = tuple[int, int, int, int]

IDENTITY: Mat2 = (1, 0, 0, 1)


def mat_mul(x: Mat2, y: Mat2, n: int) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return (
        (a * e + b * g) % n,
        (a * f + b * h) % n,
        (c * e + d * g) % n,
        (c * f + d * h) % n,
    )


def generator(a: int, n: int) -> Mat2:
    """g_a = [[0,1],[1,a]] reduced mod n; determinant is -1 mod n."""
    if a < 1:
        raise ValueError(f"digit must be >= 1, got {a}")
    return (0, 1 % n, 1 % n, a % n)


def generator_inverse(a: int, n: int) -> Mat2:
    """g_a^{-1} = [[-a,1],[1,0]] reduced mod n."""
    return ((-a) % n, 1 % n, 1 % n, 0)


def group_closure(n: int, M: int) -> dict[Mat2, int]:
    """BFS from the identity under right-multiplication by g_1, ..., g_M.

    Returns each reached matrix with its word-length distance.  For
    M >= 2 the reached set is all of SL±(2, Z/nZ).
    """
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if M < 2:
        raise ValueError("alphabet bound M must be >= 2 (closure unproven for M = 1)")
    gens = [generator(a, n) for a in range(1, M + 1)]
    start = tuple(v % n for v in IDENTITY)
    dist: dict[Mat2, int] = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for g in gens:
                y = mat_mul(x, g, n)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def sl_pm_order(n: int) -> int:
    """|SL±(2, Z/nZ)| by the multiplicative formula.

    |SL(2, Z/n)| = n^3 * prod_{p | n} (1 - p^-2); the determinant -1
    coset doubles it unless n <= 2 where -1 == 1.
    """
    if n == 1:
        return 1
    size = n ** 3
    m, p = n, 2
    while m > 1:
        if p * p > m:
            p = m
        if m % p == 0:
            size = size * (p * p - 1) // (p * p)
            while m % p == 0:
                m //= p
        p += 1
    return size if n <= 2 else 2 * size


@dataclass(frozen=True)
class SearchResult:
    """A digit word forcing j | p and i | q on the resulting convergent."""

    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)


class ClosureError(RuntimeError):
    """The generated semigroup failed to cover SL±(2, Z/nZ)."""


class CongruenceSolver:
    """Distance-to-target tables for one (i, j, M) triple.

    The target class is {matrices with bottom row == (0 mod j, 0 mod i)}:
    the bottom row of the convergent matrix is (p, q), so landing there
    certifies the required divisibilities.
    """

    def __init__(self, i: int, j: int, M: int):
        if gcd(i, j) != 1:
            raise ValueError(f"i and j must be coprime, got ({i}, {j})")
        if M < 2:
            raise ValueError("alphabet bound M must be >= 2")
        self.i, self.j, self.M = i, j, M
        self.n = i * j
        n = self.n
        self.gens = [generator(a, n) for a in range(1, M + 1)]
        self.inv_gens = [generator_inverse(a, n) for a in range(1, M + 1)]
        self.group = group_closure(n, M)
        self._dist0 = self._reverse_bfs()
        if len(self._dist0) != len(self.group):
            raise ClosureError(
                f"target unreachable from {len(self.group) - len(self._dist0)} "
                f"states mod {n}"
            )
        self.T = self._max_first_hit()

    def in_target(self, s: Mat2) -> bool:
        return s[2] % self.j == 0 and s[3] % self.i == 0

    def _reverse_bfs(self) -> dict[Mat2, int]:
        # Forward move is s -> g_a * s, so predecessors are g_a^{-1} * x.
        n = self.n
        dist = {s: 0 for s in self.group if self.in_target(s)}
        queue = deque(sorted(dist))
        while queue:
            x = queue.popleft()
            for ig in self.inv_gens:
                s = mat_mul(ig, x, n)
                if s not in dist:
                    dist[s] = dist[x] + 1
                    queue.append(s)
        return dist

    def first_hit(self, s: Mat2) -> int:
        """Minimal t >= 1 with some digit word of length t landing in target."""
        n = self.n
        return 1 + min(self._dist0[mat_mul(g, s, n)] for g in self.gens)

    def _max_first_hit(self) -> int:
        return max(self.first_hit(s) for s in self.group)

    def word_for(self, s: Mat2) -> tuple[int, ...]:
        """Lexicographically smallest among the shortest target words from s."""
        n = self.n
        best_a, best_d = None, None
        for a, g in enumerate(self.gens, start=1):
            d = self._dist0[mat_mul(g, s, n)]
            if best_d is None or d < best_d:
                best_a, best_d = a, d
        word = [best_a]
        cur = mat_mul(self.gens[best_a - 1], s, n)
        while self._dist0[cur] > 0:
            want = self._dist0[cur] - 1
            for a, g in enumerate(self.gens, start=1):
                nxt = mat_mul(g, cur, n)
                if self._dist0[nxt] == want:
                    word.append(a)
                    cur = nxt
                    break
        return tuple(word)


@lru_cache(maxsize=None)
def solver(i: int, j: int, M: int) -> CongruenceSolver:
    return CongruenceSolver(i, j, M)


def T_bound(i: int, j: int, M: int) -> int:
    """Uniform digit-count bound T(i, j, M) by multi-source reverse BFS."""
    return solver(i, j, M).T


def extend_to_congruence(s: ConvergentState, i: int, j: int, M: int) -> SearchResult:
    """Shortest digit word (lex-smallest tie-break) whose replay from s
    gives a convergent with numerator in jN and denominator in iN."""
    sv = solver(i, j, M)
    n = sv.n
    residue: Mat2 = tuple(v % n for v in s.rows())  # type: ignore[assignment]
    word = sv.word_for(residue)
    # Positivity of the new numerator is automatic: every digit is >= 1,
    # so p is strictly positive after at least one step from a valid state.
    t = s
    for a in word:
        t = step(t, a)
    assert t.p_cur >= 1 and t.p_cur % j == 0 and t.q_cur % i == 0
    return SearchResult(word)


# The three products from the standard-generator argument, as matrices
# over Z/nZ: each left factor times right factor must equal the target.
_IDENTITY_CASES = [
    ("upper", ((-1, 1, 1, 0), (0, 1, 1, 2)), (1, 1, 0, 1)),
    ("lower", ((0, 1, 1, 2), (-1, 1, 1, 0)), (1, 0, 1, 1)),
]


def sl2_generator_identities_check(n: int) -> dict[str, bool]:
    """Verify the product identities expressing the standard SL(2) generators
    in terms of g_1^{-1} and g_2, over Z/nZ."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    report: dict[str, bool] = {}
    for name, factors, target in _IDENTITY_CASES:
        acc = tuple(v % n for v in factors[0])
        for f in factors[1:]:
            acc = mat_mul(acc, tuple(v % n for v in f), n)
        report[name] = acc == tuple(v % n for v in target)
    # [[0,1],[-1,0]] = U * L^{-1} * U with U = [[1,1],[0,1]], L = [[1,0],[1,1]].
    upper = (1, 1, 0, 1)
    lower_inv = (1, 0, -1 % n, 1)
    acc = mat_mul(mat_mul(upper, lower_inv, n), upper, n)
    report["rotation"] = acc == (0, 1 % n, -1 % n, 0)
    return report


def power_returns_to_identity(a: int, n: int) -> int:
    """Smallest e >= 1 with g_a^e = identity mod n (finiteness of the group)."""
    g = generator(a, n)
    acc = g
    e = 1
    ident = tuple(v % n for v in IDENTITY)
    while acc != ident:
        acc = mat_mul(acc, g, n)
        e += 1
    return e
