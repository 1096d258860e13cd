"""Hall bases of free Lie algebras over (possibly graded) alphabets.

A Hall element is a binary tree whose leaves are generator ids; the tree
(x, y) stands for the commutator [x, y].  We use the classical recursive
construction: fix a total order on elements, then

    [x, y] is a Hall element  iff  x and y are Hall elements, x < y,
    and y is either a generator or y = [u, v] with u <= x.

The total order places all generators first (in the order given by the
``ordering`` permutation), and compares two brackets first by degree and
then lexicographically by structure ([X,Y] < [V,W] iff X < V, or X = V
and Y < W).  Putting generators first — rather than interleaving them by
degree — matters only for graded alphabets, where it yields elements like
[Z5, [Z1, Z3]] with the high-degree generator on the left; the resulting
set is still a Hall set and per-degree counts agree with the generalized
Witt dimensions, which the tests pin.

Coordinates of a Lie element are extracted per homogeneous degree by
solving the linear system over the word space spanned by the expanded
Hall elements.  In exact (Fraction) mode the factorization of that system
is computed once per degree and reused; the same rational factorization
also serves polynomial-valued right-hand sides.  Float mode uses a cached
pseudo-inverse.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .free_algebra import Generator, NCSeries

__all__ = [
    "HallBasis",
    "LieSeries",
    "build_hall_basis",
    "expand_hall",
    "hall_str",
    "lie_coordinates",
    "witt_dimension",
]

# A Hall element: either an int (generator id) or a pair of Hall elements.
HallElement = object


def witt_dimension(n: int, k: int) -> int:
    """Dimension of the degree-k part of the free Lie algebra on n letters.

    Witt's formula (the necklace polynomial): d_k = (1/k) sum_{j | k} mu(j) n^(k/j).
    """
    if n < 1 or k < 1:
        raise ValueError("witt_dimension requires n >= 1 and k >= 1")
    total = sum(int(mobius(j)) * n ** (k // j) for j in divisors(k))
    assert total % k == 0
    return total // k


def hall_degree(e: HallElement, degrees: Sequence[int]) -> int:
    if isinstance(e, int):
        return degrees[e]
    return hall_degree(e[0], degrees) + hall_degree(e[1], degrees)


def hall_str(e: HallElement, alphabet: Sequence[Generator]) -> str:
    """Fully parenthesized commutator notation, e.g. ``[A,[A,B]]``."""
    if isinstance(e, int):
        return alphabet[e].label
    return f"[{hall_str(e[0], alphabet)},{hall_str(e[1], alphabet)}]"


class _Order:
    """Total order: generators first (by permutation), then brackets by
    (degree, structural lexicographic)."""

    def __init__(self, degrees: Sequence[int], ordering: Sequence[int]):
        self.degrees = degrees
        self.pos = {g: i for i, g in enumerate(ordering)}

    def less(self, x: HallElement, y: HallElement) -> bool:
        x_leaf, y_leaf = isinstance(x, int), isinstance(y, int)
        if x_leaf and y_leaf:
            return self.pos[x] < self.pos[y]
        if x_leaf != y_leaf:
            return x_leaf
        dx, dy = hall_degree(x, self.degrees), hall_degree(y, self.degrees)
        if dx != dy:
            return dx < dy
        if x[0] != y[0]:
            return self.less(x[0], y[0])
        return self.less(x[1], y[1])

    def leq(self, x: HallElement, y: HallElement) -> bool:
        return x == y or self.less(x, y)

    def sort_key(self):
        return functools.cmp_to_key(lambda a, b: -1 if self.less(a, b) else (1 if a != b else 0))


@dataclass(frozen=True)
class LieSeries:
    """A Lie element expressed in Hall coordinates."""

    basis: "HallBasis"
    coords: dict  # HallElement -> coefficient

    def coords_at_degree(self, d: int) -> dict:
        degs = self.basis.generator_degrees
        return {e: c for e, c in self.coords.items() if hall_degree(e, degs) == d}

    def degrees(self) -> tuple[int, ...]:
        degs = self.basis.generator_degrees
        return tuple(sorted({hall_degree(e, degs) for e in self.coords}))

    def norm1_at_degree(self, d: int):
        vals = [abs(c) for c in self.coords_at_degree(d).values()]
        return sum(vals) if vals else 0

    def to_series(self) -> NCSeries:
        """Expand back into the word algebra (exact check of the representation)."""
        out = NCSeries.zero(self.basis.alphabet, self.basis.max_degree)
        for e, c in self.coords.items():
            out = out + self.basis.expansion(e).scale(c)
        return out

    def __repr__(self) -> str:
        alph = self.basis.alphabet
        parts = [f"{hall_str(e, alph)}: {c}" for e, c in list(self.coords.items())[:8]]
        more = ", ..." if len(self.coords) > 8 else ""
        return f"LieSeries({{{', '.join(parts)}{more}}})"


class HallBasis:
    """All Hall elements of degree <= max_degree, grouped by degree.

    Instances are immutable and internally cache element expansions and
    per-degree solver factorizations; obtain them via ``build_hall_basis``
    (which memoizes, so repeated requests share the caches).
    """

    def __init__(self, alphabet: Sequence[Generator], max_degree: int, ordering: Sequence[int]):
        self.alphabet = tuple(alphabet)
        self.max_degree = int(max_degree)
        self.ordering = tuple(ordering)
        self.generator_degrees = tuple(g.degree for g in self.alphabet)
        self._order = _Order(self.generator_degrees, self.ordering)
        self.by_degree: dict[int, tuple[HallElement, ...]] = {}
        # rank[e] sorts identically to _Order.less but compares in O(1);
        # generators rank (0, position), brackets (1, degree, index in level)
        self._rank: dict[HallElement, tuple] = {}
        self._expansions: dict = {}
        self._exact_solvers: dict[int, tuple] = {}
        self._float_solvers: dict[int, tuple] = {}
        self._build()

    def _build(self) -> None:
        rank = self._rank
        for pos, g in enumerate(self.ordering):
            rank[g] = (0, pos)
        for d in range(1, self.max_degree + 1):
            level: list[HallElement] = sorted(
                (g for g in range(len(self.alphabet)) if self.generator_degrees[g] == d),
                key=rank.__getitem__)
            brackets: list[HallElement] = []
            for d1 in range(1, d):
                d2 = d - d1
                for x in self.by_degree.get(d1, ()):
                    rx = rank[x]
                    for y in self.by_degree.get(d2, ()):
                        if not rx < rank[y]:
                            continue
                        if isinstance(y, int) or rank[y[0]] <= rx:
                            brackets.append((x, y))
            brackets.sort(key=lambda e: (rank[e[0]], rank[e[1]]))
            for i, e in enumerate(brackets):
                rank[e] = (1, d, i)
            self.by_degree[d] = tuple(level + brackets)

    # -- inspection -----------------------------------------------------

    def elements(self, degree: int | None = None) -> tuple[HallElement, ...]:
        if degree is not None:
            return self.by_degree.get(degree, ())
        return tuple(e for d in sorted(self.by_degree) for e in self.by_degree[d])

    def degree_counts(self) -> dict[int, int]:
        return {d: len(v) for d, v in sorted(self.by_degree.items()) if v}

    def dump(self) -> str:
        """One element per line, fully parenthesized — the debug text format."""
        lines = []
        for d in sorted(self.by_degree):
            for e in self.by_degree[d]:
                lines.append(hall_str(e, self.alphabet))
        return "\n".join(lines)

    def contains(self, e: HallElement) -> bool:
        d = hall_degree(e, self.generator_degrees)
        return e in self.by_degree.get(d, ())

    # -- expansion ------------------------------------------------------

    def expand_words(self, e: HallElement) -> dict[tuple[int, ...], Fraction]:
        """Expansion of a commutator tree into words (letter-id tuples)."""
        cached = self._expansions.get(e)
        if cached is not None:
            return cached
        if isinstance(e, int):
            result = {(e,): Fraction(1)}
        else:
            left, right = self.expand_words(e[0]), self.expand_words(e[1])
            result: dict[tuple[int, ...], Fraction] = {}
            for w1, c1 in left.items():
                for w2, c2 in right.items():
                    c = c1 * c2
                    w = w1 + w2
                    result[w] = result.get(w, Fraction(0)) + c
                    w = w2 + w1
                    result[w] = result.get(w, Fraction(0)) - c
            result = {w: c for w, c in result.items() if c}
        self._expansions[e] = result
        return result

    def expansion(self, e: HallElement) -> NCSeries:
        return NCSeries.from_words(self.alphabet, self.max_degree, self.expand_words(e))

    # -- per-degree solvers ----------------------------------------------

    def _degree_words(self, d: int) -> list[tuple[int, ...]]:
        """All words of total degree d, in lexicographic order."""
        degs = self.generator_degrees
        n = len(self.alphabet)
        out: list[tuple[int, ...]] = []

        def rec(prefix: tuple[int, ...], remaining: int) -> None:
            if remaining == 0:
                out.append(prefix)
                return
            for l in range(n):
                if degs[l] <= remaining:
                    rec(prefix + (l,), remaining - degs[l])

        rec((), d)
        return out

    def exact_solver(self, d: int):
        """(words, word_index, columns, pivot_rows, inv_pivot) for degree d.

        ``inv_pivot`` is the exact rational inverse of the square submatrix
        of the expansion matrix on the pivot rows; applying it to any
        right-hand side restricted to those rows yields the coordinates,
        for Fraction- or polynomial-valued coefficients alike.
        """
        cached = self._exact_solvers.get(d)
        if cached is not None:
            return cached
        elements = self.by_degree.get(d, ())
        words = self._degree_words(d)
        index = {w: i for i, w in enumerate(words)}
        cols = [self.expand_words(e) for e in elements]
        r = len(elements)
        # Gaussian elimination to find r independent rows (pivots)
        m = [[col.get(w, Fraction(0)) for col in cols] for w in words]
        pivots: list[int] = []
        work = [row[:] for row in m]
        col_of_pivot: list[int] = []
        for j in range(r):
            pivot_row = None
            for i in range(len(words)):
                if i in pivots:
                    continue
                if work[i][j]:
                    pivot_row = i
                    break
            if pivot_row is None:
                raise ValueError("Hall expansions are not independent — basis construction bug")
            pivots.append(pivot_row)
            col_of_pivot.append(j)
            inv = Fraction(1) / work[pivot_row][j]
            for i in range(len(words)):
                if i != pivot_row and work[i][j]:
                    f = work[i][j] * inv
                    for jj in range(j, r):
                        work[i][jj] -= f * work[pivot_row][jj]
        square = [[m[i][j] for j in range(r)] for i in pivots]
        inv_pivot = _invert_rational(square)
        solver = (words, index, cols, pivots, inv_pivot)
        self._exact_solvers[d] = solver
        return solver

    def float_solver(self, d: int):
        """(words, word_index, matrix, pinv) with float64 entries."""
        cached = self._float_solvers.get(d)
        if cached is not None:
            return cached
        elements = self.by_degree.get(d, ())
        words = self._degree_words(d)
        index = {w: i for i, w in enumerate(words)}
        m = np.zeros((len(words), len(elements)))
        for j, e in enumerate(elements):
            for w, c in self.expand_words(e).items():
                m[index[w], j] = float(c)
        pinv = np.linalg.pinv(m) if len(elements) else np.zeros((0, len(words)))
        solver = (words, index, m, pinv)
        self._float_solvers[d] = solver
        return solver

    def coords_from_dense(self, d: int, vec: np.ndarray) -> tuple[np.ndarray, float]:
        """Coordinates for a dense degree-d word vector (float mode).

        Returns (coords, residual) where residual is the max-norm of the
        unrepresentable remainder.
        """
        _, _, m, pinv = self.float_solver(d)
        coords = pinv @ vec
        residual = float(np.max(np.abs(m @ coords - vec))) if vec.size else 0.0
        return coords, residual

    def __repr__(self) -> str:
        labels = ",".join(self.alphabet[g].label for g in self.ordering)
        return f"HallBasis({labels}; D={self.max_degree}; counts={self.degree_counts()})"


def _invert_rational(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(m)]
    for j in range(n):
        piv = next(i for i in range(j, n) if aug[i][j])
        aug[j], aug[piv] = aug[piv], aug[j]
        inv = Fraction(1) / aug[j][j]
        aug[j] = [x * inv for x in aug[j]]
        for i in range(n):
            if i != j and aug[i][j]:
                f = aug[i][j]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[j])]
    return [row[n:] for row in aug]


@functools.lru_cache(maxsize=None)
def _cached_basis(alphabet: tuple[Generator, ...], D: int, ordering: tuple[int, ...]) -> HallBasis:
    return HallBasis(alphabet, D, ordering)


def build_hall_basis(alphabet: Sequence[Generator], D: int,
                     ordering: Sequence[int] | None = None) -> HallBasis:
    """Hall basis over ``alphabet`` with all elements of degree <= D.

    ``ordering`` permutes the generators (ids, smallest first); identity
    by default.  Results are memoized, so equal requests share caches.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    alphabet = tuple(alphabet)
    if ordering is None:
        ordering = tuple(range(len(alphabet)))
    ordering = tuple(int(g) for g in ordering)
    if sorted(ordering) != list(range(len(alphabet))):
        raise ValueError("ordering must be a permutation of generator ids")
    return _cached_basis(alphabet, int(D), ordering)


def expand_hall(e: HallElement, D: int, alphabet: Sequence[Generator] | None = None) -> NCSeries:
    """Expansion of a commutator tree as a word series, [x,y] -> xy - yx.

    The alphabet defaults to unit-degree generators A, B, C, ... covering
    the ids appearing in the tree.
    """
    if alphabet is None:
        max_id = _max_leaf(e)
        labels = [chr(ord("A") + i) for i in range(max_id + 1)]
        alphabet = tuple(Generator(i, lab, 1) for i, lab in enumerate(labels))
    basis = build_hall_basis(alphabet, max(D, 1))
    if hall_degree(e, basis.generator_degrees) > D:
        raise ValueError("element degree exceeds truncation")
    return NCSeries.from_words(alphabet, D, basis.expand_words(e))


def _max_leaf(e: HallElement) -> int:
    if isinstance(e, int):
        return e
    return max(_max_leaf(e[0]), _max_leaf(e[1]))


def lie_coordinates(s: NCSeries, basis: HallBasis):
    """Hall coordinates of a word series, degree by degree.

    Returns ``(LieSeries, residual)`` where residual is the max-norm of
    the part of ``s`` not representable as a Lie element (exactly zero
    for true Lie elements in rational mode).  Raises if ``s`` extends
    beyond the basis truncation.
    """
    if s.max_degree > basis.max_degree:
        raise ValueError("series truncation exceeds basis truncation")
    if s.alphabet != basis.alphabet:
        raise ValueError("series alphabet does not match basis alphabet")
    coords: dict = {}
    residual = 0
    is_float = any(isinstance(c, float) for _, c in s.items())
    for d in s.degrees():
        if d == 0:
            if s.constant_term():
                raise ValueError("a Lie element has no constant term")
            continue
        bucket = s.homogeneous(d)
        if is_float:
            words, index, m, pinv = basis.float_solver(d)
            vec = np.zeros(len(words))
            for w, c in bucket.items():
                vec[index[w]] = c
            cvec, res = basis.coords_from_dense(d, vec)
            residual = max(residual, res)
            for e, c in zip(basis.by_degree.get(d, ()), cvec):
                if c:
                    coords[e] = float(c)
        else:
            words, index, cols, pivots, inv_pivot = basis.exact_solver(d)
            stray = [w for w in bucket if w not in index]
            if stray:
                raise ValueError(f"word {stray[0]} outside the degree-{d} word space")
            rhs = [bucket.get(words[i], Fraction(0)) for i in pivots]
            cvec = [_dot(row, rhs) for row in inv_pivot]
            elements = basis.by_degree.get(d, ())
            # residual: the full system must be satisfied on every word row
            recon: dict = {}
            for col, c in zip(cols, cvec):
                if not c:
                    continue
                for w, f in col.items():
                    prev = recon.get(w)
                    val = f * c if prev is None else prev + f * c
                    recon[w] = val
            for w in set(recon) | set(bucket):
                diff = recon.get(w, 0) - bucket.get(w, Fraction(0))
                residual = _max_abs(residual, diff)
            for e, c in zip(elements, cvec):
                if c:
                    coords[e] = c
    return LieSeries(basis, coords), residual


def _dot(row, rhs):
    total = None
    for a, b in zip(row, rhs):
        if not a:
            continue
        term = a * b
        total = term if total is None else total + term
    return total if total is not None else Fraction(0)


def _max_abs(current, value):
    """Max-norm accumulator that also understands polynomial values."""
    mags = getattr(value, "coefficient_magnitudes", None)
    if mags is not None:
        m = max(mags(), default=Fraction(0))
    else:
        m = abs(value)
    return m if m > current else current
