"""Truncated power series in non-commuting generators.

Everything downstream (BCH logarithms, Hall coordinates, order conditions)
reduces to arithmetic in the free associative algebra truncated at a fixed
total degree D.  A series stores a sparse map from words (finite sequences
of generators) to coefficients; the formal time step is not a symbol —
a word of total generator degree k simply *is* the t^k coefficient, since
every expansion handled here is homogeneous in t.

Coefficients may be exact ``Fraction``s, Python floats, or any ring-like
object supporting ``+``, ``-``, ``*``, multiplication by ``Fraction`` and
truth-testing (``polynomials.MultiPoly`` uses this to push symbolic scheme
parameters through the same code paths).  A series should stay homogeneous
in its coefficient type; nothing enforces that, but mixing exact and float
coefficients silently degrades to float.

Words are stored packed into integers: with an alphabet of n generators a
word w_1...w_k becomes the base-max(n,2) numeral 1 w_1 ... w_k (the leading
1 keeps the length unambiguous).  Words over up to 4 letters of length up
to 9 fit a single machine word; longer packs simply become Python big ints.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "Generator",
    "NCSeries",
    "make_alphabet",
    "series_from_generator",
    "mul",
    "exp",
    "log",
]


class Generator(NamedTuple):
    """One abstract generator of the algebra.

    ``degree`` is the grading weight: 1 for raw splitting terms, k for
    composite generators standing for the degree-k part of a factor's
    logarithm (as used by the graded order-condition pipelines).
    """

    id: int
    label: str
    degree: int = 1


def make_alphabet(labels: Sequence[str], degrees: Sequence[int] | None = None) -> tuple[Generator, ...]:
    """Build an alphabet from labels, e.g. ``make_alphabet("AB")``.

    Ids are assigned positionally; all degrees default to 1.
    """
    if degrees is None:
        degrees = [1] * len(labels)
    if len(degrees) != len(labels):
        raise ValueError("labels and degrees must have equal length")
    for d in degrees:
        if d < 1:
            raise ValueError("generator degrees must be >= 1")
    return tuple(Generator(i, str(lab), int(d)) for i, (lab, d) in enumerate(zip(labels, degrees)))


def _check_alphabet(alphabet: Sequence[Generator]) -> tuple[Generator, ...]:
    ids = [g.id for g in alphabet]
    if ids != list(range(len(alphabet))):
        raise ValueError("alphabet generator ids must be 0..n-1 in order")
    return tuple(alphabet)


class NCSeries:
    """A degree-truncated series over a fixed alphabet.

    Internal storage is ``_terms[degree][packed_word] = coeff`` with zero
    coefficients pruned and the truncation degree fixed at creation.  All
    operations are pure; instances should be treated as immutable.
    """

    __slots__ = ("alphabet", "max_degree", "_base", "_degrees", "_terms")

    def __init__(self, alphabet: Sequence[Generator], max_degree: int,
                 terms: Mapping[int, Mapping[int, object]] | None = None):
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        self.alphabet = _check_alphabet(alphabet)
        self.max_degree = int(max_degree)
        self._base = max(len(self.alphabet), 2)
        self._degrees = tuple(g.degree for g in self.alphabet)
        self._terms: dict[int, dict[int, object]] = {}
        if terms:
            for d, bucket in terms.items():
                if d > self.max_degree:
                    raise ValueError(f"word of degree {d} exceeds truncation {self.max_degree}")
                clean = {w: c for w, c in bucket.items() if c}
                if clean:
                    self._terms[d] = clean

    # -- word packing -------------------------------------------------

    def pack(self, letters: Iterable[int]) -> int:
        key = 1
        for l in letters:
            key = key * self._base + l
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        letters = []
        while key > 1:
            key, l = divmod(key, self._base)
            letters.append(l)
        return tuple(reversed(letters))

    def word_degree(self, letters: Iterable[int]) -> int:
        return sum(self._degrees[l] for l in letters)

    # -- construction helpers -----------------------------------------

    @classmethod
    def zero(cls, alphabet: Sequence[Generator], max_degree: int) -> "NCSeries":
        return cls(alphabet, max_degree)

    @classmethod
    def one(cls, alphabet: Sequence[Generator], max_degree: int, unit=Fraction(1)) -> "NCSeries":
        s = cls(alphabet, max_degree)
        s._terms[0] = {1: unit}
        return s

    @classmethod
    def from_words(cls, alphabet: Sequence[Generator], max_degree: int,
                   words: Mapping[tuple[int, ...], object]) -> "NCSeries":
        s = cls(alphabet, max_degree)
        for letters, c in words.items():
            if not c:
                continue
            d = s.word_degree(letters)
            if d > max_degree:
                raise ValueError(f"word {letters} of degree {d} exceeds truncation {max_degree}")
            bucket = s._terms.setdefault(d, {})
            key = s.pack(letters)
            acc = bucket.get(key)
            acc = c if acc is None else acc + c
            if acc:
                bucket[key] = acc
            else:
                bucket.pop(key, None)
        s._prune()
        return s

    def _prune(self) -> None:
        for d in [d for d, b in self._terms.items() if not b]:
            del self._terms[d]

    def copy_with(self, terms: dict[int, dict[int, object]]) -> "NCSeries":
        s = NCSeries(self.alphabet, self.max_degree)
        s._terms = terms
        return s

    # -- inspection ----------------------------------------------------

    def coeff(self, letters: Sequence[int]):
        d = self.word_degree(letters)
        return self._terms.get(d, {}).get(self.pack(letters), 0)

    def homogeneous(self, degree: int) -> dict[tuple[int, ...], object]:
        return {self.unpack(k): c for k, c in self._terms.get(degree, {}).items()}

    def items(self) -> Iterator[tuple[tuple[int, ...], object]]:
        for d in sorted(self._terms):
            for k, c in self._terms[d].items():
                yield self.unpack(k), c

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def __len__(self) -> int:
        return sum(len(b) for b in self._terms.values())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self):
        return self._terms.get(0, {}).get(1, 0)

    def unit(self):
        """Multiplicative unit of the coefficient domain (1, 1.0, or poly one)."""
        for bucket in self._terms.values():
            for c in bucket.values():
                return c ** 0
        return Fraction(1)

    def __repr__(self) -> str:
        if not self._terms:
            return "NCSeries(0)"
        parts = []
        for d in sorted(self._terms):
            for k in sorted(self._terms[d]):
                letters = self.unpack(k)
                word = "".join(self.alphabet[l].label for l in letters) or "1"
                parts.append(f"{word}: {self._terms[d][k]}")
        body = ", ".join(parts[:12]) + (", ..." if len(parts) > 12 else "")
        return f"NCSeries({{{body}}})"

    # -- ring operations ------------------------------------------------

    def _compatible(self, other: "NCSeries") -> None:
        if self.alphabet != other.alphabet or self.max_degree != other.max_degree:
            raise ValueError("series must share alphabet and max_degree")

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._compatible(other)
        terms = {d: dict(b) for d, b in self._terms.items()}
        for d, bucket in other._terms.items():
            mine = terms.setdefault(d, {})
            for k, c in bucket.items():
                acc = mine.get(k)
                acc = c if acc is None else acc + c
                if acc:
                    mine[k] = acc
                else:
                    mine.pop(k, None)
        out = self.copy_with({d: b for d, b in terms.items() if b})
        return out

    def __neg__(self) -> "NCSeries":
        return self.copy_with({d: {k: -c for k, c in b.items()} for d, b in self._terms.items()})

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def scale(self, factor) -> "NCSeries":
        if not factor:
            return NCSeries(self.alphabet, self.max_degree)
        return self.copy_with(
            {d: {k: factor * c for k, c in b.items()} for d, b in self._terms.items()})

    def __rmul__(self, factor) -> "NCSeries":
        return self.scale(factor)

    def __mul__(self, other) -> "NCSeries":
        if isinstance(other, NCSeries):
            return mul(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.max_degree == other.max_degree
                and self._terms == other._terms)

    def __hash__(self):
        raise TypeError("NCSeries is not hashable")

    def map_coefficients(self, fn) -> "NCSeries":
        terms: dict[int, dict[int, object]] = {}
        for d, bucket in self._terms.items():
            clean = {}
            for k, c in bucket.items():
                v = fn(c)
                if v:
                    clean[k] = v
            if clean:
                terms[d] = clean
        return self.copy_with(terms)


def series_from_generator(g: Generator, coeff, D: int,
                          alphabet: Sequence[Generator] | None = None) -> NCSeries:
    """The series ``coeff * g`` truncated at degree D.

    ``alphabet`` defaults to the one-letter alphabet containing only g;
    pass the full alphabet when the series will be combined with others.
    """
    if alphabet is None:
        if g.id != 0:
            raise ValueError("single-generator alphabet requires g.id == 0")
        alphabet = (g,)
    if g.degree > D:
        raise ValueError(f"generator degree {g.degree} exceeds truncation {D}")
    if alphabet[g.id] != g:
        raise ValueError("generator does not belong to the given alphabet")
    return NCSeries.from_words(alphabet, D, {(g.id,): coeff})


def mul(x: NCSeries, y: NCSeries) -> NCSeries:
    """Concatenation product, truncated at the common max degree."""
    x._compatible(y)
    D = x.max_degree
    base = x._base
    # base**len(word) strips/restores the sentinel digit when concatenating
    pow_len: dict[int, int] = {}
    terms: dict[int, dict[int, object]] = {}
    for d1, b1 in x._terms.items():
        for d2, b2 in y._terms.items():
            d = d1 + d2
            if d > D:
                continue
            out = terms.setdefault(d, {})
            for k2, c2 in b2.items():
                p = pow_len.get(k2)
                if p is None:
                    p = base ** _word_len(k2, base)
                    pow_len[k2] = p
                tail = k2 - p
                for k1, c1 in b1.items():
                    k = k1 * p + tail
                    c = c1 * c2
                    acc = out.get(k)
                    acc = c if acc is None else acc + c
                    if acc:
                        out[k] = acc
                    else:
                        out.pop(k, None)
    return x.copy_with({d: b for d, b in terms.items() if b})


def _word_len(key: int, base: int) -> int:
    n = 0
    while key > 1:
        key //= base
        n += 1
    return n


def exp(x: NCSeries) -> NCSeries:
    """Formal exponential sum_{k<=D} x^k / k! (x must have no constant term)."""
    if x.constant_term():
        raise ValueError("exp requires zero constant term")
    one = x.unit()
    result = NCSeries.one(x.alphabet, x.max_degree, unit=one)
    power = result
    for k in range(1, x.max_degree + 1):
        power = mul(power, x)
        if not power:
            break
        result = result + power.scale(Fraction(1, math.factorial(k)) * one)
    return result


def log(x: NCSeries) -> NCSeries:
    """Formal logarithm sum_{k<=D} (-1)^(k+1) (x-1)^k / k (constant term must be 1)."""
    one = x.unit()
    if x.constant_term() != one:
        raise ValueError("log requires constant term 1")
    u = x - NCSeries.one(x.alphabet, x.max_degree, unit=one)
    result = NCSeries.zero(x.alphabet, x.max_degree)
    power = NCSeries.one(x.alphabet, x.max_degree, unit=one)
    for k in range(1, x.max_degree + 1):
        power = mul(power, u)
        if not power:
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k) * one)
    return result
