"""Exact multivariate polynomials, Groebner bases, and Sturm chains.

``MultiPoly`` is a sparse exponent-vector map with ``Fraction``
coefficients over a fixed, ordered variable tuple.  It deliberately
implements the small ring interface the series code needs (``+``, ``-``,
``*``, multiplication by rationals, truth testing, ``** 0`` as the unit),
so order conditions can be extracted by running the ordinary BCH pipeline
with polynomial-valued coefficients.

The Groebner machinery is plain Buchberger with the Gebauer-Moeller pair
criteria — entirely adequate for the desk-scale ideals that arise here
(at most a handful of variables, total degree below ten).  Real-root
counting for univariate eliminants uses Sturm chains on the square-free
part, so it counts distinct real roots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "MultiPoly",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "normal_form",
    "s_polynomial",
    "buchberger_basis",
    "is_groebner_basis",
    "sturm_real_roots",
]

Exponents = tuple[int, ...]


class MonomialOrder:
    """A monomial order given by a sort key; larger key = larger monomial."""

    def __init__(self, name: str, key: Callable[[Exponents], tuple]):
        self.name = name
        self.key = key

    def __repr__(self) -> str:
        return f"MonomialOrder({self.name})"


GREVLEX = MonomialOrder(
    "grevlex", lambda e: (sum(e), tuple(-x for x in reversed(e))))
LEX = MonomialOrder("lex", lambda e: e)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational coefficient, got {type(value).__name__}")


class MultiPoly:
    """Sparse polynomial over ordered variables with exact coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Fraction] | None = None):
        self.variables = tuple(variables)
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if not c:
                    continue
                if len(e) != len(self.variables):
                    raise ValueError("exponent vector length does not match variables")
                clean[tuple(int(x) for x in e)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "MultiPoly":
        value = _as_fraction(value)
        zero = (0,) * len(variables)
        return cls(variables, {zero: value} if value else {})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        idx = tuple(variables).index(name)
        e = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {e: Fraction(1)})

    # -- ring interface ---------------------------------------------------

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable tuples")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.variables)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e, Fraction(0)) + c
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return MultiPoly(self.variables)
            return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(e, Fraction(0)) + c1 * c2
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- inspection -------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        idx = self.variables.index(name)
        return max((e[idx] for e in self.terms), default=0)

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def coefficient_magnitudes(self) -> Iterable[Fraction]:
        return (abs(c) for c in self.terms.values())

    def leading(self, order: MonomialOrder = GREVLEX) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self * (Fraction(1) / c)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; values may be Fractions, floats, or polys."""
        missing = [v for v in self.used_variables() if v not in values]
        if missing:
            raise KeyError(f"no value for variable(s) {missing}")
        total = None
        for e, c in self.terms.items():
            term = c
            for name, k in zip(self.variables, e):
                if k:
                    term = term * values[name] ** k
            total = term if total is None else total + term
        return total if total is not None else Fraction(0)

    def substitute(self, assignments: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        values = {v: assignments.get(v, MultiPoly.variable(v, self.variables))
                  for v in self.variables}
        out = self.evaluate(values)
        if isinstance(out, Fraction):
            return MultiPoly.constant(out, self.variables)
        return out

    def restrict(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a different variable tuple (a superset of used vars)."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            idx.append(variables.index(v) if v in variables else -1)
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            out = [0] * len(variables)
            for i, k in enumerate(e):
                if k:
                    if idx[i] < 0:
                        raise ValueError(f"variable {self.variables[i]} used but not retained")
                    out[idx[i]] = k
            terms[tuple(out)] = terms.get(tuple(out), Fraction(0)) + c
        return MultiPoly(variables, terms)

    def univariate_coefficients(self) -> tuple[str, list[Fraction]]:
        """(variable, dense coefficient list) for a univariate polynomial."""
        used = self.used_variables()
        if len(used) > 1:
            raise ValueError(f"polynomial is not univariate (uses {used})")
        if not used:
            return "", [self.terms.get((0,) * len(self.variables), Fraction(0))]
        name = used[0]
        idx = self.variables.index(name)
        deg = self.degree_in(name)
        coeffs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            coeffs[e[idx]] += c
        return name, coeffs

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        def mono(e):
            parts = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    parts.append(v)
                elif k > 1:
                    parts.append(f"{v}^{k}")
            return "*".join(parts) or "1"
        items = sorted(self.terms.items(), key=lambda t: GREVLEX.key(t[0]), reverse=True)
        out = []
        for e, c in items:
            m = mono(e)
            if m == "1":
                out.append(str(c))
            elif c == 1:
                out.append(m)
            elif c == -1:
                out.append(f"-{m}")
            else:
                out.append(f"{c}*{m}")
        return " + ".join(out).replace("+ -", "- ")


# ---------------------------------------------------------------- division


def _divides(e1: Exponents, e2: Exponents) -> bool:
    return all(a <= b for a, b in zip(e1, e2))


def _exp_sub(e1: Exponents, e2: Exponents) -> Exponents:
    return tuple(a - b for a, b in zip(e1, e2))


def _exp_lcm(e1: Exponents, e2: Exponents) -> Exponents:
    return tuple(max(a, b) for a, b in zip(e1, e2))


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly],
                order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Full remainder of p on division by basis (every term reduced)."""
    leads = [(g.leading(order), g) for g in basis if g]
    remainder: dict[Exponents, Fraction] = {}
    work = dict(p.terms)
    while work:
        e = max(work, key=order.key)
        c = work[e]
        hit = None
        for (le, lc), g in leads:
            if _divides(le, e):
                hit = (le, lc, g)
                break
        if hit is None:
            del work[e]
            remainder[e] = remainder.get(e, Fraction(0)) + c
            continue
        le, lc, g = hit
        shift = _exp_sub(e, le)
        f = c / lc
        for ge, gc in g.terms.items():
            te = tuple(a + b for a, b in zip(ge, shift))
            acc = work.get(te, Fraction(0)) - f * gc
            if acc:
                work[te] = acc
            else:
                work.pop(te, None)
    return MultiPoly(p.variables, remainder)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    lcm = _exp_lcm(ef, eg)
    mf = MultiPoly(f.variables, {_exp_sub(lcm, ef): Fraction(1) / cf})
    mg = MultiPoly(g.variables, {_exp_sub(lcm, eg): Fraction(1) / cg})
    return mf * f - mg * g


def buchberger_basis(polys: Sequence[MultiPoly], order: MonomialOrder = GREVLEX,
                     max_basis: int = 400) -> list[MultiPoly]:
    """Reduced Groebner basis via Buchberger + Gebauer-Moeller pair pruning."""
    basis = [p.monic(order) for p in polys if p]
    if not basis:
        return []
    variables = basis[0].variables
    leads = [g.leading(order)[0] for g in basis]
    pairs: set[tuple[int, int]] = set()
    for i in range(len(basis)):
        pairs = _update_pairs(pairs, leads, i)
    while pairs:
        i, j = min(pairs, key=lambda ij: order.key(_exp_lcm(leads[ij[0]], leads[ij[1]])))
        pairs.discard((i, j))
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if not r:
            continue
        basis.append(r.monic(order))
        leads.append(r.leading(order)[0])
        if len(basis) > max_basis:
            raise RuntimeError("Groebner basis computation exceeded the size guard")
        pairs = _update_pairs(pairs, leads, len(basis) - 1)
    return _interreduce(basis, order)


def _update_pairs(pairs: set, leads: list[Exponents], t: int) -> set:
    """Gebauer-Moeller update when element t joins the basis."""
    lt = leads[t]
    # new candidate pairs (i, t)
    cand = {}
    for i in range(t):
        cand[i] = _exp_lcm(leads[i], lt)
    keep: set[int] = set()
    for i in sorted(cand, key=lambda i: GREVLEX.key(cand[i])):
        lcm_it = cand[i]
        # criterion B: coprime leading terms reduce to zero
        if lcm_it == tuple(a + b for a, b in zip(leads[i], lt)):
            continue
        # criterion M: drop if another surviving/candidate lcm properly divides
        dominated = False
        for j in keep:
            if _divides(cand[j], lcm_it) and cand[j] != lcm_it:
                dominated = True
                break
        if dominated:
            continue
        # criterion F: equal lcms — keep only one representative
        twin = next((j for j in keep if cand[j] == lcm_it), None)
        if twin is not None:
            continue
        keep.add(i)
    # prune old pairs made redundant by lt
    survivors = set()
    for (i, j) in pairs:
        lcm_ij = _exp_lcm(leads[i], leads[j])
        if (_divides(lt, lcm_ij)
                and _exp_lcm(leads[i], lt) != lcm_ij
                and _exp_lcm(leads[j], lt) != lcm_ij):
            continue
        survivors.add((i, j))
    survivors.update((i, t) for i in keep)
    return survivors


def _interreduce(basis: list[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    # drop elements whose lead is divisible by another lead, then tail-reduce
    basis = [g for g in basis if g]
    leads = [g.leading(order)[0] for g in basis]
    kept = []
    for i, g in enumerate(basis):
        if any(j != i and _divides(leads[j], leads[i])
               and (leads[j] != leads[i] or j < i) for j in range(len(basis))):
            continue
        kept.append(g)
    reduced = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1:]
        r = normal_form(g, others, order) if others else g
        if r:
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return reduced


def is_groebner_basis(basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if normal_form(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


# -------------------------------------------------------------- univariate


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _poly_derivative(c: Sequence[Fraction]) -> list[Fraction]:
    return _poly_trim([k * c[k] for k in range(1, len(c))])


def _poly_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _poly_trim(a):
        da = len(a) - 1
        f = a[-1] / lb
        for k in range(db + 1):
            a[da - db + k] -= f * b[k]
        a = _poly_trim(a)
        if not a:
            break
    return a


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v]
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def sturm_real_roots(coeffs: Sequence[Fraction]) -> int:
    """Number of distinct real roots of a univariate polynomial."""
    c = _poly_trim([_as_fraction(x) for x in coeffs])
    if len(c) <= 1:
        return 0
    # square-free part: p / gcd(p, p')
    g = _poly_gcd(c, _poly_derivative(c))
    if len(g) > 1:
        c = _poly_divide_exact(c, g)
    chain = [c, _poly_derivative(c)]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-x for x in rem])
    # signs at -inf / +inf from leading coefficients and parities
    at_minus = [p[-1] * (-1) ** (len(p) - 1) for p in chain if p]
    at_plus = [p[-1] for p in chain if p]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def _poly_divide_exact(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = list(a)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _poly_trim(a):
        da = len(a) - 1
        f = a[-1] / lb
        out[da - db] = f
        for k in range(db + 1):
            a[da - db + k] -= f * b[k]
        a = _poly_trim(a)
    return _poly_trim(out)
