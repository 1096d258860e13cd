"""Splitting-scheme templates, their logs, order checks, and the error measure.

A scheme is a fixed product shape ``prod_i exp(f_i(params) * t * G_i)``
where each exponent ``f_i`` is an affine expression in named parameter
slots.  Five template families are supported: the generic alternating
product N, the palindromic product S (and its ABC-block variant S-abc for
three terms), the leapfrog compositions SL, and the Euler-pair
compositions SE.  Consistency sums (each generator's coefficients summing
to one) are solved once per template and stored as closures, so a point
on the scheme manifold is specified by the free slots only.

``epsilon`` implements the scaled 1-norm error measure: the Hall-basis
coefficient 1-norm of log U at degree p+1, minimized over generator
orderings, times (m/p)^p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from ._dense import dense_product_log
from .free_algebra import NCSeries, exp, log, make_alphabet, series_from_generator
from .hall import HallBasis, LieSeries, build_hall_basis, lie_coordinates
from .polynomials import MultiPoly

__all__ = [
    "LinExpr",
    "Scheme",
    "ParamAssignment",
    "ErrorReport",
    "FAMILIES",
    "build_scheme",
    "log_scheme",
    "verify_order",
    "epsilon",
    "catalog",
    "yoshida_recursive",
    "suzuki_recursive",
    "se_chart_names",
    "se_chart_to_slots",
    "se_slots_to_chart",
    "se_chart_closure",
    "scheme_to_text",
    "scheme_from_text",
    "ordering_str",
    "parse_ordering",
]

FAMILIES = {2: ("N", "S", "SL"), 3: ("N", "S", "S-abc", "SE", "SL")}

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def _slot_key(name: str) -> tuple[str, int]:
    m = re.fullmatch(r"(.*?)_?(\d+)", name)
    return (m.group(1), int(m.group(2))) if m else (name, -1)


# ------------------------------------------------------------------ LinExpr


@dataclass(frozen=True)
class LinExpr:
    """Affine expression const + sum coeff_s * slot_s over named slots."""

    const: Fraction = _ZERO
    coeffs: tuple[tuple[str, Fraction], ...] = ()

    @staticmethod
    def slot(name: str) -> "LinExpr":
        return LinExpr(_ZERO, ((name, _ONE),))

    @staticmethod
    def constant(value) -> "LinExpr":
        return LinExpr(Fraction(value), ())

    @staticmethod
    def _make(const: Fraction, coeffs: Mapping[str, Fraction]) -> "LinExpr":
        names = sorted((s for s, c in coeffs.items() if c), key=_slot_key)
        return LinExpr(const, tuple((s, coeffs[s]) for s in names))

    def _coeff_map(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return LinExpr(self.const + other, self.coeffs)
        if not isinstance(other, LinExpr):
            return NotImplemented
        coeffs = self._coeff_map()
        for s, c in other.coeffs:
            coeffs[s] = coeffs.get(s, _ZERO) + c
        return LinExpr._make(self.const + other.const, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return LinExpr(-self.const, tuple((s, -c) for s, c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return LinExpr(self.const - other, self.coeffs)
        if not isinstance(other, LinExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return LinExpr()
        return LinExpr(self.const * scalar,
                       tuple((s, c * scalar) for s, c in self.coeffs))

    __rmul__ = __mul__

    def slots(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.coeffs)

    def evaluate(self, values: Mapping[str, object]):
        out = self.const
        for s, c in self.coeffs:
            out = out + c * values[s]
        return out

    def __str__(self) -> str:
        parts = []
        if self.const or not self.coeffs:
            parts.append(str(self.const))
        for s, c in self.coeffs:
            if c == 1:
                term = s
            elif c == -1:
                term = f"-{s}"
            else:
                term = f"{c}*{s}"
            if parts and not term.startswith("-"):
                parts.append(f"+ {term}")
            elif parts:
                parts.append(f"- {term[1:]}")
            else:
                parts.append(term)
        return " ".join(parts)


# ------------------------------------------------------------------- Scheme


@dataclass(frozen=True)
class Scheme:
    """A decomposition template over ``letters`` with affine exponents.

    ``factors`` lists ``(letter index, coefficient expression)`` for the m
    exponentials after contraction.  ``closures`` maps dependent slots to
    expressions in the remaining slots (the per-letter consistency sums);
    ``stage_weights`` records, for SL and SE, the per-leapfrog weight (or
    per-Euler-term coefficient) expressions the template was built from.
    """

    n: int
    family: str
    m: int
    letters: tuple[str, ...]
    param_slots: tuple[str, ...]
    factors: tuple[tuple[int, LinExpr], ...]
    closures: tuple[tuple[str, LinExpr], ...] = ()
    stage_weights: tuple[LinExpr, ...] | None = None

    @property
    def nu(self) -> int:
        return len(self.param_slots)

    @property
    def closure_map(self) -> dict[str, LinExpr]:
        return dict(self.closures)

    @property
    def free_slots(self) -> tuple[str, ...]:
        dependent = {s for s, _ in self.closures}
        return tuple(s for s in self.param_slots if s not in dependent)

    def without_closures(self) -> "Scheme":
        return replace(self, closures=())

    def resolve_slots(self, params: Mapping[str, object]) -> dict[str, object]:
        """Full slot assignment; provided values win over closure formulas."""
        params = _param_values(params)
        values: dict[str, object] = {}
        closure = self.closure_map
        for s in self.param_slots:
            if s in params:
                values[s] = params[s]
            elif s in closure:
                values[s] = closure[s].evaluate(values)
            else:
                raise KeyError(f"no value for free parameter slot {s!r}")
        return values

    def resolve(self, params: Mapping[str, object]) -> list[tuple[int, object]]:
        values = self.resolve_slots(params)
        return [(g, expr.evaluate(values)) for g, expr in self.factors]

    def coefficient_sum(self, letter: str) -> LinExpr:
        g = self.letters.index(letter)
        total = LinExpr()
        for gi, expr in self.factors:
            if gi == g:
                total = total + expr
        return total

    def label(self) -> str:
        return f"n{self.n}-{self.family.lower().replace('-', '')}-m{self.m}"

    def describe(self) -> str:
        lines = [f"{self.label()}: {self.m} factors, "
                 f"{self.nu} slots ({len(self.free_slots)} free)"]
        for g, expr in self.factors:
            lines.append(f"  exp[({expr}) t {self.letters[g]}]")
        if self.closures:
            lines.append("closures:")
            for s, expr in self.closures:
                lines.append(f"  {s} = {expr}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ParamAssignment:
    values: Mapping[str, object]
    provenance: str = "user"

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values.values())


def _param_values(params) -> Mapping[str, object]:
    if isinstance(params, ParamAssignment):
        return params.values
    return params


# ------------------------------------------------------- template builders


def _solve_letter_sum(total: LinExpr, dependent: str, target=_ONE) -> LinExpr:
    """Solve ``total == target`` for ``dependent``; total is affine."""
    coeffs = dict(total.coeffs)
    mu = coeffs.pop(dependent)
    rest = LinExpr._make(total.const, coeffs)
    return (target - rest) * (_ONE / mu)


def _letter_closures(letters: Sequence[str],
                     factors: Sequence[tuple[int, LinExpr]],
                     slot_order: Sequence[str],
                     only: Sequence[str] | None = None) -> list[tuple[str, LinExpr]]:
    closures = []
    for g, letter in enumerate(letters):
        if only is not None and letter not in only:
            continue
        total = LinExpr()
        for gi, expr in factors:
            if gi == g:
                total = total + expr
        present = [s for s in slot_order if any(n == s for n, _ in total.coeffs)]
        if not present:
            raise ValueError(f"generator {letter} never occurs in the template")
        dependent = present[-1]
        closures.append((dependent, _solve_letter_sum(total, dependent)))
    return closures


def _sequential_template(n: int, m: int, letter_of: Sequence[int]):
    """Palindrome-aware per-letter slot naming for N/S/S-abc templates.

    ``letter_of[i]`` is the letter index of factor i (0-based).  Slots are
    named a_1, a_2, ... in order of first appearance per letter.
    """
    names = ("a", "b", "c")
    counters = [0] * n
    slot_of_position: list[str] = []
    slots: list[str] = []
    for g in letter_of:
        counters[g] += 1
        name = f"{names[g]}_{counters[g]}"
        slot_of_position.append(name)
        slots.append(name)
    return slots, slot_of_position


def _build_n(n: int, m: int) -> Scheme:
    if m < n:
        raise ValueError(f"type N with n={n} needs at least m={n} factors")
    pattern = (0, 1) if n == 2 else (0, 1, 2, 1)
    letter_of = [pattern[i % len(pattern)] for i in range(m)]
    if len(set(letter_of)) < n:
        raise ValueError(f"type N with m={m} never reaches all {n} generators")
    slots, slot_at = _sequential_template(n, m, letter_of)
    factors = tuple((g, LinExpr.slot(s)) for g, s in zip(letter_of, slot_at))
    letters = ("A", "B", "C")[:n]
    closures = _letter_closures(letters, factors, slots)
    return Scheme(n, "N", m, letters, tuple(slots), factors, tuple(closures))


def _palindromic_letters(n: int, m: int, block: Sequence[int]) -> list[int]:
    return [block[(min(i, m + 1 - i) - 1) % len(block)] for i in range(1, m + 1)]


def _build_s(n: int, m: int) -> Scheme:
    if m % 2 == 0 or m < 2 * n - 1:
        raise ValueError(f"type S needs odd m >= {2 * n - 1}")
    block = (0, 1) if n == 2 else (0, 1, 2, 1)
    letter_of = _palindromic_letters(n, m, block)
    half = (m + 1) // 2
    slots, slot_at_half = _sequential_template(n, half, letter_of[:half])
    slot_at = [slot_at_half[min(i, m - 1 - i)] for i in range(m)]
    factors = tuple((g, LinExpr.slot(s)) for g, s in zip(letter_of, slot_at))
    letters = ("A", "B", "C")[:n]
    closures = _letter_closures(letters, factors, slots)
    return Scheme(n, "S", m, letters, tuple(slots), factors, tuple(closures))


def _build_s_abc(m: int) -> Scheme:
    if m % 2 == 0 or (m + 1) % 3 or ((m + 1) // 3) % 2:
        raise ValueError("type S-abc needs odd m with (m+1)/3 even")
    letter_of = _palindromic_letters(3, m, (0, 1, 2))
    half = (m + 1) // 2
    slots, slot_at_half = _sequential_template(3, half, letter_of[:half])
    slot_at = [slot_at_half[min(i, m - 1 - i)] for i in range(m)]
    factors = tuple((g, LinExpr.slot(s)) for g, s in zip(letter_of, slot_at))
    letters = ("A", "B", "C")
    closures = _letter_closures(letters, factors, slots)
    return Scheme(3, "S-abc", m, letters, tuple(slots), factors, tuple(closures))


def _leapfrog_weights(k: int) -> tuple[list[str], list[LinExpr]]:
    """Palindromic weight expressions w_1 .. w_nu .. w_1 of length k."""
    nu = (k + 1) // 2
    slots = [f"w_{j}" for j in range(1, nu + 1)]
    weights = [LinExpr.slot(slots[min(i, k + 1 - i) - 1]) for i in range(1, k + 1)]
    return slots, weights


def _build_sl(n: int, m: int) -> Scheme:
    step = 2 if n == 2 else 4
    if (m - 1) % step or m < step + 1:
        raise ValueError(f"type SL with n={n} needs m = {step}k+1")
    k = (m - 1) // step
    slots, weights = _leapfrog_weights(k)
    factors: list[tuple[int, LinExpr]] = [(0, weights[0] * _HALF)]
    for i, w in enumerate(weights):
        if n == 2:
            factors.append((1, w))
        else:
            factors.extend([(1, w * _HALF), (2, w), (1, w * _HALF)])
        nxt = weights[i + 1] if i + 1 < k else None
        factors.append((0, (w + nxt) * _HALF if nxt is not None else w * _HALF))
    letters = ("A", "B", "C")[:n]
    closures = _letter_closures(letters, factors, slots, only=("A",))
    return Scheme(n, "SL", m, letters, tuple(slots), tuple(factors),
                  tuple(closures), stage_weights=tuple(weights))


def _euler_tau_slots(k: int) -> list[str]:
    return [f"u_{(i + 1) // 2}" if i % 2 else f"v_{i // 2}" for i in range(1, k + 1)]


def _build_se(m: int) -> Scheme:
    if (m - 1) % 4 or m < 5:
        raise ValueError("type SE needs m = 4k+1")
    k = (m - 1) // 4
    slots = _euler_tau_slots(k)
    tau = [LinExpr.slot(s) for s in slots]          # tau_1 .. tau_k
    # first half: A(tau1) B(tau1) [merge] B(tau2) [merge] B(tau3) ...
    first: list[tuple[int, LinExpr]] = [(0, tau[0]), (1, tau[0])]
    for i in range(1, k):
        merge_letter = 2 if i % 2 else 0            # C after E+, A after E-
        first.append((merge_letter, tau[i - 1] + tau[i]))
        first.append((1, tau[i]))
    center = (2 if k % 2 else 0, tau[k - 1] * 2)
    factors = tuple(first + [center] + [(g, e) for g, e in reversed(first)])
    letters = ("A", "B", "C")
    closures = _letter_closures(letters, factors, slots, only=("A",))
    stage = tuple(tau + list(reversed(tau)))        # tau_i for all 2k Euler terms
    return Scheme(3, "SE", m, letters, tuple(slots), factors,
                  tuple(closures), stage_weights=stage)


def build_scheme(n: int, family: str, m: int) -> Scheme:
    fam = family.strip().upper().replace("_", "-")
    if fam in ("S-ABC", "SABC"):
        fam = "S-abc"
    if n not in FAMILIES or fam not in FAMILIES[n]:
        raise ValueError(f"family {family!r} is not defined for n={n}")
    if fam == "N":
        scheme = _build_n(n, m)
    elif fam == "S":
        scheme = _build_s(n, m)
    elif fam == "S-abc":
        scheme = _build_s_abc(m)
    elif fam == "SE":
        scheme = _build_se(m)
    else:
        scheme = _build_sl(n, m)
    assert len(scheme.factors) == m
    assert scheme.nu == _expected_nu(n, fam, m)
    return scheme


def _expected_nu(n: int, fam: str, m: int) -> int:
    if fam == "N":
        return m
    if fam == "S":
        return (m + 1) // 2
    if fam == "S-abc":
        return -(-m // 2)
    if fam == "SE":
        return (m - 1) // 4
    return -(-(m - 1) // (4 if n == 2 else 8))


# ------------------------------------------------------------ orderings


def parse_ordering(text: str | Sequence[str] | None,
                   letters: Sequence[str]) -> tuple[str, ...]:
    if text is None:
        return tuple(letters)
    if not isinstance(text, str):
        ordering = tuple(text)
    else:
        ordering = tuple(p.strip() for p in text.replace("<", " ").split())
    if sorted(ordering) != sorted(letters):
        raise ValueError(f"ordering {text!r} is not a permutation of {letters}")
    return ordering


def ordering_str(ordering: Sequence[str]) -> str:
    return "<".join(ordering)


def _basis_for(scheme: Scheme, D: int, ordering: Sequence[str] | None) -> HallBasis:
    ordering = parse_ordering(ordering, scheme.letters)
    alphabet = make_alphabet(scheme.letters)
    ids = tuple(scheme.letters.index(x) for x in ordering)
    return build_hall_basis(alphabet, D, ordering=ids)


# ------------------------------------------------------------- log paths


def _series_mode(values: Mapping[str, object]) -> str:
    if any(isinstance(v, MultiPoly) for v in values.values()):
        return "symbolic"
    if all(isinstance(v, (int, Fraction)) for v in values.values()):
        return "exact"
    return "float"


def symbolic_slot_values(scheme: Scheme) -> dict[str, MultiPoly]:
    """Free slots as polynomial variables, dependent slots via closures."""
    free = scheme.free_slots
    values: dict[str, object] = {s: MultiPoly.variable(s, free) for s in free}
    for s, expr in scheme.closures:
        values[s] = expr.evaluate(values)
    return values


def _product_series(scheme: Scheme, factor_values, D: int, unit) -> NCSeries:
    alphabet = make_alphabet(scheme.letters)
    prod = NCSeries.one(alphabet, D, unit=unit)
    for g, c in factor_values:
        prod = prod * exp(series_from_generator(alphabet[g], c, D, alphabet))
    return prod


def log_scheme(scheme: Scheme, params, D: int,
               ordering: Sequence[str] | None = None) -> LieSeries:
    """log of the scheme's product as a LieSeries, truncated at degree D.

    ``params`` may assign Fractions (exact path), floats (dense numeric
    path), or be None for the symbolic path where free slots become
    polynomial variables.
    """
    if D < 1:
        raise ValueError("need D >= 1")
    basis = _basis_for(scheme, D, ordering)
    if params is None:
        values = symbolic_slot_values(scheme)
        factor_values = [(g, e.evaluate(values)) for g, e in scheme.factors]
        mode = "symbolic"
    else:
        values = scheme.resolve_slots(params)
        factor_values = [(g, e.evaluate(values)) for g, e in scheme.factors]
        mode = _series_mode(values)

    if mode == "float":
        data = dense_product_log(len(scheme.letters), D,
                                 [(g, float(c)) for g, c in factor_values])
        coords: dict = {}
        worst = 0.0
        for d in range(1, D + 1):
            vec, res = basis.coords_from_dense(d, data[d])
            worst = max(worst, res)
            coords.update({e: c for e, c in zip(basis.elements(d), vec) if c})
        if worst > 1e-8:
            raise RuntimeError(f"non-Lie residual {worst:.2e} in numeric log")
        return LieSeries(basis, coords)

    unit = _ONE if mode == "exact" else MultiPoly.constant(1, scheme.free_slots)
    series = log(_product_series(scheme, factor_values, D, unit))
    lie, residual = lie_coordinates(series, basis)
    if residual:
        raise RuntimeError(f"non-Lie residual {residual} in exact log")
    return lie


def verify_order(scheme: Scheme, params, p: int,
                 tolerance: float = 1e-10) -> tuple[bool, dict[int, float]]:
    """Check U = e^{tH} + O(t^{p+1}): unit degree-1 coords, zero at 2..p."""
    if p < 1:
        raise ValueError("order must be >= 1")
    lie = log_scheme(scheme, params, p)
    residuals = _order_residuals(lie, p)
    ok = all(float(abs(v)) <= tolerance for v in residuals.values())
    return ok, residuals


def _order_residuals(lie: LieSeries, p: int) -> dict[int, object]:
    deg1 = lie.coords_at_degree(1)
    residuals = {1: max(abs(deg1.get(g, 0) - 1) for g in lie.basis.elements(1))}
    for d in range(2, p + 1):
        cd = lie.coords_at_degree(d)
        residuals[d] = max((abs(c) for c in cd.values()), default=_zero_like(residuals[1]))
    return residuals


def _zero_like(value):
    return Fraction(0) if isinstance(value, Fraction) else 0.0


@dataclass(frozen=True)
class ErrorReport:
    """Scaled 1-norm error of the degree-(p+1) term, per generator ordering."""

    p: int
    m: int
    prefactor: object
    ordering_best: tuple[str, ...]
    epsilon: object
    sums_per_ordering: dict[tuple[str, ...], object]
    coeffs_per_ordering: dict[tuple[str, ...], tuple]
    order_residuals: dict[int, object]

    def summary(self) -> str:
        return (f"epsilon = {float(self.epsilon):.6g} "
                f"({ordering_str(self.ordering_best)}), "
                f"prefactor (m/p)^p = {float(self.prefactor):.6g}")


def epsilon(scheme: Scheme, params, p: int, tolerance: float = 1e-10) -> ErrorReport:
    """Error measure (m/p)^p * min over Hall orderings of sum |c_i| at p+1."""
    ok, residuals = verify_order(scheme, params, p, tolerance)
    if not ok:
        worst = max(float(abs(v)) for v in residuals.values())
        raise ValueError(
            f"scheme does not reach order {p}: max residual {worst:.3e}")
    D = p + 1
    values = scheme.resolve_slots(params)
    mode = _series_mode(values)
    factor_values = [(g, e.evaluate(values)) for g, e in scheme.factors]
    n = len(scheme.letters)

    sums: dict[tuple[str, ...], object] = {}
    coeffs: dict[tuple[str, ...], tuple] = {}
    if mode == "float":
        data = dense_product_log(n, D, [(g, float(c)) for g, c in factor_values])
        for ordering in permutations(scheme.letters):
            basis = _basis_for(scheme, D, ordering)
            vec, res = basis.coords_from_dense(D, data[D])
            if res > 1e-8:
                raise RuntimeError(f"non-Lie residual {res:.2e} at degree {D}")
            coeffs[ordering] = tuple(zip(basis.elements(D), vec))
            sums[ordering] = float(np.sum(np.abs(vec)))
        prefactor = (scheme.m / p) ** p
    else:
        series = log(_product_series(scheme, factor_values, D, _ONE))
        for ordering in permutations(scheme.letters):
            basis = _basis_for(scheme, D, ordering)
            lie, residual = lie_coordinates(series, basis)
            if residual:
                raise RuntimeError(f"non-Lie residual {residual}")
            cd = lie.coords_at_degree(D)
            coeffs[ordering] = tuple((e, cd.get(e, _ZERO)) for e in basis.elements(D))
            sums[ordering] = sum(abs(c) for c in cd.values())
        prefactor = Fraction(scheme.m, p) ** p

    best = min(sums, key=lambda o: float(sums[o]))
    return ErrorReport(p=p, m=scheme.m, prefactor=prefactor,
                       ordering_best=best, epsilon=prefactor * sums[best],
                       sums_per_ordering=sums, coeffs_per_ordering=coeffs,
                       order_residuals=residuals)


# ------------------------------------------------- recursive constructions


def yoshida_recursive(q: int, n: int = 2) -> tuple[Scheme, ParamAssignment]:
    """Order-2q composition from the triple-jump recursion."""
    weights = _recursive_weights(q, triple=True)
    return _sl_from_weights(n, weights, f"yoshida q={q}")


def suzuki_recursive(q: int, n: int = 2) -> tuple[Scheme, ParamAssignment]:
    """Order-2q composition from the five-fold (fractal) recursion."""
    weights = _recursive_weights(q, triple=False)
    return _sl_from_weights(n, weights, f"suzuki q={q}")


def _recursive_weights(q: int, triple: bool) -> list:
    if q < 1:
        raise ValueError("need q >= 1")
    weights = [_ONE]
    for j in range(1, q):
        if triple:
            y = (2 - 2 ** (1 / (2 * j + 1))) ** -1
            weights = ([w * y for w in weights]
                       + [w * (1 - 2 * y) for w in weights]
                       + [w * y for w in weights])
        else:
            z = (4 - 4 ** (1 / (2 * j + 1))) ** -1
            outer = [w * z for w in weights]
            weights = outer + outer + [w * (1 - 4 * z) for w in weights] + outer + outer
    return weights


def _sl_from_weights(n: int, weights: list, provenance: str):
    k = len(weights)
    m = (2 if n == 2 else 4) * k + 1
    scheme = build_scheme(n, "SL", m)
    values = {f"w_{j + 1}": weights[j] for j in range((k + 1) // 2)}
    return scheme, ParamAssignment(values, provenance)


# ------------------------------------------------------- SE chart support


def se_chart_names(scheme: Scheme) -> tuple[str, ...]:
    """(u, q_1, r_1, q_2, ...): contracted-exponent coordinates for SE."""
    if scheme.family != "SE":
        raise ValueError("chart coordinates only exist for SE schemes")
    k = (scheme.m - 1) // 4
    names = ["u"]
    for i in range(1, k):
        names.append(f"q_{(i + 1) // 2}" if i % 2 else f"r_{i // 2}")
    return tuple(names)


def se_chart_to_slots(scheme: Scheme, chart: Mapping[str, object]) -> dict[str, object]:
    """Invert u = tau_1, q_i = tau_{2i-1}+tau_{2i}, r_i = tau_{2i}+tau_{2i+1}."""
    names = se_chart_names(scheme)
    tau_prev = None
    out: dict[str, object] = {}
    for i, (name, slot) in enumerate(zip(names, scheme.param_slots), start=1):
        value = chart[name] if i == 1 else chart[name] - tau_prev
        out[slot] = value
        tau_prev = value
    return out


def se_slots_to_chart(scheme: Scheme, params: Mapping[str, object]) -> dict[str, object]:
    values = scheme.resolve_slots(params)
    taus = [values[s] for s in scheme.param_slots]
    chart = {}
    for i, name in enumerate(se_chart_names(scheme), start=1):
        chart[name] = taus[0] if i == 1 else taus[i - 2] + taus[i - 1]
    return chart


def se_chart_closure(scheme: Scheme) -> tuple[str, LinExpr]:
    """Consistency sum in chart coordinates, solved for the last chart name.

    Telescoping tau_i = chart_i - tau_{i-1} turns sum(tau) = 1/2 into a
    relation on alternating chart sums; the dependent coordinate is the
    highest-index one.
    """
    names = se_chart_names(scheme)
    tau = LinExpr()
    total = LinExpr()
    for name in names:
        tau = LinExpr.slot(name) - tau
        total = total + tau
    return names[-1], _solve_letter_sum(total, names[-1], target=_HALF)


# ------------------------------------------------------------ serialization


def scheme_to_text(scheme: Scheme, params, ordering: Sequence[str] | None = None) -> str:
    values = scheme.resolve_slots(params)
    lines = [f"n = {scheme.n}", f"family = {scheme.family}", f"m = {scheme.m}"]
    if ordering is not None:
        lines.append(f"ordering = {ordering_str(parse_ordering(ordering, scheme.letters))}")
    for s in scheme.param_slots:
        v = values[s]
        if isinstance(v, (int, Fraction)):
            lines.append(f"{s} = {Fraction(v)}")
        else:
            lines.append(f"{s} = {float(v):.17g}")
    return "\n".join(lines) + "\n"


def scheme_from_text(text: str):
    """Parse the key = value document; returns (scheme, params, ordering)."""
    fields: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        if not _:
            raise ValueError(f"malformed line {line!r}")
        fields[key.strip()] = value.strip()
    try:
        n = int(fields.pop("n"))
        family = fields.pop("family")
        m = int(fields.pop("m"))
    except KeyError as missing:
        raise ValueError(f"missing required field {missing}") from None
    ordering = fields.pop("ordering", None)
    scheme = build_scheme(n, family, m)
    params: dict[str, object] = {}
    for key, value in fields.items():
        if key not in scheme.param_slots:
            raise ValueError(f"unknown parameter slot {key!r}")
        params[key] = _parse_scalar(value)
    if ordering is not None:
        ordering = parse_ordering(ordering, scheme.letters)
    return scheme, params, ordering


def _parse_scalar(text: str):
    if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        return Fraction(text)
    return float(text)


def catalog():
    """Named schemes with published parameters; see the catalog module."""
    from . import catalog as cat
    return cat.catalog()
