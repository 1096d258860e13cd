"""Constraint extraction, Groebner analysis, and published freedom counts."""

from fractions import Fraction

import pytest

from liesplit.catalog import catalog
from liesplit.constraints import (
    GroebnerBasis,
    analyze_freedom,
    buchberger,
    symbolic_log,
)
from liesplit.polynomials import GREVLEX, MultiPoly
from liesplit.schemes import build_scheme, log_scheme

CATALOG = catalog()


def _var(name, names):
    return MultiPoly.variable(name, names)


# ------------------------------------------------------------- counting
# Condition counts per degree for every (family, p) pair inside the size
# guards, against the published N^H_p accounting: cumulative Witt dimensions
# for type N, odd-degree Witt dimensions for the symmetric words, and the
# graded-algebra dimensions d_L / d_E for the leapfrog and Euler templates.

COUNT_CASES = [
    (2, "N", 7, 1, {1: 2}),
    (2, "N", 7, 2, {1: 2, 2: 1}),
    (2, "N", 7, 3, {1: 2, 2: 1, 3: 2}),
    (2, "N", 7, 4, {1: 2, 2: 1, 3: 2, 4: 3}),
    (2, "N", 7, 5, {1: 2, 2: 1, 3: 2, 4: 3, 5: 6}),
    (2, "S", 9, 1, {1: 2}),
    (2, "S", 9, 3, {1: 2, 3: 2}),
    (2, "S", 9, 5, {1: 2, 3: 2, 5: 6}),
    (2, "SL", 15, 2, {1: 1}),
    (2, "SL", 15, 4, {1: 1, 3: 1}),
    (2, "SL", 15, 6, {1: 1, 3: 1, 5: 2}),
    (2, "SL", 15, 8, {1: 1, 3: 1, 5: 2, 7: 4}),
    (3, "N", 7, 1, {1: 3}),
    (3, "N", 7, 2, {1: 3, 2: 3}),
    (3, "N", 7, 3, {1: 3, 2: 3, 3: 8}),
    (3, "S", 9, 1, {1: 3}),
    (3, "S", 9, 3, {1: 3, 3: 8}),
    (3, "S-abc", 11, 1, {1: 3}),
    (3, "S-abc", 11, 3, {1: 3, 3: 8}),
    (3, "SE", 21, 2, {1: 1}),
    (3, "SE", 21, 4, {1: 1, 3: 2}),
    (3, "SE", 21, 6, {1: 1, 3: 2, 5: 6}),
    (3, "SE", 21, 8, {1: 1, 3: 2, 5: 6, 7: 18}),
    (3, "SL", 17, 2, {1: 1}),
    (3, "SL", 17, 4, {1: 1, 3: 1}),
    (3, "SL", 17, 6, {1: 1, 3: 1, 5: 2}),
]


@pytest.mark.parametrize(
    "n,family,m,p,expected", COUNT_CASES,
    ids=[f"n{n}-{fam}-m{m}-p{p}" for n, fam, m, p, _ in COUNT_CASES])
def test_condition_counts(n, family, m, p, expected):
    cs = symbolic_log(build_scheme(n, family, m), p)
    assert cs.counts_by_degree() == expected
    assert len(cs.polys) == sum(expected.values())
    assert len(cs.polys) == len(cs.hall_labels) == len(cs.degrees)


def test_first_order_conditions_type_n():
    cs = symbolic_log(build_scheme(2, "N", 7), 1)
    v = cs.variables
    sum_a = sum((_var(s, v) for s in v if s.startswith("a")),
                MultiPoly.constant(0, v))
    sum_b = sum((_var(s, v) for s in v if s.startswith("b")),
                MultiPoly.constant(0, v))
    assert set(cs.polys) == {sum_a - 1, sum_b - 1}


def test_first_order_condition_leapfrog_is_weighted_sum():
    # palindromic stage weights w1 w2 w3 w4 w3 w2 w1: outer weights count twice
    cs = symbolic_log(build_scheme(2, "SL", 15), 2)
    v = cs.variables
    expected = (2 * _var("w_1", v) + 2 * _var("w_2", v)
                + 2 * _var("w_3", v) + _var("w_4", v) - 1)
    assert cs.polys == (expected,)


@pytest.mark.parametrize("n,family,m,p", [
    (2, "S", 9, 5), (2, "SL", 15, 8), (3, "S", 9, 3), (3, "SE", 21, 6),
])
def test_symmetric_schemes_emit_no_even_degree_conditions(n, family, m, p):
    cs = symbolic_log(build_scheme(n, family, m), p)
    assert all(d % 2 == 1 for d in cs.degrees)


# ------------------------------------------------------------ size guards

@pytest.mark.parametrize("n,family,m,p,message", [
    (2, "N", 7, 6, "capped at degree 5"),
    (3, "N", 7, 4, "capped at degree 3"),
    (2, "SL", 15, 10, "graded expansion capped"),
    (2, "S", 17, 4, "exceed the symbolic cap"),
])
def test_size_guards(n, family, m, p, message):
    with pytest.raises(ValueError, match=message):
        symbolic_log(build_scheme(n, family, m), p)


# ------------------------------------------------------------- buchberger

def test_buchberger_single_generator():
    v = ("x",)
    x = _var("x", v)
    gb = buchberger([x], GREVLEX)
    assert list(gb.polys) == [x]
    assert not gb.is_trivial


def test_buchberger_linear_system():
    v = ("x", "y")
    x, y = _var("x", v), _var("y", v)
    gb = buchberger([x + y - 1, x - y], GREVLEX)
    assert set(gb.polys) == {x - Fraction(1, 2), y - Fraction(1, 2)}


def test_buchberger_zero_dimensional():
    v = ("x", "y")
    x, y = _var("x", v), _var("y", v)
    gb = buchberger([x ** 2 - 2, y - x], GREVLEX)
    assert set(gb.polys) == {x - y, y ** 2 - 2}


def test_buchberger_inconsistent_system_is_trivial():
    v = ("x",)
    x = _var("x", v)
    gb = buchberger([x, x - 1], GREVLEX)
    assert gb.is_trivial


def test_ideal_membership():
    # every input condition must reduce to zero against its Groebner basis
    for scheme, p in [(build_scheme(2, "S", 9), 4),
                      (build_scheme(3, "SL", 17), 4)]:
        cs = symbolic_log(scheme, p)
        gb = buchberger(cs.polys, GREVLEX)
        assert all(not gb.reduce(poly) for poly in cs.polys)


def test_groebner_basis_is_deterministic():
    cs = symbolic_log(build_scheme(2, "S", 9), 4)
    a = buchberger(cs.polys, GREVLEX)
    b = buchberger(cs.polys, GREVLEX)
    assert list(a.polys) == list(b.polys)


# -------------------------------------------------------- freedom analysis

def test_freedom_one_parameter_family():
    # order 4 with five slots leaves a one-parameter family, and b_1 is a
    # valid choice of free parameter (as is any other single slot here)
    cs = symbolic_log(build_scheme(2, "S", 9), 4)
    report = analyze_freedom(cs)
    assert report.free_count == 1
    assert not report.zero_dimensional
    assert "b_1" in report.suggested_free_slots
    assert report.solution_count is None
    assert report.real_solution_count is None
    assert report.eliminant is None


def test_freedom_two_complex_solutions():
    # 12 w^2 - 6 w + 1 = 0 has no real roots: no real scheme of this shape
    cs = symbolic_log(build_scheme(3, "SL", 17), 4)
    report = analyze_freedom(cs)
    assert report.zero_dimensional
    assert report.free_count == 0
    assert report.solution_count == 2
    assert report.real_solution_count == 0
    expected = MultiPoly(("w_2",), {(2,): Fraction(1),
                                    (1,): Fraction(-1, 2),
                                    (0,): Fraction(1, 12)})
    assert report.eliminant == expected


def test_freedom_eliminate_to_other_slot():
    cs = symbolic_log(build_scheme(3, "SL", 17), 4)
    report = analyze_freedom(cs, eliminate_to="w_1")
    assert report.eliminant.used_variables() == ("w_1",)
    assert report.real_solution_count == 0
    with pytest.raises(ValueError, match="unknown slot"):
        analyze_freedom(cs, eliminate_to="w_9")


def test_freedom_three_real_solutions():
    cs = symbolic_log(build_scheme(2, "SL", 15), 6)
    report = analyze_freedom(cs)
    assert report.zero_dimensional
    assert report.solution_count == 39
    assert report.real_solution_count == 3


# ------------------------------------------------- numeric agreement

def test_conditions_vanish_at_catalog_parameters():
    cases = [("n2-p4-s-m9-mclachlan", 4), ("n3-p4-se-m17-opt", 4)]
    for name, p in cases:
        entry = CATALOG[name]
        cs = symbolic_log(entry.scheme, p)
        values = entry.scheme.resolve_slots(entry.params)
        residuals = cs.evaluate(values)
        assert max(abs(r) for r in residuals) < 5e-12, name


def test_conditions_vanish_exactly_for_exact_parameters():
    for name, p in [("n2-p2-sl-m3-leapfrog", 2), ("n3-p2-sl-m5-leapfrog", 2),
                    ("n3-p1-n-m3-euler", 1)]:
        entry = CATALOG[name]
        cs = symbolic_log(entry.scheme, p)
        values = entry.scheme.resolve_slots(entry.params)
        assert all(isinstance(v, (int, Fraction)) for v in values.values())
        residuals = cs.evaluate(values)
        assert residuals == [0] * len(cs.polys), name


def test_symbolic_matches_numeric_coordinates():
    # evaluating the condition polynomials reproduces the numerically
    # computed Hall coordinates of log U, element by element
    entry = CATALOG["n2-p4-s-m9-mclachlan"]
    cs = symbolic_log(entry.scheme, 4)
    values = entry.scheme.resolve_slots(entry.params)
    series = log_scheme(entry.scheme, entry.params, 4)
    for d, label, poly in zip(cs.degrees, cs.hall_labels, cs.polys):
        numeric = series.coords.get(label, 0.0) - (1 if d == 1 else 0)
        assert abs(poly.evaluate(values) - numeric) < 1e-12


# ------------------------------------------------------------------ export

def test_to_text_round_trippable_form():
    cs = symbolic_log(build_scheme(2, "S", 9), 4)
    text = cs.to_text()
    lines = text.strip().splitlines()
    assert lines[0] == "variables: " + " ".join(cs.variables)
    assert len(lines) == 1 + len(cs.polys)
    assert all(line.startswith("degree ") for line in lines[1:])


def test_groebner_basis_type():
    cs = symbolic_log(build_scheme(2, "S", 9), 4)
    report = analyze_freedom(cs)
    assert isinstance(report.groebner, GroebnerBasis)
    assert report.groebner.monomial_order is GREVLEX
