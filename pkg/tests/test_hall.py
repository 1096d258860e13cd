"""Hall bases: Witt counts, element structure, expansion, coordinates."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from liesplit import NCSeries, exp, log, make_alphabet, mul, series_from_generator
from liesplit.hall import (
    HallBasis,
    build_hall_basis,
    expand_hall,
    hall_degree,
    hall_str,
    lie_coordinates,
    witt_dimension,
)
from liesplit.hall import _Order

from _naive import n_commutator

AB = make_alphabet("AB")
ABC = make_alphabet("ABC")


def graded_dims_oracle(gen_degrees, D):
    """Generalized Witt dimensions from the generating-function identity

        prod_k (1 - t^k)^(-D_k) = (1 - f(t))^(-1),   f(t) = sum_g t^deg(g),

    derived independently of the basis construction: taking log-derivatives
    gives sum_{k | m} k D_k = [t^m] t f'(t) / (1 - f(t)), then Moebius
    inversion recovers D_k.
    """
    f = [0] * (D + 1)
    tfp = [0] * (D + 1)
    for d in gen_degrees:
        f[d] += 1
        tfp[d] += d
    g = [0] * (D + 1)
    for m in range(D + 1):
        g[m] = tfp[m] + sum(f[j] * g[m - j] for j in range(1, m + 1))
    dims = {}
    for k in range(1, D + 1):
        s = sum(int(mobius(k // j)) * g[j] for j in divisors(k))
        assert s % k == 0
        dims[k] = s // k
    return dims


# ------------------------------------------------------------- counting


def test_witt_dimension_pinned_values():
    assert [witt_dimension(2, k) for k in range(1, 13)] == [
        2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335]
    assert [witt_dimension(3, k) for k in range(1, 13)] == [
        3, 3, 8, 18, 48, 116, 312, 810, 2184, 5880, 16104, 44220]
    assert witt_dimension(1, 1) == 1
    assert all(witt_dimension(1, k) == 0 for k in range(2, 8))


def test_witt_matches_generating_function_oracle():
    for n in (1, 2, 3, 4):
        dims = graded_dims_oracle([1] * n, 9)
        for k in range(1, 10):
            assert witt_dimension(n, k) == dims[k]


def test_basis_counts_match_witt_unit_degrees():
    for alphabet, D in ((AB, 7), (ABC, 5)):
        basis = build_hall_basis(alphabet, D)
        for k in range(1, D + 1):
            assert len(basis.elements(k)) == witt_dimension(len(alphabet), k)


def test_graded_basis_counts_match_oracle():
    # leapfrog-type graded alphabet: one generator per odd degree
    degs = [1, 3, 5, 7]
    alph = make_alphabet([f"Z{d}" for d in degs], degs)
    basis = build_hall_basis(alph, 7)
    oracle = graded_dims_oracle(degs, 7)
    assert basis.degree_counts() == {k: v for k, v in oracle.items() if v}
    assert [len(basis.elements(k)) for k in (1, 3, 5, 7)] == [1, 1, 2, 4]

    # Euler-type graded alphabet: one generator per degree
    degs = list(range(1, 8))
    alph = make_alphabet([f"Z{d}" for d in degs], degs)
    basis = build_hall_basis(alph, 7)
    oracle = graded_dims_oracle(degs, 7)
    assert basis.degree_counts() == {k: v for k, v in oracle.items() if v}
    assert [len(basis.elements(k)) for k in (1, 3, 5, 7)] == [1, 2, 6, 18]


# ------------------------------------------------------- element structure


def test_degree_two_and_three_elements_two_letters():
    basis = build_hall_basis(AB, 3)
    assert basis.elements(1) == (0, 1)
    assert basis.elements(2) == ((0, 1),)
    assert basis.elements(3) == ((0, (0, 1)), (1, (0, 1)))
    assert hall_str((0, (0, 1)), AB) == "[A,[A,B]]"


def test_degree_four_five_elements_two_letters():
    basis = build_hall_basis(AB, 5)
    A, B = 0, 1
    AB_ = (A, B)
    assert basis.elements(4) == ((A, (A, AB_)), (B, (A, AB_)), (B, (B, AB_)))
    assert basis.elements(5) == (
        (A, (A, (A, AB_))),
        (B, (A, (A, AB_))),
        (B, (B, (A, AB_))),
        (B, (B, (B, AB_))),
        (AB_, (A, AB_)),
        (AB_, (B, AB_)),
    )


def test_three_letter_low_degree_elements():
    basis = build_hall_basis(ABC, 3)
    A, B, C = 0, 1, 2
    assert basis.elements(2) == ((A, B), (A, C), (B, C))
    assert basis.elements(3) == (
        (A, (A, B)), (A, (A, C)),
        (B, (A, B)), (B, (A, C)), (B, (B, C)),
        (C, (A, B)), (C, (A, C)), (C, (B, C)),
    )


def test_rank_order_agrees_with_recursive_order():
    basis = build_hall_basis(ABC, 4)
    order = _Order(basis.generator_degrees, basis.ordering)
    elements = basis.elements()
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.choice(elements), rng.choice(elements)
        assert (basis._rank[a] < basis._rank[b]) == order.less(a, b)


def test_ordering_permutation_changes_generator_order():
    basis = build_hall_basis(AB, 3, ordering=(1, 0))  # B < A
    assert basis.elements(1) == (1, 0)
    assert basis.elements(2) == ((1, 0),)  # [B,A]
    assert basis.elements(3) == ((1, (1, 0)), (0, (1, 0)))


def test_dump_format():
    text = build_hall_basis(AB, 3).dump().splitlines()
    assert text == ["A", "B", "[A,B]", "[A,[A,B]]", "[B,[A,B]]"]


def test_graded_ordering_prefers_generator_on_left():
    # with generators ordered before all brackets, Z5 pairs as [Z5,[Z1,Z3]]
    degs = [1, 3, 5]
    alph = make_alphabet(["Z1", "Z3", "Z5"], degs)
    basis = build_hall_basis(alph, 9)
    deg9 = basis.elements(9)
    assert (2, (0, 1)) in deg9  # [Z5,[Z1,Z3]]


# ------------------------------------------------------------- expansion


def test_expand_hall_pinned():
    assert dict(expand_hall((0, 1), 2).items()) == {
        (0, 1): Fraction(1), (1, 0): Fraction(-1)}
    assert dict(expand_hall((0, (0, 1)), 3).items()) == {
        (0, 0, 1): Fraction(1), (0, 1, 0): Fraction(-2), (1, 0, 0): Fraction(1)}
    assert dict(expand_hall(0, 3).items()) == {(0,): Fraction(1)}


def test_expand_hall_matches_naive_commutators():
    a = {(0,): Fraction(1)}
    b = {(1,): Fraction(1)}
    ab = n_commutator(a, b, (1, 1), 5)
    bab = n_commutator(b, ab, (1, 1), 5)
    b_bab = n_commutator(b, bab, (1, 1), 5)
    assert dict(expand_hall((1, (1, (0, 1))), 5).items()) == b_bab


def test_expand_hall_degree_guard():
    with pytest.raises(ValueError):
        expand_hall((0, (0, 1)), 2)


# ----------------------------------------------------------- coordinates


def test_lie_coordinates_simple_commutator():
    basis = build_hall_basis(AB, 4)
    s = NCSeries.from_words(AB, 4, {(0, 1): Fraction(1), (1, 0): Fraction(-1)})
    lie, residual = lie_coordinates(s, basis)
    assert residual == 0
    assert lie.coords == {(0, 1): Fraction(1)}


def test_lie_coordinates_bch_degree_four():
    basis = build_hall_basis(AB, 4)
    ea = exp(series_from_generator(AB[0], Fraction(1), 4, AB))
    eb = exp(series_from_generator(AB[1], Fraction(1), 4, AB))
    lie, residual = lie_coordinates(log(mul(ea, eb)), basis)
    assert residual == 0
    assert lie.coords_at_degree(1) == {0: Fraction(1), 1: Fraction(1)}
    assert lie.coords_at_degree(2) == {(0, 1): Fraction(1, 2)}
    assert lie.coords_at_degree(3) == {
        (0, (0, 1)): Fraction(1, 12), (1, (0, 1)): Fraction(-1, 12)}
    assert lie.coords_at_degree(4) == {(1, (0, (0, 1))): Fraction(-1, 24)}


def test_lie_coordinates_non_lie_input():
    basis = build_hall_basis(AB, 2)
    s = NCSeries.from_words(AB, 2, {(0, 1): Fraction(1)})
    _, residual = lie_coordinates(s, basis)
    assert residual > 0


def test_float_coordinates():
    basis = build_hall_basis(AB, 3)
    words = expand_hall((0, (0, 1)), 3)
    s = words.map_coefficients(lambda c: 0.37 * float(c))
    lie, residual = lie_coordinates(s, basis)
    assert residual < 1e-14
    assert abs(lie.coords[(0, (0, 1))] - 0.37) < 1e-14


def hall_combo_strategy(basis, max_terms=4):
    elements = list(basis.elements())
    coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=8)
    return st.dictionaries(st.sampled_from(elements), coeffs, min_size=1, max_size=max_terms)


@settings(max_examples=30, deadline=None)
@given(combo=hall_combo_strategy(build_hall_basis(AB, 5)))
def test_roundtrip_coordinates_of_hall_combinations(combo):
    basis = build_hall_basis(AB, 5)
    s = NCSeries.zero(AB, 5)
    for e, c in combo.items():
        s = s + basis.expansion(e).scale(c)
    lie, residual = lie_coordinates(s, basis)
    assert residual == 0
    expected = {e: c for e, c in combo.items() if c}
    assert lie.coords == expected
    assert lie.to_series() == s


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_jacobi_identity_nullity(data):
    basis = build_hall_basis(ABC, 6)
    pool = [e for e in basis.elements() if hall_degree(e, basis.generator_degrees) <= 2]
    v = data.draw(st.sampled_from(pool))
    w = data.draw(st.sampled_from(pool))
    x = data.draw(st.sampled_from(pool))
    total = NCSeries.zero(ABC, 6)
    for a, b, c in ((v, w, x), (w, x, v), (x, v, w)):
        nested = n_commutator(
            basis.expand_words(a),
            n_commutator(basis.expand_words(b), basis.expand_words(c), (1, 1, 1), 6),
            (1, 1, 1), 6)
        piece = NCSeries.from_words(ABC, 6, nested)
        lie, residual = lie_coordinates(piece, basis)
        assert residual == 0  # each nested commutator is a Lie element
        total = total + piece
    lie, residual = lie_coordinates(total, basis)
    assert residual == 0
    assert lie.coords == {}


def test_order_permutation_covariance():
    # same Lie element, coordinates under A<B and B<A expand to the same words
    basis_ab = build_hall_basis(AB, 4)
    basis_ba = build_hall_basis(AB, 4, ordering=(1, 0))
    ea = exp(series_from_generator(AB[0], Fraction(1, 2), 4, AB))
    eb = exp(series_from_generator(AB[1], Fraction(-1, 3), 4, AB))
    z = log(mul(ea, eb))
    lie_ab, r1 = lie_coordinates(z, basis_ab)
    lie_ba, r2 = lie_coordinates(z, basis_ba)
    assert r1 == 0 and r2 == 0
    assert lie_ab.coords != lie_ba.coords  # genuinely different charts
    assert lie_ab.to_series() == z
    assert lie_ba.to_series() == z


def test_series_beyond_basis_truncation_rejected():
    basis = build_hall_basis(AB, 3)
    s = NCSeries.from_words(AB, 4, {(0,): Fraction(1)})
    with pytest.raises(ValueError):
        lie_coordinates(s, basis)
