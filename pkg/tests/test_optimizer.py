"""Manifold solving and multi-start error minimization."""

import json

import pytest

from liesplit.catalog import build_scheme, catalog
from liesplit.optimizer import (
    ManifoldError,
    OptimizationProblem,
    minimize_epsilon,
    solve_on_manifold,
)
from liesplit.schemes import epsilon


# ----------------------------------------------------- solve_on_manifold

def test_pinned_chart_reproduces_catalog_point():
    scheme = build_scheme(2, "SL", 11)
    entry = catalog()["n2-p4-sl-m11-opt"]
    w2 = float(entry.params.values["w_2"])
    pa = solve_on_manifold(scheme, 4, {"w_2": w2})
    assert pa.values["w_1"] == pytest.approx(
        float(entry.params.values["w_1"]), rel=1e-12)
    assert pa.provenance == "manifold-newton"
    assert not pa.is_exact()


def test_pinned_chart_at_rational_value():
    # w_1 is a smooth function of the pin; at w_2 = 2/3 it lands here
    scheme = build_scheme(2, "SL", 11)
    pa = solve_on_manifold(scheme, 4, {"w_2": 2 / 3})
    assert pa.values["w_1"] == pytest.approx(0.26160060887008718, abs=1e-12)


def test_pin_result_satisfies_order_conditions():
    scheme = build_scheme(2, "SL", 19)
    pa = solve_on_manifold(scheme, 6, {"w_2": 0.5553})
    rep = epsilon(scheme, pa, 6)
    assert rep.p == 6
    assert all(r < 1e-10 for d, r in rep.order_residuals.items() if d <= 6)


def test_no_active_conditions_is_identity():
    # at p = 2 the symmetric five-factor template is fully determined by
    # its closures, so the chart solve has nothing to do
    scheme = build_scheme(2, "S", 5)
    pa = solve_on_manifold(scheme, 2, {"a_1": 0.3})
    assert set(pa.values) == {"a_1"}
    assert pa.values["a_1"] == pytest.approx(0.3)


def test_wrong_chart_size_is_rejected():
    scheme = build_scheme(2, "SL", 11)
    with pytest.raises(ManifoldError, match="choose 1 free slot"):
        solve_on_manifold(scheme, 4, {"w_1": 0.1, "w_2": 0.2})


def test_unknown_slot_is_rejected():
    scheme = build_scheme(2, "SL", 11)
    with pytest.raises(ValueError, match="not free slots"):
        solve_on_manifold(scheme, 4, {"w_9": 0.1})


def test_non_finite_guess_raises():
    scheme = build_scheme(2, "SL", 11)
    with pytest.raises(ManifoldError, match="non-finite"):
        solve_on_manifold(scheme, 4, {"w_2": 0.6}, guess=[float("nan")])


# ----------------------------------------------------- minimize_epsilon

@pytest.fixture(scope="module")
def m9_result():
    scheme = build_scheme(2, "S", 9)
    problem = OptimizationProblem(scheme, 4, free_slots=("b_1",),
                                  starts=24, seed=0)
    return minimize_epsilon(problem)


def test_recovers_both_m9_minima(m9_result):
    entry = catalog()["n2-p4-s-m9-opt"]
    best_pa, best_rep = m9_result.best
    assert best_rep.epsilon == pytest.approx(float(entry.epsilon), rel=1e-4)
    assert abs(best_pa.values["b_1"]
               - float(entry.params.values["b_1"])) < 1e-4
    assert "<".join(best_rep.ordering_best) in entry.orderings
    # the runner-up basin sits on the other side of the b_1 axis
    second = m9_result.local_minima[1][1]
    assert second.epsilon == pytest.approx(0.069172, rel=1e-3)
    assert m9_result.local_minima[1][0].values["b_1"] == pytest.approx(
        0.604175, abs=1e-4)


def test_minima_are_sorted_and_separated(m9_result):
    eps = [rep.epsilon for _, rep in m9_result.local_minima]
    assert eps == sorted(eps)
    pts = [tuple(pa.values[k] for k in sorted(pa.values))
           for pa, _ in m9_result.local_minima]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert max(abs(a - b) for a, b in zip(pts[i], pts[j])) > 1e-5


def test_result_json_round_trips(m9_result):
    doc = json.loads(m9_result.to_json())
    assert doc["scheme"]["family"] == "S"
    assert doc["scheme"]["m"] == 9
    assert doc["order"] == 4
    assert doc["seed"] == 0
    assert len(doc["minima"]) == len(m9_result.local_minima)
    assert doc["minima"][0]["epsilon"] == m9_result.best[1].epsilon


def test_same_seed_same_result():
    def run():
        problem = OptimizationProblem(build_scheme(2, "SL", 11), 4,
                                      starts=16, seed=7)
        return minimize_epsilon(problem)

    r1, r2 = run(), run()
    assert len(r1.local_minima) == len(r2.local_minima)
    for (pa, ra), (pb, rb) in zip(r1.local_minima, r2.local_minima):
        assert pa.values == pb.values
        assert ra.epsilon == rb.epsilon


def test_zero_free_directions_enumerates_real_solutions():
    # the fifteen-factor p = 6 system is zero-dimensional with three real
    # solutions; with no free direction the multi-start degenerates to a
    # root search and should find all of them
    scheme = build_scheme(2, "SL", 15)
    problem = OptimizationProblem(scheme, 6, free_slots=(), starts=150,
                                  seed=1, bounds=(-2.0, 2.0))
    res = minimize_epsilon(problem)
    assert len(res.local_minima) == 3
    best_pa, best_rep = res.best
    yoshida = catalog()["n2-p6-sl-m15-yoshida"]
    for k, v in yoshida.params.values.items():
        assert best_pa.values[k] == pytest.approx(float(v), abs=1e-9)
    assert best_rep.epsilon == pytest.approx(float(yoshida.epsilon),
                                             rel=1e-3)
    others = sorted(rep.epsilon for _, rep in res.local_minima)[1:]
    assert others == pytest.approx([5.716708, 5.881016], rel=1e-4)


def test_every_start_failing_raises():
    problem = OptimizationProblem(build_scheme(2, "S", 9), 4,
                                  free_slots=("b_1",), starts=3, seed=0,
                                  bounds=(400.0, 401.0))
    with pytest.raises(ManifoldError, match="every start failed"):
        minimize_epsilon(problem)


def test_duplicate_free_slots_rejected():
    problem = OptimizationProblem(build_scheme(2, "S", 9), 4,
                                  free_slots=("b_1", "b_1"), starts=2,
                                  seed=0)
    with pytest.raises(ValueError, match="duplicate"):
        minimize_epsilon(problem)
