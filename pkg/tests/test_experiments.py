import json
import math
from fractions import Fraction

import pytest

from rrg.enumerate import (count_regular_by_edges, enumerate_regular,
                           enumerate_regular_by_edges)
from rrg.errors import InputError, ScopeError
from rrg.experiments import (FORMULAS, ExperimentSpec, best_window, comparison,
                             empirical_tau, exact_switch_histograms, run_concentration,
                             run_experiment, run_extend_stress, run_gamma_frequency,
                             run_simple_rate, run_switch_ratio, run_xti_check,
                             simple_pairing_multiplicity)
from rrg.pairing import enumerate_pairings, is_simple, project_multigraph


@pytest.mark.parametrize("n, d, expected", [
    (4, 3, 1), (5, 2, 12), (6, 2, 70), (6, 3, 70), (4, 1, 3), (8, 3, 19355),
])
def test_enumeration_counts(n, d, expected):
    graphs = list(enumerate_regular(n, d))
    assert len(graphs) == expected
    assert len({tuple(g.edges()) for g in graphs}) == expected
    assert count_regular_by_edges(n, d) == expected


def test_enumerators_agree_on_sets():
    a = {tuple(g.edges()) for g in enumerate_regular(6, 3)}
    b = {tuple(sorted(e)) for e in enumerate_regular_by_edges(6, 3)}
    assert a == b


def test_enumeration_scope():
    with pytest.raises(ScopeError):
        list(enumerate_regular(12, 3))
    with pytest.raises(ScopeError):
        list(enumerate_regular(14, 2))
    with pytest.raises(InputError):
        list(enumerate_regular(5, 3))


@pytest.mark.parametrize("n, d", [(2, 1), (4, 1), (6, 1), (3, 2), (4, 2), (5, 2), (6, 2),
                                  (4, 3)])
def test_enumeration_matches_simple_pairings(n, d):
    simple = sum(1 for p in enumerate_pairings(n, d) if is_simple(project_multigraph(p)))
    assert simple == len(list(enumerate_regular(n, d))) * simple_pairing_multiplicity(n, d)


def test_spec_validation():
    with pytest.raises(InputError):
        ExperimentSpec("nope", 10, 3)
    with pytest.raises(InputError):
        ExperimentSpec("concentration", 5, 3)
    with pytest.raises(InputError):
        ExperimentSpec("concentration", 10, 3, trials=0)


def test_window_and_tau():
    assert best_window({3: 10, 4: 5, 5: 7}) == (3, 15)
    assert best_window({2: 1, 4: 3, 5: 3}) == (4, 6)
    values = [3] * 5 + [4] * 95
    assert empirical_tau(values, 0.01) == 3
    assert empirical_tau(values, 0.1) == 4
    assert empirical_tau([], 0.1) is None


def test_comparison_requires_known_formula():
    row = comparison("prob-simple", 0.14, 0.13, 0.02, d=3, n=100)
    assert row["within"] and row["formula_id"] in FORMULAS
    with pytest.raises(KeyError):
        comparison("made-up", 1, 1)


def test_concentration_cycles():
    res = run_concentration(ExperimentSpec("concentration", 20, 2, 60, master_seed=4))
    hist = res.data["histogram"]
    assert set(hist) == {"2", "3"}
    assert sum(hist.values()) == 60 and res.data["unknown"] == 0
    assert res.data["window"] == [2, 3] and res.data["window_coverage"] == 1


def test_concentration_deterministic():
    spec = ExperimentSpec("concentration", 30, 3, 20, master_seed=11)
    a = json.dumps(run_concentration(spec).to_json(timing=False), sort_keys=True)
    b = json.dumps(run_concentration(spec).to_json(timing=False), sort_keys=True)
    assert a == b
    assert run_concentration(spec).trials["seed"][3] == run_concentration(spec).trials["seed"][3]


def test_concentration_workers_match_serial():
    serial = run_concentration(ExperimentSpec("concentration", 30, 3, 12, master_seed=2))
    pooled = run_concentration(ExperimentSpec("concentration", 30, 3, 12, master_seed=2,
                                              workers=2))
    assert serial.to_json(timing=False)["data"] == pooled.to_json(timing=False)["data"]
    assert serial.trials["chi"] == pooled.trials["chi"]


def test_concentration_flags_unknowns():
    spec = ExperimentSpec("concentration", 30, 3, 10, params={"budget": 1})
    res = run_concentration(spec)
    assert res.data["unknown"] > 0.05 * 10 and not res.acceptable
    assert res.data["resolved"] + res.data["unknown"] == 10


def test_simple_rate_examples():
    res = run_simple_rate(ExperimentSpec("simple-rate", 40, 1, 200))
    assert res.data["rate"] == 1
    res = run_simple_rate(ExperimentSpec("simple-rate", 50, 2, 2000, master_seed=1))
    assert abs(res.data["rate"] - math.exp(-3 / 4 - 8 / 600)) <= 0.03
    row = res.comparisons[0]
    assert row["formula_id"] == "prob-simple" and row["tolerance"] > 0


def test_xti_examples():
    res = run_xti_check(4, 1, 2)
    assert res.data["distribution"] == {"0": "2/3", "1": "1/3"}
    assert res.data["mode_k"] == 0
    full = run_xti_check(5, 2, 5)
    assert full.data["distribution"] == {"5": "1"}
    inv = run_xti_check(6, 2, 3).data["invariants"]
    assert inv["partition"] and inv["expectation"] and inv["mode_near_mean"] and inv["unimodal"]


def test_xti_monte_carlo_overlay():
    res = run_xti_check(6, 2, 3, trials=100_000, master_seed=3)
    atoms = [c for c in res.comparisons if c["formula_id"] == "class-size"]
    assert atoms and all(c["abs_gap"] <= 0.01 for c in atoms)
    assert sum(res.data["empirical"].values()) == 100_000


def test_xti_scope():
    with pytest.raises(ScopeError):
        run_xti_check(16, 2, 3)
    res = run_xti_check(16, 2, 3, trials=2000)
    assert res.data["mode"] == "mc"


def test_gamma_frequency_cycles():
    res = run_gamma_frequency(ExperimentSpec("gamma-frequency", 30, 2, 10,
                                             params={"samples": 500}))
    props = res.data["properties"]
    assert props["5"]["rate"] == 1
    assert all(res.data["joint_rate"] <= p["rate"] for p in props.values())
    for p in props.values():
        assert p["holds"] + p["violated"] + p["inconclusive"] == 10


def test_switch_ratio_exact_small():
    res = run_switch_ratio(8, 3, range(4))
    assert res.data["mode"] == "exact" and res.data["graphs"] == 19355
    assert not res.data["switch_precondition"]
    rows = [c for c in res.comparisons if c["formula_id"] == "switch-ratio"]
    assert rows and all("precondition fails" in c["note"] for c in rows)
    assert all("within" not in c for c in rows)


def test_switch_histograms_independent_recount():
    a = exact_switch_histograms(8, 3, range(4), range(4, 8))
    b = exact_switch_histograms(8, 3, range(4), range(4, 8), independent=True)
    assert a == b
    inner = a[0]
    assert Fraction(inner[3], inner[2]) == Fraction(8512, 7722)


def test_switch_ratio_refusals():
    with pytest.raises(ScopeError):
        run_switch_ratio(40, 3, range(4))
    with pytest.raises(ScopeError):
        run_switch_ratio(40, 3, range(4), samples=1000)
    with pytest.raises(InputError):
        run_switch_ratio(8, 3, range(4), w_set=[3, 4])


def test_switch_ratio_monte_carlo_small_threshold():
    res = run_switch_ratio(40, 3, range(4), samples=5000, min_samples=1000, master_seed=2)
    assert res.data["mode"] == "mc" and res.data["graphs"] == 5000
    assert sum(int(v) for v in res.data["inner"].values()) == 5000
    assert res.trials["batch_seeds"]


def test_extend_stress_trivial_and_valid():
    res = run_extend_stress(ExperimentSpec("extend-stress", 30, 3, 20,
                                           params={"u0_size": 0, "t": 4, "list_size": 2}))
    assert res.data["success_rate"] == 1
    res = run_extend_stress(ExperimentSpec("extend-stress", 60, 3, 40,
                                           params={"t": 4, "u0_size": 3,
                                                   "neighbor_threshold": 2,
                                                   "list_size": 2, "prune_floor": 1}))
    assert res.data["false_successes"] == 0
    assert sum(res.data["stages"].values()) == 40
    assert all(v for s, v in zip(res.trials["stage"], res.trials["validated"]) if s == "ok")


def test_run_experiment_dispatch():
    res = run_experiment(ExperimentSpec("xti", 4, 1, 1, params={"t": 2}))
    assert res.data["mode_k"] == 0
    res = run_experiment(ExperimentSpec("switch-ratio", 6, 3, 1, params={"u": 2}))
    assert res.data["graphs"] == 70


def test_all_comparisons_name_formulas():
    results = [
        run_simple_rate(ExperimentSpec("simple-rate", 30, 3, 100)),
        run_xti_check(6, 2, 3, trials=1000),
        run_switch_ratio(6, 3, range(2)),
    ]
    for res in results:
        doc = res.to_json()
        assert doc["schema"] == 1
        for c in doc["comparisons"]:
            assert c["formula_id"] in FORMULAS
