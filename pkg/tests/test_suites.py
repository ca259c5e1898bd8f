"""Property-verification suites run with cheap parameters."""

import pytest

from powerseq import suites
from powerseq.errors import ConstraintError

# small enough to keep the whole module under a few seconds while still
# exercising every code path inside each suite
CHEAP = {
    "T1": {"trials": 12, "n_max": 400},
    "pytxly": {"trials": 16},
    "L1": {"trials": 12, "n_max": 300},
    # limyng keeps its full horizon: the radius estimate only dips below
    # 1 + 1e-6 past the fifth norm plateau (n around 2.7e5); the scan is cheap
    "limyng": {"trials": 10},
    "prichyr": {"trials": 25},
    "serzcw": {"n_max": 1500},
    "pvzxk": {"cutoff": 150},
    "T2": {"k_max": 600},
    "sec5": {"trials": 20, "n_max": 300},
}


@pytest.mark.parametrize("name", sorted(CHEAP))
def test_suite_passes_with_cheap_parameters(name):
    result = suites.run_suite(name, seed=suites.DEFAULT_SEED, **CHEAP[name])
    assert result.passed, result.failures[:3]
    assert result.name == name
    assert result.seed == suites.DEFAULT_SEED


def test_unknown_suite_is_rejected():
    with pytest.raises(ConstraintError):
        suites.run_suite("nonsense")


def test_aliases_resolve_to_canonical_names():
    result = suites.run_suite("coadjoint-witness", cutoff=150)
    assert result.name == "pvzxk"
    assert set(suites.ALIASES.values()) == set(suites.SUITES)


def test_result_json_shape():
    result = suites.run_suite("pvzxk", cutoff=150)
    payload = result.to_json()
    assert set(payload) == {"suite", "seed", "trials", "passed", "failures",
                            "failures_truncated", "stats"}
    assert payload["passed"] is True
    assert payload["failures"] == []


def test_seed_changes_are_still_green():
    # the properties are theorems, not seed-tuned accidents
    for seed in (1, 7, 20260814):
        assert suites.run_suite("pytxly", seed=seed, trials=10).passed


def test_serzcw_records_plateau_statistics():
    result = suites.run_suite("serzcw", n_max=1500)
    stats = result.stats
    assert stats["limsup_est"] == pytest.approx(2.0, rel=1e-12)
    levels = [value for _, value in stats["plateau_levels"]]
    assert levels == sorted(levels, reverse=True)
    assert stats["liminf_est"] == stats["final_plateau_value"]
    assert result.artifacts["norm_profile"][0].startswith("n,")


def test_pvzxk_tail_is_tiny():
    result = suites.run_suite("pvzxk", cutoff=150)
    assert result.stats["tail_bound"] <= 1e-10
    assert result.stats["fixed_point_defect"] <= result.stats["tail_bound"]
    assert result.stats["unit_pairings_checked"] == 101
