"""End-to-end acceptance gates, one per shipped guarantee.

Each test prints a single ``criterion k: PASS/FAIL`` line (run with ``-s`` to
see them all) and then asserts every clause of the guarantee at its stated
tolerance.  Clauses that cannot hold are still asserted as stated — the
failure message carries the quantitative reason.
"""

import math
import time
from fractions import Fraction

import numpy as np

from powerseq import circlemeasure, opcore, powerdyn, shiftlab, suites

SEED = suites.DEFAULT_SEED


def report(k: int, ok: bool, detail: str) -> None:
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)


def inflation_layout(j_max: int, theta_log: float = math.log(2.0)):
    """Segment bookkeeping (s_j = j+2, minimal padding) by direct recurrence."""
    rows, carry, x = [], 0, 3
    for j in range(1, j_max + 1):
        s = j + 2
        t = s * x
        m = t + carry
        l = m + 1
        rows.append({"j": j, "s": s, "x": x, "m": m,
                     "plateau": math.exp(theta_log / (s + 1))})
        carry += t + l
        x = 2 * m + 2
    return rows


def test_criterion_1_inflation_norm_profile():
    started = time.monotonic()
    result = suites.run_suite("serzcw", seed=SEED, theta=2.0, n_max=5000)
    elapsed = time.monotonic() - started
    stats = result.stats
    levels = [value for _, value in stats["plateau_levels"]]
    decreasing = all(b < a for a, b in zip(levels, levels[1:]))
    final = stats["final_plateau_value"]
    ok = result.passed and decreasing and elapsed < 10.0 and final <= 1.06
    report(1, ok, f"plateaus {['%.6f' % v for v in levels]}, final {final:.6f}, "
                  f"min norm >= 1: {result.passed}, {elapsed:.2f}s")
    assert result.passed, result.failures[:3]
    assert decreasing, levels
    assert all(v > 1.0 for v in levels), levels
    assert elapsed < 10.0, f"profile took {elapsed:.2f}s"
    layout = inflation_layout(9)
    first_low = next(r for r in layout if r["plateau"] <= 1.06)
    assert final <= 1.06, (
        f"final completed plateau is 2^(1/6) = {final:.9f} > 1.06; the plateau "
        f"after segment j sits at 2^(1/(j+3)), so a value <= 1.06 first occurs "
        f"at segment {first_low['j']} (2^(1/{first_low['s'] + 1}) = "
        f"{first_low['plateau']:.6f}), whose plateau starts at "
        f"n = {first_low['m']:,} — far beyond the stated horizon n_max = 5000, "
        f"where only segments 1-3 are complete")


def test_criterion_2_limit_recovery_and_orthogonality_equivalences():
    started = time.monotonic()
    recovery = suites.run_suite("T1", seed=SEED, trials=200)
    equivalences = suites.run_suite("pytxly", seed=SEED, trials=200)
    elapsed = time.monotonic() - started
    ok = recovery.passed and equivalences.passed and elapsed < 30.0
    report(2, ok, f"{recovery.trials} limit recoveries, {equivalences.trials} "
                  f"equivalence trials, {elapsed:.2f}s")
    assert recovery.passed, recovery.failures[:3]
    assert equivalences.passed, equivalences.failures[:3]
    assert elapsed < 30.0, f"suites took {elapsed:.2f}s"


def test_criterion_3_idempotent_classification_agreement():
    result = suites.run_suite("prichyr", seed=SEED, trials=500, tol=1e-6)
    report(3, result.passed, f"{result.trials} idempotents, "
                             f"{len(result.failures)} disagreements")
    assert result.passed, result.failures[:3]


def test_criterion_4_coadjoint_unit_eigenvector():
    result = suites.run_suite("pvzxk", seed=SEED, cutoff=200, n_check=100)
    stats = result.stats
    ok = result.passed and stats["tail_bound"] <= 1e-10
    report(4, ok, f"tail bound {stats['tail_bound']:.3e}, fixed-point defect "
                  f"{stats['fixed_point_defect']:.3e}, "
                  f"{stats['unit_pairings_checked']} exact unit pairings")
    assert result.passed, result.failures[:3]
    assert stats["tail_bound"] <= 1e-10
    assert stats["fixed_point_defect"] <= stats["tail_bound"]


def test_criterion_5_two_isometry_norm_law():
    worst_product, worst_norm = 0.0, 0.0
    for lam in (1.1, math.sqrt(2.0), 3.0):
        rule = shiftlab.TwoIsometryRule(lam)
        c = rule.c
        # the products reach 1 + 1e4*c, so the 1e-10 comparison is relative
        prod = 1.0
        for n in range(1, 10_001):
            prod *= rule.weight(n - 1) ** 2
            target = 1.0 + n * c
            worst_product = max(worst_product, abs(prod - target) / target)
            res = rule.power_norm(n)
            assert res.attained_at == 0
            worst_norm = max(worst_norm,
                             abs(math.exp(res.log_norm) - math.sqrt(target)) / math.sqrt(target))
        verdict = powerdyn.classify_power_sequence(
            opcore.WeightedShift(rule), window=range(4), n_max=64)
        assert verdict.verdict == "UnboundedPowers", (lam, verdict.verdict)
        estimate, trace = shiftlab.spectral_radius_estimate(rule, n_max=600)
        for n, v in trace:
            envelope = (1.0 + n * c) ** (0.5 / n)
            assert 1.0 - 1e-12 <= v <= envelope + 1e-12, (lam, n, v)
        assert trace[-1][1] <= 1.01  # the bracket closes onto r(T) = 1
        assert estimate >= 1.0 - 1e-12
    ok = worst_product <= 1e-10 and worst_norm <= 1e-10
    report(5, ok, f"max relative telescoping defect {worst_product:.3e}, "
                  f"max relative norm defect {worst_norm:.3e}, n <= 1e4")
    assert worst_product <= 1e-10
    assert worst_norm <= 1e-10


def test_criterion_6_circle_measure_catalogue():
    lebesgue = circlemeasure.CircleMeasure.lebesgue()
    leb_exact = all(lebesgue.fourier(k).value == 0j for k in (*range(1, 65), -1, -7))

    cantor = circlemeasure.CircleMeasure.cantor()
    base = abs(cantor.fourier(1).value)
    invariance = max(abs(abs(cantor.fourier(3 ** m).value) - base) for m in range(13))

    model_suite = suites.run_suite("T2", seed=SEED, k_max=2000)

    ok = leb_exact and invariance <= 1e-10 and base > 0.2 and model_suite.passed
    report(6, ok, f"Lebesgue coefficients exactly zero: {leb_exact}; Cantor "
                  f"|mu_hat(1)| = {base:.6f} with 3^m-invariance defect "
                  f"{invariance:.3e}; model suite pass: {model_suite.passed}")
    assert leb_exact
    assert invariance <= 1e-10
    assert base > 0.2
    assert model_suite.passed, model_suite.failures[:3]


def test_criterion_7_spectral_stability_suite():
    started = time.monotonic()
    result = suites.run_suite("sec5", seed=SEED, trials=500)
    elapsed = time.monotonic() - started
    ok = result.passed and elapsed < 60.0
    report(7, ok, f"{result.trials} normal matrices ({result.stats}), "
                  f"{elapsed:.2f}s")
    assert result.passed, result.failures[:3]
    assert elapsed < 60.0, f"suite took {elapsed:.2f}s"
