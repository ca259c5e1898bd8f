"""Randomized and constructive verification suites behind `verify-suite`.

Each suite bundles the property checks for one family of results and reports
every violated invariant by name, so a nonzero exit from the CLI always says
which claim broke and on which trial.  The suite names are stable identifiers
used by downstream scripts; what each one verifies:

- T1:      constructor-built convergent operators T = S (I_k + L) S^{-1} —
           the classifier recovers an idempotent, commuting limit whose range
           is the fixed space.
- pytxly:  the three-way equivalence "limit self-adjoint <=> N(I-T) =
           N(I-T*) <=> the fixed space reduces T".
- L1:      power norms with trailing minimum <= 1 force a self-adjoint limit.
- limyng:  r(T) < 1 iff power norms decay, plus the exact-norm shift whose
           power norms have liminf 1 and spectral radius exactly 1.
- prichyr: among idempotents, self-adjointness is equivalent to numerical
           radius at most 1.
- serzcw:  the inflation shift's exact norm profile — prescribed peak values,
           decreasing plateau levels, and norms never below 1.
- pvzxk:   the increasing-weight shift whose adjoint has a unit eigenvector:
           l^2 tail certificate, exact unit pairings, and a certified-trivial
           fixed space for T itself.
- T2:      weak convergence of modeled unitaries: decaying continuous parts
           and eigenvalues only at 1, with the discrete projection as limit.
- sec5:    spectral measures of random normal matrices: structural defects,
           moment identities, the stability trichotomy, the resolvent
           series, and agreement with the dynamic classifier.

Trials derive from a single 64-bit seed; every report records it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import circlemeasure, opcore, powerdyn, semispectral, shiftlab

__all__ = ["DEFAULT_SEED", "SUITES", "SuiteResult", "run_suite"]

DEFAULT_SEED = 1729

#: failure records kept per suite before truncation
_MAX_FAILURES = 50


@dataclass
class SuiteResult:
    name: str
    seed: int
    trials: int
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    truncated_failures: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and not self.truncated_failures

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "failures": self.failures,
            "failures_truncated": self.truncated_failures,
            "stats": self.stats,
        }


class _Recorder:
    def __init__(self):
        self.failures: list[dict] = []
        self.truncated = 0

    def check(self, condition: bool, invariant: str, trial=None, detail: str = "") -> bool:
        if not condition:
            if len(self.failures) < _MAX_FAILURES:
                entry = {"invariant": invariant}
                if trial is not None:
                    entry["trial"] = trial
                if detail:
                    entry["detail"] = detail
                self.failures.append(entry)
            else:
                self.truncated += 1
        return bool(condition)


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


# ---------------------------------------------------------------------------
# random fixtures
# ---------------------------------------------------------------------------

def _haar_unitary(rng, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _conditioned_similarity(rng, n: int) -> np.ndarray:
    """Invertible S with singular values in [1/2, 2] (condition number <= 4)."""
    u = _haar_unitary(rng, n)
    v = _haar_unitary(rng, n)
    sv = rng.uniform(0.5, 2.0, size=n)
    return u @ np.diag(sv) @ v


def _stable_block(rng, n: int, r_max: float = 0.9) -> np.ndarray:
    """Random matrix rescaled to a prescribed spectral radius below r_max."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    a = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(n)
    radius = float(np.abs(np.linalg.eigvals(a)).max())
    target = rng.uniform(0.2, 1.0) * r_max
    return a * (target / max(radius, 1e-9))


def _block_embed(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    k, m = top.shape[0], bottom.shape[0]
    out = np.zeros((k + m, k + m), dtype=complex)
    out[:k, :k] = top
    out[k:, k:] = bottom
    return out


def _convergent_fixture(rng, orthogonal: bool, dim_max: int = 8,
                        r_max: float = 0.9) -> dict:
    """T = S (I_k + L) S^{-1} with r(L) < r_max, plus its true limit projection."""
    dim = int(rng.integers(2, dim_max + 1))
    k = int(rng.integers(1, dim))
    s = _haar_unitary(rng, dim) if orthogonal else _conditioned_similarity(rng, dim)
    s_inv = s.conj().T if orthogonal else np.linalg.inv(s)
    l_block = _stable_block(rng, dim - k, r_max)
    t = s @ _block_embed(np.eye(k, dtype=complex), l_block) @ s_inv
    p = s @ _block_embed(np.eye(k, dtype=complex), np.zeros_like(l_block)) @ s_inv
    return {"t": t, "p": p, "s": s, "k": k, "dim": dim, "orthogonal": orthogonal,
            "l": l_block}


def _idempotent_fixture(rng, orthogonal: bool, dim_max: int = 8,
                        min_defect: float = 1e-2) -> np.ndarray:
    """Random idempotent; oblique ones get a self-adjointness defect >= min_defect."""
    for _ in range(64):
        dim = int(rng.integers(2, dim_max + 1))
        rank = int(rng.integers(1, dim))
        s = _haar_unitary(rng, dim) if orthogonal else _conditioned_similarity(rng, dim)
        s_inv = s.conj().T if orthogonal else np.linalg.inv(s)
        p = s @ _block_embed(np.eye(rank, dtype=complex),
                             np.zeros((dim - rank, dim - rank))) @ s_inv
        defect = _norm(p - p.conj().T)
        if orthogonal or defect >= min_defect:
            return p
    raise AssertionError("idempotent fixture conditioning failed to converge")


_STRICT_TOL = powerdyn.Tolerances(convergence=1e-11, stable_run=10)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_t1(seed: int = DEFAULT_SEED, trials: int = 200, n_max: int = 400,
             **_ignored) -> SuiteResult:
    """Limit recovery for similarity-built convergent operators."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    detections, recover_errs = [], []
    for i in range(trials):
        fx = _convergent_fixture(rng, orthogonal=bool(i % 2))
        rep = powerdyn.classify_power_sequence(fx["t"], n_max=n_max,
                                               tolerances=_STRICT_TOL)
        if not rec.check(rep.verdict == "NormConvergent", "classify-norm-convergent",
                         i, f"verdict {rep.verdict}"):
            continue
        p = rep.limit
        detections.append(rep.detected_at)
        power = np.linalg.matrix_power(fx["t"], rep.detected_at)
        rec.check(_norm(power - p) <= 1e-8, "power-close-at-detection", i,
                  f"||T^n - P|| = {_norm(power - p):.3e}")
        diag = powerdyn.projection_diagnostics(p, fx["t"])
        rec.check(diag.idempotency_defect <= 1e-8, "limit-idempotent", i,
                  f"{diag.idempotency_defect:.3e}")
        rec.check(diag.commutation_defect <= 1e-8, "limit-commutes", i,
                  f"{diag.commutation_defect:.3e}")
        rec.check(bool(diag.range_equality), "range-equals-fixed-space", i)
        recover_errs.append(_norm(p - fx["p"]))
        rec.check(recover_errs[-1] <= 1e-6, "matches-constructor-projection", i,
                  f"{recover_errs[-1]:.3e}")
    result = SuiteResult("T1", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    if detections:
        result.stats = {"median_detection_n": float(np.median(detections)),
                        "max_projection_error": max(recover_errs)}
    return result


def suite_pytxly(seed: int = DEFAULT_SEED, trials: int = 200, **_ignored) -> SuiteResult:
    """Self-adjoint limit <=> equal kernels <=> fixed space reduces T."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    classes = {"orthogonal": 0, "oblique": 0}
    for i in range(trials):
        orthogonal = bool(i % 2)
        fx = _convergent_fixture(rng, orthogonal=orthogonal)
        # condition the oblique class away from the decision boundary
        if not orthogonal and _norm(fx["p"] - fx["p"].conj().T) < 1e-2:
            fx = _convergent_fixture(rng, orthogonal=False)
            if _norm(fx["p"] - fx["p"].conj().T) < 1e-2:
                continue
        classes["orthogonal" if orthogonal else "oblique"] += 1
        t, p = fx["t"], fx["p"]
        sa_flag = _norm(p - p.conj().T) <= 1e-8
        report = powerdyn.kernels(t)
        eq_flag = report.relation == "equal"
        b1 = report.t_basis
        eye = np.eye(t.shape[0], dtype=complex)
        invariance = _norm((eye - b1 @ b1.conj().T) @ (t.conj().T @ b1))
        red_flag = invariance <= 1e-6
        rec.check(sa_flag == eq_flag == red_flag,
                  "selfadjoint-iff-kernels-equal-iff-reducing", i,
                  f"self-adjoint {sa_flag}, kernels {report.relation}, "
                  f"adjoint-invariance defect {invariance:.3e}")
    rec.check(min(classes.values()) >= trials // 4, "both-classes-exercised",
              detail=str(classes))
    result = SuiteResult("pytxly", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {"class_counts": classes}
    return result


def suite_l1(seed: int = DEFAULT_SEED, trials: int = 200, n_max: int = 400,
             **_ignored) -> SuiteResult:
    """Trailing power norms <= 1 + tol force the limit to be self-adjoint."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    hypothesis_hits = 0
    for i in range(trials):
        kind = i % 3
        if kind < 2:
            fx = _convergent_fixture(rng, orthogonal=(kind == 0))
            op = fx["t"]
        else:
            dim = int(rng.integers(2, 9))
            phases = np.exp(2j * np.pi * rng.uniform(0.1, 0.9, size=dim))
            u = _haar_unitary(rng, dim)
            op = u @ np.diag(phases) @ u.conj().T
        rep = powerdyn.classify_power_sequence(op, n_max=n_max,
                                               tolerances=_STRICT_TOL)
        norms = [v for _, v in rep.power_norm_trace]
        trailing = min(norms[-max(5, len(norms) // 4):])
        if trailing <= 1.0 + 1e-9 and rep.limit is not None:
            hypothesis_hits += 1
            sa = _norm(rep.limit - rep.limit.conj().T)
            rec.check(sa <= 1e-6, "low-norm-limit-is-orthogonal", i,
                      f"trailing min {trailing:.12f}, self-adjointness defect {sa:.3e}")
    rec.check(hypothesis_hits >= trials // 6, "hypothesis-exercised",
              detail=f"only {hypothesis_hits} of {trials} trials hit the hypothesis")
    result = SuiteResult("L1", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {"hypothesis_hits": hypothesis_hits}
    return result


def suite_limyng(seed: int = DEFAULT_SEED, trials: int = 120, n_max: int = 280_000,
                 **_ignored) -> SuiteResult:
    """r(T) < 1 iff power norms decay; inflation norms give r(T) = 1."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    for i in range(trials):
        dim = int(rng.integers(2, 9))
        a = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
        radius = float(np.abs(np.linalg.eigvals(a)).max())
        stable = bool(i % 2)
        target = rng.uniform(0.3, 0.85) if stable else rng.uniform(1.05, 1.6)
        a *= target / max(radius, 1e-9)
        norms = []
        power = np.eye(dim, dtype=complex)
        for _ in range(200):
            power = power @ a
            norms.append(_norm(power))
        if stable:
            rec.check(norms[-1] <= 1e-6, "subunit-radius-forces-norm-decay", i,
                      f"r = {target:.3f}, ||T^200|| = {norms[-1]:.3e}")
        else:
            rec.check(min(norms) >= 1.0 - 1e-12, "unit-radius-blocks-decay", i,
                      f"r = {target:.3f}, min norm {min(norms):.6f}")

    rule = shiftlab.InflationRule(shiftlab.InflationParams(theta=2.0))
    min_est, argmin = math.inf, 0
    negative_log = False
    for n in range(1, n_max + 1):
        log_norm, _, _ = rule.power_norm_log(n)
        if log_norm < 0.0:
            negative_log = True
        est = math.exp(log_norm / n)
        if est < min_est:
            min_est, argmin = est, n
    rec.check(not negative_log, "inflation-norms-at-least-one")
    rec.check(min_est >= 1.0, "inflation-radius-estimate-at-least-one",
              detail=f"min estimate {min_est!r}")
    rec.check(min_est - 1.0 <= 1e-6, "inflation-radius-estimate-reaches-one",
              detail=f"min estimate 1 + {min_est - 1.0:.3e} at n = {argmin}")
    result = SuiteResult("limyng", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {"inflation_radius_estimate": min_est,
                    "inflation_estimate_argmin": argmin}
    return result


def suite_prichyr(seed: int = DEFAULT_SEED, trials: int = 500, tol: float = 1e-6,
                  **_ignored) -> SuiteResult:
    """Idempotents: self-adjoint within tol <=> numerical radius <= 1 + tol."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    radii = []
    for i in range(trials):
        p = _idempotent_fixture(rng, orthogonal=bool(i % 2))
        diag = powerdyn.projection_diagnostics(p)
        sa_flag = diag.self_adjointness_defect <= tol
        w = float(diag.numerical_radius)
        radii.append(w)
        w_flag = w <= 1.0 + tol
        rec.check(sa_flag == w_flag, "orthogonal-iff-numerical-radius-one", i,
                  f"self-adjointness defect {diag.self_adjointness_defect:.3e}, "
                  f"w(P) = {w:.9f}")
    result = SuiteResult("prichyr", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {"max_numerical_radius": max(radii), "min_numerical_radius": min(radii)}
    return result


def suite_serzcw(seed: int = DEFAULT_SEED, theta: float = 2.0, n_max: int = 5000,
                 s_offset: int = 2, **_ignored) -> SuiteResult:
    """Exact norm profile of the inflation shift: peaks, plateaus, liminf."""
    rule = shiftlab.InflationRule(shiftlab.InflationParams(theta=theta))
    rec = _Recorder()
    profile = rule.profile(n_max)

    if math.isfinite(theta):
        log_theta = math.log(theta)
        for j, log_v in profile.peak_trace:
            rec.check(abs(log_v - log_theta) <= 1e-10, "peak-log-norm-equals-theta",
                      detail=f"segment {j}, log-gap {abs(log_v - log_theta):.3e}")

    plateau_levels = list(profile.plateau_trace)  # (segment j, plateau log value)
    decreasing = all(b < a for (_, a), (_, b) in zip(plateau_levels, plateau_levels[1:]))
    rec.check(decreasing, "plateau-levels-strictly-decreasing",
              detail=str([[j, v] for j, v in plateau_levels]))
    if plateau_levels:
        rec.check(plateau_levels[-1][1] > 0.0, "plateau-levels-stay-above-one")

    min_log = min(r[1] for r in profile.entries)
    rec.check(min_log >= 0.0, "norms-at-least-one",
              detail=f"min log norm {min_log:.3e}")

    # spot-verify the closed-form norms against brute-force window products
    horizon = 600
    logs = np.array([rule.log_weight(n) for n in range(horizon)])
    cums = np.concatenate([[0.0], np.cumsum(logs)])
    worst = 0.0
    for n in range(1, 80):
        sums = cums[n:] - cums[:-n]
        brute = float(sums.max())
        exact = rule.power_norm_log(n)[0]
        worst = max(worst, abs(brute - exact))
    rec.check(worst <= 1e-9, "norm-formula-matches-bruteforce",
              detail=f"max |brute - closed| = {worst:.3e}")

    result = SuiteResult("serzcw", seed, 1, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {
        "theta": theta,
        "n_max": n_max,
        "liminf_est": math.exp(profile.liminf_log),
        "limsup_est": math.exp(profile.limsup_log),
        "plateau_levels": [[j, math.exp(v)] for j, v in plateau_levels],
        "final_plateau_value": math.exp(plateau_levels[-1][1]) if plateau_levels else None,
        "segments_started": len(profile.segments),
    }
    result.artifacts = {"norm_profile": ["n,log_norm,regime,j"]
                        + [f"{n},{ln!r},{regime},{j}"
                           for n, ln, regime, j in profile.entries]}
    return result


def suite_pvzxk(seed: int = DEFAULT_SEED, cutoff: int = 200, n_check: int = 100,
                **_ignored) -> SuiteResult:
    """Adjoint unit eigenvector for the increasing Berger-moment shift."""
    rule = shiftlab.berger_two_atom(c=Fraction(1), t=4)
    rec = _Recorder()
    res = shiftlab.coadjoint_unit_eigenvector(rule, cutoff=cutoff)
    rec.check(res.verdict == "in_l2", "coadjoint-vector-in-l2", detail=res.certificate)
    rec.check(res.tail_bound is not None and res.tail_bound <= 1e-10,
              "tail-bound-below-threshold",
              detail=f"tail bound {res.tail_bound!r}")
    rec.check(res.exact_certified, "rational-telescoping-certified")
    if res.tail_bound is not None:
        rec.check(res.fixed_point_defect <= res.tail_bound,
                  "fixed-point-defect-within-tail",
                  detail=f"defect {res.fixed_point_defect!r}")
    pairing = shiftlab.coadjoint_pairing_trace(rule, res, n_check)
    exact_units = all(v == 1.0 for _, v in pairing)
    rec.check(exact_units, "unit-pairing-exact",
              detail="some <T^n e_0, x> differ from 1.0")
    split = powerdyn.identity_part_split(opcore.WeightedShift(rule))
    rec.check(split.orthogonal and split.h1_basis is None,
              "forward-kernel-certified-trivial", detail=split.certificate)
    result = SuiteResult("pvzxk", seed, 1, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {
        "cutoff": cutoff,
        "tail_bound": res.tail_bound,
        "fixed_point_defect": res.fixed_point_defect,
        "lambda_floor": res.lambda_floor,
        "norm_sq_partial": res.norm_sq_partial,
        "unit_pairings_checked": n_check + 1,
    }
    result.artifacts = {"pairing_trace": ["n,value"] + [f"{n},{v!r}" for n, v in pairing]}
    return result


def _first_rationals(count: int):
    """Rationals in [0, 1) enumerated by denominator then numerator."""
    out = [Fraction(0)]
    q = 2
    while len(out) < count:
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
                if len(out) == count:
                    break
        q += 1
    return out


def suite_t2(seed: int = DEFAULT_SEED, k_max: int = 2000, **_ignored) -> SuiteResult:
    """Weak convergence of modeled unitaries and its obstructions."""
    rec = _Recorder()
    lebesgue = circlemeasure.CircleMeasure.lebesgue()

    a_only = circlemeasure.UnitaryModel([(lebesgue, "a")])
    v = circlemeasure.unitary_power_verdict(a_only, k_max=k_max)
    rec.check(v.converges_weakly and v.limit_rank == 0, "a-part-weakly-stable",
              detail=v.obstruction or "")

    rationals = _first_rationals(50)
    diag_model = circlemeasure.UnitaryModel(
        [circlemeasure.UnitaryModel.sd_from_eigenvalues((a, 1.0) for a in rationals)])
    v = circlemeasure.unitary_power_verdict(diag_model, k_max=k_max)
    rec.check(not v.converges_weakly, "dense-rational-unitary-not-convergent")
    rec.check(v.certainty == "certified", "dense-rational-obstruction-certified",
              detail=v.certainty)

    cantor_model = circlemeasure.UnitaryModel(
        [(circlemeasure.CircleMeasure.cantor(), "sc")])
    v = circlemeasure.unitary_power_verdict(cantor_model, k_max=k_max)
    rec.check(not v.converges_weakly, "cantor-part-blocks-convergence",
              detail=v.obstruction or "")

    mixed = circlemeasure.UnitaryModel([
        (lebesgue, "a"),
        (circlemeasure.CircleMeasure.point_mass(0, 2.0), "sd"),
    ])
    v = circlemeasure.unitary_power_verdict(mixed, k_max=k_max)
    rec.check(v.converges_weakly, "mixed-model-converges",
              detail=v.obstruction or "")
    rec.check(v.limit_masses == [0.0, 2.0] and v.limit_rank == 1,
              "limit-is-discrete-projection", detail=str(v.limit_masses))

    # cross-check the a-part against explicit matrix elements: <U^n 1, 1> is
    # the n-th coefficient, identically zero for n >= 1 for Lebesgue
    trace = []
    worst = 0.0
    for n in (1, 2, 3, 5, 10, 100, 1000, k_max):
        value, err = circlemeasure.multiplication_matrix_elements(
            lebesgue, n, {0: 1.0}, {0: 1.0})
        trace.append((n, abs(value)))
        worst = max(worst, abs(value) + err)
    rec.check(worst == 0.0, "a-part-matrix-elements-vanish-exactly",
              detail=f"max |<U^n 1,1>| + err = {worst!r}")
    sd_value, _ = circlemeasure.multiplication_matrix_elements(
        circlemeasure.CircleMeasure.point_mass(0, 2.0), k_max, {0: 1.0}, {0: 1.0})
    rec.check(sd_value == 2.0 + 0j, "sd-part-matrix-element-constant",
              detail=repr(sd_value))

    result = SuiteResult("T2", seed, 5, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = {"k_max": k_max,
                    "a_part_probe": [[n, v] for n, v in trace]}
    return result


def suite_sec5(seed: int = DEFAULT_SEED, trials: int = 500, n_max: int = 400,
               **_ignored) -> SuiteResult:
    """Spectral measures of random normals and the stability trichotomy."""
    rng = np.random.default_rng(seed)
    rec = _Recorder()
    moment_orders = [(0, 0), (1, 0), (0, 1), (2, 1), (3, 3), (6, 6), (6, 2)]
    counts = {"uniform": 0, "circle": 0, "converged": 0}
    for i in range(trials):
        dim = 1 if i % 17 == 0 else int(rng.integers(2, 9))
        eigs = []
        for _ in range(dim):
            draw = rng.random()
            if draw < 0.45:
                eigs.append(rng.uniform(0.05, 0.9)
                            * np.exp(2j * np.pi * rng.uniform(0.0, 1.0)))
            elif draw < 0.7:
                eigs.append(1.0 + 0j)
            else:
                eigs.append(np.exp(2j * np.pi * rng.uniform(0.05, 0.95)))
        u = _haar_unitary(rng, dim)
        m = u @ np.diag(eigs) @ u.conj().T

        data = semispectral.spectral_measure_of_normal(m)
        defects = data.defects()
        rec.check(max(defects.values()) <= 1e-10, "spectral-data-structural", i,
                  str({k: f"{v:.2e}" for k, v in defects.items()}))

        for mp, np_ in moment_orders:
            resid = semispectral.moment_identity_residual(m, data, mp, np_)
            if not rec.check(resid <= 1e-8, "moment-identity", i,
                             f"(m, n) = ({mp}, {np_}), residual {resid:.3e}"):
                break

        verdict = semispectral.stability_verdict(m)
        rec.check((not verdict.uniform or verdict.strong)
                  and (not verdict.strong or verdict.weak),
                  "stability-implications", i, str(verdict.to_json()["norms"]))
        if verdict.uniform:
            counts["uniform"] += 1
            semispectral.uniform_stability_series(m, tol=1e-8)  # raises on failure
        if any(abs(abs(z) - 1) <= 1e-8 for z in eigs):
            counts["circle"] += 1

        u_block, s_block, basis = semispectral.normal_stability_split(m)
        reassembled = basis @ _block_embed(u_block, s_block) @ basis.conj().T
        rec.check(_norm(reassembled - m) <= 1e-10, "split-roundtrip", i,
                  f"{_norm(reassembled - m):.3e}")
        if u_block.size:
            eye_u = np.eye(u_block.shape[0], dtype=complex)
            rec.check(_norm(u_block @ u_block.conj().T - eye_u) <= 1e-10,
                      "split-unimodular-block-unitary", i)
        if s_block.size:
            rec.check(semispectral.stability_verdict(s_block).strong,
                      "split-contraction-block-strongly-stable", i)

        crit = semispectral.strong_convergence_criterion(m)
        rep = powerdyn.classify_power_sequence(m, n_max=n_max)
        dynamic_converged = rep.verdict == "NormConvergent"
        rec.check(crit.converges == dynamic_converged, "swcti-verdict-agreement", i,
                  f"spectral says {crit.converges}, classifier says {rep.verdict}")
        if crit.converges and dynamic_converged:
            counts["converged"] += 1
            rec.check(_norm(crit.limit - rep.limit) <= 1e-6, "swcti-limit-agreement",
                      i, f"{_norm(crit.limit - rep.limit):.3e}")
    result = SuiteResult("sec5", seed, trials, rec.failures,
                         truncated_failures=rec.truncated)
    result.stats = counts
    return result


SUITES = {
    "T1": suite_t1,
    "pytxly": suite_pytxly,
    "L1": suite_l1,
    "limyng": suite_limyng,
    "prichyr": suite_prichyr,
    "serzcw": suite_serzcw,
    "pvzxk": suite_pvzxk,
    "T2": suite_t2,
    "sec5": suite_sec5,
}

#: readable spellings; results always carry the canonical short name
ALIASES = {
    "limit-projection": "T1",
    "orthogonality": "pytxly",
    "contractive-limits": "L1",
    "spectral-radius": "limyng",
    "idempotent-radius": "prichyr",
    "inflation-profile": "serzcw",
    "coadjoint-witness": "pvzxk",
    "unitary-verdicts": "T2",
    "semispectral": "sec5",
}


def run_suite(name: str, **params) -> SuiteResult:
    name = ALIASES.get(name, name)
    if name not in SUITES:
        from .errors import ConstraintError

        raise ConstraintError(
            f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))} "
            f"(aliases: {', '.join(sorted(ALIASES))})")
    return SUITES[name](**{k: v for k, v in params.items() if v is not None})
