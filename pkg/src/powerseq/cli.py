"""Batch experiment runner.

One flat convention across subcommands: inputs are JSON files, the result
summary is JSON on stdout, traces go to CSV files next to the JSON artifact,
and each run records the seed it used.  Exit codes: 0 ok, 1 a property
assertion failed, 2 bad input.  Output files are written atomically (tmp +
rename) so a crashed run never leaves a half-written artifact.

    powerseq classify --op mat.json --n-max 200 --out report.json
    powerseq measure-fourier --measure cantor.json --k "3^0..3^12"
    powerseq verify-suite serzcw --theta 2 --n-max 5000 --out serzcw.json

Figures (--plot) are optional renderings of the same data; the delimited
output stays canonical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import circlemeasure, opcore, plots, powerdyn, shiftlab, suites
from .errors import ConstraintError, PowerseqError, StructureError

__all__ = ["main", "main_entry", "parse_k_spec"]


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _clean(obj):
    """Make a structure JSON-safe: non-finite floats become repr strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


def _write_atomic(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(f"{path.name}.tmp.{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(_clean(payload), indent=2)
    if out:
        _write_atomic(out, text + "\n")
    print(text)


def _write_csv(path, rows) -> None:
    _write_atomic(path, "\n".join(rows) + "\n")


def _sibling(out: str, tag: str, suffix: str) -> Path:
    base = Path(out)
    return base.with_name(f"{base.stem}.{tag}{suffix}")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_operator(path: str) -> opcore.OperatorExpr:
    data = _load_json(path)
    if isinstance(data, list):  # bare nested list: a finite matrix
        return opcore.FiniteMatrix(data)
    return opcore.operator_from_json(data)


def _load_measure(path: str) -> circlemeasure.CircleMeasure:
    return circlemeasure.measure_from_json(_load_json(path))


def _load_model(path: str) -> circlemeasure.UnitaryModel:
    data = _load_json(path)
    components = []
    for comp in data.get("components", ()):
        components.append(circlemeasure.UnitaryComponent(
            circlemeasure.measure_from_json(comp["measure"]), comp["role"]))
    if "sd_eigenvalues" in data:
        pairs = [(circlemeasure._angle_from_json(a), m)
                 for a, m in data["sd_eigenvalues"]]
        components.append(circlemeasure.UnitaryModel.sd_from_eigenvalues(pairs))
    return circlemeasure.UnitaryModel(components)


def parse_k_spec(spec: str) -> list[int]:
    """Index lists: "17", "1,2,4", "0..100", or geometric "3^0..3^12"."""
    s = spec.strip()
    try:
        if "^" in s:
            left, right = s.split("..", 1)
            base_a, exp_a = left.split("^", 1)
            base_b, exp_b = right.split("^", 1)
            if int(base_a) != int(base_b):
                raise ValueError(f"mismatched bases in {spec!r}")
            base = int(base_a)
            return [base ** e for e in range(int(exp_a), int(exp_b) + 1)]
        if ".." in s:
            a, b = s.split("..", 1)
            return list(range(int(a), int(b) + 1))
        if "," in s:
            return [int(x) for x in s.split(",") if x.strip()]
        return [int(s)]
    except ValueError as exc:
        raise ConstraintError(f"cannot parse index spec {spec!r}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_construct(args) -> int:
    sources = [name for name in ("op", "measure", "model") if getattr(args, name)]
    if len(sources) != 1:
        raise ConstraintError("construct needs exactly one of --op / --measure / --model")
    if args.op:
        op = _load_operator(args.op)
        payload = {"kind": "operator", "canonical": opcore.operator_to_json(op),
                   "facts": {"dimension": op.dimension,
                             "type": type(op).__name__}}
        if isinstance(op, opcore.WeightedShift):
            payload["facts"]["first_weights"] = op.weights.weights(8)
    elif args.measure:
        mu = _load_measure(args.measure)
        payload = {"kind": "measure", "canonical": circlemeasure.measure_to_json(mu),
                   "facts": {"total_mass": mu.total_mass,
                             "atoms": len(mu.atoms),
                             "continuous": mu.is_continuous()}}
    else:
        model = _load_model(args.model)
        payload = {"kind": "unitary_model",
                   "facts": {"components": [c.role for c in model.components]}}
    payload["command"] = "construct"
    payload["seed"] = args.seed
    _emit(payload, args.out)
    return 0


def _norm_profile_rows(op, n_max: int):
    if isinstance(op, opcore.WeightedShift):
        rule = op.weights
        if isinstance(rule, shiftlab.InflationRule):
            profile = rule.profile(n_max)
            rows = ["n,log_norm,regime,j"] + [f"{n},{ln!r},{regime},{j}"
                                              for n, ln, regime, j in profile.entries]
            logs = [ln for _, ln, _, _ in profile.entries]
            return rows, logs, True
        logs, exact = [], True
        for n in range(1, n_max + 1):
            try:
                result = rule.power_norm(n)
            except StructureError as exc:
                result = exc.partial
                exact = False
            logs.append(result.log_norm)
        rows = ["n,log_norm"] + [f"{n},{ln!r}" for n, ln in enumerate(logs, start=1)]
        return rows, logs, exact
    dense = op.to_dense()
    import numpy as np

    logs = []
    power = np.eye(dense.shape[0], dtype=complex)
    for _ in range(n_max):
        power = power @ dense
        logs.append(math.log(max(float(np.linalg.norm(power, 2)), 1e-300)))
    rows = ["n,log_norm"] + [f"{n},{ln!r}" for n, ln in enumerate(logs, start=1)]
    return rows, logs, False


def _cmd_norm_profile(args) -> int:
    op = _load_operator(args.op)
    n_max = args.n_max or 1000
    rows, logs, exact = _norm_profile_rows(op, n_max)
    payload = {
        "command": "norm-profile",
        "seed": args.seed,
        "n_max": n_max,
        "exact": exact,
        "liminf_est": math.exp(min(logs)),
        "limsup_est": math.exp(max(logs)),
        "final": math.exp(logs[-1]),
    }
    if args.out:
        csv_path = _sibling(args.out, "profile", ".csv")
        _write_csv(csv_path, rows)
        payload["artifacts"] = {"profile_csv": str(csv_path)}
        if args.plot:
            fig_path = _sibling(args.out, "profile", ".png")
            entries = [tuple(r.split(","))[:2] for r in rows[1:]]
            plots.render_norm_profile(
                fig_path, [(int(n), float(v)) for n, v in entries])
            payload["artifacts"]["profile_png"] = str(fig_path)
    _emit(payload, args.out)
    return 0


def _cmd_classify(args) -> int:
    op = _load_operator(args.op)
    window = parse_k_spec(args.window) if args.window else None
    tol = powerdyn.Tolerances(convergence=args.tol) if args.tol else None
    report = powerdyn.classify_power_sequence(
        op, window=window, n_max=args.n_max or 200, tolerances=tol)
    payload = {"command": "classify", "seed": args.seed, **report.to_json()}
    if args.out:
        artifacts = {}
        for name in report.residual_traces:
            csv_path = _sibling(args.out, name, ".csv")
            _write_csv(csv_path, list(report.residual_csv_rows(name)))
            artifacts[name] = str(csv_path)
        if args.plot:
            fig_path = _sibling(args.out, "residuals", ".png")
            plots.render_residual_traces(fig_path, report.residual_traces)
            artifacts["residuals_png"] = str(fig_path)
        payload["artifacts"] = artifacts
    _emit(payload, args.out)
    return 0


def _cmd_diagnose_projection(args) -> int:
    p = _load_operator(args.projection)
    op = _load_operator(args.op) if args.op else None
    diag = powerdyn.projection_diagnostics(p, op)
    payload = {"command": "diagnose-projection", "seed": args.seed,
               **diag.to_json()}
    _emit(payload, args.out)
    return 0


def _cmd_measure_fourier(args) -> int:
    mu = _load_measure(args.measure)
    if args.k:
        ks = parse_k_spec(args.k)
    elif args.k_max is not None:
        ks = list(range(args.k_max + 1))
    else:
        raise ConstraintError("measure-fourier needs --k or --k-max")
    values = [mu.fourier(k) for k in ks]
    rows = ["k,re,im,abs"] + [
        f"{v.k},{v.value.real!r},{v.value.imag!r},{abs(v.value)!r}" for v in values]
    mags = [abs(v.value) for v in values]
    payload = {
        "command": "measure-fourier",
        "seed": args.seed,
        "k_count": len(ks),
        "max_abs": max(mags),
        "min_abs": min(mags),
        "max_tail_error": max(v.error for v in values),
        "total_mass": mu.total_mass,
    }
    if args.out:
        csv_path = _sibling(args.out, "fourier", ".csv")
        _write_csv(csv_path, rows)
        payload["artifacts"] = {"fourier_csv": str(csv_path)}
        if args.plot:
            fig_path = _sibling(args.out, "fourier", ".png")
            plots.render_fourier_trace(
                fig_path, [(v.k, v.value.real, v.value.imag, abs(v.value))
                           for v in values])
            payload["artifacts"]["fourier_png"] = str(fig_path)
    else:
        payload["rows"] = rows
    _emit(payload, args.out)
    return 0


def _cmd_unitary_verdict(args) -> int:
    model = _load_model(args.model)
    verdict = circlemeasure.unitary_power_verdict(
        model, k_max=args.k_max or 4096, tol=args.tol or 1e-9)
    payload = {
        "command": "unitary-verdict",
        "seed": args.seed,
        "converges_weakly": verdict.converges_weakly,
        "certainty": verdict.certainty,
        "obstruction": verdict.obstruction,
        "limit_masses": verdict.limit_masses,
        "limit_rank": verdict.limit_rank,
        "rajchman": [{"component": idx, "kind": rv.kind,
                      "witness": rv.witness}
                     for idx, rv in verdict.rajchman_reports],
    }
    _emit(payload, args.out)
    return 0


def _cmd_spectral(args) -> int:
    from . import semispectral

    op = _load_operator(args.op)
    tol = args.tol or 1e-8
    data = semispectral.spectral_measure_of_normal(op, tol)
    verdict = semispectral.stability_verdict(op, tol)
    payload = {
        "command": "spectral",
        "seed": args.seed,
        "spectral_data": data.to_json(),
        "structural_defects": data.defects(),
        "stability": verdict.to_json(),
    }
    if verdict.uniform:
        _, _, residual = semispectral.uniform_stability_series(op, tol=tol)
        payload["series_residual"] = residual
    if verdict.operator_norm <= 1.0 + 1e-8:
        crit = semispectral.strong_convergence_criterion(op, tol)
        payload["power_convergence"] = {
            "converges": crit.converges,
            "reason": crit.reason,
            "limit_rank": (int(round(crit.limit.trace().real))
                           if crit.limit is not None else None),
        }
    _emit(payload, args.out)
    return 0


def _cmd_verify_suite(args) -> int:
    result = suites.run_suite(
        args.suite, seed=args.seed, trials=args.trials, n_max=args.n_max,
        k_max=args.k_max, theta=args.theta, cutoff=args.cutoff, tol=args.tol)
    payload = {"command": "verify-suite", **result.to_json()}
    if args.out:
        artifacts = {}
        for tag, rows in result.artifacts.items():
            csv_path = _sibling(args.out, tag, ".csv")
            _write_csv(csv_path, rows)
            artifacts[tag] = str(csv_path)
        if args.plot and "norm_profile" in result.artifacts:
            fig_path = _sibling(args.out, "norm_profile", ".png")
            entries = []
            for row in result.artifacts["norm_profile"][1:]:
                n, ln, regime, j = row.split(",")
                entries.append((int(n), float(ln), regime, int(j)))
            plots.render_norm_profile(fig_path, entries)
            artifacts["norm_profile_png"] = str(fig_path)
        payload["artifacts"] = artifacts
    _emit(payload, args.out)
    return 0 if result.passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerseq",
        description="Power-sequence experiments: constructions, convergence "
                    "analyses, and property-verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--op", help="operator JSON file")
        p.add_argument("--measure", help="circle-measure JSON file")
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--k-max", dest="k_max", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
        p.add_argument("--out", help="output JSON path (CSV/PNG siblings derive from it)")
        p.add_argument("--plot", action="store_true",
                       help="also render figures for trace artifacts (needs --out)")

    p = sub.add_parser("construct", help="validate and canonicalize an input payload")
    common(p)
    p.add_argument("--model", help="unitary-model JSON file")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("norm-profile", help="power-norm trace of an operator")
    common(p)
    p.set_defaults(func=_cmd_norm_profile)

    p = sub.add_parser("classify", help="convergence verdict for the power sequence")
    common(p)
    p.add_argument("--window", help="index window for infinite operators, e.g. 0..30")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("diagnose-projection", help="defect report for an idempotent")
    common(p)
    p.add_argument("--projection", required=True, help="projection JSON (matrix)")
    p.set_defaults(func=_cmd_diagnose_projection)

    p = sub.add_parser("measure-fourier", help="Fourier coefficients of a measure")
    common(p)
    p.add_argument("--k", help='indices, e.g. "3^0..3^12" or "0..64"')
    p.set_defaults(func=_cmd_measure_fourier)

    p = sub.add_parser("unitary-verdict", help="weak convergence of a modeled unitary")
    common(p)
    p.add_argument("--model", required=True, help="unitary-model JSON file")
    p.set_defaults(func=_cmd_unitary_verdict)

    p = sub.add_parser("spectral", help="spectral measure and stability of a normal matrix")
    common(p)
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("verify-suite", help="run a named property suite")
    common(p)
    p.add_argument("suite", choices=sorted(suites.SUITES) + sorted(suites.ALIASES))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=_cmd_verify_suite)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PowerseqError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)},
                 "command": args.command, "seed": getattr(args, "seed", None)}
        print(json.dumps(_clean(error), indent=2))
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)},
                 "command": args.command, "seed": getattr(args, "seed", None)}
        print(json.dumps(_clean(error), indent=2))
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
