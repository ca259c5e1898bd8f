"""Command-line entry points, exercised in-process through cli.main."""

import json

import pytest

from powerseq import cli, suites
from powerseq.errors import ConstraintError


def run(capsys, *argv):
    """Invoke the CLI and hand back (exit code, parsed stdout JSON)."""
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, json.loads(captured.out)


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def diag_op(tmp_path):
    return write_json(tmp_path / "diag.json", [[1.0, 0.0], [0.0, 0.5]])


@pytest.fixture
def oblique_op(tmp_path):
    return write_json(tmp_path / "oblique.json", [[1.0, 1.0], [0.0, 0.5]])


# ---------------------------------------------------------------------------
# index specs
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec,expected", [
    ("17", [17]),
    ("1,2,9", [1, 2, 9]),
    ("0..5", [0, 1, 2, 3, 4, 5]),
    ("3^0..3^4", [1, 3, 9, 27, 81]),
    (" 2^3..2^5 ", [8, 16, 32]),
])
def test_parse_k_spec(spec, expected):
    assert cli.parse_k_spec(spec) == expected


@pytest.mark.parametrize("bad", ["2^0..3^5", "abc", "1..x", ""])
def test_parse_k_spec_rejects_malformed(bad):
    with pytest.raises(ConstraintError):
        cli.parse_k_spec(bad)


# ---------------------------------------------------------------------------
# subcommand round trips
# ---------------------------------------------------------------------------

def test_classify_reports_verdict_and_seed(capsys, diag_op):
    code, payload = run(capsys, "classify", "--op", diag_op)
    assert code == 0
    assert payload["verdict"] == "NormConvergent"
    assert payload["seed"] == suites.DEFAULT_SEED


def test_classify_honors_explicit_seed(capsys, diag_op):
    _, payload = run(capsys, "classify", "--op", diag_op, "--seed", "7")
    assert payload["seed"] == 7


def test_classify_writes_json_and_residual_csvs(capsys, tmp_path, oblique_op):
    out = tmp_path / "report.json"
    code, payload = run(capsys, "classify", "--op", oblique_op, "--out", str(out))
    assert code == 0
    on_disk = json.loads(out.read_text())
    assert on_disk["verdict"] == payload["verdict"] == "NormConvergent"
    assert on_disk["limit"][0][1] == pytest.approx([2.0, 0.0], abs=1e-8)
    for tag in ("norm_diff", "strong_diff", "weak_diff"):
        csv_path = tmp_path / f"report.{tag}.csv"
        assert str(csv_path) == payload["artifacts"][tag]
        header, first = csv_path.read_text().splitlines()[:2]
        assert header == "n,defect"
        int(first.split(",")[0])  # rows start with an index


def test_classify_plot_renders_png(capsys, tmp_path, oblique_op):
    out = tmp_path / "report.json"
    code, payload = run(capsys, "classify", "--op", oblique_op,
                        "--out", str(out), "--plot")
    assert code == 0
    png = tmp_path / "report.residuals.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_construct_requires_exactly_one_source(capsys, tmp_path, diag_op):
    measure = write_json(tmp_path / "mu.json", {"atoms": []})
    code, payload = run(capsys, "construct", "--op", diag_op, "--measure", measure)
    assert code == 2
    assert payload["error"]["type"] == "ConstraintError"
    assert "exactly one" in payload["error"]["message"]


def test_construct_canonicalizes_operator(capsys, diag_op):
    code, payload = run(capsys, "construct", "--op", diag_op)
    assert code == 0
    assert payload["kind"] == "operator"
    assert payload["facts"]["dimension"] == 2
    assert payload["canonical"]["kind"] == "finite_matrix"


def test_measure_fourier_inline_rows(capsys, tmp_path):
    measure = write_json(tmp_path / "leb.json", {"density": {"lebesgue": 1.0}})
    code, payload = run(capsys, "measure-fourier", "--measure", measure, "--k", "0..4")
    assert code == 0
    assert payload["k_count"] == 5
    assert payload["max_abs"] == 1.0  # the k = 0 coefficient is the mass
    assert payload["min_abs"] == 0.0
    assert payload["rows"][0] == "k,re,im,abs"
    assert len(payload["rows"]) == 6


def test_measure_fourier_csv_artifact(capsys, tmp_path):
    measure = write_json(tmp_path / "cantor.json", {"selfSimilar": {"b": 3,
                         "digits": [0, 2], "mass": 1.0}})
    out = tmp_path / "fourier.json"
    code, payload = run(capsys, "measure-fourier", "--measure", measure,
                        "--k", "3^0..3^6", "--out", str(out))
    assert code == 0
    assert "rows" not in payload
    lines = (tmp_path / "fourier.fourier.csv").read_text().splitlines()
    assert len(lines) == 8
    # self-similarity: every row carries the same |coefficient|
    mags = {round(float(line.split(",")[3]), 12) for line in lines[1:]}
    assert len(mags) == 1


def test_measure_fourier_needs_some_index_spec(capsys, tmp_path):
    measure = write_json(tmp_path / "leb.json", {"density": {"lebesgue": 1.0}})
    code, payload = run(capsys, "measure-fourier", "--measure", measure)
    assert code == 2
    assert payload["error"]["type"] == "ConstraintError"


def test_unitary_verdict_certifies_atom_obstruction(capsys, tmp_path):
    model = write_json(tmp_path / "model.json", {
        "components": [{"role": "sd", "measure": {"atoms": [
            {"angle": "1/2", "mass": 1.0}]}}]})
    code, payload = run(capsys, "unitary-verdict", "--model", model)
    assert code == 0
    assert payload["converges_weakly"] is False
    assert payload["certainty"] == "certified"
    assert "1/2" in payload["obstruction"]


def test_unitary_verdict_positive_case(capsys, tmp_path):
    model = write_json(tmp_path / "model.json", {
        "components": [{"role": "sd", "measure": {"atoms": [
            {"angle": 0, "mass": 2.0}]}}]})
    code, payload = run(capsys, "unitary-verdict", "--model", model)
    assert code == 0
    assert payload["converges_weakly"] is True
    assert payload["limit_rank"] == 1


def test_spectral_payload_contains_verdict_and_defects(capsys, tmp_path):
    op = write_json(tmp_path / "normal.json", [[0.5, 0.0], [0.0, 0.25]])
    code, payload = run(capsys, "spectral", "--op", op)
    assert code == 0
    assert payload["stability"]["uniform"]["flag"] is True
    assert payload["series_residual"] <= 1e-8
    assert payload["power_convergence"]["converges"] is True
    assert payload["power_convergence"]["limit_rank"] == 0
    assert payload["structural_defects"]["reconstruction"] <= 1e-10


def test_spectral_rejects_non_normal(capsys, tmp_path):
    op = write_json(tmp_path / "jordan.json", [[1.0, 1.0], [0.0, 1.0]])
    code, payload = run(capsys, "spectral", "--op", op)
    assert code == 2
    assert payload["error"]["type"] == "ConstraintError"


def test_norm_profile_inflation_regimes(capsys, tmp_path):
    op = write_json(tmp_path / "shift.json", {
        "kind": "weighted_shift",
        "params": {"weights": {"variant": "inflation", "theta": 2.0}}})
    out = tmp_path / "profile.json"
    code, payload = run(capsys, "norm-profile", "--op", op,
                        "--n-max", "120", "--out", str(out))
    assert code == 0
    assert payload["exact"] is True
    assert payload["limsup_est"] == pytest.approx(2.0, rel=1e-12)
    lines = (tmp_path / "profile.profile.csv").read_text().splitlines()
    assert lines[0] == "n,log_norm,regime,j"
    regimes = {line.split(",")[2] for line in lines[1:]}
    assert {"ramp", "peak", "plateau"} <= regimes


def test_missing_input_file_is_reported_not_raised(capsys, tmp_path):
    code, payload = run(capsys, "classify", "--op", str(tmp_path / "nope.json"))
    assert code == 2
    assert payload["error"]["type"] == "FileNotFoundError"
    assert payload["command"] == "classify"


def test_unparseable_json_is_reported(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, payload = run(capsys, "classify", "--op", str(bad))
    assert code == 2
    assert payload["error"]["type"] == "JSONDecodeError"


def test_unknown_suite_name_is_an_argparse_error(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify-suite", "nonsense"])


def test_verify_suite_runs_and_writes_artifacts(capsys, tmp_path):
    out = tmp_path / "pvzxk.json"
    code, payload = run(capsys, "verify-suite", "pvzxk", "--out", str(out))
    assert code == 0
    assert payload["passed"] is True
    for tag, path in payload.get("artifacts", {}).items():
        assert json.loads(out.read_text())["passed"] is True
        assert (tmp_path / f"pvzxk.{tag}.csv").exists()
        assert path.endswith(f"pvzxk.{tag}.csv")


def test_verify_suite_exit_codes_follow_pass_flag(capsys):
    # cheap trials keep this fast; pvzxk and T2 have no external inputs
    code, payload = run(capsys, "verify-suite", "T2")
    assert code == 0
    assert payload["passed"] is True
