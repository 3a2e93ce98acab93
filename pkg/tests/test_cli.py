import json

import numpy as np
import pytest

from fusionframes.cli import _HANDLERS, run_command
from fusionframes.duality import coupling_block_matrix
from fusionframes.fixtures import bundled_fixture_text, ex_c, fixture_document
from fusionframes.specdoc import canonical_json

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")

DOCUMENTED_SUBCOMMANDS = (
    "analyze", "canonical-dual", "check-dual", "check-approx-dual", "q-dual",
    "neumann-reconstruct", "riesz-dual", "correct-dual", "noncanonical-dual",
    "biorthogonal-dual", "map-dual", "local-frame", "perturb-epsilon",
    "stability-dual", "stability-corollary", "stability-frame", "dual-of-dual",
    "fixtures",
)


def write_doc(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(canonical_json(doc))
    return str(path)


def test_every_documented_subcommand_exists():
    assert set(_HANDLERS) == set(DOCUMENTED_SUBCOMMANDS)


# ----------------------------------------------------------------- happy paths

def test_analyze_parseval_fixture():
    code, report = run_command(["analyze", "--spec", "ex_b", "--frame", "W"])
    assert code == 0
    assert report["status"] == "ok"
    assert report["verdicts"]["parseval"]["value"]
    assert report["verdicts"]["riesz_fusion_basis"]["value"]
    assert report["scalars"]["lower_bound"] == pytest.approx(1.0, abs=1e-12)
    assert report["scalars"]["upper_bound"] == pytest.approx(1.0, abs=1e-12)


def test_check_dual_weighted_fixture():
    code, report = run_command(
        ["check-dual", "--spec", "ex_c", "--frame", "W", "--candidate", "V"])
    assert code == 0
    assert report["scalars"]["deviation"] <= 1e-9


def test_check_approx_dual_block_fixture():
    code, report = run_command(
        ["check-approx-dual", "--spec", "ex_a", "--frame", "W", "--candidate", "V"])
    assert code == 0
    assert report["scalars"]["deviation"] == pytest.approx(0.5, abs=1e-12)


def test_check_dual_failure_exits_one():
    code, report = run_command(
        ["check-dual", "--spec", "ex_a", "--frame", "W", "--candidate", "V"])
    assert code == 1
    assert report["status"] == "violation"


def test_canonical_dual_roundtrip():
    code, report = run_command(["canonical-dual", "--spec", "ex_c", "--frame", "W"])
    assert code == 0
    payload = report["frames"]["canonical_dual"]
    assert len(payload) == 4
    assert payload[0]["dim"] == 1


def test_q_dual_accepts_coupling_witness(tmp_path):
    frames = ex_c()
    q = coupling_block_matrix(frames["W"], frames["V"])
    qfile = tmp_path / "q.json"
    qfile.write_text(json.dumps({"matrix": [list(map(float, row)) for row in q]}))
    code, report = run_command(
        ["q-dual", "--spec", "ex_c", "--frame", "W", "--candidate", "V",
         "--operator", str(qfile)])
    assert code == 0
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps([[0.0] * q.shape[1]] * q.shape[0]))
    code, report = run_command(
        ["q-dual", "--spec", "ex_c", "--frame", "W", "--candidate", "V",
         "--operator", str(zero)])
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[0.0, 0.0], [0.0, 0.0]]))
    code, report = run_command(
        ["q-dual", "--spec", "ex_c", "--frame", "W", "--candidate", "V",
         "--operator", str(bad)])
    assert code == 2


def test_neumann_reconstruct_converges():
    code, report = run_command(
        ["neumann-reconstruct", "--spec", "ex_a", "--frame", "W",
         "--candidate", "V", "--vector", "1,0,0"])
    assert code == 0
    assert report["scalars"]["terms_used"] <= 22
    assert report["scalars"]["relative_error"] <= 1e-6
    assert np.allclose(report["vector"], [1.0, 0.0, 0.0], atol=1e-6)


def test_neumann_reconstruct_divergent_pair_exits_one():
    code, report = run_command(
        ["neumann-reconstruct", "--spec", "ex_c", "--frame", "V",
         "--candidate", "W", "--vector", "1,0,0"])
    assert code == 1
    assert report["status"] == "violation"
    assert "converge" in report["message"]


def test_riesz_dual_subcommand():
    code, report = run_command(
        ["riesz-dual", "--spec", "ex_b", "--frame", "W", "--candidate", "V"])
    assert code == 0
    assert report["verdicts"]["contains_canonical_duals"]["value"]


def test_correct_dual_subcommand(tmp_path):
    doc = fixture_document("ex_b")
    doc["frames"]["Vt"] = [
        {"spanning_vectors": [[1.0, 0.0, 2.0]], "weight": 1.0},
        {"spanning_vectors": [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], "weight": 1.0},
        {"spanning_vectors": [[1.0, 0.0, 0.0]], "weight": 1.0},
    ]
    path = write_doc(tmp_path, doc)
    code, report = run_command(
        ["correct-dual", "--spec", path, "--frame", "W", "--candidate", "Vt"])
    assert code == 0
    assert report["scalars"]["deviation_after"] <= 1e-9
    assert report["scalars"]["deviation_before"] > 1e-3


def test_noncanonical_dual_subcommand(tmp_path):
    doc = fixture_document("ex_b")
    doc["frames"]["X"] = [
        {"spanning_vectors": [[0.0, 0.0, 1.0]], "weight": 1.0}]
    path = write_doc(tmp_path, doc)
    code, report = run_command(
        ["noncanonical-dual", "--spec", path, "--frame", "W",
         "--index", "3", "--extension", "X"])
    assert code == 0
    assert report["verdicts"]["is_alternate"]["value"]
    assert report["verdicts"]["different_from_canonical"]["value"]
    assert report["frames"]["noncanonical_dual"][2]["dim"] == 2


def test_noncanonical_dual_full_space_case(tmp_path):
    doc = {
        "dimension": 2,
        "frames": {"W": [
            {"spanning_vectors": [[1.0, 0.0], [0.0, 1.0]], "weight": 1.0},
            {"spanning_vectors": [[1.0, 0.0], [0.0, 1.0]], "weight": 1.0},
        ]},
    }
    path = write_doc(tmp_path, doc)
    code, report = run_command(
        ["noncanonical-dual", "--spec", path, "--frame", "W"])
    assert code == 0
    weights = [item["weight"] for item in report["frames"]["noncanonical_dual"]]
    assert weights == [2.0, 1.0]


def test_noncanonical_dual_case_mismatch_exits_one():
    code, report = run_command(
        ["noncanonical-dual", "--spec", "ex_b", "--frame", "W"])
    assert code == 1
    assert report["status"] == "violation"


def test_biorthogonal_dual_subcommand():
    code, report = run_command(
        ["biorthogonal-dual", "--spec", "ex_b", "--frame", "W"])
    assert code == 0
    code, report = run_command(
        ["biorthogonal-dual", "--spec", "ex_a", "--frame", "W"])
    assert code == 1  # not a Riesz fusion basis


def test_map_dual_subcommand(tmp_path):
    lfile = tmp_path / "l.json"
    lfile.write_text(json.dumps([[1.0, 0, 0], [0, 2.0, 0], [0, 0, 3.0]]))
    code, report = run_command(
        ["map-dual", "--spec", "ex_b", "--frame", "W", "--candidate", "V",
         "--operator", str(lfile), "--mode", "exact"])
    assert code == 0
    assert report["scalars"]["conjugation_residual"] <= 1e-8
    shear = tmp_path / "shear.json"
    shear.write_text(json.dumps([[1.0, 1.0, 0], [0, 1.0, 0], [0, 0, 1.0]]))
    code, report = run_command(
        ["map-dual", "--spec", "ex_b", "--frame", "W", "--candidate", "V",
         "--operator", str(shear), "--mode", "exact"])
    assert code == 1
    assert "invariant" in report["message"]


def test_local_frame_onb_mode():
    code, report = run_command(["local-frame", "--spec", "ex_a", "--frame", "W"])
    assert code == 0
    assert report["verdicts"]["bounds_match_fusion"]["value"]
    assert report["scalars"]["vector_count"] == 9
    assert report["scalars"]["lower_bound"] == pytest.approx(1.0, abs=1e-10)
    assert report["scalars"]["upper_bound"] == pytest.approx(2.0, abs=1e-10)


def test_local_frame_locals_mode(tmp_path):
    families = [
        [[1.0, 0, 0], [0, 1.0, 0]],
        [[0, 1.0, 0], [0, 0, 1.0]],
        [[1.0, 0, 0]],
    ]
    lfile = tmp_path / "locals.json"
    lfile.write_text(json.dumps({"families": families}))
    code, report = run_command(
        ["local-frame", "--spec", "ex_a", "--frame", "W", "--locals", str(lfile)])
    assert code == 0
    assert report["verdicts"]["bounds_within_guarantee"]["value"]
    assert report["scalars"]["guarantee_lower"] == pytest.approx(1.0, abs=1e-10)
    assert report["scalars"]["guarantee_upper"] == pytest.approx(2.0, abs=1e-10)


def test_local_frame_bad_locals_exit_two(tmp_path):
    lfile = tmp_path / "locals.json"
    lfile.write_text(json.dumps([[[1.0, 0, 0]], [[0, 1.0, 0]], [[1.0, 0, 0]]]))
    code, report = run_command(
        ["local-frame", "--spec", "ex_a", "--frame", "W", "--locals", str(lfile)])
    assert code == 2


def test_perturb_epsilon_subcommand():
    code, report = run_command(
        ["perturb-epsilon", "--spec", "ex_a", "--frame", "V", "--perturbed", "U"])
    assert code == 0
    assert report["scalars"]["epsilon"] == pytest.approx(1e-4 / 0.2501, abs=1e-12)


def test_stability_dual_subcommand():
    code, report = run_command(
        ["stability-dual", "--spec", "ex_a", "--frame", "W", "--candidate", "V",
         "--perturbed", "U"])
    assert code == 0
    assert report["scalars"]["threshold"] == pytest.approx(0.125, abs=1e-12)
    assert report["verdicts"]["condition_holds"]["value"]
    assert report["verdicts"]["resulting_is_approximate"]["value"]


def test_stability_corollary_subcommand(tmp_path):
    doc = fixture_document("ex_b")
    doc["frames"]["Vp"] = [
        doc["frames"]["V"][0],
        doc["frames"]["V"][1],
        {"spanning_vectors": [[1.0, 0.02, 0.0]], "weight": 1.0},
    ]
    path = write_doc(tmp_path, doc)
    code, report = run_command(
        ["stability-corollary", "--spec", path, "--frame", "W",
         "--candidate", "V", "--perturbed", "Vp"])
    assert code == 0
    assert report["verdicts"]["condition_holds"]["value"]


def test_stability_frame_subcommand():
    code, report = run_command(
        ["stability-frame", "--spec", "ex_b", "--frame", "W", "--candidate", "V",
         "--perturbed", "U"])
    assert code == 0
    assert report["verdicts"]["condition_holds"]["value"]
    assert report["scalars"]["resulting_deviation"] < 1.0


def test_dual_of_dual_subcommand():
    code, report = run_command(
        ["dual-of-dual", "--spec", "ex_b", "--frame", "W", "--candidate", "V"])
    assert code == 0
    assert report["scalars"]["inverse_difference_norm"] == pytest.approx(0.5, abs=1e-12)
    assert report["scalars"]["reverse_deviation"] == pytest.approx(0.5, abs=1e-12)
    code, report = run_command(
        ["dual-of-dual", "--spec", "ex_c", "--frame", "W", "--candidate", "V"])
    assert code == 1
    assert report["scalars"]["reverse_deviation"] == pytest.approx(1.0, abs=1e-10)


def test_fixtures_subcommand(tmp_path):
    code, report = run_command(["fixtures"])
    assert code == 0
    assert set(report["fixtures"]) == {"ex_a", "ex_b", "ex_c"}
    code, report = run_command(["fixtures", "--name", "ex_a"])
    assert set(report["fixtures"]) == {"ex_a"}
    out = tmp_path / "out"
    code, report = run_command(["fixtures", "--write", str(out)])
    assert code == 0
    for name in ("ex_a", "ex_b", "ex_c"):
        assert (out / f"{name}.json").read_text() == bundled_fixture_text(name)


def test_spec_flag_accepts_paths_and_fixture_names(tmp_path):
    path = tmp_path / "ex_a.json"
    path.write_text(bundled_fixture_text("ex_a"))
    by_path = run_command(["analyze", "--spec", str(path), "--frame", "W"])
    by_name = run_command(["analyze", "--spec", "ex_a", "--frame", "W"])
    by_name_json = run_command(["analyze", "--spec", "ex_a.json", "--frame", "W"])
    assert by_path[0] == by_name[0] == by_name_json[0] == 0
    assert by_path[1]["input_digest"] == by_name[1]["input_digest"]
    assert by_name_json[1]["input_digest"] == by_name[1]["input_digest"]


# -------------------------------------------------------------------- stability

def test_document_tolerance_is_the_default_comparison_tolerance(tmp_path):
    doc = fixture_document("ex_a")
    doc["tolerance"] = 0.6  # absurdly loose: deviation 0.5 now counts as dual
    path = write_doc(tmp_path, doc)
    code, _ = run_command(
        ["check-dual", "--spec", path, "--frame", "W", "--candidate", "V"])
    assert code == 0
    code, _ = run_command(
        ["check-dual", "--spec", path, "--frame", "W", "--candidate", "V",
         "--tol", "1e-9"])
    assert code == 1  # explicit flag overrides the document


def test_reports_are_byte_stable():
    argv = ["check-approx-dual", "--spec", "ex_a", "--frame", "W",
            "--candidate", "V", "--format", "json"]
    first = run_command(argv)
    second = run_command(argv)
    assert first[0] == second[0]
    assert canonical_json(first[1]) == canonical_json(second[1])


def test_report_schema_fields():
    _, report = run_command(["analyze", "--spec", "ex_b", "--frame", "W"])
    assert report["schema"] == "ffl-report/1"
    assert report["command"] == "analyze"
    assert isinstance(report["input_digest"], str)
    for verdict in report["verdicts"].values():
        assert set(verdict) == {"value", "margin"}


def test_emit_matrices_flag():
    _, plain = run_command(["check-dual", "--spec", "ex_b", "--frame", "W",
                            "--candidate", "V"])
    assert "matrices" not in plain
    _, with_m = run_command(["check-dual", "--spec", "ex_b", "--frame", "W",
                             "--candidate", "V", "--emit-matrices"])
    op = np.asarray(with_m["matrices"]["reconstruction_operator"])
    assert np.allclose(op, np.eye(3), atol=1e-12)


def test_text_rendering_smoke(capsys):
    from fusionframes.cli import main
    assert main(["analyze", "--spec", "ex_b", "--frame", "W"]) == 0
    out = capsys.readouterr().out
    assert "command: analyze" in out and "verdicts:" in out
    assert main(["fixtures", "--name", "ex_b"]) == 0
    out = capsys.readouterr().out
    assert "fixture ex_b:" in out
    assert main(["check-dual", "--spec", "ex_c", "--frame", "W",
                 "--candidate", "V", "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert out.startswith('{"argv"')


# -------------------------------------------------------------------- failures

def test_usage_errors_exit_two():
    code, report = run_command(["no-such-command"])
    assert code == 2
    code, report = run_command(["analyze", "--frame", "W"])  # missing --spec
    assert code == 2
    code, report = run_command(["analyze", "--spec", "missing.json", "--frame", "W"])
    assert code == 2
    code, report = run_command(["analyze", "--spec", "ex_a", "--frame", "Nope"])
    assert code == 2
    assert "no frame named" in report["message"]
    code, report = run_command(
        ["neumann-reconstruct", "--spec", "ex_a", "--frame", "W",
         "--candidate", "V", "--vector", "banana"])
    assert code == 2


def test_not_a_frame_precondition_exits_one(tmp_path):
    doc = {
        "dimension": 3,
        "frames": {"thin": [
            {"spanning_vectors": [[1.0, 0.0, 0.0]], "weight": 1.0}]},
    }
    path = write_doc(tmp_path, doc)
    code, report = run_command(["canonical-dual", "--spec", path, "--frame", "thin"])
    assert code == 1
    assert report["status"] == "violation"
