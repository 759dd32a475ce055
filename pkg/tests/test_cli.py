import json

import pytest

from loopforms.cli import main
from loopforms.specfile import load_spec, validate


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture(scope="module")
def eps3(tmp_path_factory):
    path = tmp_path_factory.mktemp("eps") / "epsilon3.json"
    assert main(["epsilon", "--n", "3", "--eps", "1", "--emit", "-o", str(path)]) == 0
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "eta1": write(tmp_path / "eta1.json", {"spec_version": 1, "n": 1, "coords": ["u"], "metric": [["1"]]}),
        "curved": write(tmp_path / "curved.json", {"spec_version": 1, "n": 1, "coords": ["u"], "metric": [["u"]]}),
        "eta2": write(tmp_path / "eta2.json",
                      {"spec_version": 1, "n": 2, "coords": ["u1", "u2"], "metric": [["0", "1"], ["1", "0"]]}),
        "a": write(tmp_path / "a.json", {"form_version": 1, "coords": ["u"], "components": ["u^2"]}),
        "b": write(tmp_path / "b.json", {"form_version": 1, "coords": ["u"], "components": ["u_1"]}),
        "g": write(tmp_path / "g.json", {"form_version": 1, "coords": ["u"], "general": [[1, 2, "u"]]}),
        "f2": write(tmp_path / "f2.json", {"form_version": 1, "coords": ["u1", "u2"], "components": ["u1*u2_1", "u1^2"]}),
        "h2": write(tmp_path / "h2.json", {"form_version": 1, "coords": ["u1", "u2"], "density": "u1_1^2*u2/2"}),
        "k2": write(tmp_path / "k2.json", {"form_version": 1, "coords": ["u1", "u2"], "components": ["u2_2", "u1*u2"]}),
        "bad": write(tmp_path / "bad.json", {"form_version": 1, "coords": ["u"], "components": ["u +* 1"]}),
        "jetden": write(tmp_path / "jetden.json", {"form_version": 1, "coords": ["u"], "components": ["1/u_1"]}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- epsilon and check-structure ------------------------------------------------------------

def test_epsilon_emit_is_valid_spec(eps3):
    doc = json.loads(open(eps3).read())
    validate(doc)
    assert "connection" in doc and "map" in doc and "eta" in doc
    assert set(doc["forms"]) == {"omega_1_0", "omega_1_1", "omega_1_2"}
    assert load_spec(eps3).n == 3


def test_check_structure_epsilon(capsys, eps3):
    code, out, _ = run(capsys, "check-structure", eps3)
    assert code == 0
    assert "[PASS] flatness" in out and "[INFO] invariance" in out
    assert out.rstrip().endswith("status: pass")


def test_epsilon_report_without_emit(capsys):
    code, out, _ = run(capsys, "epsilon", "--n", "4", "--eps=-1/2")
    assert code == 0 and "status: pass" in out


def test_epsilon_bad_eps(capsys):
    code, _, err = run(capsys, "epsilon", "--n", "3", "--eps", "one")
    assert code == 2 and "invalid rational" in err


def test_epsilon_small_n(capsys):
    assert run(capsys, "epsilon", "--n", "1")[0] == 2


# -- hierarchy-verify -------------------------------------------------------------------------

def test_hierarchy_first_step_passes(capsys, eps3):
    code, out, _ = run(capsys, "hierarchy-verify", eps3, "spec:omega_1_0", "spec:omega_1_1")
    assert code == 0
    assert "[PASS] recursion spec:omega_1_0 -> spec:omega_1_1" in out


def test_hierarchy_second_step_reports_defect(capsys, eps3):
    code, out, _ = run(capsys, "hierarchy-verify", eps3, "spec:omega_1_1", "spec:omega_1_2")
    assert code == 1
    assert "[FAIL] recursion spec:omega_1_1 -> spec:omega_1_2" in out
    assert "[PASS] involution spec:omega_1_1, spec:omega_1_2" in out


def test_hierarchy_unknown_form(capsys, eps3):
    code, _, err = run(capsys, "hierarchy-verify", eps3, "spec:omega_9_9", "spec:omega_1_1")
    assert code == 2 and "omega_9_9" in err


# -- brackets and friends ----------------------------------------------------------------------

def test_bracket_flat(capsys, files):
    code, out, _ = run(capsys, "bracket", "--mode", "flat", files["eta1"], files["a"], files["b"])
    assert code == 0
    assert "-2*u_1^2" in out


def test_bracket_mode_error_on_non_constant_metric(capsys, files):
    code, _, err = run(capsys, "bracket", "--mode", "flat", files["curved"], files["a"], files["b"])
    assert code == 2 and "ModeError" in err


def test_bracket_hydro_rejects_jets(capsys, files):
    code, _, err = run(capsys, "bracket", "--mode", "hydro", files["eta1"], files["a"], files["b"])
    assert code == 2 and "UnsupportedInputError" in err


def test_reduce(capsys, files):
    code, out, _ = run(capsys, "reduce", files["g"])
    assert code == 0 and "u_2" in out


def test_reduce_emit_round_trip(capsys, files, tmp_path):
    code, out, _ = run(capsys, "reduce", "--emit", files["g"])
    assert code == 0
    doc = json.loads(out)
    assert doc["components"] == ["u_2"]


def test_apply_p(capsys, files):
    code, out, _ = run(capsys, "apply-p", files["eta2"], files["f2"])
    assert code == 0 and "2*u1*u1_1" in out


def test_jacobi_and_cartan(capsys, files):
    assert run(capsys, "jacobi", files["eta2"], files["f2"], files["h2"], files["k2"])[0] == 0
    assert run(capsys, "cartan", files["eta2"], files["f2"], files["k2"])[0] == 0


def test_casimir_check(capsys, files):
    code, out, _ = run(capsys, "casimir-check", files["eta2"], files["f2"])
    assert code == 0 and "status: pass" in out


def test_properties(capsys):
    code, out, _ = run(capsys, "properties", "--count", "2", "--seed", "5")
    assert code == 0 and "status: pass" in out


# -- input errors -------------------------------------------------------------------------------

def test_parse_error_exit_code(capsys, files):
    code, _, err = run(capsys, "reduce", files["bad"])
    assert code == 2
    assert "components/0" in err and "line 1, column 4" in err


def test_jet_denominator_exit_code(capsys, files):
    code, _, err = run(capsys, "reduce", files["jetden"])
    assert code == 2 and "jet variables" in err


def test_missing_file(capsys):
    assert run(capsys, "reduce", "/nonexistent/form.json")[0] == 2


def test_schema_violation(capsys, tmp_path):
    spec = write(tmp_path / "s.json", {"spec_version": 1, "n": 1, "coords": ["u"], "metric": [["1"]], "extra": 1})
    code, _, err = run(capsys, "check-structure", spec)
    assert code == 2 and "schema" in err


def test_coordinate_mismatch(capsys, files):
    assert run(capsys, "apply-p", files["eta1"], files["f2"])[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "bracket")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


# -- report properties -----------------------------------------------------------------------------

def test_json_mirror_matches_text(capsys, eps3):
    _, text, _ = run(capsys, "check-structure", eps3)
    _, js, _ = run(capsys, "check-structure", eps3, "--json")
    doc = json.loads(js)
    names = [line.split("] ", 1)[1] for line in text.splitlines() if line.startswith("[")]
    assert names == [v["name"] for v in doc["verdicts"]]
    tags = [line[1:5] for line in text.splitlines() if line.startswith("[")]
    assert tags == ["PASS" if v["passed"] else ("INFO" if v["informational"] else "FAIL") for v in doc["verdicts"]]
    assert doc["exit_code"] == 0 and doc["status"] == "pass"


def test_deterministic_output(capsys, eps3):
    first = run(capsys, "hierarchy-verify", eps3, "spec:omega_1_0", "spec:omega_1_1", "spec:omega_1_2", "--json")
    second = run(capsys, "hierarchy-verify", eps3, "spec:omega_1_0", "spec:omega_1_1", "spec:omega_1_2", "--json")
    assert first == second


def test_thread_count_does_not_change_output(capsys, eps3):
    one = run(capsys, "check-structure", eps3, "--threads", "1")
    four = run(capsys, "check-structure", eps3, "--threads", "4")
    assert one == four


def test_properties_seeded(capsys):
    a = run(capsys, "properties", "--count", "2", "--seed", "9", "--json")
    b = run(capsys, "properties", "--count", "2", "--seed", "9", "--json")
    assert a == b


def test_timing_flag(capsys, files):
    code, out, _ = run(capsys, "apply-p", files["eta2"], files["f2"], "--json", "--timing")
    assert code == 0 and "timing" in json.loads(out)
