import json

import pytest

from loopforms.errors import InputError
from loopforms.fmanifold import check_fmanifold, epsilon_system
from loopforms.parser import parse_expr
from loopforms.specfile import (
    dumps,
    form_from_dict,
    form_to_dict,
    golden_epsilon3,
    load_form,
    spec_forms,
    spec_from_dict,
    spec_to_dict,
    validate,
)

BASE = {"spec_version": 1, "n": 2, "coords": ["a", "b"], "metric": [["1", "0"], ["0", "a^2+1"]]}


def test_golden_file_shape():
    g = golden_epsilon3()
    assert g["coords"] == ["u1", "u2", "u3"]
    assert set(g["metric_covariant"]) == set(g["metric_contravariant"]) == {"11", "12", "13", "22", "23", "33"}
    assert all(len(v) == 3 for v in g["forms"].values())


def test_spec_round_trip():
    spec = epsilon_system(3, 1)
    doc = json.loads(dumps(spec_to_dict(spec, "eps")))
    again = spec_from_dict(doc)
    assert again.connection.gamma == spec.connection.gamma
    assert again.metric.g_cov == spec.metric.g_cov
    assert all(r.passed for r in check_fmanifold(again))


def test_spec_with_lower_index_metric():
    doc = dict(BASE, metric_index="lower")
    spec = spec_from_dict(doc)
    assert spec.metric.g_contra[1][1] == parse_expr("1/(a^2+1)", spec.ring).as_ratfun()


def test_tensor_entries_symmetric_completion():
    doc = dict(BASE, connection=[[1, 1, 2, "a"]])
    g = spec_from_dict(doc).connection.gamma
    assert g[0][0][1] == g[0][1][0]


def test_tensor_conflict():
    with pytest.raises(InputError, match="conflicting"):
        spec_from_dict(dict(BASE, connection=[[1, 1, 2, "a"], [1, 2, 1, "b"]]))


def test_tensor_index_range():
    with pytest.raises(InputError, match="out of range"):
        spec_from_dict(dict(BASE, product=[[3, 1, 1, "1"]]))


def test_map_requires_eta():
    with pytest.raises(InputError, match="eta"):
        spec_from_dict(dict(BASE, map=["a", "b"]))


def test_coordinate_count_mismatch():
    with pytest.raises(InputError):
        spec_from_dict(dict(BASE, coords=["a"]))


def test_schema_rejects_unknown_keys():
    with pytest.raises(InputError, match="schema"):
        validate(dict(BASE, colour="red"))


def test_expression_error_location():
    with pytest.raises(InputError, match=r"metric/1/1: .*line 1, column 4"):
        spec_from_dict(dict(BASE, metric=[["1", "0"], ["0", "a ^^ 2"]]))


def test_form_kinds():
    ring = spec_from_dict(BASE).ring
    comps = form_from_dict({"form_version": 1, "coords": ["a", "b"], "components": ["a_1", "b"]}, ring)
    dens = form_from_dict({"form_version": 1, "coords": ["a", "b"], "density": "a*b_1"}, ring)
    gen = form_from_dict({"form_version": 1, "coords": ["a", "b"], "general": [[1, 0, "b_1"], [2, 1, "a"]]}, ring)
    assert dens == gen
    assert comps.components[0] == parse_expr("a_1", ring)
    assert form_from_dict(form_to_dict(gen), ring) == gen


def test_form_coordinate_mismatch():
    ring = spec_from_dict(BASE).ring
    with pytest.raises(InputError, match="differ"):
        form_from_dict({"form_version": 1, "coords": ["x", "y"], "components": ["x", "y"]}, ring)


def test_spec_forms_and_references():
    doc = dict(BASE, forms={"w": ["a", "b_1"]})
    ring = spec_from_dict(doc).ring
    assert spec_forms(doc, ring)["w"] == load_form("spec:w", ring, doc)
    with pytest.raises(InputError):
        load_form("spec:missing", ring, doc)


def test_dumps_keeps_rows_on_one_line():
    text = dumps({"m": [[1, 2], [3, 4]]})
    assert "[1, 2]" in text and "[3, 4]" in text
    assert json.loads(text) == {"m": [[1, 2], [3, 4]]}
