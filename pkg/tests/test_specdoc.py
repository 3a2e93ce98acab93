import json
import math

import numpy as np
import pytest

from fusionframes import SpecDocumentError, build_frame, parse_spec, serialize_spec
from fusionframes.fixtures import (FIXTURE_NAMES, bundled_fixture_text,
                                   fixture_document)
from fusionframes.specdoc import (canonical_json, document_digest,
                                  document_to_dict, format_float)


def sample_document():
    return {
        "dimension": 2,
        "tolerance": 1e-9,
        "frames": {
            "A": [
                {"spanning_vectors": [[1.0, 0.0]], "weight": 1.0},
                {"spanning_vectors": [], "weight": 0.5},
            ],
            "B": [
                {"spanning_vectors": [[1 / 3, 0.1], [0.0, 1e-9]], "weight": math.pi},
            ],
        },
    }


# -------------------------------------------------------------------- parsing

def test_round_trip_is_field_for_field_identical():
    for source in [sample_document()] + [fixture_document(n) for n in FIXTURE_NAMES]:
        doc = parse_spec(source)
        again = parse_spec(serialize_spec(doc))
        assert again == doc
        assert serialize_spec(again) == serialize_spec(doc)


def test_parse_accepts_text_path_and_dict(tmp_path):
    doc_dict = sample_document()
    text = canonical_json(doc_dict)
    path = tmp_path / "doc.json"
    path.write_text(text)
    from_text = parse_spec(text)
    from_path = parse_spec(str(path))
    from_dict = parse_spec(doc_dict)
    assert from_text == from_path == from_dict


def test_digest_ignores_formatting_but_not_content():
    doc = sample_document()
    pretty = json.dumps(doc, indent=4)
    assert document_digest(parse_spec(pretty)) == document_digest(parse_spec(doc))
    changed = sample_document()
    changed["frames"]["A"][0]["weight"] = 2.0
    assert document_digest(parse_spec(changed)) != document_digest(parse_spec(doc))


def test_empty_frames_map_is_rejected():
    with pytest.raises(SpecDocumentError, match="no frames"):
        parse_spec({"dimension": 3, "frames": {}})


def test_wrong_vector_length_names_frame_and_index():
    doc = sample_document()
    doc["frames"]["B"][0]["spanning_vectors"].append([1.0, 2.0, 3.0])
    with pytest.raises(SpecDocumentError, match=r"frames\['B'\]\[0\].spanning_vectors\[2\]"):
        parse_spec(doc)


def test_nonpositive_weight_is_rejected():
    doc = sample_document()
    doc["frames"]["A"][0]["weight"] = 0.0
    with pytest.raises(SpecDocumentError, match="positive"):
        parse_spec(doc)


def test_malformed_json_reports_position():
    with pytest.raises(SpecDocumentError, match="line"):
        parse_spec('{"dimension": 3,\n  "frames": }')


def test_duplicate_frame_names_are_rejected():
    text = ('{"dimension": 2, "frames": {'
            '"A": [{"spanning_vectors": [[1.0, 0.0]], "weight": 1}], '
            '"A": [{"spanning_vectors": [[0.0, 1.0]], "weight": 1}]}}')
    with pytest.raises(SpecDocumentError, match="duplicate"):
        parse_spec(text)


def test_unknown_fields_are_rejected():
    doc = sample_document()
    doc["color"] = "blue"
    with pytest.raises(SpecDocumentError, match="unknown"):
        parse_spec(doc)


def test_bad_dimension_and_tolerance():
    with pytest.raises(SpecDocumentError, match="dimension"):
        parse_spec({"dimension": 0, "frames": {"A": [
            {"spanning_vectors": [], "weight": 1}]}})
    doc = sample_document()
    doc["tolerance"] = -1.0
    with pytest.raises(SpecDocumentError, match="tolerance"):
        parse_spec(doc)


def test_non_finite_entries_are_rejected():
    doc = sample_document()
    doc["frames"]["A"][0]["spanning_vectors"][0][0] = float("inf")
    with pytest.raises(SpecDocumentError, match="finite"):
        parse_spec(doc)


# -------------------------------------------------------------- frame building

def test_build_frame_constructs_in_document_order():
    doc = parse_spec(fixture_document("ex_c"))
    frame = build_frame(doc, "W")
    assert [s.dim for s in frame.subspaces] == [1, 1, 1, 1]
    assert frame.weights[1] == pytest.approx(np.sqrt(2.0), abs=0)


def test_build_frame_zero_subspace_entry():
    frame = build_frame(parse_spec(sample_document()), "A")
    assert frame.subspaces[1].is_zero


def test_build_frame_unknown_name_lists_available():
    doc = parse_spec(sample_document())
    with pytest.raises(SpecDocumentError, match="A, B"):
        build_frame(doc, "missing")


# ---------------------------------------------------------------- serialization

def test_format_float_round_trips_doubles():
    values = [1 / 3, 0.1, 1e-9, math.sqrt(2.0), 3 * math.sqrt(2.0), 1e300,
              5e-324, -0.0, 12345.6789, 2.0]
    for x in values:
        assert float(format_float(x)) == x


def test_canonical_json_is_sorted_and_stable():
    text = canonical_json({"b": 1, "a": [True, False, None, 0.5]})
    assert text == '{"a": [true, false, null, 0.5], "b": 1}'
    assert canonical_json({"a": 1, "b": [True]}) == canonical_json({"b": [True], "a": 1})


def test_canonical_json_rejects_non_finite():
    with pytest.raises(ValueError):
        canonical_json({"x": float("nan")})


def test_bundled_files_match_generated_documents():
    for name in FIXTURE_NAMES:
        doc = parse_spec(fixture_document(name))
        expected = canonical_json(document_to_dict(doc)) + "\n"
        assert bundled_fixture_text(name) == expected
