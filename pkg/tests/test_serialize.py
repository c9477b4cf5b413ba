import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import cubecover.fixtures as F
import cubecover.serialize as S
from cubecover.complex import assign_links
from cubecover.deltacat import build_pre_delta, extend_to_delta
from cubecover.errors import ParseError, ValidationError
from cubecover.kneser import build_kneser
from cubecover.leighton import orbicover_pipeline

L3 = build_kneser(3, 2)


@pytest.mark.parametrize("name", ["theta", "strip", "cube", "klein", "petersen-davis"])
def test_complex_roundtrip(name):
    X = F.FIXTURES[name]()
    text = S.dumps(X)
    Y = S.loads(text)
    assert X.same_as(Y)
    assert S.dumps(Y) == text


def test_kneser_roundtrip():
    for L in (build_kneser(5, 2), build_kneser(("a", "b", "c"), 1)):
        M = S.loads(S.dumps(L))
        assert M.ground == L.ground and M.vertices == L.vertices and M.edges == L.edges


def test_delta_roundtrips():
    X = F.cube_skeleton()
    pre = build_pre_delta(X, assign_links(X, L3))
    dc = extend_to_delta(X, pre, {2: (1, 0)})
    for obj in (pre, dc):
        text = S.dumps(obj)
        back = S.loads(text, "delta")
        assert type(back) is type(obj)
        assert np.array_equal(back.phi, obj.phi)
        assert S.dumps(back) == text
    assert S.loads(S.dumps(dc)).base_choices == dc.base_choices


def test_cover_and_coloring_roundtrip():
    oc = orbicover_pipeline(F.petersen_graph(), L3)
    for obj in (oc.chain[0], oc.coloring):
        text = S.dumps(obj)
        assert S.dumps(S.loads(text)) == text


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        S.loads('{\n  "format": 1,\n  "kind": "complex",\n  oops\n}')
    assert (info.value.line, info.value.column) == (4, 3)


def test_schema_error_points_at_key():
    text = S.dumps(F.theta()).replace('"n_vertices": 2', '"n_vertices": "two"')
    with pytest.raises(ParseError) as info:
        S.loads(text)
    assert info.value.line == 4


def test_wrong_kind_and_format():
    with pytest.raises(ParseError, match="expected 'kneser'"):
        S.loads(S.dumps(F.theta()), "kneser")
    with pytest.raises(ParseError, match="unsupported format"):
        S.loads(S.dumps(F.theta()).replace('"format": 1', '"format": 2'))
    with pytest.raises(ParseError, match="unknown kind"):
        S.loads('{"format": 1, "kind": "teapot"}')


def test_structural_errors_surface_as_validation():
    doc = json.loads(S.dumps(F.strip()))
    doc["squares"][1][2] = doc["squares"][1][0]
    with pytest.raises(ValidationError, match="square/1"):
        S.loads(json.dumps(doc))


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_fuzzed_documents_fail_cleanly(data):
    text = S.dumps(F.strip())
    i = data.draw(st.integers(0, len(text) - 1))
    junk = data.draw(st.text(alphabet='{}[],:"0123456789-abc ', max_size=4))
    mutated = text[:i] + junk + text[i + data.draw(st.integers(0, 3)):]
    try:
        S.loads(mutated)
    except (ParseError, ValidationError):
        pass
