import io
import json

import pytest
from vcd.reader import TokenKind, tokenize

from revrom.netio import (
    SchemaError,
    from_json,
    load_netlist,
    netlist_to_dict,
    read_vectors,
    save_netlist,
    to_dot,
    to_json,
    vector_template,
    write_vcd,
    write_vectors,
)
from revrom.simfunc import run
from revrom.synth import build_decoder, build_dff, build_rom


@pytest.mark.parametrize(
    "nl", [build_decoder(3), build_dff(True), build_rom(n=4, m=2, k=2)], ids=lambda nl: nl.name
)
def test_json_round_trip_is_byte_stable(nl, tmp_path):
    text = to_json(nl)
    again = from_json(text)
    assert again == nl
    assert again.meta == nl.meta
    assert to_json(again) == text
    path = tmp_path / "c.json"
    save_netlist(nl, path)
    assert path.read_text() == text
    assert load_netlist(path) == nl


def test_json_field_names():
    doc = json.loads(to_json(build_dff()))
    assert set(doc) == {"name", "wires", "inputs", "outputs", "constants", "gates", "state_wires", "meta"}
    assert doc["constants"] == [{"wire": "const000", "value": 0}]
    assert doc["gates"][0] == {"id": "ff", "kind": "NP", "ins": ["E", "D", "ff.R", "const000"], "outs": ["ff.P", "ff.Q", "ff.R", "Q"]}


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("gates"),
        lambda d: d["gates"][0].update(kind="AND"),
        lambda d: d["constants"].append({"wire": "x", "value": 2}),
        lambda d: d.update(extra=1),
        lambda d: d.update(inputs="E"),
    ],
)
def test_schema_violations(mutate):
    doc = netlist_to_dict(build_dff())
    mutate(doc)
    with pytest.raises(SchemaError):
        from_json(json.dumps(doc))


def test_not_json():
    with pytest.raises(SchemaError):
        from_json("{nope")


def test_meta_is_optional():
    doc = netlist_to_dict(build_decoder(2))
    del doc["meta"]
    assert from_json(json.dumps(doc)) == build_decoder(2)


def test_dot_decoder2():
    dot = to_dot(build_decoder(2))
    edges = [ln for ln in dot.splitlines() if "->" in ln]
    boxes = [ln for ln in dot.splitlines() if "shape=box" in ln]
    assert len(boxes) == 1 and '"dec.hl:HL"' in boxes[0]
    assert len(edges) == 8
    assert not any("dashed" in e for e in edges)


def test_dot_marks_garbage_dashed():
    dot = to_dot(build_dff())
    dashed = [ln for ln in dot.splitlines() if "dashed" in ln]
    assert len(dashed) == 2
    assert any('"ff.P"' in ln for ln in dashed)


def test_vector_csv_round_trip():
    buf = io.StringIO()
    write_vectors(buf, ["E", "D"], [{"E": 1, "D": 0}, {"E": 0, "D": 1}])
    assert buf.getvalue() == "E,D\n1,0\n0,1\n"
    buf.seek(0)
    header, rows = read_vectors(buf)
    assert header == ["E", "D"]
    assert rows == [{"E": 1, "D": 0}, {"E": 0, "D": 1}]


@pytest.mark.parametrize("text", ["E,D\n1\n", "E,D\n1,x\n", "E,D\n1,2\n"])
def test_vector_csv_errors(text):
    with pytest.raises(ValueError):
        read_vectors(io.StringIO(text))


def test_vector_csv_empty_and_blank_lines():
    assert read_vectors(io.StringIO("")) == ([], [])
    assert read_vectors(io.StringIO("E,D\n\n1,1\n")) == (["E", "D"], [{"E": 1, "D": 1}])


def test_vector_template():
    assert vector_template(build_dff()) == "E,D\n"


def test_vcd_trace():
    trace = run(build_dff(), [{"E": 1, "D": 1}, {"E": 0, "D": 0}, {"E": 1, "D": 0}])
    buf = io.StringIO()
    write_vcd(buf, trace, signals=["E", "D", "Q"], scope="dff")
    text = buf.getvalue()
    assert "$timescale 1 ns $end" in text
    tokens = list(tokenize(io.BytesIO(text.encode())))
    names = [t.var.reference for t in tokens if t.kind is TokenKind.VAR]
    assert names == ["E", "D", "Q"]
    ids = {t.var.id_code: t.var.reference for t in tokens if t.kind is TokenKind.VAR}
    now, q = 0, {}
    for t in tokens:
        if t.kind is TokenKind.CHANGE_TIME:
            now = t.time_change
        elif t.kind is TokenKind.CHANGE_SCALAR and ids[t.scalar_change.id_code] == "Q":
            q[now] = int(t.scalar_change.value)
    # value changes only: Q rises at 0, holds at 1, falls at 2
    assert q == {0: 1, 2: 0}
