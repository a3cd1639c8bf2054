import json

import pytest

from ramseycat.constructions import BinaryDiagram, Bottom
from ramseycat.formats import (FormatError, diagram_from_dict, diagram_to_dict, dumps, load_category,
                               load_diagram, load_functor, load_json, load_structure, save_category,
                               save_structure)
from ramseycat.structures import Signature, Structure


def test_category_round_trip(tmp_path, ex_t2):
    path = tmp_path / "c.json"
    save_category(ex_t2, path)
    again = load_category(path)
    assert again == ex_t2 and again.name == "c"
    assert path.read_text().endswith("\n")


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": "→"}) == '{\n  "a": "→",\n  "b": 1\n}\n'


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "objects": [\n    "A",\n  ]\n}\n')
    with pytest.raises(FormatError) as exc:
        load_json(path)
    assert f"{path}:4:3:" in str(exc.value)


def test_missing_file_and_malformed_category(tmp_path):
    with pytest.raises(FormatError):
        load_json(tmp_path / "nope.json")
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"objects": ["A"]}))
    with pytest.raises(FormatError):
        load_category(path)


def test_functor_file(tmp_path, data_dir, ex_t2):
    save_category(ex_t2, tmp_path / "src.json")
    (tmp_path / "f.json").write_text(json.dumps({
        "source": "src.json", "target": "src.json",
        "objects": {"A": "A", "B": "B"},
        "morphisms": {"idA": "idA", "idB": "idB", "f": "g", "g": "f"}}))
    F = load_functor(tmp_path / "f.json")
    assert F.obj("A") == "A" and F.mor("f") == "g"
    (tmp_path / "g.json").write_text(json.dumps({"objects": {}}))
    with pytest.raises(FormatError):
        load_functor(tmp_path / "g.json")


def test_diagram_files(tmp_path, ex_t2):
    d = BinaryDiagram("A", "B", 2, [Bottom("f", 0, "g", 1)])
    assert diagram_from_dict(diagram_to_dict(d)) == d
    path = tmp_path / "d.json"
    path.write_text(dumps(diagram_to_dict(d)))
    assert load_diagram(path, ex_t2) == d
    path.write_text(dumps({"A": "A", "B": "B", "tops": 1, "bottoms": [{"u": "f", "i": 0, "v": "g", "j": 0}]}))
    with pytest.raises(FormatError):
        load_diagram(path)
    with pytest.raises(FormatError):
        diagram_from_dict({"A": "A"})


def test_structure_files(tmp_path):
    sig = Signature.make(relations={"<": 2}, constants=["c"])
    s = Structure(sig, 2, relations={"<": {(0, 1)}}, constants={"c": 1})
    path = tmp_path / "s.json"
    save_structure(s, path)
    data = json.loads(path.read_text())
    assert set(data) == {"signature", "size", "interp"}
    assert load_structure(path) == s
    path.write_text(json.dumps({"size": 2}))
    with pytest.raises(FormatError):
        load_structure(path)


def test_shipped_data_files_load(data_dir):
    names = sorted(p.stem for p in data_dir.glob("*.json"))
    assert {"ex_t2", "aut2", "one_object"} <= set(names)
    for p in data_dir.glob("*.json"):
        load_category(p)
