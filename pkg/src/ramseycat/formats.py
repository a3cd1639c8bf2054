"""JSON file formats for categories, functors, diagrams, structures and reports."""

from __future__ import annotations

import json
from pathlib import Path

from .constructions import BinaryDiagram, Bottom, FunctorData
from .core import CategoryError, FiniteCategory
from .structures import Structure


class FormatError(ValueError):
    pass


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(data, path):
    Path(path).write_text(dumps(data), encoding="utf-8")


def load_category(path) -> FiniteCategory:
    data = load_json(path)
    try:
        return FiniteCategory.from_dict(data, name=Path(path).stem)
    except CategoryError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_category(cat: FiniteCategory, path):
    write_json(cat.to_dict(), path)


def functor_from_dict(data: dict, source: FiniteCategory, target: FiniteCategory) -> FunctorData:
    try:
        objs = dict(data["objects"])
        mors = dict(data["morphisms"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed functor data: {exc}") from exc
    return FunctorData(source, target, objs, mors, data.get("name", ""))


def load_functor(path) -> FunctorData:
    """A functor file names its source and target category files (relative paths
    are resolved against the functor file)."""
    path = Path(path)
    data = load_json(path)
    try:
        src, tgt = path.parent / data["source"], path.parent / data["target"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: functor needs 'source' and 'target'") from exc
    return functor_from_dict(data, load_category(src), load_category(tgt))


def diagram_from_dict(data: dict) -> BinaryDiagram:
    try:
        bottoms = [Bottom(b["u"], int(b["i"]), b["v"], int(b["j"])) for b in data["bottoms"]]
        return BinaryDiagram(data["A"], data["B"], int(data["tops"]), bottoms)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed diagram data: {exc}") from exc


def diagram_to_dict(d: BinaryDiagram) -> dict:
    return {"A": d.A, "B": d.B, "tops": d.tops,
            "bottoms": [{"u": b.u, "i": b.i, "v": b.v, "j": b.j} for b in d.bottoms]}


def load_diagram(path, ambient: FiniteCategory | None = None) -> BinaryDiagram:
    d = diagram_from_dict(load_json(path))
    try:
        d.validate(ambient)
    except CategoryError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return d


def load_structure(path) -> Structure:
    data = load_json(path)
    try:
        return Structure.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_structure(s: Structure, path):
    write_json(s.to_dict(), path)
