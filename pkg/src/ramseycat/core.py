"""Finite categories, the view protocol, and the basic hom-set machinery.

Every other module talks to categories through :class:`CategoryView`.  A view
hands out objects and morphisms as opaque hashable values; only the view knows
how to compose them.  :class:`FiniteCategory` is the explicit, table-driven
implementation that file I/O reads and writes.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator


class CategoryError(ValueError):
    pass


class UnknownObject(CategoryError, KeyError):
    def __str__(self):
        return f"unknown object {self.args[0]!r}"


class NotComposable(CategoryError):
    pass


class NotMono(CategoryError):
    pass


# ---------------------------------------------------------------------------
# extended naturals


@functools.total_ordering
@dataclass(frozen=True)
class ExtNat:
    """A positive integer or infinity; ``value is None`` encodes infinity."""

    value: int | None

    def __post_init__(self):
        if self.value is not None and self.value < 1:
            raise ValueError("extended naturals start at 1")

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __lt__(self, other):
        other = _ext(other)
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, ExtNat):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __mul__(self, other):
        other = _ext(other)
        if self.value is None or other.value is None:
            return INF
        return ExtNat(self.value * other.value)

    __rmul__ = __mul__

    def __str__(self):
        return "∞" if self.value is None else str(self.value)

    def to_json(self):
        return "inf" if self.value is None else self.value

    @classmethod
    def from_json(cls, raw) -> ExtNat:
        return INF if raw in ("inf", None) else cls(int(raw))


INF = ExtNat(None)


def _ext(x) -> ExtNat:
    if isinstance(x, ExtNat):
        return x
    if isinstance(x, int):
        return ExtNat(x)
    raise TypeError(f"cannot compare ExtNat with {type(x).__name__}")


# ---------------------------------------------------------------------------
# the view protocol


class CategoryView:
    """Read-only query interface shared by every category in the package.

    Subclasses implement ``objects``/``iter_objects``, ``hom``, ``compose``,
    ``identity``, ``dom`` and ``cod``.  ``finite`` is False for enumerated
    classes whose object stream does not end; such views only support
    ``iter_objects``.
    """

    finite: bool = True
    #: True when every morphism is mono by construction (e.g. injective maps).
    mono_by_construction: bool = False

    def objects(self) -> list:
        raise NotImplementedError

    def iter_objects(self) -> Iterator:
        return iter(self.objects())

    def hom(self, a, b) -> list:
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    def has_object(self, a) -> bool:
        return a in self._object_set()

    def _object_set(self):
        cached = self.__dict__.get("_objset")
        if cached is None:
            cached = frozenset(self.objects())
            self.__dict__["_objset"] = cached
        return cached

    def check_object(self, a):
        if not self.has_object(a):
            raise UnknownObject(a)

    def obj_name(self, a) -> str:
        return str(a)

    def mor_name(self, f) -> str:
        return str(f)

    def find_object(self, name: str, limit: int | None = None):
        """Resolve an object from its printed name."""
        objs = self.iter_objects()
        if limit is not None:
            objs = itertools.islice(objs, limit)
        for a in objs:
            if self.obj_name(a) == name:
                return a
        raise UnknownObject(name)

    def morphisms(self) -> list:
        out = []
        for a in self.objects():
            for b in self.objects():
                out.extend(self.hom(a, b))
        return out


# ---------------------------------------------------------------------------
# explicit finite categories


class FiniteCategory(CategoryView):
    """A category given by explicit identity and composition tables.

    ``morphisms`` is a list of ``(id, dom, cod)`` triples; its order fixes the
    order of every hom-set.  ``compose`` maps ``(g, f)`` to ``g·f``.
    Construction does not validate; call :func:`validate_category`.
    """

    def __init__(self, objects: Iterable[Hashable],
                 morphisms: Iterable[tuple[Hashable, Hashable, Hashable]],
                 identities: dict, compose: dict, name: str | None = None):
        self._objects = list(objects)
        self._morphisms = [tuple(m) for m in morphisms]
        self._dom = {m: d for m, d, _ in self._morphisms}
        self._cod = {m: c for m, _, c in self._morphisms}
        self._identities = dict(identities)
        self._compose = dict(compose)
        self.name = name
        self._homs: dict[tuple, list] = {}
        for m, d, c in self._morphisms:
            self._homs.setdefault((d, c), []).append(m)
        self._laws: LawReport | None = None

    # -- view protocol
    def objects(self):
        return list(self._objects)

    def hom(self, a, b):
        self.check_object(a)
        self.check_object(b)
        return list(self._homs.get((a, b), ()))

    def compose(self, g, f):
        try:
            return self._compose[(g, f)]
        except KeyError:
            raise NotComposable(f"compose({g!r}, {f!r}) is undefined") from None

    def identity(self, a):
        self.check_object(a)
        return self._identities[a]

    def dom(self, f):
        return self._dom[f]

    def cod(self, f):
        return self._cod[f]

    def morphisms(self):
        return [m for m, _, _ in self._morphisms]

    @property
    def morphism_records(self):
        return list(self._morphisms)

    @property
    def identities(self):
        return dict(self._identities)

    @property
    def compose_table(self):
        return dict(self._compose)

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self._objects == other._objects
                and self._morphisms == other._morphisms
                and self._identities == other._identities
                and self._compose == other._compose)

    __hash__ = None

    def __repr__(self):
        return (f"FiniteCategory({self.name or ''}: {len(self._objects)} objects, "
                f"{len(self._morphisms)} morphisms)")

    # -- serialization
    def to_dict(self) -> dict:
        return {
            "objects": [str(a) for a in self._objects],
            "morphisms": [{"id": str(m), "dom": str(d), "cod": str(c)}
                          for m, d, c in self._morphisms],
            "identities": {str(a): str(m) for a, m in self._identities.items()},
            "compose": [[str(g), str(f), str(h)]
                        for (g, f), h in self._compose.items()],
        }

    @classmethod
    def from_dict(cls, data: dict, name: str | None = None) -> FiniteCategory:
        try:
            objects = list(data["objects"])
            morphisms = [(m["id"], m["dom"], m["cod"]) for m in data["morphisms"]]
            identities = dict(data["identities"])
            compose = {}
            for entry in data["compose"]:
                g, f, h = entry
                compose[(g, f)] = h
        except (KeyError, TypeError, ValueError) as exc:
            raise CategoryError(f"malformed category data: {exc}") from exc
        return cls(objects, morphisms, identities, compose, name=name)


def materialize(view: CategoryView, name: str | None = None) -> FiniteCategory:
    """Copy a finite view into an explicit table, naming things by their labels."""
    if not view.finite:
        raise CategoryError("cannot materialize an unbounded view")
    objs = view.objects()
    oname = {a: view.obj_name(a) for a in objs}
    if len(set(oname.values())) != len(objs):
        raise CategoryError("object names are not unique")
    records, mname = [], {}
    for a in objs:
        for b in objs:
            for f in view.hom(a, b):
                mname[f] = view.mor_name(f)
                records.append((mname[f], oname[a], oname[b]))
    if len({r[0] for r in records}) != len(records):
        raise CategoryError("morphism names are not unique")
    compose = {}
    for a in objs:
        for b in objs:
            for f in view.hom(a, b):
                for c in objs:
                    for g in view.hom(b, c):
                        compose[(mname[g], mname[f])] = mname[view.compose(g, f)]
    identities = {oname[a]: mname[view.identity(a)] for a in objs}
    return FiniteCategory([oname[a] for a in objs], records, identities, compose, name=name)


# ---------------------------------------------------------------------------
# validation


@dataclass
class LawCheck:
    passed: bool
    kind: str = "ok"  # ok | law | malformed
    counterexample: tuple | None = None
    message: str = ""

    def to_dict(self):
        return {"passed": self.passed, "kind": self.kind,
                "counterexample": None if self.counterexample is None
                else [str(x) for x in self.counterexample],
                "message": self.message}


@dataclass
class LawReport:
    checks: dict[str, LawCheck] = field(default_factory=dict)

    MANDATORY = ("references", "identity", "closure", "associativity")

    @property
    def ok(self) -> bool:
        return all(self.checks[k].passed for k in self.MANDATORY if k in self.checks)

    @property
    def mono(self) -> bool:
        return self.checks["mono"].passed

    def failures(self) -> dict[str, LawCheck]:
        return {k: c for k, c in self.checks.items() if not c.passed}

    def to_dict(self):
        return {"ok": self.ok, "checks": {k: c.to_dict() for k, c in self.checks.items()}}


def validate_category(cat: FiniteCategory) -> LawReport:
    """Check the category laws exhaustively, recording the first counterexample."""
    if cat._laws is not None:
        return cat._laws
    report = LawReport()
    report.checks["references"] = _check_references(cat)
    if not report.checks["references"].passed:
        for k in ("identity", "closure", "associativity", "mono"):
            report.checks[k] = LawCheck(False, "malformed", message="skipped: malformed references")
        cat._laws = report
        return report
    report.checks["closure"] = _check_closure(cat)
    report.checks["identity"] = _check_identity(cat)
    if report.checks["closure"].passed:
        report.checks["associativity"] = _check_associativity(cat)
        report.checks["mono"] = _check_mono_table(cat)
    else:
        report.checks["associativity"] = LawCheck(False, "law", message="skipped: composition not closed")
        report.checks["mono"] = LawCheck(False, "law", message="skipped: composition not closed")
    cat._laws = report
    return report


def _check_references(cat: FiniteCategory) -> LawCheck:
    objs = set(cat._objects)
    if len(objs) != len(cat._objects):
        return LawCheck(False, "malformed", message="duplicate object ids")
    ids = [m for m, _, _ in cat._morphisms]
    if len(set(ids)) != len(ids):
        dup = next(m for m in ids if ids.count(m) > 1)
        return LawCheck(False, "malformed", (dup,), "duplicate morphism id")
    for m, d, c in cat._morphisms:
        if d not in objs or c not in objs:
            return LawCheck(False, "malformed", (m,), f"morphism {m} refers to an unknown object")
    for a in objs:
        if a not in cat._identities:
            return LawCheck(False, "malformed", (a,), f"object {a} has no identity")
    known = set(ids)
    for a, m in cat._identities.items():
        if a not in objs:
            return LawCheck(False, "malformed", (a,), f"identity given for unknown object {a}")
        if m not in known:
            return LawCheck(False, "malformed", (m,), f"identity {m} is not a morphism")
    for (g, f), h in cat._compose.items():
        for x in (g, f, h):
            if x not in known:
                return LawCheck(False, "malformed", (g, f), f"composition entry mentions unknown morphism {x}")
    return LawCheck(True)


def _check_identity(cat: FiniteCategory) -> LawCheck:
    for a, i in cat._identities.items():
        if cat._dom[i] != a or cat._cod[i] != a:
            return LawCheck(False, "law", (i,), f"identity of {a} is not an endomorphism of {a}")
    for f, d, c in cat._morphisms:
        left = cat._compose.get((cat._identities[c], f))
        if left != f:
            return LawCheck(False, "law", (cat._identities[c], f), "left identity law fails")
        right = cat._compose.get((f, cat._identities[d]))
        if right != f:
            return LawCheck(False, "law", (f, cat._identities[d]), "right identity law fails")
    return LawCheck(True)


def _check_closure(cat: FiniteCategory) -> LawCheck:
    for (g, f), h in cat._compose.items():
        if cat._dom[g] != cat._cod[f]:
            return LawCheck(False, "law", (g, f), "composition defined on a non-composable pair")
        if cat._dom[h] != cat._dom[f] or cat._cod[h] != cat._cod[g]:
            return LawCheck(False, "law", (g, f), "composite has the wrong domain or codomain")
    for f, _, c in cat._morphisms:
        for d in cat._objects:
            for g in cat._homs.get((c, d), ()):
                if (g, f) not in cat._compose:
                    return LawCheck(False, "law", (g, f), "composable pair without a composite")
    return LawCheck(True)


def _check_associativity(cat: FiniteCategory) -> LawCheck:
    comp = cat._compose
    for f, _, b in cat._morphisms:
        for c in cat._objects:
            for g in cat._homs.get((b, c), ()):
                gf = comp[(g, f)]
                for d in cat._objects:
                    for h in cat._homs.get((c, d), ()):
                        if comp[(comp[(h, g)], f)] != comp[(h, gf)]:
                            return LawCheck(False, "law", (h, g, f), "associativity fails")
    return LawCheck(True)


def _check_mono_table(cat: FiniteCategory) -> LawCheck:
    ok, cex = check_mono(cat)
    if ok:
        return LawCheck(True)
    return LawCheck(False, "law", cex, "morphism is not left-cancellable")


def check_mono(view: CategoryView) -> tuple[bool, tuple | None]:
    """Exhaustive left-cancellability check on a finite view.

    Returns ``(True, None)`` or ``(False, (f, g, h))`` with ``f·g = f·h``, ``g != h``.
    """
    objs = view.objects()
    for a in objs:
        for b in objs:
            for f in view.hom(a, b):
                for x in objs:
                    seen = {}
                    for g in view.hom(x, a):
                        fg = view.compose(f, g)
                        if fg in seen:
                            return False, (f, seen[fg], g)
                        seen[fg] = g
    return True, None


def is_mono_view(view: CategoryView) -> bool:
    """Cached mono status; by-construction views are trusted (and spot-checked in tests)."""
    if view.mono_by_construction:
        return True
    if isinstance(view, FiniteCategory):
        rep = validate_category(view)
        return rep.ok and rep.mono
    cached = view.__dict__.get("_mono")
    if cached is None:
        cached = view.finite and check_mono(view)[0]
        view.__dict__["_mono"] = cached
    return cached


def require_valid_mono(view: CategoryView):
    if isinstance(view, FiniteCategory):
        rep = validate_category(view)
        if not rep.ok:
            bad = ", ".join(rep.failures())
            raise CategoryError(f"category fails validation: {bad}")
    if not is_mono_view(view):
        raise NotMono("the engine requires every morphism to be mono")


# ---------------------------------------------------------------------------
# hom-sets, automorphisms, subobjects


def hom(view: CategoryView, a, b) -> list:
    return view.hom(a, b)


def _inverse_in(view: CategoryView, f, back: list):
    a, b = view.dom(f), view.cod(f)
    ida, idb = view.identity(a), view.identity(b)
    for g in back:
        if view.compose(g, f) == ida and view.compose(f, g) == idb:
            return g
    return None


def iso(view: CategoryView, a, b) -> list:
    back = view.hom(b, a)
    return [f for f in view.hom(a, b) if _inverse_in(view, f, back) is not None]


def aut(view: CategoryView, a) -> list:
    return iso(view, a, a)


def is_rigid(view: CategoryView, a) -> bool:
    return len(aut(view, a)) == 1


@dataclass(frozen=True)
class SubobjectClass:
    """A class of ``hom(A, B)`` modulo precomposition with ``Aut(A)``."""

    A: Any
    B: Any
    members: tuple

    @property
    def representative(self):
        return self.members[0]

    def __len__(self):
        return len(self.members)

    def __contains__(self, f):
        return f in self.members


def subobjects(view: CategoryView, a, b) -> list[SubobjectClass]:
    """The quotient ``hom(A, B)/~_A``, classes ordered by their representative.

    Members keep hom-set order and the representative is the earliest member.
    """
    morphs = view.hom(a, b)
    autos = aut(view, a)
    position = {f: i for i, f in enumerate(morphs)}
    seen: set = set()
    classes = []
    for f in morphs:
        if f in seen:
            continue
        orbit = {view.compose(f, alpha) for alpha in autos}
        members = tuple(sorted(orbit, key=position.__getitem__))
        seen.update(members)
        classes.append(SubobjectClass(a, b, members))
    return classes


def act_on_subobject(view: CategoryView, w, cls: SubobjectClass,
                     target_classes: list[SubobjectClass] | None = None) -> SubobjectClass:
    """``w · [f] = [w · f]`` for ``w: B → C``."""
    if view.dom(w) != cls.B:
        raise NotComposable(f"{view.mor_name(w)} does not start at {view.obj_name(cls.B)}")
    image = view.compose(w, cls.representative)
    if target_classes is None:
        target_classes = subobjects(view, cls.A, view.cod(w))
    for c in target_classes:
        if image in c.members:
            return c
    raise CategoryError("image not found among target subobjects")  # pragma: no cover


# ---------------------------------------------------------------------------
# opposite


def opposite(cat: FiniteCategory, name: str | None = None) -> FiniteCategory:
    records = [(m, c, d) for m, d, c in cat.morphism_records]
    compose = {(f, g): h for (g, f), h in cat.compose_table.items()}
    return FiniteCategory(cat.objects(), records, cat.identities, compose,
                          name=name or (f"{cat.name}^op" if cat.name else None))


class OppositeView(CategoryView):
    """Lazy opposite of any finite view."""

    def __init__(self, base: CategoryView):
        self.base = base
        self.finite = base.finite

    def objects(self):
        return self.base.objects()

    def iter_objects(self):
        return self.base.iter_objects()

    def has_object(self, a):
        return self.base.has_object(a)

    def hom(self, a, b):
        return self.base.hom(b, a)

    def compose(self, g, f):
        return self.base.compose(f, g)

    def identity(self, a):
        return self.base.identity(a)

    def dom(self, f):
        return self.base.cod(f)

    def cod(self, f):
        return self.base.dom(f)

    def obj_name(self, a):
        return self.base.obj_name(a)

    def mor_name(self, f):
        return self.base.mor_name(f)


# ---------------------------------------------------------------------------
# directedness and amalgamation


@dataclass
class PropertyVerdict:
    """yes / no / unknown answer for a category-wide property.

    ``exhaustive`` is True when the answer covers the whole category; for
    enumerated classes a "yes" only covers the quantified objects within budget.
    """

    answer: str
    exhaustive: bool = True
    counterexample: Any = None
    witnesses: list = field(default_factory=list)
    checked: int = 0
    note: str = ""

    def __bool__(self):
        return self.answer == "yes"


@dataclass
class Budget:
    """Object-count limits for enumerated (unbounded) views."""

    quantify: int = 6
    search: int = 12


def _objects_for(view: CategoryView, limit: int | None) -> tuple[list, bool]:
    if view.finite:
        return view.objects(), True
    return list(itertools.islice(view.iter_objects(), limit)), False


def is_directed(view: CategoryView, budget: Budget | None = None) -> PropertyVerdict:
    """Every pair of objects has a common upper bound."""
    budget = budget or Budget()
    quant, exact = _objects_for(view, budget.quantify)
    search, _ = _objects_for(view, budget.search)
    witnesses = []
    for i, a in enumerate(quant):
        for b in quant[i:]:
            found = None
            for c in search:
                if view.hom(a, c) and view.hom(b, c):
                    found = c
                    break
            if found is None:
                if exact:
                    return PropertyVerdict("no", True, counterexample=(a, b))
                return PropertyVerdict("unknown", False, counterexample=(a, b),
                                       note="no upper bound within search budget")
            witnesses.append((a, b, found))
    return PropertyVerdict("yes", exact, witnesses=witnesses, checked=len(witnesses))


def amalgamate_span(view: CategoryView, f1, f2, candidates: Iterable):
    """Find ``(C, g1, g2)`` with ``g1·f1 = g2·f2``, tips tried in the given order."""
    b1, b2 = view.cod(f1), view.cod(f2)
    for c in candidates:
        left = {}
        for g1 in view.hom(b1, c):
            left.setdefault(view.compose(g1, f1), g1)
        if not left:
            continue
        for g2 in view.hom(b2, c):
            hit = left.get(view.compose(g2, f2))
            if hit is not None:
                return c, hit, g2
    return None


def has_amalgamation(view: CategoryView, budget: Budget | None = None) -> PropertyVerdict:
    """Every span ``B1 <- A -> B2`` completes to a commuting square."""
    budget = budget or Budget()
    quant, exact = _objects_for(view, budget.quantify)
    search, _ = _objects_for(view, budget.search)
    witnesses = []
    for a in quant:
        for b1 in quant:
            for f1 in view.hom(a, b1):
                for b2 in quant:
                    for f2 in view.hom(a, b2):
                        hit = amalgamate_span(view, f1, f2, search)
                        if hit is None:
                            if exact:
                                return PropertyVerdict("no", True, counterexample=(f1, f2),
                                                       witnesses=witnesses, checked=len(witnesses))
                            return PropertyVerdict("unknown", False, counterexample=(f1, f2),
                                                   note="no amalgam within search budget")
                        witnesses.append(((f1, f2), hit))
    return PropertyVerdict("yes", exact, witnesses=witnesses, checked=len(witnesses))
