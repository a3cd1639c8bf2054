"""Finite first-order structures, their embeddings, and structure classes
viewed as categories of embeddings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .core import CategoryError, CategoryView, FiniteCategory, PropertyVerdict, UnknownObject


class SignatureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# signatures and structures


@dataclass(frozen=True)
class Signature:
    functions: tuple = ()   # ((name, arity), ...)
    relations: tuple = ()   # ((name, arity), ...)
    constants: tuple = ()   # (name, ...)

    def __post_init__(self):
        names = self.names()
        if len(set(names)) != len(names):
            raise SignatureError(f"symbol names must be unique: {names}")
        for name, arity in self.functions + self.relations:
            if arity < 1:
                raise SignatureError(f"symbol {name} needs arity >= 1")

    @classmethod
    def make(cls, functions: dict | None = None, relations: dict | None = None,
             constants: Iterable[str] = ()) -> Signature:
        return cls(tuple(sorted((functions or {}).items())),
                   tuple(sorted((relations or {}).items())),
                   tuple(constants))

    def names(self) -> list[str]:
        return [n for n, _ in self.functions] + [n for n, _ in self.relations] + list(self.constants)

    @property
    def is_relational(self) -> bool:
        return not self.functions and not self.constants

    def restrict(self, names: Iterable[str]) -> Signature:
        keep = set(names)
        unknown = keep - set(self.names())
        if unknown:
            raise SignatureError(f"not in the signature: {sorted(unknown)}")
        return Signature(tuple(x for x in self.functions if x[0] in keep),
                         tuple(x for x in self.relations if x[0] in keep),
                         tuple(c for c in self.constants if c in keep))

    def union(self, other: Signature) -> Signature:
        clash = set(self.names()) & set(other.names())
        if clash:
            raise SignatureError(f"signatures are not disjoint: {sorted(clash)}")
        return Signature(tuple(sorted(self.functions + other.functions)),
                         tuple(sorted(self.relations + other.relations)),
                         self.constants + other.constants)

    def to_dict(self):
        return {"functions": dict(self.functions), "relations": dict(self.relations),
                "constants": list(self.constants)}

    @classmethod
    def from_dict(cls, data: dict) -> Signature:
        return cls.make(data.get("functions"), data.get("relations"), data.get("constants", ()))


EMPTY_SIGNATURE = Signature()
ORDER = Signature.make(relations={"<": 2})


class Structure:
    """A finite structure on ``{0, …, size-1}``.

    ``functions`` maps a symbol to a dict from argument tuples to values,
    ``relations`` to a set of tuples, ``constants`` to an element.
    Instances are treated as immutable.
    """

    __slots__ = ("signature", "size", "functions", "relations", "constants", "_key")

    def __init__(self, signature: Signature, size: int, functions: dict | None = None,
                 relations: dict | None = None, constants: dict | None = None):
        if size < 1:
            raise SignatureError("structures are nonempty")
        self.signature = signature
        self.size = size
        self.functions = {n: dict(t) for n, t in (functions or {}).items()}
        self.relations = {n: frozenset(tuple(x) for x in r) for n, r in (relations or {}).items()}
        self.constants = dict(constants or {})
        for name, _ in signature.relations:
            self.relations.setdefault(name, frozenset())
        self._validate()
        self._key = None

    def _validate(self):
        sig, n = self.signature, self.size
        if set(self.functions) != {f for f, _ in sig.functions}:
            raise SignatureError("function symbols do not match the signature")
        if set(self.relations) != {r for r, _ in sig.relations}:
            raise SignatureError("relation symbols do not match the signature")
        if set(self.constants) != set(sig.constants):
            raise SignatureError("constant symbols do not match the signature")
        for name, arity in sig.functions:
            table = self.functions[name]
            for args in itertools.product(range(n), repeat=arity):
                v = table.get(args)
                if v is None or not 0 <= v < n:
                    raise SignatureError(f"function {name} is not total on the universe")
        for name, arity in sig.relations:
            for t in self.relations[name]:
                if len(t) != arity or not all(0 <= x < n for x in t):
                    raise SignatureError(f"bad tuple {t} in relation {name}")
        for name, v in self.constants.items():
            if not 0 <= v < n:
                raise SignatureError(f"constant {name} outside the universe")

    def key(self):
        if self._key is None:
            n = self.size
            funcs = tuple((name, tuple(self.functions[name][args]
                                       for args in itertools.product(range(n), repeat=ar)))
                          for name, ar in self.signature.functions)
            rels = tuple((name, tuple(sorted(self.relations[name])))
                         for name, _ in self.signature.relations)
            consts = tuple((c, self.constants[c]) for c in self.signature.constants)
            self._key = (self.signature, n, funcs, rels, consts)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = [f"size={self.size}"]
        for name, _ in self.signature.relations:
            parts.append(f"{name}={sorted(self.relations[name])}")
        for name, _ in self.signature.functions:
            parts.append(f"{name}=<table>")
        for c in self.signature.constants:
            parts.append(f"{c}={self.constants[c]}")
        return f"Structure({', '.join(parts)})"

    def relabel(self, perm) -> Structure:
        """Image of the structure under the bijection ``x ↦ perm[x]``."""
        p = list(perm)
        funcs = {name: {tuple(p[a] for a in args): p[v] for args, v in table.items()}
                 for name, table in self.functions.items()}
        rels = {name: {tuple(p[a] for a in t) for t in r} for name, r in self.relations.items()}
        consts = {c: p[v] for c, v in self.constants.items()}
        return Structure(self.signature, self.size, funcs, rels, consts)

    def to_dict(self):
        n = self.size
        interp = {}
        for name, ar in self.signature.functions:
            interp[name] = [[list(args), self.functions[name][args]]
                            for args in itertools.product(range(n), repeat=ar)]
        for name, _ in self.signature.relations:
            interp[name] = [list(t) for t in sorted(self.relations[name])]
        for c in self.signature.constants:
            interp[c] = self.constants[c]
        return {"signature": self.signature.to_dict(), "size": n, "interp": interp}

    @classmethod
    def from_dict(cls, data: dict) -> Structure:
        sig = Signature.from_dict(data["signature"])
        interp = data.get("interp", {})
        funcs = {name: {tuple(args): v for args, v in interp[name]} for name, _ in sig.functions}
        rels = {name: {tuple(t) for t in interp.get(name, [])} for name, _ in sig.relations}
        consts = {c: interp[c] for c in sig.constants}
        return cls(sig, data["size"], funcs, rels, consts)


@dataclass(frozen=True)
class Embedding:
    source: Structure
    target: Structure
    images: tuple

    def __call__(self, x):
        return self.images[x]

    def compose_after(self, inner: Embedding) -> Embedding:
        """``self · inner``."""
        return Embedding(inner.source, self.target, tuple(self.images[x] for x in inner.images))


def is_embedding(a: Structure, b: Structure, images) -> bool:
    """Definitional check, used as the independent oracle for the enumerator."""
    m = tuple(images)
    if a.signature != b.signature or len(m) != a.size:
        return False
    if len(set(m)) != len(m) or not all(0 <= x < b.size for x in m):
        return False
    for c in a.signature.constants:
        if m[a.constants[c]] != b.constants[c]:
            return False
    for name, ar in a.signature.functions:
        fa, fb = a.functions[name], b.functions[name]
        for args in itertools.product(range(a.size), repeat=ar):
            if m[fa[args]] != fb[tuple(m[x] for x in args)]:
                return False
    for name, ar in a.signature.relations:
        ra, rb = a.relations[name], b.relations[name]
        for t in itertools.product(range(a.size), repeat=ar):
            if (t in ra) != (tuple(m[x] for x in t) in rb):
                return False
    return True


def naive_embeddings(a: Structure, b: Structure) -> list[tuple]:
    return [m for m in itertools.permutations(range(b.size), a.size) if is_embedding(a, b, m)]


def _tuples_touching(p: int, arity: int):
    """All tuples over ``{0..p}`` that mention ``p``."""
    for t in itertools.product(range(p + 1), repeat=arity):
        if p in t:
            yield t


def iter_embeddings(a: Structure, b: Structure) -> Iterator[tuple]:
    """Embeddings ``a → b`` as image tuples, in lexicographic order."""
    if a.signature != b.signature:
        raise SignatureError("embeddings need a common signature")
    n, m = a.size, b.size
    if n > m:
        return
    pins: dict[int, int] = {}
    for c in a.signature.constants:
        x, y = a.constants[c], b.constants[c]
        if pins.get(x, y) != y:
            return
        pins[x] = y
    rels = [(a.relations[name], b.relations[name], ar) for name, ar in a.signature.relations]
    funcs = [(a.functions[name], b.functions[name], ar) for name, ar in a.signature.functions]
    # for each function, arguments grouped by the point they evaluate to
    preimages = []
    for fa, _, _ in funcs:
        by_value: dict[int, list] = {}
        for args, v in fa.items():
            by_value.setdefault(v, []).append(args)
        preimages.append(by_value)

    img = [None] * n
    used = [False] * m
    forced: dict[int, int] = dict(pins)

    def check(p) -> list | None:
        """Consistency of the new point; returns newly forced points or None."""
        for ra, rb, ar in rels:
            for t in _tuples_touching(p, ar):
                if (t in ra) != (tuple(img[x] for x in t) in rb):
                    return None
        new = []
        for (fa, fb, ar), pre in zip(funcs, preimages):
            for args in _tuples_touching(p, ar):
                y = fa[args]
                want = fb[tuple(img[x] for x in args)]
                if y <= p:
                    if img[y] != want:
                        return _undo(new)
                else:
                    have = forced.get(y)
                    if have is None:
                        forced[y] = want
                        new.append(y)
                    elif have != want:
                        return _undo(new)
            for args in pre.get(p, ()):
                if max(args) < p and img[p] != fb[tuple(img[x] for x in args)]:
                    return _undo(new)
        return new

    def _undo(new):
        for y in new:
            del forced[y]
        return None

    def search(p):
        if p == n:
            yield tuple(img)
            return
        cands = [forced[p]] if p in forced else range(m)
        for v in cands:
            if used[v]:
                continue
            img[p] = v
            used[v] = True
            new = check(p)
            if new is not None:
                yield from search(p + 1)
                for y in new:
                    del forced[y]
            used[v] = False
            img[p] = None

    yield from search(0)


def enumerate_embeddings(a: Structure, b: Structure) -> list[Embedding]:
    return [Embedding(a, b, m) for m in iter_embeddings(a, b)]


def is_isomorphic(a: Structure, b: Structure) -> bool:
    if a.size != b.size or a.signature != b.signature:
        return False
    return next(iter_embeddings(a, b), None) is not None


def reduct(a: Structure, names: Iterable[str]) -> Structure:
    sig = a.signature.restrict(names)
    return Structure(sig, a.size,
                     {f: a.functions[f] for f, _ in sig.functions},
                     {r: a.relations[r] for r, _ in sig.relations},
                     {c: a.constants[c] for c in sig.constants})


@dataclass
class GeneratedSubstructure:
    structure: Structure
    inclusion: Embedding
    closure: tuple
    closure_equals_input: bool


def closure(a: Structure, points: Iterable[int]) -> set[int]:
    s = set(points) | set(a.constants.values())
    changed = True
    while changed:
        changed = False
        for name, ar in a.signature.functions:
            table = a.functions[name]
            for args in itertools.product(sorted(s), repeat=ar):
                v = table[args]
                if v not in s:
                    s.add(v)
                    changed = True
    return s


def induced_substructure(a: Structure, points: Iterable[int]) -> Structure:
    """Restriction to a function-closed subset, relabelled in increasing order."""
    pts = sorted(points)
    index = {x: i for i, x in enumerate(pts)}
    funcs = {}
    for name, ar in a.signature.functions:
        table = a.functions[name]
        funcs[name] = {tuple(index[x] for x in args): index[table[args]]
                       for args in itertools.product(pts, repeat=ar)}
    rels = {name: {tuple(index[x] for x in t) for t in a.relations[name] if all(x in index for x in t)}
            for name, _ in a.signature.relations}
    consts = {c: index[v] for c, v in a.constants.items()}
    return Structure(a.signature, len(pts), funcs, rels, consts)


def generated_substructure(a: Structure, points: Iterable[int]) -> GeneratedSubstructure:
    pts = set(points)
    if not pts:
        raise ValueError("need a nonempty generating set")
    closed = closure(a, pts)
    sub = induced_substructure(a, closed)
    incl = Embedding(sub, a, tuple(sorted(closed)))
    return GeneratedSubstructure(sub, incl, tuple(sorted(closed)), closed == pts)


# ---------------------------------------------------------------------------
# chains, rigid surjections, superposition, constants


def chain(n: int) -> Structure:
    if n < 1:
        raise ValueError("chains are nonempty")
    return Structure(ORDER, n, relations={"<": {(i, j) for i in range(n) for j in range(i + 1, n)}})


def finite_set(n: int) -> Structure:
    return Structure(EMPTY_SIGNATURE, n)


def is_linear_order(s: Structure, symbol: str = "<") -> bool:
    r = s.relations[symbol]
    n = s.size
    for x in range(n):
        if (x, x) in r:
            return False
        for y in range(x + 1, n):
            if ((x, y) in r) == ((y, x) in r):
                return False
    return all((x, z) in r for (x, y) in r for (y2, z) in r if y == y2)


def _size_of(x) -> int:
    return x.size if isinstance(x, Structure) else int(x)


def is_rigid_surjection(f, m: int) -> bool:
    if set(f) != set(range(m)):
        return False
    first = {}
    for pos, v in enumerate(f):
        first.setdefault(v, pos)
    return all(first[v] < first[v + 1] for v in range(m - 1))


def rigid_surjections(a, b) -> list[tuple]:
    """Rigid surjections between chains (given as chains or sizes), lexicographic."""
    n, m = _size_of(a), _size_of(b)
    if n < m:
        return []
    out = []

    def extend(prefix, top):
        # top = largest value used so far; the next new block must be top + 1
        if len(prefix) == n:
            if top == m - 1:
                out.append(tuple(prefix))
            return
        remaining = n - len(prefix)
        for v in range(min(top + 2, m)):
            if (m - 1) - max(top, v) > remaining - 1:
                continue
            prefix.append(v)
            extend(prefix, max(top, v))
            prefix.pop()

    extend([], -1)
    return out


def compose_maps(g, f) -> tuple:
    return tuple(g[x] for x in f)


def superpose_structures(a1: Structure, a2: Structure) -> Structure:
    if a1.size != a2.size:
        raise ValueError("superposition needs equal universes")
    sig = a1.signature.union(a2.signature)
    return Structure(sig, a1.size, {**a1.functions, **a2.functions},
                     {**a1.relations, **a2.relations}, {**a1.constants, **a2.constants})


def fresh_constant_names(sig: Signature, k: int) -> tuple:
    taken, out, i = set(sig.names()), [], 1
    while len(out) < k:
        name = f"c{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return tuple(out)


def expand(a: Structure, points: Iterable[int], names: Iterable[str] | None = None) -> Structure:
    """``(A, a1, …, ak)``: interpret fresh constants by the given points."""
    pts = tuple(points)
    names = tuple(names) if names is not None else fresh_constant_names(a.signature, len(pts))
    sig = a.signature.union(Signature(constants=names))
    return Structure(sig, a.size, a.functions, a.relations,
                     {**a.constants, **dict(zip(names, pts))})


# ---------------------------------------------------------------------------
# class specifications


def _invariant(s: Structure):
    rel = []
    for name, ar in s.signature.relations:
        r = s.relations[name]
        if ar == 2:
            out = sorted(sum(1 for t in r if t[0] == x) for x in range(s.size))
            rel.append((len(r), tuple(out)))
        else:
            rel.append(len(r))
    return (s.size, tuple(rel))


class StructureClassSpec:
    """A class of finite structures, generated size by size.

    ``members(n)`` lists every member of size ``n`` up to isomorphism, possibly
    with repetitions; ``representatives(n)`` removes isomorphic duplicates and
    keeps first occurrences.
    """

    signature: Signature
    max_size: int | None = None
    hard_limit: int = 8
    label = "class"

    def members(self, n: int) -> Iterable[Structure]:
        raise NotImplementedError

    def representatives(self, n: int) -> list[Structure]:
        cache = self.__dict__.setdefault("_reps", {})
        if n not in cache:
            reps: list[Structure] = []
            buckets: dict = {}
            if self.max_size is None or n <= self.max_size:
                for s in self.members(n):
                    bucket = buckets.setdefault(_invariant(s), [])
                    if any(is_isomorphic(s, r) for r in bucket):
                        continue
                    bucket.append(s)
                    reps.append(s)
            cache[n] = reps
        return cache[n]

    def contains(self, s: Structure) -> bool:
        return s.signature == self.signature and any(
            is_isomorphic(s, r) for r in self.representatives(s.size))

    def object_name(self, size: int, index: int) -> str:
        return f"{size}.{index}"

    def describe(self) -> dict:
        return {"kind": self.label}


@dataclass(eq=False)
class ExplicitSpec(StructureClassSpec):
    structures: list
    label = "explicit"

    def __post_init__(self):
        sigs = {s.signature for s in self.structures}
        if len(sigs) > 1:
            raise SignatureError("explicit classes need a single signature")
        self.signature = sigs.pop() if sigs else EMPTY_SIGNATURE
        self.max_size = max((s.size for s in self.structures), default=0)

    def members(self, n):
        return [s for s in self.structures if s.size == n]


@dataclass(eq=False)
class ChainsSpec(StructureClassSpec):
    max_size: int | None = None
    label = "chains"
    hard_limit = 64

    def __post_init__(self):
        self.signature = ORDER

    def members(self, n):
        return [chain(n)]

    def representatives(self, n):
        if self.max_size is not None and n > self.max_size:
            return []
        return [chain(n)]

    def object_name(self, size, index):
        return str(size)

    def describe(self):
        return {"kind": "chains", "max_size": self.max_size}


@dataclass(eq=False)
class SetsSpec(StructureClassSpec):
    """All finite sets; embeddings are injections."""

    max_size: int | None = None
    label = "sets"
    hard_limit = 16

    def __post_init__(self):
        self.signature = EMPTY_SIGNATURE

    def members(self, n):
        return [finite_set(n)]

    def representatives(self, n):
        if self.max_size is not None and n > self.max_size:
            return []
        return [finite_set(n)]

    def object_name(self, size, index):
        return str(size)

    def describe(self):
        return {"kind": "sets", "max_size": self.max_size}


def _all_interpretations(sig: Signature, n: int) -> Iterator[Structure]:
    rel_choices = []
    for name, ar in sig.relations:
        cells = list(itertools.product(range(n), repeat=ar))
        rel_choices.append([{c for c, bit in zip(cells, bits) if bit}
                            for bits in itertools.product((0, 1), repeat=len(cells))])
    fun_choices = []
    for name, ar in sig.functions:
        cells = list(itertools.product(range(n), repeat=ar))
        fun_choices.append([dict(zip(cells, vals))
                            for vals in itertools.product(range(n), repeat=len(cells))])
    const_choices = [range(n)] * len(sig.constants)
    for rels in itertools.product(*rel_choices):
        for funs in itertools.product(*fun_choices):
            for consts in itertools.product(*const_choices):
                yield Structure(sig, n,
                                {name: t for (name, _), t in zip(sig.functions, funs)},
                                {name: r for (name, _), r in zip(sig.relations, rels)},
                                dict(zip(sig.constants, consts)))


@dataclass(eq=False)
class AllStructuresSpec(StructureClassSpec):
    """Every ``signature``-structure of size ``<= max_size`` passing ``predicate``."""

    signature: Signature
    max_size: int | None = 3
    predicate: Callable[[Structure], bool] | None = None
    predicate_name: str = "all"
    label = "all-structures"
    hard_limit = 4

    def members(self, n):
        for s in _all_interpretations(self.signature, n):
            if self.predicate is None or self.predicate(s):
                yield s

    def describe(self):
        return {"kind": "all-structures", "signature": self.signature.to_dict(),
                "max_size": self.max_size, "predicate": self.predicate_name}


def linear_orders_spec(max_size: int | None = None, symbol: str = "<") -> StructureClassSpec:
    """Linear orders on ``{0..n-1}``; generated directly rather than by filtering."""
    return _OrdersSpec(max_size=max_size, symbol=symbol)


@dataclass(eq=False)
class _OrdersSpec(StructureClassSpec):
    max_size: int | None = None
    symbol: str = "<"
    label = "orders"
    hard_limit = 7

    def __post_init__(self):
        self.signature = Signature.make(relations={self.symbol: 2})

    def members(self, n):
        yield Structure(self.signature, n,
                        relations={self.symbol: {(i, j) for i in range(n) for j in range(i + 1, n)}})

    def labeled(self, n):
        for perm in itertools.permutations(range(n)):
            yield Structure(self.signature, n, relations={
                self.symbol: {(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)}})

    def describe(self):
        return {"kind": "orders", "symbol": self.symbol, "max_size": self.max_size}


@dataclass(eq=False)
class SuperposeSpec(StructureClassSpec):
    first: StructureClassSpec
    second: StructureClassSpec
    label = "superpose"

    def __post_init__(self):
        self.signature = self.first.signature.union(self.second.signature)
        caps = [s.max_size for s in (self.first, self.second) if s.max_size is not None]
        self.max_size = min(caps) if caps else None
        self.hard_limit = min(self.first.hard_limit, self.second.hard_limit, 6)

    def members(self, n):
        for a1 in self.first.representatives(n):
            for a2 in self.second.representatives(n):
                seen = set()
                for perm in itertools.permutations(range(n)):
                    b2 = a2.relabel(perm)
                    if b2 in seen:
                        continue
                    seen.add(b2)
                    yield superpose_structures(a1, b2)

    def describe(self):
        return {"kind": "superpose", "first": self.first.describe(),
                "second": self.second.describe()}


@dataclass(eq=False)
class AddConstantsSpec(StructureClassSpec):
    base: StructureClassSpec
    k: int = 1
    label = "add-constants"

    def __post_init__(self):
        self.names = fresh_constant_names(self.base.signature, self.k)
        self.signature = self.base.signature.union(Signature(constants=self.names))
        self.max_size = self.base.max_size
        self.hard_limit = self.base.hard_limit

    def members(self, n):
        for a in self.base.representatives(n):
            for pts in itertools.product(range(n), repeat=self.k):
                yield expand(a, pts, self.names)

    def describe(self):
        return {"kind": "add-constants", "base": self.base.describe(), "k": self.k}


def superpose(spec1: StructureClassSpec, spec2: StructureClassSpec) -> SuperposeSpec:
    return SuperposeSpec(spec1, spec2)


def add_constants(spec: StructureClassSpec, k: int) -> AddConstantsSpec:
    return AddConstantsSpec(spec, k)


def labeled_members(spec: StructureClassSpec, n: int) -> list[Structure]:
    """Every member on ``{0..n-1}`` (not up to isomorphism), first-seen order."""
    out, seen = [], set()
    for rep in spec.representatives(n):
        for perm in itertools.permutations(range(n)):
            s = rep.relabel(perm)
            if s not in seen:
                seen.add(s)
                out.append(s)
    return out


# ---------------------------------------------------------------------------
# classes as categories


class StructureClassView(CategoryView):
    """Category of class representatives and all embeddings between them.

    Objects are ``(size, index)`` pairs; morphisms are ``(dom, cod, images)``.
    With ``max_size=None`` the object stream is unbounded (up to the class's
    hard generation limit) and the view is not finite.
    """

    mono_by_construction = True

    def __init__(self, spec: StructureClassSpec, max_size: int | None = None):
        self.spec = spec
        cap = max_size if max_size is not None else spec.max_size
        self.max_size = cap
        self.finite = cap is not None
        self._homs: dict = {}

    def structure(self, obj) -> Structure:
        size, idx = obj
        try:
            return self.spec.representatives(size)[idx]
        except (IndexError, TypeError):
            raise UnknownObject(obj) from None

    def iter_objects(self):
        top = self.max_size if self.max_size is not None else self.spec.hard_limit
        for n in range(1, top + 1):
            for idx in range(len(self.spec.representatives(n))):
                yield (n, idx)

    def objects(self):
        if not self.finite:
            raise CategoryError("unbounded class; use iter_objects")
        return list(self.iter_objects())

    def has_object(self, a):
        if not (isinstance(a, tuple) and len(a) == 2):
            return False
        size, idx = a
        if self.max_size is not None and size > self.max_size:
            return False
        return isinstance(size, int) and size >= 1 and 0 <= idx < len(self.spec.representatives(size))

    def hom(self, a, b):
        key = (a, b)
        if key not in self._homs:
            self.check_object(a)
            self.check_object(b)
            self._homs[key] = [(a, b, m) for m in iter_embeddings(self.structure(a), self.structure(b))]
        return list(self._homs[key])

    def compose(self, g, f):
        if g[0] != f[1]:
            from .core import NotComposable
            raise NotComposable("embeddings do not meet")
        return (f[0], g[1], compose_maps(g[2], f[2]))

    def identity(self, a):
        return (a, a, tuple(range(a[0])))

    def dom(self, f):
        return f[0]

    def cod(self, f):
        return f[1]

    def obj_name(self, a):
        return self.spec.object_name(*a)

    def mor_name(self, f):
        return f"{self.obj_name(f[0])}->{self.obj_name(f[1])}:{list(f[2])}"

    def find_object(self, name, limit=None):
        for a in self.iter_objects():
            if self.obj_name(a) == name:
                return a
        raise UnknownObject(name)


def as_category(spec: StructureClassSpec, size_budget: int | None = None) -> StructureClassView:
    cap = size_budget if size_budget is not None else spec.max_size
    if cap is None:
        raise CategoryError("an unbounded class needs a size budget")
    return StructureClassView(spec, cap)


class LabeledClassView(CategoryView):
    """All labelled members of a class up to ``max_size`` (not up to isomorphism).

    Unlike :class:`StructureClassView` every structure on ``{0..n-1}`` is its
    own object, which makes forgetful functors to sets reasonable.
    """

    mono_by_construction = True

    def __init__(self, spec: StructureClassSpec, max_size: int, prefix: str = "L"):
        self.spec, self.max_size, self.prefix = spec, max_size, prefix
        self._structs = []
        for n in range(1, max_size + 1):
            for idx, s in enumerate(labeled_members(spec, n)):
                self._structs.append(((n, idx), s))
        self._lookup = dict(self._structs)
        self._homs: dict = {}

    def objects(self):
        return [o for o, _ in self._structs]

    def structure(self, obj):
        return self._lookup[obj]

    def has_object(self, a):
        return a in self._lookup

    def hom(self, a, b):
        key = (a, b)
        if key not in self._homs:
            self.check_object(a)
            self.check_object(b)
            self._homs[key] = [(a, b, m) for m in iter_embeddings(self._lookup[a], self._lookup[b])]
        return list(self._homs[key])

    compose = StructureClassView.compose
    dom = StructureClassView.dom
    cod = StructureClassView.cod

    def identity(self, a):
        return (a, a, tuple(range(a[0])))

    def obj_name(self, a):
        return f"{self.prefix}{a[0]}.{a[1]}"

    def mor_name(self, f):
        return f"{self.obj_name(f[0])}->{self.obj_name(f[1])}:{list(f[2])}"


def forgetful_to_sets(view: CategoryView, sets: StructureClassView):
    """Underlying-set functor from a class view into the category of finite sets."""
    from .constructions import FunctorData

    def obj(a):
        return (a[0], 0)

    def mor(f):
        return ((f[0][0], 0), (f[1][0], 0), f[2])
    return FunctorData(view, sets, obj, mor, "underlying-set")


def underlying_set_functor(view: CategoryView):
    """``H(A) = universe of A``; ``H(f)`` is the point map."""
    from .constructions import SetValuedFunctor
    return SetValuedFunctor(view, lambda a: range(a[0]), lambda f, x: f[2][x], "underlying")


def rigid_surjection_category(max_size: int) -> FiniteCategory:
    """Finite chains ``1..max_size`` with rigid surjections as morphisms."""
    objs = [str(n) for n in range(1, max_size + 1)]
    records, maps = [], {}
    for n in range(1, max_size + 1):
        for m in range(1, n + 1):
            for f in rigid_surjections(n, m):
                mid = f"{n}->{m}:{''.join(map(str, f))}"
                records.append((mid, str(n), str(m)))
                maps[mid] = (n, m, f)
    by_map = {v: k for k, v in maps.items()}
    compose = {}
    for fid, (n, m, f) in maps.items():
        for gid, (m2, p, g) in maps.items():
            if m2 == m:
                compose[(gid, fid)] = by_map[(n, p, compose_maps(g, f))]
    identities = {str(n): f"{n}->{n}:{''.join(map(str, range(n)))}" for n in range(1, max_size + 1)}
    return FiniteCategory(objs, records, identities, compose, name=f"FinChn_rs(<= {max_size})")


# ---------------------------------------------------------------------------
# amalgams and reasonableness


@dataclass
class StrongAmalgam:
    C: Structure
    g1: tuple
    g2: tuple


def find_strong_amalgam(a: Structure, b1: Structure, b2: Structure, f1, f2,
                        spec: StructureClassSpec, budget: int = 8) -> StrongAmalgam | None:
    """Smallest class member (by size, then enumeration) giving a strong amalgam.

    Returns None when nothing is found within ``budget``.
    """
    if not a.signature.is_relational:
        raise SignatureError("strong amalgamation is searched over relational signatures")
    f1, f2 = tuple(f1), tuple(f2)
    if not (is_embedding(a, b1, f1) and is_embedding(a, b2, f2)):
        raise ValueError("f1 and f2 must be embeddings")
    lo = max(b1.size, b2.size)
    for n in range(lo, budget + 1):
        for c in spec.representatives(n):
            left = list(iter_embeddings(b1, c))
            if not left:
                continue
            for g2 in iter_embeddings(b2, c):
                target = compose_maps(g2, f2)
                for g1 in left:
                    if compose_maps(g1, f1) != target:
                        continue
                    if set(g1) & set(g2) == set(target):
                        return StrongAmalgam(c, g1, g2)
    return None


def is_reasonable_class(spec: StructureClassSpec, budget: int = 4) -> PropertyVerdict:
    """Every injection of a member into a larger finite set extends to an embedding.

    An injection ``A → [m]`` is an embedding into some member on ``[m]`` iff
    ``A`` embeds into some member of size ``m`` (relabel that member along the
    injection), so the check runs over representatives.  A refutation at size
    ``m`` is exact because generation at each size is exhaustive.
    """
    top = budget if spec.max_size is None else min(budget, spec.max_size)
    checked = 0
    for n in range(1, top + 1):
        for a in spec.representatives(n):
            for m in range(n + 1, top + 1):
                checked += 1
                if not any(next(iter_embeddings(a, b), None) is not None
                           for b in spec.representatives(m)):
                    return PropertyVerdict("no", True, counterexample=(a, m), checked=checked)
    exhaustive = spec.max_size is not None and top == spec.max_size
    return PropertyVerdict("yes", exhaustive, checked=checked,
                           note="" if exhaustive else f"checked members and targets up to size {top}")


def pinning_embedding(x: Structure, xs, b: Structure, bs) -> tuple | None:
    """The embedding ``X → B`` sending ``xs[i] ↦ bs[i]``, if any."""
    for m in iter_embeddings(x, b):
        if all(m[p] == q for p, q in zip(xs, bs)):
            return m
    return None
