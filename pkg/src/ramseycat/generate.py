"""Random small categories, functors and labelled classes for the verification sweeps.

Every category here is concrete: objects are finite sets and morphisms are
injections closed under composition, so all morphisms are mono.
"""

from __future__ import annotations

import itertools
import random

from .constructions import FunctorData, SetValuedFunctor, constant_set_functor, hom_functor
from .core import CategoryView, FiniteCategory, is_directed
from .structures import (AllStructuresSpec, LabeledClassView, SetsSpec, Signature,
                         StructureClassView, forgetful_to_sets, linear_orders_spec)


class TooManyMorphisms(ValueError):
    pass


def _map_name(dom, cod, images) -> str:
    return f"{dom}>{cod}:{''.join(map(str, images))}"


def injection_category(sizes: dict, generators: list, max_morphisms: int | None = None,
                       name: str | None = None) -> FiniteCategory:
    """Close a set of injections under composition.

    ``sizes`` maps object names to set sizes; ``generators`` holds
    ``(name | None, dom, cod, images)``.  Unnamed morphisms are named after
    their point maps and identities are ``id_X``.
    """
    objs = list(sizes)
    names: dict = {}
    order: list = []

    def add(d, c, images, label=None):
        key = (d, c, tuple(images))
        if key in names:
            return False
        if max_morphisms is not None and len(order) >= max_morphisms:
            raise TooManyMorphisms(f"more than {max_morphisms} morphisms")
        names[key] = label or _map_name(d, c, images)
        order.append(key)
        return True

    for x in objs:
        add(x, x, range(sizes[x]), f"id_{x}")
    for label, d, c, images in generators:
        images = tuple(images)
        if len(images) != sizes[d] or len(set(images)) != len(images) or \
                not all(0 <= v < sizes[c] for v in images):
            raise ValueError(f"generator {label or images} is not an injection {d} -> {c}")
        add(d, c, images, label)
    changed = True
    while changed:
        changed = False
        for f in list(order):
            for g in list(order):
                if g[0] == f[1]:
                    if add(f[0], g[1], tuple(g[2][x] for x in f[2])):
                        changed = True
    compose = {}
    for f in order:
        for g in order:
            if g[0] == f[1]:
                compose[(names[g], names[f])] = names[(f[0], g[1], tuple(g[2][x] for x in f[2]))]
    records = [(names[key], key[0], key[1]) for key in order]
    identities = {x: f"id_{x}" for x in objs}
    cat = FiniteCategory(objs, records, identities, compose, name=name)
    cat.point_maps = {names[key]: key[2] for key in order}
    cat.sizes = dict(sizes)
    return cat


def random_injection(rng: random.Random, n: int, m: int) -> tuple:
    return tuple(rng.sample(range(m), n))


def random_injection_category(rng: random.Random, max_objects: int = 4, max_size: int = 3,
                              max_morphisms: int = 12, max_generators: int = 4,
                              tries: int = 200) -> FiniteCategory:
    """Random category of injections with at most ``max_morphisms`` morphisms."""
    for _ in range(tries):
        k = rng.randint(1, max_objects)
        sizes = {f"X{i}": rng.randint(1, max_size) for i in range(k)}
        objs = list(sizes)
        gens = []
        for _ in range(rng.randint(0, max_generators)):
            d, c = rng.choice(objs), rng.choice(objs)
            if sizes[d] <= sizes[c]:
                gens.append((None, d, c, random_injection(rng, sizes[d], sizes[c])))
        try:
            return injection_category(sizes, gens, max_morphisms)
        except TooManyMorphisms:
            continue
    raise RuntimeError("could not generate a small enough category")


def random_thin_category(rng: random.Random, max_objects: int = 5, density: float = 0.4,
                         directed: bool = True) -> FiniteCategory:
    """Random preorder as a thin category (one morphism per related pair).

    With ``directed`` a top element is added whenever the random order has no
    common upper bounds, so the result is directed.
    """
    n = rng.randint(1, max_objects)
    objs = [f"P{i}" for i in range(n)]
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i < j and rng.random() < density:
                rel.add((i, j))
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    cat = _thin(objs, rel)
    if directed and is_directed(cat).answer != "yes":
        objs = objs + ["Top"]
        top = len(objs) - 1
        rel |= {(i, top) for i in range(len(objs))}
        cat = _thin(objs, rel)
    return cat


def _thin(objs, rel) -> FiniteCategory:
    name = {(i, j): (f"id_{objs[i]}" if i == j else f"{objs[i]}<{objs[j]}") for i, j in rel}
    records = [(name[(i, j)], objs[i], objs[j]) for i, j in sorted(rel)]
    compose = {(name[(b, c)], name[(a, b)]): name[(a, c)]
               for (a, b) in rel for (b2, c) in rel if b == b2}
    return FiniteCategory(objs, records, {o: f"id_{o}" for o in objs}, compose)


def finite_sets_category(n: int) -> FiniteCategory:
    """Finite sets ``1..n`` and all injections (directed, with amalgamation)."""
    sizes = {str(i): i for i in range(1, n + 1)}
    gens = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for images in itertools.permutations(range(j), i):
                gens.append((None, str(i), str(j), images))
    return injection_category(sizes, gens, name=f"FinSet_inj(<= {n})")


def two_morphism_example() -> FiniteCategory:
    """Objects A, B with ``hom(A, B) = {f, g}`` and identities elsewhere."""
    return FiniteCategory(["A", "B"], [("idA", "A", "A"), ("idB", "B", "B"), ("f", "A", "B"),
                                       ("g", "A", "B")],
                          {"A": "idA", "B": "idB"},
                          {("idA", "idA"): "idA", ("idB", "idB"): "idB",
                           ("f", "idA"): "f", ("g", "idA"): "g",
                           ("idB", "f"): "f", ("idB", "g"): "g"}, name="ex_t2")


def one_object_category() -> FiniteCategory:
    return FiniteCategory(["*"], [("id", "*", "*")], {"*": "id"}, {("id", "id"): "id"},
                          name="one_object")


def involution_example() -> FiniteCategory:
    """``Aut(A) = {id, s}`` and ``hom(A, B) = {f, f·s}``."""
    return FiniteCategory(
        ["A", "B"],
        [("idA", "A", "A"), ("s", "A", "A"), ("idB", "B", "B"), ("f", "A", "B"), ("fs", "A", "B")],
        {"A": "idA", "B": "idB"},
        {("idA", "idA"): "idA", ("idA", "s"): "s", ("s", "idA"): "s", ("s", "s"): "idA",
         ("idB", "idB"): "idB", ("f", "idA"): "f", ("fs", "idA"): "fs",
         ("f", "s"): "fs", ("fs", "s"): "f", ("idB", "f"): "f", ("idB", "fs"): "fs"},
        name="aut2")


# ---------------------------------------------------------------------------
# set-valued functors and labelled classes


def underlying_set(cat: FiniteCategory) -> SetValuedFunctor:
    """The inclusion of an injection category into Set."""
    maps = cat.point_maps
    return SetValuedFunctor(cat, lambda a: range(cat.sizes[a]), lambda f, x: maps[f][x], "U")


def random_set_functor(rng: random.Random, cat: FiniteCategory) -> SetValuedFunctor:
    choice = rng.randrange(3)
    if choice == 0 and hasattr(cat, "point_maps"):
        return underlying_set(cat)
    if choice == 1:
        return hom_functor(cat, rng.choice(cat.objects()))
    return constant_set_functor(cat, range(rng.randint(1, 2)))


LABELED_CLASSES = ("orders", "predicates", "graphs", "sets")


def labeled_class(kind: str, n: int) -> LabeledClassView:
    if kind == "orders":
        spec = linear_orders_spec(n)
    elif kind == "predicates":
        spec = AllStructuresSpec(Signature.make(relations={"P": 1}), n, predicate_name="all")
    elif kind == "graphs":
        spec = AllStructuresSpec(Signature.make(relations={"E": 2}), n, predicate=_is_graph,
                                 predicate_name="graphs")
    elif kind == "sets":
        spec = SetsSpec(n)
    else:
        raise ValueError(f"unknown labelled class {kind!r}")
    return LabeledClassView(spec, n, prefix=kind[0].upper())


def _is_graph(s) -> bool:
    e = s.relations["E"]
    return all(x != y and (y, x) in e for x, y in e)


def reasonable_functor_pair(rng: random.Random, n: int = 3):
    """Two forgetful functors from random labelled classes into finite sets."""
    target = StructureClassView(SetsSpec(n), n)
    k1, k2 = rng.choice(LABELED_CLASSES), rng.choice(LABELED_CLASSES)
    c1, c2 = labeled_class(k1, n), labeled_class(k2, n)
    return forgetful_to_sets(c1, target), forgetful_to_sets(c2, target), (k1, k2)


def random_subcategory_objects(rng: random.Random, view: CategoryView) -> list:
    objs = view.objects()
    return [o for o in objs if rng.random() < 0.6] or [objs[0]]


def constant_functor_into(source: CategoryView, target: CategoryView, obj) -> FunctorData:
    ident = target.identity(obj)
    return FunctorData(source, target, lambda a: obj, lambda f: ident, "const")


# ---------------------------------------------------------------------------
# arrow queries


def _query_views(rng: random.Random) -> CategoryView:
    from .constructions import product
    from .structures import ChainsSpec, as_category
    kind = rng.randrange(4)
    if kind == 0:
        return as_category(ChainsSpec(), 6)
    if kind == 1:
        return finite_sets_category(rng.randint(3, 4))
    if kind == 2:
        return product(as_category(ChainsSpec(), 3), finite_sets_category(2))
    return random_injection_category(rng, max_objects=4, max_size=4, max_morphisms=24)


def random_arrow_query(rng: random.Random, max_domain: int = 14, max_k: int = 4, max_t: int = 3,
                       max_colorings: int = 1 << 22, trivial_rate: float = 0.15):
    """A random ``(view, ArrowQuery)`` whose domain fits the oracle.

    Most queries are non-trivial (``B → C``, ``k > t`` and every translate set
    larger than ``t``) so that the backtracking search actually runs; a
    ``trivial_rate`` fraction is drawn without those filters.
    """
    from .engine import ArrowQuery, domain_of
    want_hard = rng.random() >= trivial_rate
    while True:
        view = _query_views(rng)
        objs = view.objects()
        for _ in range(40):
            a, b, c = rng.choice(objs), rng.choice(objs), rng.choice(objs)
            variant = rng.choice(("embedding", "structural"))
            n = len(domain_of(view, a, c, variant))
            k, t = rng.randint(1, max_k), rng.randint(1, max_t)
            if n > max_domain or k ** n > max_colorings:
                continue
            if want_hard:
                inner = len(domain_of(view, a, b, variant))
                if not view.hom(b, c) or k <= t or inner <= t or n <= t:
                    continue
            return view, ArrowQuery(a, b, c, k, t, variant)
