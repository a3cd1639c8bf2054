import itertools

import pytest
from hypothesis import given, strategies as st

from ramseycat.core import is_directed, validate_category
from ramseycat.engine import ArrowQuery, check_arrow
from ramseycat.structures import (AllStructuresSpec, ChainsSpec, ExplicitSpec, SetsSpec, Signature,
                                  SignatureError, Structure, StructureClassView, add_constants,
                                  as_category, chain, closure, enumerate_embeddings, expand,
                                  find_strong_amalgam, generated_substructure, is_embedding,
                                  is_isomorphic, is_reasonable_class, is_rigid_surjection,
                                  iter_embeddings, labeled_members, linear_orders_spec,
                                  naive_embeddings, pinning_embedding, reduct,
                                  rigid_surjection_category, rigid_surjections, superpose,
                                  superpose_structures)
from ramseycat.core import opposite
from ramseycat.core import check_mono

MIXED = Signature.make(functions={"f": 1}, relations={"R": 2, "P": 1}, constants=["c"])


@st.composite
def structures(draw, sig=MIXED, min_size=1, max_size=4):
    n = draw(st.integers(min_size, max_size))
    funcs = {name: {args: draw(st.integers(0, n - 1))
                    for args in itertools.product(range(n), repeat=ar)}
             for name, ar in sig.functions}
    rels = {name: {t for t in itertools.product(range(n), repeat=ar) if draw(st.booleans())}
            for name, ar in sig.relations}
    consts = {c: draw(st.integers(0, n - 1)) for c in sig.constants}
    return Structure(sig, n, funcs, rels, consts)


@given(structures(max_size=3), structures(max_size=4))
def test_embedding_enumerator_matches_naive_oracle(a, b):
    assert [tuple(m) for m in iter_embeddings(a, b)] == naive_embeddings(a, b)


@given(structures(sig=Signature.make(relations={"R": 2}), max_size=3),
       structures(sig=Signature.make(relations={"R": 2}), max_size=5))
def test_relational_embeddings_match_oracle(a, b):
    assert [tuple(m) for m in iter_embeddings(a, b)] == naive_embeddings(a, b)


@given(structures(), st.data())
def test_relabelling_gives_an_isomorphic_copy(a, data):
    perm = data.draw(st.permutations(range(a.size)))
    b = a.relabel(perm)
    assert is_isomorphic(a, b)
    assert is_embedding(a, b, perm)


@given(structures(max_size=3), structures(max_size=3), structures(max_size=4))
def test_embeddings_compose(a, b, c):
    for f in iter_embeddings(a, b):
        for g in iter_embeddings(b, c):
            assert is_embedding(a, c, tuple(g[x] for x in f))


def test_chain_embeddings_are_increasing_maps():
    embs = enumerate_embeddings(chain(2), chain(4))
    assert [e.images for e in embs] == list(itertools.combinations(range(4), 2))


def test_constants_and_functions_are_enforced():
    sig = Signature.make(functions={"s": 1}, constants=["z"])
    # a 2-cycle with z = 0 and a 4-cycle with z = 0
    a = Structure(sig, 2, {"s": {(0,): 1, (1,): 0}}, {}, {"z": 0})
    b = Structure(sig, 4, {"s": {(i,): (i + 1) % 4 for i in range(4)}}, {}, {"z": 0})
    c = Structure(sig, 4, {"s": {(0,): 1, (1,): 0, (2,): 3, (3,): 2}}, {}, {"z": 2})
    assert enumerate_embeddings(a, b) == []
    assert [e.images for e in enumerate_embeddings(a, c)] == [(2, 3)]


def test_structure_validation():
    with pytest.raises(SignatureError):
        Structure(Signature.make(functions={"f": 1}), 2, {"f": {(0,): 1}})
    with pytest.raises(SignatureError):
        Structure(Signature.make(relations={"R": 2}), 2, relations={"R": {(0, 5)}})
    with pytest.raises(SignatureError):
        Signature.make(relations={"R": 2}, constants=["R"])


def test_structure_json_round_trip():
    s = Structure(MIXED, 2, {"f": {(0,): 1, (1,): 1}}, {"R": {(0, 1)}, "P": {(1,)}}, {"c": 0})
    assert Structure.from_dict(s.to_dict()) == s


def test_reduct_and_generated_substructure():
    s = Structure(MIXED, 4, {"f": {(0,): 1, (1,): 2, (2,): 2, (3,): 3}},
                  {"R": {(0, 1), (3, 0)}, "P": {(2,)}}, {"c": 3})
    r = reduct(s, ["R"])
    assert r.signature.names() == ["R"] and r.relations["R"] == s.relations["R"]
    gen = generated_substructure(s, [0])
    assert gen.closure == (0, 1, 2, 3) and not gen.closure_equals_input
    assert closure(s, [2]) == {2, 3}
    small = generated_substructure(s, [2, 3])
    assert small.closure_equals_input
    assert is_embedding(small.structure, s, small.inclusion.images)


@pytest.mark.parametrize("n", range(2, 11))
def test_rigid_surjections_onto_two_chain(n):
    maps = rigid_surjections(n, 2)
    assert len(maps) == 2 ** (n - 1) - 1
    brute = [f for f in itertools.product(range(2), repeat=n) if is_rigid_surjection(f, 2)]
    assert maps == brute


def test_rigid_surjection_small_counts():
    # rigid surjections n -> m are counted by Stirling numbers of the second kind
    assert len(rigid_surjections(4, 3)) == 6
    assert len(rigid_surjections(5, 3)) == 25
    assert rigid_surjections(3, 4) == []
    assert rigid_surjections(3, 3) == [(0, 1, 2)]


def test_rigid_surjection_category():
    cat = rigid_surjection_category(4)
    rep = validate_category(cat)
    assert rep.ok
    assert not rep.mono  # surjections are not left-cancellable
    op = opposite(cat)
    assert check_mono(op)[0]
    # a trivial dual arrow query: one color always works
    assert check_arrow(op, ArrowQuery("1", "2", "3", 1, 1)).holds


def test_superposition_counts():
    spec = superpose(linear_orders_spec(None, "<"), linear_orders_spec(None, "<2"))
    assert [len(spec.representatives(n)) for n in (1, 2, 3)] == [1, 2, 6]


def test_superpose_structures_requires_equal_sizes():
    with pytest.raises(ValueError):
        superpose_structures(chain(2), chain(3))


def test_add_constants_counts():
    spec = add_constants(ChainsSpec(), 1)
    assert [len(spec.representatives(n)) for n in (1, 2, 3)] == [1, 2, 3]
    spec2 = add_constants(ChainsSpec(), 2)
    # (c1, c2) on an n-chain up to isomorphism: n^2 choices, chains are rigid
    assert [len(spec2.representatives(n)) for n in (1, 2, 3)] == [1, 4, 9]


def test_all_structures_graphs():
    graphs = AllStructuresSpec(Signature.make(relations={"E": 2}), 4,
                               lambda s: all(x != y and (y, x) in s.relations["E"]
                                             for x, y in s.relations["E"]), "graphs")
    # unlabelled graphs on 1..4 vertices
    assert [len(graphs.representatives(n)) for n in range(1, 5)] == [1, 2, 4, 11]


def test_labeled_members_of_orders():
    assert [len(labeled_members(linear_orders_spec(4), n)) for n in range(1, 5)] == [1, 2, 6, 24]


def test_class_view_objects_and_names():
    v = StructureClassView(ChainsSpec())
    assert not v.finite
    assert v.find_object("5") == (5, 0)
    assert v.obj_name((3, 0)) == "3"
    assert len(v.hom((2, 0), (4, 0))) == 6
    fin = as_category(ChainsSpec(), 5)
    assert fin.finite and len(fin.objects()) == 5
    assert validate_category_like(fin)


def validate_category_like(view):
    ok, _ = check_mono(view)
    for a in view.objects():
        for b in view.objects():
            for f in view.hom(a, b):
                assert view.compose(view.identity(b), f) == f
                assert view.compose(f, view.identity(a)) == f
    return ok


def test_sets_class_is_finset():
    v = as_category(SetsSpec(), 3)
    assert len(v.hom((2, 0), (3, 0))) == 6
    assert is_directed(v).answer == "yes"


def test_strong_amalgam_for_superposed_orders():
    sig = Signature.make(relations={"<": 2, "<2": 2})
    spec = superpose(linear_orders_spec(None, "<"), linear_orders_spec(None, "<2"))
    a = Structure(sig, 1, relations={"<": set(), "<2": set()})
    b1 = Structure(sig, 2, relations={"<": {(0, 1)}, "<2": {(0, 1)}})
    b2 = Structure(sig, 2, relations={"<": {(0, 1)}, "<2": {(1, 0)}})
    res = find_strong_amalgam(a, b1, b2, (0,), (0,), spec, budget=4)
    assert res is not None and res.C.size == 3
    assert set(res.g1) & set(res.g2) == {res.g1[0]}
    assert is_embedding(b1, res.C, res.g1) and is_embedding(b2, res.C, res.g2)


def test_strong_amalgam_needs_relational_signature():
    sig = Signature.make(constants=["c"])
    s = Structure(sig, 1, constants={"c": 0})
    with pytest.raises(SignatureError):
        find_strong_amalgam(s, s, s, (0,), (0,), ExplicitSpec([s]))


def test_reasonable_classes():
    assert is_reasonable_class(ChainsSpec(), 4).answer == "yes"
    # a class without 2-element members is not reasonable
    bad = ExplicitSpec([chain(1), chain(3)])
    v = is_reasonable_class(bad, 3)
    assert v.answer == "no" and v.exhaustive


def test_expand_and_pinning():
    c = chain(3)
    e = expand(c, [1])
    assert e.constants == {"c1": 1}
    x = generated_substructure(c, [1]).structure
    assert pinning_embedding(x, [0], c, [2]) == (2,)


def test_loop_does_not_embed_into_two_cycle():
    sig = Signature.make(functions={"f": 1})
    loop = Structure(sig, 1, {"f": {(0,): 0}})
    cycle = Structure(sig, 2, {"f": {(0,): 1, (1,): 0}})
    assert enumerate_embeddings(loop, cycle) == []
    assert naive_embeddings(loop, cycle) == []


def test_pointed_singleton_embeds_once():
    sig = Signature.make(relations={"<": 2}, constants=["c"])
    one = Structure(sig, 1, relations={"<": set()}, constants={"c": 0})
    big = Structure(sig, 3, relations={"<": {(0, 1), (0, 2), (1, 2)}}, constants={"c": 1})
    assert [e.images for e in enumerate_embeddings(one, big)] == [(1,)]


def test_chain_strong_amalgam_and_identities():
    spec = ChainsSpec()
    res = find_strong_amalgam(chain(1), chain(2), chain(2), (0,), (1,), spec, budget=4)
    assert res is not None and res.C.size == 3
    assert len(set(res.g1) | set(res.g2)) == 3
    same = find_strong_amalgam(chain(2), chain(2), chain(2), (0, 1), (0, 1), spec, budget=4)
    assert same is not None and same.C.size == 2


def test_even_orders_are_not_reasonable():
    evens = ExplicitSpec([chain(2), chain(4)])
    v = is_reasonable_class(evens, 4)
    assert v.answer == "no"
    assert is_reasonable_class(SetsSpec(), 4).answer == "yes"


def test_superposed_embeddings_are_intersections():
    spec = superpose(linear_orders_spec(None, "<"), linear_orders_spec(None, "<2"))
    small, large = spec.representatives(2), spec.representatives(3)
    for a in small:
        for b in large:
            both = set(naive_embeddings(a, b))
            r1 = set(naive_embeddings(reduct(a, ["<"]), reduct(b, ["<"])))
            r2 = set(naive_embeddings(reduct(a, ["<2"]), reduct(b, ["<2"])))
            assert both == r1 & r2
            assert len(both) <= min(len(r1), len(r2))


def test_rigid_surjections_compose_up_to_six():
    from ramseycat.structures import compose_maps
    for n in range(1, 7):
        assert rigid_surjections(n, n) == [tuple(range(n))]
        for m in range(1, n + 1):
            for p in range(1, m + 1):
                for f in rigid_surjections(n, m):
                    for g in rigid_surjections(m, p):
                        assert is_rigid_surjection(compose_maps(g, f), p)


def test_generated_substructure_is_least_closed_superset():
    sig = Signature.make(functions={"f": 1})
    for images in itertools.product(range(4), repeat=4):
        s = Structure(sig, 4, {"f": {(i,): images[i] for i in range(4)}})
        for r in range(1, 5):
            for seed in itertools.combinations(range(4), r):
                closed = [set(x) for k in range(1, 5) for x in itertools.combinations(range(4), k)
                          if set(seed) <= set(x) and all(images[i] in x for i in x)]
                assert set(closure(s, seed)) == min(closed, key=len)
