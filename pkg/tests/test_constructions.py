import pytest

from ramseycat.constructions import (BinaryDiagram, Bottom, Cocone, SetValuedFunctor,
                                     check_functor_laws, complete_two_top_diagram,
                                     connected_components, constant_set_functor, diagonal_functor,
                                     find_compatible_cocone, forgetful_functor, full_subcategory,
                                     functor_props, grothendieck, has_binary_amalgamation,
                                     hom_functor, identity_functor, inclusion_functor, is_cofinal,
                                     is_isomorphism, lift_cocone_to_grothendieck,
                                     maximal_transport_diagram, product, projection_functor,
                                     pullback, slice_category, slice_to_grothendieck)
from ramseycat.core import CategoryError, aut, check_mono, is_directed, validate_category
from ramseycat.generate import (finite_sets_category, involution_example, labeled_class,
                                random_injection_category, random_set_functor, underlying_set)
from ramseycat.structures import ChainsSpec, SetsSpec, as_category
from ramseycat.structures import forgetful_to_sets


def _laws(view):
    objs = view.objects()
    for a in objs:
        for b in objs:
            for f in view.hom(a, b):
                assert view.dom(f) == a and view.cod(f) == b
                assert view.compose(view.identity(b), f) == f == view.compose(f, view.identity(a))
                for c in objs:
                    for g in view.hom(b, c):
                        gf = view.compose(g, f)
                        assert gf in view.hom(a, c)
                        for d in objs:
                            for h in view.hom(c, d):
                                assert view.compose(h, gf) == view.compose(view.compose(h, g), f)


# -- products


def test_product_hom_sets_are_products(ex_t2, aut2):
    p = product(ex_t2, aut2)
    _laws(p)
    assert check_mono(p)[0]
    assert len(p.objects()) == 4
    assert len(p.hom(("A", "A"), ("B", "B"))) == 2 * 2
    assert len(aut(p, ("A", "A"))) == 2


def test_product_projections_and_diagonal(ex_t2):
    p = product(ex_t2, ex_t2)
    for i in (0, 1):
        assert check_functor_laws(projection_functor(p, i))[0]
    diag = diagonal_functor(ex_t2)
    assert check_functor_laws(diag)[0]
    props = functor_props(diag)
    assert props.is_faithful and not props.is_full


def test_product_of_unbounded_is_rejected():
    from ramseycat.structures import StructureClassView
    with pytest.raises(CategoryError):
        product(StructureClassView(ChainsSpec()), StructureClassView(ChainsSpec()))


# -- subcategories and functor flags


def test_cofinality():
    fs = finite_sets_category(3)
    assert is_cofinal(fs, ["3"]).answer == "yes"
    v = is_cofinal(fs, ["1", "2"])
    assert v.answer == "no" and v.counterexample == "3"
    sub = full_subcategory(fs, ["2", "3"])
    _laws(sub)
    assert functor_props(inclusion_functor(sub, fs)).is_full


def test_functor_props_identity_and_forgetful():
    cat = involution_example()
    props = functor_props(identity_functor(cat))
    assert props.is_functor and props.is_full and props.is_faithful
    assert props.preserves_aut_groups and props.is_reasonable and props.image_is_cofinal

    chains = as_category(ChainsSpec(), 3)
    sets = as_category(SetsSpec(), 3)
    u = forgetful_to_sets(chains, sets)
    p = functor_props(u)
    assert p.is_functor and p.is_faithful
    assert not p.is_full  # sets have more maps than chains
    assert not p.preserves_aut_groups
    # the swap of 2 has no lift when only one chain per size is present
    assert p.is_reasonable is False
    labeled = functor_props(forgetful_to_sets(labeled_class("orders", 3), sets))
    assert labeled.is_reasonable is True and labeled.image_is_cofinal is True


def test_functor_law_violation_reported(ex_t2):
    from ramseycat.constructions import FunctorData
    # swaps f and g but breaks identities
    bad = FunctorData(ex_t2, ex_t2, lambda a: a, lambda f: {"idA": "idB"}.get(f, f))
    ok, cex = check_functor_laws(bad)
    assert not ok and cex[0] == "identity"
    assert functor_props(bad).is_functor is False


def test_pullback_of_reasonable_functors():
    orders = labeled_class("orders", 2)
    graphs = labeled_class("graphs", 2)
    sets = as_category(SetsSpec(), 2)
    F1, F2 = forgetful_to_sets(orders, sets), forgetful_to_sets(graphs, sets)
    pb = pullback(F1, F2)
    assert all(F1.obj(x) == F2.obj(y) for x, y in pb.objects())
    assert is_cofinal(pb.product, pb.objects()).answer == "yes"


# -- Grothendieck and slices


def test_grothendieck_basic(ex_t2):
    fs = finite_sets_category(2)
    H = underlying_set(fs)
    assert H.validate()[0]
    g = grothendieck(fs, H)
    assert len(g.objects()) == 1 + 2
    _laws(g)
    assert check_mono(g)[0]
    assert check_functor_laws(forgetful_functor(g))[0]
    # a constant functor gives copies of the base
    k = grothendieck(ex_t2, constant_set_functor(ex_t2, ["p", "q"]))
    assert len(k.objects()) == 2 * len(ex_t2.objects())


def test_set_functor_validation_catches_errors(ex_t2):
    bad = SetValuedFunctor(ex_t2, {"A": [0], "B": [0, 1]}, lambda f, x: 1 if f == "f" else x)
    assert bad.validate() == (True, None)
    worse = SetValuedFunctor(ex_t2, {"A": [0], "B": [0]}, lambda f, x: 7 if f == "g" else x)
    ok, cex = worse.validate()
    assert not ok and cex[0] == "range"


def test_random_set_functors_are_functors(rng):
    for _ in range(20):
        c = random_injection_category(rng)
        assert random_set_functor(rng, c).validate()[0]


def test_slice_is_isomorphic_to_hom_grothendieck():
    for c in (finite_sets_category(3), involution_example()):
        for x in c.objects():
            s = slice_category(c, x)
            _laws(s)
            g = grothendieck(c, hom_functor(c, x))
            assert is_isomorphism(slice_to_grothendieck(s, g))


def test_is_isomorphism_rejects_non_bijections(ex_t2):
    from ramseycat.constructions import FunctorData
    one = finite_sets_category(1)
    collapse = FunctorData(ex_t2, ex_t2, lambda a: "A", lambda f: "idA")
    assert not is_isomorphism(collapse)
    assert is_isomorphism(identity_functor(one))


# -- binary diagrams


def test_diagram_validation(ex_t2):
    with pytest.raises(CategoryError):
        BinaryDiagram("A", "B", 1, [Bottom("f", 0, "g", 0)]).validate(ex_t2)
    with pytest.raises(CategoryError):
        BinaryDiagram("A", "B", 2, [Bottom("f", 0, "g", 2)]).validate(ex_t2)
    with pytest.raises(CategoryError):
        BinaryDiagram("A", "B", 2, [Bottom("idA", 0, "g", 1)]).validate(ex_t2)
    BinaryDiagram("A", "B", 2, [Bottom("f", 0, "g", 1)]).validate(ex_t2)


def test_connected_components():
    d = BinaryDiagram("A", "B", 5, [Bottom("u", 3, "v", 1), Bottom("u", 4, "v", 3)])
    assert connected_components(d) == [[0], [1, 3, 4], [2]]


def test_complete_diagram_refuted_by_cancellation(ex_t2):
    d = complete_two_top_diagram(ex_t2, "A", "B")
    assert len(d.bottoms) == 4
    assert find_compatible_cocone(d, ex_t2).status == "refuted"
    v = has_binary_amalgamation(ex_t2)
    assert v.answer == "no" and v.exhaustive


def test_binary_amalgamation_on_chains():
    # |hom(1, 2)| = 2 in chains, so the complete two-top diagram has no cocone
    chains = as_category(ChainsSpec(), 4)
    assert has_binary_amalgamation(chains).answer == "no"
    assert has_binary_amalgamation(finite_sets_category(1)).answer == "yes"


def test_cocone_found_for_simple_diagram():
    fs = finite_sets_category(3)
    f = fs.hom("1", "2")[0]
    d = BinaryDiagram("1", "2", 2, [Bottom(f, 0, f, 1)])
    res = find_compatible_cocone(d, fs)
    assert res and res.cocone.is_compatible(d, fs)
    assert not Cocone(res.cocone.tip, res.cocone.legs[:1]).is_compatible(d, fs)


def test_transport_diagram_and_cocone_lift(rng):
    lifted_any = False
    for _ in range(40):
        c = random_injection_category(rng)
        if is_directed(c).answer != "yes":
            continue
        H = random_set_functor(rng, c)
        g = grothendieck(c, H)
        if not g.objects() or is_directed(g).answer != "yes":
            continue
        G = forgetful_functor(g)
        for a in g.objects():
            for b in g.objects():
                if not g.hom(a, b):
                    continue
                for tip in c.objects():
                    d, cocone = maximal_transport_diagram(G, a, b, tip)
                    d.validate(g)
                    lifted, info = lift_cocone_to_grothendieck(g, d, cocone)
                    assert info["invariant_holds"]
                    assert lifted is not None and lifted.is_compatible(d, g)
                    lifted_any = lifted_any or d.tops > 1
    assert lifted_any


def test_subcategory_views_validate():
    fs = finite_sets_category(3)
    sub = full_subcategory(fs, ["1", "3"])
    from ramseycat.core import materialize
    assert validate_category(materialize(sub)).ok
