import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ramseycat.constructions import product
from ramseycat.core import INF, CategoryError, ExtNat, NotMono, aut, is_rigid
from ramseycat.engine import (ArrowQuery, ArrowVerdict, DegreeReport, OracleCapExceeded,
                              build_instance, check_arrow, check_arrow_oracle, degree_bounds,
                              degree_exact_finite, domain_of, recheck_arrow, recheck_degree,
                              validate_bad_coloring)
from ramseycat.generate import (finite_sets_category, involution_example, one_object_category,
                                random_arrow_query, random_injection_category)
from ramseycat.structures import ChainsSpec, StructureClassView, as_category, rigid_surjection_category

CHAINS = StructureClassView(ChainsSpec())


def ch(n):
    return (n, 0)


# -- spec examples


def test_chain_ramsey_instance():
    holds = check_arrow(CHAINS, ArrowQuery(ch(2), ch(3), ch(6), 2, 1))
    assert holds.holds and holds.reason == "exhausted"
    fails = check_arrow(CHAINS, ArrowQuery(ch(2), ch(3), ch(5), 2, 1))
    assert not fails.holds and len(fails.coloring) == 10
    assert validate_bad_coloring(CHAINS, ArrowQuery(ch(2), ch(3), ch(5), 2, 1), fails.coloring)
    for c, expect in ((6, True), (5, False)):
        assert check_arrow_oracle(CHAINS, ArrowQuery(ch(2), ch(3), ch(c), 2, 1)).holds is expect


def test_k5_has_exactly_twelve_bad_colorings():
    # brute force over all 2^10 edge colorings of K5, checked definitionally
    q = ArrowQuery(ch(2), ch(3), ch(5), 2, 1)
    bad = sum(validate_bad_coloring(CHAINS, q, list(col))
              for col in itertools.product(range(2), repeat=10))
    assert bad == 12


def test_trivial_arrows():
    q = ArrowQuery(ch(2), ch(4), ch(4), 3, 6)
    v = check_arrow(CHAINS, q)
    assert v.holds and v.reason == "witness" and v.witness is not None
    one = check_arrow(CHAINS, ArrowQuery(ch(2), ch(3), ch(7), 1, 1))
    assert one.holds


def test_no_morphism_b_to_c_fails(ex_t2):
    v = check_arrow(ex_t2, ArrowQuery("A", "B", "A", 2, 1))
    assert not v.holds and v.reason == "no-w"
    assert v.coloring == [0]
    assert check_arrow_oracle(ex_t2, ArrowQuery("A", "B", "A", 2, 1)).reason == "no-w"
    assert recheck_arrow(ex_t2, v)[0]


def test_non_mono_rejected():
    with pytest.raises(NotMono):
        check_arrow(rigid_surjection_category(3), ArrowQuery("3", "2", "1", 2, 1))


def test_query_validation():
    with pytest.raises(ValueError):
        ArrowQuery("A", "B", "C", 0, 1)
    with pytest.raises(ValueError):
        ArrowQuery("A", "B", "C", 1, 1, "dual")


def test_oracle_caps():
    with pytest.raises(OracleCapExceeded):
        check_arrow_oracle(CHAINS, ArrowQuery(ch(2), ch(3), ch(7), 2, 1))
    with pytest.raises(OracleCapExceeded):
        check_arrow_oracle(CHAINS, ArrowQuery(ch(2), ch(3), ch(6), 4, 1))


def test_structural_variant_on_involution(aut2):
    inst = build_instance(aut2, ArrowQuery("A", "B", "B", 2, 1, "structural"))
    assert len(inst.domain) == 1
    assert check_arrow(aut2, ArrowQuery("A", "B", "B", 2, 1, "structural")).holds
    assert not check_arrow(aut2, ArrowQuery("A", "B", "B", 2, 1)).holds


# -- oracle agreement and invariants


def _random_query(rng: random.Random):
    kind = rng.randrange(3)
    if kind == 0:
        view = as_category(ChainsSpec(), 5)
    elif kind == 1:
        view = finite_sets_category(rng.randint(2, 3))
    else:
        view = random_injection_category(rng)
    objs = view.objects()
    a, b, c = rng.choice(objs), rng.choice(objs), rng.choice(objs)
    variant = rng.choice(("embedding", "structural"))
    return view, ArrowQuery(a, b, c, rng.randint(1, 4), rng.randint(1, 3), variant)


@settings(max_examples=150)
@given(st.integers(0, 2 ** 32))
def test_engine_agrees_with_oracle(seed):
    view, q = random_arrow_query(random.Random(seed))
    try:
        o = check_arrow_oracle(view, q)
    except OracleCapExceeded:
        return
    for sym in (False, True):
        v = check_arrow(view, q, symmetry=sym)
        assert v.holds == o.holds
        if not v.holds:
            assert validate_bad_coloring(view, q, v.coloring)
        assert recheck_arrow(view, v)[0]


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32))
def test_color_count_reduction(seed):
    rng = random.Random(seed)
    view, q = _random_query(rng)
    n = len(domain_of(view, q.A, q.C, q.variant))
    if n > 8:
        return
    base = check_arrow(view, q).holds
    for k in range(1, n + 3):
        qk = ArrowQuery(q.A, q.B, q.C, k, q.t, q.variant)
        reduced = ArrowQuery(q.A, q.B, q.C, max(1, min(k, n)), q.t, q.variant)
        try:
            o = check_arrow_oracle(view, qk)
        except OracleCapExceeded:
            continue
        assert o.holds == check_arrow(view, reduced).holds == check_arrow(view, qk).holds
    assert base == check_arrow(view, q).holds


@settings(max_examples=80)
@given(st.integers(0, 2 ** 32))
def test_parameter_monotonicity(seed):
    view, q = random_arrow_query(random.Random(seed), max_k=3, max_colorings=1 << 16)
    if check_arrow(view, q).holds:
        if q.k > 1:
            assert check_arrow(view, ArrowQuery(q.A, q.B, q.C, q.k - 1, q.t, q.variant)).holds
        assert check_arrow(view, ArrowQuery(q.A, q.B, q.C, q.k, q.t + 1, q.variant)).holds


def test_symmetry_mode_on_finite_sets():
    fs = finite_sets_category(4)
    for b in ("2", "3"):
        for k in (2, 3):
            q = ArrowQuery("1", b, "4", k, 1)
            plain, sym = check_arrow(fs, q), check_arrow(fs, q, symmetry=True)
            assert plain.holds == sym.holds == check_arrow_oracle(fs, q).holds
            assert sym.nodes <= plain.nodes or plain.reason != "exhausted"


def test_rigid_categories_agree_across_variants():
    chains = as_category(ChainsSpec(), 4)
    for a in chains.objects():
        assert is_rigid(chains, a)
        for b in chains.objects():
            for c in chains.objects():
                e = check_arrow(chains, ArrowQuery(a, b, c, 2, 1)).holds
                s = check_arrow(chains, ArrowQuery(a, b, c, 2, 1, "structural")).holds
                assert e == s


def test_verdict_json_round_trip():
    v = check_arrow(CHAINS, ArrowQuery(ch(2), ch(3), ch(5), 2, 1))
    again = ArrowVerdict.from_dict(json.loads(json.dumps(v.to_dict())))
    assert again == v
    assert again.summary().startswith("5 → (3)^2_{2,1}: fails")
    assert recheck_arrow(CHAINS, again)[0]
    tampered = ArrowVerdict.from_dict(v.to_dict())
    tampered.coloring = [0] * 10
    assert not recheck_arrow(CHAINS, tampered)[0]


# -- degrees


def _closed_form(view, a, variant):
    # in a finite mono category the degree is the largest domain size over all objects
    return ExtNat(max(1, max(len(domain_of(view, a, b, variant)) for b in view.objects())))


def test_degree_examples(ex_t2, aut2):
    one = one_object_category()
    assert degree_exact_finite(one, "*").value == ExtNat(1)
    r = degree_exact_finite(ex_t2, "A")
    assert r.value == ExtNat(2) and r.status == "exact"
    assert r.lower_certificate["threshold"] == 1
    assert recheck_degree(ex_t2, r)[0]
    assert degree_exact_finite(aut2, "A").value == ExtNat(2)
    assert degree_exact_finite(aut2, "A", "structural").value == ExtNat(1)


def test_degree_on_finite_chain_truncation():
    chains = as_category(ChainsSpec(), 5)
    r = degree_exact_finite(chains, (2, 0))
    assert r.value is not None and r.value != INF
    assert recheck_degree(chains, r)[0]


def test_degree_matches_closed_form_oracle(rng):
    for _ in range(25):
        cat = random_injection_category(rng)
        for a in cat.objects():
            for variant in ("embedding", "structural"):
                r = degree_exact_finite(cat, a, variant)
                assert r.value == _closed_form(cat, a, variant)
                ok, msg = recheck_degree(cat, r)
                assert ok, msg


def test_degree_symmetry_cross_check():
    fs = finite_sets_category(3)
    for a in fs.objects():
        assert degree_exact_finite(fs, a).value == degree_exact_finite(fs, a, symmetry=True).value
        assert degree_exact_finite(fs, a).value == ExtNat(len(aut(fs, a))) * \
            degree_exact_finite(fs, a, "structural").value


def test_degree_needs_finite_view():
    with pytest.raises(CategoryError):
        degree_exact_finite(CHAINS, ch(1))


def test_degree_report_round_trip(ex_t2):
    r = degree_exact_finite(product(ex_t2, ex_t2), ("A", "A"))
    assert r.value == ExtNat(4)
    again = DegreeReport.from_dict(json.loads(json.dumps(r.to_dict())))
    assert again == r
    assert again.summary() == "t((A,A)) = 4"


def test_degree_bounds_chains_point():
    r = degree_bounds(CHAINS, ch(1), max_k=3, max_b=4, max_c=12)
    assert r.status == "budgeted" and r.value is None
    assert r.upper == ExtNat(1) and r.lower == ExtNat(1)
    for w in r.upper_witnesses:
        b = int(w["B"])
        assert int(w["C"]) == w["k"] * (b - 1) + 1


def test_degree_bounds_pairs():
    r = degree_bounds(CHAINS, ch(2), max_k=2, max_b=3, max_c=6)
    wit = {(w["k"], w["B"]): w["C"] for w in r.upper_witnesses}
    assert wit[(2, "3")] == "6"
    assert r.upper == ExtNat(1)
    assert "budgeted evidence" in r.summary()


def test_degree_bounds_exhausted_budget_is_not_certified():
    r = degree_bounds(CHAINS, ch(2), max_k=2, max_b=3, max_c=5)
    assert r.upper >= ExtNat(2) and r.status == "budgeted"
    assert not r.certified_lower and "non-certified" in r.summary()
    assert recheck_degree(CHAINS, r)[0]


def test_involution_example_matches(aut2):
    assert aut2 == involution_example()
