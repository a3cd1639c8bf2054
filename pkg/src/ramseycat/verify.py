"""Brute-force verification of the degree theorems on small instances.

Each suite returns a :class:`SuiteReport`; a violation is a concrete
counterexample, never a budget artefact.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .constructions import (FunctorData, forgetful_functor,
                            full_subcategory, functor_props, grothendieck, inclusion_functor,
                            is_cofinal, is_isomorphism, lift_cocone_to_grothendieck,
                            maximal_transport_diagram, image_diagram_is_compatible, product,
                            pullback, slice_category, slice_to_grothendieck, hom_functor)
from .core import (CategoryView, ExtNat, aut, has_amalgamation, is_directed)
from .engine import ArrowQuery, check_arrow, degree_exact_finite
from . import generate


@dataclass
class SuiteReport:
    suite: str
    ok: bool
    checks: int = 0
    violations: list = field(default_factory=list)
    details: list = field(default_factory=list)
    summary: str = ""

    def to_dict(self) -> dict:
        return {"suite": self.suite, "ok": self.ok, "checks": self.checks,
                "violations": list(self.violations), "details": list(self.details),
                "summary": self.summary}

    @classmethod
    def from_dict(cls, data: dict) -> SuiteReport:
        return cls(data["suite"], data["ok"], data.get("checks", 0), list(data.get("violations", [])),
                   list(data.get("details", [])), data.get("summary", ""))


def worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, explicit)
    return max(1, int(os.environ.get("RAMSEYCAT_WORKERS", "1")))


def run_ordered(fn: Callable, tasks: list, workers: int = 1) -> list:
    """``[fn(t) for t in tasks]``, optionally across processes; order is kept."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def merge(suite: str, parts: list[SuiteReport], label: str = "instances") -> SuiteReport:
    violations = [v for p in parts for v in p.violations]
    details = [d for p in parts for d in p.details]
    checks = sum(p.checks for p in parts)
    ok = all(p.ok for p in parts)
    return SuiteReport(suite, ok, checks, violations, details,
                       f"{len(parts)} {label}, {checks} checks, {len(violations)} violations")


def _deg(view, a, variant) -> ExtNat:
    return degree_exact_finite(view, a, variant).value


# ---------------------------------------------------------------------------
# product multiplicativity and the automorphism factor


def verify_multiplicativity(c1: CategoryView, c2: CategoryView, a1, a2) -> SuiteReport:
    prod = product(c1, c2)
    details, violations = [], []
    lines = []
    for variant in ("embedding", "structural"):
        d1, d2 = _deg(c1, a1, variant), _deg(c2, a2, variant)
        dp = _deg(prod, (a1, a2), variant)
        ok = dp == d1 * d2
        entry = {"variant": variant, "A1": c1.obj_name(a1), "A2": c2.obj_name(a2),
                 "t1": d1.to_json(), "t2": d2.to_json(), "product": dp.to_json(), "ok": ok}
        details.append(entry)
        if not ok:
            violations.append(entry)
        sym = "t" if variant == "embedding" else "t~"
        lines.append(f"{sym}: {dp} {'=' if ok else '!='} {d1}·{d2}")
    n1, n2, n_p = len(aut(c1, a1)), len(aut(c2, a2)), len(aut(prod, (a1, a2)))
    aut_ok = n_p == n1 * n2
    details.append({"aut": [n1, n2, n_p], "ok": aut_ok})
    if not aut_ok:
        violations.append({"aut": [n1, n2, n_p]})
    lines.append(f"|Aut|: {n_p} {'=' if aut_ok else '!='} {n1}·{n2}")
    return SuiteReport("multiplicativity", not violations, 3, violations, details, "; ".join(lines))


def verify_aut_factor(view: CategoryView, a) -> SuiteReport:
    t = _deg(view, a, "embedding")
    ts = _deg(view, a, "structural")
    n = len(aut(view, a))
    ok = t == ExtNat(n) * ts
    entry = {"A": view.obj_name(a), "t": t.to_json(), "t_structural": ts.to_json(), "aut": n, "ok": ok}
    return SuiteReport("aut-factor", ok, 1, [] if ok else [entry], [entry],
                       f"{t} {'=' if ok else '!='} {n}·{ts}")


def multiplicativity_instance(seed: int) -> SuiteReport:
    """One random pair of small injection categories, every pair of objects."""
    rng = random.Random(seed)
    c1 = generate.random_injection_category(rng)
    c2 = generate.random_injection_category(rng)
    parts = [verify_multiplicativity(c1, c2, a1, a2) for a1 in c1.objects() for a2 in c2.objects()]
    rep = merge("multiplicativity", parts, "object pairs")
    rep.details = [{"seed": seed, "objects": [len(c1.objects()), len(c2.objects())],
                    "morphisms": [len(c1.morphisms()), len(c2.morphisms())]}] + rep.details
    return rep


def aut_factor_instance(seed: int) -> SuiteReport:
    rng = random.Random(seed)
    c = generate.random_injection_category(rng)
    return merge("aut-factor", [verify_aut_factor(c, a) for a in c.objects()], "objects")


# ---------------------------------------------------------------------------
# monotonicity


def verify_monotonicity(view: CategoryView, samples: int, rng: random.Random,
                        max_k: int = 3, max_t: int = 2) -> SuiteReport:
    """Sample arrows and re-query the consequences the monotonicity lemma predicts.

    Clauses: (a) structural and (b) embedding shrinking of B along D → B;
    (c) structural and (d) embedding enlarging of C along C → E; plus the
    parameter clauses (k-1, t) and (k, t+1).
    """
    objs = view.objects()
    violations, details, checks = [], [], 0
    names = view.obj_name
    clause_counts = {c: 0 for c in ("a", "b", "c", "d", "k", "t")}
    for _ in range(samples):
        variant = rng.choice(("embedding", "structural"))
        a = rng.choice(objs)
        b = rng.choice([x for x in objs if view.hom(a, x)])
        c = rng.choice([x for x in objs if view.hom(b, x)])
        k, t = rng.randint(1, max_k), rng.randint(1, max_t)
        base = check_arrow(view, ArrowQuery(a, b, c, k, t, variant))
        entry = {"variant": variant, "A": names(a), "B": names(b), "C": names(c), "k": k, "t": t,
                 "holds": base.holds}
        details.append(entry)
        if not base.holds:
            continue
        consequences = []
        ds = [x for x in objs if view.hom(x, b)]
        if ds:
            consequences.append(("a" if variant == "structural" else "b",
                                 ArrowQuery(a, rng.choice(ds), c, k, t, variant)))
        es = [x for x in objs if view.hom(c, x)]
        consequences.append(("c" if variant == "structural" else "d",
                             ArrowQuery(a, b, rng.choice(es), k, t, variant)))
        if k > 1:
            consequences.append(("k", ArrowQuery(a, b, c, k - 1, t, variant)))
        consequences.append(("t", ArrowQuery(a, b, c, k, t + 1, variant)))
        for clause, q in consequences:
            checks += 1
            clause_counts[clause] += 1
            if not check_arrow(view, q).holds:
                violations.append({"clause": clause, "premise": entry, "consequence": q.names(view)})
    summary = f"{samples} samples, {checks} implications, {len(violations)} violations; " + \
        ", ".join(f"{c}:{n}" for c, n in clause_counts.items())
    return SuiteReport("monotonicity", not violations, checks, violations, details, summary)


# ---------------------------------------------------------------------------
# functor transport


def verify_functor_transport(F: FunctorData, rng: random.Random | None = None,
                             samples: int = 20, max_k: int = 3, max_t: int = 2) -> SuiteReport:
    """Check every statement whose hypotheses the functor's flags satisfy.

    Full: arrows go forward.  Full and faithful: arrows are equivalent.
    Full with cofinal image: degrees do not increase.  Full, faithful, cofinal:
    degrees are equal.  Aut-preserving versions cover the structural variant.
    """
    rng = rng or random.Random(0)
    S, T = F.source, F.target
    props = functor_props(F)
    violations, details, checks = [], [{"props": props.to_dict()}], 0
    objs = S.objects()
    if props.is_full:
        variants = ["embedding"] + (["structural"] if props.preserves_aut_groups else [])
        for _ in range(samples):
            variant = rng.choice(variants)
            a = rng.choice(objs)
            b = rng.choice([x for x in objs if S.hom(a, x)])
            c = rng.choice([x for x in objs if S.hom(b, x)])
            k, t = rng.randint(1, max_k), rng.randint(1, max_t)
            src = check_arrow(S, ArrowQuery(a, b, c, k, t, variant)).holds
            tgt = check_arrow(T, ArrowQuery(F.obj(a), F.obj(b), F.obj(c), k, t, variant)).holds
            checks += 1
            bad = (src and not tgt) or (props.is_faithful and tgt and not src)
            if bad:
                violations.append({"kind": "arrow", "variant": variant, "A": S.obj_name(a),
                                   "B": S.obj_name(b), "C": S.obj_name(c), "k": k, "t": t,
                                   "source": src, "target": tgt})
        if props.image_is_cofinal:
            for a in objs:
                for variant in variants:
                    ds, dt = _deg(S, a, variant), _deg(T, F.obj(a), variant)
                    checks += 1
                    ok = dt == ds if props.is_faithful else dt <= ds
                    details.append({"A": S.obj_name(a), "variant": variant, "source": ds.to_json(),
                                    "target": dt.to_json(), "ok": ok})
                    if not ok:
                        violations.append({"kind": "degree", "A": S.obj_name(a), "variant": variant,
                                           "source": ds.to_json(), "target": dt.to_json()})
    summary = f"{checks} checks, {len(violations)} violations (full={props.is_full}, " \
              f"faithful={props.is_faithful}, cofinal={props.image_is_cofinal})"
    return SuiteReport("transport", not violations, checks, violations, details, summary)


def verify_cofinal_subcategory(view: CategoryView, sub_objects: list) -> SuiteReport:
    """Degrees of a full cofinal subcategory agree with the ambient ones."""
    sub = full_subcategory(view, sub_objects)
    if is_cofinal(view, sub_objects).answer != "yes":
        return SuiteReport("cofinal", True, 0, summary="not cofinal; nothing to check")
    violations, details = [], []
    for a in sub_objects:
        for variant in ("embedding", "structural"):
            ds, dc = _deg(sub, a, variant), _deg(view, a, variant)
            entry = {"A": view.obj_name(a), "variant": variant, "sub": ds.to_json(),
                     "ambient": dc.to_json()}
            details.append(entry)
            if ds != dc:
                violations.append(entry)
    return SuiteReport("cofinal", not violations, len(details), violations, details,
                       f"{len(details)} degree pairs, {len(violations)} violations")


def cofinal_instance(seed: int) -> SuiteReport:
    rng = random.Random(seed)
    c = generate.random_injection_category(rng)
    objs = c.objects()
    sub = [o for o in objs if rng.random() < 0.5]
    # add objects until the subcategory is cofinal
    for o in objs:
        if not any(c.hom(o, s) for s in sub):
            sub.append(o)
    sub = [o for o in objs if o in sub]
    rep = verify_cofinal_subcategory(c, sub)
    inc = verify_functor_transport(inclusion_functor(full_subcategory(c, sub), c), rng, samples=5)
    return merge("cofinal", [rep, inc])


def verify_grothendieck(c: CategoryView, H, rng: random.Random | None = None,
                        diagram_samples: int = 10) -> SuiteReport:
    """Degrees in ``G(C, H)`` are bounded by those in ``C`` when ``G(C, H)`` is directed.

    Also checks the cocone-transport hypothesis on sampled maximal diagrams:
    a compatible cocone of the projected diagram lifts to ``G(C, H)``.
    """
    rng = rng or random.Random(0)
    g = grothendieck(c, H)
    directed = is_directed(g)
    if directed.answer != "yes":
        return SuiteReport("grothendieck", True, 0, summary="G(C,H) is not directed; skipped")
    violations, details, checks = [], [], 0
    for obj in g.objects():
        dg, dc = _deg(g, obj, "embedding"), _deg(c, obj[0], "embedding")
        checks += 1
        entry = {"object": g.obj_name(obj), "G": dg.to_json(), "C": dc.to_json(), "ok": dg <= dc}
        details.append(entry)
        if not dg <= dc:
            violations.append(entry)
    G = forgetful_functor(g)
    objs = g.objects()
    for _ in range(diagram_samples):
        a = rng.choice(objs)
        b = rng.choice([x for x in objs if g.hom(a, x)])
        tip = rng.choice(c.objects())
        d, base_cocone = maximal_transport_diagram(G, a, b, tip)
        if not image_diagram_is_compatible(G, d, base_cocone):
            violations.append({"kind": "projected cocone", "A": g.obj_name(a), "B": g.obj_name(b)})
            continue
        lifted, info = lift_cocone_to_grothendieck(g, d, base_cocone)
        checks += 1
        if lifted is None or not lifted.is_compatible(d, g):
            violations.append({"kind": "lift", "A": g.obj_name(a), "B": g.obj_name(b),
                               "C": c.obj_name(tip), "info": str(info)})
    return SuiteReport("grothendieck", not violations, checks, violations, details,
                       f"{len(objs)} objects, {checks} checks, {len(violations)} violations")


def grothendieck_instance(seed: int) -> SuiteReport:
    """Random base with a random set-valued functor; retried until G(C, H) is directed."""
    rng = random.Random(seed)
    for _ in range(50):
        c = generate.random_injection_category(rng)
        if is_directed(c).answer != "yes":
            continue
        H = generate.random_set_functor(rng, c)
        if not H.validate()[0]:  # pragma: no cover - generators produce functors
            continue
        if is_directed(grothendieck(c, H)).answer == "yes" and grothendieck(c, H).objects():
            rep = verify_grothendieck(c, H, rng)
            rep.details.insert(0, {"seed": seed, "functor": H.name})
            return rep
    return SuiteReport("grothendieck", True, 0, summary="no directed instance generated")


def verify_slice(c: CategoryView, x) -> SuiteReport:
    """For a category with amalgamation: slice degrees are bounded by base degrees,
    and the slice is isomorphic to the Grothendieck category of ``hom(X, -)``."""
    if has_amalgamation(c).answer != "yes":
        return SuiteReport("slice", True, 0, summary="no amalgamation; skipped")
    s = slice_category(c, x)
    g = grothendieck(c, hom_functor(c, x))
    violations, details = [], []
    iso_ok = is_isomorphism(slice_to_grothendieck(s, g))
    if not iso_ok:
        violations.append({"kind": "slice is not isomorphic to the Grothendieck category"})
    for obj in s.objects():
        ds, dc = _deg(s, obj, "embedding"), _deg(c, obj[1], "embedding")
        entry = {"object": s.obj_name(obj), "slice": ds.to_json(), "C": dc.to_json(), "ok": ds <= dc}
        details.append(entry)
        if not ds <= dc:
            violations.append(entry)
    return SuiteReport("slice", not violations, len(details) + 1, violations, details,
                       f"{len(details)} objects, {len(violations)} violations")


def slice_instance(seed: int) -> SuiteReport:
    rng = random.Random(seed)
    if seed % 3 == 0:
        c = generate.finite_sets_category(rng.randint(2, 3))
    else:
        c = generate.random_thin_category(rng)
        for _ in range(50):
            cand = generate.random_injection_category(rng)
            if has_amalgamation(cand).answer == "yes":
                c = cand
                break
    return verify_slice(c, rng.choice(c.objects()))


# ---------------------------------------------------------------------------
# pullbacks of reasonable functors


def verify_pullback_cofinal(F1: FunctorData, F2: FunctorData) -> SuiteReport:
    p1, p2 = functor_props(F1), functor_props(F2)
    details = [{"reasonable": [p1.is_reasonable, p2.is_reasonable]}]
    if not (p1.is_reasonable and p2.is_reasonable) or is_directed(F1.target).answer != "yes":
        return SuiteReport("pullback", True, 0, details=details, summary="hypotheses fail; skipped")
    pb = pullback(F1, F2)
    verdict = is_cofinal(pb.product, pb.objects())
    ok = verdict.answer == "yes"
    details.append({"pullback_objects": len(pb.objects()), "product_objects": len(pb.product.objects()),
                    "cofinal": verdict.answer})
    return SuiteReport("pullback", ok, 1, [] if ok else [str(verdict.counterexample)], details,
                       f"pullback cofinal in product: {verdict.answer}")


def pullback_instance(seed: int) -> SuiteReport:
    rng = random.Random(seed)
    F1, F2, kinds = generate.reasonable_functor_pair(rng, n=rng.randint(2, 3))
    rep = verify_pullback_cofinal(F1, F2)
    rep.details.insert(0, {"seed": seed, "classes": list(kinds)})
    return rep


# ---------------------------------------------------------------------------
# Ramsey property implies amalgamation


def verify_rp_implies_ap(view: CategoryView) -> SuiteReport:
    """If the category is directed and every object has embedding degree 1,
    the category has amalgamation."""
    directed = is_directed(view).answer == "yes"
    degrees = {view.obj_name(a): _deg(view, a, "embedding").to_json() for a in view.objects()}
    premise = directed and all(v == 1 for v in degrees.values())
    amalg = has_amalgamation(view).answer if premise else None
    ok = (not premise) or amalg == "yes"
    entry = {"directed": directed, "degrees": degrees, "premise": premise, "amalgamation": amalg}
    return SuiteReport("rp-implies-ap", ok, 1 if premise else 0, [] if ok else [entry], [entry],
                       "premise holds, amalgamation " + str(amalg) if premise else "premise fails")


def rp_ap_instance(seed: int) -> SuiteReport:
    rng = random.Random(seed)
    kind = seed % 3
    if kind == 0:
        c = generate.random_thin_category(rng)
    elif kind == 1:
        c = generate.random_injection_category(rng)
    else:
        c = generate.finite_sets_category(rng.randint(1, 3))
    return verify_rp_implies_ap(c)


def sweep(suite: str, fn: Callable, seeds: list, workers: int | None = None) -> SuiteReport:
    parts = run_ordered(fn, seeds, worker_count(workers))
    return merge(suite, parts)


# ---------------------------------------------------------------------------
# adding constants


def constant_expansion_homs(a, pts, b, qts) -> tuple[list, list]:
    """Both sides of the hom-set identification for constant expansions.

    Left: embeddings ``(A, a_1..a_n) → (B, b_1..b_n)``.  Right: morphisms
    ``(f_A, A) → (f_B, B)`` of the slice under ``X = A[a_1..a_n]``, where
    ``f_A`` is the inclusion and ``f_B`` pins ``a_i ↦ b_i`` (empty when no
    such embedding exists).
    """
    from .structures import (compose_maps, expand, fresh_constant_names, generated_substructure,
                             iter_embeddings, pinning_embedding)
    names = fresh_constant_names(a.signature, len(pts))
    left = list(iter_embeddings(expand(a, pts, names), expand(b, qts, names)))
    gen = generated_substructure(a, pts)
    x, f_a = gen.structure, gen.inclusion.images
    x_pts = [f_a.index(p) for p in pts]
    f_b = pinning_embedding(x, x_pts, b, qts)
    if f_b is None:
        return left, []
    right = [h for h in iter_embeddings(a, b) if compose_maps(h, f_a) == f_b]
    return left, right


def verify_constant_identification(max_size: int = 4, k: int = 1) -> SuiteReport:
    """Exhaustive check over labelled linear orders with ``k`` added constants.

    Every pair of expanded structures has identical hom-sets on both sides
    (the bijection is the identity on point maps), and composition on
    representatives agrees on both sides.
    """
    from .structures import ChainsSpec, compose_maps, labeled_members, linear_orders_spec
    import itertools

    spec = linear_orders_spec(max_size)
    objs = [(s, pts) for n in range(1, max_size + 1) for s in labeled_members(spec, n)
            for pts in itertools.product(range(n), repeat=k)]
    violations, checks = [], 0
    for (a, pa), (b, pb) in itertools.product(objs, repeat=2):
        left, right = constant_expansion_homs(a, pa, b, pb)
        checks += 1
        if left != right:
            violations.append({"A": a.to_dict(), "a": list(pa), "B": b.to_dict(), "b": list(pb),
                               "left": [list(h) for h in left], "right": [list(h) for h in right]})
    chains = ChainsSpec(max_size)
    reps = [(s, pts) for n in range(1, max_size + 1) for s in chains.representatives(n)
            for pts in itertools.product(range(n), repeat=k)]
    homs = {}
    for i, (a, pa) in enumerate(reps):
        for j, (b, pb) in enumerate(reps):
            homs[(i, j)] = constant_expansion_homs(a, pa, b, pb)
    for (i, j), (left_ij, right_ij) in homs.items():
        for m in range(len(reps)):
            left_jm, right_jm = homs[(j, m)]
            left_im, right_im = homs[(i, m)]
            for h1, h2 in itertools.product(right_ij, right_jm):
                checks += 1
                comp = compose_maps(h2, h1)
                if comp not in right_im or comp not in left_im:
                    violations.append({"composition": [i, j, m], "h1": list(h1), "h2": list(h2)})
    return SuiteReport("constants", not violations, checks, violations, [],
                       f"{len(objs)} expanded structures, {checks} checks, {len(violations)} violations")
