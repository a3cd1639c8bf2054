"""Arrow relations and Ramsey degrees.

An arrow instance is reduced to a hypergraph: the vertices are the domain
(``hom(A, C)`` or the subobjects of ``C`` of type ``A``) and there is one edge
per ``w ∈ hom(B, C)``, namely the translate set ``w · hom(A, B)``.  A coloring
is bad when every edge sees at least ``t + 1`` colors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core import (INF, CategoryError, CategoryView, ExtNat, aut, require_valid_mono,
                   subobjects)

VARIANTS = ("embedding", "structural")


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ArrowQuery:
    A: Any
    B: Any
    C: Any
    k: int
    t: int
    variant: str = "embedding"

    def __post_init__(self):
        if self.k < 1 or self.t < 1:
            raise ValueError("k and t must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    def notation(self, view: CategoryView) -> str:
        arrow = "→" if self.variant == "embedding" else "~→"
        n = view.obj_name
        return f"{n(self.C)} {arrow} ({n(self.B)})^{n(self.A)}_{{{self.k},{self.t}}}"

    def names(self, view: CategoryView) -> dict:
        return {"variant": self.variant, "A": view.obj_name(self.A), "B": view.obj_name(self.B),
                "C": view.obj_name(self.C), "k": self.k, "t": self.t}


@dataclass
class ArrowInstance:
    domain: list          # morphisms, or SubobjectClass values
    edges: list           # one sorted tuple of domain indices per w
    ws: list              # the morphisms w ∈ hom(B, C), aligned with edges


def domain_of(view: CategoryView, a, c, variant: str) -> list:
    if variant == "embedding":
        return view.hom(a, c)
    return subobjects(view, a, c)


def build_instance(view: CategoryView, q: ArrowQuery) -> ArrowInstance:
    ws = view.hom(q.B, q.C)
    if q.variant == "embedding":
        domain = view.hom(q.A, q.C)
        index = {f: i for i, f in enumerate(domain)}
        inner = view.hom(q.A, q.B)
        edges = [tuple(sorted({index[view.compose(w, f)] for f in inner})) for w in ws]
    else:
        domain = subobjects(view, q.A, q.C)
        index = {f: i for i, cls in enumerate(domain) for f in cls.members}
        reps = [cls.representative for cls in subobjects(view, q.A, q.B)]
        edges = [tuple(sorted({index[view.compose(w, f)] for f in reps})) for w in ws]
    return ArrowInstance(domain, edges, ws)


def aut_permutations(view: CategoryView, c, domain: list, variant: str) -> list[tuple]:
    """Permutations of the domain induced by post-composition with ``Aut(C)``."""
    if variant == "embedding":
        index = {f: i for i, f in enumerate(domain)}
    else:
        index = {f: i for i, cls in enumerate(domain) for f in cls.members}
    ident = tuple(range(len(domain)))
    perms = []
    for sigma in aut(view, c):
        if variant == "embedding":
            p = tuple(index[view.compose(sigma, f)] for f in domain)
        else:
            p = tuple(index[view.compose(sigma, cls.representative)] for cls in domain)
        if p != ident and p not in perms:
            perms.append(p)
    return perms


def _element_name(view: CategoryView, x) -> str:
    if hasattr(x, "members"):
        return "[" + view.mor_name(x.representative) + "]"
    return view.mor_name(x)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class ArrowVerdict:
    """Outcome of one arrow query.

    ``coloring`` (on failure) lists a color per domain element, in the order of
    ``domain``.  ``reason`` is one of ``witness`` (some w already has a small
    translate set), ``few-colors`` (at most t colors are available),
    ``exhausted`` (the search tree was covered), ``bad-coloring`` and ``no-w``.
    """

    query: dict
    holds: bool
    reason: str
    domain: list = field(default_factory=list)
    coloring: list | None = None
    witness: str | None = None
    method: str = "backtrack"
    symmetry: bool = False
    k_effective: int = 0
    nodes: int = 0

    @property
    def status(self) -> str:
        return "holds" if self.holds else "fails"

    def to_dict(self) -> dict:
        return {"query": dict(self.query), "status": self.status, "reason": self.reason,
                "domain": list(self.domain), "coloring": self.coloring, "witness": self.witness,
                "method": self.method, "symmetry": self.symmetry,
                "k_effective": self.k_effective, "nodes": self.nodes}

    @classmethod
    def from_dict(cls, data: dict) -> ArrowVerdict:
        return cls(query=dict(data["query"]), holds=data["status"] == "holds",
                   reason=data["reason"], domain=list(data["domain"]),
                   coloring=data.get("coloring"), witness=data.get("witness"),
                   method=data.get("method", "backtrack"), symmetry=data.get("symmetry", False),
                   k_effective=data.get("k_effective", 0), nodes=data.get("nodes", 0))

    def summary(self) -> str:
        q = self.query
        arrow = "→" if q["variant"] == "embedding" else "~→"
        text = f"{q['C']} {arrow} ({q['B']})^{q['A']}_{{{q['k']},{q['t']}}}: {self.status}"
        if self.holds:
            return text + (f" (w = {self.witness})" if self.witness else f" ({self.reason})")
        return text + f" ({self.reason})"


def _bad_coloring_violation(edges: list, coloring: list, k: int, t: int):
    """None if the coloring is bad, else the index of an edge with ≤ t colors."""
    if any(not (0 <= c < k) for c in coloring):
        return "color out of range"
    for i, e in enumerate(edges):
        if len({coloring[x] for x in e}) <= t:
            return i
    return None


def validate_bad_coloring(view: CategoryView, q: ArrowQuery, coloring: list) -> bool:
    """Definitional check: every w ∈ hom(B, C) sees at least t+1 colors."""
    domain = domain_of(view, q.A, q.C, q.variant)
    if len(coloring) != len(domain):
        return False
    inst = build_instance(view, q)
    return _bad_coloring_violation(inst.edges, list(coloring), q.k, q.t) is None


# ---------------------------------------------------------------------------
# backtracking search


def _search_bad_coloring(n: int, edges: list, k: int, t: int, perms: list | None = None):
    """Return ``(coloring | None, nodes)``; ``None`` means no bad coloring exists.

    Colorings are built as restricted-growth strings in the search order, so
    color renamings are never explored twice.  With ``perms`` (a group of
    domain permutations preserving the edge set) only lex-leaders survive.
    """
    need = t + 1
    weight = [0] * n
    var_edges = [[] for _ in range(n)]
    for ei, e in enumerate(edges):
        for v in e:
            weight[v] += 1
            var_edges[v].append(ei)
    order = sorted((v for v in range(n) if weight[v]), key=lambda v: (-weight[v], v))
    m = len(order)
    E = len(edges)
    counts = [[0] * k for _ in range(E)]
    distinct = [0] * E
    free = [len(e) for e in edges]
    color = [-1] * n
    nodes = 0
    perms = perms or []

    for ei in range(E):
        if min(free[ei], k) < need:
            return None, 0

    def assign(v, c):
        ok = True
        for ei in var_edges[v]:
            free[ei] -= 1
            row = counts[ei]
            if row[c] == 0:
                distinct[ei] += 1
            row[c] += 1
            d = distinct[ei]
            if d + min(free[ei], k - d) < need:
                ok = False
        return ok

    def unassign(v, c):
        for ei in var_edges[v]:
            free[ei] += 1
            row = counts[ei]
            row[c] -= 1
            if row[c] == 0:
                distinct[ei] -= 1

    def dominated(p):
        # is some symmetric image of the assigned prefix lexicographically smaller?
        for perm in perms:
            relabel = {}
            for q in range(p + 1):
                x = color[perm[order[q]]]
                if x < 0:
                    break
                r = relabel.get(x)
                if r is None:
                    r = relabel[x] = len(relabel)
                cq = color[order[q]]
                if r < cq:
                    return True
                if r > cq:
                    break
        return False

    def search(p, top):
        nonlocal nodes
        if p == m:
            return True
        v = order[p]
        cands = ([top + 1] if top + 1 < k else []) + list(range(top, -1, -1))
        for c in cands:
            nodes += 1
            color[v] = c
            ok = assign(v, c)
            if ok and perms and dominated(p):
                ok = False
            if ok and search(p + 1, max(top, c)):
                return True
            unassign(v, c)
            color[v] = -1
        return False

    if search(0, -1):
        return [c if c >= 0 else 0 for c in color], nodes
    return None, nodes


def check_arrow(view: CategoryView, q: ArrowQuery, symmetry: bool = False) -> ArrowVerdict:
    """Decide ``C → (B)^A_{k,t}`` (or the structural variant) with a certificate."""
    require_valid_mono(view)
    inst = build_instance(view, q)
    n = len(inst.domain)
    names = [_element_name(view, x) for x in inst.domain]
    base = dict(query=q.names(view), domain=names, symmetry=symmetry)
    k_eff = max(1, min(q.k, n))
    if not inst.edges:
        # every coloring is bad when no w exists; use the most spread-out one
        return ArrowVerdict(holds=False, reason="no-w", k_effective=k_eff,
                            coloring=[min(i, q.k - 1) for i in range(n)], **base)
    for w, e in zip(inst.ws, inst.edges):
        if len(e) <= q.t:
            return ArrowVerdict(holds=True, reason="witness", witness=view.mor_name(w),
                                k_effective=k_eff, **base)
    if k_eff <= q.t:
        return ArrowVerdict(holds=True, reason="few-colors", k_effective=k_eff, **base)
    perms = aut_permutations(view, q.C, inst.domain, q.variant) if symmetry else None
    coloring, nodes = _search_bad_coloring(n, inst.edges, k_eff, q.t, perms)
    if coloring is None:
        return ArrowVerdict(holds=True, reason="exhausted", k_effective=k_eff, nodes=nodes, **base)
    return ArrowVerdict(holds=False, reason="bad-coloring", coloring=coloring,
                        k_effective=k_eff, nodes=nodes, **base)


# ---------------------------------------------------------------------------
# oracle


def _popcount(x: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(x)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def check_arrow_oracle(view: CategoryView, q: ArrowQuery, cap: int = 20,
                       max_colorings: int = 1 << 22, chunk: int = 1 << 16) -> ArrowVerdict:
    """Exhaustive enumeration of all ``k^|domain|`` colorings (no reductions).

    Translate sets are recomputed here from the definition rather than taken
    from :func:`build_instance`.  The first bad coloring in enumeration order
    (domain element 0 is the least significant digit) is returned.
    """
    require_valid_mono(view)
    domain = domain_of(view, q.A, q.C, q.variant)
    n, k = len(domain), q.k
    if n > cap:
        raise OracleCapExceeded(f"domain of size {n} exceeds the oracle cap {cap}")
    if k ** n > max_colorings:
        raise OracleCapExceeded(f"{k}^{n} colorings exceed the oracle limit {max_colorings}")
    translates = []
    for w in view.hom(q.B, q.C):
        if q.variant == "embedding":
            images = [view.compose(w, f) for f in view.hom(q.A, q.B)]
            translates.append(sorted({domain.index(g) for g in images}))
        else:
            images = [view.compose(w, s.representative) for s in subobjects(view, q.A, q.B)]
            translates.append(sorted({i for i, cls in enumerate(domain) for g in images
                                      if g in cls.members}))
    names = [_element_name(view, x) for x in domain]
    base = dict(query=q.names(view), domain=names, method="oracle", k_effective=k)
    total = k ** n
    powers = np.array([k ** i for i in range(n)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % k if n else np.zeros((len(idx), 0), np.int64)
        bad = np.ones(len(idx), dtype=bool)
        for tr in translates:
            mask = np.zeros(len(idx), dtype=np.int64)
            for x in tr:
                mask |= np.left_shift(np.int64(1), digits[:, x])
            bad &= _popcount(mask) >= q.t + 1
        hits = np.flatnonzero(bad)
        if hits.size:
            first = int(hits[0])
            coloring = [int(v) for v in digits[first]] if n else []
            reason = "no-w" if not translates else "bad-coloring"
            return ArrowVerdict(holds=False, reason=reason, coloring=coloring,
                                nodes=start + first + 1, **base)
    return ArrowVerdict(holds=True, reason="exhausted", nodes=total, **base)


# ---------------------------------------------------------------------------
# degrees


def _ext_json(x: ExtNat | None):
    return None if x is None else x.to_json()


@dataclass
class DegreeReport:
    """Exact or budgeted Ramsey degree with certificates.

    ``upper_witnesses`` has one entry per (k, B): the chosen C and, when the
    arrow holds by a single morphism, that morphism.  ``lower_certificate``
    holds ``{"k", "B", "threshold", "colorings": {C: coloring}}``.
    """

    A: str
    variant: str
    status: str                   # exact | budgeted
    lower: ExtNat
    upper: ExtNat
    certified_lower: bool = True
    k_star: int | None = None
    upper_witnesses: list = field(default_factory=list)
    lower_certificate: dict | None = None
    note: str = ""

    @property
    def value(self) -> ExtNat | None:
        if self.status == "exact":
            return self.upper
        return None

    def to_dict(self) -> dict:
        return {"A": self.A, "variant": self.variant, "status": self.status,
                "lower": self.lower.to_json(), "upper": self.upper.to_json(),
                "certified_lower": self.certified_lower, "k_star": self.k_star,
                "upper_witnesses": [dict(w) for w in self.upper_witnesses],
                "lower_certificate": self.lower_certificate, "note": self.note}

    @classmethod
    def from_dict(cls, data: dict) -> DegreeReport:
        return cls(A=data["A"], variant=data["variant"], status=data["status"],
                   lower=ExtNat.from_json(data["lower"]), upper=ExtNat.from_json(data["upper"]),
                   certified_lower=data.get("certified_lower", True), k_star=data.get("k_star"),
                   upper_witnesses=[dict(w) for w in data.get("upper_witnesses", [])],
                   lower_certificate=data.get("lower_certificate"), note=data.get("note", ""))

    def summary(self) -> str:
        sym = "t" if self.variant == "embedding" else "t~"
        if self.value is not None:
            return f"{sym}({self.A}) = {self.value}"
        lo = str(self.lower) + ("" if self.certified_lower else " (non-certified)")
        return f"{sym}({self.A}) in [{lo}, {self.upper}] (budgeted evidence)"


def _first_holding_c(view, a, b, k, n, variant, candidates, cache, symmetry=False):
    """Lowest-index C where the arrow holds, plus the refutations seen before it."""
    refuted = {}
    for c in candidates:
        key = (b, c, k, n)
        v = cache.get(key)
        if v is None:
            v = cache[key] = check_arrow(view, ArrowQuery(a, b, c, k, n, variant), symmetry)
        if v.holds:
            return c, v, refuted
        refuted[view.obj_name(c)] = v.coloring
    return None, None, refuted


def degree_exact_finite(view: CategoryView, a, variant: str = "embedding",
                        symmetry: bool = False) -> DegreeReport:
    """Exact ``t(A)`` or ``t̃(A)`` in a finite mono category.

    A k-coloring only matters through the partition it induces, so the single
    value ``k* = max_C |domain(A, C)|`` stands in for every k.  The search for
    n stops at ``max_B |domain(A, B)|``, where ``C = B`` and ``w = id`` work.
    """
    if not view.finite:
        raise CategoryError("exact degrees need a finite view")
    require_valid_mono(view)
    view.check_object(a)
    objs = view.objects()
    sizes = {c: len(domain_of(view, a, c, variant)) for c in objs}
    k_star = max(sizes.values())
    bound = max(1, max(sizes.values()))
    cache: dict = {}
    lower_cert = None
    for n in range(1, bound + 1):
        witnesses, failed = [], None
        for b in objs:
            c, v, refuted = _first_holding_c(view, a, b, k_star, n, variant, objs, cache, symmetry)
            if c is None:
                failed = {"k": k_star, "B": view.obj_name(b), "threshold": n, "colorings": refuted}
                break
            witnesses.append({"k": k_star, "B": view.obj_name(b), "C": view.obj_name(c),
                              "threshold": n, "w": v.witness})
        if failed is None:
            return DegreeReport(view.obj_name(a), variant, "exact", ExtNat(n), ExtNat(n), True,
                                k_star, witnesses, lower_cert)
        lower_cert = failed
    raise AssertionError("the C = B bound was not reached")  # pragma: no cover


def degree_bounds(view: CategoryView, a, variant: str = "embedding", max_k: int = 2,
                  max_b: int = 4, max_c: int = 8, symmetry: bool = False) -> DegreeReport:
    """Budgeted degree evidence over an enumerated class.

    Samples every k ≤ ``max_k`` and the first ``max_b`` objects B; for each
    threshold n looks for a C among the first ``max_c`` objects.  The lower
    bound is certified only when the view is finite and both budgets cover
    every object.
    """
    require_valid_mono(view)
    bs = list(itertools.islice(view.iter_objects(), max_b))
    cs = list(itertools.islice(view.iter_objects(), max_c))
    covers = view.finite and len(cs) == len(view.objects()) and len(bs) == len(cs)
    samples = [(k, b) for b in bs for k in range(1, max_k + 1)]
    bound = max([1] + [len(domain_of(view, a, b, variant)) for b in bs])
    cache: dict = {}
    lower_cert = None
    for n in range(1, bound + 1):
        witnesses, failed = [], None
        for k, b in samples:
            c, v, refuted = _first_holding_c(view, a, b, k, n, variant, cs, cache, symmetry)
            if c is None:
                failed = {"k": k, "B": view.obj_name(b), "threshold": n, "colorings": refuted}
                break
            witnesses.append({"k": k, "B": view.obj_name(b), "C": view.obj_name(c),
                              "threshold": n, "w": v.witness})
        if failed is None:
            lower = ExtNat(n) if lower_cert is not None else ExtNat(1)
            certified = covers or lower_cert is None
            note = "" if certified else "lower bound not certified: only a finite part of the class was searched"
            return DegreeReport(view.obj_name(a), variant, "budgeted", lower, ExtNat(n), certified,
                                None, witnesses, lower_cert, note)
        lower_cert = failed
    # no C within budget at the largest threshold needed by any sampled B
    return DegreeReport(view.obj_name(a), variant, "budgeted", ExtNat(bound), INF, covers, None,
                        [], lower_cert, "no witness within budget")


# ---------------------------------------------------------------------------
# certificate rechecks (definitional evaluation only)


def recheck_arrow(view: CategoryView, verdict: ArrowVerdict, oracle_cap: int = 20) -> tuple[bool, str]:
    q = verdict.query
    query = ArrowQuery(view.find_object(q["A"]), view.find_object(q["B"]), view.find_object(q["C"]),
                       q["k"], q["t"], q["variant"])
    inst = build_instance(view, query)
    names = [_element_name(view, x) for x in inst.domain]
    if names != verdict.domain:
        return False, "domain does not match the category"
    if not verdict.holds:
        bad = _bad_coloring_violation(inst.edges, verdict.coloring or [], query.k, query.t)
        if len(verdict.coloring or []) != len(names) or bad is not None:
            return False, f"coloring is not bad (edge {bad})"
        return True, "bad coloring re-validated"
    if verdict.witness is not None:
        for w, e in zip(inst.ws, inst.edges):
            if view.mor_name(w) == verdict.witness:
                ok = len(e) <= query.t
                return ok, "witness translate set is small" if ok else "witness sees too many colors"
        return False, "witness is not in hom(B, C)"
    if verdict.reason == "few-colors":
        ok = bool(inst.edges) and min(query.k, len(names)) <= query.t
        return ok, "at most t colors available" if ok else "color count exceeds t"
    try:
        o = check_arrow_oracle(view, query, cap=oracle_cap)
    except OracleCapExceeded as exc:
        return True, f"not rechecked: {exc}"
    return o.holds, "oracle agrees" if o.holds else "oracle found a bad coloring"


def recheck_degree(view: CategoryView, report: DegreeReport, oracle_cap: int = 20) -> tuple[bool, str]:
    a = view.find_object(report.A)
    for wit in report.upper_witnesses:
        b, c = view.find_object(wit["B"]), view.find_object(wit["C"])
        q = ArrowQuery(a, b, c, wit["k"], wit["threshold"], report.variant)
        inst = build_instance(view, q)
        if wit.get("w") is not None:
            sizes = [len(e) for w, e in zip(inst.ws, inst.edges) if view.mor_name(w) == wit["w"]]
            if not sizes or sizes[0] > q.t:
                return False, f"upper witness for B={wit['B']} does not re-validate"
        elif min(q.k, len(inst.domain)) > q.t:
            try:
                if not check_arrow_oracle(view, q, cap=oracle_cap).holds:
                    return False, f"oracle refutes the upper witness for B={wit['B']}"
            except OracleCapExceeded:
                pass
    cert = report.lower_certificate
    if cert is not None:
        b = view.find_object(cert["B"])
        for cname, coloring in cert["colorings"].items():
            q = ArrowQuery(a, b, view.find_object(cname), cert["k"], cert["threshold"], report.variant)
            inst = build_instance(view, q)
            if len(coloring) != len(inst.domain) or \
                    _bad_coloring_violation(inst.edges, coloring, q.k, q.t) is not None:
                return False, f"lower certificate fails at C={cname}"
        if report.status == "exact":
            missing = {view.obj_name(c) for c in view.objects()} - set(cert["colorings"])
            if missing:
                return False, f"lower certificate misses C in {sorted(missing)}"
    return True, "certificates re-validated"
