"""Global strategies ``(H, Htau)`` induced stage by stage from a local strategy.

``H(x)`` is a path from ``x`` to its chosen normal form and ``Htau(x)`` is
that normal form in ``min(E)``.  A strategy is confluent when ``Htau``
identifies the two ends of every rule; then ``E/R`` is ``min(E)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import carrier as C
from .carrier import CarrierMap, CarrierObject, Element, Kind
from .errors import InvariantViolation, NotConfluent, StrategyError
from .graph import (
    LinearStep,
    Path,
    combine_paths,
    compose_paths,
    embed_reflexive,
    step_source,
    step_target,
    unit_path,
)
from .report import Report
from .termination import LocalStrategy, verify_local_strategy
from .vector import Vec


@dataclass(frozen=True, eq=False)
class GlobalStrategy:
    base: LocalStrategy
    min_obj: CarrierObject
    iota_min: CarrierMap
    Htau: CarrierMap
    paths: Mapping[str, Path]

    @property
    def graph(self):
        return self.base.graph

    @property
    def kind(self) -> Kind:
        return self.base.kind

    def H(self, x: Element) -> Path:
        if self.kind is Kind.SET:
            return self.paths[x]
        return combine_paths(self.graph, [(c, self.paths[lab]) for lab, c in sorted(x.items())])

    def normal_form(self, x: Element) -> Element:
        return self.Htau.apply(x)


def _strip(path: Path) -> tuple:
    steps = list(path.steps)
    while steps and isinstance(steps[-1], LinearStep) and not steps[-1].rules():
        steps.pop()
    return (path.anchor, tuple(steps))


def _min_parts(ls: LocalStrategy):
    F = ls.F
    obj, inj, legs = F.min_parts()
    seen: dict[str, object] = {}
    for m in legs:
        for x in F.stages[m]:
            if x in seen:
                raise StrategyError(f"minimal stages {seen[x]!r} and {m!r} share {x}", witness=x)
            seen[x] = m
    return obj, inj, legs


def induce_global_strategy(ls: LocalStrategy, check: bool = True) -> GlobalStrategy:
    """Well-founded induction over the stages of the filtration.

    Minimal ``i``: ``H_i`` is the unit and ``Htau_i`` the injection into
    ``min(E)``.  Otherwise ``H_i(x)`` is the step ``h(x)`` followed by
    ``H_{<i}(htau_i(x))`` and ``Htau_i = Htau_{<i} ∘ htau_i``.
    """
    rep = verify_local_strategy(ls)
    if not rep.ok:
        bad = rep.failures()[0]
        raise StrategyError(f"local strategy fails {bad.name}", report=rep, witness=bad.witness)
    G, F = ls.graph, ls.F
    min_obj, iota_min, legs = _min_parts(ls)
    vect = G.kind is Kind.VECT
    H: dict[object, dict[str, Path]] = {}
    T: dict[object, dict[str, Element]] = {}
    for i in F.poset.linear_extension:
        H[i], T[i] = {}, {}
        if i in legs:
            for x in F.stages[i]:
                e = Vec.basis(x) if vect else x
                H[i][x] = unit_path(G, e)
                T[i][x] = legs[i].apply(e)
            continue
        low = F.below(i)
        for x in F.stages[i]:
            e = Vec.basis(x) if vect else x
            first = embed_reflexive(G, ls.h.apply(e))
            y = ls.htau[i].apply(e)
            if vect:
                terms = []
                tau = Vec()
                for lab, c in sorted(y.items()):
                    k, z = low.reps[lab]
                    terms.append((c, H[k][z]))
                    tau = tau + T[k][z] * c
                rest = combine_paths(G, terms) if terms else unit_path(G, first.target)
            else:
                k, z = low.reps[y]
                rest, tau = H[k][z], T[k][z]
            H[i][x] = compose_paths(first, rest)
            T[i][x] = tau
    _audit_naturality(F, H, T)
    top = F.poset.top()
    paths = dict(H[top])
    if vect:
        Htau = C.linear_map(G.E, min_obj, {x: T[top][x] for x in G.E.labels})
    else:
        Htau = C.set_map(G.E, min_obj, {x: T[top][x] for x in G.E.labels})
    gs = GlobalStrategy(ls, min_obj, iota_min, Htau, paths)
    if check:
        post = verify_global_strategy(gs)
        if not post.ok:
            bad = post.failures()[0]
            raise InvariantViolation(f"induced strategy fails {bad.name}", witness=bad.witness)
    return gs


def _audit_naturality(F, H, T) -> None:
    # a label living in several stages must get the same path and normal form from each
    seen: dict[str, tuple] = {}
    for i in F.poset.linear_extension:
        for x, p in H[i].items():
            key = (_strip(p), T[i][x])
            if x in seen and seen[x][1] != key:
                raise InvariantViolation(f"stages {seen[x][0]!r} and {i!r} disagree at {x}", witness=x)
            seen.setdefault(x, (i, key))


def verify_global_strategy(gs: GlobalStrategy) -> Report:
    """GS1-GS3, both recursion equations, and the path length bound."""
    ls, G, F = gs.base, gs.graph, gs.base.F
    vect = G.kind is Kind.VECT
    elems = [(x, Vec.basis(x) if vect else x) for x in G.E.labels]
    rep = Report("global strategy")
    bad = next((x for x, e in elems if gs.paths[x].source != e), None)
    rep.add("GS1", bad is None, bad)
    bad = next((x for x, e in elems if gs.paths[x].target != gs.iota_min.apply(gs.Htau.apply(e))), None)
    rep.add("GS2", bad is None, bad)
    idm = C.identity(gs.min_obj)
    back = C.compose(gs.Htau, gs.iota_min)
    rep.add("GS3", C.equal_maps(back, idm), C.first_difference(back, idm))
    bad = None
    for x, e in elems:
        rhs = compose_paths(embed_reflexive(G, ls.h.apply(e)), gs.H(ls.step_target(e)))
        if _strip(rhs) != _strip(gs.paths[x]):
            bad = x
            break
    rep.add("H-recursion", bad is None, bad)
    rec = C.compose(gs.Htau, C.compose(ls.RE.tgt, ls.h))
    rep.add("Htau-recursion", C.equal_maps(rec, gs.Htau), C.first_difference(rec, gs.Htau))
    bad = None
    for x, _ in elems:
        depth = F.stage_depth(x)
        if len(_strip(gs.paths[x])[1]) > depth:
            bad = x
            break
    rep.add("length-bound", bad is None, bad)
    return rep


@dataclass(frozen=True)
class ConfluenceResult:
    confluent: bool
    witness: str | None = None
    source_nf: Element | None = None
    target_nf: Element | None = None

    def __bool__(self) -> bool:
        return self.confluent


def is_confluent_strategy(gs: GlobalStrategy) -> ConfluenceResult:
    """``Htau ∘ src = Htau ∘ tgt`` on the generating rules, in rule order."""
    G = gs.graph
    for r in G.R.labels:
        s, t = G.endpoints(r)
        a, b = gs.Htau.apply(s), gs.Htau.apply(t)
        if a != b:
            return ConfluenceResult(False, r, a, b)
    return ConfluenceResult(True)


@dataclass(frozen=True, eq=False)
class Certificate:
    """Split coequalizer data and the comparison ``min(E) -> E/R``."""

    equations: Report
    quotient: CarrierObject
    q: CarrierMap
    min_obj: CarrierObject
    canmap: CarrierMap
    is_iso: bool

    @property
    def ok(self) -> bool:
        return self.equations.ok and self.is_iso

    def summary(self) -> dict:
        return {
            "quotient_size": len(self.quotient),
            "min_size": len(self.min_obj),
            "iso": self.is_iso,
            "equations": self.equations.ok,
        }


def split_coequalizer_certificate(gs: GlobalStrategy) -> Certificate:
    """Check ``e s = 1``, ``s e = g t``, ``f t = 1`` and ``e f = e g``.

    Here ``e = Htau``, ``s = ι_min``, ``t = H``, and ``f, g`` are the source
    and target of paths.  ``e f = e g`` is checked on the rules and on every
    constructed path and each of its steps.
    """
    res = is_confluent_strategy(gs)
    if not res:
        raise NotConfluent(
            f"Htau separates the ends of {res.witness}: {res.source_nf!r} vs {res.target_nf!r}",
            witness=res.witness,
        )
    G = gs.graph
    vect = G.kind is Kind.VECT
    rep = Report("split coequalizer")
    es = C.compose(gs.Htau, gs.iota_min)
    rep.add("e.s=1", C.equal_maps(es, C.identity(gs.min_obj)), C.first_difference(es, C.identity(gs.min_obj)))
    elems = [(x, Vec.basis(x) if vect else x) for x in G.E.labels]
    bad = next((x for x, e in elems if gs.iota_min.apply(gs.Htau.apply(e)) != gs.paths[x].target), None)
    rep.add("s.e=g.t", bad is None, bad)
    bad = next((x for x, e in elems if gs.paths[x].source != e), None)
    rep.add("f.t=1", bad is None, bad)
    bad = None
    for x, _ in elems:
        p = gs.paths[x]
        ends = [(p.source, p.target)] + [(step_source(G, s), step_target(G, s)) for s in p.steps]
        if any(gs.Htau.apply(a) != gs.Htau.apply(b) for a, b in ends):
            bad = x
            break
    rep.add("e.f=e.g", bad is None, bad)
    quotient, q = C.coequalizer(G.src, G.tgt)
    canmap = C.compose(q, gs.iota_min)
    iso = C.is_isomorphism(canmap)
    try:
        k = C.factor_through(q, gs.Htau)
        inverse_ok = C.equal_maps(C.compose(k, canmap), C.identity(gs.min_obj))
    except ValueError:
        inverse_ok = False
    rep.add("Htau factors through E/R", inverse_ok, "Htau")
    return Certificate(rep, quotient, q, gs.min_obj, canmap, iso)


def normal_form(gs: GlobalStrategy, x: Element) -> Element:
    return gs.normal_form(x)
