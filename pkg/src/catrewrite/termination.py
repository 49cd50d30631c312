"""Local strategies ``(h, htau)`` on filtered graphs and their axioms TG1-TG4.

``h : E -> R + E`` picks, for every element (or basis vector), either one
rewriting step leaving it or the unit at it.  ``htau_i : E_i -> E_{<i}``
records where that step lands, one stage lower.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from . import carrier as C
from .carrier import CarrierMap, CarrierObject, Element, Kind
from .errors import FiltrationError, KindMismatch, StrategyError
from .filtration import (
    Filtration,
    filtration_from_height,
    filtration_from_terminating_relation,
    nat_filtration,
)
from .graph import GraphMorphism, InternalGraph, reflexive_sum, set_graph
from .linear import AlgebraicRelation, rule_graph
from .report import Report
from .vector import Vec


@dataclass(frozen=True, eq=False)
class LocalStrategy:
    graph: InternalGraph
    F: Filtration
    h: CarrierMap
    htau: Mapping[object, CarrierMap]

    @cached_property
    def reflexive(self) -> tuple[InternalGraph, CarrierMap, CarrierMap]:
        """``(R + E, inj_R, u)``."""
        return reflexive_sum(self.graph)

    @property
    def RE(self) -> InternalGraph:
        return self.reflexive[0]

    @property
    def unit(self) -> CarrierMap:
        return self.reflexive[2]

    @property
    def kind(self) -> Kind:
        return self.graph.kind

    def step_target(self, x: Element) -> Element:
        """``tgt_{R+E}(h(x))``."""
        return self.RE.tgt.apply(self.h.apply(x))

    def choice(self, label: str) -> str | None:
        """Rule chosen at an element / basis label, or None for the unit."""
        y = self.h.image_of(label)
        if self.kind is Kind.SET:
            tag, _, r = y.partition(".")
            return r if tag == "L" else None
        rules = [lab[2:] for lab in y if lab.startswith("L.")]
        return rules[0] if rules else None

    def choices(self) -> dict[str, str | None]:
        return {x: self.choice(x) for x in self.graph.E.labels}


def _h_map(G: InternalGraph, choices: Mapping[str, str | None]) -> CarrierMap:
    RE, inj, unit = reflexive_sum(G)
    E = G.E
    if G.kind is Kind.SET:
        table = {}
        for x in E.labels:
            r = choices.get(x)
            table[x] = inj.apply(r) if r is not None else unit.apply(x)
        return C.set_map(E, RE.R, table)
    cols = {}
    for x in E.labels:
        r = choices.get(x)
        cols[x] = inj.apply(Vec.basis(r)) if r is not None else unit.apply(Vec.basis(x))
    return C.linear_map(E, RE.R, cols)


def _lift_into(inj: CarrierMap, y: Element) -> Element | None:
    return C.lift(inj, y)


def local_strategy_from_choices(
    G: InternalGraph, F: Filtration, choices: Mapping[str, str | None]
) -> LocalStrategy:
    """Assemble ``h`` from per-label rule choices and derive each ``htau_i``.

    ``htau_i(x)`` is the lift of ``tgt(h(x))`` along ``E_{<i} -> E``.  When no
    lift exists the value is a placeholder and TG4 reports the element.
    """
    if F.E != G.E:
        raise FiltrationError("filtration and graph live over different objects")
    for x, r in choices.items():
        if x not in G.E:
            raise StrategyError(f"choice for unknown label {x!r}", witness=x)
        if r is not None and r not in G.R:
            raise StrategyError(f"choice {r!r} is not a rule", witness=x)
        if r is not None and G.src.image_of(r) != (x if G.kind is Kind.SET else Vec.basis(x)):
            raise StrategyError(f"rule {r!r} does not start at {x!r}", witness=x)
    h = _h_map(G, choices)
    RE = reflexive_sum(G)[0]
    htau = {}
    for i in F.poset.linear_extension:
        Ei = F.stage(i)
        low = F.below(i)
        if G.kind is Kind.SET:
            table = {}
            for x in Ei.labels:
                y = _lift_into(low.inj, RE.tgt.apply(h.apply(x)))
                if y is None:
                    y = low.obj.labels[0] if low.obj.labels else None
                if y is None:
                    raise StrategyError(f"stage below {i!r} is empty, no value for {x}", witness=x)
                table[x] = y
            htau[i] = C.set_map(Ei, low.obj, table)
        else:
            cols = {}
            for x in Ei.labels:
                y = _lift_into(low.inj, RE.tgt.apply(h.apply(Vec.basis(x))))
                cols[x] = y if y is not None else Vec()
            htau[i] = C.linear_map(Ei, low.obj, cols)
    return LocalStrategy(G, F, h, htau)


def verify_local_strategy(ls: LocalStrategy) -> Report:
    """TG1-TG4, naturality of ``htau`` over covers, and ``htau_i = id`` at minimal ``i``."""
    G, F = ls.graph, ls.F
    RE, _, u = ls.reflexive
    rep = Report("local strategy")
    # finite posets carry no infinite descending chains
    rep.add("TG1", True, detail=f"{len(F.poset.elements)} stages")
    idE = C.identity(G.E)
    rep.add("TG2", C.equal_maps(C.compose(RE.src, ls.h), idE), C.first_difference(C.compose(RE.src, ls.h), idE))
    bad = None
    for i in F.poset.minimal():
        lhs = C.compose(ls.h, F.inj(i))
        rhs = C.compose(u, F.inj(i))
        bad = C.first_difference(lhs, rhs)
        if bad is not None:
            break
    rep.add("TG3", bad is None, bad)
    bad = None
    for i in F.poset.linear_extension:
        lhs = C.compose(RE.tgt, C.compose(ls.h, F.inj(i)))
        rhs = C.compose(F.below(i).inj, ls.htau[i])
        bad = C.first_difference(lhs, rhs)
        if bad is not None:
            break
    rep.add("TG4", bad is None, bad)
    bad = None
    for a, b in F.poset.cover_list():
        lhs = C.compose(ls.htau[b], F.link(a, b))
        rhs = C.compose(F.below_link(a, b), ls.htau[a])
        diff = C.first_difference(lhs, rhs)
        if diff is not None:
            bad = (a, b, diff)
            break
    rep.add("natural", bad is None, bad)
    bad = None
    for i in F.poset.minimal():
        diff = C.first_difference(ls.htau[i], C.identity(F.stage(i)))
        if diff is not None:
            bad = diff
            break
    rep.add("min-identity", bad is None, bad, "derived from TG3 and TG4")
    return rep


# -- builders -----------------------------------------------------------------------


def choose_rules(G: InternalGraph, F: Filtration) -> dict[str, str | None]:
    """Canonical choices over a set graph: minimal target stage, then target, then rule.

    An element first appearing at a minimal stage gets the unit.  Otherwise
    only rules landing in ``E_{<i}`` for its first stage ``i`` are eligible.
    """
    if G.kind is not Kind.SET:
        raise KindMismatch("choose_rules handles set graphs")
    out: dict[str, str | None] = {}
    minimal = set(F.poset.minimal())
    rules = list(G.R.labels)
    for x in G.E.labels:
        firsts = F.first_stages(x)
        if any(i in minimal for i in firsts):
            out[x] = None
            continue
        i = firsts[0]
        low = F.below(i)
        cands = []
        for k, r in enumerate(rules):
            s, t = G.endpoints(r)
            if s == x and C.lift(low.inj, t) is not None:
                cands.append((F.stage_depth(t), G.E.index(t), k, r))
        out[x] = min(cands)[3] if cands else None
    return out


def strategy_for_set_graph(
    G: InternalGraph, F: Filtration, choices: Mapping[str, str | None] | None = None
) -> LocalStrategy:
    return local_strategy_from_choices(G, F, choose_rules(G, F) if choices is None else choices)


def strategy_from_set_relation(
    E: CarrierObject | Iterable[str], rel: Iterable[tuple[str, str]] | InternalGraph
) -> LocalStrategy:
    """Filtration by distance to normal forms and one step down per element."""
    if isinstance(rel, InternalGraph):
        G = rel
    else:
        G = set_graph(E, list(rel))
    pairs = [(s, t) for _, s, t in G.edges()]
    F = filtration_from_terminating_relation(G.E, pairs)
    return strategy_for_set_graph(G, F)


def strategy_from_algebraic_relation(ar: AlgebraicRelation) -> LocalStrategy:
    """Height filtration and, per basis element, its preferred rule (or the unit)."""
    ar.check_decreasing()
    G = rule_graph(ar)
    F = filtration_from_height(ar)
    choices = {}
    for x in ar.basis:
        r = ar.preferred_rule(x)
        choices[x] = r.id if r is not None else None
    return local_strategy_from_choices(G, F, choices)


def strategy_from_stages(
    G: InternalGraph, stages: list[Iterable[str]], choices: Mapping[str, str | None] | None = None
) -> LocalStrategy:
    """Strategy over a chain filtration given explicitly by its stages."""
    F = nat_filtration(G.E, [tuple(s) for s in stages])
    if choices is None:
        if G.kind is Kind.SET:
            return strategy_for_set_graph(G, F)
        raise StrategyError("choices are required for linear graphs with explicit stages")
    return local_strategy_from_choices(G, F, choices)


def transport_strategy(ls: LocalStrategy, f: GraphMorphism) -> LocalStrategy:
    """``(S, (f + id) ∘ h, htau)`` for a graph morphism ``f : R -> S``."""
    if f.source.R != ls.graph.R or f.source.E != ls.graph.E:
        raise StrategyError("morphism does not start at the strategy's graph")
    S = f.target
    RE_S = reflexive_sum(S)[0]
    fid = C.coproduct_of_maps(f.map, C.identity(S.E))
    h = C.compose(fid, ls.h)
    if h.cod != RE_S.R:
        raise StrategyError("transported map has the wrong codomain")
    return LocalStrategy(S, ls.F, h, dict(ls.htau))
