"""lc-structures, the generalized Newman lemma, and brute-force confluence suites.

An lc-structure orders the rules in a chain ``R_0 = ∅ ⊆ R_1 ⊆ ...`` and
gives, for each rule ``r : x -> y``, a conversion from ``tgt(h(x))`` to
``y`` that only uses rules of strictly earlier stages.  Induction along
that chain shows the induced global strategy is confluent.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import carrier as C
from .carrier import Kind
from .errors import Exhausted, InvalidLc, InvariantViolation, KindMismatch, NotDecreasing
from .filtration import DirectedPoset, Filtration, check_terminating, nat_filtration
from .graph import LinearStep, Path, SetStep, compose_paths, invert_path, step_source, step_target, unit_path
from .linear import (
    AlgebraicRelation,
    WfStep,
    alg_step,
    congruence_quotient,
    rule_span_rank,
    wf_normalize,
    wf_reachable,
    wf_step,
    wf_successors,
)
from .report import Report
from .strategy import (
    Certificate,
    GlobalStrategy,
    induce_global_strategy,
    is_confluent_strategy,
    split_coequalizer_certificate,
)
from .termination import LocalStrategy, strategy_from_algebraic_relation, verify_local_strategy
from .unionfind import UnionFind
from .vector import Vec


@dataclass(frozen=True, eq=False)
class LcStructure:
    """``Rstage`` filters ``R`` along the chain ``J``; ``conv[r]`` is the conversion of rule ``r``."""

    base: LocalStrategy
    J: DirectedPoset
    Rstage: Filtration
    conv: Mapping[str, Path]

    def first_stage(self, r: str):
        return self.Rstage.first_stages(r)[0]

    def rules_below(self, j) -> set[str]:
        return {r for k in self.J.below(j) for r in self.Rstage.stages[k]}


def lc_structure(base: LocalStrategy, rounds: Sequence[Iterable[str]], conv: Mapping[str, Path]) -> LcStructure:
    """Build an lc-structure from rule rounds; round 0 is the empty stage."""
    stages: list[list[str]] = [[]]
    acc: list[str] = []
    for rnd in rounds:
        acc = acc + list(rnd)
        stages.append(list(acc))
    Rf = nat_filtration(base.graph.R, stages)
    return LcStructure(base, Rf.poset, Rf, dict(conv))


def _uses(path: Path) -> frozenset[str]:
    return path.rules_used()


def verify_lc_structure(lc: LcStructure) -> Report:
    ls, G = lc.base, lc.base.graph
    vect = G.kind is Kind.VECT
    rep = Report("lc-structure")
    base_ok = verify_local_strategy(ls)
    rep.add("local strategy", base_ok.ok, [c.name for c in base_ok.failures()])
    rep.add("J total", lc.J.is_total(), None)
    empty_min = all(not lc.Rstage.stages[m] for m in lc.J.minimal())
    rep.add("min(R) empty", empty_min, next((m for m in lc.J.minimal() if lc.Rstage.stages[m]), None))
    missing = [r for r in G.R.labels if r not in lc.conv]
    rep.add("conv total", not missing, missing[:1] or None)
    bad1 = bad2 = bad3 = None
    for r in G.R.labels:
        if r not in lc.conv:
            continue
        p = lc.conv[r]
        e = Vec.basis(r) if vect else r
        start = ls.step_target(G.src.apply(e))
        if bad1 is None and p.source != start:
            bad1 = r
        if bad2 is None and p.target != G.tgt.apply(e):
            bad2 = r
        if bad3 is None and not _uses(p) <= lc.rules_below(lc.first_stage(r)):
            bad3 = r
    rep.add("LC-eq-1", bad1 is None, bad1)
    rep.add("LC-eq-2", bad2 is None, bad2)
    rep.add("strictly lower", bad3 is None, bad3)
    # one conversion per rule, inherited by every later stage; links are inclusions
    bad = None
    for a, b in lc.J.cover_list():
        if not set(lc.Rstage.stages[a]) <= set(lc.Rstage.stages[b]):
            bad = (a, b)
    rep.add("natural", bad is None, bad)
    return rep


# -- search over set graphs -----------------------------------------------------------


def _conversion_bfs(G, start: str, goal: str, allowed: Sequence[str], depth_cap: int) -> Path | None:
    """Shortest conversion using ``allowed`` rules, exploring moves in a fixed order."""
    moves: dict[str, list[SetStep]] = {}
    for r in allowed:
        s, t = G.endpoints(r)
        moves.setdefault(s, []).append(SetStep(r, True))
    for r in allowed:
        s, t = G.endpoints(r)
        moves.setdefault(t, []).append(SetStep(r, False))
    prev: dict[str, tuple[str, SetStep] | None] = {start: None}
    queue = deque([(start, 0)])
    while queue:
        here, d = queue.popleft()
        if here == goal:
            steps = []
            while prev[here] is not None:
                back, st = prev[here]
                steps.append(st)
                here = back
            return Path(G, start, tuple(reversed(steps)))
        if d >= depth_cap:
            continue
        for st in moves.get(here, []):
            nxt = step_target(G, st)
            if nxt not in prev:
                prev[nxt] = (here, st)
                queue.append((nxt, d + 1))
    return None


def search_lc_structure_set(ls: LocalStrategy, depth_cap: int | None = None) -> LcStructure:
    """Place rules in rounds: a rule joins once a conversion over earlier rounds exists.

    Round ``k`` may use rules of rounds ``< k`` only, so the rounds form a
    total order on stages with ``R_0 = ∅``.  Placement is monotone, hence the
    procedure finds a structure whenever one exists for this strategy.
    """
    G = ls.graph
    if G.kind is not Kind.SET:
        raise KindMismatch("set search needs a set graph")
    cap = 2 * len(G.E) if depth_cap is None else depth_cap
    order = list(G.R.labels)
    placed: list[str] = []
    rounds: list[list[str]] = []
    conv: dict[str, Path] = {}
    pending = list(order)
    while pending:
        fresh = []
        for r in pending:
            s, t = G.endpoints(r)
            p = _conversion_bfs(G, ls.step_target(s), t, placed, cap)
            if p is not None:
                conv[r] = p
                fresh.append(r)
        if not fresh:
            r = pending[0]
            raise Exhausted(f"no conversion for rule {r} from lower stages", witness=r)
        rounds.append(fresh)
        placed = placed + fresh
        pending = [r for r in pending if r not in set(fresh)]
    return lc_structure(ls, rounds, conv)


# -- algebraic relations --------------------------------------------------------------


def _trace_path(G, start: Vec, trace: Sequence[WfStep]) -> Path:
    steps = tuple(LinearStep(forward=Vec.basis(s.rule, s.coefficient), ident=s.context) for s in trace)
    return Path(G, start, steps)


def lc_structure_from_ac1(ls: LocalStrategy, ar: AlgebraicRelation) -> LcStructure:
    """Conversions from normalizing both sides of each basis peak.

    For ``r : x -> u`` with chosen step ``x -> u0``: reduce ``u0`` and ``u``
    to normal form and join the two traces.  A rule sits one round above
    every rule its conversion uses.
    """
    G = ls.graph
    conv: dict[str, Path] = {}
    for rule in ar.rules:
        u0 = ls.step_target(Vec.basis(rule.lhs))
        if u0 == rule.rhs:
            conv[rule.id] = unit_path(G, u0)
            continue
        left, right = wf_normalize(ar, u0), wf_normalize(ar, rule.rhs)
        if left.value != right.value:
            raise Exhausted(f"peak at {rule.lhs} does not join for rule {rule.id}", witness=rule.id)
        p = _trace_path(G, u0, left.trace)
        q = invert_path(_trace_path(G, rule.rhs, right.trace))
        conv[rule.id] = compose_paths(p, q)
    level: dict[str, int] = {}
    for rule in sorted(ar.rules, key=lambda r: ar.order_key(r.lhs)):
        used = conv[rule.id].rules_used()
        level[rule.id] = 1 + max((level[u] for u in used), default=0)
    top = max(level.values(), default=0)
    rounds = [[r.id for r in ar.rules if level[r.id] == k] for k in range(1, top + 1)]
    return lc_structure(ls, rounds, conv)


# -- Newman -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NewmanResult:
    lc: LcStructure
    strategy: GlobalStrategy
    certificate: Certificate
    audit: Report


def newman(lc: LcStructure) -> NewmanResult:
    """Confluence from an lc-structure, re-checking each stage of the induction."""
    rep = verify_lc_structure(lc)
    if not rep.ok:
        bad = rep.failures()[0]
        raise InvalidLc(f"lc-structure fails {bad.name}", report=rep, witness=bad.witness)
    gs = induce_global_strategy(lc.base)
    G, ls = gs.graph, lc.base
    vect = G.kind is Kind.VECT
    nf = gs.Htau.apply
    audit = Report("newman induction")
    for j in lc.J.linear_extension:
        new = [r for r in lc.Rstage.stages[j] if lc.first_stage(r) == j]
        bad = None
        for r in new:
            e = Vec.basis(r) if vect else r
            s, t = G.src.apply(e), G.tgt.apply(e)
            chain = [s, ls.step_target(s)]
            p = lc.conv[r]
            chain.append(p.source)
            chain += [step_target(G, st) for st in p.steps]
            chain.append(t)
            values = [nf(c) for c in chain]
            if any(v != values[0] for v in values):
                bad = r
                break
        audit.add(f"stage {j}", bad is None, bad, f"{len(new)} rules")
        if bad is not None:
            raise InvariantViolation(f"confluence chain breaks at rule {bad}", witness=bad)
    res = is_confluent_strategy(gs)
    if not res:
        raise InvariantViolation("valid lc-structure but strategy not confluent", witness=res.witness)
    cert = split_coequalizer_certificate(gs)
    if not cert.ok:
        raise InvariantViolation("certificate equations fail after confluence")
    return NewmanResult(lc, gs, cert, audit)


# -- set suites -----------------------------------------------------------------------


def _reach(elements: Sequence[str], pairs: Sequence[tuple[str, str]]) -> dict[str, set[str]]:
    succ: dict[str, list[str]] = {x: [] for x in elements}
    for x, y in pairs:
        succ[x].append(y)
    out = {}
    for x in elements:
        seen = {x}
        stack = [x]
        while stack:
            for y in succ[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out[x] = seen
    return out


def sc_suite(elements: Iterable[str], rel: Iterable[tuple[str, str]]) -> Report:
    """SC1-SC4 decided by brute force, plus their agreement."""
    elements = list(elements)
    rel = list(rel)
    check_terminating(elements, rel)
    reach = _reach(elements, rel)
    succ: dict[str, list[str]] = {x: [] for x in elements}
    for x, y in rel:
        succ[x].append(y)

    def joinable(a, b):
        return bool(reach[a] & reach[b])

    def first_bad(pairs):
        return next(((a, b) for a, b in pairs if not joinable(a, b)), None)

    sc1 = first_bad((b, c) for x in elements for b in succ[x] for c in succ[x])
    sc2 = first_bad((b, c) for x in elements for b in sorted(reach[x]) for c in sorted(reach[x]))
    uf = UnionFind(elements, key=elements.index)
    for x, y in rel:
        uf.union(x, y)
    sc3 = first_bad((b, c) for b in elements for c in elements if uf.find(b) == uf.find(c))
    nfs = [x for x in elements if not succ[x]]
    classes = {}
    sc4 = None
    for x in nfs:
        root = uf.find(x)
        if root in classes:
            sc4 = (classes[root], x)
            break
        classes[root] = x
    if sc4 is None:
        empty = next((r for r in uf.classes() if r not in classes), None)
        sc4 = None if empty is None else (empty,)
    rep = Report("set confluence")
    values = []
    for name, bad in (("SC1", sc1), ("SC2", sc2), ("SC3", sc3), ("SC4", sc4)):
        rep.add(name, bad is None, bad)
        values.append(bad is None)
    rep.add("agree", len(set(values)) == 1, values)
    return rep


def suite_values(rep: Report, names: Sequence[str]) -> list[bool]:
    return [rep.get(n).passed for n in names]


def suite_agrees(rep: Report) -> bool:
    return rep.get("agree").passed


# -- algebraic suites ---------------------------------------------------------------


def _truncation(ar: AlgebraicRelation, seeds: Iterable[Vec]) -> tuple[list[Vec], list[tuple[Vec, Vec]]]:
    nodes: set[Vec] = set()
    for s in seeds:
        nodes |= wf_reachable(ar, s)
    order = sorted(nodes, key=lambda v: sorted((k, str(c)) for k, c in v.items()))
    edges = [(w, s.after) for w in order for s in wf_successors(ar, w)]
    return order, edges


def ac_suite(ar: AlgebraicRelation) -> Report:
    """AC1 by joining basis peaks, AC2 on a reachable fragment, AC3 by rank."""
    ar.check_decreasing()
    rep = Report("algebraic confluence")
    bad = None
    for x in ar.basis:
        rules = ar.rules_for(x)
        for r1, r2 in itertools.combinations(rules, 2):
            if not wf_reachable(ar, r1.rhs) & wf_reachable(ar, r2.rhs):
                bad = (r1.id, r2.id)
                break
        if bad:
            break
    ac1 = bad is None
    rep.add("AC1", ac1, bad)
    seeds = [Vec.basis(x) for x in ar.basis]
    seeds += [Vec.basis(x) + Vec.basis(y) for x, y in itertools.combinations(ar.basis, 2)]
    nodes, edges = _truncation(ar, seeds)
    names = {v: f"v{k}" for k, v in enumerate(nodes)}
    sc = sc_suite([names[v] for v in nodes], [(names[a], names[b]) for a, b in edges])
    ac2 = all(suite_values(sc, ["SC1", "SC2", "SC3", "SC4"])) and suite_agrees(sc)
    rep.add("AC2", ac2, [c.name for c in sc.failures()], f"{len(nodes)} vectors")
    cq = congruence_quotient(ar)
    ac3 = cq.is_iso
    rank_ok = len(ar.basis) - rule_span_rank(ar) == len(ar.normal_labels())
    rep.add("AC3", ac3, len(cq.obj))
    rep.add("rank oracle", rank_ok == ac3, (rank_ok, ac3))
    rep.add("agree", ac1 == ac2 == ac3, [ac1, ac2, ac3])
    return rep


def _random_vec(rng: random.Random, basis: Sequence[str], lo: int = -2, hi: int = 2) -> Vec:
    return Vec((x, rng.randint(lo, hi)) for x in basis)


def bridge_lemma_check(ar: AlgebraicRelation, trials: int, rng: random.Random | int = 0) -> Report:
    """``u ->alg v`` implies ``u ->wf= w <-wf= v`` for some ``w``; random steps plus basis clause."""
    rng = random.Random(rng) if isinstance(rng, int) else rng
    rep = Report("bridge lemma")
    bad = None
    for x in ar.basis:
        b = Vec.basis(x)
        rhs_by_rule = {r.rhs for r in ar.rules_for(x)}
        wf = {s.after for s in wf_successors(ar, b)}
        stepped = {wf_step(ar, b, r, 1, Vec()) for r in ar.rules_for(x)}
        if wf != rhs_by_rule or stepped != rhs_by_rule:
            bad = x
            break
    rep.add("basis clause", bad is None, bad)
    reducible = [x for x in ar.basis if ar.rules_for(x)]
    failures = []
    done = 0
    for _ in range(trials if reducible else 0):
        x = rng.choice(reducible)
        rule = rng.choice(ar.rules_for(x))
        lam = rng.randint(-2, 2)
        ctx = _random_vec(rng, ar.basis)
        u = Vec.basis(x, lam) + ctx
        v = alg_step(ar, u, rule, lam, ctx)
        left = {u} | {s.after for s in wf_successors(ar, u)}
        right = {v} | {s.after for s in wf_successors(ar, v)}
        done += 1
        if not left & right:
            failures.append((str(u), rule.id, str(v)))
    rep.add("one-step join", not failures, failures[:1] or None, f"{done} trials, {len(failures)} counterexamples")
    return rep


def newman_algebraic(ar: AlgebraicRelation) -> NewmanResult:
    ls = strategy_from_algebraic_relation(ar)
    return newman(lc_structure_from_ac1(ls, ar))
