"""Universal properties of graph closures and two finite sanity laws.

``closure_universal_check`` enumerates every structure-preserving map from
a truncated closure of ``R`` into a structured set graph ``S`` and compares
the result with the explicit fold.  The closure elements are paths:

* ``refl``: the units and the single forward steps (``R + E``);
* ``sym``: single steps in either direction (``R + R°``);
* ``trans`` / ``refltrans`` / ``reflsymtrans``: paths up to a fixed length,
  forward only or both ways, with or without units.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import carrier as C
from .carrier import CarrierObject, Kind
from .errors import BoundExceeded, KindMismatch, NotAMorphism, StructureError
from .graph import (
    GraphMorphism,
    InternalGraph,
    Path,
    SetStep,
    graph_sum,
    invert_path,
    opposite,
    quotient_by_graph,
    set_graph,
    truncated_closure,
    unit_path,
)

KINDS = ("refl", "sym", "trans", "refltrans", "reflsymtrans")
_NEEDS = {
    "refl": {"unit"},
    "sym": {"sym"},
    "trans": {"mult"},
    "refltrans": {"unit", "mult"},
    "reflsymtrans": {"unit", "sym", "mult"},
}


@dataclass(frozen=True, eq=False)
class GraphStructure:
    """A set graph with optional unit ``E -> S``, symmetry ``S° -> S`` and product ``SS -> S``."""

    graph: InternalGraph
    unit: Mapping[str, str] | None = None
    sym: Mapping[str, str] | None = None
    mult: Mapping[tuple[str, str], str] | None = None

    def __post_init__(self):
        S = self.graph
        if S.kind is not Kind.SET:
            raise KindMismatch("structures are enumerated on set graphs")
        if self.unit is not None:
            for x in S.E.labels:
                e = self.unit.get(x)
                if e is None or S.endpoints(e) != (x, x):
                    raise NotAMorphism(f"unit at {x} is not a loop at {x}", witness=x)
        if self.sym is not None:
            for e in S.R.labels:
                s, t = S.endpoints(e)
                f = self.sym.get(e)
                if f is None or S.endpoints(f) != (t, s):
                    raise NotAMorphism(f"symmetry at {e} does not reverse it", witness=e)
        if self.mult is not None:
            for a in S.R.labels:
                for b in S.R.labels:
                    if S.tgt.apply(a) == S.src.apply(b):
                        m = self.mult.get((a, b))
                        if m is None or S.endpoints(m) != (S.src.apply(a), S.tgt.apply(b)):
                            raise NotAMorphism(f"product of {a},{b} has wrong ends", witness=(a, b))

    def has(self, which: str) -> bool:
        present = {n for n, v in (("unit", self.unit), ("sym", self.sym), ("mult", self.mult)) if v is not None}
        return _NEEDS[which] <= present


def _closure_pairs(E: Sequence[str], pairs: Iterable[tuple[str, str]], which: str) -> set[tuple[str, str]]:
    rel = set(pairs)
    if "sym" in which:
        rel |= {(y, x) for x, y in rel}
    if "refl" in which:
        rel |= {(x, x) for x in E}
    if "trans" in which:
        changed = True
        while changed:
            extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
            rel |= extra
            changed = bool(extra)
    return rel


def relation_structure(E: Sequence[str], pairs: Iterable[tuple[str, str]], which: str, bits: int = 1) -> GraphStructure:
    """The ``which``-closure of a relation, each pair carried ``bits`` times.

    With ``bits = 2`` an edge is a pair plus a parity; products add parities
    and units have parity 0, so extensions are no longer forced by the ends.
    """
    E = list(E)
    rel = sorted(_closure_pairs(E, pairs, which), key=lambda p: (E.index(p[0]), E.index(p[1])))
    edges = {}
    for x, y in rel:
        for b in range(bits):
            edges[f"{x}->{y}" if bits == 1 else f"{x}->{y}#{b}"] = (x, y)
    S = set_graph(E, edges)

    def name(x, y, b):
        return f"{x}->{y}" if bits == 1 else f"{x}->{y}#{b}"

    def bit(e):
        return 0 if bits == 1 else int(e.rsplit("#", 1)[1])

    unit = sym = mult = None
    if "refl" in which:
        unit = {x: name(x, x, 0) for x in E}
    if "sym" in which:
        sym = {e: name(t, s, bit(e)) for e, (s, t) in edges.items()}
    if "trans" in which:
        mult = {}
        for a, (s1, t1) in edges.items():
            for b, (s2, t2) in edges.items():
                if t1 == s2:
                    mult[(a, b)] = name(s1, t2, (bit(a) + bit(b)) % bits)
    return GraphStructure(S, unit, sym, mult)


def full_relation_structure(E: Sequence[str], which: str = "reflsymtrans") -> GraphStructure:
    return relation_structure(E, [(x, y) for x in E for y in E], which)


def closure_elements(R: InternalGraph, which: str, length: int = 3) -> list[Path]:
    """Elements of the truncated closure as paths, shortest first."""
    if which not in KINDS:
        raise ValueError(f"unknown closure {which!r}")
    both = "sym" in which
    units = "refl" in which
    max_len = length if "trans" in which else 1
    moves = [SetStep(r, True) for r in R.R.labels]
    if both:
        moves += [SetStep(r, False) for r in R.R.labels]
    layer = [unit_path(R, x) for x in R.E.labels]
    out = list(layer) if units else []
    for _ in range(max_len):
        nxt = []
        for p in layer:
            for m in moves:
                s, t = R.endpoints(m.rule)
                start = s if m.forward else t
                if start == p.target:
                    nxt.append(Path(R, p.anchor, p.steps + (m,)))
        out.extend(nxt)
        layer = nxt
    return out


def _constraints(R: InternalGraph, elems: list[Path], which: str) -> list[tuple]:
    index = {(p.anchor, p.steps): k for k, p in enumerate(elems)}
    out = []
    if "refl" in which:
        for k, p in enumerate(elems):
            if not p.steps:
                out.append(("unit", k, p.anchor))
    if "sym" in which:
        for k, p in enumerate(elems):
            if p.steps:
                inv = invert_path(p)
                out.append(("sym", index[(inv.anchor, inv.steps)], k))
    if "trans" in which:
        units = "refl" in which
        longest = max((len(p.steps) for p in elems), default=0)
        by_source: dict[str, list[int]] = {}
        for k, p in enumerate(elems):
            by_source.setdefault(p.anchor, []).append(k)
        for a, p in enumerate(elems):
            for b in by_source.get(p.target, []):
                q = elems[b]
                if not units and (not p.steps or not q.steps):
                    continue
                if len(p.steps) + len(q.steps) > longest:
                    continue
                pq = index.get((p.anchor, p.steps + q.steps))
                if pq is not None:
                    out.append(("mult", pq, a, b))
    return out


def _explicit(S: GraphStructure, f: Mapping[str, str], p: Path) -> str:
    if not p.steps:
        return S.unit[p.anchor]
    images = [f[s.rule] if s.forward else S.sym[f[s.rule]] for s in p.steps]
    acc = images[0]
    for e in images[1:]:
        acc = S.mult[(acc, e)]
    return acc


@dataclass(frozen=True)
class UniversalCheck:
    which: str
    solutions: int
    matches_explicit: bool
    elements: int

    @property
    def exists(self) -> bool:
        return self.solutions >= 1

    @property
    def unique(self) -> bool:
        return self.solutions == 1

    def __bool__(self) -> bool:
        return self.unique and self.matches_explicit


def closure_universal_check(
    R: InternalGraph,
    S: GraphStructure,
    f: Mapping[str, str],
    which: str,
    bound: int = 5,
    length: int = 3,
) -> UniversalCheck:
    """Count structure-preserving maps ``closure(R) -> S`` extending ``f`` (up to 2).

    Passes when there is exactly one and it is the fold of ``f`` through the
    structure maps of ``S``.
    """
    if R.kind is not Kind.SET:
        raise KindMismatch("universal check is for set graphs")
    Sg = S.graph
    if len(Sg.R) > bound:
        raise BoundExceeded(f"target has {len(Sg.R)} edges, bound is {bound}", witness=len(Sg.R))
    if not S.has(which):
        raise StructureError(f"target graph carries no {which} structure", witness=which)
    GraphMorphism(R, Sg, C.set_map(R.R, Sg.R, f))
    elems = closure_elements(R, which, length)
    cons = _constraints(R, elems, which)
    cands = []
    for p in elems:
        if len(p.steps) == 1 and p.steps[0].forward:
            cands.append([f[p.steps[0].rule]])
        else:
            cands.append([e for e in Sg.R.labels if Sg.endpoints(e) == (p.source, p.target)])
    watch: dict[int, list[tuple]] = {}
    for c in cons:
        watch.setdefault(max(_slots(c)), []).append(c)
    assign: list[str | None] = [None] * len(elems)
    found: list[list[str]] = []

    def ok(c) -> bool:
        if c[0] == "unit":
            return assign[c[1]] == S.unit[c[2]]
        if c[0] == "sym":
            return assign[c[1]] == S.sym[assign[c[2]]]
        return assign[c[1]] == S.mult[(assign[c[2]], assign[c[3]])]

    def go(k: int) -> None:
        if len(found) >= 2:
            return
        if k == len(elems):
            found.append(list(assign))
            return
        for e in cands[k]:
            assign[k] = e
            if all(ok(c) for c in watch.get(k, [])):
                go(k + 1)
        assign[k] = None

    go(0)
    explicit = [_explicit(S, f, p) for p in elems]
    matches = len(found) == 1 and found[0] == explicit
    return UniversalCheck(which, len(found), matches, len(elems))


def _slots(c: tuple) -> list[int]:
    return [c[1]] if c[0] == "unit" else list(c[1:])


def small_graphs(max_vertices: int = 4, max_edges: int = 3) -> list[InternalGraph]:
    """Set graphs up to relabelling of vertices, edges as a multiset of pairs."""
    out = []
    for n in range(1, max_vertices + 1):
        E = [chr(ord("a") + k) for k in range(n)]
        pairs = [(x, y) for x in E for y in E]
        seen = set()
        perms = list(itertools.permutations(range(n)))
        for m in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(range(len(pairs)), m):
                edges = [pairs[k] for k in combo]
                key = min(
                    tuple(sorted((p[E.index(x)], p[E.index(y)]) for x, y in edges)) for p in perms
                )
                if key in seen:
                    continue
                seen.add(key)
                out.append(set_graph(E, {f"r{k}": e for k, e in enumerate(edges)}))
    return out


# -- quotient invariance and colimit stability ------------------------------------------


def quotient_invariance(R: InternalGraph, length: int = 2) -> dict[str, bool]:
    """``E/R`` against ``E/(R + R°)``, ``E/R*`` and ``E/R^sym`` (truncated), via the comparison map."""
    _, q = quotient_by_graph(R)
    others = {
        "R+R°": graph_sum(R, opposite(R)),
        "R*": truncated_closure(R, "refltrans", length),
        "Rsym": truncated_closure(R, "reflsymtrans", length),
    }
    out = {}
    for name, G in others.items():
        _, q2 = quotient_by_graph(G)
        try:
            out[name] = C.is_isomorphism(C.canonical_comparison(q, q2)) and C.is_isomorphism(
                C.canonical_comparison(q2, q)
            )
        except ValueError:
            out[name] = False
    return out


def subgraph(R: InternalGraph, labels: Iterable[str]) -> InternalGraph:
    inc = C.inclusion(labels, R.R)
    return InternalGraph(R.E, inc.dom, C.compose(R.src, inc), C.compose(R.tgt, inc))


def _pair_image(R: InternalGraph, sub: InternalGraph):
    """Image of ``sub·sub`` inside ``R ⊕ R`` (spaces) or ``R × R`` (sets)."""
    P, p1, p2 = C.pullback(sub.tgt, sub.src)
    i = C.inclusion(sub.R.labels, R.R)
    if R.kind is Kind.SET:
        return {(i.apply(p1.apply(z)), i.apply(p2.apply(z))) for z in P.labels}
    _, j1, j2 = C.coproduct(R.R, R.R)
    a = C.compose(j1, C.compose(i, p1))
    b = C.compose(j2, C.compose(i, p2))
    return [a.image_of(z) + b.image_of(z) for z in P.labels]


def colimit_stability(R: InternalGraph, chain: Sequence[Sequence[str]]) -> dict[str, bool]:
    """Stage-wise products of a chain of subgraphs exhaust the product of the union."""
    from . import linalg

    subs = [subgraph(R, s) for s in chain]
    union = sorted(set().union(*map(set, chain)), key=R.R.index)
    full = subgraph(R, union)
    images = [_pair_image(R, s) for s in subs]
    target = _pair_image(R, full)
    if R.kind is Kind.SET:
        monotone = all(a <= b for a, b in zip(images, images[1:]))
        return {"monotone": monotone, "union": set().union(*images) == target}
    labels = C.coproduct(R.R, R.R)[0].labels

    def rank(vecs):
        rows = [[v.coeff(x) for x in labels] for v in vecs]
        return linalg.rank(rows, len(labels)) if rows else 0

    ranks = [rank(im) for im in images]
    monotone = all(rank(a + b) == rank(b) for a, b in zip(images, images[1:]))
    together = [v for im in images for v in im]
    same = rank(together) == rank(target) == rank(together + target)
    return {"monotone": monotone and ranks == sorted(ranks), "union": same}
