"""Internal graphs over a carrier object and symbolic paths in their closures.

A graph ``R`` over ``E`` is a pair of maps ``src, tgt : R -> E``.  The
transitive closure is a countable coproduct of iterated pullbacks, so it is
never built as an object: a :class:`Path` is a finite, validated element of
one of its components.  Over vector spaces a path is a sequence of
:class:`LinearStep` values, each an element of ``R + R° + E``, with the
endpoint equations checked exactly on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from . import carrier as C
from .carrier import CarrierMap, CarrierObject, Element, Kind
from .errors import BaseMismatch, KindMismatch, NotAMorphism, NotComposable
from .vector import Vec, as_fraction


@dataclass(frozen=True)
class InternalGraph:
    E: CarrierObject
    R: CarrierObject
    src: CarrierMap
    tgt: CarrierMap

    def __post_init__(self):
        for name, m in (("src", self.src), ("tgt", self.tgt)):
            if m.dom != self.R or m.cod != self.E:
                raise ValueError(f"{name} must be a map R -> E")

    @property
    def kind(self) -> Kind:
        return self.E.kind

    def endpoints(self, r: str) -> tuple[Element, Element]:
        return self.src.image_of(r), self.tgt.image_of(r)

    def edges(self) -> list[tuple[str, Element, Element]]:
        return [(r, *self.endpoints(r)) for r in self.R.labels]


def edge_label(x: str, y: str) -> str:
    return f"{x}->{y}"


def set_graph(elements: Iterable[str] | CarrierObject, edges) -> InternalGraph:
    """Graph over a finite set.

    ``edges`` is a mapping ``id -> (source, target)`` or a sequence of pairs,
    in which case each edge is labelled ``"x->y"``.
    """
    E = elements if isinstance(elements, CarrierObject) else C.finite_set(elements)
    if isinstance(edges, Mapping):
        items = list(edges.items())
    else:
        seen: dict[str, tuple[str, str]] = {}
        for x, y in edges:
            seen.setdefault(edge_label(x, y), (x, y))
        items = list(seen.items())
    R = C.finite_set(r for r, _ in items)
    src = CarrierMap(R, E, tuple(x for _, (x, _) in items))
    tgt = CarrierMap(R, E, tuple(y for _, (_, y) in items))
    return InternalGraph(E, R, src, tgt)


def linear_graph(E: CarrierObject, edges: Mapping[str, tuple[Vec, Vec]]) -> InternalGraph:
    """Graph over a vector space whose ``R`` has one basis vector per edge id."""
    R = C.vector_space(edges)
    src = C.linear_map(R, E, {r: s for r, (s, _) in edges.items()})
    tgt = C.linear_map(R, E, {r: t for r, (_, t) in edges.items()})
    return InternalGraph(E, R, src, tgt)


def relation_pairs(G: InternalGraph) -> list[tuple[str, str]]:
    if G.kind is not Kind.SET:
        raise KindMismatch("relation_pairs needs a set graph")
    return [(s, t) for _, s, t in G.edges()]


# -- operations on graphs ------------------------------------------------------


def identity_graph(E: CarrierObject) -> InternalGraph:
    i = C.identity(E)
    return InternalGraph(E, E, i, i)


def empty_graph(E: CarrierObject) -> InternalGraph:
    R = C.empty(E.kind)
    if E.kind is Kind.SET:
        m = CarrierMap(R, E, ())
    else:
        m = CarrierMap(R, E, tuple(() for _ in E.labels))
    return InternalGraph(E, R, m, m)


def _same_base(R: InternalGraph, S: InternalGraph) -> None:
    if R.E != S.E:
        raise BaseMismatch(f"graphs over different objects {R.E!r} and {S.E!r}")


def product_projections(R: InternalGraph, S: InternalGraph) -> tuple[InternalGraph, CarrierMap, CarrierMap]:
    """``RS`` with its two projections; pairs (r, s) with tgt(r) = src(s)."""
    _same_base(R, S)
    P, p1, p2 = C.pullback(R.tgt, S.src)
    return InternalGraph(R.E, P, C.compose(R.src, p1), C.compose(S.tgt, p2)), p1, p2


def graph_product(R: InternalGraph, S: InternalGraph) -> InternalGraph:
    return product_projections(R, S)[0]


def sum_many(graphs: Sequence[InternalGraph], tags: Sequence[str]) -> tuple[InternalGraph, list[CarrierMap]]:
    for g in graphs[1:]:
        _same_base(graphs[0], g)
    obj, injections = C.coproduct_many([g.R for g in graphs], tags)
    src = C.copair_many([g.src for g in graphs], tags)
    tgt = C.copair_many([g.tgt for g in graphs], tags)
    return InternalGraph(graphs[0].E, obj, src, tgt), injections


def sum_injections(R: InternalGraph, S: InternalGraph) -> tuple[InternalGraph, CarrierMap, CarrierMap]:
    g, (i1, i2) = sum_many([R, S], ["L", "R"])
    return g, i1, i2


def graph_sum(R: InternalGraph, S: InternalGraph) -> InternalGraph:
    return sum_injections(R, S)[0]


def opposite(R: InternalGraph) -> InternalGraph:
    return InternalGraph(R.E, R.R, R.tgt, R.src)


def reflexive_sum(R: InternalGraph) -> tuple[InternalGraph, CarrierMap, CarrierMap]:
    """``R + E`` with the inclusion of ``R`` and the unit ``u : E -> R + E``."""
    return sum_injections(R, identity_graph(R.E))


@dataclass(frozen=True)
class GraphMorphism:
    source: InternalGraph
    target: InternalGraph
    map: CarrierMap

    def __post_init__(self):
        _same_base(self.source, self.target)
        if self.map.dom != self.source.R or self.map.cod != self.target.R:
            raise NotAMorphism("underlying map has the wrong domain or codomain")
        if not C.equal_maps(C.compose(self.target.src, self.map), self.source.src):
            raise NotAMorphism("map does not commute with sources")
        if not C.equal_maps(C.compose(self.target.tgt, self.map), self.source.tgt):
            raise NotAMorphism("map does not commute with targets")


def identity_morphism(R: InternalGraph) -> GraphMorphism:
    return GraphMorphism(R, R, C.identity(R.R))


def quotient_by_graph(R: InternalGraph) -> tuple[CarrierObject, CarrierMap]:
    """``E/R``: the coequalizer of source and target."""
    return C.coequalizer(R.src, R.tgt)


def truncated_closure(R: InternalGraph, which: str, length: int) -> InternalGraph:
    """Finite part of a closure of ``R``: path components of length <= ``length``.

    ``which`` is one of ``refl``, ``sym``, ``trans``, ``refltrans``,
    ``reflsymtrans``.  The components are real iterated pullbacks.
    """
    which = which.lower()
    base = graph_sum(R, opposite(R)) if which in ("sym", "reflsymtrans") else R
    if which in ("refl", "sym"):
        parts, tags = [base], ["1"]
    elif which in ("trans", "refltrans", "reflsymtrans"):
        parts, tags = [base], ["1"]
        power = base
        for n in range(2, length + 1):
            power = graph_product(power, base)
            parts.append(power)
            tags.append(str(n))
    else:
        raise ValueError(f"unknown closure {which!r}")
    if which in ("refl", "refltrans", "reflsymtrans"):
        parts.append(identity_graph(R.E))
        tags.append("0")
    return sum_many(parts, tags)[0]


# -- paths ------------------------------------------------------------------------


@dataclass(frozen=True)
class SetStep:
    rule: str
    forward: bool = True


@dataclass(frozen=True)
class LinearStep:
    """An element of ``R + R° + E``: forward rules, reversed rules, identity part."""

    forward: Vec = field(default_factory=Vec)
    backward: Vec = field(default_factory=Vec)
    ident: Vec = field(default_factory=Vec)

    def rules(self) -> frozenset[str]:
        return self.forward.support() | self.backward.support()

    def scaled(self, c) -> LinearStep:
        return LinearStep(self.forward * c, self.backward * c, self.ident * c)

    def __add__(self, other: LinearStep) -> LinearStep:
        return LinearStep(self.forward + other.forward, self.backward + other.backward, self.ident + other.ident)


Step = Union[SetStep, LinearStep]


def step_source(G: InternalGraph, step: Step) -> Element:
    if isinstance(step, SetStep):
        s, t = G.endpoints(step.rule)
        return s if step.forward else t
    return G.src.apply(step.forward) + G.tgt.apply(step.backward) + step.ident


def step_target(G: InternalGraph, step: Step) -> Element:
    if isinstance(step, SetStep):
        s, t = G.endpoints(step.rule)
        return t if step.forward else s
    return G.tgt.apply(step.forward) + G.src.apply(step.backward) + step.ident


@dataclass(frozen=True)
class Path:
    """A composable sequence of steps starting at ``anchor``.

    The empty path is the reflexive unit at ``anchor``.
    """

    graph: InternalGraph = field(compare=False, repr=False)
    anchor: Element
    steps: tuple[Step, ...] = ()
    target: Element = field(init=False, compare=False)

    def __post_init__(self):
        G = self.graph
        if not G.E.contains_element(self.anchor):
            raise ValueError(f"anchor {self.anchor!r} is not an element of {G.E!r}")
        here = self.anchor
        for k, step in enumerate(self.steps):
            if isinstance(step, SetStep) != (G.kind is Kind.SET):
                raise KindMismatch("step kind does not match the graph")
            start = step_source(G, step)
            if start != here:
                raise NotComposable(f"step {k} starts at {start!r}, path is at {here!r}", witness=k)
            here = step_target(G, step)
        object.__setattr__(self, "target", here)

    @property
    def source(self) -> Element:
        return self.anchor

    def __len__(self) -> int:
        return len(self.steps)

    def rules_used(self) -> frozenset[str]:
        out: set[str] = set()
        for step in self.steps:
            out |= {step.rule} if isinstance(step, SetStep) else step.rules()
        return frozenset(out)

    def is_forward(self) -> bool:
        return all(
            s.forward if isinstance(s, SetStep) else not s.backward for s in self.steps
        )

    def describe(self) -> str:
        if not self.steps:
            if isinstance(self.anchor, Vec):
                from .vector import format_vec

                return f"1_({format_vec(self.anchor)})"
            return f"1_{self.anchor}"
        if self.graph.kind is Kind.SET:
            return " ; ".join(s.rule if s.forward else f"{s.rule}^-1" for s in self.steps)
        return " ; ".join(_describe_linear_step(s) for s in self.steps)


def _describe_linear_step(s: LinearStep) -> str:
    from .vector import fmt_scalar

    bits = [f"{fmt_scalar(c)}*{r}" for r, c in sorted(s.forward.items())]
    bits += [f"{fmt_scalar(c)}*{r}^-1" for r, c in sorted(s.backward.items())]
    if s.ident:
        bits.append("1")
    return "(" + " + ".join(bits) + ")"


def unit_path(G: InternalGraph, x: Element) -> Path:
    return Path(G, x)


def embed_step(G: InternalGraph, r: str | Vec, forward: bool = True) -> Path:
    """Length-one path for an element of ``R`` (a label, or a vector over ``R``)."""
    if G.kind is Kind.SET:
        step: Step = SetStep(r, forward)
    else:
        v = Vec.basis(r) if isinstance(r, str) else r
        step = LinearStep(forward=v) if forward else LinearStep(backward=v)
    return Path(G, step_source(G, step), (step,))


def embed_reflexive(G: InternalGraph, y: Element) -> Path:
    """Path of an element of ``R + E`` (labels ``L.r`` / ``R.x``): a step or a unit."""
    if G.kind is Kind.SET:
        tag, _, lab = y.partition(".")
        if tag == "L":
            return embed_step(G, lab)
        if tag == "R":
            return unit_path(G, lab)
        raise ValueError(f"{y!r} is not an element of R + E")
    fwd, ident = _split_sum_vec(y)
    if not fwd:
        return unit_path(G, ident)
    return Path(G, G.src.apply(fwd) + ident, (LinearStep(forward=fwd, ident=ident),))


def _split_sum_vec(y: Vec) -> tuple[Vec, Vec]:
    left, right = {}, {}
    for lab, c in y.items():
        tag, _, rest = lab.partition(".")
        (left if tag == "L" else right)[rest] = c
    return Vec(left), Vec(right)


def compose_paths(p: Path, q: Path) -> Path:
    if p.target != q.source:
        raise NotComposable(f"path ends at {p.target!r} but next starts at {q.source!r}")
    return Path(p.graph, p.anchor, p.steps + q.steps)


def compose_many(paths: Sequence[Path]) -> Path:
    out = paths[0]
    for q in paths[1:]:
        out = compose_paths(out, q)
    return out


def invert_path(p: Path) -> Path:
    steps: list[Step] = []
    for s in reversed(p.steps):
        if isinstance(s, SetStep):
            steps.append(SetStep(s.rule, not s.forward))
        else:
            steps.append(LinearStep(s.backward, s.forward, s.ident))
    return Path(p.graph, p.target, tuple(steps))


def combine_paths(G: InternalGraph, terms: Iterable[tuple[object, Path]]) -> Path:
    """Linear combination of paths over a vector space.

    Shorter paths are padded at the end with identity steps at their target,
    then combined stepwise; endpoints combine linearly.
    """
    if G.kind is not Kind.VECT:
        raise KindMismatch("paths combine linearly only over vector spaces")
    terms = [(as_fraction(c), p) for c, p in terms]
    terms = [(c, p) for c, p in terms if c]
    if not terms:
        return unit_path(G, Vec())
    n = max(len(p) for _, p in terms)
    anchor = Vec()
    steps = [LinearStep() for _ in range(n)]
    for c, p in terms:
        anchor = anchor + p.anchor * c
        padded = list(p.steps) + [LinearStep(ident=p.target)] * (n - len(p))
        for k, s in enumerate(padded):
            steps[k] = steps[k] + s.scaled(c)
    return Path(G, anchor, tuple(steps))


def enumerate_paths(
    G: InternalGraph, max_len: int, backward: bool = False, units: bool = True
) -> list[Path]:
    """All paths of length <= ``max_len`` in a set graph, shortest first."""
    if G.kind is not Kind.SET:
        raise KindMismatch("path enumeration is for set graphs")
    moves = [SetStep(r, True) for r in G.R.labels]
    if backward:
        moves += [SetStep(r, False) for r in G.R.labels]
    by_source: dict[str, list[SetStep]] = {}
    for m in moves:
        by_source.setdefault(step_source(G, m), []).append(m)
    layer = [unit_path(G, x) for x in G.E.labels]
    out = list(layer) if units else []
    for _ in range(max_len):
        nxt = []
        for p in layer:
            for m in by_source.get(p.target, []):
                nxt.append(Path(G, p.anchor, p.steps + (m,)))
        out.extend(nxt)
        layer = nxt
    return out
