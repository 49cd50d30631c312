"""Terminating directed posets and filtrations of carrier objects by sub-objects."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from . import carrier as C
from .carrier import CarrierMap, CarrierObject, Element, Kind
from .errors import FiltrationError, NotTerminating
from .linear import AlgebraicRelation
from .report import Report
from .vector import Vec

Index = Hashable


@dataclass(frozen=True, eq=False)
class DirectedPoset:
    """A finite directed poset given by its cover pairs ``(lower, upper)``.

    Finite posets have no infinite descending chains, so every instance is
    terminating.
    """

    elements: tuple
    covers: frozenset
    kind: str = "finite"

    def __post_init__(self):
        if not self.elements:
            raise FiltrationError("a directed set is non-empty")
        if len(set(self.elements)) != len(self.elements):
            raise FiltrationError("duplicate poset elements")
        known = set(self.elements)
        for a, b in self.covers:
            if a not in known or b not in known:
                raise FiltrationError(f"cover ({a!r}, {b!r}) mentions unknown elements")
        try:
            tuple(self._sorter().static_order())
        except graphlib.CycleError as exc:
            raise FiltrationError("cover relation has a cycle", witness=exc.args[1]) from None
        for x in self.elements:
            for y in self.elements:
                if not any(self.leq(x, z) and self.leq(y, z) for z in self.elements):
                    raise FiltrationError(f"{x!r} and {y!r} have no upper bound", witness=(x, y))

    @classmethod
    def nat_prefix(cls, n: int) -> DirectedPoset:
        return cls(tuple(range(n)), frozenset((k, k + 1) for k in range(n - 1)), "nat")

    @classmethod
    def finite(cls, elements: Iterable, covers: Iterable[tuple]) -> DirectedPoset:
        return cls(tuple(elements), frozenset(tuple(c) for c in covers), "finite")

    def _sorter(self) -> graphlib.TopologicalSorter:
        ts = graphlib.TopologicalSorter({x: set() for x in self.elements})
        for a, b in self.covers:
            ts.add(b, a)
        return ts

    @cached_property
    def _up(self) -> dict:
        up = {x: {x} for x in self.elements}
        for x in reversed(self.linear_extension):
            for a, b in self.covers:
                if a == x:
                    up[x] |= up[b]
        return up

    @cached_property
    def linear_extension(self) -> tuple:
        """Elements listed so that every element comes after everything below it."""
        pos = {x: i for i, x in enumerate(self.elements)}
        remaining = {x: {a for a, b in self.covers if b == x} for x in self.elements}
        out = []
        while remaining:
            ready = sorted((x for x, deps in remaining.items() if not deps), key=pos.__getitem__)
            x = ready[0]
            out.append(x)
            del remaining[x]
            for deps in remaining.values():
                deps.discard(x)
        return tuple(out)

    def leq(self, a, b) -> bool:
        return b in self._up[a]

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def below(self, i) -> tuple:
        return tuple(x for x in self.linear_extension if self.lt(x, i))

    def minimal(self) -> tuple:
        return tuple(x for x in self.linear_extension if not self.below(x))

    def top(self):
        tops = [x for x in self.elements if all(self.leq(y, x) for y in self.elements)]
        return tops[0]

    def is_total(self) -> bool:
        return all(self.leq(a, b) or self.leq(b, a) for a in self.elements for b in self.elements)

    def depth(self, i) -> int:
        """Length of the longest chain from a minimal element up to ``i``."""
        below = self.below(i)
        return 0 if not below else 1 + max(self.depth(j) for j in below if (j, i) in self.covers)

    def cover_list(self) -> list[tuple]:
        order = {x: k for k, x in enumerate(self.linear_extension)}
        return sorted(self.covers, key=lambda c: (order[c[0]], order[c[1]]))


@dataclass(frozen=True, eq=False)
class Below:
    """``E_{<i}`` with its map into ``E``.

    ``reps[label] = (k, x)`` names a stage ``k < i`` and element/basis label
    ``x`` of ``E_k`` representing that label; ``components[k]`` is the
    colimit leg ``E_k -> E_{<i}``.
    """

    index: Index
    obj: CarrierObject
    inj: CarrierMap
    reps: Mapping[str, tuple]
    components: Mapping[Index, CarrierMap]


@dataclass(frozen=True, eq=False)
class Filtration:
    """An ``I``-filtration of ``E`` whose stages are sub-objects and links inclusions."""

    E: CarrierObject
    poset: DirectedPoset
    stages: Mapping[Index, tuple[str, ...]]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if set(self.stages) != set(self.poset.elements):
            raise FiltrationError("need exactly one stage per poset element")
        normal = {}
        for i, labels in self.stages.items():
            keep = set(labels)
            missing = keep - set(self.E.labels)
            if missing:
                raise FiltrationError(f"stage {i!r} has labels outside E: {sorted(missing)}", witness=i)
            normal[i] = tuple(x for x in self.E.labels if x in keep)
        object.__setattr__(self, "stages", normal)
        report = self.validate()
        if not report.ok:
            bad = report.failures()[0]
            raise FiltrationError(f"invalid filtration: {bad.name} fails", witness=bad.witness)

    @property
    def kind(self) -> Kind:
        return self.E.kind

    def stage(self, i) -> CarrierObject:
        return self.inj(i).dom

    def inj(self, i) -> CarrierMap:
        key = ("inj", i)
        if key not in self._cache:
            self._cache[key] = C.inclusion(self.stages[i], self.E)
        return self._cache[key]

    def link(self, i, j) -> CarrierMap:
        if not self.poset.leq(i, j):
            raise FiltrationError(f"no link {i!r} -> {j!r}")
        return C.inclusion(self.stages[i], self.stage(j))

    def contains(self, i, x: Element) -> bool:
        if self.kind is Kind.SET:
            return x in self.stages[i]
        return x.support() <= set(self.stages[i])

    def first_stages(self, label: str) -> tuple:
        """Minimal indices whose stage contains ``label``."""
        hits = [i for i in self.poset.linear_extension if label in self.stages[i]]
        return tuple(i for i in hits if not any(self.poset.lt(j, i) for j in hits))

    def stage_depth(self, label: str) -> int:
        return min(self.poset.depth(i) for i in self.first_stages(label))

    def validate(self) -> Report:
        rep = Report("filtration")
        mono = next(((a, b) for a, b in self.poset.cover_list() if not set(self.stages[a]) <= set(self.stages[b])), None)
        rep.add("monotone", mono is None, mono)
        if mono is not None:
            return rep
        bad = None
        for a, b in self.poset.cover_list():
            if not C.equal_maps(C.compose(self.inj(b), self.link(a, b)), self.inj(a)):
                bad = (a, b)
                break
        rep.add("cocone", bad is None, bad)
        bad = None
        for a, b in self.poset.cover_list():
            for c in self.poset.elements:
                if (b, c) in self.poset.covers:
                    if not C.equal_maps(self.link(a, c), C.compose(self.link(b, c), self.link(a, b))):
                        bad = (a, b, c)
        rep.add("functorial", bad is None, bad)
        top = self.poset.top()
        rep.add("colimit", C.is_isomorphism(self.inj(top)), top, "top stage must be all of E")
        return rep

    def below(self, i) -> Below:
        key = ("below", i)
        if key not in self._cache:
            self._cache[key] = self._compute_below(i)
        return self._cache[key]

    def _compute_below(self, i) -> Below:
        ks = self.poset.below(i)
        if not ks:
            obj = self.stage(i)
            return Below(i, obj, self.inj(i), {x: (i, x) for x in obj.labels}, {i: C.identity(obj)})
        terminal = [k for k in ks if all(self.poset.leq(j, k) for j in ks)]
        if terminal:
            t = terminal[0]
            obj = self.stage(t)
            return Below(
                i, obj, self.inj(t), {x: (t, x) for x in obj.labels}, {k: self.link(k, t) for k in ks}
            )
        return self._colimit_below(i, ks)

    def _colimit_below(self, i, ks: Sequence) -> Below:
        tags = [f"s{n}" for n in range(len(ks))]
        tag_of = dict(zip(ks, tags))
        total, injs = C.coproduct_many([self.stage(k) for k in ks], tags)
        inj_of = dict(zip(ks, injs))
        pairs = [(a, b) for a, b in self.poset.cover_list() if a in tag_of and b in tag_of]
        if pairs:
            ptags = [f"p{n}" for n in range(len(pairs))]
            f = C.copair_many([C.compose(inj_of[b], self.link(a, b)) for a, b in pairs], ptags)
            g = C.copair_many([inj_of[a] for a, _ in pairs], ptags)
            quot, q = C.coequalizer(f, g)
        else:
            quot, q = total, C.identity(total)
        by_tag = {t: k for k, t in tag_of.items()}
        raw = []
        for lab in quot.labels:
            t, _, x = lab.partition(".")
            raw.append((lab, by_tag[t], x))
        counts: dict[str, int] = {}
        for _, _, x in raw:
            counts[x] = counts.get(x, 0) + 1
        names = {lab: (x if counts[x] == 1 else f"{x}@{k}") for lab, k, x in raw}
        obj = CarrierObject(self.kind, tuple(names[lab] for lab, _, _ in raw))
        if self.kind is Kind.SET:
            rename = CarrierMap(quot, obj, obj.labels)
            inj = CarrierMap(obj, self.E, tuple(x for _, _, x in raw))
        else:
            rename = C.linear_map(quot, obj, {lab: Vec.basis(names[lab]) for lab in quot.labels})
            inj = C.linear_map(obj, self.E, {names[lab]: Vec.basis(x) for lab, _, x in raw})
        qq = C.compose(rename, q)
        components = {k: C.compose(qq, inj_of[k]) for k in ks}
        reps = {names[lab]: (k, x) for lab, k, x in raw}
        return Below(i, obj, inj, reps, components)

    def below_link(self, i, j) -> CarrierMap:
        """The induced map ``E_{<i} -> E_{<j}`` for ``i <= j`` (``E_{<i} = E_i`` when minimal)."""
        src, dst = self.below(i), self.below(j)
        if self.kind is Kind.SET:
            table = {}
            for lab in src.obj.labels:
                k, x = src.reps[lab]
                leg = dst.components[k] if k in dst.components else C.compose(dst.components[self._via(k, j)], self.link(k, self._via(k, j)))
                table[lab] = leg.apply(x)
            return C.set_map(src.obj, dst.obj, table)
        cols = {}
        for lab in src.obj.labels:
            k, x = src.reps[lab]
            leg = dst.components[k] if k in dst.components else C.compose(dst.components[self._via(k, j)], self.link(k, self._via(k, j)))
            cols[lab] = leg.apply(Vec.basis(x))
        return C.linear_map(src.obj, dst.obj, cols)

    def _via(self, k, j):
        # k == j only when j is minimal; then dst.components holds j itself
        return next(m for m in self.below(j).components if self.poset.leq(k, m))

    def min_object(self) -> tuple[CarrierObject, CarrierMap]:
        """The coproduct of the minimal stages, with its map into ``E``."""
        obj, inj, _ = self.min_parts()
        return obj, inj

    def min_parts(self) -> tuple[CarrierObject, CarrierMap, dict]:
        key = ("min",)
        if key not in self._cache:
            mins = self.poset.minimal()
            if len(mins) == 1:
                m = mins[0]
                obj = self.stage(m)
                self._cache[key] = (obj, self.inj(m), {m: C.identity(obj)})
            else:
                tags = [str(m) for m in mins]
                obj, injs = C.coproduct_many([self.stage(m) for m in mins], tags)
                inj = C.copair_many([self.inj(m) for m in mins], tags)
                self._cache[key] = (obj, inj, dict(zip(mins, injs)))
        return self._cache[key]

    def pushforward(self) -> Filtration:
        """Image under the free vector space functor."""
        return Filtration(C.free_vector_space(self.E), self.poset, dict(self.stages))


def nat_filtration(E: CarrierObject, stages: Sequence[Iterable[str]]) -> Filtration:
    return Filtration(E, DirectedPoset.nat_prefix(len(stages)), {k: tuple(s) for k, s in enumerate(stages)})


def below(F: Filtration, i) -> tuple[CarrierObject, CarrierMap]:
    b = F.below(i)
    return b.obj, b.inj


def min_object(F: Filtration) -> tuple[CarrierObject, CarrierMap]:
    return F.min_object()


def restrict_map(F: Filtration, f: CarrierMap, i) -> CarrierMap:
    """``f_{<i} = f ∘ ι_{<i}``; for minimal ``i`` this is ``f ∘ ι_i``."""
    return C.compose(f, F.below(i).inj)


# -- builders -----------------------------------------------------------------------


def check_terminating(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> None:
    """Raise NotTerminating if the step relation has a cycle (finite sets)."""
    ts = graphlib.TopologicalSorter({x: set() for x in elements})
    for x, y in pairs:
        ts.add(x, y)
        if x == y:
            raise NotTerminating(f"loop at {x}", witness=[x, x])
    try:
        tuple(ts.static_order())
    except graphlib.CycleError as exc:
        raise NotTerminating("relation has a cycle", witness=exc.args[1]) from None


def filtration_from_terminating_relation(E: CarrierObject, rel: Iterable[tuple[str, str]]) -> Filtration:
    """``E_0 = NF``, ``E_{i+1} = {x | x ->= y for some y in E_i}``, until all of E."""
    if E.kind is not Kind.SET:
        raise FiltrationError("relation filtrations are for sets")
    rel = list(rel)
    check_terminating(E.labels, rel)
    succ: dict[str, set[str]] = {x: set() for x in E.labels}
    for x, y in rel:
        succ[x].add(y)
    current = {x for x in E.labels if not succ[x]}
    stages = [current]
    while len(current) < len(E):
        current = current | {x for x in E.labels if succ[x] & current}
        stages.append(current)
    return nat_filtration(E, stages)


def height(ar: AlgebraicRelation) -> dict[str, int]:
    return dict(ar.heights)


def filtration_from_height(ar: AlgebraicRelation) -> Filtration:
    """``X_i = {x | height(x) <= i}``, spanned in the free vector space."""
    h = ar.heights
    top = max(h.values(), default=0)
    stages = [[x for x in ar.basis if h[x] <= i] for i in range(top + 1)]
    return nat_filtration(ar.space, stages)


def supported_in(F: Filtration, i, v: Vec) -> bool:
    return F.contains(i, v)
