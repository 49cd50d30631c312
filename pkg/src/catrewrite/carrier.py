"""Finite sets and finite-dimensional rational vector spaces.

These are the two concrete ambient categories the engine works in.  A
:class:`CarrierObject` is an ordered list of labels: elements for a set,
basis vectors for a vector space.  A :class:`CarrierMap` is an element
table or an exact rational matrix.  Set elements are labels (``str``),
vector-space elements are :class:`~catrewrite.vector.Vec` values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from . import linalg
from .errors import CodomainMismatch, DomainMismatch, KindMismatch, NotParallel
from .unionfind import UnionFind
from .vector import Vec

Element = Union[str, Vec]


class Kind(str, enum.Enum):
    SET = "set"
    VECT = "vect"


@dataclass(frozen=True)
class CarrierObject:
    kind: Kind
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in {self.labels}")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a label of {self}") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def contains_element(self, x: Element) -> bool:
        if self.kind is Kind.SET:
            return isinstance(x, str) and x in self._index
        return isinstance(x, Vec) and all(lab in self._index for lab in x)

    def __repr__(self) -> str:
        return f"{self.kind.value}{{{', '.join(self.labels)}}}"


def finite_set(labels: Iterable[str]) -> CarrierObject:
    return CarrierObject(Kind.SET, tuple(labels))


def vector_space(labels: Iterable[str]) -> CarrierObject:
    return CarrierObject(Kind.VECT, tuple(labels))


def empty(kind: Kind) -> CarrierObject:
    return CarrierObject(kind, ())


@dataclass(frozen=True, eq=False)
class CarrierMap:
    """``table`` is a tuple of codomain labels (sets) or of matrix rows (spaces)."""

    dom: CarrierObject
    cod: CarrierObject
    table: tuple = field(repr=False)

    def __post_init__(self):
        if self.dom.kind is not self.cod.kind:
            raise KindMismatch(f"map between {self.dom.kind.value} and {self.cod.kind.value}")
        if self.kind is Kind.SET:
            if len(self.table) != len(self.dom):
                raise ValueError("set map table must list one image per element")
            for y in self.table:
                if y not in self.cod:
                    raise ValueError(f"image {y!r} not in codomain")
        else:
            if len(self.table) != len(self.cod) or any(len(r) != len(self.dom) for r in self.table):
                raise ValueError("matrix shape does not match dom/cod dimensions")
            for row in self.table:
                for x in row:
                    if not isinstance(x, Fraction):
                        raise TypeError("matrix entries must be Fractions")

    @property
    def kind(self) -> Kind:
        return self.dom.kind

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def apply(self, x: Element) -> Element:
        if self.kind is Kind.SET:
            return self.table[self.dom.index(x)]
        out: dict[str, Fraction] = {}
        for lab, c in x.items():
            j = self.dom.index(lab)
            for i, row in enumerate(self.table):
                if row[j]:
                    out[self.cod.labels[i]] = out.get(self.cod.labels[i], Fraction(0)) + c * row[j]
        return Vec(out)

    def image_of(self, label: str) -> Element:
        """Image of a single element / basis vector given by its label."""
        if self.kind is Kind.SET:
            return self.table[self.dom.index(label)]
        j = self.dom.index(label)
        return Vec((self.cod.labels[i], row[j]) for i, row in enumerate(self.table))

    def matrix(self) -> linalg.Matrix:
        if self.kind is Kind.SET:
            raise KindMismatch("set maps have no matrix")
        return [list(r) for r in self.table]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CarrierMap):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.table))

    def __repr__(self) -> str:
        if self.kind is Kind.SET:
            body = ", ".join(f"{x}->{y}" for x, y in zip(self.dom.labels, self.table))
        else:
            body = "; ".join(" ".join(str(v) for v in row) for row in self.table)
        return f"CarrierMap({self.dom!r} -> {self.cod!r}: {body})"


def set_map(dom: CarrierObject, cod: CarrierObject, mapping: Mapping[str, str]) -> CarrierMap:
    return CarrierMap(dom, cod, tuple(mapping[x] for x in dom.labels))


def linear_map(dom: CarrierObject, cod: CarrierObject, columns: Mapping[str, Vec]) -> CarrierMap:
    """Linear map given by the image of each basis vector of ``dom``."""
    rows = [[Fraction(0)] * len(dom) for _ in cod.labels]
    for j, lab in enumerate(dom.labels):
        for y, c in columns[lab].items():
            rows[cod.index(y)][j] = c
    return CarrierMap(dom, cod, tuple(tuple(r) for r in rows))


def matrix_map(dom: CarrierObject, cod: CarrierObject, rows: Sequence[Sequence[object]]) -> CarrierMap:
    return CarrierMap(dom, cod, tuple(tuple(Fraction(x) for x in r) for r in rows))


def identity(obj: CarrierObject) -> CarrierMap:
    if obj.kind is Kind.SET:
        return CarrierMap(obj, obj, obj.labels)
    return matrix_map(obj, obj, linalg.identity(len(obj)))


def compose(f: CarrierMap, g: CarrierMap) -> CarrierMap:
    """``f ∘ g``."""
    if g.cod != f.dom:
        raise DomainMismatch(f"cannot compose: {g.cod!r} is not {f.dom!r}")
    if f.kind is Kind.SET:
        return CarrierMap(g.dom, f.cod, tuple(f.table[f.dom.index(y)] for y in g.table))
    rows = linalg.matmul(f.table, g.table, len(f.dom), len(g.dom))
    return CarrierMap(g.dom, f.cod, tuple(tuple(r) for r in rows))


def compose_all(*maps: CarrierMap) -> CarrierMap:
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return out


def subtract(f: CarrierMap, g: CarrierMap) -> CarrierMap:
    _check_parallel(f, g)
    if f.kind is not Kind.VECT:
        raise KindMismatch("difference of set maps")
    return CarrierMap(
        f.dom, f.cod, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(f.table, g.table))
    )


def _check_parallel(f: CarrierMap, g: CarrierMap) -> None:
    if f.dom != g.dom or f.cod != g.cod:
        raise NotParallel(f"maps are not parallel: {f.dom!r}->{f.cod!r} vs {g.dom!r}->{g.cod!r}")


def equal_maps(f: CarrierMap, g: CarrierMap) -> bool:
    _check_parallel(f, g)
    return f.table == g.table


def first_difference(f: CarrierMap, g: CarrierMap) -> str | None:
    """Label of the first domain element / basis vector where ``f`` and ``g`` differ."""
    _check_parallel(f, g)
    for lab in f.dom.labels:
        if f.image_of(lab) != g.image_of(lab):
            return lab
    return None


def is_isomorphism(f: CarrierMap) -> bool:
    if f.kind is Kind.SET:
        return len(f.dom) == len(f.cod) and len(set(f.table)) == len(f.table)
    if len(f.dom) != len(f.cod):
        return False
    return linalg.rank(f.table, len(f.dom)) == len(f.dom)


def inclusion(sub: Iterable[str], obj: CarrierObject) -> CarrierMap:
    """Inclusion of the sub-object spanned by the labels ``sub`` (kept in ``obj`` order)."""
    keep = set(sub)
    missing = keep - set(obj.labels)
    if missing:
        raise ValueError(f"labels {sorted(missing)} not in {obj!r}")
    part = CarrierObject(obj.kind, tuple(x for x in obj.labels if x in keep))
    if obj.kind is Kind.SET:
        return CarrierMap(part, obj, part.labels)
    return linear_map(part, obj, {x: Vec.basis(x) for x in part.labels})


# -- coproducts ---------------------------------------------------------------


def coproduct_many(
    objs: Sequence[CarrierObject], tags: Sequence[str]
) -> tuple[CarrierObject, list[CarrierMap]]:
    """Tagged disjoint union / direct sum; labels become ``tag.label``."""
    if len(objs) != len(tags) or len(set(tags)) != len(tags):
        raise ValueError("need one distinct tag per summand")
    kinds = {o.kind for o in objs}
    if len(kinds) > 1:
        raise KindMismatch("coproduct of objects of different kinds")
    kind = kinds.pop() if kinds else Kind.SET
    total = CarrierObject(kind, tuple(f"{t}.{x}" for o, t in zip(objs, tags) for x in o.labels))
    injections = []
    for o, t in zip(objs, tags):
        if kind is Kind.SET:
            injections.append(CarrierMap(o, total, tuple(f"{t}.{x}" for x in o.labels)))
        else:
            injections.append(linear_map(o, total, {x: Vec.basis(f"{t}.{x}") for x in o.labels}))
    return total, injections


def coproduct(a: CarrierObject, b: CarrierObject) -> tuple[CarrierObject, CarrierMap, CarrierMap]:
    if a.kind is not b.kind:
        raise KindMismatch("coproduct of objects of different kinds")
    total, (i1, i2) = coproduct_many([a, b], ["L", "R"])
    return total, i1, i2


def copair_many(maps: Sequence[CarrierMap], tags: Sequence[str]) -> CarrierMap:
    """The map out of ``coproduct_many([m.dom ...], tags)`` restricting to each ``m``."""
    cods = {m.cod for m in maps}
    if len(cods) != 1:
        raise CodomainMismatch("copairing needs a common codomain")
    cod = cods.pop()
    total, _ = coproduct_many([m.dom for m in maps], tags)
    if cod.kind is Kind.SET:
        table = tuple(y for m in maps for y in m.table)
        return CarrierMap(total, cod, table)
    rows = tuple(tuple(v for m in maps for v in m.table[i]) for i in range(len(cod)))
    return CarrierMap(total, cod, rows)


def copair(f: CarrierMap, g: CarrierMap) -> CarrierMap:
    return copair_many([f, g], ["L", "R"])


def coproduct_of_maps(f: CarrierMap, g: CarrierMap) -> CarrierMap:
    """``f + g : A + B -> A' + B'``."""
    _, j1, j2 = coproduct(f.cod, g.cod)
    return copair(compose(j1, f), compose(j2, g))


# -- pullbacks ----------------------------------------------------------------


def pullback(f: CarrierMap, g: CarrierMap) -> tuple[CarrierObject, CarrierMap, CarrierMap]:
    """Pullback of ``f : A -> C`` and ``g : B -> C``."""
    if f.cod != g.cod:
        raise CodomainMismatch(f"pullback legs have codomains {f.cod!r} and {g.cod!r}")
    a, b = f.dom, g.dom
    if f.kind is Kind.SET:
        pairs = [(x, y) for x in a.labels for y in b.labels if f.apply(x) == g.apply(y)]
        obj = finite_set(f"({x},{y})" for x, y in pairs)
        return (
            obj,
            CarrierMap(obj, a, tuple(x for x, _ in pairs)),
            CarrierMap(obj, b, tuple(y for _, y in pairs)),
        )
    # kernel of [f | -g] on A ⊕ B
    n = len(a) + len(b)
    m = [list(rf) + [-v for v in rg] for rf, rg in zip(f.table, g.table)]
    kernel = linalg.nullspace_by_free_column(m, n)
    basis = [vec for _, vec in kernel]
    direct, _, _ = coproduct(a, b)
    obj = vector_space(f"k:{direct.labels[c]}" for c, _ in kernel)
    p1 = tuple(tuple(vec[i] for vec in basis) for i in range(len(a)))
    p2 = tuple(tuple(vec[len(a) + i] for vec in basis) for i in range(len(b)))
    return obj, CarrierMap(obj, a, p1), CarrierMap(obj, b, p2)


# -- coequalizers -------------------------------------------------------------


def coequalizer(f: CarrierMap, g: CarrierMap) -> tuple[CarrierObject, CarrierMap]:
    """Coequalizer of parallel ``f, g : A -> B``.

    Sets: classes of the equivalence generated by f(x) ~ g(x), each named by
    its least member in ``B`` order.  Spaces: ``B / im(f - g)``; a basis
    label is eliminated only when it is the latest label of some relation
    in reduced form, so the earliest labels survive as the quotient basis.  In both
    cases the quotient's labels are a subset of ``B``'s labels.
    """
    _check_parallel(f, g)
    cod = f.cod
    if f.kind is Kind.SET:
        uf = UnionFind(cod.labels, key=cod.index)
        for x in f.dom.labels:
            uf.union(f.apply(x), g.apply(x))
        reps = {x: uf.find(x) for x in cod.labels}
        obj = finite_set(x for x in cod.labels if reps[x] == x)
        return obj, CarrierMap(cod, obj, tuple(reps[x] for x in cod.labels))
    diff = subtract(f, g)
    # reduce with columns reversed so pivots fall on the latest labels
    n = len(cod)
    relations = [list(reversed(row)) for row in linalg.transpose(diff.table)]
    reduced, rpivots = linalg.rref(relations, n)
    pivots = [n - 1 - p for p in rpivots]
    pivot_set = set(pivots)
    keep = [j for j in range(n) if j not in pivot_set]
    obj = vector_space(cod.labels[j] for j in keep)
    columns: dict[str, Vec] = {}
    for j in keep:
        columns[cod.labels[j]] = Vec.basis(cod.labels[j])
    for row, pc in zip(reduced, pivots):
        columns[cod.labels[pc]] = Vec((cod.labels[k], -row[n - 1 - k]) for k in keep)
    return obj, linear_map(cod, obj, columns)


def section_of_quotient(q: CarrierMap) -> CarrierMap:
    """The canonical section of a quotient map built by :func:`coequalizer`."""
    return inclusion(q.cod.labels, q.dom)


def factor_through(q: CarrierMap, h: CarrierMap) -> CarrierMap:
    """The unique ``k`` with ``k ∘ q = h`` for a quotient ``q`` from :func:`coequalizer`.

    Raises ValueError if ``h`` does not factor (it fails to coequalize).
    """
    if q.dom != h.dom:
        raise DomainMismatch("factor_through needs maps with a common domain")
    k = compose(h, section_of_quotient(q))
    if not equal_maps(compose(k, q), h):
        raise ValueError("map does not factor through the quotient")
    return k


def canonical_comparison(q1: CarrierMap, q2: CarrierMap) -> CarrierMap:
    """The induced map ``E/R1 -> E/R2`` between two quotients of the same object."""
    return factor_through(q1, q2)


# -- free vector space functor -------------------------------------------------


def free_vector_space(obj: CarrierObject) -> CarrierObject:
    if obj.kind is not Kind.SET:
        raise KindMismatch("free vector space of a non-set")
    return vector_space(obj.labels)


def free_map(f: CarrierMap) -> CarrierMap:
    if f.kind is not Kind.SET:
        raise KindMismatch("free map of a non-set map")
    return linear_map(
        free_vector_space(f.dom), free_vector_space(f.cod), {x: Vec.basis(y) for x, y in zip(f.dom.labels, f.table)}
    )


def lift(f: CarrierMap, y: Element) -> Element | None:
    """Some ``x`` with ``f(x) = y``, or None.  Deterministic: least label / free vars zero."""
    if f.kind is Kind.SET:
        for x in f.dom.labels:
            if f.apply(x) == y:
                return x
        return None
    if not f.cod.contains_element(y):
        return None
    b = [y.coeff(lab) for lab in f.cod.labels]
    sol = linalg.solve(f.table, b, len(f.dom))
    if sol is None:
        return None
    return Vec(zip(f.dom.labels, sol))

