"""Algebraic rewriting on free rational vector spaces.

An algebraic relation rewrites basis labels to linear combinations.  It
induces two step relations on vectors: the unrestricted one
(``λ·x + v -> λ·u + v``) and the well-formed one, which additionally needs
``λ != 0`` and ``x`` outside the support of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import carrier as C
from .carrier import CarrierMap, CarrierObject
from .errors import DecompositionMismatch, NotDecreasing, NotWellFormedStep
from .graph import InternalGraph, linear_graph
from .vector import Vec, as_fraction


@dataclass(frozen=True)
class Rule:
    id: str
    lhs: str
    rhs: Vec


@dataclass(frozen=True, eq=False)
class AlgebraicRelation:
    """Rules on the span of ``basis``, with an optional integer rank as the order.

    Without ``rank`` the basis is taken to be listed in increasing order.
    """

    basis: tuple[str, ...]
    rules: tuple[Rule, ...]
    rank: Mapping[str, int] | None = None

    def __post_init__(self):
        labels = set(self.basis)
        if len(labels) != len(self.basis):
            raise ValueError("duplicate basis labels")
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate rule ids")
        for r in self.rules:
            if r.lhs not in labels or not r.rhs.support() <= labels:
                raise ValueError(f"rule {r.id} mentions labels outside the basis")
            if r.lhs in r.rhs:
                raise ValueError(f"rule {r.id}: left-hand side occurs in its own right-hand side")
        if self.rank is not None and set(self.rank) != labels:
            raise ValueError("rank must assign every basis label")

    @cached_property
    def space(self) -> CarrierObject:
        return C.vector_space(self.basis)

    @cached_property
    def _position(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.basis)}

    def order_key(self, x: str) -> tuple[int, int]:
        r = self.rank[x] if self.rank is not None else self._position[x]
        return (r, self._position[x])

    def less(self, y: str, x: str) -> bool:
        if self.rank is not None:
            return self.rank[y] < self.rank[x]
        return self._position[y] < self._position[x]

    @cached_property
    def _by_lhs(self) -> dict[str, list[Rule]]:
        out: dict[str, list[Rule]] = {}
        for r in self.rules:
            out.setdefault(r.lhs, []).append(r)
        return out

    def rules_for(self, x: str) -> list[Rule]:
        return self._by_lhs.get(x, [])

    def rule(self, rule_id: str) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def normal_labels(self) -> list[str]:
        return [x for x in self.basis if not self.rules_for(x)]

    def check_decreasing(self) -> None:
        for r in self.rules:
            for y in sorted(r.rhs.support(), key=self.order_key):
                if not self.less(y, r.lhs):
                    raise NotDecreasing(f"rule {r.id}: {y} is not below {r.lhs}", witness=r.id)

    @cached_property
    def heights(self) -> dict[str, int]:
        """0 on normal forms, else 1 + min over rules of the max height in the rhs."""
        self.check_decreasing()
        memo: dict[str, int] = {}
        for x in sorted(self.basis, key=self.order_key):
            rules = self.rules_for(x)
            if not rules:
                memo[x] = 0
            else:
                memo[x] = 1 + min(_rhs_level(r, memo) for r in rules)
        return memo

    def preferred_rule(self, x: str) -> Rule | None:
        """Rule used by the canonical strategy: lowest target stage, then earliest."""
        rules = self.rules_for(x)
        if not rules:
            return None
        h = self.heights
        return min(rules, key=lambda r: _rhs_level(r, h))


def _rhs_level(rule: Rule, heights: Mapping[str, int]) -> int:
    # an empty right-hand side sits at level 0 so that x -> 0 gets height 1
    return max((heights[y] for y in rule.rhs), default=0)


def algebraic_relation(
    basis: Iterable[str],
    rules: Iterable[tuple[str, str, Mapping[str, object]]],
    rank: Mapping[str, int] | None = None,
) -> AlgebraicRelation:
    return AlgebraicRelation(
        tuple(basis), tuple(Rule(i, lhs, Vec(rhs)) for i, lhs, rhs in rules), rank
    )


def monomial(k: int) -> str:
    return "1" if k == 0 else ("x" if k == 1 else f"x^{k}")


def monic_polynomial_relation(lower: Mapping[int, object], degree: int, max_degree: int) -> AlgebraicRelation:
    """Rules ``x^m -> x^(m-n) * (x^n - P)`` for ``n <= m <= max_degree``.

    ``P = x^n + sum(lower[i] x^i)``; the basis is ``1, x, ..., x^max_degree``.
    """
    basis = [monomial(k) for k in range(max_degree + 1)]
    rules = []
    for m in range(degree, max_degree + 1):
        shift = m - degree
        rhs = {monomial(i + shift): -as_fraction(c) for i, c in lower.items()}
        rules.append((f"r{m}", monomial(m), rhs))
    return algebraic_relation(basis, rules)


# -- steps ------------------------------------------------------------------------


def alg_step(ar: AlgebraicRelation, u: Vec, rule: Rule, lam, v: Vec) -> Vec:
    """``λ·x + v -> λ·rhs + v`` for ``rule : x -> rhs``."""
    lam = as_fraction(lam)
    if u != Vec.basis(rule.lhs) * lam + v:
        raise DecompositionMismatch(f"{u!r} is not {lam}*{rule.lhs} + {v!r}")
    return rule.rhs * lam + v


def wf_step(ar: AlgebraicRelation, u: Vec, rule: Rule, lam, v: Vec) -> Vec:
    lam = as_fraction(lam)
    if lam == 0:
        raise NotWellFormedStep("well-formed steps need a nonzero coefficient")
    if rule.lhs in v:
        raise NotWellFormedStep(f"{rule.lhs} occurs in the context")
    return alg_step(ar, u, rule, lam, v)


@dataclass(frozen=True)
class WfStep:
    rule: str
    coefficient: Fraction
    context: Vec
    before: Vec
    after: Vec


def wf_successors(ar: AlgebraicRelation, u: Vec) -> list[WfStep]:
    """All well-formed one-step reducts; the coefficient is forced by ``u``."""
    out = []
    for x in sorted(u.support(), key=ar.order_key):
        lam = u[x]
        ctx = u - Vec.basis(x, lam)
        for r in ar.rules_for(x):
            out.append(WfStep(r.id, lam, ctx, u, r.rhs * lam + ctx))
    return out


def wf_reachable(ar: AlgebraicRelation, u: Vec, limit: int = 200_000) -> set[Vec]:
    """Everything reachable by well-formed steps (finite for decreasing relations)."""
    seen = {u}
    stack = [u]
    while stack:
        w = stack.pop()
        for s in wf_successors(ar, w):
            if s.after not in seen:
                seen.add(s.after)
                if len(seen) > limit:
                    raise RuntimeError("reachable set exceeds limit")
                stack.append(s.after)
    return seen


@dataclass(frozen=True)
class Normalization:
    value: Vec
    trace: tuple[WfStep, ...]


def wf_normalize(ar: AlgebraicRelation, u: Vec, position: str = "greatest") -> Normalization:
    """Reduce with the preferred rule until no support label is reducible.

    ``position`` picks the greatest (default) or least reducible label first.
    """
    ar.check_decreasing()
    trace: list[WfStep] = []
    while True:
        reducible = [x for x in u.support() if ar.rules_for(x)]
        if not reducible:
            return Normalization(u, tuple(trace))
        pick = max if position == "greatest" else min
        x = pick(reducible, key=ar.order_key)
        rule = ar.preferred_rule(x)
        lam = u[x]
        ctx = u - Vec.basis(x, lam)
        after = wf_step(ar, u, rule, lam, ctx)
        trace.append(WfStep(rule.id, lam, ctx, u, after))
        u = after


# -- spaces and quotients ----------------------------------------------------------


def nf_subspace(ar: AlgebraicRelation) -> CarrierObject:
    return C.vector_space(ar.normal_labels())


def rule_graph(ar: AlgebraicRelation) -> InternalGraph:
    """Graph with one basis vector of ``R`` per rule: source ``lhs``, target ``rhs``."""
    return linear_graph(ar.space, {r.id: (Vec.basis(r.lhs), r.rhs) for r in ar.rules})


@dataclass(frozen=True)
class CongruenceQuotient:
    obj: CarrierObject
    q: CarrierMap
    canmap: CarrierMap

    @property
    def is_iso(self) -> bool:
        return C.is_isomorphism(self.canmap)


def congruence_quotient(ar: AlgebraicRelation) -> CongruenceQuotient:
    """``kX`` modulo the span of ``lhs - rhs``, and the map from normal forms."""
    G = rule_graph(ar)
    obj, q = C.coequalizer(G.src, G.tgt)
    canmap = C.compose(q, C.inclusion(ar.normal_labels(), ar.space))
    return CongruenceQuotient(obj, q, canmap)


def to_internal(ar: AlgebraicRelation):
    """The rule graph over ``kX`` together with its canonical local strategy."""
    from .termination import strategy_from_algebraic_relation

    ls = strategy_from_algebraic_relation(ar)
    return ls.graph, ls


def in_congruence(ar: AlgebraicRelation, v: Vec) -> bool:
    """Whether ``v`` lies in the span of ``lhs - rhs`` over all rules."""
    from . import linalg

    cols = [Vec.basis(r.lhs) - r.rhs for r in ar.rules]
    m = [[c.coeff(x) for c in cols] for x in ar.basis]
    return linalg.solve(m, [v.coeff(x) for x in ar.basis], len(cols)) is not None


def rule_span_rank(ar: AlgebraicRelation) -> int:
    from . import linalg

    rows = [[(Vec.basis(r.lhs) - r.rhs).coeff(x) for x in ar.basis] for r in ar.rules]
    return linalg.rank(rows, len(ar.basis))


def vec_from_coeffs(coeffs: Sequence[object]) -> Vec:
    """Polynomial helper: ``coeffs[k]`` is the coefficient of ``x^k``."""
    return Vec((monomial(k), c) for k, c in enumerate(coeffs))
