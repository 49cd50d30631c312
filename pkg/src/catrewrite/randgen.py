"""Seeded random instances: terminating set systems, decreasing algebraic relations, graphs."""

from __future__ import annotations

import random
from typing import Sequence

from .carrier import vector_space
from .graph import InternalGraph, linear_graph, set_graph
from .linear import AlgebraicRelation, Rule
from .vector import Vec


def instance_rng(seed: int, index: int) -> random.Random:
    """Independent stream per instance, so suites can be sliced or reordered."""
    return random.Random(seed * 1_000_003 + index)


def labels(n: int, prefix: str = "") -> list[str]:
    return [f"{prefix}{chr(ord('a') + k)}" if n <= 26 else f"{prefix}e{k}" for k in range(n)]


def random_terminating_relation(rng: random.Random, max_elements: int = 8, max_rules: int = 16):
    """Edges go strictly down a random ranking, so the relation terminates."""
    n = rng.randint(1, max_elements)
    E = labels(n)
    rank = list(range(n))
    rng.shuffle(rank)
    down = [(x, y) for x in E for y in E if rank[E.index(y)] < rank[E.index(x)]]
    m = rng.randint(0, min(max_rules, len(down)))
    return E, sorted(rng.sample(down, m), key=lambda p: (E.index(p[0]), E.index(p[1])))


def random_set_graph(rng: random.Random, max_elements: int = 6, max_edges: int = 8) -> InternalGraph:
    """Arbitrary set graph, loops and parallel edges allowed."""
    n = rng.randint(1, max_elements)
    E = labels(n)
    m = rng.randint(0, max_edges)
    edges = {f"r{k}": (rng.choice(E), rng.choice(E)) for k in range(m)}
    return set_graph(E, edges)


def random_linear_graph(rng: random.Random, max_dim: int = 4, max_edges: int = 3, lo: int = -2, hi: int = 2) -> InternalGraph:
    n = rng.randint(1, max_dim)
    E = vector_space(f"e{k}" for k in range(n))
    m = rng.randint(0, max_edges)

    def vec():
        return Vec((x, rng.randint(lo, hi)) for x in E.labels)

    return linear_graph(E, {f"r{k}": (vec(), vec()) for k in range(m)})


def random_algebraic_relation(rng: random.Random, max_basis: int = 5, max_rules: int = 6) -> AlgebraicRelation:
    """Rules rewrite a basis label into a combination of strictly earlier labels.

    About half the time a second rule at a label is built from the first so
    that the pair is joinable; otherwise coefficients are independent.
    """
    n = rng.randint(1, max_basis)
    basis = [f"x{k}" for k in range(n)]
    rules: list[Rule] = []
    count = rng.randint(0, max_rules) if n > 1 else 0
    for k in range(count):
        pos = rng.randint(1, n - 1)
        x = basis[pos]
        lower = basis[:pos]
        existing = [r for r in rules if r.lhs == x]
        if existing and rng.random() < 0.5:
            base = existing[0].rhs
            y = rng.choice(lower)
            reducts = [r.rhs for r in rules if r.lhs == y]
            shift = (reducts[0] if reducts else Vec.basis(y)) - Vec.basis(y)
            c = rng.randint(-2, 2)
            rhs = base + shift * c
        else:
            rhs = Vec((y, rng.randint(-2, 2)) for y in lower if rng.random() < 0.6)
        rules.append(Rule(f"r{k}", x, rhs))
    return AlgebraicRelation(tuple(basis), tuple(rules))


def random_polynomial(rng: random.Random, max_degree: int = 8, lo: int = -5, hi: int = 5) -> list[int]:
    d = rng.randint(0, max_degree)
    return [rng.randint(lo, hi) for _ in range(d + 1)]


def random_chain(rng: random.Random, items: Sequence[str], stages: int = 4) -> list[list[str]]:
    """An increasing chain of subsets ending at the whole list."""
    when = {x: rng.randint(0, stages - 1) for x in items}
    return [[x for x in items if when[x] <= k] for k in range(stages - 1)] + [list(items)]
