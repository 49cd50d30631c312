import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from catrewrite import carrier as C
from catrewrite.errors import BaseMismatch, NotAMorphism, NotComposable
from catrewrite.graph import (
    GraphMorphism,
    LinearStep,
    Path,
    SetStep,
    combine_paths,
    compose_paths,
    embed_reflexive,
    embed_step,
    empty_graph,
    enumerate_paths,
    graph_product,
    graph_sum,
    identity_graph,
    invert_path,
    linear_graph,
    opposite,
    product_projections,
    quotient_by_graph,
    reflexive_sum,
    set_graph,
    truncated_closure,
    unit_path,
)
from catrewrite.linear import rule_graph
from catrewrite.vector import Vec

from conftest import x2_plus_1


def test_identity_graph_has_identity_legs():
    E = C.finite_set("a")
    G = identity_graph(E)
    assert G.src == G.tgt == C.identity(E)
    Q, q = quotient_by_graph(identity_graph(C.vector_space(["u", "v"])))
    assert len(Q) == 2


def test_product_of_composable_edges():
    R = set_graph("abc", {"f": ("a", "b")})
    S = set_graph("abc", {"g": ("b", "c")})
    RS, p1, p2 = product_projections(R, S)
    assert len(RS.R) == 1
    z = RS.R.labels[0]
    assert (p1.apply(z), p2.apply(z)) == ("f", "g")
    assert RS.endpoints(z) == ("a", "c")


def test_product_needs_common_base():
    with pytest.raises(BaseMismatch):
        graph_product(set_graph("ab", []), set_graph("abc", []))


def test_product_with_identity_graph_is_r():
    R = set_graph("abc", {"f": ("a", "b"), "g": ("b", "c"), "h": ("a", "b")})
    RE = graph_product(R, identity_graph(R.E))
    assert len(RE.R) == len(R.R)
    assert sorted((s, t) for _, s, t in RE.edges()) == sorted((s, t) for _, s, t in R.edges())


def test_linear_product_dimension_is_kernel_dimension():
    G = rule_graph(x2_plus_1(2))
    RR = graph_product(G, G)
    t = sympy.Matrix([list(r) for r in G.tgt.table])
    s = sympy.Matrix([list(r) for r in G.src.table])
    assert len(RR.R) == 2 * len(G.R) - t.row_join(-s).rank()


def test_sum_and_opposite():
    R = set_graph("ab", {"f": ("a", "b")})
    S = graph_sum(R, empty_graph(R.E))
    assert len(S.R) == len(R.R)
    assert opposite(R).endpoints("f") == ("b", "a")
    assert opposite(opposite(R)) == R
    RE, inj, u = reflexive_sum(R)
    assert len(RE.R) == 3
    assert RE.endpoints(u.apply("a")) == ("a", "a")


def test_graph_morphism_checks_commuting():
    R = set_graph("ab", {"f": ("a", "b")})
    S = set_graph("ab", {"g": ("a", "b"), "h": ("b", "a")})
    GraphMorphism(R, S, C.set_map(R.R, S.R, {"f": "g"}))
    with pytest.raises(NotAMorphism):
        GraphMorphism(R, S, C.set_map(R.R, S.R, {"f": "h"}))


def test_paths_compose_and_invert():
    G = set_graph("abc", {"f": ("a", "b"), "g": ("b", "c")})
    f, g = embed_step(G, "f"), embed_step(G, "g")
    fg = compose_paths(f, g)
    assert (fg.source, fg.target, len(fg)) == ("a", "c", 2)
    assert compose_paths(unit_path(G, "a"), f) == f
    with pytest.raises(NotComposable):
        compose_paths(g, f)
    back = embed_step(G, "f", forward=False)
    assert (back.source, back.target) == ("b", "a")
    assert invert_path(fg).describe() == "g^-1 ; f^-1"


def test_linear_embed_step_of_rule():
    G = rule_graph(x2_plus_1(2))
    p = embed_step(G, "r2")
    assert p.source == Vec({"x^2": 1})
    assert p.target == Vec({"1": -1})


def test_embed_reflexive_splits_rule_and_unit_parts():
    G = rule_graph(x2_plus_1(3))
    p = embed_reflexive(G, Vec({"L.r2": 2, "R.x": 1}))
    assert p.source == Vec({"x^2": 2, "x": 1})
    assert p.target == Vec({"1": -2, "x": 1})


def test_combined_paths_pad_with_identities():
    G = rule_graph(x2_plus_1(4))
    p = compose_paths(embed_step(G, "r4"), embed_step(G, Vec({"r2": -1})))
    q = embed_step(G, "r3")
    c = combine_paths(G, [(1, p), (2, q)])
    assert c.source == Vec({"x^4": 1, "x^3": 2})
    assert c.target == Vec({"1": 1, "x": -2})
    assert len(c) == 2


def _random_paths(seed):
    rng = random.Random(seed)
    E = "abcd"
    G = set_graph(E, {f"r{k}": (rng.choice(E), rng.choice(E)) for k in range(rng.randint(1, 6))})
    return G, enumerate_paths(G, 4, backward=True)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_invert_is_involutive_and_unit_is_neutral(seed, data):
    G, paths = _random_paths(seed)
    p = data.draw(st.sampled_from(paths))
    assert invert_path(invert_path(p)) == p
    assert compose_paths(unit_path(G, p.source), p) == p
    assert compose_paths(p, unit_path(G, p.target)) == p
    # endpoints agree with folding src/tgt over the steps
    here = p.source
    for s in p.steps:
        a, b = G.endpoints(s.rule)
        here = b if s.forward else a
    assert here == p.target


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_composition_is_associative(seed, data):
    G, paths = _random_paths(seed)
    p = data.draw(st.sampled_from(paths))
    qs = [q for q in paths if q.source == p.target]
    q = data.draw(st.sampled_from(qs))
    rs = [r for r in paths if r.source == q.target]
    r = data.draw(st.sampled_from(rs))
    assert compose_paths(compose_paths(p, q), r) == compose_paths(p, compose_paths(q, r))


def test_quotient_examples():
    G = set_graph("abcd", {"f1": ("a", "b"), "f2": ("b", "a"), "f3": ("a", "c"), "f4": ("b", "d")})
    Q, _ = quotient_by_graph(G)
    assert len(Q) == 1
    Q, _ = quotient_by_graph(empty_graph(G.E))
    assert len(Q) == 4
    V = C.vector_space(["1", "x", "x^2"])
    L = linear_graph(V, {"p": (Vec({"x^2": 1}), Vec({"1": -1}))})
    Q, _ = quotient_by_graph(L)
    assert len(Q) == 2


def test_truncated_closure_counts_paths():
    G = set_graph("abc", {"f": ("a", "b"), "g": ("b", "c")})
    T = truncated_closure(G, "trans", 3)
    assert len(T.R) == 3
    RT = truncated_closure(G, "refltrans", 3)
    assert len(RT.R) == 6
    S = truncated_closure(G, "reflsymtrans", 2)
    # 3 units, 4 single steps, and composable pairs of R + R°
    assert len(S.R) == 3 + 4 + len([1 for p in enumerate_paths(G, 2, backward=True, units=False) if len(p) == 2])


def test_path_rejects_broken_chains():
    G = set_graph("abc", {"f": ("a", "b"), "g": ("b", "c")})
    with pytest.raises(NotComposable):
        Path(G, "a", (SetStep("g"),))
    L = rule_graph(x2_plus_1(2))
    with pytest.raises(NotComposable):
        Path(L, Vec({"x": 1}), (LinearStep(forward=Vec({"r2": 1})),))
