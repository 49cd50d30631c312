import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import four_strategy_1, four_strategy_2, x2_plus_1

from catrewrite.errors import NotConfluent, StrategyError
from catrewrite.graph import enumerate_paths, set_graph
from catrewrite.linear import vec_from_coeffs
from catrewrite.randgen import instance_rng, random_polynomial, random_terminating_relation
from catrewrite.strategy import (
    induce_global_strategy,
    is_confluent_strategy,
    split_coequalizer_certificate,
    verify_global_strategy,
)
from catrewrite.termination import strategy_from_algebraic_relation, strategy_from_set_relation, strategy_from_stages
from catrewrite.vector import Vec

X = sympy.Symbol("x")


def test_four_element_strategy_1_values():
    gs = induce_global_strategy(four_strategy_1())
    assert {x: gs.Htau.apply(x) for x in "abcd"} == {"a": "c", "b": "d", "c": "c", "d": "d"}
    assert gs.H("a").describe() == "f3"
    assert gs.H("b").describe() == "f4"
    assert len(gs.H("c")) == 0
    res = is_confluent_strategy(gs)
    assert not res and res.witness == "f1"
    assert (res.source_nf, res.target_nf) == ("c", "d")


def test_four_element_strategy_2_values():
    gs = induce_global_strategy(four_strategy_2())
    assert {x: gs.Htau.apply(x) for x in "abcd"} == {"a": "d", "b": "d", "c": "c", "d": "d"}
    assert gs.H("a").describe() == "f1 ; f4"
    res = is_confluent_strategy(gs)
    assert not res and res.witness == "f3"


def test_certificate_refuses_non_confluent():
    with pytest.raises(NotConfluent):
        split_coequalizer_certificate(induce_global_strategy(four_strategy_1()))


def test_invalid_local_strategy_is_rejected():
    G = set_graph("abc", {"r1": ("a", "b"), "r2": ("b", "c"), "r3": ("c", "b")})
    ls = strategy_from_stages(G, [["b", "c"], "abc"], {"a": "r1", "c": "r3"})
    with pytest.raises(StrategyError) as info:
        induce_global_strategy(ls)
    assert info.value.witness == "c"


def test_empty_relation_is_confluent():
    gs = induce_global_strategy(strategy_from_set_relation("ab", []))
    assert is_confluent_strategy(gs)
    cert = split_coequalizer_certificate(gs)
    assert cert.ok and cert.summary() == {"quotient_size": 2, "min_size": 2, "iso": True, "equations": True}


def test_single_step():
    gs = induce_global_strategy(strategy_from_set_relation("ab", [("a", "b")]))
    assert gs.normal_form("a") == "b"
    assert gs.H("a").describe() == "a->b"
    assert split_coequalizer_certificate(gs).ok


def test_x2_plus_1_values(xsq):
    gs = induce_global_strategy(strategy_from_algebraic_relation(xsq))
    assert gs.min_obj.labels == ("1", "x")
    assert gs.normal_form(Vec({"x^3": 1, "x^2": 1, "x": 1, "1": 1})) == Vec()
    assert gs.normal_form(Vec.basis("x^4")) == Vec({"1": 1})
    assert gs.normal_form(Vec.basis("x^7")) == Vec({"x": -1})
    assert len(gs.H(Vec.basis("x^4"))) == 2
    assert gs.H(Vec.basis("x^4")).target == Vec({"1": 1})
    cert = split_coequalizer_certificate(gs)
    assert cert.ok
    assert len(cert.quotient) == len(cert.min_obj) == 2


def _sympy_remainder(coeffs, modulus):
    p = sum(sympy.Integer(c) * X**k for k, c in enumerate(coeffs))
    r = sympy.Poly(sympy.rem(p, modulus, X), X)
    return Vec(("1" if k == 0 else "x" if k == 1 else f"x^{k}", c) for (k,), c in r.terms())


def test_normal_form_matches_polynomial_remainder(xsq):
    gs = induce_global_strategy(strategy_from_algebraic_relation(xsq))
    rng = random.Random(7)
    for _ in range(100):
        coeffs = random_polynomial(rng)
        assert gs.normal_form(vec_from_coeffs(coeffs)) == _sympy_remainder(coeffs, X**2 + 1)


def _unique_normal_forms(labels, rel):
    # brute force over zigzags; a class on n elements has diameter below n
    G = set_graph(labels, rel)
    n = len(labels)
    comp = {x: {x} for x in labels}
    for p in enumerate_paths(G, n - 1, backward=True):
        comp[p.source].add(p.target)
    normal = {x for x in labels if not any(s == x for s, _ in rel)}
    return all(len(comp[x] & normal) == 1 for x in labels)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_strategy_confluence_matches_path_enumeration(seed):
    labels, rel = random_terminating_relation(instance_rng(seed, 2), max_elements=5, max_rules=6)
    gs = induce_global_strategy(strategy_from_set_relation(labels, rel))
    assert bool(is_confluent_strategy(gs)) == _unique_normal_forms(labels, rel)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_global_invariants(seed):
    labels, rel = random_terminating_relation(instance_rng(seed, 3))
    gs = induce_global_strategy(strategy_from_set_relation(labels, rel), check=False)
    rep = verify_global_strategy(gs)
    assert rep.ok, rep.failures()
    for x in labels:
        path = gs.H(x)
        assert path.source == x
        assert path.is_forward()
        assert gs.normal_form(path.target) == path.target
    if is_confluent_strategy(gs):
        cert = split_coequalizer_certificate(gs)
        assert cert.ok and len(cert.quotient) == len(cert.min_obj)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.integers(2, 3))
def test_monic_normal_forms_match_remainder(lower, degree):
    from catrewrite.linear import monic_polynomial_relation

    lower = lower[:degree]
    ar = monic_polynomial_relation(dict(enumerate(lower)), degree, 7)
    gs = induce_global_strategy(strategy_from_algebraic_relation(ar))
    modulus = X**degree + sum(sympy.Integer(c) * X**k for k, c in enumerate(lower))
    rng = random.Random(sum(lower) + degree)
    for _ in range(10):
        coeffs = random_polynomial(rng, max_degree=7)
        assert gs.normal_form(vec_from_coeffs(coeffs)) == _sympy_remainder(coeffs, modulus)
