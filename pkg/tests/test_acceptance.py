"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from functools import cache
from pathlib import Path

import pytest
import sympy

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import four_strategy_1, four_strategy_2, x2_plus_1  # noqa: E402

from catrewrite.closures import (  # noqa: E402
    KINDS,
    closure_universal_check,
    colimit_stability,
    full_relation_structure,
    quotient_invariance,
    relation_structure,
    small_graphs,
)
from catrewrite.confluence import (  # noqa: E402
    ac_suite,
    bridge_lemma_check,
    lc_structure_from_ac1,
    newman,
    sc_suite,
    search_lc_structure_set,
    suite_values,
    verify_lc_structure,
)
from catrewrite.errors import Exhausted  # noqa: E402
from catrewrite.graph import quotient_by_graph, relation_pairs  # noqa: E402
from catrewrite.linear import vec_from_coeffs  # noqa: E402
from catrewrite.randgen import (  # noqa: E402
    instance_rng,
    random_algebraic_relation,
    random_chain,
    random_linear_graph,
    random_polynomial,
    random_set_graph,
    random_terminating_relation,
)
from catrewrite.strategy import induce_global_strategy, is_confluent_strategy  # noqa: E402
from catrewrite.termination import (  # noqa: E402
    strategy_from_algebraic_relation,
    strategy_from_set_relation,
    verify_local_strategy,
)
from catrewrite.vector import Vec  # noqa: E402

SEED = 42
RESULTS: dict[int, str] = {}
X = sympy.Symbol("x")


def record(n: int, ok: bool, elapsed: float, limit: float | None, detail: str) -> bool:
    timed = limit is None or elapsed < limit
    verdict = "PASS" if ok and timed else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    RESULTS[n] = f"criterion {n}: {verdict}  {elapsed:.2f}s{budget}  {detail}"
    print(RESULTS[n])
    return ok and timed


def remainder_oracle(coeffs, modulus):
    p = sum(sympy.Integer(c) * X**k for k, c in enumerate(coeffs))
    r = sympy.Poly(sympy.rem(p, modulus, X), X)
    return Vec(("1" if k == 0 else "x" if k == 1 else f"x^{k}", c) for (k,), c in r.terms())


# -- shared runs (criterion 5 reuses the confluent strategies of 2-4) --------------


@cache
def run_c2():
    ar = x2_plus_1(8)
    ls = strategy_from_algebraic_relation(ar)
    lc = lc_structure_from_ac1(ls, ar)
    res = newman(lc)
    rng = random.Random(SEED)
    mismatches = 0
    for _ in range(100):
        coeffs = random_polynomial(rng, max_degree=8)
        if res.strategy.normal_form(vec_from_coeffs(coeffs)) != remainder_oracle(coeffs, X**2 + 1):
            mismatches += 1
    return ar, lc, res, mismatches


@cache
def run_c3():
    agree = match = 0
    certified = []
    for k in range(200):
        labels, rel = random_terminating_relation(instance_rng(SEED, k), max_elements=8, max_rules=16)
        rep = sc_suite(labels, rel)
        agree += rep.get("agree").passed
        try:
            res = newman(search_lc_structure_set(strategy_from_set_relation(labels, rel)))
            certified.append(res)
            found = True
        except Exhausted:
            found = False
        match += found == rep.get("SC2").passed
    return agree, match, certified


@cache
def run_c4():
    agree = 0
    steps = counterexamples = 0
    certified = []
    systems = [random_algebraic_relation(instance_rng(SEED, k), max_basis=5) for k in range(100)]
    # 500 steps spread over the systems that have at least one rule
    ruled = [k for k, ar in enumerate(systems) if ar.rules]
    share = {k: 500 // len(ruled) + (n < 500 % len(ruled)) for n, k in enumerate(ruled)}
    for k, ar in enumerate(systems):
        rep = ac_suite(ar)
        agree += rep.get("agree").passed and rep.get("rank oracle").passed
        br = bridge_lemma_check(ar, share.get(k, 0), instance_rng(SEED + 1, k))
        done, bad = (int(w) for w in br.get("one-step join").detail.split()[::2][:2])
        steps += done
        counterexamples += bad + (not br.get("basis clause").passed)
        if rep.get("AC1").passed:
            certified.append(newman(lc_structure_from_ac1(strategy_from_algebraic_relation(ar), ar)))
    return agree, steps, counterexamples, certified


# -- criteria ---------------------------------------------------------------------


def test_criterion_1_four_element_example():
    t0 = time.perf_counter()
    s1, s2 = four_strategy_1(), four_strategy_2()
    axioms = all(verify_local_strategy(ls).ok for ls in (s1, s2))
    g1, g2 = induce_global_strategy(s1), induce_global_strategy(s2)
    htau1 = {x: g1.Htau.apply(x) for x in "ab"}
    htau2 = {x: g2.Htau.apply(x) for x in "ab"}
    c1, c2 = is_confluent_strategy(g1), is_confluent_strategy(g2)
    quotient, _ = quotient_by_graph(s1.graph)
    sizes = (len(quotient), len(g1.min_obj))
    elapsed = time.perf_counter() - t0
    attainable = (
        axioms
        and htau1 == {"a": "c", "b": "d"}
        and htau2 == {"a": "d", "b": "d"}
        and not c1
        and not c2
        and c1.witness == "f1"
        and sizes == (1, 2)
    )
    # under strategy 2 only f3 separates its ends, so a witness in {f1, f2} cannot exist
    literal = attainable and c2.witness in ("f1", "f2")
    record(
        1,
        literal,
        elapsed,
        1.0,
        f"witnesses {c1.witness}/{c2.witness}, |E/R|={sizes[0]}, |min|={sizes[1]}"
        + ("" if literal else "; under strategy 2 only f3 separates its ends"),
    )
    assert attainable and elapsed < 1.0
    assert c2.witness == "f3"


@pytest.mark.xfail(strict=True, reason="strategy 2 identifies a, b and d; only f3 separates its ends")
def test_criterion_1_strategy_2_witness_in_f1_f2():
    res = is_confluent_strategy(induce_global_strategy(four_strategy_2()))
    assert res.witness in ("f1", "f2")


def test_criterion_2_x2_plus_1():
    t0 = time.perf_counter()
    ar, lc, res, mismatches = run_c2()
    cert = res.certificate
    elapsed = time.perf_counter() - t0
    ok = (
        verify_lc_structure(lc).ok
        and cert.ok
        and len(ar.normal_labels()) == len(cert.quotient) == len(cert.min_obj) == 2
        and cert.is_iso
        and mismatches == 0
    )
    assert record(2, ok, elapsed, 5.0, f"dim NF = dim E/R = {len(cert.quotient)}, {100 - mismatches}/100 remainders agree")


def test_criterion_3_set_confluence_equivalence():
    t0 = time.perf_counter()
    agree, match, certified = run_c3()
    elapsed = time.perf_counter() - t0
    ok = agree == 200 and match == 200
    assert record(3, ok, elapsed, 30.0, f"SC agreement {agree}/200, newman vs SC2 {match}/200 ({len(certified)} certified)")


def test_criterion_4_algebraic_equivalence_and_bridge():
    t0 = time.perf_counter()
    agree, steps, bad, certified = run_c4()
    elapsed = time.perf_counter() - t0
    ok = agree == 100 and steps == 500 and bad == 0
    assert record(4, ok, elapsed, 60.0, f"AC agreement {agree}/100, {steps} bridge steps, {bad} counterexamples")


def test_criterion_5_split_coequalizer_certificates():
    t0 = time.perf_counter()
    results = [run_c2()[2]] + run_c3()[2] + run_c4()[3]
    good = 0
    for res in results:
        cert = res.certificate
        eq = all(cert.equations.get(n).passed for n in ("e.s=1", "s.e=g.t", "f.t=1", "e.f=e.g"))
        good += eq and cert.is_iso and len(cert.quotient) == len(cert.min_obj)
    elapsed = time.perf_counter() - t0
    assert record(5, good == len(results), elapsed, None, f"{good}/{len(results)} certificates")


def test_criterion_6_closure_laws():
    t0 = time.perf_counter()
    checks = passed = 0
    for R in small_graphs(4, 3):
        E, pairs = list(R.E.labels), relation_pairs(R)
        for which in KINDS:
            for S in (
                relation_structure(E, pairs, which),
                full_relation_structure(E, which),
                relation_structure(E, pairs, which, bits=2),
            ):
                f = {r: next(e for e in S.graph.R.labels if S.graph.endpoints(e) == (x, y)) for r, x, y in R.edges()}
                checks += 1
                passed += bool(closure_universal_check(R, S, f, which, bound=64))
    invariant = 0
    for k in range(200):
        rng = instance_rng(SEED, k)
        R = random_set_graph(rng) if k % 2 == 0 else random_linear_graph(rng)
        invariant += all(quotient_invariance(R).values())
    elapsed = time.perf_counter() - t0
    ok = passed == checks and invariant == 200
    assert record(6, ok, elapsed, 60.0, f"universal property {passed}/{checks}, quotient invariance {invariant}/200")


def test_criterion_7_colimit_stability():
    t0 = time.perf_counter()
    good = 0
    for k in range(50):
        rng = instance_rng(SEED, k)
        R = random_set_graph(rng) if k % 2 == 0 else random_linear_graph(rng)
        chain = random_chain(rng, list(R.R.labels), stages=4)
        good += colimit_stability(R, chain) == {"monotone": True, "union": True}
    elapsed = time.perf_counter() - t0
    assert record(7, good == 50, elapsed, 10.0, f"{good}/50 chains (set and linear alternating)")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_") and not hasattr(fn, "pytestmark"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all("PASS" in line for line in RESULTS.values()) else 1)
