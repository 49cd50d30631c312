"""Command line front end.

Exit codes: 0 pass, 1 input error, 2 verification failure, 3 confluence
failure, 4 internal consistency abort.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import carrier as C
from .carrier import Kind
from .closures import quotient_invariance
from .confluence import (
    ac_suite,
    bridge_lemma_check,
    lc_structure_from_ac1,
    newman,
    sc_suite,
    search_lc_structure_set,
    suite_agrees,
)
from .errors import (
    Exhausted,
    FiltrationError,
    InvariantViolation,
    NotDecreasing,
    NotTerminating,
    RewritingError,
    StrategyError,
)
from .filtration import DirectedPoset, Filtration, nat_filtration
from .graph import InternalGraph, quotient_by_graph, set_graph
from .linear import AlgebraicRelation, Rule, wf_normalize
from .randgen import instance_rng, random_algebraic_relation, random_linear_graph, random_set_graph, random_terminating_relation
from .report import Report
from .strategy import induce_global_strategy
from .termination import (
    LocalStrategy,
    local_strategy_from_choices,
    strategy_for_set_graph,
    strategy_from_algebraic_relation,
    strategy_from_set_relation,
    verify_local_strategy,
)
from .vector import Vec, as_fraction, format_vec

OK, INPUT, VERIFY, CONFLUENCE, INTERNAL = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


@dataclass
class SystemSpec:
    kind: str
    elements: list[str]
    rules: list[dict]
    order: dict[str, int] | None = None
    filtration: Any = None
    strategy: dict[str, str | None] | None = None
    name: str = ""
    extra: dict = field(default_factory=dict)


def _rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"rational {value!r} must be an integer or a 'p/q' string")
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad rational {value!r}: {exc}") from None


_TERM = re.compile(r"^(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?P<label>.*)$")


def parse_term(text: str, basis: Sequence[str]) -> Vec:
    """Parse ``"x^3+x^2+x+1"``, ``"2x^2"``, ``"3/2*x"``, ``"-1"`` over the given basis."""
    known = set(basis)
    s = text.replace(" ", "")
    if not s:
        raise InputError("empty term")
    if s == "0":
        return Vec()
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise InputError(f"cannot parse term {text!r}")
    out = Vec()
    for chunk in chunks:
        sign = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        if body in known:
            out = out + Vec.basis(body, sign)
            continue
        m = _TERM.match(body)
        if not m or "." in body:
            raise InputError(f"cannot parse {chunk!r}")
        coef = _rational(m.group("coef")) if m.group("coef") else Fraction(1)
        label = m.group("label") or "1"
        if label not in known:
            raise InputError(f"unknown basis label {label!r} in {chunk!r}")
        out = out + Vec.basis(label, sign * coef)
    return out


def _rhs_vec(rhs: Any, basis: Sequence[str]) -> Vec:
    if isinstance(rhs, dict):
        for k in rhs:
            if k not in basis:
                raise InputError(f"unknown basis label {k!r}")
        return Vec({k: _rational(v) for k, v in rhs.items()})
    if isinstance(rhs, str):
        return parse_term(rhs, basis)
    raise InputError(f"right-hand side {rhs!r} must be a mapping or a term")


def load_spec(path: str) -> SystemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh, parse_float=_reject_float)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from None
    return spec_from_dict(data)


def _reject_float(text: str):
    raise InputError(f"decimal literal {text} is not exact; write it as a 'p/q' string")


def spec_from_dict(data: dict) -> SystemSpec:
    if not isinstance(data, dict):
        raise InputError("system description must be a JSON object")
    kind = data.get("kind")
    if kind not in ("set", "linear"):
        raise InputError("kind must be 'set' or 'linear'")
    elements = data.get("elements" if kind == "set" else "basis")
    if not isinstance(elements, list) or not all(isinstance(x, str) for x in elements):
        raise InputError("elements/basis must be a list of strings")
    if len(set(elements)) != len(elements):
        raise InputError("duplicate labels")
    rules = data.get("rules", [])
    if not isinstance(rules, list):
        raise InputError("rules must be a list")
    ids = set()
    for r in rules:
        if not isinstance(r, dict) or not {"id", "lhs", "rhs"} <= set(r):
            raise InputError(f"rule {r!r} needs id, lhs and rhs")
        if r["id"] in ids:
            raise InputError(f"duplicate rule id {r['id']!r}")
        ids.add(r["id"])
        if r["lhs"] not in elements:
            raise InputError(f"rule {r['id']}: unknown label {r['lhs']!r}")
        if kind == "set" and r["rhs"] not in elements:
            raise InputError(f"rule {r['id']}: unknown label {r['rhs']!r}")
        if kind == "linear":
            _rhs_vec(r["rhs"], elements)
    order = data.get("order")
    if order is not None:
        if not isinstance(order, dict) or set(order) != set(elements):
            raise InputError("order must assign an integer rank to every basis label")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in order.values()):
            raise InputError("order ranks must be integers")
    strategy = data.get("strategy")
    if strategy is not None:
        if not isinstance(strategy, dict):
            raise InputError("strategy must map labels to rule ids")
        for x, r in strategy.items():
            if x not in elements or (r is not None and r not in ids):
                raise InputError(f"strategy entry {x!r}: {r!r} is unknown")
    return SystemSpec(kind, elements, rules, order, data.get("filtration"), strategy, data.get("name", ""))


def algebraic_from_spec(spec: SystemSpec) -> AlgebraicRelation:
    rules = tuple(Rule(r["id"], r["lhs"], _rhs_vec(r["rhs"], spec.elements)) for r in spec.rules)
    try:
        return AlgebraicRelation(tuple(spec.elements), rules, spec.order)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def graph_from_spec(spec: SystemSpec) -> InternalGraph:
    if spec.kind == "set":
        return set_graph(spec.elements, {r["id"]: (r["lhs"], r["rhs"]) for r in spec.rules})
    from .linear import rule_graph

    return rule_graph(algebraic_from_spec(spec))


def filtration_from_spec(spec: SystemSpec, G: InternalGraph) -> Filtration | None:
    f = spec.filtration
    if f is None:
        return None
    try:
        if isinstance(f, list):
            return nat_filtration(G.E, [list(s) for s in f])
        if isinstance(f, dict) and "stages" in f:
            p = f.get("poset", {})
            poset = DirectedPoset.finite(p["elements"], [tuple(c) for c in p.get("covers", [])])
            return Filtration(G.E, poset, {k: tuple(v) for k, v in f["stages"].items()})
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed filtration: {exc}") from None
    raise InputError("filtration must be a list of stages or {poset, stages}")


def local_strategy_from_spec(spec: SystemSpec) -> LocalStrategy:
    G = graph_from_spec(spec)
    F = filtration_from_spec(spec, G)
    if spec.kind == "linear":
        if F is None and spec.strategy is None:
            return strategy_from_algebraic_relation(algebraic_from_spec(spec))
        if F is None:
            from .filtration import filtration_from_height

            F = filtration_from_height(algebraic_from_spec(spec))
        choices = spec.strategy
        if choices is None:
            ar = algebraic_from_spec(spec)
            choices = {x: (r.id if (r := ar.preferred_rule(x)) else None) for x in ar.basis}
        return local_strategy_from_choices(G, F, {x: choices.get(x) for x in G.E.labels})
    if F is None:
        if spec.strategy is not None:
            raise InputError("an explicit strategy needs an explicit filtration")
        return strategy_from_set_relation(G.E, G)
    if spec.strategy is None:
        return strategy_for_set_graph(G, F)
    return local_strategy_from_choices(G, F, {x: spec.strategy.get(x) for x in G.E.labels})


# -- output ---------------------------------------------------------------------------


def _plain(value: Any) -> Any:
    if isinstance(value, Vec):
        return format_vec(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def emit(payload: dict, args, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(_plain(payload), sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _table(rows: list[tuple[str, str]]) -> list[str]:
    width = max([len(k) for k, _ in rows] + [4])
    return [f"{k:<{width}}  {v}" for k, v in rows]


# -- commands -----------------------------------------------------------------------


def cmd_check(args) -> int:
    spec = load_spec(args.path)
    try:
        ls = local_strategy_from_spec(spec)
    except (NotTerminating, NotDecreasing, FiltrationError, StrategyError) as exc:
        emit({"command": "check", "ok": False, "error": str(exc), "witness": exc.witness}, args,
             [f"check failed: {exc}", f"witness: {exc.witness}"])
        return VERIFY
    rep = verify_local_strategy(ls)
    payload = {"command": "check", "ok": rep.ok, "report": rep.to_dict(), "choices": ls.choices()}
    emit(payload, args, [rep.render()])
    return OK if rep.ok else VERIFY


def _set_oracle_nfs(spec: SystemSpec, x: str) -> list[str]:
    succ = {e: [] for e in spec.elements}
    for r in spec.rules:
        succ[r["lhs"]].append(r["rhs"])
    seen, stack = {x}, [x]
    while stack:
        for y in succ[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return [e for e in spec.elements if e in seen and not succ[e]]


def cmd_normalize(args) -> int:
    spec = load_spec(args.path)
    ls = local_strategy_from_spec(spec)
    gs = induce_global_strategy(ls)
    if spec.kind == "set":
        if args.term not in spec.elements:
            raise InputError(f"unknown element {args.term!r}")
        nf = gs.iota_min.apply(gs.normal_form(args.term))
        oracle = _set_oracle_nfs(spec, args.term)
        agree = nf in oracle
        shown, oracle_shown = nf, ",".join(oracle)
        path = gs.H(args.term).describe()
    else:
        ar = algebraic_from_spec(spec)
        u = parse_term(args.term, spec.elements)
        nfv = gs.iota_min.apply(gs.normal_form(u))
        ov = wf_normalize(ar, u).value
        agree = nfv == ov
        shown, oracle_shown = format_vec(nfv), format_vec(ov)
        path = gs.H(u).describe()
    payload = {"command": "normalize", "term": args.term, "normal_form": shown, "oracle": oracle_shown,
               "agree": agree, "path": path}
    emit(payload, args, _table([("term", args.term), ("normal form", shown), ("oracle", oracle_shown),
                                ("agree", "yes" if agree else "NO"), ("path", path)]))
    return OK if agree else INTERNAL


def cmd_newman(args) -> int:
    spec = load_spec(args.path)
    ls = local_strategy_from_spec(spec)
    try:
        if spec.kind == "set":
            lc = search_lc_structure_set(ls, args.depth_cap)
        else:
            lc = lc_structure_from_ac1(ls, algebraic_from_spec(spec))
    except Exhausted as exc:
        emit({"command": "newman", "confluent": False, "witness": exc.witness, "error": str(exc)}, args,
             [f"no lc-structure: {exc}", f"witness: {exc.witness}"])
        return CONFLUENCE
    res = newman(lc)
    cert = res.certificate
    summary = cert.summary()
    conv = {r: p.describe() for r, p in sorted(lc.conv.items())}
    payload = {"command": "newman", "confluent": True, "certificate": summary,
               "equations": cert.equations.to_dict(), "conversions": conv}
    lines = _table([
        ("confluent", "yes"),
        ("|E/R|" if spec.kind == "set" else "dim E/R", str(summary["quotient_size"])),
        ("|min(E)|" if spec.kind == "set" else "dim min(E)", str(summary["min_size"])),
        ("iso", "yes" if summary["iso"] else "NO"),
    ])
    lines += ["", cert.equations.render(), "", "conversions"] + _table(list(conv.items()))
    emit(payload, args, lines)
    return OK if cert.ok else INTERNAL


def cmd_quotient(args) -> int:
    spec = load_spec(args.path)
    G = graph_from_spec(spec)
    Q, q = quotient_by_graph(G)
    inv = quotient_invariance(G)
    if G.kind is Kind.SET:
        classes = {c: [x for x in G.E.labels if q.apply(x) == c] for c in Q.labels}
        body = {c: members for c, members in classes.items()}
        rows = [(c, "{" + ",".join(m) + "}") for c, m in classes.items()]
    else:
        body = {x: format_vec(q.image_of(x)) for x in G.E.labels}
        rows = [(f"[{x}]", v) for x, v in body.items()]
    payload = {"command": "quotient", "size": len(Q), "labels": list(Q.labels), "classes": body, "invariance": inv}
    lines = _table([("size", str(len(Q)))] + rows + [(f"same as E/{k}", "yes" if v else "NO") for k, v in inv.items()])
    emit(payload, args, lines)
    return OK if all(inv.values()) else INTERNAL


def _suite_set(args) -> tuple[list[dict], list[str], bool]:
    from .errors import Exhausted as _Ex

    rows, ok_all = [], True
    agree = match = 0
    for i in range(args.count):
        E, rel = random_terminating_relation(instance_rng(args.seed, i), args.max_elements, 2 * args.max_elements)
        rep = sc_suite(E, rel)
        G = set_graph(E, {f"r{k}": p for k, p in enumerate(rel)})
        try:
            newman(search_lc_structure_set(strategy_from_set_relation(G.E, G), args.depth_cap))
            certified = True
        except _Ex:
            certified = False
        values = [rep.get(n).passed for n in ("SC1", "SC2", "SC3", "SC4")]
        a = suite_agrees(rep)
        m = certified == values[1]
        agree += a
        match += m
        ok_all &= a and m
        rows.append({"index": i, "elements": len(E), "rules": len(rel), "sc": values, "agree": a,
                     "newman": certified, "newman_matches_sc2": m})
    summary = [f"SC agreement {agree}/{args.count}", f"newman vs SC2 {match}/{args.count}"]
    return rows, summary, ok_all


def _suite_linear(args) -> tuple[list[dict], list[str], bool]:
    rows, ok_all = [], True
    agree = bad_bridge = trials = 0
    for i in range(args.count):
        rng = instance_rng(args.seed, i)
        ar = random_algebraic_relation(rng, min(args.max_elements, 5))
        rep = ac_suite(ar)
        br = bridge_lemma_check(ar, 5, rng)
        n_bad = 0 if br.get("one-step join").passed else 1
        a = rep.get("agree").passed and rep.get("rank oracle").passed
        agree += a
        bad_bridge += n_bad + (0 if br.get("basis clause").passed else 1)
        trials += 5
        ok_all &= a and br.ok
        rows.append({"index": i, "basis": len(ar.basis), "rules": len(ar.rules),
                     "ac": [rep.get(n).passed for n in ("AC1", "AC2", "AC3")], "agree": a, "bridge": br.ok})
    summary = [f"AC agreement {agree}/{args.count}, bridge {bad_bridge} counterexamples"]
    return rows, summary, ok_all


def _suite_quotient(args) -> tuple[list[dict], list[str], bool]:
    rows, good = [], 0
    for i in range(args.count):
        rng = instance_rng(args.seed, i)
        G = random_set_graph(rng, args.max_elements) if i % 2 == 0 else random_linear_graph(rng)
        inv = quotient_invariance(G)
        ok = all(inv.values())
        good += ok
        rows.append({"index": i, "kind": G.kind.value, "invariance": inv, "ok": ok})
    return rows, [f"quotient invariance {good}/{args.count}"], good == args.count


def cmd_suite(args) -> int:
    kinds = ["set", "linear", "quotient"] if args.kind == "all" else [args.kind]
    runners = {"set": _suite_set, "linear": _suite_linear, "quotient": _suite_quotient}
    payload: dict = {"command": "suite", "seed": args.seed, "count": args.count}
    lines: list[str] = []
    ok_all = True
    for k in kinds:
        rows, summary, ok = runners[k](args)
        ok_all &= ok
        payload[k] = {"instances": rows, "summary": summary}
        lines.append(f"[{k}]")
        for r in rows:
            status = "pass" if all(v for key, v in r.items() if isinstance(v, bool) and key != "newman") else "FAIL"
            lines.append(f"  {r['index']:>5}  {status}")
        lines += [f"  {s}" for s in summary]
    emit(payload, args, lines)
    return OK if ok_all else INTERNAL


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catrewrite", description="Check termination and confluence of rewriting systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--depth-cap", type=int, default=None, help="conversion search depth (default 2|E|)")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="verify the local strategy axioms")
    c.add_argument("path")
    n = sub.add_parser("normalize", parents=[common], help="normal form of a term")
    n.add_argument("path")
    n.add_argument("term")
    w = sub.add_parser("newman", parents=[common], help="lc-structure search and confluence certificate")
    w.add_argument("path")
    q = sub.add_parser("quotient", parents=[common], help="E/R and its invariance under closures")
    q.add_argument("path")
    s = sub.add_parser("suite", parents=[common], help="random-instance agreement suites")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--max-elements", type=int, default=8)
    s.add_argument("--kind", choices=["set", "linear", "quotient", "all"], default="set")
    return p


COMMANDS = {"check": cmd_check, "normalize": cmd_normalize, "newman": cmd_newman,
            "quotient": cmd_quotient, "suite": cmd_suite}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "suite" and (args.count < 0 or args.seed < 0 or args.max_elements < 1):
        print("error: count and seed must be non-negative, max-elements positive", file=sys.stderr)
        return INPUT
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT
    except InvariantViolation as exc:
        print(f"internal consistency failure: {exc} (witness {exc.witness})", file=sys.stderr)
        return INTERNAL
    except (NotTerminating, NotDecreasing, StrategyError, FiltrationError) as exc:
        print(f"verification failed: {exc} (witness {exc.witness})", file=sys.stderr)
        return VERIFY
    except RewritingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
