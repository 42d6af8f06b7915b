"""Command-line front end.

Exit codes: 0 yes/success, 1 no, 2 inconclusive or budget exhausted,
3 usage or input error, 4 internal disagreement between algorithms.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import zoo
from .decision import (
    ball,
    bounded_report,
    contraction_estimate,
    nucleus,
    order,
    word_problem_canonical,
    word_problem_contracting,
    word_problem_linear,
)
from .element import commutator, element_of, element_to_text
from .engel import (
    Certificate,
    build_witness,
    builtin_certificate,
    check_certificate,
    engel_exponent_check,
    engel_pair_check,
    engel_sequence,
    format_tuple_sizes,
    growth_fit,
    parse_certificate,
    period_search,
    shifted_spec,
    subexponential,
    witness_spec,
)
from .errors import AutomatonError, BudgetExceeded
from .mealy import MealyMachine, act, validate
from .textio import parse_automaton, serialize_machine
from .words import format_tree_word, parse_tree_word, parse_word

YES, NO, MAYBE, USAGE, INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def load_machine(ref: str, strict: bool = True) -> MealyMachine:
    """``zoo:<key>`` or a path to an automaton file."""
    if ref.startswith("zoo:"):
        return zoo.get(ref[4:])
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"no such machine file {ref!r} (use zoo:<key> for built-ins)")
    return parse_automaton(path.read_text(), strict=strict)[0]


def report(out, **items) -> None:
    for key, value in items.items():
        out.write(f"{key}: {value}\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args, out) -> int:
    m = load_machine(args.machine, strict=False)
    r = validate(m)
    report(
        out,
        automaton=m.name,
        alphabet=m.p,
        states=r.n_states,
        complete=str(r.complete).lower(),
        missing=" ".join(f"{q}:{x}" for q, x in r.missing) or "-",
        invertible=str(r.invertible).lower(),
        invertible_states=" ".join(q for q in m.states if q in r.invertible_states) or "-",
        identity=r.identity or "-",
        identity_ok="-" if r.identity_ok is None else str(r.identity_ok).lower(),
        valid=str(r.valid).lower(),
    )
    return YES if r.valid else NO


def cmd_act(args, out) -> int:
    m = load_machine(args.machine)
    v = parse_tree_word(args.tree_word, m.p)
    w = parse_word(args.word, m.states)
    if w.has_inverse():
        image = element_of(m, w).act(v)
    else:
        image = act(m, w, v)
    report(out, word=w, input=format_tree_word(v, m.p), image=format_tree_word(image, m.p))
    return YES


def cmd_canon(args, out) -> int:
    m = load_machine(args.machine)
    g = element_of(m, args.word)
    text = element_to_text(g, args.name)
    if args.output:
        Path(args.output).write_text(text)
        report(out, size=g.size, written=args.output)
    else:
        out.write(text)
    return YES


def cmd_wp(args, out) -> int:
    m = load_machine(args.machine)
    algos = ["linear", "canonical", "contracting"] if args.algo == "all" else [args.algo]
    results = {}
    for algo in algos:
        if algo == "linear":
            results[algo] = word_problem_linear(m, args.u, args.v)
        elif algo == "canonical":
            results[algo] = word_problem_canonical(element_of(m, args.u), element_of(m, args.v))
        else:
            rep = nucleus(m, args.depth_budget, args.size_budget)
            if not rep.nuclear:
                if args.algo == "contracting":
                    report(out, contracting="inconclusive (nucleus not found within budget)")
                    return MAYBE
                report(out, contracting="skipped (nucleus inconclusive)")
                continue
            results[algo] = word_problem_contracting(args.u, args.v, rep)
    for algo, res in results.items():
        report(out, **{algo: "equal" if res else "different"})
    verdicts = set(results.values())
    if len(verdicts) > 1:
        report(out, verdict="disagreement")
        return INTERNAL
    equal = verdicts.pop()
    report(out, verdict="equal" if equal else "different")
    return YES if equal else NO


def cmd_order(args, out) -> int:
    m = load_machine(args.machine)
    g = element_of(m, args.word)
    r = order(g, args.budget, args.size_budget)
    report(out, word=args.word, verdict=r.verdict)
    if r.verdict == "Order":
        report(out, order=r.n)
        return YES
    if r.verdict == "Cycle":
        report(out, m=r.m, n=r.n)
        return YES
    report(out, detail=r.detail)
    return MAYBE


def cmd_nucleus(args, out) -> int:
    m = load_machine(args.machine)
    r = nucleus(m, args.depth_budget, args.size_budget)
    report(out, verdict=r.verdict)
    if r.nuclear:
        report(out, nucleus_size=len(r.nucleus), depth=r.depth,
               closed=str(r.check_closure()).lower())
    for (q1, q2), d in r.witness_depths.items():
        out.write(f"depth {q1}{q2}: {'-' if d is None else d}\n")
    for (q1, q2), k in r.frontier.items():
        out.write(f"frontier {q1}{q2}: {k}\n")
    return YES if r.nuclear else MAYBE


def cmd_bounded(args, out) -> int:
    m = load_machine(args.machine)
    r = bounded_report(m, args.max_depth)
    report(
        out,
        bounded=str(r.bounded).lower(),
        reason=r.reason,
        counts=" ".join(map(str, r.counts)),
        probe_agrees=str(r.probe_agrees).lower(),
    )
    return YES if r.bounded else NO


def _generators(m: MealyMachine, text: str | None) -> list:
    if not text:
        return [q for q in m.states if q != m.identity]
    return [w.strip() for w in text.split(",") if w.strip()]


def cmd_ball(args, out) -> int:
    m = load_machine(args.machine)
    gens = _generators(m, args.generators)
    b = ball(m, gens, args.radius, args.max_size)
    report(out, generators=",".join(gens), radius=b.radius, sizes=" ".join(map(str, b.sizes)))
    if args.contraction:
        est = contraction_estimate(m, b, metric=args.metric)
        report(out, eta=est.eta, C=est.C, radius_checked=est.radius_checked,
               metric=est.metric)
    return YES


# engel ---------------------------------------------------------------------

def _load_certificate(args) -> Certificate:
    if args.builtin:
        return builtin_certificate(args.builtin)
    if args.cert:
        path = Path(args.cert)
        if not path.is_file():
            raise UsageError(f"no such certificate file {args.cert!r}")
        return parse_certificate(path.read_text())
    raise UsageError("give --builtin NAME or --cert FILE")


def _certificate_machine(args, cert: Certificate) -> MealyMachine:
    if args.machine:
        return load_machine(args.machine)
    return zoo.get(cert.machine)


def cmd_engel_pair(args, out) -> int:
    m = load_machine(args.machine)
    g, h = element_of(m, args.g), element_of(m, args.h)
    v = engel_pair_check(g, h, args.node_budget, args.size_budget, args.order_budget)
    report(out, verdict=v.verdict)
    if v.graph is not None:
        report(out, tuples=len(v.graph.nodes))
    if v.verdict == "Engel":
        report(out, c_bound=v.c_bound, c_confirmed=v.c_confirmed)
        return YES
    if v.verdict == "NotEngel":
        report(out, entry_length=len(v.entry) - 1, cycle_length=len(v.cycle) - 1)
        for k, t in enumerate(v.cycle):
            out.write(f"cycle {k}: sizes {format_tuple_sizes(t)}\n")
        return NO
    report(out, evidence=v.evidence)
    return MAYBE


def cmd_engel_exponent(args, out) -> int:
    m = load_machine(args.machine)
    gens = _generators(m, args.generators)
    b = ball(m, gens, args.radius)
    r = engel_exponent_check(m, args.n, args.radius, b, args.node_budget)
    report(out, verdict=r.verdict, vertices=r.nodes, fail_edges=r.fail_edges)
    if r.verdict == "NotEngelWitness":
        report(out, cycle_length=len(r.cycle) - 1)
        return NO
    return YES


def cmd_engel_certify(args, out) -> int:
    if args.tuple:
        if not (args.machine and args.period and args.word):
            raise UsageError("--tuple needs a machine, --period and --word")
        cert = Certificate("command-line", args.machine, tuple(w.strip() for w in args.tuple.split(";")),
                           args.period, args.word)
    else:
        cert = _load_certificate(args)
    m = _certificate_machine(args, cert)
    if args.write:
        Path(args.write).write_text(cert.to_text())
    A0 = cert.elements(m)
    word = cert.tree_word(m.p)
    r = check_certificate(A0, cert.period, word)
    report(
        out,
        certificate=cert.name,
        components=len(A0),
        period=cert.period,
        word=format_tree_word(word, m.p),
        sizes=format_tuple_sizes(A0),
        fixes=" ".join(str(x).lower() for x in r.fixes),
        nontrivial=" ".join(str(x).lower() for x in r.nontrivial),
        returns=" ".join(str(x).lower() for x in r.returns),
        verdict=str(r.ok).lower(),
    )
    return YES if r.ok else NO


def cmd_engel_witness(args, out) -> int:
    cert = _load_certificate(args)
    m = _certificate_machine(args, cert)
    h = element_of(m, args.h)
    spec = witness_spec(h, cert.elements(m))
    g = build_witness(spec)
    identity_ok = commutator(g, h) == build_witness(shifted_spec(spec))
    seq = engel_sequence(g, h, args.c_max, args.size_budget)
    nontrivial = all(not e.is_identity for e in seq)
    report(
        out,
        h=args.h,
        orbit=" ".join(format_tree_word(v, m.p) for v in spec.orbit),
        witness_size=g.size,
        commutator_identity=str(identity_ok).lower(),
        c_checked=len(seq) - 1,
        sizes=" ".join(str(e.size) for e in seq),
        nontrivial=str(nontrivial).lower(),
    )
    if not identity_ok:
        return INTERNAL
    if len(seq) - 1 < args.c_max:
        return MAYBE
    return YES if nontrivial else NO


def cmd_engel_search(args, out) -> int:
    m = load_machine(args.machine)
    g, h = element_of(m, args.g), element_of(m, args.h)
    exclude = [element_of(m, q) for q in m.states]
    r = period_search(g, h, args.c_max, args.window, args.size_budget, exclude)
    fit = growth_fit(r.sizes)
    report(
        out,
        sizes=" ".join(map(str, r.sizes)),
        ranking=" ".join(map(str, r.ranking[:5])),
        evidence=" ".join(f"{k}:{v}" for k, v in r.evidence.items()),
        period="-" if r.period is None else r.period,
        c="-" if r.c is None else r.c,
        matching_sizes=" ".join(str(x.size) for x in r.matching) or "-",
        linear_r2=f"{fit['linear']:.4f}",
        exponential_r2=f"{fit['exponential']:.4f}",
        subexponential=str(subexponential(r.sizes)).lower(),
        complete=str(r.complete).lower(),
    )
    if not r.complete:
        return MAYBE
    return YES if r.period is not None else NO


def cmd_zoo(args, out) -> int:
    if not args.key:
        for key in zoo.ZOO:
            m = zoo.get(key)
            out.write(f"{key}: alphabet {m.p}, states {' '.join(m.states)}\n")
        return YES
    out.write(serialize_machine(zoo.get(args.key)))
    return YES


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="autgrp", description="Exact computation in automaton groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def machine(p, optional=False):
        if optional:
            p.add_argument("--machine", help="zoo:<key> or automaton file")
        else:
            p.add_argument("machine", help="zoo:<key> or automaton file")

    p = sub.add_parser("validate", help="completeness, invertibility, identity check")
    machine(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("act", help="image of a tree word")
    machine(p)
    p.add_argument("word")
    p.add_argument("tree_word")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("canon", help="canonical form of a word")
    machine(p)
    p.add_argument("word")
    p.add_argument("--name", default="element")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("wp", help="word problem")
    machine(p)
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--algo", choices=["linear", "canonical", "contracting", "all"], default="all")
    p.add_argument("--depth-budget", type=int, default=12)
    p.add_argument("--size-budget", type=int, default=10**4)
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("order", help="order or first repetition of powers")
    machine(p)
    p.add_argument("word")
    p.add_argument("--budget", type=int, default=256, help="largest power tried")
    p.add_argument("--size-budget", type=int, default=10**4)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("nucleus", help="nuclear check on pairs of states")
    machine(p)
    p.add_argument("--depth-budget", type=int, default=12)
    p.add_argument("--size-budget", type=int, default=10**4)
    p.set_defaults(func=cmd_nucleus)

    p = sub.add_parser("bounded", help="bounded-automaton test")
    machine(p)
    p.add_argument("--max-depth", type=int, default=8)
    p.set_defaults(func=cmd_bounded)

    p = sub.add_parser("ball", help="ball sizes")
    machine(p)
    p.add_argument("--generators", help="comma-separated words (default: non-identity states)")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--max-size", type=int, default=10**6)
    p.add_argument("--contraction", action="store_true", help="also estimate eta and C")
    p.add_argument("--metric", choices=["word", "size"], default="word")
    p.set_defaults(func=cmd_ball)

    eng = sub.add_parser("engel", help="Engel checks")
    esub = eng.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p = esub.add_parser("pair", help="is (g, h) Engel")
    machine(p)
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--node-budget", type=int, default=10**5)
    p.add_argument("--size-budget", type=int, default=10**4)
    p.add_argument("--order-budget", type=int, default=256)
    p.set_defaults(func=cmd_engel_pair)

    p = esub.add_parser("exponent", help="all tuples of a small ball")
    machine(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--generators")
    p.add_argument("--node-budget", type=int, default=10**6)
    p.set_defaults(func=cmd_engel_exponent)

    for name, func, text in (
        ("certify", cmd_engel_certify, "replay a periodic certificate"),
        ("witness", cmd_engel_witness, "build a non-Engel witness from a certificate"),
    ):
        p = esub.add_parser(name, help=text)
        p.add_argument("machine", nargs="?", help="zoo:<key> or automaton file")
        p.add_argument("--builtin")
        p.add_argument("--cert", help="certificate file")
        if name == "certify":
            p.add_argument("--tuple", help="components separated by ';'")
            p.add_argument("--period", type=int)
            p.add_argument("--word")
            p.add_argument("--write", help="save the certificate to this file")
        else:
            p.add_argument("--h", required=True, help="element of finite order")
            p.add_argument("--c-max", type=int, default=20)
            p.add_argument("--size-budget", type=int, default=10**4)
        p.set_defaults(func=func)

    p = esub.add_parser("search", help="guess the period of E_c(g, h)")
    machine(p)
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--c-max", type=int, default=32)
    p.add_argument("--window", type=int)
    p.add_argument("--size-budget", type=int, default=10**4)
    p.set_defaults(func=cmd_engel_search)

    p = sub.add_parser("zoo", help="list or print built-in machines")
    p.add_argument("key", nargs="?")
    p.set_defaults(func=cmd_zoo)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        report(out, verdict="budget", detail=exc)
        return MAYBE
    except (AutomatonError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
