"""Command-line entry point.

Every command prints its verdict on the first line. Exit status is 0 for a
cellular language / passing check / oracle agreement, 1 for the negative outcome
and 2 for errors or an undecided run.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .automata import DEFAULT_MONOID_CAP, Alphabet, Dfa, iter_words, minimal_dfa, transition_monoid
from .ca import LocalRule, ca_language_dfa, enumerate_blocks
from .decider import (
    Reason,
    Verdict,
    brute_force_L1,
    brute_force_L2,
    check_L1,
    check_L2_for,
    decide_cellularity,
    verify_decision,
    verify_l1_failure,
    verify_l2_failure,
)
from .errors import CellangError, MonoidCapExceeded
from .fileformat import parse_automaton_file, parse_rule_file, serialize_automaton
from .regex import EPSILON, regex_to_nfa

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CertificateError(CellangError):
    pass


def show(word: str) -> str:
    return word if word else EPSILON


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _alphabet(text: str) -> Alphabet:
    return Alphabet(tuple(c for c in text if not c.isspace()))


def load_rule(args) -> LocalRule:
    if args.elementary is not None:
        return LocalRule.elementary(args.elementary)
    return parse_rule_file(_read(args.rule_file))


def load_language(args):
    """The input automaton (Nfa) from exactly one of the language sources."""
    sources = [s for s in ("regex", "file", "elementary", "rule_file") if getattr(args, s, None) is not None]
    if len(sources) != 1:
        raise CellangError("give exactly one of --regex, --file, --elementary, --rule-file")
    if args.regex is not None:
        if not args.alphabet:
            raise CellangError("--regex needs --alphabet")
        return regex_to_nfa(args.regex, _alphabet(args.alphabet))
    if args.file is not None:
        nfa = parse_automaton_file(_read(args.file))
        if args.alphabet:
            nfa = nfa.with_alphabet(_alphabet(args.alphabet))
        return nfa
    return ca_language_dfa(load_rule(args))


def cmd_decide(args) -> int:
    d = decide_cellularity(load_language(args), monoid_cap=args.monoid_cap, jobs=args.jobs)
    problems = verify_decision(d, args.monoid_cap)
    if problems:
        raise CertificateError("; ".join(problems))
    human = args.format == "human"
    if d.verdict is Verdict.UNDECIDED:
        print("UNDECIDED cap-exceeded")
        print(f"monoid-cap={args.monoid_cap}" if not human else
              f"  the transition monoid has more than {args.monoid_cap} elements; raise --monoid-cap")
        return EXIT_ERROR
    if d.verdict is Verdict.CELLULAR:
        w = d.witness
        print(f"CELLULAR o={d.letter}")
        cert = f"x={show(w.x)} a={show(w.a)} b={show(w.b)} y={show(w.y)}"
        if human:
            print(f"  witness: {cert}  (x a {d.letter}^n b y is in L for every n >= 0)")
            print(f"  minimal DFA states: {d.dfa.state_count}, transition monoid size: {d.monoid_size}")
        else:
            print(cert)
            print(f"states={d.dfa.state_count} monoid={d.monoid_size}")
        return EXIT_OK
    if d.reason is Reason.EMPTY_OR_EPSILON_ONLY:
        print(f"NOT-CELLULAR reason={d.reason.value}")
        if human:
            print("  the language is empty or contains only the empty word")
        return EXIT_NO
    if d.reason is Reason.L1:
        print(f"NOT-CELLULAR reason=L1 x={show(d.l1.x)} y={show(d.l1.y)}")
        if human:
            print(f"  xy is in L but {'x' if not d.dfa.accepts(d.l1.x) else 'y'} is not: L is not factorial")
        return EXIT_NO
    print("NOT-CELLULAR reason=L2")
    for r in d.l2:
        cert = f"o={r.letter} reason={r.reason} q={r.state} x={show(r.x)} y={show(r.y)}"
        if human:
            print(f"  letter {r.letter} is not receptive: y={show(r.y)} is in L but not in "
                  f"L({r.letter}, q{r.state}) where x={show(r.x)} reaches q{r.state} ({r.reason})")
        else:
            print(cert)
    return EXIT_NO


def _minimal_input(args) -> Dfa:
    return minimal_dfa(load_language(args))


def cmd_l1(args) -> int:
    m = _minimal_input(args)
    r = check_L1(m)
    if r.passed:
        print("L1 PASS")
        return EXIT_OK
    if not verify_l1_failure(m, r):
        raise CertificateError(f"L1 certificate {r} does not verify")
    print(f"L1 FAIL x={show(r.x)} y={show(r.y)}")
    return EXIT_NO


def cmd_l2(args) -> int:
    m = _minimal_input(args)
    l1 = check_L1(m)
    if not l1.passed:
        print(f"L2 SKIPPED L1 fails x={show(l1.x)} y={show(l1.y)}")
        return EXIT_NO
    try:
        monoid = transition_monoid(m, args.monoid_cap)
    except MonoidCapExceeded:
        print("UNDECIDED cap-exceeded")
        return EXIT_ERROR
    letters = [args.letter] if args.letter else list(m.alphabet.letters)
    if args.letter and args.letter not in m.alphabet:
        raise CellangError(f"--letter {args.letter!r} is not in the alphabet")
    any_pass = False
    for o in letters:
        r = check_L2_for(m, o, monoid)
        if r.passed:
            any_pass = True
            print(f"L2 PASS o={o}")
            continue
        if not verify_l2_failure(m, r, monoid):
            raise CertificateError(f"L2 certificate {r} does not verify")
        if args.format == "human":
            note = " (no o-paths)" if r.reason == "no-o-paths" else ""
            print(f"L2 FAIL o={o}{note} q={r.state} x={show(r.x)} y={show(r.y)}")
        else:
            print(f"L2 FAIL o={o} reason={r.reason} q={r.state} x={show(r.x)} y={show(r.y)}")
    return EXIT_OK if any_pass else EXIT_NO


def cmd_ca_lang(args) -> int:
    sys.stdout.write(serialize_automaton(ca_language_dfa(load_rule(args))))
    return EXIT_OK


def cmd_monoid(args) -> int:
    m = _minimal_input(args)
    monoid = transition_monoid(m, args.monoid_cap)
    print(f"MONOID size={len(monoid)} states={m.state_count}")
    for f in monoid:
        kind = "gen" if len(f.word) == 1 else "elem"
        print(f"{kind} {show(f.word)}: " + " ".join(map(str, f.mapping)))
    return EXIT_OK


def _block_disagreement(candidate: Dfa, rule: LocalRule, kmax: int):
    for k in range(kmax + 1):
        blocks = enumerate_blocks(rule, k)
        for w in iter_words(candidate.alphabet, k, k):
            if candidate.accepts(w) != (w in blocks):
                return w, candidate.accepts(w)
    return None


def cmd_oracle_compare(args) -> int:
    results: list[tuple[str, bool, str]] = []
    has_rule = args.elementary is not None or args.rule_file is not None
    if has_rule:
        rule = load_rule(args)
        if args.file is not None:
            candidate = parse_automaton_file(_read(args.file))
            candidate = minimal_dfa(candidate)
        else:
            candidate = ca_language_dfa(rule)
        if candidate.alphabet != rule.alphabet:
            raise CellangError("candidate automaton and rule have different alphabets")
        bad = _block_disagreement(candidate, rule, args.maxlen)
        if bad is None:
            results.append(("blocks", True, f"k<={args.maxlen}"))
        else:
            w, engine = bad
            results.append(("blocks", False,
                            f"word={show(w)} engine={'accept' if engine else 'reject'} "
                            f"oracle={'reject' if engine else 'accept'}"))
        m = candidate
    else:
        nfa = load_language(args)
        m = minimal_dfa(nfa)
        bad = next((w for w in iter_words(m.alphabet, args.maxlen) if m.accepts(w) != nfa.accepts(w)), None)
        results.append(("language", bad is None, f"maxlen={args.maxlen}" if bad is None else f"word={show(bad)}"))

    exact = check_L1(m)
    brute = brute_force_L1(m, args.maxlen)
    agree = exact.passed == brute.passed
    detail = f"verdict={'pass' if exact.passed else 'fail'}"
    if not agree:
        detail = (f"engine={'pass' if exact.passed else 'fail'} oracle={'pass' if brute.passed else 'fail'}"
                  + ("" if brute.passed else f" x={show(brute.x)} y={show(brute.y)}"))
    results.append(("L1", agree, detail))
    if exact.passed:
        monoid = transition_monoid(m, args.monoid_cap)
        for o in m.alphabet.letters:
            e = check_L2_for(m, o, monoid)
            b = brute_force_L2(m, o, args.maxwit)
            agree = e.passed == b.passed
            detail = f"o={o} verdict={'pass' if e.passed else 'fail'}"
            if not agree:
                cex = e if not e.passed else b
                detail = (f"o={o} engine={'pass' if e.passed else 'fail'} oracle={'pass' if b.passed else 'fail'}"
                          f" q={cex.state} y={show(cex.y)}")
            results.append(("L2", agree, detail))

    ok = all(r[1] for r in results)
    print("PASS" if ok else "FAIL")
    for name, passed, detail in results:
        print(f"ORACLE {name} {'PASS' if passed else 'FAIL'} {detail}")
    return EXIT_OK if ok else EXIT_NO


COMMANDS = {
    "decide": cmd_decide,
    "l1": cmd_l1,
    "l2": cmd_l2,
    "ca-lang": cmd_ca_lang,
    "oracle-compare": cmd_oracle_compare,
    "monoid": cmd_monoid,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cellang", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--regex", help="regular expression ('_' is the empty word)")
    src.add_argument("--file", help="automaton file")
    src.add_argument("--alphabet", help="letters of the alphabet, e.g. 'ab'")
    src.add_argument("--elementary", type=int, metavar="CODE", help="elementary CA rule 0..255")
    src.add_argument("--rule-file", help="local rule file")
    common.add_argument("--monoid-cap", type=int, default=DEFAULT_MONOID_CAP)
    common.add_argument("--maxlen", type=int, default=8)
    common.add_argument("--maxwit", type=int, default=3)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--jobs", type=int, default=1)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("decide", parents=[common], help="decide cellularity")
    sub.add_parser("l1", parents=[common], help="factoriality check")
    l2 = sub.add_parser("l2", parents=[common], help="receptiveness check")
    l2.add_argument("--letter", help="test only this letter")
    sub.add_parser("ca-lang", parents=[common], help="print the minimal DFA of a CA's block language")
    sub.add_parser("oracle-compare", parents=[common], help="cross-check engine against brute force")
    sub.add_parser("monoid", parents=[common], help="print the transition monoid")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.monoid_cap < 1 or args.maxlen < 1 or args.maxwit < 0 or args.jobs < 1:
        parser.error("caps, bounds and --jobs must be positive")
    if args.command == "ca-lang" and args.elementary is None and args.rule_file is None:
        parser.error("ca-lang needs --elementary or --rule-file")
    try:
        return COMMANDS[args.command](args)
    except (CellangError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
