"""Exit criteria for the package, one test per criterion.

Each test records a single ``criterion N: PASS|FAIL ...`` line that is repeated
in the pytest terminal summary.
"""
import random
import time
from itertools import product

import pytest

from cellang.automata import Alphabet, Dfa, canonical, iter_words, minimize, transition_monoid
from cellang.ca import LocalRule, ca_language_dfa, enumerate_blocks
from cellang.decider import (
    Reason,
    Verdict,
    brute_force_L1,
    brute_force_L2,
    check_L1,
    check_L2_for,
    check_L3,
    check_L4,
    decide_cellularity,
    in_L_oq,
    is_degenerate,
    is_universal,
    o_paths,
    verify_decision,
)
from cellang.fileformat import serialize_automaton
from cellang.regex import parse_regex

from strategies import AB, random_dfa, random_minimal_dfa, random_rule

ABC = Alphabet(("a", "b", "c"))


def line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.fixture(scope="module")
def elementary_decisions():
    start = time.perf_counter()
    out = {code: decide_cellularity(ca_language_dfa(LocalRule.elementary(code))) for code in range(256)}
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def random_pool():
    """Random minimal DFAs over {a, b} with at most 5 states, half of them sink automata."""
    rng = random.Random(20071121)
    return [random_minimal_dfa(rng, 5) for _ in range(300)]


def test_1_elementary_rules_are_cellular(report, elementary_decisions):
    decisions, seconds = elementary_decisions
    bad = [code for code, d in decisions.items() if d.verdict is not Verdict.CELLULAR]
    ok = not bad and seconds < 300
    report(line(1, ok, f"256 elementary rules, non-cellular={bad}, {seconds:.1f}s (limit 300s)"))
    assert ok


def test_2_de_bruijn_matches_block_enumeration(report):
    rng = random.Random(90)
    mismatches = []
    for i in range(20):
        rule = random_rule(rng, max_radius=1, max_letters=3)
        m = ca_language_dfa(rule)
        for k in range(9):
            got = {w for w in iter_words(rule.alphabet, k, k) if m.accepts(w)}
            if got != enumerate_blocks(rule, k):
                mismatches.append((i, k))
    report(line(2, not mismatches, f"20 random rules, k<=8, mismatches={mismatches}"))
    assert not mismatches


def test_3_l1_oracle_agreement(report):
    rng = random.Random(3)
    disagreements = []
    passing = 0
    for i in range(100):
        m = random_minimal_dfa(rng, 5)
        exact = check_L1(m)
        brute = brute_force_L1(m, 2 * m.state_count + 2)
        passing += exact.passed
        if exact.passed != brute.passed:
            disagreements.append(i)
    report(line(3, not disagreements, f"100 DFAs ({passing} factorial), disagreements={disagreements}"))
    assert not disagreements


def factorial_dfas_up_to(max_states):
    """Every factorial minimal DFA over {a, b} with at most ``max_states`` states.

    A factorial language other than the universal one has a sink, so it is
    enough to enumerate machines whose last state is a sink.
    """
    seen = set()
    for n in range(1, max_states + 1):
        live = n - 1
        for targets in product(range(n), repeat=2 * live):
            delta = [targets[2 * i : 2 * i + 2] for i in range(live)] + [[live, live]]
            for bits in range(1 << live):
                m = canonical(minimize(Dfa(AB, n, 0, {i for i in range(live) if bits >> i & 1}, delta)))
                if m not in seen and check_L1(m).passed:
                    seen.add(m)
    return sorted(seen, key=serialize_automaton)


def l2_agrees(m, o, monoid):
    return check_L2_for(m, o, monoid).passed == brute_force_L2(m, o, m.state_count + 2).passed


def test_4_l2_oracle_agreement(report):
    # sampled instances, repeats allowed
    rng = random.Random(4)
    sampled = 0
    disagreements = 0
    while sampled < 240:
        m = minimize(random_dfa(rng, rng.randint(1, 4)))
        if not check_L1(m).passed:
            continue
        monoid = transition_monoid(m)
        for o in m.alphabet:
            sampled += 1
            disagreements += not l2_agrees(m, o, monoid)
    # every distinct instance
    distinct = 0
    receptive = 0
    for m in factorial_dfas_up_to(4):
        monoid = transition_monoid(m)
        for o in m.alphabet:
            distinct += 1
            receptive += check_L2_for(m, o, monoid).passed
            disagreements += not l2_agrees(m, o, monoid)
    ok = not disagreements and sampled >= 200
    report(line(4, ok, f"{sampled} sampled pairs + all {distinct} distinct pairs "
                       f"({receptive} receptive), disagreements={disagreements}"))
    assert ok


def test_5_canonical_verdicts(report):
    def decide(text):
        return decide_cellularity(parse_regex(text, AB))

    checks = {}
    checks["(a|b)*"] = decide("(a|b)*").verdict is Verdict.CELLULAR
    d = decide("a*(baa*)*(b|_)")
    checks["no-bb"] = d.verdict is Verdict.CELLULAR and d.letter == "a"
    d = decide("a*|b*")
    checks["a*|b*"] = d.verdict is Verdict.NOT_CELLULAR and d.reason is Reason.L2
    d = decide("(ab)*")
    checks["(ab)*"] = d.reason is Reason.L1 and (d.l1.x, d.l1.y) == ("a", "b")
    checks["_"] = decide("_").reason is Reason.EMPTY_OR_EPSILON_ONLY
    failed = [k for k, v in checks.items() if not v]
    report(line(5, not failed, f"{len(checks)} canonical languages, wrong={failed}"))
    assert not failed


def test_6_certificates_verify(report, random_pool, elementary_decisions):
    decisions = [decide_cellularity(m) for m in random_pool]
    decisions += list(elementary_decisions[0].values())
    decisions += [decide_cellularity(parse_regex(t, AB)) for t in ["(a|b)*", "a*(baa*)*(b|_)", "a*|b*", "(ab)*", "_"]]
    bad = []
    counts = {"cellular": 0, "L1": 0, "L2": 0}
    for d in decisions:
        m = d.dfa
        if verify_decision(d):
            bad.append(d)
        # independent restatement of each certificate
        if d.verdict is Verdict.CELLULAR:
            counts["cellular"] += 1
            w = d.witness
            if not all(m.accepts(w.x + w.a + d.letter * n + w.b + w.y) for n in range(2 * m.state_count + 1)):
                bad.append(d)
        elif d.reason is Reason.L1:
            counts["L1"] += 1
            x, y = d.l1.x, d.l1.y
            if not (m.accepts(x + y) and not (m.accepts(x) and m.accepts(y))):
                bad.append(d)
        elif d.reason is Reason.L2:
            counts["L2"] += 1
            monoid = transition_monoid(m)
            for r in d.l2:
                if not (m.accepts(r.y) and not in_L_oq(m, r.letter, r.state, r.y, monoid)):
                    bad.append(d)
    report(line(6, not bad, f"{len(decisions)} decisions {counts}, unverified={len(bad)}"))
    assert not bad


def test_7_l2_implies_l3_and_l4(report, random_pool, elementary_decisions):
    instances = [m for m in random_pool if check_L1(m).passed and not is_degenerate(m)]
    instances += [d.dfa for d in elementary_decisions[0].values()]
    checked = 0
    bad = []
    for m in instances:
        monoid = transition_monoid(m)
        if any(check_L2_for(m, o, monoid).passed for o in m.alphabet):
            checked += 1
            if not (check_L3(m).passed and check_L4(m).passed):
                bad.append(m)
    report(line(7, not bad and checked > 0, f"{checked} receptive instances, violations={len(bad)}"))
    assert not bad and checked > 0


def test_8_unused_letter_keeps_verdict(report):
    rng = random.Random(8)
    changed = []
    verdicts = set()
    for i in range(50):
        m = random_minimal_dfa(rng, 5)
        before = decide_cellularity(m)
        after = decide_cellularity(m.with_alphabet(ABC))
        verdicts.add(before.verdict)
        if before.verdict != after.verdict or before.reason != after.reason:
            changed.append(i)
    report(line(8, not changed, f"50 instances, verdict kinds={sorted(v.value for v in verdicts)}, changed={changed}"))
    assert not changed


def test_9_structural_bounds(report, random_pool, elementary_decisions):
    machines = list(random_pool) + [d.dfa for d in elementary_decisions[0].values()]
    path_bad = monoid_bad = cap_bad = 0
    capped = 0
    for m in machines:
        n = m.state_count
        path_bad += any(len(o_paths(m, o)) > n for o in m.alphabet)
        monoid = transition_monoid(m)
        monoid_bad += len(monoid) > n**n
        needs_monoid = not is_degenerate(m) and not is_universal(m) and check_L1(m).passed
        if needs_monoid and len(monoid) > 1:
            capped += 1
            d = decide_cellularity(m, monoid_cap=len(monoid) - 1)
            cap_bad += d.verdict is not Verdict.UNDECIDED
    ok = not (path_bad or monoid_bad or cap_bad)
    report(line(9, ok, f"{len(machines)} machines: o-path violations={path_bad}, "
                       f"monoid violations={monoid_bad}, capped runs={capped} with verdicts={cap_bad}"))
    assert ok
