"""Deciding whether a regular language is the finite-block language of a 1-D CA.

A regular language L (with minimal DFA M) is cellular iff it is factorial and
receptive. Factoriality is read off M directly: M must be a sink automaton and
every accepting state must accept a sublanguage of L. Receptiveness with a letter
o holds iff, for every accepting state q, L equals

    L(o, q) = union over o-paths P reachable from q and words b of
              the intersection of L_{p.b} for p in P.

The intersection only depends on the image set b(P), so b ranges over the
transition monoid of M instead of over words.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .automata import (
    DEFAULT_MONOID_CAP,
    Automaton,
    Dfa,
    StateAction,
    is_subset,
    iter_words,
    left_language_from,
    minimal_dfa,
    shortlex_search,
    transition_monoid,
)
from .errors import EmptyFamily, MonoidCapExceeded
from .regex import Regex, ast_to_nfa


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OPath:
    """The o-orbit ``start, start.o, start.o^2, ...`` up to its first repetition."""

    start: int
    orbit: tuple[int, ...]


@dataclass(frozen=True)
class L1Report:
    passed: bool
    x: Optional[str] = None
    y: Optional[str] = None


@dataclass(frozen=True)
class L2Report:
    """Outcome of the receptiveness test for one letter.

    On failure ``state`` is an accepting state q, ``x`` reaches q from the initial
    state and ``y`` is a word of L outside L(o, q). ``reason`` is ``no-o-paths``
    when the letter has no o-path at all, ``empty-family`` when none is reachable
    from q, and ``counterexample`` otherwise.
    """

    letter: str
    passed: bool
    state: Optional[int] = None
    x: Optional[str] = None
    y: Optional[str] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class L3Report:
    passed: bool
    x: Optional[str] = None
    y: Optional[str] = None


@dataclass(frozen=True)
class L4Report:
    passed: bool
    u: Optional[str] = None


class Verdict(enum.Enum):
    CELLULAR = "CELLULAR"
    NOT_CELLULAR = "NOT-CELLULAR"
    UNDECIDED = "UNDECIDED"


class Reason(enum.Enum):
    EMPTY_OR_EPSILON_ONLY = "empty-or-epsilon-only"
    L1 = "L1"
    L2 = "L2"
    CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class Witness:
    """Words with ``x a o^n b y`` in L for every n."""

    x: str
    a: str
    b: str
    y: str


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    dfa: Dfa
    letter: Optional[str] = None
    witness: Optional[Witness] = None
    reason: Optional[Reason] = None
    l1: Optional[L1Report] = None
    l2: tuple[L2Report, ...] = ()
    monoid_size: Optional[int] = None

    @property
    def is_cellular(self) -> bool:
        return self.verdict is Verdict.CELLULAR


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def live_states(m: Dfa) -> frozenset[int]:
    """States from which some accepting state is reachable."""
    preds: dict[int, set[int]] = {}
    for p in range(m.state_count):
        for t in m.delta[p]:
            preds.setdefault(t, set()).add(p)
    seen = set(m.accepting)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in preds.get(q, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def is_degenerate(m: Dfa) -> bool:
    """True when L is empty or equals {epsilon}."""
    if m.initial not in m.accepting:
        return True
    live = live_states(m)
    return all(t not in live for t in m.delta[m.initial])


def is_universal(m: Dfa) -> bool:
    return len(m.accepting) == m.state_count


def _minimal_sets(sets: Iterable[frozenset[int]]) -> frozenset[frozenset[int]]:
    kept: list[frozenset[int]] = []
    for s in sorted(set(sets), key=lambda s: (len(s), sorted(s))):
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def _shortest_path(m: Dfa, src: int, dst: int) -> Optional[str]:
    return shortlex_search(src, m.step, m.alphabet.letters, lambda p: p == dst)


# ---------------------------------------------------------------------------
# (L1) factorial
# ---------------------------------------------------------------------------


def check_L1(m: Dfa) -> L1Report:
    """Factoriality test on a minimal complete DFA, with an (x, y) certificate:
    xy in L while x or y is not."""
    rejecting = m.rejecting
    if not rejecting:
        return L1Report(True)
    access = m.access_words
    sinks = m.sinks
    bad = sorted(q for q in rejecting if q not in sinks)
    if bad:
        h = bad[0]
        y = shortlex_search(h, m.step, m.alphabet.letters, lambda p: p in m.accepting)
        # a rejecting non-sink state of a minimal DFA always has a non-empty language
        assert y is not None
        return L1Report(False, access[h], y)
    for q in sorted(m.accepting):
        c = is_subset(left_language_from(m, q), m)
        if c is not None:
            return L1Report(False, access[q], c)
    return L1Report(True)


def brute_force_L1(m: Dfa, maxlen: int) -> L1Report:
    """Check every split of every accepted word up to ``maxlen``."""
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    for w in iter_words(m.alphabet, maxlen):
        if not m.accepts(w):
            continue
        for i in range(len(w) + 1):
            x, y = w[:i], w[i:]
            if not (m.accepts(x) and m.accepts(y)):
                return L1Report(False, x, y)
    return L1Report(True)


# ---------------------------------------------------------------------------
# (L2) receptive
# ---------------------------------------------------------------------------


def o_paths(m: Dfa, o: str) -> list[OPath]:
    """One o-path per accepting state whose o-orbit stays accepting."""
    out = []
    for q in sorted(m.accepting):
        orbit = [q]
        seen = {q}
        p = m.step(q, o)
        ok = True
        while p not in seen:
            if p not in m.accepting:
                ok = False
                break
            orbit.append(p)
            seen.add(p)
            p = m.step(p, o)
        if ok:
            out.append(OPath(q, tuple(orbit)))
    return out


def reachable_o_paths(m: Dfa, o: str, q: int) -> list[OPath]:
    reach = m.reachable_from(q)
    return [P for P in o_paths(m, o) if P.start in reach]


@dataclass(frozen=True)
class SubsetUnion:
    """The language of words y such that, for some S in ``family``, every state of
    S.y is accepting. Sets meeting a sink are dropped since they accept nothing,
    and only inclusion-minimal sets are kept."""

    dfa: Dfa
    family: frozenset[frozenset[int]]

    @classmethod
    def of(cls, dfa: Dfa, sets: Iterable[frozenset[int]]) -> "SubsetUnion":
        return cls(dfa, _normalize(dfa, sets))

    def step(self, c: str) -> "SubsetUnion":
        return SubsetUnion(self.dfa, _advance(self.dfa, self.family, self.dfa.alphabet.index(c)))

    def accepts(self, word: str) -> bool:
        m = self.dfa
        return any(all(m.run(s, word) in m.accepting for s in S) for S in self.family)

    def is_accepting(self) -> bool:
        return any(S <= self.dfa.accepting for S in self.family)


def _normalize(m: Dfa, sets: Iterable[frozenset[int]]) -> frozenset[frozenset[int]]:
    sinks = m.sinks
    return _minimal_sets(S for S in sets if not (S & sinks))


def _advance(m: Dfa, family: frozenset[frozenset[int]], i: int) -> frozenset[frozenset[int]]:
    delta = m.delta
    return _normalize(m, (frozenset(delta[s][i] for s in S) for S in family))


def build_L_oq(m: Dfa, o: str, q: int, monoid: Sequence[StateAction]) -> SubsetUnion:
    """L(o, q) as a union of intersection languages over image sets f(P)."""
    paths = reachable_o_paths(m, o, q)
    family = _normalize(m, (f.image(P.orbit) for P in paths for f in monoid))
    if not family:
        raise EmptyFamily(q, no_paths=not o_paths(m, o))
    return SubsetUnion(m, family)


def _containment_counterexample(m: Dfa, lang: SubsetUnion) -> Optional[str]:
    """Shortlex-least y in L(m) outside ``lang``."""
    sinks = m.sinks
    acc = m.accepting
    delta = m.delta
    index = m.alphabet.index

    def step(node, c):
        p, fam = node
        i = index(c)
        t = delta[p][i]
        if t in sinks:
            return None
        return (t, _advance(m, fam, i))

    def is_target(node):
        p, fam = node
        return p in acc and not any(S <= acc for S in fam)

    return shortlex_search((m.initial, lang.family), step, m.alphabet.letters, is_target)


def check_L2_for(m: Dfa, o: str, monoid: Sequence[StateAction]) -> L2Report:
    """Receptiveness with letter ``o``: L == L(o, q) for every accepting q."""
    access = m.access_words
    for q in sorted(m.accepting):
        try:
            lang = build_L_oq(m, o, q, monoid)
        except EmptyFamily as exc:
            reason = "no-o-paths" if exc.no_paths else "empty-family"
            y = shortlex_search(m.initial, m.step, m.alphabet.letters, lambda p: p in m.accepting)
            return L2Report(o, False, q, access[q], y, reason)
        if __debug__:
            assert is_subset(subset_union_dfa(lang), m) is None, "L(o,q) escapes L"
        y = _containment_counterexample(m, lang)
        if y is not None:
            return L2Report(o, False, q, access[q], y, "counterexample")
    return L2Report(o, True)


def subset_union_dfa(lang: SubsetUnion) -> Dfa:
    """Determinized realization of a SubsetUnion (states are normalized families)."""
    m = lang.dfa
    k = len(m.alphabet)
    ids = {lang.family: 0}
    order = [lang.family]
    rows = []
    i = 0
    while i < len(order):
        fam = order[i]
        row = []
        for j in range(k):
            nxt = _advance(m, fam, j)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(row)
        i += 1
    accepting = {ids[f] for f in order if any(S <= m.accepting for S in f)}
    return Dfa(m.alphabet, len(order), 0, accepting, rows)


def in_L_oq(m: Dfa, o: str, q: int, y: str, monoid: Sequence[StateAction]) -> bool:
    """Direct membership of y in L(o, q), straight from the definition."""
    for P in reachable_o_paths(m, o, q):
        for f in monoid:
            if all(m.run(f(p), y) in m.accepting for p in P.orbit):
                return True
    return False


def brute_force_L2(m: Dfa, o: str, maxwit: int) -> L2Report:
    """Search witnesses a, b of length <= ``maxwit`` for every accepting q and every
    y in L of length <= ``maxwit``, checking x a o^n b y for n = 0..|Q|.

    Words a and b are enumerated explicitly; results are memoized on the state q.a
    and on the map induced by b.
    """
    n_states = m.state_count
    acc = m.accepting
    words = list(iter_words(m.alphabet, maxwit))
    b_maps = {}
    for b in words:
        mp = tuple(m.run(s, b) for s in range(n_states))
        b_maps.setdefault(mp, b)
    ys = [y for y in words if m.accepts(y)]
    access = m.access_words
    for q in sorted(acc):
        orbits = {}
        for a in words:
            p = m.run(q, a)
            if p in orbits:
                continue
            orbit = set()
            for _ in range(n_states + 1):
                orbit.add(p)
                p = m.step(p, o)
            orbits[m.run(q, a)] = orbit
        for y in ys:
            ok = any(
                all(m.run(mp[s], y) in acc for s in orbit)
                for orbit in orbits.values()
                for mp in b_maps
            )
            if not ok:
                return L2Report(o, False, q, access[q], y, "counterexample")
    return L2Report(o, True)


# ---------------------------------------------------------------------------
# (L3) transitive and (L4) prolongable
# ---------------------------------------------------------------------------


def _union_counterexample(m: Dfa, starts: frozenset[int], good: frozenset[int]) -> Optional[str]:
    """Shortlex-least y in L with starts.y disjoint from ``good``."""
    sinks = m.sinks
    acc = m.accepting
    delta = m.delta
    index = m.alphabet.index

    def step(node, c):
        p, S = node
        i = index(c)
        t = delta[p][i]
        if t in sinks:
            return None
        return (t, frozenset(delta[s][i] for s in S))

    return shortlex_search(
        (m.initial, starts),
        step,
        m.alphabet.letters,
        lambda node: node[0] in acc and not (node[1] & good),
    )


def check_L3(m: Dfa) -> L3Report:
    access = m.access_words
    for q in sorted(m.accepting):
        reach = m.reachable_from(q) & m.accepting
        y = _union_counterexample(m, reach, m.accepting)
        if y is not None:
            return L3Report(False, access[q], y)
    return L3Report(True)


def check_L4(m: Dfa) -> L4Report:
    acc = m.accepting
    after_letter = frozenset(m.delta[m.initial])
    plus = frozenset().union(*(m.reachable_from(t) for t in after_letter)) & acc
    extendable = frozenset(q for q in acc if any(t in acc for t in m.delta[q]))
    u = _union_counterexample(m, plus, extendable)
    return L4Report(u is None, u)


# ---------------------------------------------------------------------------
# the decision procedure
# ---------------------------------------------------------------------------


def sample_witness(m: Dfa, o: str, monoid: Sequence[StateAction]) -> Witness:
    """Concrete a, b for the pair x = y = last single-letter word of L.

    Requires that o passed the receptiveness test.
    """
    # L is factorial and not a subset of {epsilon}, so some single letter is in L
    x = y = [c for c in m.alphabet if m.accepts(c)][-1]
    q = m.run(m.initial, x)
    for P in reachable_o_paths(m, o, q):
        for f in monoid:
            if all(m.run(f(p), y) in m.accepting for p in P.orbit):
                a = _shortest_path(m, q, P.start)
                return Witness(x, a, f.word, y)
    raise AssertionError(f"letter {o!r} has no witness for x = y = {x!r}")


def _l2_task(args):
    m, o, monoid = args
    return check_L2_for(m, o, monoid)


DecideInput = Union[Automaton, Regex]


def decide_cellularity(
    source: DecideInput, monoid_cap: int = DEFAULT_MONOID_CAP, jobs: int = 1
) -> Decision:
    if isinstance(source, Regex):
        source = ast_to_nfa(source)
    m = minimal_dfa(source)
    if is_degenerate(m):
        return Decision(Verdict.NOT_CELLULAR, m, reason=Reason.EMPTY_OR_EPSILON_ONLY)
    if is_universal(m):
        o = m.alphabet.letters[0]
        monoid = transition_monoid(m, monoid_cap)
        return Decision(
            Verdict.CELLULAR,
            m,
            letter=o,
            witness=sample_witness(m, o, monoid),
            l1=L1Report(True),
            l2=(L2Report(o, True),),
            monoid_size=len(monoid),
        )
    l1 = check_L1(m)
    if not l1.passed:
        return Decision(Verdict.NOT_CELLULAR, m, reason=Reason.L1, l1=l1)
    try:
        monoid = transition_monoid(m, monoid_cap)
    except MonoidCapExceeded:
        return Decision(Verdict.UNDECIDED, m, reason=Reason.CAP_EXCEEDED, l1=l1)

    letters = m.alphabet.letters
    reports: list[L2Report] = []
    if jobs > 1 and len(letters) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_reports = list(pool.map(_l2_task, [(m, o, monoid) for o in letters]))
        for r in all_reports:
            reports.append(r)
            if r.passed:
                break
    else:
        for o in letters:
            r = check_L2_for(m, o, monoid)
            reports.append(r)
            if r.passed:
                break
    last = reports[-1]
    if last.passed:
        return Decision(
            Verdict.CELLULAR,
            m,
            letter=last.letter,
            witness=sample_witness(m, last.letter, monoid),
            l1=l1,
            l2=tuple(reports),
            monoid_size=len(monoid),
        )
    return Decision(
        Verdict.NOT_CELLULAR, m, reason=Reason.L2, l1=l1, l2=tuple(reports),
        monoid_size=len(monoid),
    )


# ---------------------------------------------------------------------------
# certificate checking
# ---------------------------------------------------------------------------


def verify_l1_failure(m: Dfa, report: L1Report) -> bool:
    return m.accepts(report.x + report.y) and not (m.accepts(report.x) and m.accepts(report.y))


def verify_l2_failure(m: Dfa, report: L2Report, monoid: Sequence[StateAction]) -> bool:
    return (
        m.run(m.initial, report.x) == report.state
        and report.state in m.accepting
        and m.accepts(report.y)
        and not in_L_oq(m, report.letter, report.state, report.y, monoid)
    )


def verify_witness(m: Dfa, o: str, w: Witness) -> bool:
    # the orbit of x.a under o is eventually periodic within |Q| steps
    return all(
        m.accepts(w.x + w.a + o * n + w.b + w.y) for n in range(2 * m.state_count + 1)
    ) and all(m.accepts(v) for v in (w.x, w.a, w.b, w.y))


def verify_decision(d: Decision, monoid_cap: int = DEFAULT_MONOID_CAP) -> list[str]:
    """Re-check every certificate in ``d`` by membership runs; returns the problems."""
    m = d.dfa
    problems = []
    if d.verdict is Verdict.CELLULAR:
        if not verify_witness(m, d.letter, d.witness):
            problems.append(f"witness {d.witness} fails for o={d.letter}")
    elif d.verdict is Verdict.NOT_CELLULAR:
        if d.reason is Reason.EMPTY_OR_EPSILON_ONLY:
            if not is_degenerate(m):
                problems.append("language is neither empty nor {epsilon}")
        elif d.reason is Reason.L1:
            if not verify_l1_failure(m, d.l1):
                problems.append(f"L1 certificate {d.l1} does not verify")
        elif d.reason is Reason.L2:
            monoid = transition_monoid(m, monoid_cap)
            if [r.letter for r in d.l2] != list(m.alphabet.letters):
                problems.append("L2 reports do not cover every letter")
            for r in d.l2:
                if r.passed or not verify_l2_failure(m, r, monoid):
                    problems.append(f"L2 certificate {r} does not verify")
    return problems
