"""Finite automata over an explicit alphabet.

States are integers ``0 .. state_count - 1``. Words are plain ``str`` values whose
characters are letters of the alphabet. Every search that returns a word explores
letters in alphabet order breadth-first, so the word returned is the shortest one
and, among those, the first in alphabet order (shortlex).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator, Optional, Union

from .errors import MonoidCapExceeded, UnknownLetter

DEFAULT_MONOID_CAP = 1_000_000

_FORBIDDEN = set("#")


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise ValueError("alphabet must be non-empty")
        for c in letters:
            if not isinstance(c, str) or len(c) != 1 or not c.isprintable():
                raise ValueError(f"letters must be single printable characters, got {c!r}")
            if c.isspace() or c in _FORBIDDEN:
                raise ValueError(f"letter {c!r} is reserved")
        if len(set(letters)) != len(letters):
            raise ValueError("alphabet has duplicate letters")

    @classmethod
    def of(cls, letters: Union[str, Iterable[str], "Alphabet"]) -> "Alphabet":
        if isinstance(letters, Alphabet):
            return letters
        return cls(tuple(letters))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.letters)}

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise UnknownLetter(letter, self.letters) from None

    def extend(self, letter: str) -> "Alphabet":
        return Alphabet(self.letters + (letter,))

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, letter) -> bool:
        return letter in self._index

    def __str__(self) -> str:
        return "".join(self.letters)


def iter_words(alphabet: Alphabet, maxlen: int, minlen: int = 0) -> Iterator[str]:
    """All words with ``minlen <= len <= maxlen`` in shortlex order."""
    for n in range(minlen, maxlen + 1):
        for t in product(alphabet.letters, repeat=n):
            yield "".join(t)


def _check_word(alphabet: Alphabet, word: str) -> None:
    for c in word:
        if c not in alphabet:
            raise UnknownLetter(c, alphabet.letters)


def shortlex_search(
    start: Hashable,
    step: Callable[[Hashable, str], Optional[Hashable]],
    letters: Iterable[str],
    is_target: Callable[[Hashable], bool],
) -> Optional[str]:
    """Breadth-first search over an implicit deterministic graph.

    ``step`` returns the successor of a node on a letter, or None to prune. Returns
    the shortlex-least word leading from ``start`` to a target node, or None.
    """
    letters = tuple(letters)
    if is_target(start):
        return ""
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for c in letters:
            nxt = step(node, c)
            if nxt is None or nxt in parent:
                continue
            parent[nxt] = (node, c)
            if is_target(nxt):
                return _backtrack(parent, nxt)
            queue.append(nxt)
    return None


def _backtrack(parent: dict, node) -> str:
    out = []
    while parent[node] is not None:
        node, c = parent[node]
        out.append(c)
    return "".join(reversed(out))


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic acceptor without epsilon moves."""

    alphabet: Alphabet
    state_count: int
    initial: frozenset[int]
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, str, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        n = self.state_count
        if n < 0:
            raise ValueError("state_count must be non-negative")
        for q in self.initial | self.accepting:
            if not 0 <= q < n:
                raise ValueError(f"state {q} out of range for {n} states")
        for p, c, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise ValueError(f"transition ({p}, {c!r}, {q}) out of range")
            if c not in self.alphabet:
                raise UnknownLetter(c, self.alphabet.letters)

    @cached_property
    def successors(self) -> dict[tuple[int, str], frozenset[int]]:
        out: dict[tuple[int, str], set[int]] = {}
        for p, c, q in self.transitions:
            out.setdefault((p, c), set()).add(q)
        return {k: frozenset(v) for k, v in out.items()}

    def step_set(self, states: frozenset[int], letter: str) -> frozenset[int]:
        succ = self.successors
        out: set[int] = set()
        for p in states:
            out |= succ.get((p, letter), frozenset())
        return frozenset(out)

    def accepts(self, word: str) -> bool:
        _check_word(self.alphabet, word)
        current = self.initial
        for c in word:
            current = self.step_set(current, c)
            if not current:
                return False
        return bool(current & self.accepting)

    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(v) == 1 for v in self.successors.values())

    def is_complete_dfa(self) -> bool:
        return (
            len(self.initial) == 1
            and self.is_deterministic()
            and len(self.successors) == self.state_count * len(self.alphabet)
        )

    def as_dfa(self) -> "Dfa":
        """The same machine as a Dfa; requires a complete deterministic Nfa."""
        if not self.is_complete_dfa():
            raise ValueError("automaton is not a complete DFA")
        delta = tuple(
            tuple(next(iter(self.successors[(p, c)])) for c in self.alphabet)
            for p in range(self.state_count)
        )
        (q0,) = self.initial
        return Dfa(self.alphabet, self.state_count, q0, self.accepting, delta)

    def with_alphabet(self, alphabet: Alphabet) -> "Nfa":
        for c in self.alphabet:
            if c not in alphabet:
                raise ValueError(f"new alphabet lacks letter {c!r}")
        return replace(self, alphabet=alphabet)


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic acceptor; ``delta[q][i]`` is the target on the i-th letter."""

    alphabet: Alphabet
    state_count: int
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        n, k = self.state_count, len(self.alphabet)
        if n < 1:
            raise ValueError("a complete DFA needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")
        if len(self.delta) != n or any(len(row) != k for row in self.delta):
            raise ValueError("transition table is not total")
        if any(not 0 <= q < n for row in self.delta for q in row):
            raise ValueError("transition target out of range")

    def step(self, q: int, letter: str) -> int:
        return self.delta[q][self.alphabet.index(letter)]

    def run(self, q: int, word: str) -> int:
        idx = self.alphabet.index
        delta = self.delta
        for c in word:
            q = delta[q][idx(c)]
        return q

    def accepts(self, word: str) -> bool:
        return self.run(self.initial, word) in self.accepting

    def accepts_from(self, q: int, word: str) -> bool:
        return self.run(q, word) in self.accepting

    @cached_property
    def sinks(self) -> frozenset[int]:
        """Non-accepting states fixed by every letter."""
        return frozenset(
            q
            for q in range(self.state_count)
            if q not in self.accepting and all(t == q for t in self.delta[q])
        )

    @cached_property
    def rejecting(self) -> frozenset[int]:
        return frozenset(range(self.state_count)) - self.accepting

    @cached_property
    def access_words(self) -> dict[int, str]:
        """Shortlex-least word reaching each reachable state."""
        words = {self.initial: ""}
        queue = deque([self.initial])
        while queue:
            q = queue.popleft()
            for i, c in enumerate(self.alphabet.letters):
                t = self.delta[q][i]
                if t not in words:
                    words[t] = words[q] + c
                    queue.append(t)
        return words

    def reachable_from(self, q: int) -> frozenset[int]:
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for t in self.delta[p]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def to_nfa(self) -> Nfa:
        trans = {
            (p, c, self.delta[p][i])
            for p in range(self.state_count)
            for i, c in enumerate(self.alphabet.letters)
        }
        return Nfa(self.alphabet, self.state_count, {self.initial}, self.accepting, trans)

    def with_alphabet(self, alphabet: Alphabet) -> "Dfa":
        """Re-express over a larger alphabet; new letters lead to a (fresh) sink."""
        return complete(self.to_nfa().with_alphabet(alphabet))


Automaton = Union[Nfa, Dfa]


@dataclass(frozen=True)
class StateAction:
    """The map q -> q.w induced by some word w, tagged with a shortlex-least such w."""

    mapping: tuple[int, ...]
    word: str = ""

    def __call__(self, q: int) -> int:
        return self.mapping[q]

    def image(self, states: Iterable[int]) -> frozenset[int]:
        return frozenset(self.mapping[q] for q in states)

    def then(self, other: "StateAction") -> "StateAction":
        """Action of ``self.word + other.word``."""
        return StateAction(tuple(other.mapping[t] for t in self.mapping), self.word + other.word)


def run(d: Dfa, q: int, word: str) -> int:
    return d.run(q, word)


def letter_actions(d: Dfa) -> list[StateAction]:
    return [
        StateAction(tuple(d.delta[q][i] for q in range(d.state_count)), c)
        for i, c in enumerate(d.alphabet.letters)
    ]


def determinize(n: Nfa, complete: bool = True) -> Union[Dfa, Nfa]:
    """Subset construction over reachable subsets, explored breadth-first.

    With ``complete=False`` the empty subset is left out and the (possibly partial)
    deterministic machine is returned as an Nfa.
    """
    letters = n.alphabet.letters
    start = n.initial
    ids = {start: 0}
    order = [start]
    rows: list[list[Optional[int]]] = []
    i = 0
    while i < len(order):
        s = order[i]
        row: list[Optional[int]] = []
        for c in letters:
            t = n.step_set(s, c)
            if not t and not complete:
                row.append(None)
                continue
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        rows.append(row)
        i += 1
    accepting = {ids[s] for s in order if s & n.accepting}
    if complete:
        return Dfa(n.alphabet, len(order), 0, accepting, rows)
    if not start:
        return Nfa(n.alphabet, 0, (), ())
    trans = {
        (p, c, t) for p, row in enumerate(rows) for c, t in zip(letters, row) if t is not None
    }
    return Nfa(n.alphabet, len(order), {0}, accepting, trans)


def complete(d: Automaton) -> Dfa:
    """Route missing transitions of a deterministic machine to one fresh sink.

    A Dfa is already complete and is returned as is. A deterministic Nfa gets one
    extra state exactly when some (state, letter) pair has no target.
    """
    if isinstance(d, Dfa):
        return d
    if not d.is_deterministic():
        raise ValueError("complete() needs a deterministic automaton; use determinize()")
    letters = d.alphabet.letters
    n = d.state_count
    sink = n
    missing = not d.initial or any(
        (p, c) not in d.successors for p in range(n) for c in letters
    )
    rows = [
        [next(iter(d.successors[(p, c)])) if (p, c) in d.successors else sink for c in letters]
        for p in range(n)
    ]
    if missing:
        rows.append([sink] * len(letters))
    initial = next(iter(d.initial)) if d.initial else sink
    return Dfa(d.alphabet, len(rows), initial, d.accepting, rows)


def to_dfa(a: Automaton) -> Dfa:
    """Any automaton as a complete Dfa (no minimization)."""
    if isinstance(a, Dfa):
        return a
    if a.is_deterministic():
        return complete(a)
    return determinize(a)


def canonical(d: Dfa) -> Dfa:
    """Drop unreachable states and renumber breadth-first from the initial state."""
    order = list(d.access_words)
    ids = {q: i for i, q in enumerate(order)}
    rows = [[ids[t] for t in d.delta[q]] for q in order]
    accepting = {ids[q] for q in order if q in d.accepting}
    return Dfa(d.alphabet, len(order), 0, accepting, rows)


def minimize(d: Dfa) -> Dfa:
    """Moore partition refinement followed by canonical renumbering."""
    d = canonical(d)
    n = d.state_count
    block = [1 if q in d.accepting else 0 for q in range(n)]
    count = len(set(block))
    while True:
        sig = [(block[q], tuple(block[t] for t in d.delta[q])) for q in range(n)]
        ids: dict = {}
        new_block = [ids.setdefault(s, len(ids)) for s in sig]
        stable = len(ids) == count
        block, count = new_block, len(ids)
        if stable:
            break
    rep: dict[int, int] = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    rows = [[block[t] for t in d.delta[rep[b]]] for b in range(count)]
    accepting = {block[q] for q in d.accepting}
    return canonical(Dfa(d.alphabet, count, block[d.initial], accepting, rows))


def minimal_dfa(a: Automaton) -> Dfa:
    return minimize(to_dfa(a))


def complement(d: Dfa) -> Dfa:
    return replace(d, accepting=frozenset(range(d.state_count)) - d.accepting)


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Reachable part of the synchronized product, accepting where both accept."""
    if a.alphabet != b.alphabet:
        raise ValueError("alphabets differ")
    k = len(a.alphabet)
    start = (a.initial, b.initial)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for j in range(k):
            t = (a.delta[p][j], b.delta[q][j])
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        rows.append(row)
        i += 1
    accepting = {ids[s] for s in order if s[0] in a.accepting and s[1] in b.accepting}
    return Dfa(a.alphabet, len(order), 0, accepting, rows)


def is_subset(a: Dfa, b: Dfa) -> Optional[str]:
    """None when L(a) is contained in L(b), else the shortlex-least word of L(a) - L(b)."""
    if a.alphabet != b.alphabet:
        raise ValueError("alphabets differ")
    letters = a.alphabet.letters
    index = a.alphabet.index

    def step(pq, c):
        i = index(c)
        return (a.delta[pq[0]][i], b.delta[pq[1]][i])

    return shortlex_search(
        (a.initial, b.initial),
        step,
        letters,
        lambda pq: pq[0] in a.accepting and pq[1] not in b.accepting,
    )


def is_equivalent(a: Dfa, b: Dfa) -> bool:
    return is_subset(a, b) is None and is_subset(b, a) is None


def is_empty(a: Automaton) -> Optional[str]:
    """None when the language is empty, else its shortlex-least word."""
    if isinstance(a, Dfa):
        return shortlex_search(
            a.initial, lambda q, c: a.step(q, c), a.alphabet.letters, lambda q: q in a.accepting
        )
    if not a.initial:
        return None
    return shortlex_search(
        a.initial,
        lambda s, c: a.step_set(s, c) or None,
        a.alphabet.letters,
        lambda s: bool(s & a.accepting),
    )


def left_language_from(d: Dfa, q: int) -> Dfa:
    """Minimal DFA of the words accepted when starting from state ``q``."""
    if not 0 <= q < d.state_count:
        raise ValueError(f"state {q} out of range")
    return minimize(replace(d, initial=q))


def transition_monoid(d: Dfa, cap: int = DEFAULT_MONOID_CAP) -> list[StateAction]:
    """All distinct state maps induced by words, breadth-first by word length.

    The identity (for the empty word) comes first; each element carries its
    shortlex-least representative word.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    gens = letter_actions(d)
    identity = StateAction(tuple(range(d.state_count)), "")
    seen = {identity.mapping}
    out = [identity]
    i = 0
    while i < len(out):
        f = out[i]
        for g in gens:
            h = f.then(g)
            if h.mapping not in seen:
                seen.add(h.mapping)
                out.append(h)
                if len(out) > cap:
                    raise MonoidCapExceeded(cap)
        i += 1
    return out
