"""One-dimensional cellular automata and their finite-block languages."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .automata import Alphabet, Dfa, Nfa, determinize, minimize
from .errors import EnumerationCapExceeded, StateCapExceeded, WindowTooShort

MAX_DE_BRUIJN_STATES = 4096
MAX_WINDOWS = 10**7


@dataclass(frozen=True)
class LocalRule:
    """A radius-``r`` local rule given as an explicit table from windows to letters."""

    alphabet: Alphabet
    radius: int
    table: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", Alphabet.of(self.alphabet))
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        table = dict(self.table)
        expected = set(self.windows())
        if set(table) != expected:
            raise ValueError(
                f"table must have exactly {len(expected)} windows of length {2 * self.radius + 1}"
            )
        for out in table.values():
            if out not in self.alphabet:
                raise ValueError(f"output {out!r} is not a letter")
        object.__setattr__(self, "table", table)

    def __hash__(self):
        return hash((self.alphabet, self.radius, tuple(sorted(self.table.items()))))

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def windows(self) -> list[str]:
        return ["".join(t) for t in product(self.alphabet.letters, repeat=2 * self.radius + 1)]

    @classmethod
    def elementary(cls, code: int) -> "LocalRule":
        """Wolfram-numbered radius-1 rule over {0, 1}: bit v of ``code`` is the output on
        the window whose binary value is v."""
        if not 0 <= code <= 255:
            raise ValueError("elementary rule code must be in 0..255")
        table = {
            f"{v:03b}": str((code >> v) & 1) for v in range(8)
        }
        return cls(Alphabet(("0", "1")), 1, table)

    @classmethod
    def from_function(cls, alphabet, radius: int, fn) -> "LocalRule":
        alphabet = Alphabet.of(alphabet)
        windows = ["".join(t) for t in product(alphabet.letters, repeat=2 * radius + 1)]
        return cls(alphabet, radius, {w: fn(w) for w in windows})


def apply_rule_block(rule: LocalRule, word: str) -> str:
    """Image of a finite window: one output letter per full neighbourhood."""
    span = 2 * rule.radius
    if len(word) < span:
        raise WindowTooShort(f"need at least {span} letters, got {len(word)}")
    table = rule.table
    w = rule.width
    return "".join(table[word[i:i + w]] for i in range(len(word) - span))


def de_bruijn_nfa(rule: LocalRule) -> Nfa:
    """States are the words of length 2r; reading window w moves from its first 2r
    letters to its last 2r letters and emits table[w]. Every state is initial and
    accepting."""
    span = 2 * rule.radius
    nodes = ["".join(t) for t in product(rule.alphabet.letters, repeat=span)]
    ids = {w: i for i, w in enumerate(nodes)}
    trans = {
        (ids[w[:span]], out, ids[w[1:]]) for w, out in rule.table.items()
    }
    everything = range(len(nodes))
    return Nfa(rule.alphabet, len(nodes), everything, everything, trans)


def enumerate_blocks(rule: LocalRule, k: int, cap: int = MAX_WINDOWS) -> set[str]:
    """Brute force: images of every word of length k + 2r."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = k + 2 * rule.radius
    if len(rule.alphabet) ** n > cap:
        raise EnumerationCapExceeded(f"{len(rule.alphabet)}^{n} windows exceeds cap {cap}")
    return {apply_rule_block(rule, "".join(t)) for t in product(rule.alphabet.letters, repeat=n)}


def ca_language_dfa(rule: LocalRule, state_cap: int = MAX_DE_BRUIJN_STATES) -> Dfa:
    """Minimal DFA of the finite-block language of ``rule``."""
    if len(rule.alphabet) ** (2 * rule.radius) > state_cap:
        raise StateCapExceeded(
            f"De Bruijn graph has {len(rule.alphabet) ** (2 * rule.radius)} states, cap {state_cap}"
        )
    return minimize(determinize(de_bruijn_nfa(rule)))
