"""Line-based text formats for automata and local rules.

Automaton file::

    alphabet a b
    states 3
    initial 0
    accepting 0 1
    trans 0 a 0
    ...

Rule file::

    alphabet 0 1
    radius 1
    rule 000 0
    ...

``#`` starts a comment; tokens are separated by whitespace.
"""
from __future__ import annotations

import math
from typing import Iterator

from .automata import Alphabet, Automaton, Dfa, Nfa
from .errors import FormatError, UnknownLetter

HEADERS = ("alphabet", "states", "initial", "accepting")
MAX_RULE_WINDOWS = 10**6


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def _alphabet(tokens: list[str], lineno: int) -> Alphabet:
    try:
        return Alphabet(tuple(tokens))
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None


def _int(token: str, lineno: int, what: str) -> int:
    if not token.isdigit() or not token.isascii():
        raise FormatError(f"{what} must be a non-negative integer, got {token!r}", lineno)
    return int(token)


def parse_automaton_file(text: str) -> Nfa:
    header: dict = {}
    trans = set()
    for lineno, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        if key in HEADERS:
            if key in header:
                raise FormatError(f"duplicate {key!r} header", lineno)
            if trans:
                raise FormatError(f"{key!r} header after transitions", lineno)
            if key == "alphabet":
                header[key] = _alphabet(args, lineno)
                continue
            if key == "states":
                if len(args) != 1:
                    raise FormatError("'states' takes exactly one count", lineno)
                header[key] = _int(args[0], lineno, "state count")
                continue
            if "states" not in header:
                raise FormatError(f"{key!r} before 'states'", lineno)
            ids = {_int(t, lineno, "state id") for t in args}
            for q in ids:
                if q >= header["states"]:
                    raise FormatError(f"state {q} out of range (states {header['states']})", lineno)
            header[key] = ids
        elif key == "trans":
            missing = [h for h in HEADERS if h not in header]
            if missing:
                raise FormatError(f"'trans' before {missing[0]!r} header", lineno)
            if len(args) != 3:
                raise FormatError("'trans' takes <from> <letter> <to>", lineno)
            p = _int(args[0], lineno, "state id")
            q = _int(args[2], lineno, "state id")
            c = args[1]
            n = header["states"]
            if p >= n or q >= n:
                raise FormatError(f"state {max(p, q)} out of range (states {n})", lineno)
            if c not in header["alphabet"]:
                raise FormatError(f"unknown letter {c!r}", lineno)
            trans.add((p, c, q))
        else:
            raise FormatError(f"unknown keyword {key!r}", lineno)
    last = text.count("\n") + 1
    for h in HEADERS:
        if h not in header:
            raise FormatError(f"missing {h!r} header", last)
    return Nfa(header["alphabet"], header["states"], header["initial"], header["accepting"], trans)


def serialize_automaton(a: Automaton) -> str:
    if isinstance(a, Dfa):
        initial = [a.initial]
        n = a.to_nfa()
    else:
        initial = sorted(a.initial)
        n = a
    order = {c: i for i, c in enumerate(n.alphabet.letters)}
    lines = [
        "alphabet " + " ".join(n.alphabet.letters),
        f"states {n.state_count}",
        " ".join(["initial", *map(str, initial)]),
        " ".join(["accepting", *map(str, sorted(n.accepting))]),
    ]
    for p, c, q in sorted(n.transitions, key=lambda t: (t[0], order[t[1]], t[2])):
        lines.append(f"trans {p} {c} {q}")
    return "\n".join(lines) + "\n"


def parse_rule_file(text: str):
    """Parse a local-rule table; returns a :class:`cellang.ca.LocalRule`."""
    from .ca import LocalRule

    alphabet = radius = None
    table: dict[str, str] = {}
    for lineno, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        if key == "alphabet":
            if alphabet is not None:
                raise FormatError("duplicate 'alphabet' header", lineno)
            alphabet = _alphabet(args, lineno)
        elif key == "radius":
            if radius is not None:
                raise FormatError("duplicate 'radius' header", lineno)
            if len(args) != 1:
                raise FormatError("'radius' takes exactly one integer", lineno)
            radius = _int(args[0], lineno, "radius")
        elif key == "rule":
            if alphabet is None or radius is None:
                raise FormatError("'rule' before headers", lineno)
            if len(args) != 2:
                raise FormatError("'rule' takes <window> <output>", lineno)
            window, out = args
            if len(window) != 2 * radius + 1:
                raise FormatError(f"window {window!r} must have length {2 * radius + 1}", lineno)
            for c in window + out:
                if c not in alphabet:
                    raise FormatError(f"unknown letter {c!r}", lineno)
            if len(out) != 1:
                raise FormatError("output must be a single letter", lineno)
            if window in table:
                raise FormatError(f"duplicate window {window!r}", lineno)
            table[window] = out
        else:
            raise FormatError(f"unknown keyword {key!r}", lineno)
    last = text.count("\n") + 1
    if alphabet is None or radius is None:
        raise FormatError("missing 'alphabet' or 'radius' header", last)
    if (2 * radius + 1) * math.log(len(alphabet)) > math.log(MAX_RULE_WINDOWS):
        raise FormatError(f"rule table would exceed {MAX_RULE_WINDOWS} windows", last)
    expected = len(alphabet) ** (2 * radius + 1)
    if len(table) != expected:
        raise FormatError(f"rule table has {len(table)} windows, expected {expected}", last)
    try:
        return LocalRule(alphabet, radius, table)
    except (ValueError, UnknownLetter) as exc:
        raise FormatError(str(exc), last) from None


def serialize_rule(rule) -> str:
    lines = ["alphabet " + " ".join(rule.alphabet.letters), f"radius {rule.radius}"]
    for window in rule.windows():
        lines.append(f"rule {window} {rule.table[window]}")
    return "\n".join(lines) + "\n"
