"""Regular-language toolkit and a decision procedure for cellular languages."""
from .automata import (
    Alphabet,
    Dfa,
    Nfa,
    StateAction,
    complete,
    determinize,
    is_empty,
    is_subset,
    left_language_from,
    minimal_dfa,
    minimize,
    run,
    transition_monoid,
)
from .ca import LocalRule, apply_rule_block, ca_language_dfa, de_bruijn_nfa, enumerate_blocks
from .decider import Decision, Verdict, decide_cellularity
from .fileformat import parse_automaton_file, serialize_automaton
from .regex import ast_to_nfa, parse_regex

__version__ = "0.1.0"
