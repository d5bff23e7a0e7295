"""Exception types shared across the package."""


class CellangError(Exception):
    """Base class for all errors raised by this package."""


class UnknownLetter(CellangError, ValueError):
    def __init__(self, letter, alphabet=None, offset=None):
        self.letter = letter
        self.offset = offset
        msg = f"unknown letter {letter!r}"
        if alphabet is not None:
            msg += f" (alphabet is {''.join(alphabet)!r})"
        if offset is not None:
            msg += f" at offset {offset}"
        super().__init__(msg)


class RegexSyntaxError(CellangError, ValueError):
    """Malformed regular expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class FormatError(CellangError, ValueError):
    """Malformed automaton or rule file; ``line`` is 1-based."""

    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MonoidCapExceeded(CellangError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"transition monoid has more than {cap} elements")


class EmptyFamily(CellangError):
    """No subset survives in the family defining L(o, q); the letter cannot be receptive."""

    def __init__(self, state, no_paths=False):
        self.state = state
        self.no_paths = no_paths
        super().__init__(f"empty family at state {state}")


class WindowTooShort(CellangError, ValueError):
    pass


class EnumerationCapExceeded(CellangError):
    pass


class StateCapExceeded(CellangError):
    pass
