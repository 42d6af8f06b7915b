"""Exception hierarchy shared by the whole package."""


class AutomatonError(ValueError):
    """Malformed machine, word, or operand."""


class NotInvertibleError(AutomatonError):
    """An operation needing inverses met a non-invertible state or element."""


class ParseError(AutomatonError):
    """Syntax error in an automaton file or a generator word.

    ``line`` is 1-based for automaton files; ``position`` is a 0-based
    character offset for words.
    """

    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """A configured state, node, or size budget was exhausted."""
