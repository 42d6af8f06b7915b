"""Line-oriented automaton text format.

::

    # comment
    automaton grigorchuk
    alphabet 2
    states a b c d e
    identity e
    a 1 -> e 2
    ...
    initial a          # optional, for serialized elements
"""

from __future__ import annotations

from .errors import ParseError
from .mealy import MealyMachine


def serialize_machine(machine: MealyMachine, initial: str | None = None) -> str:
    lines = [
        f"automaton {machine.name}",
        f"alphabet {machine.p}",
        "states " + " ".join(machine.states),
    ]
    if machine.identity is not None:
        lines.append(f"identity {machine.identity}")
    for (q, x), (r, y) in machine.transitions():
        lines.append(f"{q} {x} -> {r} {y}")
    if initial is not None:
        lines.append(f"initial {initial}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, strict: bool = True) -> tuple[MealyMachine, str | None]:
    """Parse a file; return the machine and the ``initial`` state (or None)."""
    name = None
    p = None
    states = None
    identity = None
    initial = None
    trans: dict = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "automaton" and len(parts) == 2:
            name = parts[1]
        elif key == "alphabet" and len(parts) == 2:
            try:
                p = int(parts[1])
            except ValueError:
                raise ParseError(f"bad alphabet size {parts[1]!r}", line=lineno) from None
            if p < 1:
                raise ParseError("alphabet size must be positive", line=lineno)
        elif key == "states" and len(parts) >= 2:
            states = parts[1:]
            if len(set(states)) != len(states):
                raise ParseError("duplicate state name", line=lineno)
        elif key == "identity" and len(parts) == 2:
            identity = parts[1]
            _known(identity, states, lineno)
        elif key == "initial" and len(parts) == 2:
            initial = parts[1]
            _known(initial, states, lineno)
        elif len(parts) == 5 and parts[2] == "->":
            if p is None or states is None:
                raise ParseError("transition before 'alphabet' and 'states'", line=lineno)
            q, x, _, r, y = parts
            _known(q, states, lineno)
            _known(r, states, lineno)
            x, y = _letter(x, p, lineno), _letter(y, p, lineno)
            if (q, x) in trans:
                raise ParseError(f"duplicate transition for state {q}, letter {x}", line=lineno)
            trans[(q, x)] = (r, y)
        else:
            raise ParseError(f"cannot parse {line!r}", line=lineno)

    if name is None:
        raise ParseError("missing 'automaton' line")
    if p is None:
        raise ParseError("missing 'alphabet' line")
    if states is None:
        raise ParseError("missing 'states' line")
    if strict:
        for q in states:
            for x in range(1, p + 1):
                if (q, x) not in trans:
                    raise ParseError(f"missing transition for state {q}, letter {x}")
    return MealyMachine(name, p, states, trans, identity=identity), initial


def parse_machine(text: str, strict: bool = True) -> MealyMachine:
    return parse_automaton(text, strict)[0]


def _known(q, states, lineno):
    if states is None:
        raise ParseError("state referenced before 'states' line", line=lineno)
    if q not in states:
        raise ParseError(f"unknown state {q!r}", line=lineno)


def _letter(tok, p, lineno):
    try:
        x = int(tok)
    except ValueError:
        raise ParseError(f"bad letter {tok!r}", line=lineno) from None
    if not 1 <= x <= p:
        raise ParseError(f"letter {x} out of range 1..{p}", line=lineno)
    return x
