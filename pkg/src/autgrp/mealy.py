"""Mealy machines: representation, validation, action on tree words.

Letters are 1-based at every public surface. Internally the transition
tables are indexed by state position and 0-based letter::

    machine.nxt[i][x]   successor index of state i on letter x+1
    machine.out[i][x]   output letter (0-based) of state i on letter x+1

The action is a right action evaluated left to right: ``v^(gh) = (v^g)^h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Iterable, Mapping, Sequence

from .errors import AutomatonError, BudgetExceeded, NotInvertibleError
from .words import Word, parse_word

MAX_LETTERS = 4096
MAX_STATES = 10**6


class MealyMachine:
    """A finite transducer ``X x Q -> Q x X`` with an optional identity state.

    ``transitions`` maps ``(state, letter)`` to ``(state, letter)``. Missing
    entries are allowed at construction so that :func:`validate` can report
    them; every other operation requires a complete machine.
    """

    def __init__(
        self,
        name: str,
        alphabet: int,
        states: Sequence[str],
        transitions: Mapping[tuple[str, int], tuple[str, int]],
        identity: str | None = None,
    ):
        if alphabet < 1:
            raise AutomatonError("alphabet size must be positive")
        self.name = name
        self.p = int(alphabet)
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state names")
        self._index = {q: i for i, q in enumerate(self.states)}
        if identity is not None and identity not in self._index:
            raise AutomatonError(f"identity state {identity!r} is not a state")
        self.identity = identity
        nxt = [[None] * self.p for _ in self.states]
        out = [[None] * self.p for _ in self.states]
        for (q, x), (r, y) in transitions.items():
            i, j = self.index(q), self.index(r)
            self._check_letter(x)
            self._check_letter(y)
            nxt[i][x - 1] = j
            out[i][x - 1] = y - 1
        self.nxt = tuple(tuple(row) for row in nxt)
        self.out = tuple(tuple(row) for row in out)

    @property
    def alphabet(self) -> int:
        return self.p

    def index(self, q: str) -> int:
        try:
            return self._index[q]
        except KeyError:
            raise AutomatonError(f"unknown state {q!r}") from None

    def _check_letter(self, x: int) -> None:
        if not (isinstance(x, int) and 1 <= x <= self.p):
            raise AutomatonError(f"letter {x!r} out of range 1..{self.p}")

    @property
    def is_complete(self) -> bool:
        return all(r is not None for row in self.nxt for r in row)

    def require_complete(self) -> None:
        if not self.is_complete:
            q, x = missing_transitions(self)[0]
            raise AutomatonError(f"missing transition for state {q!r}, letter {x}")

    def transitions(self):
        """Yield ``((state, letter), (state, letter))`` in (state, letter) order."""
        for i, q in enumerate(self.states):
            for x in range(self.p):
                r = self.nxt[i][x]
                if r is not None:
                    yield (q, x + 1), (self.states[r], self.out[i][x] + 1)

    def is_invertible_state(self, q: str) -> bool:
        row = self.out[self.index(q)]
        return None not in row and sorted(row) == list(range(self.p))

    @property
    def invertible_states(self) -> frozenset:
        return frozenset(q for q in self.states if self.is_invertible_state(q))

    @property
    def is_invertible(self) -> bool:
        return len(self.invertible_states) == len(self.states)

    def __eq__(self, other):
        if not isinstance(other, MealyMachine):
            return NotImplemented
        return (
            self.name == other.name
            and self.p == other.p
            and self.states == other.states
            and self.identity == other.identity
            and self.nxt == other.nxt
            and self.out == other.out
        )

    def __hash__(self):
        return hash((self.name, self.p, self.states, self.nxt, self.out))

    def __repr__(self):
        return f"MealyMachine({self.name!r}, p={self.p}, states={list(self.states)})"


def missing_transitions(machine: MealyMachine) -> list[tuple[str, int]]:
    return [
        (q, x + 1)
        for i, q in enumerate(machine.states)
        for x in range(machine.p)
        if machine.nxt[i][x] is None
    ]


@dataclass
class ValidationReport:
    missing: list = field(default_factory=list)
    invertible_states: frozenset = frozenset()
    identity: str | None = None
    identity_ok: bool | None = None
    n_states: int = 0

    @property
    def complete(self) -> bool:
        return not self.missing

    @property
    def invertible(self) -> bool:
        return self.complete and len(self.invertible_states) == self.n_states

    @property
    def valid(self) -> bool:
        return self.complete and self.identity_ok is not False


def validate(machine: MealyMachine) -> ValidationReport:
    """Completeness, per-state invertibility and identity-law check."""
    report = ValidationReport(
        missing=missing_transitions(machine),
        invertible_states=machine.invertible_states,
        identity=machine.identity,
        n_states=len(machine.states),
    )
    if machine.identity is not None:
        i = machine.index(machine.identity)
        report.identity_ok = all(
            machine.nxt[i][x] == i and machine.out[i][x] == x for x in range(machine.p)
        )
    return report


def step(machine: MealyMachine, q: str, x: int) -> tuple[str, int]:
    """One transition: ``(q@x, x^pi(q))``."""
    i = machine.index(q)
    machine._check_letter(x)
    r = machine.nxt[i][x - 1]
    if r is None:
        raise AutomatonError(f"missing transition for state {q!r}, letter {x}")
    return machine.states[r], machine.out[i][x - 1] + 1


def run(machine: MealyMachine, q: str, v: Sequence[int]) -> tuple[str, tuple]:
    """Follow ``v`` from ``q``; return the end state ``q@v`` and ``v^q``."""
    out = []
    for x in v:
        q, y = step(machine, q, x)
        out.append(y)
    return q, tuple(out)


def _state_sequence(machine: MealyMachine, w) -> list[str]:
    if isinstance(w, str):
        w = parse_word(w, machine.states)
    if isinstance(w, Word):
        flat = w.flatten()
        if any(e < 0 for _, e in flat):
            raise AutomatonError("act() takes non-negative powers only; use element_of for inverses")
        names = [n for n, _ in flat]
    else:
        names = list(w)
    for n in names:
        machine.index(n)
    return names


def act(machine: MealyMachine, w, v: Sequence[int]) -> tuple:
    """Image of the tree word ``v`` under the state word ``w`` (leftmost first)."""
    v = tuple(v)
    for x in v:
        machine._check_letter(x)
    for q in _state_sequence(machine, w):
        _, v = run(machine, q, v)
    return v


# ---------------------------------------------------------------------------
# power products

def block_to_letter(block: Sequence[int], p: int) -> int:
    """Lexicographic index (1-based) of a block ``x1..xm`` in ``X^m``."""
    k = 0
    for x in block:
        k = k * p + (x - 1)
    return k + 1


def letter_to_block(letter: int, p: int, m: int) -> tuple:
    k = letter - 1
    digits = []
    for _ in range(m):
        k, r = divmod(k, p)
        digits.append(r + 1)
    return tuple(reversed(digits))


def power_product(
    machine: MealyMachine,
    m: int,
    n: int,
    *,
    initial: Iterable[Sequence[str]] | None = None,
    max_letters: int = MAX_LETTERS,
    max_states: int = MAX_STATES,
) -> MealyMachine:
    """The machine with stateset ``Q^n`` and alphabet ``X^m``.

    A state ``(s1, ..., sn)`` on block ``u`` feeds ``u`` through ``s1``, its
    output through ``s2`` and so on. Only the composite states reachable from
    ``initial`` (default: all of ``Q^n``) are materialized. Composite state
    names are the component names joined by ``.``; blocks are encoded by
    :func:`block_to_letter`.
    """
    if m < 1 or n < 1:
        raise AutomatonError("m and n must be positive")
    machine.require_complete()
    p = machine.p
    letters = p**m
    if letters > max_letters:
        raise BudgetExceeded(f"alphabet X^{m} has {letters} letters > {max_letters}")
    blocks = [letter_to_block(k + 1, p, m) for k in range(letters)]

    if initial is None:
        if len(machine.states) ** n > max_states:
            raise BudgetExceeded(f"Q^{n} exceeds {max_states} states")
        start = list(_cartesian(range(len(machine.states)), repeat=n))
    else:
        start = [tuple(machine.index(q) for q in t) for t in initial]

    seen = {}
    order = []
    for t in start:
        if t not in seen:
            seen[t] = len(order)
            order.append(t)
    trans = {}
    k = 0
    while k < len(order):
        t = order[k]
        k += 1
        for b, block in enumerate(blocks):
            u = [x - 1 for x in block]
            new = []
            for s in t:
                for pos, x in enumerate(u):
                    u[pos] = machine.out[s][x]
                    s = machine.nxt[s][x]
                new.append(s)
            new = tuple(new)
            if new not in seen:
                if len(order) >= max_states:
                    raise BudgetExceeded(f"power product exceeds {max_states} states")
                seen[new] = len(order)
                order.append(new)
            trans[(t, b + 1)] = (new, block_to_letter([x + 1 for x in u], p))

    def name(t):
        return ".".join(machine.states[i] for i in t)

    identity = None
    if machine.identity is not None:
        e = machine.index(machine.identity)
        if (e,) * n in seen:
            identity = name((e,) * n)
    return MealyMachine(
        f"{machine.name}_{m}_{n}",
        letters,
        [name(t) for t in order],
        {(name(t), x): (name(r), y) for (t, x), (r, y) in trans.items()},
        identity=identity,
    )


def inverse_name(q: str) -> str:
    return q + "^-1"


def invert_machine(machine: MealyMachine, names=inverse_name) -> MealyMachine:
    """The machine whose state ``q^-1`` undoes state ``q``.

    The declared identity state keeps its own name.
    """
    machine.require_complete()
    for q in machine.states:
        if not machine.is_invertible_state(q):
            raise NotInvertibleError(f"state {q!r} is not invertible")

    def rename(q):
        return q if q == machine.identity else names(q)

    trans = {}
    for (q, x), (r, y) in machine.transitions():
        trans[(rename(q), y)] = (rename(r), x)
    return MealyMachine(
        machine.name + "_inv",
        machine.p,
        [rename(q) for q in machine.states],
        trans,
        identity=machine.identity,
    )
