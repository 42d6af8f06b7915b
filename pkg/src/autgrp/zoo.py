"""Built-in presentations and the affine-map transducer builder."""

from __future__ import annotations

from typing import Sequence

from .errors import AutomatonError, BudgetExceeded
from .mealy import MealyMachine


def _machine(name, p, table, identity=None):
    # table rows: state, input, output, next
    states = list(dict.fromkeys(row[0] for row in table))
    trans = {(q, x): (r, y) for q, x, y, r in table}
    return MealyMachine(name, p, states, trans, identity=identity)


def grigorchuk() -> MealyMachine:
    return _machine(
        "grigorchuk",
        2,
        [
            ("a", 1, 2, "e"), ("a", 2, 1, "e"),
            ("b", 1, 1, "a"), ("b", 2, 2, "c"),
            ("c", 1, 1, "a"), ("c", 2, 2, "d"),
            ("d", 1, 1, "e"), ("d", 2, 2, "b"),
            ("e", 1, 1, "e"), ("e", 2, 2, "e"),
        ],
        identity="e",
    )


def sushchanskyy() -> MealyMachine:
    return _machine(
        "sushchanskyy",
        2,
        [
            ("r", 1, 2, "r"), ("r", 2, 2, "s"),
            ("s", 1, 2, "s"), ("s", 2, 1, "s"),
        ],
    )


def bsv() -> MealyMachine:
    """Brunner-Sidki-Vieira group; ``T`` and ``M`` are the inverses of ``t``, ``m``."""
    return _machine(
        "bsv",
        2,
        [
            ("t", 1, 2, "e"), ("t", 2, 1, "t"),
            ("T", 2, 1, "e"), ("T", 1, 2, "T"),
            ("m", 1, 2, "e"), ("m", 2, 1, "M"),
            ("M", 2, 1, "e"), ("M", 1, 2, "m"),
            ("e", 1, 1, "e"), ("e", 2, 2, "e"),
        ],
        identity="e",
    )


def gupta_sidki() -> MealyMachine:
    """Gupta-Sidki group over {1,2,3}; ``T`` and ``A`` are the inverses of ``t``, ``a``."""
    return _machine(
        "gupta_sidki",
        3,
        [
            ("t", 1, 1, "a"), ("t", 2, 2, "A"), ("t", 3, 3, "t"),
            ("T", 1, 1, "A"), ("T", 2, 2, "a"), ("T", 3, 3, "T"),
            ("a", 1, 2, "e"), ("a", 2, 3, "e"), ("a", 3, 1, "e"),
            ("A", 1, 3, "e"), ("A", 2, 1, "e"), ("A", 3, 2, "e"),
            ("e", 1, 1, "e"), ("e", 2, 2, "e"), ("e", 3, 3, "e"),
        ],
        identity="e",
    )


def trivial() -> MealyMachine:
    """One identity state over {1,2}."""
    return _machine("trivial", 2, [("e", 1, 1, "e"), ("e", 2, 2, "e")], identity="e")


def bits_to_letter(bits: Sequence[int]) -> int:
    """Bit vector ``(x_0, ..., x_{n-1})`` to the letter ``1 + sum x_k 2^k``."""
    return 1 + sum(b << k for k, b in enumerate(bits))


def letter_to_bits(letter: int, n: int) -> tuple:
    k = letter - 1
    return tuple((k >> i) & 1 for i in range(n))


def affine_machine(
    n: int, A: Sequence[Sequence[int]], w: Sequence[int], max_states: int = 10**5
) -> MealyMachine:
    """Transducer for ``v -> A v + w`` on ``(Z_2)^n``, least significant digit first.

    States are carry vectors; the state with carry ``c`` reads the digit
    vector ``x``, emits ``(A x + c) mod 2`` and moves to carry
    ``(A x + c) div 2``. The initial state (listed first) carries ``w``.
    """
    A = [list(map(int, row)) for row in A]
    w = tuple(int(t) for t in w)
    if len(A) != n or any(len(row) != n for row in A) or len(w) != n:
        raise AutomatonError("dimension mismatch")
    p = 2**n
    digits = [letter_to_bits(k + 1, n) for k in range(p)]

    def name(c):
        return "(" + ",".join(str(t) for t in c) + ")"

    seen = {w: 0}
    order = [w]
    trans = {}
    for c in order:
        for k, x in enumerate(digits):
            y = [sum(A[i][j] * x[j] for j in range(n)) + c[i] for i in range(n)]
            bits = tuple(t % 2 for t in y)
            carry = tuple(t // 2 for t in y)
            if carry not in seen:
                if len(order) >= max_states:
                    raise BudgetExceeded("affine machine did not close")
                seen[carry] = len(order)
                order.append(carry)
            trans[(name(c), k + 1)] = (name(carry), bits_to_letter(bits))
    zero = (0,) * n
    identity = None
    if zero in seen and all(trans[(name(zero), k + 1)] == (name(zero), k + 1) for k in range(p)):
        identity = name(zero)
    return MealyMachine(f"affine{n}", p, [name(c) for c in order], trans, identity=identity)


ZOO = {
    "grigorchuk": grigorchuk,
    "sushchanskyy": sushchanskyy,
    "bsv": bsv,
    "gupta_sidki": gupta_sidki,
    "trivial": trivial,
}

ALIASES = {"guptasidki": "gupta_sidki", "gupta-sidki": "gupta_sidki", "identity": "trivial"}


def get(key: str) -> MealyMachine:
    key = ALIASES.get(key, key)
    try:
        return ZOO[key]()
    except KeyError:
        raise AutomatonError(f"unknown zoo machine {key!r}; known: {', '.join(ZOO)}") from None
