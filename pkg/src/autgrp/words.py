"""Generator words and tree words.

A generator word is a small expression tree: generators, products, integer
powers, conjugation ``u^w = w^-1 u w`` and commutators ``[u,v] = u^-1 v^-1 u v``.
The textual grammar accepts ``*`` or juxtaposition for products::

    [a,b]^2     x2^(c*a)     (b*a)^4*c     t^-1 a     (ba)^4c

Tree words are plain tuples of 1-based letters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AutomatonError, ParseError

TreeWord = tuple  # tuple[int, ...], letters 1..p


class Word:
    """Base class of the generator-word expression tree."""

    def flatten(self) -> list[tuple[str, int]]:
        """Expand into a flat list of ``(generator, +1 | -1)`` factors."""
        raise NotImplementedError

    def inverse(self) -> "Word":
        return Power(self, -1)

    def has_inverse(self) -> bool:
        return any(e < 0 for _, e in self.flatten())

    def names(self) -> set[str]:
        return {name for name, _ in self.flatten()}

    def __len__(self) -> int:
        return len(self.flatten())

    def __mul__(self, other: "Word") -> "Word":
        return Product((self, other))

    def __pow__(self, k: int) -> "Word":
        return Power(self, k)


@dataclass(frozen=True)
class Gen(Word):
    name: str

    def flatten(self):
        return [(self.name, 1)]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Product(Word):
    factors: tuple

    def flatten(self):
        out = []
        for f in self.factors:
            out.extend(f.flatten())
        return out

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(_wrap(f) for f in self.factors)


@dataclass(frozen=True)
class Power(Word):
    base: Word
    exponent: int

    def flatten(self):
        flat = self.base.flatten()
        if self.exponent < 0:
            flat = [(name, -e) for name, e in reversed(flat)]
        return flat * abs(self.exponent)

    def __str__(self):
        return f"{_wrap(self.base)}^{self.exponent}"


@dataclass(frozen=True)
class Conj(Word):
    base: Word
    by: Word

    def flatten(self):
        by = self.by.flatten()
        inv = [(name, -e) for name, e in reversed(by)]
        return inv + self.base.flatten() + by

    def __str__(self):
        return f"{_wrap(self.base)}^({self.by})"


@dataclass(frozen=True)
class Comm(Word):
    left: Word
    right: Word

    def flatten(self):
        u, v = self.left.flatten(), self.right.flatten()
        return (
            [(n, -e) for n, e in reversed(u)]
            + [(n, -e) for n, e in reversed(v)]
            + u
            + v
        )

    def __str__(self):
        return f"[{self.left},{self.right}]"


GeneratorWord = Word
EMPTY = Product(())


def _wrap(w: Word) -> str:
    if isinstance(w, (Gen, Comm)):
        return str(w)
    if isinstance(w, Product) and not w.factors:
        return "1"
    return f"({w})"


def word_from_names(names: Iterable[str]) -> Word:
    """Product of generators given by name, e.g. ``["b", "a", "c"]``."""
    return Product(tuple(Gen(n) for n in names))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[][()*^,-]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: set[str] | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = names

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end'!r}", position=tok[2])
        self.i += 1
        return tok

    def word(self) -> Word:
        factors = []
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                if not factors:
                    raise ParseError("product with no left operand", position=self.peek()[2])
                self.take()
                continue
            if kind == "ident" or (kind == "op" and val in "([") or (kind == "int" and val == "1"):
                factors.extend(self.term())
                continue
            break
        if len(factors) == 1:
            return factors[0]
        return Product(tuple(factors))

    def term(self) -> list[Word]:
        atoms = self.atom()
        while self.peek()[1] == "^":
            self.take()
            base = atoms[-1]
            atoms[-1] = self.exponent(base)
        return atoms

    def atom(self) -> list[Word]:
        kind, val, pos = self.take()
        if kind == "ident":
            return [Gen(n) for n in self._split(val, pos)]
        if kind == "int" and val == "1":
            return [EMPTY]
        if val == "(":
            w = self.word()
            self.take(")")
            return [w]
        if val == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            return [Comm(u, v)]
        raise ParseError(f"unexpected {val or 'end'!r}", position=pos)

    def exponent(self, base: Word) -> Word:
        kind, val, pos = self.peek()
        if kind == "int" or val == "-":
            return Power(base, self.integer())
        if kind == "ident":
            self.take()
            return Conj(base, word_from_names(self._split(val, pos)))
        if val == "(":
            self.take()
            k2, v2, _ = self.peek()
            if k2 == "int" or v2 == "-":
                save = self.i
                try:
                    n = self.integer()
                    if self.peek()[1] == ")":
                        self.take()
                        return Power(base, n)
                except ParseError:
                    pass
                self.i = save
            w = self.word()
            self.take(")")
            return Conj(base, w)
        raise ParseError("bad exponent", position=pos)

    def integer(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError("expected integer exponent", position=pos)
        return sign * int(val)

    def _split(self, ident: str, pos: int) -> list[str]:
        # juxtaposed single-letter generators, e.g. "ba" for b*a
        if self.names is None or ident in self.names:
            return [ident]
        if all(ch in self.names for ch in ident):
            return list(ident)
        raise ParseError(f"unknown generator {ident!r}", position=pos)


def parse_word(text: str, names: Iterable[str] | None = None) -> Word:
    """Parse a generator word.

    With ``names`` given, unknown identifiers made only of known
    one-character names are split (``ba`` reads as ``b*a``) and anything
    else unknown is a :class:`ParseError`.
    """
    p = _Parser(text, set(names) if names is not None else None)
    w = p.word()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", position=pos)
    return w


def check_word(word: Word, invertible: set[str], known: Iterable[str] | None = None) -> None:
    """Reject unknown generators and inverses of non-invertible ones."""
    known = set(known) if known is not None else None
    for name, e in word.flatten():
        if known is not None and name not in known:
            raise AutomatonError(f"unknown generator {name!r}")
        if e < 0 and name not in invertible:
            raise AutomatonError(f"generator {name!r} is not invertible")


# ---------------------------------------------------------------------------
# tree words

def parse_tree_word(text: str, p: int) -> TreeWord:
    """Digit string when ``p <= 9`` (``"111112"``), comma-separated otherwise."""
    text = text.strip()
    if text in ("", "-", "ε"):
        return ()
    if "," in text or p > 9:
        letters = [int(t) for t in text.split(",") if t.strip()]
    else:
        letters = [int(ch) for ch in text]
    for x in letters:
        if not 1 <= x <= p:
            raise AutomatonError(f"letter {x} out of range 1..{p}")
    return tuple(letters)


def format_tree_word(v: Sequence[int], p: int) -> str:
    if not v:
        return "-"
    if p <= 9:
        return "".join(str(x) for x in v)
    return ",".join(str(x) for x in v)
