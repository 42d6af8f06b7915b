"""(Semi)group elements as canonical initial transducers.

An :class:`Element` owns a private minimized machine whose state 0 is the
initial state and whose states are numbered in breadth-first order from it
(letters explored in increasing order). Two elements are equal as tree
transformations exactly when their canonical tables are identical, so
``==`` on elements decides the word problem.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .errors import AutomatonError, NotInvertibleError
from .mealy import MealyMachine
from .words import Comm, Conj, Gen, Power, Product, Word, parse_word


class Element:
    __slots__ = ("p", "out", "nxt", "_hash")

    def __init__(self, p: int, out: tuple, nxt: tuple):
        self.p = p
        self.out = out
        self.nxt = nxt
        self._hash = hash((p, out, nxt))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Element):
            return NotImplemented
        return self._hash == other._hash and self.out == other.out and self.nxt == other.nxt

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<Element p={self.p} size={self.size} root={self.root_permutation}>"

    @property
    def size(self) -> int:
        return len(self.out)

    @property
    def is_identity(self) -> bool:
        return len(self.out) == 1 and self.out[0] == tuple(range(self.p))

    @property
    def is_invertible(self) -> bool:
        perm = list(range(self.p))
        return all(sorted(row) == perm for row in self.out)

    @property
    def root_permutation(self) -> tuple:
        """``x -> out(initial, x)`` as a 1-based tuple."""
        return tuple(y + 1 for y in self.out[0])

    @property
    def fixes_root(self) -> bool:
        return self.out[0] == tuple(range(self.p))

    def act(self, v: Sequence[int]) -> tuple:
        q, res = 0, []
        for x in v:
            res.append(self.out[q][x - 1] + 1)
            q = self.nxt[q][x - 1]
        return tuple(res)

    def __call__(self, v):
        return self.act(v)

    def state_index(self, v: Sequence[int]) -> int:
        q = 0
        for x in v:
            q = self.nxt[q][x - 1]
        return q

    def states(self) -> list["Element"]:
        """Every state of the canonical machine as an element (index order)."""
        return [canonicalize(self.p, self.out, self.nxt, q) for q in range(self.size)]

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def to_machine(self, name: str = "element") -> MealyMachine:
        """Machine with states ``s0, s1, ...``; ``s0`` is the initial state."""
        names = [f"s{i}" for i in range(self.size)]
        ident = None
        idrow = tuple(range(self.p))
        for i in range(self.size):
            if self.out[i] == idrow and all(r == i for r in self.nxt[i]):
                ident = names[i]
                break
        trans = {
            (names[i], x + 1): (names[self.nxt[i][x]], self.out[i][x] + 1)
            for i in range(self.size)
            for x in range(self.p)
        }
        return MealyMachine(name, self.p, names, trans, identity=ident)


def canonicalize(p: int, out, nxt, initial: int = 0) -> Element:
    """Reachable part, Moore partition refinement, BFS relabeling.

    ``out``/``nxt`` are indexable tables of 0-based letters and state
    indices. Idempotent on canonical input.
    """
    seen = {initial: 0}
    order = [initial]
    for q in order:
        for r in nxt[q]:
            if r not in seen:
                seen[r] = len(order)
                order.append(r)
    n = len(order)
    o = [tuple(out[q]) for q in order]
    s = [tuple(seen[r] for r in nxt[q]) for q in order]

    ids: dict = {}
    cls = [ids.setdefault(row, len(ids)) for row in o]
    k = len(ids)
    while k < n:
        ids = {}
        if p == 2:
            new = [ids.setdefault((cls[i], cls[a], cls[b]), len(ids)) for i, (a, b) in enumerate(s)]
        else:
            new = [
                ids.setdefault((cls[i],) + tuple(cls[j] for j in s[i]), len(ids))
                for i in range(n)
            ]
        if len(ids) == k:
            break
        cls, k = new, len(ids)

    rep = {}
    for i in range(n - 1, -1, -1):
        rep[cls[i]] = i
    label = {cls[0]: 0}
    queue = [cls[0]]
    new_out, new_nxt = [], []
    for c in queue:
        i = rep[c]
        row = []
        for j in s[i]:
            cj = cls[j]
            if cj not in label:
                label[cj] = len(queue)
                queue.append(cj)
            row.append(label[cj])
        new_out.append(o[i])
        new_nxt.append(tuple(row))
    return Element(p, tuple(new_out), tuple(new_nxt))


@lru_cache(maxsize=None)
def identity(p: int) -> Element:
    return Element(p, (tuple(range(p)),), ((0,) * p,))


def machine_element(machine: MealyMachine, q: str) -> Element:
    """The element defined by state ``q`` of ``machine``."""
    machine.require_complete()
    return canonicalize(machine.p, machine.out, machine.nxt, machine.index(q))


def generator_elements(machine: MealyMachine) -> dict[str, Element]:
    machine.require_complete()
    return {q: machine_element(machine, q) for q in machine.states}


@lru_cache(maxsize=1 << 16)
def multiply(g: Element, h: Element) -> Element:
    """Product ``gh``: act by ``g`` first, then by ``h``."""
    if g.p != h.p:
        raise AutomatonError("alphabet mismatch")
    if g.is_identity:
        return h
    if h.is_identity:
        return g
    p = g.p
    nh = len(h.out)
    gout, gnxt, hout, hnxt = g.out, g.nxt, h.out, h.nxt
    index = {0: 0}
    codes = [0]
    out, nxt = [], []
    for code in codes:
        i, j = divmod(code, nh)
        go, gn, ho, hn = gout[i], gnxt[i], hout[j], hnxt[j]
        row_o, row_n = [], []
        for x in range(p):
            y = go[x]
            row_o.append(ho[y])
            c2 = gn[x] * nh + hn[y]
            k = index.get(c2)
            if k is None:
                k = index[c2] = len(codes)
                codes.append(c2)
            row_n.append(k)
        out.append(row_o)
        nxt.append(row_n)
    return canonicalize(p, out, nxt, 0)


@lru_cache(maxsize=1 << 16)
def inverse(g: Element) -> Element:
    if not g.is_invertible:
        raise NotInvertibleError("element is not invertible")
    if g.is_identity:
        return g
    out, nxt = [], []
    for row_o, row_n in zip(g.out, g.nxt):
        io, inx = [0] * g.p, [0] * g.p
        for x, y in enumerate(row_o):
            io[y] = x
            inx[y] = row_n[x]
        out.append(io)
        nxt.append(inx)
    return canonicalize(g.p, out, nxt, 0)


def product(elements, p: int | None = None) -> Element:
    result = None
    for e in elements:
        result = e if result is None else multiply(result, e)
    if result is None:
        if p is None:
            raise AutomatonError("empty product needs an alphabet size")
        return identity(p)
    return result


def power(g: Element, k: int) -> Element:
    if k < 0:
        g, k = inverse(g), -k
    result = identity(g.p)
    base = g
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def conjugate(g: Element, h: Element) -> Element:
    """``g^h = h^-1 g h``."""
    return multiply(multiply(inverse(h), g), h)


def commutator(g: Element, h: Element) -> Element:
    """``[g,h] = g^-1 h^-1 g h``."""
    return multiply(inverse(g), conjugate(g, h))


def state_at(g: Element, v: Sequence[int]) -> Element:
    """The state ``g@v``: ``(v w)^g = v^g w^(g@v)``."""
    if not v:
        return g
    for x in v:
        if not 1 <= x <= g.p:
            raise AutomatonError(f"letter {x} out of range 1..{g.p}")
    return canonicalize(g.p, g.out, g.nxt, g.state_index(v))


def wedge(v: Sequence[int], g: Element) -> Element:
    """``v*g``: acts as ``g`` below ``v`` and trivially elsewhere."""
    v = tuple(v)
    if not v:
        return g
    p, n = g.p, len(v)
    for x in v:
        if not 1 <= x <= p:
            raise AutomatonError(f"letter {x} out of range 1..{p}")
    ident = n
    off = n + 1
    idrow = tuple(range(p))
    out = [idrow] * (n + 1)
    nxt = []
    for k, x in enumerate(v):
        target = k + 1 if k + 1 < n else off
        nxt.append(tuple(target if y == x - 1 else ident for y in range(p)))
    nxt.append((ident,) * p)
    out.extend(g.out)
    nxt.extend(tuple(r + off for r in row) for row in g.nxt)
    return canonicalize(p, out, nxt, 0)


def is_identity(g: Element) -> bool:
    return g.is_identity


def root_action(g: Element) -> tuple:
    return g.root_permutation


def root_rotation(g: Element) -> int | None:
    """``k`` when ``g`` permutes the root letters as ``x -> x + k (mod p)``."""
    perm = g.out[0]
    k = perm[0]
    if all(perm[x] == (x + k) % g.p for x in range(g.p)):
        return k
    return None


# ---------------------------------------------------------------------------
# evaluation of generator words

def element_of(machine: MealyMachine, word, env: dict | None = None) -> Element:
    """Evaluate a generator word (or its text) to a canonical element.

    ``env`` optionally maps extra names to elements, words or word text,
    e.g. ``{"x2": "[a,b]^2"}``.
    """
    gens = generator_elements(machine)
    names = set(machine.states) | set(env or ())
    if isinstance(word, str):
        word = parse_word(word, names)
    return evaluate(word, gens, machine.p, env)


def evaluate(word: Word, gens: dict, p: int, env: dict | None = None) -> Element:
    env = env or {}
    memo: dict = {}

    def ev(w: Word) -> Element:
        if isinstance(w, Gen):
            if w.name in gens:
                return gens[w.name]
            if w.name in env:
                val = env[w.name]
                if isinstance(val, Element):
                    return val
                if w.name not in memo:
                    if isinstance(val, str):
                        val = parse_word(val, set(gens) | set(env))
                    memo[w.name] = ev(val)
                return memo[w.name]
            raise AutomatonError(f"unknown generator {w.name!r}")
        if isinstance(w, Product):
            return product([ev(f) for f in w.factors], p)
        if isinstance(w, Power):
            return power(ev(w.base), w.exponent)
        if isinstance(w, Conj):
            return conjugate(ev(w.base), ev(w.by))
        if isinstance(w, Comm):
            return commutator(ev(w.left), ev(w.right))
        raise AutomatonError(f"not a word: {w!r}")

    return ev(word)


def element_to_text(g: Element, name: str = "element") -> str:
    from .textio import serialize_machine

    return serialize_machine(g.to_machine(name), initial="s0")
