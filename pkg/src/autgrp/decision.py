"""Decision and semi-decision procedures for automaton (semi)groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian
from typing import Sequence

from .element import (
    Element,
    generator_elements,
    identity,
    inverse,
    multiply,
    evaluate,
)
from .errors import AutomatonError, BudgetExceeded, NotInvertibleError
from .graphs import strongly_connected_components
from .mealy import MealyMachine
from .words import Word, parse_word


def _as_word(machine: MealyMachine, w) -> Word:
    if isinstance(w, str):
        return parse_word(w, machine.states)
    if isinstance(w, Word):
        return w
    raise AutomatonError(f"expected a generator word, got {w!r}")


# ---------------------------------------------------------------------------
# linear-space word problem

class _LinearSolver:
    """Merge propagation over tuples of states of ``machine`` and its inverse.

    A vertex is a tuple of state indices read left to right. Vertices are
    created only when touched; identity components are dropped and the tuple
    re-padded, which names the same transformation.
    """

    def __init__(self, machine: MealyMachine):
        machine.require_complete()
        self.machine = machine
        p = self.p = machine.p
        nxt = [list(row) for row in machine.nxt]
        out = [list(row) for row in machine.out]
        self.index = {(q, 1): i for i, q in enumerate(machine.states)}
        k = len(nxt)
        inv_of = {}
        for i, q in enumerate(machine.states):
            if machine.is_invertible_state(q):
                inv_of[i] = k
                k += 1
        for i, j in inv_of.items():
            row_n, row_o = [0] * p, [0] * p
            for x in range(p):
                y = out[i][x]
                row_o[y] = x
                r = nxt[i][x]
                row_n[y] = inv_of.get(r)
            nxt.append(row_n)
            out.append(row_o)
        for i, j in inv_of.items():
            self.index[(machine.states[i], -1)] = j
        # the inverse of an invertible state only reaches invertible states
        self.e = len(nxt)
        nxt.append([self.e] * p)
        out.append(list(range(p)))
        self.nxt, self.out = nxt, out
        idrow = list(range(p))
        self.trivial = {
            i for i in range(len(nxt)) if out[i] == idrow and all(r == i for r in nxt[i])
        }
        if machine.identity is not None:
            self.trivial.add(machine.index(machine.identity))
        self._succ: dict = {}

    def encode(self, word: Word) -> tuple:
        res = []
        for name, e in word.flatten():
            key = (name, 1 if e > 0 else -1)
            if key not in self.index:
                if (name, 1) in self.index:
                    raise NotInvertibleError(f"state {name!r} is not invertible")
                raise AutomatonError(f"unknown state {name!r}")
            res.extend([self.index[key]] * abs(e))
        return tuple(res)

    def _norm(self, t, n):
        t = tuple(s for s in t if s not in self.trivial)
        return t + (self.e,) * (n - len(t))

    def successors(self, t: tuple):
        """``[(next vertex, output letter) for each input letter]`` (0-based)."""
        r = self._succ.get(t)
        if r is not None:
            return r
        n = len(t)
        res = []
        for x in range(self.p):
            y = x
            new = []
            for s in t:
                new.append(self.nxt[s][y])
                y = self.out[s][y]
            res.append((self._norm(new, n), y))
        self._succ[t] = res
        return res

    def equal(self, u: tuple, v: tuple) -> bool:
        n = max(len(u), len(v), 1)
        u, v = self._norm(u, n), self._norm(v, n)
        parent: dict = {}

        def find(a):
            root = a
            while root in parent:
                root = parent[root]
            while a != root:
                parent[a], a = root, parent[a]
            return root

        pending = [(u, v)]
        if u != v:
            parent[u] = v
        else:
            return True
        while pending:
            a, b = pending.pop()
            sa, sb = self.successors(a), self.successors(b)
            for (na, ya), (nb, yb) in zip(sa, sb):
                if ya != yb:
                    return False
            for (na, _), (nb, _) in zip(sa, sb):
                ra, rb = find(na), find(nb)
                if ra != rb:
                    parent[ra] = rb
                    pending.append((na, nb))
        return True


@lru_cache(maxsize=64)
def _linear_solver(machine: MealyMachine) -> _LinearSolver:
    return _LinearSolver(machine)


def word_problem_linear(machine: MealyMachine, u, v) -> bool:
    """Decide ``u = v`` in the (semi)group by identifying tuple vertices.

    Inverse letters are allowed for invertible states; they are run through
    the inverted transitions.
    """
    solver = _linear_solver(machine)
    return solver.equal(solver.encode(_as_word(machine, u)), solver.encode(_as_word(machine, v)))


def word_problem_canonical(g: Element, h: Element) -> bool:
    return g == h


# ---------------------------------------------------------------------------
# nucleus and the contracting word problem

@dataclass(frozen=True)
class NucleusReport:
    verdict: str  # "Nuclear" or "Inconclusive"
    machine: MealyMachine
    nucleus: frozenset
    witness_depths: dict  # (q1, q2) -> depth or None
    budget_used: dict
    frontier: dict = field(default_factory=dict)  # unresolved pair -> states outside Q-bar

    @property
    def nuclear(self) -> bool:
        return self.verdict == "Nuclear"

    @property
    def depth(self) -> int:
        """Smallest ``n`` such that every pair lands in Q-bar at depth ``n``."""
        return max(self.witness_depths.values(), default=0)

    def check_closure(self) -> bool:
        for g in self.nucleus:
            for s in g.states():
                if s not in self.nucleus:
                    return False
        return True


def nucleus(machine: MealyMachine, depth_budget: int = 12, size_budget: int = 10**4) -> NucleusReport:
    """Check that every state of every product of two states lands in Q-bar.

    For each pair ``(q1, q2)`` the states of ``q1 q2`` at depth 0, 1, 2, ...
    are compared with the generator classes. A pair resolves at depth ``d``
    when all states at level ``d`` lie in Q-bar; then every deeper state does
    too, since Q-bar is closed under taking states.
    """
    gens = generator_elements(machine)
    qbar = set(gens.values())
    depths: dict = {}
    frontier: dict = {}
    max_size = 0
    for q1 in machine.states:
        for q2 in machine.states:
            g = multiply(gens[q1], gens[q2])
            max_size = max(max_size, g.size)
            if g.size > size_budget:
                depths[(q1, q2)] = None
                frontier[(q1, q2)] = g.size
                continue
            member = [None] * g.size
            level = {0}
            found = None
            for d in range(depth_budget + 1):
                ok = True
                for i in level:
                    if member[i] is None:
                        member[i] = _state_element(g, i) in qbar
                    ok = ok and member[i]
                if ok:
                    found = d
                    break
                level = {r for i in level for r in g.nxt[i]}
            depths[(q1, q2)] = found
            if found is None:
                outside = {i for i in level if not member[i]}
                frontier[(q1, q2)] = len(outside)
    verdict = "Nuclear" if all(d is not None for d in depths.values()) else "Inconclusive"
    return NucleusReport(
        verdict=verdict,
        machine=machine,
        nucleus=frozenset(qbar) if verdict == "Nuclear" else frozenset(),
        witness_depths=depths,
        budget_used={"depth": max((d for d in depths.values() if d is not None), default=0),
                     "max_size": max_size},
        frontier=frontier,
    )


def _state_element(g: Element, i: int) -> Element:
    from .element import canonicalize

    return canonicalize(g.p, g.out, g.nxt, i)


class _ContractingSolver:
    def __init__(self, report: NucleusReport):
        if not report.nuclear:
            raise AutomatonError("contracting word problem needs a Nuclear report")
        machine = report.machine
        self.machine = machine
        self.p = machine.p
        self.n = report.depth
        gens = generator_elements(machine)
        self.names = list(machine.states)
        self.elem = [gens[q] for q in self.names]
        rep: dict = {}
        for i, g in enumerate(self.elem):
            rep.setdefault(g, i)
        self.rep = rep
        ident = identity(machine.p)
        self.id_index = rep.get(ident)
        self.inv_index = {}
        for i, g in enumerate(self.elem):
            if g.is_invertible:
                j = rep.get(inverse(g))
                if j is not None:
                    self.inv_index[i] = j
        self.leaves = list(_cartesian(range(self.p), repeat=self.n))
        self._pair: dict = {}
        self._single: dict = {}
        self._memo: dict = {}

    def encode(self, word: Word) -> tuple:
        res = []
        for name, e in word.flatten():
            try:
                i = self.names.index(name)
            except ValueError:
                raise AutomatonError(f"unknown state {name!r}") from None
            if e < 0:
                if i not in self.inv_index:
                    raise NotInvertibleError(f"no state of the machine represents {name}^-1")
                i = self.inv_index[i]
            res.extend([self.rep[self.elem[i]]] * abs(e))
        return self._strip(res)

    def _strip(self, t):
        if self.id_index is None:
            return tuple(t)
        return tuple(s for s in t if s != self.id_index)

    def _table(self, g: Element):
        # per leaf: (image leaf, index of the state in Q-bar)
        rows = []
        for v in self.leaves:
            q, img = 0, []
            for x in v:
                img.append(g.out[q][x])
                q = g.nxt[q][x]
            st = _state_element(g, q)
            rows.append((tuple(img), self.rep[st]))
        return rows

    def pair_table(self, i, j):
        key = (i, j)
        t = self._pair.get(key)
        if t is None:
            t = self._pair[key] = self._table(multiply(self.elem[i], self.elem[j]))
        return t

    def single_table(self, i):
        t = self._single.get(i)
        if t is None:
            t = self._single[i] = self._table(self.elem[i])
        return t

    def value(self, t: tuple) -> Element:
        if not t:
            return identity(self.p)
        return self.elem[t[0]]

    def sections(self, t: tuple):
        """Images and (halved) states of the word ``t`` at every leaf."""
        tables = []
        for k in range(0, len(t), 2):
            if k + 1 < len(t):
                tables.append(self.pair_table(t[k], t[k + 1]))
            else:
                tables.append(self.single_table(t[k]))
        index = {v: k for k, v in enumerate(self.leaves)}
        res = []
        for v in self.leaves:
            cur = v
            states = []
            for tab in tables:
                img, s = tab[index[cur]]
                cur = img
                states.append(s)
            res.append((cur, self._strip(states)))
        return res

    def equal(self, u: tuple, v: tuple) -> bool:
        if len(u) <= 1 and len(v) <= 1:
            return self.value(u) == self.value(v)
        key = (u, v) if u <= v else (v, u)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = True  # coinductive guard; cannot recur on itself
        su, sv = self.sections(u), self.sections(v)
        res = all(a[0] == b[0] for a, b in zip(su, sv)) and all(
            self.equal(a[1], b[1]) for a, b in zip(su, sv)
        )
        self._memo[key] = res
        return res


_contracting_cache: dict = {}


def word_problem_contracting(g, h, report: NucleusReport) -> bool:
    """Polynomial-time comparison by halving words through the pair tables.

    Each level rewrites consecutive pairs of letters into nucleus elements
    read at every vertex of level ``n = report.depth``.
    """
    key = id(report)
    solver = _contracting_cache.get(key)
    if solver is None or solver[0] is not report:
        solver = (report, _ContractingSolver(report))
        _contracting_cache.clear()
        _contracting_cache[key] = solver
    s = solver[1]
    machine = report.machine
    return s.equal(s.encode(_as_word(machine, g)), s.encode(_as_word(machine, h)))


# ---------------------------------------------------------------------------
# bounded automata

@dataclass(frozen=True)
class BoundedReport:
    bounded: bool
    counts: tuple  # counts[n] = |Phi(X^n x Q) minus identity images|, n = 0..max_depth
    reason: str

    @property
    def probe_agrees(self) -> bool:
        c = self.counts
        tail = c[len(c) // 2:]
        if self.bounded:
            return all(b <= a for a, b in zip(tail, tail[1:]))
        return all(b > a for a, b in zip(tail, tail[1:]))


def _trivial_states(machine: MealyMachine) -> set:
    gens = generator_elements(machine)
    return {i for i, q in enumerate(machine.states) if gens[q].is_identity}


def bounded_report(machine: MealyMachine, max_depth: int = 8) -> BoundedReport:
    machine.require_complete()
    trivial = _trivial_states(machine)
    live = [i for i in range(len(machine.states)) if i not in trivial]
    pos = {i: k for k, i in enumerate(live)}
    edges = [[pos[r] for r in machine.nxt[i] if r in pos] for i in live]
    comps = strongly_connected_components(len(live), lambda v: edges[v])
    comp_of = {}
    for c, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = c
    cyclic = []
    reason = "ok"
    for c, comp in enumerate(comps):
        inner = sum(1 for v in comp for w in edges[v] if comp_of[w] == c)
        if inner == 0:
            cyclic.append(False)
        elif inner == len(comp):
            cyclic.append(True)
        else:
            cyclic.append(True)
            reason = f"component {sorted(machine.states[live[v]] for v in comp)} is not a simple cycle"
    bounded = reason == "ok"
    if bounded:
        dag = [set() for _ in comps]
        for v in range(len(live)):
            for w in edges[v]:
                if comp_of[w] != comp_of[v]:
                    dag[comp_of[v]].add(comp_of[w])
        for c in range(len(comps)):
            if not cyclic[c]:
                continue
            stack, seen = list(dag[c]), set()
            while stack:
                d = stack.pop()
                if d in seen:
                    continue
                seen.add(d)
                if cyclic[d]:
                    bounded = False
                    reason = "a path joins two distinct cycles"
                    break
                stack.extend(dag[d])
            if not bounded:
                break
    return BoundedReport(bounded, _image_counts(machine, trivial, max_depth), reason)


def _image_counts(machine: MealyMachine, trivial: set, max_depth: int) -> tuple:
    # pairs (end state, output word) reachable from Q x X^n, ignoring trivial ends
    layer = {(i, ()) for i in range(len(machine.states))}
    counts = []
    for n in range(max_depth + 1):
        counts.append(sum(1 for s, _ in layer if s not in trivial))
        layer = {
            (machine.nxt[s][x], w + (machine.out[s][x],))
            for s, w in layer
            if s not in trivial
            for x in range(machine.p)
        }
    return tuple(counts)


def is_bounded(machine: MealyMachine) -> bool:
    return bounded_report(machine).bounded


# ---------------------------------------------------------------------------
# order

@dataclass(frozen=True)
class OrderResult:
    verdict: str  # "Order", "Cycle" or "BudgetExceeded"
    m: int | None = None
    n: int | None = None
    detail: str = ""

    @property
    def order(self) -> int | None:
        return self.n if self.verdict == "Order" else None


def order(g: Element, power_budget: int = 256, size_budget: int = 10**4) -> OrderResult:
    """First repetition ``g^m = g^n`` among successive powers."""
    seen = {identity(g.p): 0}
    cur = identity(g.p)
    for k in range(1, power_budget + 1):
        cur = multiply(cur, g)
        if cur.size > size_budget:
            return OrderResult("BudgetExceeded", detail=f"g^{k} has {cur.size} states")
        m = seen.get(cur)
        if m is not None:
            if m == 0 and g.is_invertible:
                return OrderResult("Order", 0, k)
            return OrderResult("Cycle", m, k)
        seen[cur] = k
    return OrderResult("BudgetExceeded", detail=f"no repetition up to g^{power_budget}")


# ---------------------------------------------------------------------------
# balls and metrics

@dataclass(frozen=True)
class BallData:
    radius: int
    sizes: tuple  # v(0..radius)
    elements: tuple  # in BFS order
    lengths: dict  # Element -> word length
    generators: tuple

    def within(self, r: int) -> list:
        return [g for g in self.elements if self.lengths[g] <= r]


def ball(machine: MealyMachine, generators: Sequence, radius: int, max_size: int = 10**6) -> BallData:
    """Elements that are products of at most ``radius`` generators.

    New elements are discovered by right multiplication, spheres in order,
    generators in the given order.
    """
    if radius < 0:
        raise AutomatonError("radius must be non-negative")
    gens_el = generator_elements(machine)
    words = [_as_word(machine, w) for w in generators]
    gens = []
    for w in words:
        g = evaluate(w, gens_el, machine.p)
        gens.append(g)
    one = identity(machine.p)
    lengths = {one: 0}
    elements = [one]
    sphere = [one]
    sizes = [1]
    for r in range(1, radius + 1):
        new = []
        for g in sphere:
            for s in gens:
                x = multiply(g, s)
                if x not in lengths:
                    if len(elements) >= max_size:
                        raise BudgetExceeded(f"ball exceeds {max_size} elements")
                    lengths[x] = r
                    elements.append(x)
                    new.append(x)
        sphere = new
        sizes.append(len(elements))
    return BallData(radius, tuple(sizes), tuple(elements), lengths, tuple(words))


def word_metric(g: Element, ball_data: BallData) -> int | None:
    """Word length of ``g``, or None (unknown) when ``g`` is outside the ball."""
    return ball_data.lengths.get(g)


def complexity_size(g: Element) -> int:
    return g.size


@dataclass(frozen=True)
class ContractionEstimate:
    eta: Fraction
    C: Fraction
    radius_checked: int
    metric: str = "word"

    def holds(self, norm_g, norm_state) -> bool:
        return norm_state <= self.eta * norm_g + self.C


DEFAULT_C_GRID = tuple(Fraction(k, 2) for k in range(3))


def contraction_estimate(
    machine: MealyMachine,
    ball_data: BallData,
    metric: str = "word",
    c_grid: Sequence = DEFAULT_C_GRID,
) -> ContractionEstimate:
    """Smallest ``eta`` over a grid of ``C`` with ``|g@j| <= eta |g| + C`` on the ball.

    Under the word metric a state outside the ball is charged ``radius + 1``,
    a lower bound for its true length. Ties in ``eta`` go to the smaller ``C``.
    """
    if ball_data.radius < 3:
        raise AutomatonError("ball too small: radius must be at least 3")
    if metric not in ("word", "size"):
        raise AutomatonError(f"unknown metric {metric!r}")

    def norm(x):
        if metric == "size":
            return x.size
        n = ball_data.lengths.get(x)
        return ball_data.radius + 1 if n is None else n

    samples = []
    for g in ball_data.elements:
        if g.is_identity:
            continue
        ng = norm(g)
        for j in range(1, machine.p + 1):
            samples.append((ng, norm(_state_element(g, g.nxt[0][j - 1]))))
    best = None
    for C in sorted(Fraction(c) for c in c_grid):
        eta = max((Fraction(ns - C, ng) for ng, ns in samples), default=Fraction(0))
        eta = max(eta, Fraction(0))
        if best is None or eta < best[0]:
            best = (eta, C)
    return ContractionEstimate(best[0], best[1], ball_data.radius, metric)
