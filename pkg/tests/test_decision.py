import itertools
import random
from fractions import Fraction

import pytest

from autgrp import zoo
from autgrp.decision import (
    ball,
    bounded_report,
    complexity_size,
    contraction_estimate,
    is_bounded,
    nucleus,
    order,
    word_metric,
    word_problem_canonical,
    word_problem_contracting,
    word_problem_linear,
)
from autgrp.element import element_of, identity, power, state_at
from autgrp.errors import AutomatonError


# -- word problem -----------------------------------------------------------

@pytest.mark.parametrize("u, v, equal", [("a*a", "1", True), ("b*c", "d", True), ("a*b", "b*a", False)])
def test_linear_examples(grig, u, v, equal):
    assert word_problem_linear(grig, u, v) is equal


def test_linear_with_inverses(gs):
    assert word_problem_linear(gs, "a^-1", "A")
    assert word_problem_linear(gs, "[a,t]", "A*T*a*t")
    assert not word_problem_linear(gs, "[a,t]", "[t,a]")


def test_linear_semigroup(sush):
    assert not word_problem_linear(sush, "(r*s)^2", "(r*s)^3")
    assert word_problem_linear(sush, "s*s*r", "r")


def test_canonical_examples(grig, sush):
    a = element_of(grig, "a")
    assert word_problem_canonical(a * a, identity(2))
    assert word_problem_canonical(element_of(grig, "d"), element_of(grig, "d"))
    assert not word_problem_canonical(element_of(sush, "(r*s)^2"), element_of(sush, "(r*s)^3"))


def test_contracting_examples(grig):
    rep = nucleus(grig)
    assert word_problem_contracting("b*c", "d", rep)
    assert word_problem_contracting("1", "1", rep)
    want = element_of(grig, "(a*b)^8") == element_of(grig, "(b*a)^8")
    assert word_problem_contracting("(a*b)^8", "(b*a)^8", rep) is want


def test_contracting_rejects_inconclusive(sush):
    with pytest.raises(AutomatonError):
        word_problem_contracting("r", "s", nucleus(sush, depth_budget=4))


def test_three_algorithms_agree_on_random_long_words(grig, gs):
    rng = random.Random(3)
    for m, letters in ((grig, "abcd"), (gs, ["a", "A", "t", "T"])):
        rep = nucleus(m)
        for _ in range(150):
            u = "*".join(rng.choice(letters) for _ in range(rng.randint(1, 12)))
            # half the time compare with a rewritten form of the same element
            v = u if rng.random() < 0.5 else "*".join(rng.choice(letters) for _ in range(rng.randint(1, 12)))
            if m is grig and rng.random() < 0.5:
                v = u.replace("b*c", "d")
            lin = word_problem_linear(m, u, v)
            can = word_problem_canonical(element_of(m, u), element_of(m, v))
            con = word_problem_contracting(u, v, rep)
            assert lin == can == con


def test_sushchanskyy_small_words_agree(sush):
    ws = ["*".join(w) for n in range(1, 5) for w in itertools.product("rs", repeat=n)]
    for u, v in itertools.combinations(ws, 2):
        assert word_problem_linear(sush, u, v) == (element_of(sush, u) == element_of(sush, v))


# -- nucleus ----------------------------------------------------------------

def test_nucleus_grigorchuk(grig):
    rep = nucleus(grig)
    assert rep.verdict == "Nuclear"
    assert len(rep.nucleus) == 5
    assert rep.nucleus == {element_of(grig, q) for q in "abcde"}
    assert rep.check_closure()
    assert rep.depth == 1
    assert rep.witness_depths[("a", "b")] == 1 and rep.witness_depths[("b", "c")] == 0


def test_nucleus_sushchanskyy(sush):
    rep = nucleus(sush, depth_budget=12)
    assert rep.verdict == "Inconclusive"
    assert rep.frontier and all(k > 0 for k in rep.frontier.values())


def test_nucleus_trivial():
    rep = nucleus(zoo.trivial())
    assert rep.nuclear and rep.nucleus == {identity(2)}


def test_nucleus_closure_gupta_sidki(gs):
    rep = nucleus(gs)
    assert rep.nuclear and rep.check_closure()


# -- bounded ----------------------------------------------------------------

def test_bounded(grig, sush, gs, bsv):
    assert is_bounded(grig) and is_bounded(gs) and is_bounded(bsv)
    assert not is_bounded(sush)
    assert is_bounded(zoo.trivial())


def test_bounded_probe(grig, sush):
    g = bounded_report(grig)
    assert g.counts[1:] == (4,) * 8 and g.probe_agrees
    s = bounded_report(sush)
    assert s.probe_agrees and s.counts[-1] > s.counts[4]


def test_bounded_two_loops_joined():
    from autgrp.mealy import MealyMachine

    # x loops and also reaches y, which loops: unbounded
    m = MealyMachine("chain", 2, ["x", "y", "e"], {
        ("x", 1): ("y", 2), ("x", 2): ("x", 1),
        ("y", 1): ("e", 2), ("y", 2): ("y", 1),
        ("e", 1): ("e", 1), ("e", 2): ("e", 2),
    }, identity="e")
    r = bounded_report(m)
    assert not r.bounded and r.probe_agrees


# -- order ------------------------------------------------------------------

def test_orders(grig):
    for q in "abcd":
        assert order(element_of(grig, q)).order == 2
    assert order(element_of(grig, "a*b")).order == 16
    assert order(element_of(grig, "a*c")).order == 8
    assert order(element_of(grig, "a*d")).order == 4


def test_order_is_minimal(grig):
    for w in ["a*b*a*c", "b*a*d*a*c", "a*b*a*b*a*d"]:
        g = element_of(grig, w)
        k = order(g).order
        assert power(g, k).is_identity
        assert all(not power(g, j).is_identity for j in range(1, k))


def test_order_budget(bsv):
    assert order(element_of(bsv, "t"), 64).verdict == "BudgetExceeded"


def test_order_cycle_in_semigroup(sush):
    r = order(element_of(sush, "r"))
    assert r.verdict == "Cycle"
    g = element_of(sush, "r")
    assert power(g, r.m) == power(g, r.n)


# -- balls and metrics -------------------------------------------------------

def test_ball_small(grig):
    b = ball(grig, list("abcd"), 1)
    assert b.sizes == (1, 5)
    b2 = ball(grig, list("abcd"), 2)
    assert word_metric(element_of(grig, "d"), b2) == 1
    assert word_metric(element_of(grig, "b*c"), b2) == 1
    assert word_metric(element_of(grig, "a*b"), b2) == 2


def test_ball_empty_generators(grig):
    assert ball(grig, [], 4).sizes == (1,) * 5


def test_ball_monotone_submultiplicative(grig, gs):
    for m, gens in ((grig, list("abcd")), (gs, ["a", "A", "t", "T"])):
        v = ball(m, gens, 5).sizes
        assert all(x <= y for x, y in zip(v, v[1:]))
        for i in range(len(v)):
            for j in range(len(v) - i):
                assert v[i + j] <= v[i] * v[j]


def test_grigorchuk_ball_is_2_torsion(grig):
    for g in ball(grig, list("abcd"), 4).elements:
        k = order(g, 256).order
        assert k is not None and k & (k - 1) == 0


def test_metric_unknown_and_size(grig):
    b = ball(grig, list("abcd"), 1)
    assert word_metric(element_of(grig, "a*b*a*c"), b) is None
    assert complexity_size(identity(2)) == 1


def test_contraction_grigorchuk(grig):
    b = ball(grig, list("abcd"), 6)
    est = contraction_estimate(grig, b)
    assert est.eta <= Fraction(1, 2)
    assert est.radius_checked == 6
    for g in b.elements:
        for j in (1, 2):
            s = state_at(g, (j,))
            ns = b.lengths.get(s, b.radius + 1)
            assert est.holds(b.lengths[g], ns)


def test_contraction_gupta_sidki(gs):
    est = contraction_estimate(gs, ball(gs, ["a", "A", "t", "T"], 4))
    assert est.eta <= Fraction(1, 2)


def test_contraction_trivial():
    m = zoo.trivial()
    est = contraction_estimate(m, ball(m, ["e"], 3))
    assert est.eta == 0 and est.C == 0


def test_contraction_needs_radius_three(grig):
    with pytest.raises(AutomatonError):
        contraction_estimate(grig, ball(grig, list("abcd"), 2))
