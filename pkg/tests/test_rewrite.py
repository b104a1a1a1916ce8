import pytest

import intercalc as ic
from intercalc.core import Configuration, Equation, PreconditionError, congruent
from intercalc.rewrite import INDIRECTION, INTERACTION, active_pairs, indirection_sides, redex


def cfg(text, s=None):
    return ic.parse_config(text, s)


def test_linlam_interaction(linlam):
    c = cfg("< a, r | app(a, r) = lam(x, x) >", linlam)
    after = ic.interact(linlam, c, 0)
    assert congruent(after, cfg("< a, r | a = u, x = u, r = v, x = v >"))


def test_interaction_respects_orientation(linlam):
    c = cfg("< a, r | lam(x, x) = app(a, r) >", linlam)
    assert congruent(ic.interact(linlam, c, 0), cfg("< a, r | a = u, x = u, r = v, x = v >"))


def test_duplication_uses_fresh_wiring(systems):
    s = systems["rev-commutation"]
    c = cfg("< a, b, c, d | gamma(a, b) = delta(c, d) >", s)
    (pair,) = active_pairs(s, c)
    rule, _, _ = redex(s, c.body[pair])
    after = ic.interact(s, c, pair)
    assert rule.label().startswith("gamma[delta")
    assert len(after.body) == 4
    assert len(after.bound_names()) == 8


def test_interact_requires_a_rule(linlam):
    c = cfg("< a, b, c, d | app(a, b) = app(c, d) >", linlam)
    with pytest.raises(PreconditionError):
        ic.interact(linlam, c, 0)


def test_indirection_substitutes_other_occurrence():
    c = cfg("< f(x) | x = g(y), y = h() >")
    assert indirection_sides(c, 0) == [0]
    assert congruent(ic.indirect(None, c, 0), cfg("< f(g(y)) | y = h() >"))


def test_indirection_needs_an_outside_occurrence():
    c = cfg("< | x = f(x) >")
    assert indirection_sides(c, 0) == []
    with pytest.raises(PreconditionError):
        ic.indirect(None, c, 0)


def test_name_to_name_equation_has_two_sides():
    c = cfg("< x, y | x = y >")
    assert indirection_sides(c, 0) == [0, 1]
    assert ic.indirect(None, c, 0, 0) == Configuration(("y", "y"), ())


def test_indirect_keeps_name_counts_consistent(systems):
    from collections import Counter

    for s in systems.values():
        for seed in range(60):
            c = ic.random_config(s, 5, seed)
            for st in ic.steps(s, c):
                assert st.result.name_counts() == Counter(st.result.names())


def test_steps_lists_both_kinds(linlam):
    c = cfg("< r | app(a, r) = lam(x, x), a = lam(y, y) >", linlam)
    kinds = sorted(st.kind for st in ic.steps(linlam, c))
    assert kinds == [INDIRECTION, INTERACTION]


@pytest.mark.parametrize("strategy", ["interaction-first", "indirection-first", "leftmost"])
def test_normalize_identity_applied_to_identity(linlam, strategy):
    c = cfg("< r | app(a, r) = lam(x, x), a = lam(y, y) >", linlam)
    trace = ic.normalize(linlam, c, strategy)
    assert trace.status == "normal"
    assert congruent(trace.final, cfg("< lam(y, y) | >"))


def test_normalize_reports_stuck_pairs(linlam):
    trace = ic.normalize(linlam, cfg("< a, b, c, d | app(a, b) = app(c, d) >", linlam))
    assert trace.status == "stuck"


def test_normalize_fuel(systems):
    s = systems["rev-commutation"]
    # a duplication loop: each interaction recreates the pair
    c = cfg("< | gamma(x, y) = delta(x, y) >", s)
    trace = ic.normalize(s, c, fuel=3)
    assert trace.status == "fuel-exhausted"
    assert len(trace) == 3


def test_normalize_rejects_unknown_strategy(linlam):
    with pytest.raises(ValueError):
        ic.normalize(linlam, Configuration(), "sideways")


def test_eps_annihilation(systems):
    s = systems["trivial-eps"]
    trace = ic.normalize(s, cfg("< | eps() = eps(), eps() = eps() >", s))
    assert trace.final == Configuration((), ())
    assert [st.kind for st in trace.steps] == [INTERACTION, INTERACTION]
    assert all(isinstance(st.equation, Equation) for st in trace.steps)
