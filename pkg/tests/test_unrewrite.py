import random

import pytest

import intercalc as ic
from intercalc.core import canonical_key, congruent
from intercalc.lab import one_step_path
from intercalc.rewrite import INDIRECTION, INTERACTION, steps
from intercalc.unrewrite import contractum_matches, keyed_expansions, predecessor_keys


def cfg(text, s=None):
    return ic.parse_config(text, s)


def test_indirection_expansion_abstracts_a_subterm():
    c = cfg("< f(g()) | >")
    preds = ic.indirection_expansions(c)
    texts = {ic.print_config(e.config) for e in preds}
    assert texts == {"< x0 | x0 = f(g()) >", "< f(x0) | x0 = g() >"}
    assert all(e.kind == INDIRECTION for e in preds)


def test_name_occurrences_give_renaming_chains():
    # abstracting a name occurrence yields the x = y chain shape
    c = cfg("< y | y = h() >")
    assert any(congruent(e.config, cfg("< z | z = y, y = h() >")) for e in ic.indirection_expansions(c))


def test_interaction_expansion_of_linlam_contractum(linlam):
    c = cfg("< a, r | a = u, x = u, r = v, x = v >", linlam)
    preds = ic.interaction_expansions(linlam, c)
    assert any(congruent(e.config, cfg("< a, r | app(a, r) = lam(x, x) >")) for e in preds)
    for e in preds:
        assert congruent(e.replay(linlam), c)


def test_contractum_matches_respect_linearity(linlam):
    c = cfg("< a, b | a = u, u = b >", linlam)
    for m in contractum_matches(linlam.rules[0], c):
        pair = m.active_pair
        assert all(n in c.names() or n for n in pair.names())


def test_expansions_are_deduplicated(systems):
    for s in systems.values():
        for seed in range(30):
            c = ic.random_config(s, 4, seed)
            keys = [canonical_key(e.config) for e in ic.expansions(s, c)]
            assert len(keys) == len(set(keys))


def test_kind_filter(linlam):
    c = cfg("< a, r | a = u, x = u, r = v, x = v >", linlam)
    only = ic.expansions(linlam, c, INTERACTION)
    assert only and all(e.kind == INTERACTION for e in only)
    assert set(keyed_expansions(linlam, c)) == predecessor_keys(linlam, c)


@pytest.mark.parametrize("name", list(ic.BUILTINS))
def test_round_trips_independently_checked(systems, name):
    """Soundness via a fresh forward search, completeness via a random forward step."""
    s = systems[name]
    rng = random.Random(name)
    done = 0
    for seed in range(400):
        c = ic.random_config(s, 4, seed)
        forward = steps(s, c)
        if not forward:
            continue
        d = rng.choice(forward).result
        preds = ic.expansions(s, d)
        assert canonical_key(c) in {canonical_key(e.config) for e in preds}
        for e in preds:
            assert one_step_path(s, e.config, d) is not None
        done += 1
        if done == 100:
            break
    assert done == 100
