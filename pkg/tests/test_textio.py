import json

import pytest

import intercalc as ic
from intercalc.core import Agent, Equation, congruent
from intercalc.textio import ParseError, print_system, to_json


def test_parse_system_and_named_config():
    src = ic.parse_system("""
        # a tiny system
        agents { s/1, z/0, add/2 }
        rule add[y, r] >< z[];
        config start = < r | add(r, z()) = z() >;
    """)
    assert src.system.signature == {"s": 1, "z": 0, "add": 2}
    assert src.system.rules[0].label() == "add[y, r] >< z[]"
    c = src.configs["start"]
    assert c.interface == ("r",)
    assert c.body == (Equation(Agent("add", ("r", Agent("z", ()))), Agent("z", ())),)


def test_parse_term():
    assert ic.parse_term("f(x, g())") == Agent("f", ("x", Agent("g", ())))


@pytest.mark.parametrize("text, where", [
    ("agents { a/ }", (1, 13)),
    ("rule a[x] b[x];", (1, 11)),
    ("agents { a/0, a/1 }", (1, 15)),
    ("agents { e/0 }\nrule e[] >< e[];\nconfig c = < e | >;", (3, 14)),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as err:
        ic.parse_system(text)
    assert (err.value.line, err.value.col) == where


def test_parse_config_rejects_trailing_input():
    with pytest.raises(ParseError):
        ic.parse_config("< x | x = y > extra")


def test_print_config_round_trips(systems):
    for s in systems.values():
        for seed in range(40):
            c = ic.random_config(s, 5, seed)
            text = ic.print_config(c)
            assert congruent(ic.parse_config(text, s), c)
            assert ic.print_config(ic.parse_config(text, s)) == text


def test_print_config_avoids_user_name_collisions():
    c = ic.parse_config("< x0 | x0 = f(y), y = g() >")
    text = ic.print_config(c)
    assert congruent(ic.parse_config(text), c)


def test_print_system_round_trips(systems):
    for name, s in systems.items():
        again = ic.parse_system(print_system(s)).system
        assert again.signature == s.signature
        assert again.rules == s.rules


def test_json_is_stable():
    data = {"b": [1, 2], "a": "γ"}
    assert json.loads(to_json(data)) == data
    assert to_json(data) == to_json(dict(data))
