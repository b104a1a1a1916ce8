"""Static reversibility analysis of interaction systems.

Clash detection works symbolically.  Both contracta are written with
argument slots as term variables and wiring names as name variables; a
candidate clash pairs the equations of the two contracta, orients each pair
and unifies.  A solution must keep each rule's wiring names distinct and
must not let a rule's own wiring names leak into its own arguments (they are
fresh when the rule fires).  Arguments may mention the *other* rule's
wiring names unless ``strict`` is set, which forbids every wiring name in
every argument.  The most general solution is instantiated with distinct
names and kept only if the two resulting active pairs are not congruent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, NamedTuple, Optional

from .core import (
    Agent,
    Configuration,
    Equation,
    FreshNames,
    Rule,
    System,
    congruent,
)
from .rewrite import divide


class Var(NamedTuple):
    kind: str   # "slot" or "name"
    side: int   # which rule (1 or 2)
    key: object


def _lift(t, side: int):
    if isinstance(t, str):
        return Var("name", side, t)
    return Agent(t.symbol, tuple(_lift(a, side) for a in t.args))


def _contractum_vars(r: Rule, side: int) -> list:
    return [(Var("slot", side, i), _lift(p, side)) for i, p in enumerate(r.patterns)]


def _walk(t, subst: dict):
    while isinstance(t, Var) and t in subst:
        t = subst[t]
    return t


def _occurs(v: Var, t, subst: dict) -> bool:
    t = _walk(t, subst)
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a, subst) for a in t.args)


def _unify(a, b, subst: dict) -> bool:
    a = _walk(a, subst)
    b = _walk(b, subst)
    if a == b:
        return True
    if isinstance(a, Var) and a.kind == "slot":
        if _occurs(a, b, subst):
            return False
        subst[a] = b
        return True
    if isinstance(b, Var) and b.kind == "slot":
        return _unify(b, a, subst)
    if isinstance(a, Var) and isinstance(b, Var):
        subst[a] = b
        return True
    if isinstance(a, Var) or isinstance(b, Var):
        return False
    if a.symbol != b.symbol or len(a.args) != len(b.args):
        return False
    return all(_unify(x, y, subst) for x, y in zip(a.args, b.args))


def _resolve(t, subst: dict):
    t = _walk(t, subst)
    if isinstance(t, Var):
        return t
    return Agent(t.symbol, tuple(_resolve(a, subst) for a in t.args))


def _vars_in(t) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from _vars_in(a)


@dataclass(frozen=True)
class ClashWitness:
    """Two different active pairs with the same non-empty contractum."""

    rule1: Rule
    rule2: Rule
    pair1: Equation
    pair2: Equation
    contractum: tuple

    def verify(self) -> bool:
        """Recompute both contracta by firing the rules."""
        from .rewrite import redex

        out = []
        for rule, pair in ((self.rule1, self.pair1), (self.rule2, self.pair2)):
            found = redex(System({}, (rule,)), pair)
            if found is None:
                return False
            _, t, u = found
            fresh = FreshNames.above(pair, *self.contractum)
            out.append(Configuration((), tuple(divide(rule, t, u, fresh))))
        differ = not congruent(Configuration((), (self.pair1,)), Configuration((), (self.pair2,)))
        return bool(out[0].body) and congruent(out[0], out[1]) and differ

    def as_dict(self) -> dict:
        return {
            "rules": [self.rule1.label(), self.rule2.label()],
            "active_pairs": [repr(self.pair1), repr(self.pair2)],
            "contractum": [repr(e) for e in self.contractum],
        }


def _injective(subst: dict, names: list) -> bool:
    """Wiring names of the same rule must stay distinct."""
    seen = set()
    for v in names:
        key = (v.side, _walk(v, subst))
        if key in seen:
            return False
        seen.add(key)
    return True


def _solutions(r1: Rule, r2: Rule) -> Iterator[dict]:
    e1 = _contractum_vars(r1, 1)
    e2 = _contractum_vars(r2, 2)
    names = [Var("name", 1, n) for n in r1.bound_names()] + [Var("name", 2, n) for n in r2.bound_names()]
    n = len(e1)

    def go(i: int, used: frozenset, subst: dict):
        if i == n:
            yield subst
            return
        s2, p2 = e2[i]
        for j, (s1, p1) in enumerate(e1):
            if j in used:
                continue
            for aligned in (True, False):
                sub = dict(subst)
                if aligned:
                    ok = _unify(s1, s2, sub) and _unify(p1, p2, sub)
                else:
                    ok = _unify(s1, p2, sub) and _unify(p1, s2, sub)
                if ok and _injective(sub, names):
                    yield from go(i + 1, used | {j}, sub)

    yield from go(0, frozenset(), {})


def _fresh_ok(subst: dict, r1: Rule, r2: Rule, strict: bool) -> bool:
    """No argument mentions a forbidden wiring name."""
    wiring = {side: {_walk(Var("name", side, n), subst) for n in r.bound_names()} for side, r in ((1, r1), (2, r2))}
    for side, r in ((1, r1), (2, r2)):
        own = wiring[1] | wiring[2] if strict else wiring[side]
        for i in range(r.arity):
            t = _resolve(Var("slot", side, i), subst)
            if any(v in own for v in _vars_in(t) if v.kind == "name"):
                return False
    return True


def _instantiate(r1: Rule, r2: Rule, subst: dict) -> ClashWitness:
    slots1 = [_resolve(Var("slot", 1, i), subst) for i in range(r1.arity)]
    slots2 = [_resolve(Var("slot", 2, i), subst) for i in range(r2.arity)]
    pats1 = [_resolve(p, subst) for _, p in _contractum_vars(r1, 1)]
    names: dict = {}
    counters = {"slot": 0, "name": 0}

    def ground(t):
        if isinstance(t, Var):
            if t not in names:
                prefix = "a" if t.kind == "slot" else "x"
                names[t] = f"{prefix}{counters[t.kind]}"
                counters[t.kind] += 1
            return names[t]
        return Agent(t.symbol, tuple(ground(a) for a in t.args))

    g1 = [ground(t) for t in slots1]
    g2 = [ground(t) for t in slots2]
    m1, m2 = len(r1.left_patterns), len(r2.left_patterns)
    pair1 = Equation(Agent(r1.left, tuple(g1[:m1])), Agent(r1.right, tuple(g1[m1:])))
    pair2 = Equation(Agent(r2.left, tuple(g2[:m2])), Agent(r2.right, tuple(g2[m2:])))
    contractum = tuple(Equation(a, ground(p)) for a, p in zip(g1, pats1))
    return ClashWitness(r1, r2, pair1, pair2, contractum)


def clash_witnesses(r1: Rule, r2: Rule, strict: bool = False) -> Iterator[ClashWitness]:
    """Every clash found by the symbolic search (possibly with repeats)."""
    if r1.arity != r2.arity or r1.arity == 0:
        return
    for subst in _solutions(r1, r2):
        if not _fresh_ok(subst, r1, r2, strict):
            continue
        w = _instantiate(r1, r2, subst)
        if not congruent(Configuration((), (w.pair1,)), Configuration((), (w.pair2,))):
            yield w


def _preference(w: ClashWitness) -> tuple:
    """Fewest changed argument positions first, then the earliest ones."""
    a1 = w.pair1.left.args + w.pair1.right.args
    a2 = w.pair2.left.args + w.pair2.right.args
    diff = tuple(i for i, (x, y) in enumerate(zip(a1, a2)) if x != y)
    return len(diff), diff, repr(w.pair1), repr(w.pair2)


def clash_witness(r1: Rule, r2: Rule, strict: bool = False) -> Optional[ClashWitness]:
    """The preferred clash between an active pair of ``r1`` and one of ``r2``, or None."""
    return min(clash_witnesses(r1, r2, strict), key=_preference, default=None)


def divide_pattern(r: Rule) -> list:
    """The contractum over fresh argument names ``%x1..`` and ``%y1..``."""
    xs = tuple(f"%x{i + 1}" for i in range(len(r.left_patterns)))
    ys = tuple(f"%y{i + 1}" for i in range(len(r.right_patterns)))
    return [Equation(a, p) for a, p in zip(xs + ys, r.patterns)]


def components(eqs: list) -> list:
    """Group equations (by index) into classes linked by shared names."""
    parent = list(range(len(eqs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for i, e in enumerate(eqs):
        for n in e.names():
            if n in owner:
                parent[find(i)] = find(owner[n])
            else:
                owner[n] = i
    groups: dict = {}
    for i in range(len(eqs)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def is_connected(r: Rule) -> bool:
    return len(components(divide_pattern(r))) <= 1


def is_reversible_rule(r: Rule, strict: bool = False) -> bool:
    return is_connected(r) and clash_witness(r, r, strict) is None


@dataclass
class RuleReport:
    rule: Rule
    connected: bool
    self_clash: Optional[ClashWitness]

    @property
    def reversible(self) -> bool:
        return self.connected and self.self_clash is None


@dataclass
class ReversibilityReport:
    rules: list = field(default_factory=list)
    clashes: list = field(default_factory=list)   # (i, j, witness) for i < j
    arity_table: dict = field(default_factory=dict)

    @property
    def witnesses(self) -> list:
        out = [rr.self_clash for rr in self.rules if rr.self_clash is not None]
        return out + [w for _, _, w in self.clashes]

    @property
    def reversible(self) -> bool:
        return all(rr.connected for rr in self.rules) and not self.witnesses

    @property
    def verdict(self) -> str:
        return "reversible" if self.reversible else "irreversible"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "connectedness": [
                {"rule": rr.rule.label(), "arity": rr.rule.arity, "connected": rr.connected,
                 "self_clash": rr.self_clash is not None}
                for rr in self.rules
            ],
            "witnesses": [w.as_dict() for w in self.witnesses],
            "arity_table": self.arity_table,
        }

    def describe(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        for rr in self.rules:
            flags = ["connected" if rr.connected else "DISCONNECTED"]
            flags.append("self-clash" if rr.self_clash else "no self-clash")
            lines.append(f"  rule {rr.rule.label()}  (arity {rr.rule.arity}): {', '.join(flags)}")
        for w in self.witnesses:
            lines.append(f"  clash: {w.pair1!r}  vs  {w.pair2!r}")
            lines.append(f"         both give {{{', '.join(map(repr, w.contractum))}}}")
        table = ", ".join(f"{k}/{v}" for k, v in self.arity_table.items())
        lines.append(f"  arities: {table}")
        return "\n".join(lines)


def reversibility_report(s: System, strict: bool = False) -> ReversibilityReport:
    rep = ReversibilityReport(arity_table=dict(s.signature))
    for r in s.rules:
        rep.rules.append(RuleReport(r, is_connected(r), clash_witness(r, r, strict)))
    for (i, r1), (j, r2) in combinations(enumerate(s.rules), 2):
        w = clash_witness(r1, r2, strict)
        if w is not None:
            rep.clashes.append((i, j, w))
    return rep


def arity_characterization(s: System, strict: bool = False) -> bool:
    """All rules reversible and no two rules share a positive arity."""
    if not all(is_reversible_rule(r, strict) for r in s.rules):
        return False
    arities = [r.arity for r in s.rules if r.arity > 0]
    return len(arities) == len(set(arities))


@dataclass(frozen=True)
class Completeness:
    complete: bool
    trivial: bool
    distinct_arities: bool

    def as_dict(self) -> dict:
        return {"complete": self.complete, "trivial": self.trivial, "distinct_arities": self.distinct_arities}


def completeness_check(s: System) -> Completeness:
    syms = list(s.signature)
    have = {r.symbols for r in s.rules}
    pairs = {frozenset((a, b)) for a in syms for b in syms}
    arities = list(s.signature.values())
    return Completeness(
        complete=pairs <= have,
        trivial=all(a == 0 for a in arities),
        distinct_arities=len(arities) == len(set(arities)),
    )
