"""Forward reduction: interaction and indirection steps, normalization."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Agent,
    Configuration,
    Equation,
    FreshNames,
    PreconditionError,
    Rule,
    System,
    rename_term,
)

INTERACTION = "interaction"
INDIRECTION = "indirection"


@dataclass(frozen=True)
class Step:
    """One reduction step: ``kind`` plus the equation it consumed."""

    kind: str
    position: int
    equation: Equation
    result: Configuration
    rule: Optional[Rule] = None
    eliminated: Optional[str] = None


def divide(r: Rule, t: tuple, u: tuple, fresh: FreshNames) -> list:
    """``{t_i = v_i', u_j = w_j'}`` with the rule's wiring names renamed freshly."""
    if len(t) != len(r.left_patterns) or len(u) != len(r.right_patterns):
        raise PreconditionError(
            f"{r.label()}: expected {len(r.left_patterns)}+{len(r.right_patterns)} arguments, "
            f"got {len(t)}+{len(u)}"
        )
    ren = {n: fresh() for n in r.bound_names()}
    out = [Equation(a, rename_term(v, ren)) for a, v in zip(t, r.left_patterns)]
    out += [Equation(b, rename_term(w, ren)) for b, w in zip(u, r.right_patterns)]
    return out


def redex(s: System, e: Equation):
    """``(rule, t, u)`` if ``e`` is an active pair of ``s``, else None.

    For ``a >< a`` rules the written left side plays the rule's left agent.
    """
    l, r = e.left, e.right
    if isinstance(l, str) or isinstance(r, str):
        return None
    rule, swapped = s.rule_for(l.symbol, r.symbol)
    if rule is None:
        return None
    if swapped:
        l, r = r, l
    if len(l.args) != len(rule.left_patterns) or len(r.args) != len(rule.right_patterns):
        return None
    return rule, l.args, r.args


def active_pairs(s: System, c: Configuration) -> list:
    return [j for j, e in enumerate(c.body) if redex(s, e) is not None]


def stuck_pairs(s: System, c: Configuration) -> list:
    """Agent-agent equations with no rule."""
    return [
        j
        for j, e in enumerate(c.body)
        if isinstance(e.left, Agent) and isinstance(e.right, Agent) and redex(s, e) is None
    ]


def interact(s: System, c: Configuration, position: int, fresh: FreshNames | None = None) -> Configuration:
    e = c.body[position]
    found = redex(s, e)
    if found is None:
        raise PreconditionError(f"body[{position}] = {e!r} is not an active pair")
    if fresh is None:
        fresh = FreshNames.above(c)
    rule, t, u = found
    body = list(c.body)
    body[position:position + 1] = divide(rule, t, u, fresh)
    return Configuration(c.interface, tuple(body))


def indirection_sides(c: Configuration, position: int) -> list:
    """Sides of ``body[position]`` that name a variable whose other occurrence lies outside it."""
    e = c.body[position]
    counts = c.name_counts()
    sides = []
    for side in (0, 1):
        x = e[side]
        if not isinstance(x, str):
            continue
        inside = sum(1 for n in e.names() if n == x)
        if inside == 1 and counts[x] == 2:
            sides.append(side)
    return sides


def indirect(s: System | None, c: Configuration, position: int, side: int | None = None) -> Configuration:
    """Remove ``body[position]`` and substitute its other side for the eliminated name."""
    sides = indirection_sides(c, position)
    if not sides:
        raise PreconditionError(f"no indirection applies to body[{position}] = {c.body[position]!r}")
    if side is None:
        side = sides[0]
    elif side not in sides:
        raise PreconditionError(f"side {side} of body[{position}] cannot be eliminated")
    e = c.body[position]
    x, t = e[side], e[1 - side]
    hit = [False]

    def sub(u):
        if hit[0]:
            return u
        if isinstance(u, str):
            if u == x:
                hit[0] = True
                return t
            return u
        args = tuple(sub(a) for a in u.args)
        return u if args == u.args else Agent(u.symbol, args)

    iface = tuple(sub(u) for u in c.interface)
    body = tuple(Equation(sub(f.left), sub(f.right)) if not hit[0] else f
                 for k, f in enumerate(c.body) if k != position)
    out = Configuration(iface, body)
    counts = c.name_counts().copy()
    del counts[x]
    object.__setattr__(out, "_counts", counts)
    return out


def steps(s: System, c: Configuration, fresh: FreshNames | None = None) -> list:
    """Every one-step reduct of ``c`` (both sides of an indirection listed once each)."""
    if fresh is None:
        fresh = FreshNames.above(c)
    out = []
    for j, e in enumerate(c.body):
        found = redex(s, e)
        if found is not None:
            out.append(Step(INTERACTION, j, e, interact(s, c, j, fresh), rule=found[0]))
        for side in indirection_sides(c, j):
            out.append(Step(INDIRECTION, j, e, indirect(s, c, j, side), eliminated=e[side]))
    return out


def one_step_reducts(s: System, c: Configuration, kind: str | None = None) -> list:
    return [st.result for st in steps(s, c) if kind is None or st.kind == kind]


@dataclass
class Trace:
    initial: Configuration
    steps: list = field(default_factory=list)
    status: str = "normal"

    @property
    def final(self) -> Configuration:
        return self.steps[-1].result if self.steps else self.initial

    def __len__(self) -> int:
        return len(self.steps)


STRATEGIES = ("interaction-first", "indirection-first", "leftmost")


def _choose(s: System, c: Configuration, strategy: str):
    inter = None
    indir = None
    for j, e in enumerate(c.body):
        if inter is None and redex(s, e) is not None:
            inter = (INTERACTION, j, None)
        if indir is None:
            sides = indirection_sides(c, j)
            if sides:
                indir = (INDIRECTION, j, sides[0])
        if strategy == "leftmost" and (inter or indir):
            return inter or indir
    if strategy == "indirection-first":
        return indir or inter
    return inter or indir


def normalize(
    s: System,
    c: Configuration,
    strategy: str = "interaction-first",
    fuel: int = 10_000,
    fresh: FreshNames | None = None,
) -> Trace:
    """Reduce until no step applies or ``fuel`` steps have been taken.

    The trace status is ``normal`` (no active pair left), ``stuck`` (agent
    pairs without a rule remain) or ``fuel-exhausted``.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    if fresh is None:
        fresh = FreshNames.above(c)
    trace = Trace(c)
    cur = c
    while True:
        choice = _choose(s, cur, strategy)
        if choice is None:
            trace.status = "stuck" if stuck_pairs(s, cur) else "normal"
            return trace
        if len(trace.steps) >= fuel:
            trace.status = "fuel-exhausted"
            return trace
        kind, j, side = choice
        e = cur.body[j]
        if kind == INTERACTION:
            nxt = interact(s, cur, j, fresh)
            trace.steps.append(Step(kind, j, e, nxt, rule=redex(s, e)[0]))
        else:
            nxt = indirect(s, cur, j, side)
            trace.steps.append(Step(kind, j, e, nxt, eliminated=e[side]))
        cur = nxt
