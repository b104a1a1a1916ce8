"""Executable experiments: common predecessors, failure witnesses, diamond checks, joins."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import chain, combinations, permutations, product
from typing import Optional

from .analysis import clash_witness, components, divide_pattern
from .core import (
    Agent,
    Configuration,
    Equation,
    FreshNames,
    Position,
    PreconditionError,
    Rule,
    System,
    canonical_key,
    congruent,
    from_key,
    rename_term,
    replace_at,
    subterm_at,
)
from .rewrite import (
    INDIRECTION,
    INTERACTION,
    Step,
    active_pairs,
    indirect,
    indirection_sides,
    interact,
    redex,
    steps,
)
from .textio import SourceFile, format_config, parse_system, print_config
from .unrewrite import (
    Expansion,
    expansions,
    indirection_expansions,
    interaction_expansions,
    keyed_expansions,
    predecessor_keys,
)

# -- builtin systems -----------------------------------------------------------

BUILTINS = {
    "combinators": """\
agents { gamma/2, delta/2, eps/0 }
rule gamma[x, y] >< gamma[y, x];
rule delta[x, y] >< delta[x, y];
rule gamma[delta(x1, x2), delta(y1, y2)] >< delta[gamma(x1, y1), gamma(x2, y2)];
rule gamma[eps(), eps()] >< eps[];
rule delta[eps(), eps()] >< eps[];
rule eps[] >< eps[];
""",
    "linlam": """\
agents { app/2, lam/2 }
rule app[x, y] >< lam[x, y];
""",
    "trivial-eps": """\
agents { eps/0 }
rule eps[] >< eps[];
""",
    "rev-demo": """\
agents { alpha/2, beta/1, gamma/2 }
rule alpha[x, y] >< beta[gamma(x, y)];
""",
    "rev-commutation": """\
agents { gamma/2, delta/2 }
rule gamma[delta(x1, x2), delta(y1, y2)] >< delta[gamma(x1, y1), gamma(x2, y2)];
""",
}


def builtin(name: str) -> SourceFile:
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin system {name!r}; choose from {', '.join(BUILTINS)}")
    return parse_system(BUILTINS[name])


# -- verified traces -----------------------------------------------------------

def _name_count(c: Configuration) -> int:
    return len(set(c.names()))


def _erase(t):
    return None if isinstance(t, str) else (t.symbol, tuple(_erase(a) for a in t.args))


def _shape(c: Configuration):
    """A renaming-invariant summary: configurations with different shapes are not congruent."""
    body = sorted(sorted((repr(_erase(e.left)), repr(_erase(e.right)))) for e in c.body)
    return tuple(repr(_erase(t)) for t in c.interface), tuple(map(tuple, body))


def one_step_path(s: System, src: Configuration, dst: Configuration) -> Optional[list]:
    """``[step]`` taking ``src`` to a configuration congruent to ``dst``, or None."""
    target = None
    shape = _shape(dst)
    for st in steps(s, src):
        if _shape(st.result) != shape:
            continue
        if target is None:
            target = canonical_key(dst)
        if canonical_key(st.result) == target:
            return [st]
    return None


def plus_path(
    s: System, src: Configuration, dst: Configuration, exhaustive: bool = True, fire: Optional[int] = None
) -> Optional[list]:
    """One interaction then indirections from ``src`` to ``dst``, or None.

    Each indirection removes exactly one name, so the tail length is fixed by
    the name counts.  The tail first tries eliminating exactly the names
    missing from ``dst``; indirections commute, so this settles the question
    whenever ``dst`` shares names with ``src``.  Otherwise (``exhaustive``)
    every tail is searched.  ``fire`` restricts the interaction to one body index.
    """
    target = None
    shape = _shape(dst)
    want = _name_count(dst)

    def hits(c):
        nonlocal target
        if _shape(c) != shape:
            return False
        if target is None:
            target = canonical_key(dst)
        return canonical_key(c) == target

    keep = set(dst.names())
    for j in active_pairs(s, src) if fire is None else [fire]:
        e = src.body[j]
        first = Step(INTERACTION, j, e, interact(s, src, j), rule=redex(s, e)[0])
        tail = _name_count(first.result) - want
        if tail < 0:
            continue
        quick = _eliminate_except(first, keep)
        if hits(quick[-1].result):
            return quick
        if not exhaustive:
            continue
        # indirections commute, so a state is fixed by the names eliminated so far
        layer = {frozenset(): [first]}
        for _ in range(tail):
            nxt = {}
            for gone, path in layer.items():
                cur = path[-1].result
                for j, e in enumerate(cur.body):
                    for side in indirection_sides(cur, j):
                        k = gone | {e[side]}
                        if k not in nxt:
                            st = Step(INDIRECTION, j, e, indirect(None, cur, j, side), eliminated=e[side])
                            nxt[k] = path + [st]
            layer = nxt
        for path in layer.values():
            if hits(path[-1].result):
                return path
    return None


def _eliminate_except(first, keep: set) -> list:
    """Follow ``first`` with indirections removing every name outside ``keep``."""
    path = [first]
    while True:
        cur = path[-1].result
        nxt = None
        for j, e in enumerate(cur.body):
            for side in indirection_sides(cur, j):
                if e[side] not in keep:
                    nxt = (j, side)
                    break
            if nxt:
                break
        if nxt is None:
            return path
        j, side = nxt
        e = cur.body[j]
        path.append(Step(INDIRECTION, j, e, indirect(None, cur, j, side), eliminated=e[side]))


def replay_trace(s: System, start: Configuration, trace: list) -> Configuration:
    """Run the recorded steps again from ``start``; each must consume the recorded equation."""
    cur = start
    for st in trace:
        if st.position >= len(cur.body) or cur.body[st.position] != st.equation:
            raise PreconditionError(f"step {st.kind} does not apply at body[{st.position}]")
        if st.kind == INTERACTION:
            cur = interact(s, cur, st.position)
        else:
            cur = indirect(s, cur, st.position, 0 if st.equation.left == st.eliminated else 1)
    return cur


@dataclass
class JoinResult:
    """A common predecessor with verified traces, or the bound that was exhausted."""

    success: bool
    config: Optional[Configuration] = None
    trace1: list = field(default_factory=list)
    trace2: list = field(default_factory=list)
    method: str = ""
    bound: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"success": self.success, "method": self.method}
        if self.success:
            out["config"] = print_config(self.config)
            out["trace1"] = [st.kind for st in self.trace1]
            out["trace2"] = [st.kind for st in self.trace2]
        else:
            out["bound"] = self.bound
        return out

    def verify(self, s: System, c1: Configuration, c2: Configuration) -> bool:
        """Replay both traces from ``config`` and compare the ends with ``c1`` and ``c2``."""
        if not self.success:
            return False
        try:
            ends = replay_trace(s, self.config, self.trace1), replay_trace(s, self.config, self.trace2)
        except PreconditionError:
            return False
        return congruent(ends[0], c1) and congruent(ends[1], c2)

    def describe(self) -> str:
        if not self.success:
            return f"no join found (bound {self.bound})"
        return (
            f"join via {self.method}: {print_config(self.config)}\n"
            f"  -> c1 by {', '.join(st.kind for st in self.trace1)}\n"
            f"  -> c2 by {', '.join(st.kind for st in self.trace2)}"
        )


def _locate(s: System, ci: Configuration, c: Configuration) -> Expansion:
    """The expansion of ``c`` congruent to ``ci``; fails unless ``ci`` steps to ``c``."""
    k = canonical_key(ci)
    for kind in (INTERACTION, INDIRECTION):
        if kind == INDIRECTION and _name_count(ci) != _name_count(c) + 1:
            continue    # an indirection removes exactly one name
        found = keyed_expansions(s, c, kind).get(k)
        if found is not None:
            return found
    raise PreconditionError(f"{format_config(ci)} does not reduce to {format_config(c)} in one step")


def _abstract(c: Configuration, pos: Position, x: str) -> Configuration:
    sub = subterm_at(c.interface[pos.index] if pos.where == "i" else c.body[pos.index][pos.side], pos.path)
    out = replace_at(c, pos, x)
    return Configuration(out.interface, out.body + (Equation(x, sub),))


def _inside(p: Position, q: Position) -> bool:
    """Whether ``p`` lies within the subterm at ``q``."""
    return (p.where, p.index, p.side) == (q.where, q.index, q.side) and p.path[: len(q.path)] == q.path


def _both_indirections(c1: Configuration, e1: Expansion, e2: Expansion) -> Configuration:
    p1, p2 = e1.source, e2.source
    fresh = FreshNames.above(c1, e2.config)
    if _inside(p2, p1):
        p2 = Position("b", len(c1.body) - 1, 1, p2.path[len(p1.path):])
    return _abstract(c1, p2, fresh())


def _equal_indirection(c1: Configuration, e1: Expansion) -> Configuration:
    """``x = t`` becomes ``x = y, y = t`` with ``y`` fresh."""
    e = c1.body[e1.position]
    x, t = e1.eliminated, e[1] if e[0] == e1.eliminated else e[0]
    y = FreshNames.above(c1)()
    body = list(c1.body)
    body[e1.position:e1.position + 1] = [Equation(x, y), Equation(y, t)]
    return Configuration(c1.interface, tuple(body))


def _disjoint_interactions(c: Configuration, e1: Expansion, e2: Expansion) -> Optional[Configuration]:
    s1, s2 = set(e1.match.selection), set(e2.match.selection)
    if s1 & s2:
        return None
    keep = tuple(e for j, e in enumerate(c.body) if j not in s1 | s2)
    return Configuration(c.interface, keep + (e1.match.active_pair, e2.match.active_pair))


def _transport(c: Configuration, e1: Expansion, p: Position) -> Optional[Position]:
    """Where position ``p`` of ``c`` sits in the interaction predecessor ``e1``."""
    if p.where == "i":
        return p
    m = e1.match
    if p.index not in m.selection:
        rank = sum(1 for j in range(p.index) if j not in m.selection)
        return Position("b", rank, p.side, p.path)
    k = m.selection.index(p.index)
    args = m.left_args + m.right_args
    if c.body[p.index][p.side] != args[k]:
        return None     # inside the contractum pattern itself
    nl = len(m.left_args)
    last = len(e1.config.body) - 1
    return Position("b", last, 0, (k,) + p.path) if k < nl else Position("b", last, 1, (k - nl,) + p.path)


def _mixed(c: Configuration, inter: Expansion, indir: Expansion) -> Optional[Configuration]:
    p = _transport(c, inter, indir.source)
    if p is None:
        return None
    return _abstract(inter.config, p, FreshNames.above(inter.config, indir.config)())


def _intersect(s: System, c1: Configuration, c2: Configuration) -> Optional[Configuration]:
    first = keyed_expansions(s, c1)
    common = sorted(predecessor_keys(s, c2) & set(first))
    return first[common[0]].config if common else None


def common_predecessor(s: System, c1: Configuration, c2: Configuration, c: Configuration) -> JoinResult:
    """A ``c'`` with one step to each of ``c1`` and ``c2``, given both step to ``c``."""
    e1, e2 = _locate(s, c1, c), _locate(s, c2, c)
    # work with the located predecessors so positions line up with c
    d1, d2 = e1.config, e2.config
    candidates = []
    if canonical_key(d1) == canonical_key(d2):
        if e1.kind == INDIRECTION:
            candidates.append(("indirection-equal", _equal_indirection(d1, e1)))
        else:
            candidates += [("indirection-equal", x.config) for x in indirection_expansions(d1)[:1]]
    elif e1.kind == e2.kind == INDIRECTION:
        candidates.append(("indirection-pair", _both_indirections(d1, e1, e2)))
    elif e1.kind == e2.kind == INTERACTION:
        candidates.append(("disjoint-interactions", _disjoint_interactions(c, e1, e2)))
    elif e1.kind == INTERACTION:
        candidates.append(("commuting-square", _mixed(c, e1, e2)))
    else:
        candidates.append(("commuting-square", _mixed(c, e2, e1)))
    for method, cand in candidates:
        if cand is None:
            continue
        t1, t2 = one_step_path(s, cand, c1), one_step_path(s, cand, c2)
        if t1 and t2:
            return JoinResult(True, cand, t1, t2, method)
    cand = _intersect(s, c1, c2)
    if cand is None:
        return JoinResult(False, method="intersection", bound=1)
    return JoinResult(True, cand, one_step_path(s, cand, c1), one_step_path(s, cand, c2), "intersection")


# -- joins for wire rules (linear lambda) ----------------------------------------

def _is_wire_rule(r: Rule) -> bool:
    return all(isinstance(p, str) for p in r.patterns)


def _link_ends(m, c: Configuration) -> dict:
    """For each linked name: the body indices of its two equations."""
    ends: dict = {}
    for _, cname in m.mapping:
        ends[cname] = tuple(j for j in m.selection if cname in set(c.body[j].names()))
    return ends


def _overlap_templates(c: Configuration, m1, m2):
    """Candidate joins for overlapping contracta: shared links become fresh cross wires."""
    shared = sorted(set(_link_ends(m1, c)) & set(_link_ends(m2, c)))
    ends = _link_ends(m1, c)
    # first choice: the first pair's wire sits on its right-hand agent
    nleft = len(m1.left_args)
    ends = {n: tuple(sorted(js, key=lambda j: m1.selection.index(j) < nleft)) for n, js in ends.items()}
    used = set(m1.selection) | set(m2.selection)
    keep = tuple(e for j, e in enumerate(c.body) if j not in used)
    fresh = FreshNames.above(c)
    wires = [fresh() for _ in shared]
    shape = "chain" if len(shared) < len(m1.mapping) else "full-overlap"
    for choice in product((0, 1), repeat=len(shared)):
        args1 = list(m1.left_args + m1.right_args)
        args2 = list(m2.left_args + m2.right_args)
        for n, pick, x in zip(shared, choice, wires):
            a, b = ends[n][pick], ends[n][1 - pick]
            args1[m1.selection.index(a)] = x
            args2[m2.selection.index(b)] = x
        yield shape, Configuration(c.interface, keep + (_pair_from(m1, args1), _pair_from(m2, args2)))


def _wired_templates(c: Configuration, m1, m2):
    """Both active pairs, with fresh wires joining chosen argument positions across them."""
    used = set(m1.selection) | set(m2.selection)
    keep = tuple(e for j, e in enumerate(c.body) if j not in used)
    args1 = list(m1.left_args + m1.right_args)
    args2 = list(m2.left_args + m2.right_args)
    fresh = FreshNames.above(c)
    wires = [fresh() for _ in range(min(len(args1), len(args2)))]
    for k in range(len(wires) + 1):
        for src in combinations(range(len(args1)), k):
            for dst in permutations(range(len(args2)), k):
                b1, b2 = args1[:], args2[:]
                for i, j, w in zip(src, dst, wires):
                    b1[i] = b2[j] = w
                cand = Configuration(c.interface, keep + (_pair_from(m1, b1), _pair_from(m2, b2)))
                if max(cand.name_counts().values(), default=0) <= 2:
                    yield "wired", cand


def _pair_from(m, args: list) -> Equation:
    nl = len(m.left_args)
    r = m.rule
    return Equation(Agent(r.left, tuple(args[:nl])), Agent(r.right, tuple(args[nl:])))


def linlam_join(s: System, c1: Configuration, c2: Configuration, c: Configuration) -> JoinResult:
    """Template join for two overlapping interaction predecessors of ``c``.

    Works for rules whose patterns are bare names (the linear lambda rule is
    one).  The chain and full-overlap templates are tried first; overlaps
    through name-to-name equations fall through to wiring argument positions
    of the two active pairs together.  Every emitted ``c'`` is re-verified
    with ``plus_path`` on both sides.
    """
    return _template_join(s, _locate(s, c1, c), _locate(s, c2, c), c)


def _template_join(s: System, e1: Expansion, e2: Expansion, c: Configuration) -> JoinResult:
    if e1.kind != INTERACTION or e2.kind != INTERACTION:
        raise PreconditionError("both predecessors must be interaction steps")
    if canonical_key(e1.config) == canonical_key(e2.config):
        raise PreconditionError("the two predecessors are congruent")
    m1, m2 = e1.match, e2.match
    if not (_is_wire_rule(m1.rule) and _is_wire_rule(m2.rule)):
        raise PreconditionError("templates need rules whose patterns are bare names")
    if not set(m1.selection) & set(m2.selection):
        raise PreconditionError("contracta are disjoint; use the generic join search")
    # cheap tails first; the full tail search only if none of them works
    tried = {}
    for shape, cand in chain(_overlap_templates(c, m1, m2), _wired_templates(c, m1, m2)):
        k = canonical_key(cand)
        if k in tried:
            continue
        tried[k] = (shape, cand)
        last = len(cand.body) - 1     # the second pair fires towards c1, the first towards c2
        t1 = plus_path(s, cand, e1.config, exhaustive=False, fire=last)
        t2 = t1 and plus_path(s, cand, e2.config, exhaustive=False, fire=last - 1)
        if t1 and t2:
            return JoinResult(True, cand, t1, t2, f"template-{shape}")
    for shape, cand in tried.values():
        t1 = plus_path(s, cand, e1.config)
        t2 = t1 and plus_path(s, cand, e2.config)
        if t1 and t2:
            return JoinResult(True, cand, t1, t2, f"template-{shape}")
    return JoinResult(False, method="template", bound=0)


# -- diamond checks ----------------------------------------------------------------

MODES = ("one", "plus")


def _back_one(s: System, d: Configuration) -> set:
    return predecessor_keys(s, d)


def _back_plus(s: System, d: Configuration, depth: int) -> set:
    """Keys of every ``c'`` with ``c' ->+ d`` using at most ``depth`` indirections."""
    layer = {canonical_key(d): d}
    seen = dict(layer)
    for _ in range(depth):
        nxt = {}
        for cur in layer.values():
            for e in indirection_expansions(cur):
                k = canonical_key(e.config)
                if k not in seen:
                    seen[k] = nxt[k] = e.config
        layer = nxt
    return {canonical_key(e.config) for cur in seen.values() for e in interaction_expansions(s, cur)}


@dataclass
class DiamondReport:
    config: Configuration
    mode: str
    depth: int
    pairs: int = 0
    failures: list = field(default_factory=list)       # (c1, c2) without any join
    inconclusive: list = field(default_factory=list)   # (c1, c2) unjoined within the bound

    @property
    def status(self) -> str:
        if self.failures:
            return "failure"
        return "inconclusive" if self.inconclusive else "joinable"

    def as_dict(self) -> dict:
        return {
            "config": print_config(self.config),
            "mode": self.mode,
            "depth": self.depth,
            "status": self.status,
            "pairs": self.pairs,
            "failures": [[print_config(a), print_config(b)] for a, b in self.failures],
            "inconclusive": [[print_config(a), print_config(b)] for a, b in self.inconclusive],
        }

    def describe(self) -> str:
        lines = [f"{self.status}: {self.pairs} predecessor pairs of {print_config(self.config)} ({self.mode}-step)"]
        for tag, items in (("no join", self.failures), (f"not joined within depth {self.depth}", self.inconclusive)):
            for a, b in items:
                lines.append(f"  {tag}: {print_config(a)}  /  {print_config(b)}")
        return "\n".join(lines)


def plus_join(s: System, c1: Configuration, c2: Configuration, c: Configuration, depth: int = 2) -> JoinResult:
    """A ``c'`` with ``c' ->+ c1`` and ``c' ->+ c2`` for an interaction peak over ``c``."""
    e1, e2 = _locate(s, c1, c), _locate(s, c2, c)
    d1, d2 = e1.config, e2.config
    disjoint = _disjoint_interactions(c, e1, e2)
    if disjoint is not None:
        t1, t2 = plus_path(s, disjoint, c1), plus_path(s, disjoint, c2)
        if t1 and t2:
            return JoinResult(True, disjoint, t1, t2, "disjoint-interactions")
    if disjoint is None and _is_wire_rule(e1.match.rule) and _is_wire_rule(e2.match.rule):
        res = _template_join(s, e1, e2, c)
        if res.success:
            return res
    for k in range(depth + 1):
        common = sorted(_back_plus(s, d1, k) & _back_plus(s, d2, k))
        if common:
            cand = from_key(common[0])
            t1, t2 = plus_path(s, cand, c1), plus_path(s, cand, c2)
            if t1 and t2:
                return JoinResult(True, cand, t1, t2, "search")
    return JoinResult(False, method="search", bound=depth)


def diamond_check(s: System, c: Configuration, mode: str = "one", depth: int = 2) -> DiamondReport:
    """Try to join every unordered pair of one-step predecessors of ``c``.

    ``one``: a common one-step predecessor.  ``plus``: interaction peaks need
    ``c' ->+ c1`` and ``c' ->+ c2`` (at most ``depth`` indirections searched
    backwards beyond the templates); other peaks need a one-step join.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    preds = expansions(s, c)
    rep = DiamondReport(c, mode, depth)
    back: dict = {}

    def one(i):
        if i not in back:
            back[i] = _back_one(s, preds[i].config)
        return back[i]

    for i, j in combinations(range(len(preds)), 2):
        rep.pairs += 1
        a, b = preds[i], preds[j]
        if mode == "plus" and a.kind == b.kind == INTERACTION:
            if not plus_join(s, a.config, b.config, c, depth).success:
                rep.inconclusive.append((a.config, b.config))
        elif not one(i) & one(j):
            rep.failures.append((a.config, b.config))
    return rep


# -- failure witnesses --------------------------------------------------------------

@dataclass
class FailureWitness:
    """``c1`` and ``c2`` both interact to ``c`` yet have no common predecessor."""

    c1: Configuration
    c2: Configuration
    c: Configuration
    reason: str
    rules: tuple

    def verify(self, s: System) -> bool:
        steps_ok = all(
            path is not None and path[0].kind == INTERACTION
            for path in (one_step_path(s, self.c1, self.c), one_step_path(s, self.c2, self.c))
        )
        distinct = not congruent(self.c1, self.c2)
        return steps_ok and distinct and not (_back_one(s, self.c1) & _back_one(s, self.c2))

    def as_dict(self) -> dict:
        return {
            "reason": self.reason,
            "rules": [r.label() for r in self.rules],
            "c1": format_config(self.c1),
            "c2": format_config(self.c2),
            "c": print_config(self.c),
        }

    def describe(self) -> str:
        return "\n".join([
            f"{self.reason} ({'; '.join(r.label() for r in self.rules)})",
            f"  c1 = {format_config(self.c1)}",
            f"  c2 = {format_config(self.c2)}",
            f"  both interact to c = {print_config(self.c)}",
        ])


def _closed_over(pair: Equation) -> Configuration:
    counts: dict = {}
    for n in pair.names():
        counts[n] = counts.get(n, 0) + 1
    return Configuration(tuple(n for n in counts if counts[n] == 1), (pair,))


def _clash_triple(s: System, r1: Rule, r2: Rule, strict: bool) -> Optional[FailureWitness]:
    w = clash_witness(r1, r2, strict)
    if w is None:
        return None
    c1 = _closed_over(w.pair1)
    c2 = Configuration(c1.interface, (w.pair2,))
    return FailureWitness(c1, c2, interact(s, c1, 0), "clash", (r1, r2))


def _user_names(r: Rule) -> tuple:
    taken = set(r.bound_names())
    xs = [f"x{i + 1}" for i in range(len(r.left_patterns))]
    ys = [f"y{i + 1}" for i in range(len(r.right_patterns))]
    while taken & set(xs + ys):
        xs = ["x" + n for n in xs]
        ys = ["y" + n for n in ys]
    return xs, ys


def _disconnected_triple(s: System, r: Rule) -> Optional[FailureWitness]:
    xs, ys = _user_names(r)
    marks = divide_pattern(r)
    ren = dict(zip([f"%x{i + 1}" for i in range(len(xs))] + [f"%y{i + 1}" for i in range(len(ys))], xs + ys))
    eqs = [e.rename(ren) for e in marks]
    groups = components(eqs)
    if len(groups) < 2:
        return None
    gamma = [eqs[j] for j in groups[0]]
    delta = [eqs[j] for g in groups[1:] for j in g]
    args = set(xs + ys)
    xp = [n for n in xs + ys if any(n in set(e.names()) for e in gamma)]
    yp = [n for n in xs + ys if any(n in set(e.names()) for e in delta)]
    taken = args | {n for e in eqs for n in e.names()}

    def copy_name(n):
        k = f"{n}c"
        while k in taken:
            k += "c"
        taken.add(k)
        return k

    ypp = {n: copy_name(n) for n in yp}
    wiring = {n for e in delta for n in e.names()} - args
    copy = {**ypp, **{n: copy_name(n) for n in sorted(wiring)}}
    delta_copy = [e.rename(copy) for e in delta]
    iface = tuple(xp + yp + [ypp[n] for n in yp])
    swap = lambda t: rename_term(t, ypp)
    pair = Equation(Agent(r.left, tuple(xs)), Agent(r.right, tuple(ys)))
    pair_copy = Equation(Agent(r.left, tuple(map(swap, xs))), Agent(r.right, tuple(map(swap, ys))))
    c1 = Configuration(iface, (pair_copy, *delta))
    c2 = Configuration(iface, (pair, *delta_copy))
    return FailureWitness(c1, c2, interact(s, c1, 0), "disconnected", (r,))


def strong_failure_witness(s: System, strict: bool = False) -> Optional[FailureWitness]:
    """A verified triple refuting strong upward confluence, or None.

    ``strict`` skips clashes whose arguments mention the other rule's wiring names.
    """
    rules = list(s.rules)
    pairs = list(combinations(rules, 2)) + [(r, r) for r in rules]
    for r1, r2 in pairs:
        w = _clash_triple(s, r1, r2, strict)
        if w is not None and w.verify(s):
            return w
    for r in rules:
        w = _disconnected_triple(s, r)
        if w is not None and w.verify(s):
            return w
    return None


# -- random generation ----------------------------------------------------------

class _Hole:
    """Placeholder for a name, filled in once all holes are known."""


def _random_term(rng: random.Random, s: System, depth: int, holes: list):
    agents = sorted(s.signature.items())
    if depth <= 0 or not agents or rng.random() < 0.55:
        h = _Hole()
        holes.append(h)
        return h
    sym, ar = rng.choice(agents)
    return Agent(sym, tuple(_random_term(rng, s, depth - 1, holes) for _ in range(ar)))


def _fill(t, names: dict):
    if isinstance(t, _Hole):
        return names[t]
    return Agent(t.symbol, tuple(_fill(a, names) for a in t.args))


def random_config(s: System, size: int, seed: int, depth: int = 2) -> Configuration:
    """A linear configuration of at most ``size`` equations, biased towards active pairs.

    Every name occurs exactly twice; names left unpaired are exported through
    the interface.
    """
    rng = random.Random(seed)
    n = rng.randint(1, size) if size > 0 else 0
    holes: list = []
    raw = []
    for _ in range(n):
        if s.rules and rng.random() < 0.5:
            r = rng.choice(s.rules)
            left = Agent(r.left, tuple(_random_term(rng, s, depth - 1, holes) for _ in r.left_patterns))
            right = Agent(r.right, tuple(_random_term(rng, s, depth - 1, holes) for _ in r.right_patterns))
        else:
            left = _random_term(rng, s, depth, holes)
            right = _random_term(rng, s, depth, holes)
        raw.append((left, right))
    order = holes[:]
    rng.shuffle(order)
    exported = rng.randint(0, min(2, len(order)))
    if (len(order) - exported) % 2:
        exported += 1 if exported < len(order) else -1
    names: dict = {}
    iface = []
    for i, h in enumerate(order[:exported]):
        names[h] = f"a{i}"
        iface.append(f"a{i}")
    rest = order[exported:]
    for i in range(0, len(rest), 2):
        names[rest[i]] = names[rest[i + 1]] = f"n{i // 2}"
    if n == 0 and size == 0:
        return Configuration((), ())
    body = tuple(Equation(_fill(a, names), _fill(b, names)) for a, b in raw)
    return Configuration(tuple(iface), body)


def random_peaks(s: System, count: int, seed: int, size: int = 4) -> list:
    """``count`` triples ``(c1, c2, c)`` with ``c1`` and ``c2`` interacting to ``c``."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 200 * count:
        attempts += 1
        c = random_config(s, size, rng.randrange(2**32))
        for _ in range(rng.randint(1, 2)):
            pairs = active_pairs(s, c)
            if pairs:
                c = interact(s, c, rng.choice(pairs))
        preds = interaction_expansions(s, c)
        if len(preds) < 2:
            continue
        a, b = rng.sample(range(len(preds)), 2)
        out.append((preds[a].config, preds[b].config, c))
    return out


def random_rule(rng: random.Random, signature: dict, left: str, right: str, depth: int = 1) -> Rule:
    """A linear rule for ``left >< right`` with patterns of depth at most ``depth``."""
    agents = sorted(signature.items())
    holes: list = []

    def pattern(d):
        if d <= 0 or rng.random() < 0.6:
            h = _Hole()
            holes.append(h)
            return h
        sym, ar = rng.choice(agents)
        return Agent(sym, tuple(pattern(d - 1) for _ in range(ar)))

    while True:
        holes.clear()
        lp = [pattern(depth) for _ in range(signature[left])]
        rp = [pattern(depth) for _ in range(signature[right])]
        if len(holes) % 2 == 0:
            break
    order = holes[:]
    rng.shuffle(order)
    names = {}
    for i in range(0, len(order), 2):
        names[order[i]] = names[order[i + 1]] = f"v{i // 2}"
    return Rule(left, right, tuple(_fill(p, names) for p in lp), tuple(_fill(p, names) for p in rp))


# -- counterexample search ----------------------------------------------------------

@dataclass
class SearchReport:
    samples: int
    size: int
    depth: int
    seed: int
    one_failures: int = 0
    plus_failures: int = 0
    plus_inconclusive: int = 0
    examples: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.one_failures or self.plus_failures:
            return "failure"
        return "inconclusive" if self.plus_inconclusive else "joinable"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "samples": self.samples,
            "size": self.size,
            "depth": self.depth,
            "seed": self.seed,
            "one_step_failures": self.one_failures,
            "plus_step_failures": self.plus_failures,
            "plus_step_inconclusive": self.plus_inconclusive,
            "examples": self.examples,
        }

    def describe(self) -> str:
        lines = [
            f"{self.status}: {self.samples} samples (size <= {self.size}, seed {self.seed})",
            f"  one-step pairs without a join: {self.one_failures}",
            f"  plus-step pairs without a join: {self.plus_failures}",
            f"  plus-step pairs not joined within depth {self.depth}: {self.plus_inconclusive}",
        ]
        for ex in self.examples:
            lines.append(f"  [{ex['mode']}] {ex['c1']}  /  {ex['c2']}  over {ex['c']}")
        return "\n".join(lines)


def counterexample_search(
    s: System, size: int = 4, samples: int = 50, depth: int = 2, seed: int = 0, keep: int = 3
) -> SearchReport:
    """Sample configurations and run both diamond checks on each."""
    rng = random.Random(seed)
    rep = SearchReport(samples, size, depth, seed)
    for _ in range(samples):
        c = random_config(s, size, rng.randrange(2**32))
        for mode in MODES:
            d = diamond_check(s, c, mode, depth)
            if mode == "one":
                rep.one_failures += len(d.failures)
            else:
                rep.plus_failures += len(d.failures)
                rep.plus_inconclusive += len(d.inconclusive)
            for a, b in d.failures[: max(0, keep - len(rep.examples))]:
                rep.examples.append(
                    {"mode": mode, "c1": print_config(a), "c2": print_config(b), "c": print_config(c)}
                )
    return rep
