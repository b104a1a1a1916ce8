"""Brute-force oracles used to cross-check the symbolic algorithms."""
from __future__ import annotations

from itertools import permutations, product

from intercalc.core import Agent, Configuration, Equation, System, congruent
from intercalc.rewrite import interact
from intercalc.unrewrite import contractum_matches


def _shapes(r):
    """Argument shapes an instance may need: a name, or any agent heading a pattern of ``r``."""
    seen = {None: 0}

    def walk(t):
        if isinstance(t, Agent):
            seen.setdefault(t.symbol, len(t.args))
            for a in t.args:
                walk(a)

    for p in r.patterns:
        walk(p)
    return list(seen.items())


def _matchings(n: int):
    """Name each of ``n`` holes so that every name occurs at most twice (up to renaming)."""
    def go(i, names, counts):
        if i == n:
            yield tuple(names)
            return
        # a hole either closes an open name or opens a new one
        for k in range(len(counts)):
            if counts[k] == 1:
                counts[k] = 2
                yield from go(i + 1, names + [k], counts)
                counts[k] = 1
        counts.append(1)
        yield from go(i + 1, names + [len(counts) - 1], counts)
        counts.pop()

    yield from go(0, [], [])


def instances(r, partner):
    """Active pairs of ``r`` with arguments drawn from the universe shaped by ``partner``."""
    shapes = _shapes(partner)
    for combo in product(shapes, repeat=r.arity):
        holes = sum(1 if sym is None else ar for sym, ar in combo)
        for naming in _matchings(holes):
            it = iter(f"n{k}" for k in naming)
            args = []
            for sym, ar in combo:
                if sym is None:
                    args.append(next(it))
                else:
                    args.append(Agent(sym, tuple(next(it) for _ in range(ar))))
            m = len(r.left_patterns)
            yield Equation(Agent(r.left, tuple(args[:m])), Agent(r.right, tuple(args[m:])))


def _closed(pair: Equation) -> Configuration:
    counts = {}
    for n in pair.names():
        counts[n] = counts.get(n, 0) + 1
    return Configuration(tuple(sorted(n for n, k in counts.items() if k == 1)), (pair,))


def brute_clash(r1, r2, strict=False):
    """An instance pair ``(pair1, pair2)`` with congruent contracta, or None.

    With ``strict``, neither pair's arguments may mention wiring names.
    """
    if r1.arity != r2.arity or r1.arity == 0:
        return None
    s1 = System({}, (r1,))
    for pair1 in instances(r1, r2):
        c1 = _closed(pair1)
        after = interact(s1, c1, 0)
        for m in contractum_matches(r2, after):
            if strict:
                wiring2 = {n for j in m.selection for n in after.body[j].names()} - set(m.active_pair.names())
                if not set(m.active_pair.names()) <= set(c1.names()) or wiring2 & set(c1.names()):
                    continue
            keep = [e for j, e in enumerate(after.body) if j not in set(m.selection)]
            c2 = Configuration(c1.interface, tuple(keep) + (m.active_pair,))
            if not congruent(c1, c2):
                return pair1, m.active_pair
    return None


def brute_congruent(c1: Configuration, c2: Configuration) -> bool:
    """Congruence by trying every bound-name bijection, orientation and body order."""
    if len(c1.body) != len(c2.body) or len(c1.interface) != len(c2.interface):
        return False
    b1, b2 = sorted(c1.bound_names()), sorted(c2.bound_names())
    if len(b1) != len(b2) or sorted(c1.free_names()) != sorted(c2.free_names()):
        return False
    target = Configuration(c2.interface, c2.body)
    for perm in permutations(b2):
        ren = c1.rename(dict(zip(b1, perm)))
        if ren.interface != target.interface:
            continue
        for order in permutations(range(len(ren.body))):
            for flips in product((False, True), repeat=len(ren.body)):
                body = [ren.body[j].flipped() if f else ren.body[j] for j, f in zip(order, flips)]
                if all(_same(a, b) for a, b in zip(body, target.body)):
                    return True
    return False


def _same(a: Equation, b: Equation) -> bool:
    return a.left == b.left and a.right == b.right
