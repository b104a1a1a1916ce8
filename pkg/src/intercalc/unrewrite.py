"""Backward steps: every one-step predecessor of a configuration, up to congruence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .core import (
    Agent,
    Configuration,
    Equation,
    FreshNames,
    Position,
    Rule,
    System,
    canonical_key,
    positions,
    replace_at,
    term_depth,
    term_names,
)
from .rewrite import INDIRECTION, INTERACTION, indirect, interact


@dataclass(frozen=True)
class ExpansionMatch:
    """An instance of ``rule``'s contractum inside a configuration body."""

    rule: Rule
    mapping: tuple          # (rule wiring name, configuration name) pairs
    selection: tuple        # body indices, in rule pattern order
    left_args: tuple
    right_args: tuple

    @property
    def active_pair(self) -> Equation:
        r = self.rule
        return Equation(Agent(r.left, self.left_args), Agent(r.right, self.right_args))


@dataclass(frozen=True)
class Expansion:
    """A predecessor ``config`` and how it steps back to the original.

    ``position`` is the body index of the equation the forward step consumes;
    for indirections ``eliminated`` is the name that disappears.
    """

    config: Configuration
    kind: str
    position: int
    eliminated: Optional[str] = None
    source: Optional[Position] = None
    match: Optional[ExpansionMatch] = None

    def replay(self, s: System) -> Configuration:
        """Run the recorded forward step."""
        if self.kind == INTERACTION:
            return interact(s, self.config, self.position)
        e = self.config.body[self.position]
        side = 0 if e.left == self.eliminated else 1
        return indirect(s, self.config, self.position, side)


def _keyed(items) -> dict:
    """First item per congruence class, keyed by canonical key (insertion ordered)."""
    out: dict = {}
    for x in items:
        out.setdefault(canonical_key(x.config), x)
    return out


def _dedup(items) -> list:
    return list(_keyed(items).values())


def indirection_expansions(c: Configuration, fresh: FreshNames | None = None) -> list:
    """Abstract each subterm occurrence into a fresh name ``x`` plus ``x = t``."""
    return _dedup(_indirection_candidates(c, fresh))


def _indirection_candidates(c: Configuration, fresh: FreshNames | None = None) -> list:
    if fresh is None:
        fresh = FreshNames.above(c)
    x = fresh()
    out = []
    for pos, sub in positions(c):
        pred = replace_at(c, pos, x)
        pred = Configuration(pred.interface, pred.body + (Equation(x, sub),))
        out.append(Expansion(pred, INDIRECTION, len(pred.body) - 1, eliminated=x, source=pos))
    return out


def _pattern_order(r: Rule) -> list:
    """Pattern indices: deepest first, then ones sharing names with those already placed."""
    pats = list(r.patterns)
    remaining = sorted(range(len(pats)), key=lambda i: -term_depth(pats[i]))
    order = []
    seen: set = set()
    while remaining:
        pick = next((i for i in remaining if seen & set(term_names(pats[i]))), remaining[0])
        remaining.remove(pick)
        order.append(pick)
        seen |= set(term_names(pats[pick]))
    return order


def _match_pattern(p, t, mapping: dict, image: set, counts) -> bool:
    """Extend ``mapping`` (rule name -> config name) so that ``p`` instantiates to ``t``."""
    if isinstance(p, str):
        if not isinstance(t, str):
            return False
        got = mapping.get(p)
        if got is not None:
            return got == t
        if t in image or counts[t] != 2:
            return False
        mapping[p] = t
        image.add(t)
        return True
    if isinstance(t, str) or t.symbol != p.symbol or len(t.args) != len(p.args):
        return False
    return all(_match_pattern(pa, ta, mapping, image, counts) for pa, ta in zip(p.args, t.args))


def contractum_matches(r: Rule, c: Configuration) -> Iterator[ExpansionMatch]:
    """All ways the body of ``c`` contains an instance of ``r``'s contractum.

    Each wiring name maps to a distinct name occurring exactly twice in ``c``,
    both times at pattern positions of the selected equations; argument slots
    capture whatever stands on the other side.
    """
    pats = r.patterns
    k = len(pats)
    counts = c.name_counts()
    body = c.body
    order = _pattern_order(r)
    chosen = [None] * k
    captured = [None] * k
    used: set = set()

    def go(level: int, mapping: dict, image: set):
        if level == k:
            sel = tuple(chosen)
            m = len(r.left_patterns)
            yield ExpansionMatch(
                r,
                tuple(sorted(mapping.items())),
                sel,
                tuple(captured[:m]),
                tuple(captured[m:]),
            )
            return
        pi = order[level]
        for j, e in enumerate(body):
            if j in used:
                continue
            for side in (0, 1):
                if side == 1 and e.left == e.right:
                    continue
                m2 = dict(mapping)
                i2 = set(image)
                if not _match_pattern(pats[pi], e[side], m2, i2, counts):
                    continue
                used.add(j)
                chosen[pi] = j
                captured[pi] = e[1 - side]
                yield from go(level + 1, m2, i2)
                used.discard(j)

    yield from go(0, {}, set())


def interaction_expansions(s: System, c: Configuration) -> list:
    """Replace each contractum instance by the active pair that produces it."""
    return _dedup(_interaction_expansion(c, m) for r in s.rules for m in contractum_matches(r, c))


def _interaction_expansion(c: Configuration, m: ExpansionMatch) -> Expansion:
    chosen = set(m.selection)
    keep = tuple(e for j, e in enumerate(c.body) if j not in chosen)
    pred = Configuration(c.interface, keep + (m.active_pair,))
    return Expansion(pred, INTERACTION, len(pred.body) - 1, match=m)


def keyed_expansions(s: System, c: Configuration, kind: str = "all") -> dict:
    """Like ``expansions`` but keyed by each predecessor's canonical key."""
    out = []
    if kind in ("all", INTERACTION):
        for r in s.rules:
            out += (_interaction_expansion(c, m) for m in contractum_matches(r, c))
    if kind in ("all", INDIRECTION):
        out += _indirection_candidates(c)
    return _keyed(out)


def expansions(s: System, c: Configuration, kind: str = "all") -> list:
    """One-step predecessors of ``c`` of the requested kind, deduplicated by congruence."""
    return list(keyed_expansions(s, c, kind).values())


def predecessor_keys(s: System, c: Configuration) -> set:
    return set(keyed_expansions(s, c))
