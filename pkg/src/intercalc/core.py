"""Terms, equations, configurations, rules and interaction systems.

A name is a plain ``str``; an agent term is an :class:`Agent` tuple.  User
names match ``[A-Za-z][A-Za-z0-9_]*``; names generated by the machine start
with ``%`` and can never be written in source text.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from . import _kernel

USER_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
MACHINE_PREFIX = "%"
_MACHINE_NUMBERED = re.compile(r"%(\d+)\Z")


class Agent(NamedTuple):
    symbol: str
    args: tuple = ()

    def __repr__(self) -> str:
        return f"{self.symbol}({', '.join(map(term_str, self.args))})"


Term = Union[str, Agent]


def is_name(t: Term) -> bool:
    return isinstance(t, str)


def is_machine_name(name: str) -> bool:
    return name.startswith(MACHINE_PREFIX)


def agent(symbol: str, *args: Term) -> Agent:
    return Agent(symbol, tuple(args))


def term_str(t: Term) -> str:
    if isinstance(t, str):
        return t
    return f"{t.symbol}({', '.join(map(term_str, t.args))})"


def term_names(t: Term) -> Iterator[str]:
    """Yield every name occurrence of ``t``, left to right."""
    if isinstance(t, str):
        yield t
    else:
        for a in t.args:
            yield from term_names(a)


def term_size(t: Term) -> int:
    if isinstance(t, str):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    if isinstance(t, str) or not t.args:
        return 0 if isinstance(t, str) else 1
    return 1 + max(term_depth(a) for a in t.args)


def rename_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, str):
        return mapping.get(t, t)
    return Agent(t.symbol, tuple(rename_term(a, mapping) for a in t.args))


class Equation:
    """An unordered pair of terms; ``Equation(t, u) == Equation(u, t)``."""

    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right

    def __iter__(self):
        yield self.left
        yield self.right

    def __getitem__(self, side: int) -> Term:
        return self.right if side else self.left

    def __eq__(self, other) -> bool:
        if not isinstance(other, Equation):
            return NotImplemented
        return (self.left == other.left and self.right == other.right) or (
            self.left == other.right and self.right == other.left
        )

    def __hash__(self) -> int:
        return hash(frozenset((self.left, self.right)))

    def __repr__(self) -> str:
        return f"{term_str(self.left)} = {term_str(self.right)}"

    def flipped(self) -> "Equation":
        return Equation(self.right, self.left)

    def names(self) -> Iterator[str]:
        yield from term_names(self.left)
        yield from term_names(self.right)

    def rename(self, mapping: dict) -> "Equation":
        return Equation(rename_term(self.left, mapping), rename_term(self.right, mapping))


@dataclass(frozen=True, eq=False)
class Configuration:
    """``< interface | body >``; the body is a multiset of equations."""

    interface: tuple = ()
    body: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "interface", tuple(self.interface))
        object.__setattr__(self, "body", tuple(self.body))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.interface == other.interface and Counter(self.body) == Counter(other.body)

    def __hash__(self) -> int:
        return hash((self.interface, frozenset(Counter(self.body).items())))

    def __repr__(self) -> str:
        iface = ", ".join(map(term_str, self.interface))
        body = ", ".join(map(repr, self.body))
        return f"< {iface} | {body} >".replace("  ", " ")

    def names(self) -> Iterator[str]:
        for t in self.interface:
            yield from term_names(t)
        for e in self.body:
            yield from e.names()

    def name_counts(self) -> Counter:
        """Occurrences per name, computed once and shared: do not mutate."""
        counts = self.__dict__.get("_counts")
        if counts is None:
            counts = Counter(self.names())
            object.__setattr__(self, "_counts", counts)
        return counts

    def free_names(self) -> list:
        counts = self.name_counts()
        return [n for n in dict.fromkeys(self.names()) if counts[n] == 1]

    def bound_names(self) -> list:
        counts = self.name_counts()
        return [n for n in dict.fromkeys(self.names()) if counts[n] == 2]

    def rename(self, mapping: dict) -> "Configuration":
        return Configuration(
            tuple(rename_term(t, mapping) for t in self.interface),
            tuple(e.rename(mapping) for e in self.body),
        )


class FreshNames:
    """Counter-backed supply of machine names ``%0, %1, ...``."""

    def __init__(self, start: int = 0):
        self.counter = start

    def __call__(self) -> str:
        name = f"%{self.counter}"
        self.counter += 1
        return name

    @classmethod
    def above(cls, *things) -> "FreshNames":
        """A supply whose names do not occur in any of the given configurations/terms."""
        top = -1
        for thing in things:
            if isinstance(thing, Configuration):
                names = thing.names()
            elif isinstance(thing, Equation):
                names = thing.names()
            elif isinstance(thing, (str, Agent)):
                names = term_names(thing)
            else:
                names = (n for item in thing for n in _names_of(item))
            for n in names:
                m = _MACHINE_NUMBERED.match(n)
                if m:
                    top = max(top, int(m.group(1)))
        return cls(top + 1)


def _names_of(item) -> Iterator[str]:
    if isinstance(item, (Configuration, Equation)):
        return item.names()
    return term_names(item)


def fresh_name(counter: int) -> tuple:
    """Pure form of :class:`FreshNames`: returns ``(name, next_counter)``."""
    return f"%{counter}", counter + 1


@dataclass(frozen=True)
class Rule:
    """Interaction rule ``left[left_patterns] >< right[right_patterns]``."""

    left: str
    right: str
    left_patterns: tuple = ()
    right_patterns: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "left_patterns", tuple(self.left_patterns))
        object.__setattr__(self, "right_patterns", tuple(self.right_patterns))

    @property
    def arity(self) -> int:
        return len(self.left_patterns) + len(self.right_patterns)

    @property
    def symbols(self) -> frozenset:
        return frozenset((self.left, self.right))

    @property
    def patterns(self) -> tuple:
        return self.left_patterns + self.right_patterns

    def bound_names(self) -> list:
        return list(dict.fromkeys(n for p in self.patterns for n in term_names(p)))

    def label(self) -> str:
        lp = ", ".join(map(term_str, self.left_patterns))
        rp = ", ".join(map(term_str, self.right_patterns))
        return f"{self.left}[{lp}] >< {self.right}[{rp}]"

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class System:
    """Signature (symbol -> arity) plus interaction rules."""

    signature: dict = field(default_factory=dict)
    rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.signature.items())), self.rules))

    def rule_for(self, a: str, b: str):
        """Return ``(rule, swapped)`` for the unordered pair, or ``(None, False)``.

        ``swapped`` is true when ``a`` plays the rule's right-hand agent.
        """
        for r in self.rules:
            if r.left == a and r.right == b:
                return r, False
            if r.left == b and r.right == a:
                return r, True
        return None, False


class PreconditionError(ValueError):
    """An operation was called outside its documented precondition."""


# -- occurrences and positions ---------------------------------------------

class Position(NamedTuple):
    """Address of a subterm occurrence.

    ``where`` is ``"i"`` (interface entry ``index``) or ``"b"`` (body equation
    ``index``, ``side`` 0 or 1); ``path`` walks agent arguments.
    """

    where: str
    index: int
    side: int
    path: tuple


def subterm_positions(t: Term, prefix=()) -> Iterator[tuple]:
    yield prefix, t
    if not isinstance(t, str):
        for i, a in enumerate(t.args):
            yield from subterm_positions(a, prefix + (i,))


def positions(c: Configuration) -> Iterator[tuple]:
    """Yield ``(Position, subterm)`` for every subterm occurrence of ``c``."""
    for i, t in enumerate(c.interface):
        for path, sub in subterm_positions(t):
            yield Position("i", i, 0, path), sub
    for j, e in enumerate(c.body):
        for side in (0, 1):
            for path, sub in subterm_positions(e[side]):
                yield Position("b", j, side, path), sub


def replace_in_term(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    head, rest = path[0], path[1:]
    args = list(t.args)
    args[head] = replace_in_term(args[head], rest, new)
    return Agent(t.symbol, tuple(args))


def subterm_at(t: Term, path: tuple) -> Term:
    for i in path:
        t = t.args[i]
    return t


def replace_at(c: Configuration, pos: Position, new: Term) -> Configuration:
    if pos.where == "i":
        iface = list(c.interface)
        iface[pos.index] = replace_in_term(iface[pos.index], pos.path, new)
        return Configuration(tuple(iface), c.body)
    body = list(c.body)
    e = body[pos.index]
    sides = [e.left, e.right]
    sides[pos.side] = replace_in_term(sides[pos.side], pos.path, new)
    body[pos.index] = Equation(*sides)
    return Configuration(c.interface, tuple(body))


def find_name(c: Configuration, name: str) -> list:
    return [p for p, sub in positions(c) if sub == name]


def substitute(c: Configuration, x: str, t: Term) -> Configuration:
    """Replace the unique occurrence of ``x`` in ``c`` by ``t``."""
    found = find_name(c, x)
    if len(found) != 1:
        raise PreconditionError(f"name {x!r} occurs {len(found)} times; substitution needs exactly one")
    return replace_at(c, found[0], t)


# -- validation --------------------------------------------------------------

@dataclass
class Validation:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok


def _check_term_agents(t: Term, signature: dict, where: str, errors: list) -> None:
    if isinstance(t, str):
        return
    if t.symbol not in signature:
        errors.append(f"{where}: undeclared agent {t.symbol!r}")
    elif signature[t.symbol] != len(t.args):
        errors.append(
            f"{where}: agent {t.symbol!r} has {len(t.args)} arguments, declared arity {signature[t.symbol]}"
        )
    for a in t.args:
        _check_term_agents(a, signature, where, errors)


def validate_config(s: System | None, c: Configuration) -> Validation:
    """Check linearity and agent arities; cyclic equations are warnings."""
    v = Validation()
    for n, k in c.name_counts().items():
        if k > 2:
            v.errors.append(f"name {n!r} occurs {k} times (at most 2 allowed)")
    if s is not None:
        for i, t in enumerate(c.interface):
            _check_term_agents(t, s.signature, f"interface[{i}]", v.errors)
        for j, e in enumerate(c.body):
            for side in (0, 1):
                _check_term_agents(e[side], s.signature, f"body[{j}].{'lr'[side]}", v.errors)
    for j, e in enumerate(c.body):
        for side in (0, 1):
            x, t = e[side], e[1 - side]
            if isinstance(x, str) and not isinstance(t, str) and x in set(term_names(t)):
                v.warnings.append(f"body[{j}]: cyclic equation {e!r}")
                break
    return v


def _contractum_is_swap_invariant(r: Rule) -> bool:
    t = [f"%l{i}" for i in range(len(r.left_patterns))]
    u = [f"%r{i}" for i in range(len(r.right_patterns))]
    one = Configuration(tuple(t + u), tuple(
        [Equation(a, p) for a, p in zip(t, r.left_patterns)]
        + [Equation(b, p) for b, p in zip(u, r.right_patterns)]))
    # firing the same equation read right-to-left feeds u to the left patterns
    two = Configuration(tuple(t + u), tuple(
        [Equation(a, p) for a, p in zip(u, r.left_patterns)]
        + [Equation(b, p) for b, p in zip(t, r.right_patterns)]))
    return congruent(one, two)


def validate_system(s: System) -> Validation:
    v = Validation()
    for sym, ar in s.signature.items():
        if not USER_NAME.match(sym):
            v.errors.append(f"bad agent symbol {sym!r}")
        if not isinstance(ar, int) or ar < 0:
            v.errors.append(f"agent {sym!r} has invalid arity {ar!r}")
    seen: dict = {}
    for r in s.rules:
        where = f"rule {r.label()}"
        for sym, pats in ((r.left, r.left_patterns), (r.right, r.right_patterns)):
            if sym not in s.signature:
                v.errors.append(f"{where}: undeclared agent {sym!r}")
            elif s.signature[sym] != len(pats):
                v.errors.append(f"{where}: {sym!r} given {len(pats)} patterns, arity {s.signature[sym]}")
        for p in r.patterns:
            _check_term_agents(p, s.signature, where, v.errors)
        counts = Counter(n for p in r.patterns for n in term_names(p))
        for n, k in counts.items():
            if k != 2:
                v.errors.append(f"{where}: wiring name {n!r} occurs {k} times (must be exactly 2)")
        key = r.symbols
        if key in seen:
            v.errors.append(f"{where}: second rule for pair {sorted(key)} (first: {seen[key].label()})")
        else:
            seen[key] = r
        if r.left == r.right and not v.errors and not _contractum_is_swap_invariant(r):
            v.warnings.append(f"{where}: contractum changes when the two sides are swapped")
    return v


# -- structural congruence ---------------------------------------------------

def canonical_key(c: Configuration) -> tuple:
    """Hashable key shared exactly by congruent configurations; cached on ``c``."""
    key = c.__dict__.get("_key")
    if key is None:
        key = _kernel.canonical_key(c)
        object.__setattr__(c, "_key", key)
    return key


def canonicalize(c: Configuration) -> Configuration:
    """Representative of ``c``'s congruence class.

    Bound names become ``%b0, %b1, ...``, each equation gets a fixed
    orientation and the body a fixed order; the interface order is kept.
    """
    return from_key(canonical_key(c))


def _decode(enc) -> Term:
    tag = enc[0]
    if tag == 0:
        return f"%b{enc[1]}"
    if tag == 1:
        return enc[1]
    return Agent(enc[1], tuple(_decode(a) for a in enc[2]))


def from_key(key: tuple) -> Configuration:
    iface, body = key
    return Configuration(
        tuple(_decode(t) for t in iface),
        tuple(Equation(_decode(l), _decode(r)) for l, r in body),
    )


def congruent(c1: Configuration, c2: Configuration) -> bool:
    return canonical_key(c1) == canonical_key(c2)


def distinct_by_congruence(configs: Iterable[Configuration]) -> list:
    seen = set()
    out = []
    for c in configs:
        k = canonical_key(c)
        if k not in seen:
            seen.add(k)
            out.append(c)
    return out


def make_config(interface: Sequence[Term] = (), body: Iterable = ()) -> Configuration:
    """Build a configuration from terms and ``(left, right)`` pairs."""
    eqs = tuple(e if isinstance(e, Equation) else Equation(*e) for e in body)
    return Configuration(tuple(interface), eqs)
