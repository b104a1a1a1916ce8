"""Seeded corpus of small rule pairs: agent arities at most 2, pattern depth at most 1."""
from __future__ import annotations

import random

from intercalc.core import System
from intercalc.lab import random_rule

SIZE = 240


def _signature(rng: random.Random) -> dict:
    k = rng.choice((2, 3, 4))
    return {f"s{i}": rng.randint(0, 2) for i in range(k)}


def rule_pairs(size: int = SIZE, seed: int = 2024) -> list:
    """``(signature, r1, r2)`` with the two rules on different agent pairs.

    Half the pairs are forced to equal rule arity so that clashes are common.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        sig = _signature(rng)
        syms = sorted(sig)
        pairs = [(a, b) for i, a in enumerate(syms) for b in syms[i:]]
        if len(pairs) < 2:
            continue
        (a, b), (c, d) = rng.sample(pairs, 2)
        if len(out) % 2 == 0 and sig[a] + sig[b] != sig[c] + sig[d]:
            continue
        if sig[a] + sig[b] > 4 or sig[c] + sig[d] > 4:
            continue
        out.append((sig, random_rule(rng, sig, a, b), random_rule(rng, sig, c, d)))
    return out


def systems(size: int = SIZE, seed: int = 2024) -> list:
    return [System(sig, (r1, r2)) for sig, r1, r2 in rule_pairs(size, seed)]
