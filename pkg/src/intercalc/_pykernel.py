"""Pure-Python canonical-form kernel.

A configuration is encoded as nested tuples: a bound name (two occurrences)
becomes ``(0, k)`` with ``k`` its rank of first appearance, a free name
``(1, text)``, an agent ``(2, symbol, args)``.  The interface is encoded in
order; the body is the lexicographically least sequence of oriented
equation tokens, found greedily with branching on ties and a memo keyed by
the remaining equations and the numbering of the names they mention.

Colour refinement runs first: bound names and equations get colours that
are invariant under renaming, and each token is led by its equation's
colour, so ties only remain between equations that refinement cannot tell
apart.  When refinement separates every bound name the colours alone fix
the order, and the search is skipped.
"""
from collections import Counter


def canonical_key(c):
    counts = Counter()
    for t in c.interface:
        _count(t, counts)
    eqs = []
    for e in c.body:
        _count(e.left, counts)
        _count(e.right, counts)
        eqs.append((e.left, e.right))

    naming = {}
    iface = []
    for t in c.interface:
        new = {}
        iface.append(_enc(t, counts, naming, new, len(naming)))
        naming.update(new)

    eq_names = []
    for l, r in eqs:
        ns = set()
        _bound_names(l, counts, ns)
        _bound_names(r, counts, ns)
        eq_names.append(frozenset(ns))

    colour, col, discrete = _refine(c.interface, eqs, counts)
    if discrete:
        # every bound name is told apart, so the colours fix order and orientation
        toks = []
        for l, r in eqs:
            a, b = _shape(l, counts, col), _shape(r, counts, col)
            toks.append((a, b, l, r) if a <= b else (b, a, r, l))
        toks.sort(key=lambda t: t[:2])
        body = []
        for _, _, l, r in toks:
            new = {}
            base = len(naming)
            body.append((_enc(l, counts, naming, new, base), _enc(r, counts, naming, new, base)))
            naming.update(new)
        return tuple(iface), tuple(body)
    memo = {}

    def best(remaining, naming):
        if not remaining:
            return ()
        relevant = set()
        for i in remaining:
            relevant |= eq_names[i]
        key = (remaining, len(naming), tuple(sorted((n, naming[n]) for n in relevant if n in naming)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        base = len(naming)
        top = None
        ties = []
        least = min([colour[i] for i in remaining])
        for i in remaining:
            if colour[i] != least:
                continue
            l, r = eqs[i]
            for a, b in ((l, r), (r, l)):
                new = {}
                tok = (colour[i], _enc(a, counts, naming, new, base), _enc(b, counts, naming, new, base))
                if top is None or tok < top:
                    top = tok
                    ties = [(i, new)]
                elif tok == top:
                    ties.append((i, new))
        result = None
        tried = set()
        for i, new in ties:
            sig = (i, tuple(sorted(new.items())))
            if sig in tried:
                continue
            tried.add(sig)
            child = dict(naming)
            child.update(new)
            cand = (top[1:],) + best(remaining - {i}, child)
            if result is None or cand < result:
                result = cand
        memo[key] = result
        return result

    body = best(frozenset(range(len(eqs))), naming)
    return tuple(iface), body


def _count(t, counts):
    if type(t) is str:
        counts[t] += 1
    else:
        for a in t.args:
            _count(a, counts)


def _bound_names(t, counts, out):
    if type(t) is str:
        if counts[t] >= 2:
            out.add(t)
    else:
        for a in t.args:
            _bound_names(a, counts, out)


def _enc(t, counts, naming, new, base):
    if type(t) is str:
        if counts[t] < 2:
            return (1, t)
        k = naming.get(t)
        if k is None:
            k = new.get(t)
            if k is None:
                k = base + len(new)
                new[t] = k
        return (0, k)
    return (2, t.symbol, tuple([_enc(a, counts, naming, new, base) for a in t.args]))


def _shape(t, counts, col):
    if type(t) is str:
        return (0, col[t]) if counts[t] >= 2 else (1, t)
    return (2, t.symbol, tuple([_shape(a, counts, col) for a in t.args]))


def _occurrences(t, path, out):
    if type(t) is str:
        out.append((t, path))
    else:
        for i, a in enumerate(t.args):
            _occurrences(a, path + (i,), out)


def _rank(values):
    table = {v: k for k, v in enumerate(sorted(set(values)))}
    return [table[v] for v in values]


def _refine(interface, eqs, counts):
    """Renaming-invariant equation colours, final name colours, and whether names are all apart."""
    col = {}
    for idx, t in enumerate(interface):
        occ = []
        _occurrences(t, (), occ)
        for n, path in occ:
            col[n] = (1, idx, path)
    occs = []
    for i, (l, r) in enumerate(eqs):
        for side, t in ((0, l), (1, r)):
            found = []
            _occurrences(t, (), found)
            for n, path in found:
                if counts[n] >= 2:
                    occs.append((n, i, side, path))
                    col.setdefault(n, (0,))
    names = sorted(col)
    ranks = _rank([col[n] for n in names])
    col = dict(zip(names, ranks))
    classes = len(set(ranks))
    while True:
        eqcol = []
        sides = []
        for l, r in eqs:
            a, b = _shape(l, counts, col), _shape(r, counts, col)
            sides.append((a, b))
            eqcol.append((a, b) if a <= b else (b, a))
        ctx = {n: [] for n in names}
        for n, i, side, path in occs:
            ctx[n].append((sides[i][side], path, sides[i][1 - side]))
        ranks = _rank([(col[n], tuple(sorted(ctx[n]))) for n in names])
        col = dict(zip(names, ranks))
        if len(set(ranks)) == classes:
            return _rank(eqcol), col, classes == len(names)
        classes = len(set(ranks))
