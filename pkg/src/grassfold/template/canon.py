"""Canonical codes for ranked, marked posets.

Colour refinement (rank, marks, then multisets of cover colours) followed by
individualize-and-refine search.  Every leaf of the search tree yields a
discrete colouring, hence an ordering of the elements; the code is the
lexicographically least encoding over all leaves.  Found automorphisms are
used to skip individualizing vertices in the same orbit as an explored one.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CanonicalForm:
    code: tuple
    order: tuple  # order[k] = original index placed at position k

    def as_bytes(self) -> bytes:
        return repr(self.code).encode()


def _refine(colors, ups, downs):
    """Equitable refinement; colours are ints whose order is labelling-independent."""
    n = len(colors)
    ncolors = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in ups[v])), tuple(sorted(colors[d] for d in downs[v])))
            for v in range(n)
        ]
        distinct = sorted(set(sigs))
        index = {s: k for k, s in enumerate(distinct)}
        new = [index[s] for s in sigs]
        if len(distinct) == ncolors:
            return new
        colors, ncolors = new, len(distinct)


def _encode(perm_pos, ranks, covers, marking):
    n = len(ranks)
    inv = [0] * n
    for v, k in enumerate(perm_pos):
        inv[k] = v
    return (
        n,
        tuple(ranks[inv[k]] for k in range(n)),
        tuple(sorted((perm_pos[a], perm_pos[b]) for a, b in covers)),
        tuple(perm_pos[m] for m in marking),
    )


def canonical_form(ranks, covers, marking) -> CanonicalForm:
    """Canonicalize a ranked poset given by cover pairs and a marking list.

    ``marking[j]`` is the element carrying mark j (marks may share elements).
    """
    n = len(ranks)
    ups = [[] for _ in range(n)]
    downs = [[] for _ in range(n)]
    for a, b in covers:
        ups[a].append(b)
        downs[b].append(a)
    marks_of = [[] for _ in range(n)]
    for j, e in enumerate(marking):
        marks_of[e].append(j)
    init_sig = [(ranks[v], tuple(marks_of[v])) for v in range(n)]
    distinct = sorted(set(init_sig))
    idx = {s: k for k, s in enumerate(distinct)}
    start = _refine([idx[s] for s in init_sig], ups, downs)

    best = [None, None]
    autos = []

    def leaf(colors):
        code = _encode(colors, ranks, covers, marking)
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, list(colors)
        elif code == best[0]:
            # colors and best[1] give the same code: their composite is an automorphism
            inv = [0] * n
            for u, k in enumerate(best[1]):
                inv[k] = u
            autos.append([inv[colors[v]] for v in range(n)])

    def search(colors, path):
        counts = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = None
        for c in sorted(counts):
            if counts[c] > 1:
                target = c
                break
        if target is None:
            leaf(colors)
            return
        cell = [v for v in range(n) if colors[v] == target]
        explored = []
        for v in cell:
            # only automorphisms fixing the individualized path act on this cell
            stab = [g for g in autos if all(g[u] == u for u in path)]
            if any(_same_orbit(v, w, stab) for w in explored):
                continue
            explored.append(v)
            # split v off ahead of its cell, then renumber
            tagged = [(c, 0 if u == v else 1) if c == target else (c, 0) for u, c in enumerate(colors)]
            ds = sorted(set(tagged))
            ix = {s: k for k, s in enumerate(ds)}
            search(_refine([ix[t] for t in tagged], ups, downs), path + [v])

    search(start, [])
    pos = best[1]
    order = [0] * n
    for v, k in enumerate(pos):
        order[k] = v
    return CanonicalForm(best[0], tuple(order))


def _same_orbit(v, w, autos):
    """Whether some product of the recorded automorphisms maps w to v."""
    if not autos:
        return False
    seen = {w}
    stack = [w]
    while stack:
        u = stack.pop()
        for g in autos:
            x = g[u]
            if x == v:
                return True
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return False
