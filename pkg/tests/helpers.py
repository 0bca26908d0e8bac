"""Independent brute-force oracles used to cross-check the library.

Everything here is deliberately naive: permutation search, exhaustive
subdivision hunts, direct inductive definitions.  Slow but obviously right
at the sizes the tests use.
"""

from itertools import combinations, permutations

from fodef.graphs import ColoredGraph


def brute_isomorphic(g: ColoredGraph, h: ColoredGraph) -> bool:
    if g.n != h.n:
        return False
    for perm in permutations(range(h.n)):
        if all(g.colors[v] == h.colors[perm[v]] for v in range(g.n)) and all(
            g.has_edge(u, v) == h.has_edge(perm[u], perm[v])
            for u in range(g.n) for v in range(u + 1, g.n)
        ):
            return True
    return False


def brute_all_graphs(n: int) -> list[ColoredGraph]:
    """One representative per isomorphism class, by raw 2^C(n,2) scan."""
    slots = list(combinations(range(n), 2))
    reps: list[ColoredGraph] = []
    for mask in range(1 << len(slots)):
        edges = [slots[i] for i in range(len(slots)) if mask >> i & 1]
        g = ColoredGraph.build(n, edges)
        if not any(brute_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps


def brute_similar(g: ColoredGraph, x: list[int], f1: tuple[int, ...], f2: tuple[int, ...]) -> bool:
    """Does the identity on X extend to an isomorphism G[X+F1] -> G[X+F2]?"""
    if len(f1) != len(f2):
        return False
    dom = list(x) + list(f1)
    for perm in permutations(f2):
        m = {v: v for v in x}
        m.update(dict(zip(f1, perm)))
        if all(g.colors[v] == g.colors[m[v]] for v in dom) and all(
            g.has_edge(u, v) == g.has_edge(m[u], m[v])
            for u in dom for v in dom if u < v
        ):
            return True
    return False


def _has_subdivision(g: ColoredGraph, pattern_edges: list[tuple[int, int]], k: int) -> bool:
    """Exhaustive search for a subdivision of a k-vertex pattern inside g."""
    def paths_between(a: int, b: int, banned: set[int]) -> list[frozenset[int]]:
        out = []

        def walk(v: int, seen: set[int]):
            if v == b:
                out.append(frozenset(seen - {a, b}))
                return
            for u in g.adj[v]:
                if u == b or (u not in seen and u not in banned):
                    if u == b:
                        out.append(frozenset(seen - {a}))
                    else:
                        seen.add(u)
                        walk(u, seen)
                        seen.discard(u)

        walk(a, {a})
        return out

    for branch in permutations(range(g.n), k):
        def embed(i: int, used: set[int]) -> bool:
            if i == len(pattern_edges):
                return True
            a, b = pattern_edges[i]
            va, vb = branch[a], branch[b]
            for inner in paths_between(va, vb, used | set(branch) - {va, vb}):
                if inner.isdisjoint(used):
                    if embed(i + 1, used | inner):
                        return True
            return False

        if embed(0, set()):
            return True
    return False


def brute_outerplanar(g: ColoredGraph) -> bool:
    """Outerplanar iff no K4 subdivision and no K_{2,3} subdivision."""
    if g.edge_count() > max(0, 2 * g.n - 3):
        return False
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    if g.n >= 4 and _has_subdivision(g, k4, 4):
        return False
    k23 = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]
    if g.n >= 5 and _has_subdivision(g, k23, 5):
        return False
    return True


def brute_two_connected(g: ColoredGraph) -> bool:
    if g.n < 3 or not g.is_connected():
        return False
    for v in range(g.n):
        rest = [u for u in range(g.n) if u != v]
        sub, _ = g.induced(rest)
        if not sub.is_connected():
            return False
    return True


def brute_nest(f) -> set[str]:
    """Direct inductive computation of the nested-quantifier sequence set."""
    from fodef import formulas as F

    if isinstance(f, (F.Adj, F.Eq, F.Col)):
        return {""}
    if isinstance(f, F.Not):
        flip = str.maketrans("EA", "AE")
        return {s.translate(flip) for s in brute_nest(f.body)}
    if isinstance(f, (F.And, F.Or)):
        return brute_nest(f.left) | brute_nest(f.right)
    if isinstance(f, F.Exists):
        return {"E" + s for s in brute_nest(f.body)}
    if isinstance(f, F.Forall):
        return {"A" + s for s in brute_nest(f.body)}
    raise TypeError(f)


def brute_rank(g: ColoredGraph, h: ColoredGraph, r_max: int) -> int | None:
    """Reference minimax for the round game: no memo, no pruning."""
    def violated(pairs) -> bool:
        for i, (ui, vi) in enumerate(pairs):
            if g.colors[ui] != h.colors[vi]:
                return True
            for uj, vj in pairs[:i]:
                if (ui == uj) != (vi == vj):
                    return True
                if g.has_edge(ui, uj) != h.has_edge(vi, vj):
                    return True
        return False

    def spoiler_wins(pairs: tuple, r: int) -> bool:
        if r == 0:
            return False
        for side in ("G", "H"):
            size_own = g.n if side == "G" else h.n
            size_other = h.n if side == "G" else g.n
            for u in range(size_own):
                if all(
                    violated(pairs + (((u, v) if side == "G" else (v, u)),))
                    or spoiler_wins(pairs + (((u, v) if side == "G" else (v, u)),), r - 1)
                    for v in range(size_other)
                ):
                    return True
        return False

    for r in range(1, r_max + 1):
        if spoiler_wins((), r):
            return r
    return None
