"""Named graph families, seeded random generators, and small-order enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional

from fodef.graphs import (ColoredGraph, GraphError, _forest_code,
                          find_isomorphism, iso_invariant_key)

ENUM_CAP = 8


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int = 0
    a: int = 0
    b: int = 0
    d: int = 3
    seed: Optional[int] = None


def path(n: int) -> ColoredGraph:
    if n < 1:
        raise GraphError("path(n) requires n >= 1")
    return ColoredGraph.build(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> ColoredGraph:
    if n < 3:
        raise GraphError("cycle(n) requires n >= 3")
    return ColoredGraph.build(n, [(i, (i + 1) % n) for i in range(n)])


def two_cycles(n: int) -> ColoredGraph:
    """Disjoint union of two n-cycles on 2n vertices."""
    if n < 3:
        raise GraphError("two_cycles(n) requires n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    return ColoredGraph.build(2 * n, edges)


def star(n: int) -> ColoredGraph:
    """K_{1,n-1}: vertex 0 is the center."""
    if n < 2:
        raise GraphError("star(n) requires n >= 2")
    return ColoredGraph.build(n, [(0, i) for i in range(1, n)])


def complete(n: int) -> ColoredGraph:
    if n < 1:
        raise GraphError("complete(n) requires n >= 1")
    return ColoredGraph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def triv(a: int, b: int) -> ColoredGraph:
    """a isolated edges plus b isolated vertices."""
    if a < 0 or b < 0 or a + b == 0:
        raise GraphError("triv(a,b) requires a,b >= 0 and a+b > 0")
    return ColoredGraph.build(2 * a + b, [(2 * i, 2 * i + 1) for i in range(a)])


def random_bounded_tree(n: int, d: int, seed: int) -> ColoredGraph:
    """Random tree with maximum degree at most d, seed-reproducible.

    Samples a degree-constrained sequence and decodes it, so every vertex
    ends with degree occurrences+1 <= d.
    """
    if n < 1:
        raise GraphError("tree size must be positive")
    if d < 2:
        raise GraphError("degree bound must be at least 2")
    if n == 1:
        return ColoredGraph.build(1, [])
    if n == 2:
        return ColoredGraph.build(2, [(0, 1)])
    rng = random.Random(seed)
    count = [0] * n
    seq = []
    for _ in range(n - 2):
        eligible = [v for v in range(n) if count[v] < d - 1]
        v = rng.choice(eligible)
        count[v] += 1
        seq.append(v)
    # standard sequence decode
    degree = [c + 1 for c in count]
    import heapq
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, w))
    return ColoredGraph.build(n, edges)


def _random_triangulation_chords(n: int, rng: random.Random) -> list[tuple[int, int]]:
    chords: list[tuple[int, int]] = []

    def tri(i: int, j: int):
        # polygon arc i..j (cyclic positions, i<j); split at a random k
        if j - i < 2:
            return
        k = rng.randint(i + 1, j - 1)
        if k - i >= 2:
            chords.append((i, k))
        if j - k >= 2:
            chords.append((k, j))
        tri(i, k)
        tri(k, j)

    if n >= 4:
        tri(0, n - 1)
    return chords


def random_hop(n: int, seed: int) -> ColoredGraph:
    """Random Hamiltonian outerplanar graph on vertices 0..n-1 in cycle order.

    Triangulates the polygon at random, then deletes each chord with
    probability 1/2; the spanning cycle keeps the result 2-connected.
    """
    if n < 3:
        raise GraphError("random_hop requires n >= 3")
    rng = random.Random(seed)
    chords = _random_triangulation_chords(n, rng)
    kept = [c for c in chords if rng.random() < 0.5]
    # the outer (0, n-1) step closes the cycle
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)] + kept
    return ColoredGraph.build(n, edges)


def generate(spec: FamilySpec) -> ColoredGraph:
    fam = spec.family
    if fam == "path":
        return path(spec.n)
    if fam == "cycle":
        return cycle(spec.n)
    if fam == "two_cycles":
        return two_cycles(spec.n)
    if fam == "star":
        return star(spec.n)
    if fam == "complete":
        return complete(spec.n)
    if fam == "triv":
        return triv(spec.a, spec.b)
    if fam == "random_bounded_tree":
        if spec.seed is None:
            raise GraphError("random_bounded_tree requires a seed")
        return random_bounded_tree(spec.n, spec.d, spec.seed)
    if fam == "random_hop":
        if spec.seed is None:
            raise GraphError("random_hop requires a seed")
        return random_hop(spec.n, spec.seed)
    raise GraphError(f"unknown family {fam!r}")


# -- enumeration ---------------------------------------------------------------

_enum_cache: dict[int, list[ColoredGraph]] = {}


def _enumerate_level(n: int) -> list[ColoredGraph]:
    if n in _enum_cache:
        return _enum_cache[n]
    if n == 1:
        reps = [ColoredGraph.build(1, [])]
    else:
        parents = _enumerate_level(n - 1)
        buckets: dict[tuple, list[ColoredGraph]] = {}
        for p in parents:
            base_edges = list(p.edges())
            for mask in range(1 << (n - 1)):
                extra = [(i, n - 1) for i in range(n - 1) if mask >> i & 1]
                g = ColoredGraph.build(n, base_edges + extra)
                key = iso_invariant_key(g)
                bucket = buckets.setdefault(key, [])
                code = _forest_code(g)
                fresh = True
                for other in bucket:
                    if code is not None:
                        same = code == _forest_code(other)
                    else:
                        same = find_isomorphism(g, other) is not None
                    if same:
                        fresh = False
                        break
                if fresh:
                    bucket.append(g)
        reps = [g for b in buckets.values() for g in b]
        reps.sort(key=lambda g: (g.edge_count(), sorted(g.edges())))
    _enum_cache[n] = reps
    return reps


def enumerate_graphs(n: int, connected_only: bool = False) -> Iterator[ColoredGraph]:
    """One representative per isomorphism class of order n (n <= 8)."""
    if not (1 <= n <= ENUM_CAP):
        raise GraphError(f"enumeration supports 1 <= n <= {ENUM_CAP}")
    for g in _enumerate_level(n):
        if connected_only and not g.is_connected():
            continue
        yield g


def _chords_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (p, q), (r, s) = sorted(a), sorted(b)
    return p < r < q < s or r < p < s < q


_hop_cache: dict[int, list[ColoredGraph]] = {}


def enumerate_hop_graphs(n: int) -> list[ColoredGraph]:
    """All Hamiltonian outerplanar graphs of order n, one per isomorphism class.

    Every such graph is the n-cycle plus a set of pairwise non-crossing
    chords, and isomorphism between them is a dihedral symmetry of the cycle,
    so chord sets are deduplicated under the 2n cycle symmetries.
    """
    if n in _hop_cache:
        return _hop_cache[n]
    if n == 1:
        out = [ColoredGraph.build(1, [])]
    elif n == 2:
        out = [ColoredGraph.build(2, [(0, 1)])]
    else:
        all_chords = [(i, j) for i in range(n) for j in range(i + 2, n)
                      if not (i == 0 and j == n - 1)]
        compatible = {c: [d for d in all_chords if d > c and not _chords_cross(c, d)]
                      for c in all_chords}

        chord_sets: list[tuple[tuple[int, int], ...]] = []

        def extend(chosen: list, pool: list):
            chord_sets.append(tuple(chosen))
            for i, c in enumerate(pool):
                ok = all(not _chords_cross(c, x) for x in chosen)
                if ok:
                    chosen.append(c)
                    extend(chosen, [d for d in pool[i + 1:] if d > c])
                    chosen.pop()

        extend([], all_chords)

        def canon(chords: tuple[tuple[int, int], ...]) -> tuple:
            best = None
            for refl in (False, True):
                for rot in range(n):
                    moved = []
                    for (a, b) in chords:
                        if refl:
                            a, b = (n - a) % n, (n - b) % n
                        a, b = (a + rot) % n, (b + rot) % n
                        moved.append((min(a, b), max(a, b)))
                    key = tuple(sorted(moved))
                    if best is None or key < best:
                        best = key
            return best

        seen = set()
        out = []
        cycle_edges = [(i, (i + 1) % n) for i in range(n)]
        for cs in chord_sets:
            key = canon(cs)
            if key not in seen:
                seen.add(key)
                out.append(ColoredGraph.build(n, cycle_edges + list(cs)))
    _hop_cache[n] = out
    return out
