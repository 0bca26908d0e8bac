"""Constructive separators and membership tests for the near-Hamiltonian-
outerplanar class.

The class O consists of HOP graphs (2-connected outerplanar, equivalently a
spanning cycle plus pairwise non-crossing chords), graphs one edge-addition
away from HOP (EDHOP1) and connected graphs two additions away (EDHOP2).
Single vertices and single edges count as degenerate HOP graphs so that the
class is closed under the flap recursion all the way down.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from fodef.graphs import BudgetExceeded, ColoredGraph, GraphError, flap_decompose

log = logging.getLogger(__name__)

HOP = "HOP"
EDHOP1 = "EDHOP1"
EDHOP2 = "EDHOP2"
NOT_IN_O = "NOT_IN_O"


class SeparatorError(ValueError):
    """Precondition violated or no separator within the contract."""


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class OClassification:
    """Membership certificate: a completion cycle plus the edges it adds.

    witness_cycle orders all vertices so that consecutive pairs (cyclically)
    are edges of the graph or listed in missing_edges; chords are pairwise
    non-crossing in that order.  exact=True means the tag was established by
    exhaustive search (minimal number of additions); constructive separator
    annotations are upper-bound certificates with exact=False.
    """
    tag: str
    witness_cycle: Optional[tuple[int, ...]]
    missing_edges: tuple[tuple[int, int], ...] = ()
    exact: bool = True

    def in_class(self) -> bool:
        return self.tag != NOT_IN_O

    def certifies(self, g: ColoredGraph) -> bool:
        """Validate the certificate against g (soundness of membership)."""
        if self.tag == NOT_IN_O:
            return True
        if len(self.missing_edges) != {HOP: 0, EDHOP1: 1, EDHOP2: 2}[self.tag]:
            return False
        cyc = self.witness_cycle
        if cyc is None or sorted(cyc) != list(range(g.n)):
            return False
        missing = {_norm(*e) for e in self.missing_edges}
        if any(g.has_edge(u, v) for u, v in missing):
            return False
        if g.n >= 2:
            steps = [(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n)]
            if g.n == 2:
                steps = [tuple(cyc)]
            used = set()
            for u, v in steps:
                if not g.has_edge(u, v):
                    if _norm(u, v) not in missing:
                        return False
                    used.add(_norm(u, v))
            if used != missing:
                return False
        pos = {v: i for i, v in enumerate(cyc)}
        chords = []
        for u, v in g.edges():
            d = abs(pos[u] - pos[v])
            if d != 1 and d != g.n - 1:
                chords.append(_norm(pos[u], pos[v]))
        for a, b in combinations(chords, 2):
            if _chords_cross(a, b):
                return False
        return g.is_connected()


def _chords_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (p, q), (r, s) = a, b
    return p < r < q < s or r < p < s < q


@dataclass(frozen=True)
class SeparatorReport:
    ok: bool
    flap_count: int
    oversize_flaps: tuple[int, ...]
    too_many_flaps: bool

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SeparatorResult:
    x: tuple[int, ...]
    epsilon: Fraction
    flap_count: int
    max_flap_fraction: Fraction
    flaps: tuple[tuple[int, ...], ...]
    tags: Optional[tuple[OClassification, ...]] = None  # in flap-local ids

    def to_json_dict(self) -> dict:
        out = {"X": list(self.x), "flaps": [list(f) for f in self.flaps]}
        if self.tags is not None:
            out["tags"] = [t.tag for t in self.tags]
        return out


def _make_result(g: ColoredGraph, x: Sequence[int], epsilon: Fraction,
                 tags: Optional[tuple[OClassification, ...]]) -> SeparatorResult:
    dec = flap_decompose(g, x)
    biggest = max((len(f) for f in dec.flaps), default=0)
    frac = Fraction(biggest, g.n) if g.n else Fraction(0)
    return SeparatorResult(tuple(x), epsilon, len(dec.flaps), frac, dec.flaps, tags)


def verify_separator(g: ColoredGraph, x: Sequence[int], epsilon: Fraction,
                     m_cap: int) -> SeparatorReport:
    """Check every flap has at most epsilon*n vertices and there are at most
    m_cap flaps; reports the violators."""
    eps = Fraction(epsilon)
    dec = flap_decompose(g, x)
    oversize = tuple(i for i, f in enumerate(dec.flaps)
                     if len(f) * eps.denominator > eps.numerator * g.n)
    too_many = len(dec.flaps) > m_cap
    return SeparatorReport(not oversize and not too_many, len(dec.flaps),
                           oversize, too_many)


# -- trees ---------------------------------------------------------------------


def tree_centroid_separator(g: ColoredGraph) -> SeparatorResult:
    """Single-vertex separator of a tree; every flap has at most n/2 vertices."""
    if not g.is_tree():
        raise SeparatorError("input is not a tree")
    n = g.n
    if n == 1:
        return _make_result(g, [0], Fraction(2, 3), None)
    # subtree sizes from a DFS rooted at 0, then walk toward the heavy side
    order, parent = [], {0: None}
    stack = [0]
    seen = {0}
    while stack:
        v = stack.pop()
        order.append(v)
        for u in g.adj[v]:
            if u not in seen:
                seen.add(u)
                parent[u] = v
                stack.append(u)
    size = [1] * n
    for v in reversed(order):
        if parent[v] is not None:
            size[parent[v]] += size[v]
    best, best_load = None, None
    for v in range(n):
        load = max([n - size[v]] + [size[u] for u in g.adj[v] if parent.get(u) == v]
                   ) if v != 0 else max(size[u] for u in g.adj[v])
        if best_load is None or (load, v) < (best_load, best):
            best, best_load = v, load
    return _make_result(g, [best], Fraction(2, 3), None)


# -- HOP recognition -----------------------------------------------------------


def _hop_cycle(g: ColoredGraph) -> Optional[tuple[int, ...]]:
    """The spanning cycle of a 2-connected outerplanar graph, or None.

    Peels degree-2 vertices (every one of them is an ear of the unique
    spanning cycle), then reinserts them; the final candidate is validated
    outright, so a non-None answer is always a true certificate.
    """
    n = g.n
    if n == 1:
        return (0,)
    if n == 2:
        return (0, 1) if g.has_edge(0, 1) else None
    if not g.is_connected() or g.edge_count() > 2 * n - 3:
        return None
    if any(len(a) < 2 for a in g.adj):
        return None
    adj = [set(a) for a in g.adj]
    alive = set(range(n))
    stack = []
    queue = [v for v in range(n) if len(adj[v]) == 2]
    while len(alive) > 3:
        v = None
        while queue:
            c = queue.pop()
            if c in alive and len(adj[c]) == 2:
                v = c
                break
        if v is None:
            return None
        a, b = sorted(adj[v])
        adj[a].discard(v)
        adj[b].discard(v)
        alive.discard(v)
        stack.append((v, a, b))
        if b not in adj[a]:
            adj[a].add(b)
            adj[b].add(a)
        if len(adj[a]) < 2 or len(adj[b]) < 2:
            return None
        for w in (a, b):
            if len(adj[w]) == 2:
                queue.append(w)
    x, y, z = sorted(alive)
    if not (y in adj[x] and z in adj[x] and z in adj[y]):
        return None
    succ = {x: y, y: z, z: x}
    for v, a, b in reversed(stack):
        if succ.get(a) == b:
            succ[a], succ[v] = v, b
        elif succ.get(b) == a:
            succ[b], succ[v] = v, a
        else:
            return None
    order = [0]
    cur = succ[0]
    while cur != 0 and len(order) <= n:
        order.append(cur)
        cur = succ[cur]
    if len(order) != n:
        return None
    cand = OClassification(HOP, tuple(order))
    return tuple(order) if cand.certifies(g) else None


def _edhop1_completion(g: ColoredGraph, budget: int) -> Optional[tuple[tuple[int, ...], tuple[int, int]]]:
    """Search for a spanning path whose endpoint closure is outerplanar;
    returns (completion cycle, missing edge) of a 1-edge completion to HOP."""
    n = g.n
    if n < 3 or not g.is_connected() or g.edge_count() > 2 * n - 4:
        return None
    nodes = 0
    in_path = [False] * n
    path: list[int] = []

    def validate() -> Optional[tuple[tuple[int, ...], tuple[int, int]]]:
        u, v = path[0], path[-1]
        if g.has_edge(u, v):
            return None
        cand = OClassification(EDHOP1, tuple(path), (_norm(u, v),))
        if cand.certifies(g):
            return tuple(path), _norm(u, v)
        return None

    def extend() -> Optional[tuple]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"spanning-path search exceeded {budget} nodes")
        if len(path) == n:
            if path[0] < path[-1]:
                return validate()
            return None
        for u in sorted(g.adj[path[-1]]):
            if not in_path[u]:
                path.append(u)
                in_path[u] = True
                got = extend()
                in_path[u] = False
                path.pop()
                if got:
                    return got
        return None

    for s in range(n):
        path = [s]
        in_path = [False] * n
        in_path[s] = True
        got = extend()
        if got:
            return got
    return None


def classify_o(g: ColoredGraph, budget: int = 2_000_000) -> OClassification:
    """Exhaustive membership test for the class O, with certificate."""
    if g.n == 0:
        raise GraphError("empty graph")
    if not g.is_connected():
        return OClassification(NOT_IN_O, None)
    cyc = _hop_cycle(g)
    if cyc is not None:
        return OClassification(HOP, cyc)
    one = _edhop1_completion(g, budget)
    if one is not None:
        return OClassification(EDHOP1, one[0], (one[1],))
    if g.edge_count() <= 2 * g.n - 5:
        non_edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)
                     if not g.has_edge(u, v)]
        for d in non_edges:
            two = _edhop1_completion(g.with_edges_added([d]), budget)
            if two is not None:
                cyc2, c = two
                pairs = tuple(sorted((c, d)))
                return OClassification(EDHOP2, cyc2, pairs)
    return OClassification(NOT_IN_O, None)


# -- the constructive class-O separator ----------------------------------------


def _runs_of(flap: Sequence[int], pos: dict[int, int], n: int) -> list[list[int]]:
    """Maximal blocks of cycle-consecutive vertices of the flap, each listed in
    cycle order, blocks ordered cyclically."""
    ps = sorted(pos[v] for v in flap)
    runs: list[list[int]] = []
    cur = [ps[0]]
    for p in ps[1:]:
        if p == cur[-1] + 1:
            cur.append(p)
        else:
            runs.append(cur)
            cur = [p]
    runs.append(cur)
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == n - 1:
        runs[0] = runs.pop() + runs[0]
    return runs


def _run_certificate(g: ColoredGraph, flap: Sequence[int], cycle: Sequence[int],
                     pos: dict[int, int],
                     missing: set[tuple[int, int]]) -> Optional[OClassification]:
    """Try to certify membership of the flap by traversing its cycle blocks in
    order; None when more than two edge additions would be needed."""
    n = len(cycle)
    runs = _runs_of(flap, pos, n)
    order: list[int] = []
    additions: set[tuple[int, int]] = set()
    for run in runs:
        verts = [cycle[p % n] for p in run]
        for a, b in zip(verts, verts[1:]):
            if not g.has_edge(a, b):
                pair = _norm(a, b)
                if pair not in missing:
                    return None
                additions.add(pair)
        order.extend(verts)
    if len(order) >= 3:
        junctions = [(runs[i][-1], runs[(i + 1) % len(runs)][0])
                     for i in range(len(runs))]
        if len(runs) == 1:
            junctions = [(runs[0][-1], runs[0][0])]
        for pe, ps_ in junctions:
            a, b = cycle[pe % n], cycle[ps_ % n]
            if not g.has_edge(a, b):
                additions.add(_norm(a, b))
    if len(additions) > 2:
        return None
    tag = (HOP, EDHOP1, EDHOP2)[len(additions)]
    cert = OClassification(tag, tuple(order), tuple(sorted(additions)), exact=False)
    sub, idx = g.induced(flap)
    local = OClassification(tag, tuple(idx[v] for v in order),
                            tuple(sorted(_norm(idx[a], idx[b]) for a, b in additions)),
                            exact=False)
    return local if local.certifies(sub) else None


def _find_split_pair(n: int, chords: list[tuple[int, int]]) -> Optional[tuple[int, int]]:
    """Positions (i,j) on the cycle such that both open arcs have at most 2n/3
    vertices and no chord joins the two arcs."""
    balanced_chord = None
    for p, q in chords:
        arc1, arc2 = q - p - 1, n - (q - p) - 1
        if 3 * arc1 <= 2 * n and 3 * arc2 <= 2 * n:
            score = max(arc1, arc2)
            if balanced_chord is None or score < balanced_chord[0]:
                balanced_chord = (score, (p, q))
    if balanced_chord is not None:
        return balanced_chord[1]

    def separates(i: int, gap: int, chord: tuple[int, int]) -> bool:
        def side(x: int) -> int:
            rel = (x - i) % n
            if rel == 0 or rel == gap:
                return 0
            return 1 if rel < gap else 2
        a, b = side(chord[0]), side(chord[1])
        return {a, b} == {1, 2}

    gaps = [gp for gp in range(2, n // 2 + 1)
            if 3 * (gp - 1) <= 2 * n and 3 * (n - gp - 1) <= 2 * n]
    gaps.sort(key=lambda gp: abs(gp - n / 2))
    for gap in gaps:
        for i in range(n):
            j = (i + gap) % n
            if all(not separates(i, gap, c) for c in chords):
                return _norm(i, j)
    return None


def _exhaustive_o_separator(g: ColoredGraph, budget: int = 2_000_000) -> SeparatorResult:
    n = g.n
    if n > 16:
        raise BudgetExceeded("exhaustive separator search capped at n <= 16")
    for k in range(1, min(5, n) + 1):
        for xs in combinations(range(n), k):
            dec = flap_decompose(g, xs)
            if len(dec.flaps) > 7:
                continue
            if any(3 * len(f) > 2 * n for f in dec.flaps):
                continue
            tags = []
            ok = True
            for f in dec.flaps:
                sub, _ = g.induced(f)
                cls = classify_o(sub, budget)
                if not cls.in_class():
                    ok = False
                    break
                tags.append(cls)
            if ok:
                return _make_result(g, list(xs), Fraction(2, 3), tuple(tags))
    raise SeparatorError("no size-5 separator with flaps in the class exists")


def class_o_separator(g: ColoredGraph,
                      classification: Optional[OClassification] = None,
                      fallback_cap: int = 16) -> SeparatorResult:
    """Separator of size at most 5 with at most 7 flaps, each flap of at most
    2n/3 vertices and again in the class O (annotated with certificates).

    Works on the completion cycle: a balanced split pair is located by direct
    scan, each flap is certified by traversing its cycle blocks, and the
    separator is extended by up to three extra vertices in the one
    configuration where a flap would need three additions.  Small or
    degenerate inputs fall back to exhaustive subset search.
    """
    n = g.n
    if n < 2:
        raise SeparatorError("separator construction requires n >= 2")
    cls = classification if classification is not None else classify_o(g)
    if not cls.in_class():
        raise SeparatorError("input graph is not in the supported class")
    if n <= 6:
        return _exhaustive_o_separator(g)

    cycle = list(cls.witness_cycle)
    missing = {_norm(*e) for e in cls.missing_edges}
    pos = {v: i for i, v in enumerate(cycle)}
    chords = []
    for u, v in g.edges():
        d = abs(pos[u] - pos[v])
        if d != 1 and d != n - 1:
            chords.append(_norm(pos[u], pos[v]))
    pair = _find_split_pair(n, chords)
    if pair is not None:
        x = sorted((cycle[pair[0]], cycle[pair[1]]))
        for attempt in range(2):
            dec = flap_decompose(g, x)
            tags: list[OClassification] = []
            bad = None
            for f in dec.flaps:
                cert = _run_certificate(g, f, cycle, pos, missing)
                if cert is None:
                    bad = f
                    break
                tags.append(cert)
            if bad is None:
                if len(x) <= 5 and len(dec.flaps) <= 7 \
                        and all(3 * len(f) <= 2 * n for f in dec.flaps):
                    return _make_result(g, x, Fraction(2, 3), tuple(tags))
                break
            if attempt == 1:
                break
            extended = _extend_split(g, bad, cycle, pos, missing, x)
            if extended is None:
                break
            x = extended
    if n <= fallback_cap:
        return _exhaustive_o_separator(g)
    raise SeparatorError(
        f"constructive separator failed on n={n}; instance logged")


def _extend_split(g: ColoredGraph, flap: Sequence[int], cycle: Sequence[int],
                  pos: dict[int, int], missing: set[tuple[int, int]],
                  x: list[int]) -> Optional[list[int]]:
    """Grow the split pair when one flap is a single block containing both
    missing edges: add the two facing endpoints of the innermost connecting
    edge, and a third when the outer segments are also joined."""
    n = len(cycle)
    runs = _runs_of(flap, pos, n)
    if len(runs) != 1:
        log.warning("separator extension: unexpected multi-block flap %s", flap)
        return None
    seq = [cycle[p % n] for p in runs[0]]
    cuts = [i for i in range(len(seq) - 1)
            if _norm(seq[i], seq[i + 1]) in missing]
    if len(cuts) != 2:
        log.warning("separator extension: expected two interior missing edges in %s", seq)
        return None

    def segments(s: list[int]) -> tuple[list[int], list[int], list[int]]:
        c = [i for i in range(len(s) - 1) if _norm(s[i], s[i + 1]) in missing]
        return s[:c[0] + 1], s[c[0] + 1:c[1] + 1], s[c[1] + 1:]

    def connected(a: list[int], b: list[int]) -> bool:
        bs = set(b)
        return any(w in bs for v in a for w in g.adj[v])

    p_seg, q_seg, r_seg = segments(seq)
    if not connected(r_seg, q_seg):
        if not connected(p_seg, q_seg):
            log.warning("separator extension: middle segment unattached in %s", seq)
            return None
        seq = list(reversed(seq))
        p_seg, q_seg, r_seg = segments(seq)

    q_set, r_set = set(q_seg), set(r_seg)
    e1 = next(v for v in reversed(r_seg) if any(w in q_set for w in g.adj[v]))
    e2 = next(v for v in q_seg if any(w in r_set for w in g.adj[v]))
    if not g.has_edge(e1, e2):
        log.warning("separator extension: facing endpoints %s,%s not adjacent "
                    "in instance %s", e1, e2, g.to_json())
        return None
    if connected(p_seg, r_seg):
        f = next(v for v in reversed(p_seg) if any(w in r_set for w in g.adj[v]))
        return sorted(set(x) | {e1, e2, f})
    return sorted(set(x) | {e2})


def flap_subproblem(g: ColoredGraph, result: SeparatorResult,
                    i: int) -> tuple[ColoredGraph, Optional[OClassification]]:
    """The i-th flap as a standalone graph plus its membership annotation."""
    sub, _ = g.induced(result.flaps[i])
    tag = result.tags[i] if result.tags is not None else None
    return sub, tag


# -- brute-force minimum separator ----------------------------------------------


def brute_min_separator(g: ColoredGraph, epsilon: Fraction, size_cap: int,
                        n_cap: int = 24) -> Optional[SeparatorResult]:
    """Minimum-cardinality vertex set whose flaps all have at most epsilon*n
    vertices; ties go to the lexicographically least set.  None on failure."""
    eps = Fraction(epsilon)
    if not (0 < eps < 1):
        raise SeparatorError("epsilon must lie strictly between 0 and 1")
    if g.n > n_cap:
        raise BudgetExceeded(f"brute_min_separator capped at n <= {n_cap}")
    for k in range(0, min(size_cap, g.n) + 1):
        for xs in combinations(range(g.n), k):
            dec = flap_decompose(g, xs)
            if all(len(f) * eps.denominator <= eps.numerator * g.n for f in dec.flaps):
                return _make_result(g, list(xs), eps, None)
    return None
