"""Colored graphs and the structural primitives built on them.

A colored graph is a finite simple graph (irreflexive, symmetric adjacency)
whose vertices carry finite sets of integer color ids.  Everything here is
immutable; operations return fresh objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class GraphError(ValueError):
    """Malformed graph input or out-of-range vertex id."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search refused to run past its configured budget."""


INF = math.inf


@dataclass(frozen=True)
class ColoredGraph:
    n: int
    adj: tuple[frozenset[int], ...]
    colors: tuple[frozenset[int], ...]

    @staticmethod
    def build(n: int,
              edges: Iterable[tuple[int, int]],
              colors: Optional[Sequence[Iterable[int]]] = None) -> "ColoredGraph":
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u} rejected")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u},{v}) rejected")
            seen.add(key)
            nbrs[u].add(v)
            nbrs[v].add(u)
        if colors is None:
            cols = tuple(frozenset() for _ in range(n))
        else:
            if len(colors) != n:
                raise GraphError(f"colors list has length {len(colors)}, expected {n}")
            cols = tuple(frozenset(int(c) for c in cs) for cs in colors)
            for cs in cols:
                if any(c < 0 for c in cs):
                    raise GraphError("color ids must be non-negative")
        return ColoredGraph(n, tuple(frozenset(s) for s in nbrs), cols)

    # -- basic queries ----------------------------------------------------

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def max_color(self) -> int:
        """Largest color id in use, or -1 when the graph is uncolored."""
        best = -1
        for cs in self.colors:
            for c in cs:
                if c > best:
                    best = c
        return best

    # -- connectivity -----------------------------------------------------

    def components(self, within: Optional[frozenset[int]] = None) -> list[tuple[int, ...]]:
        """Connected components, each sorted, ordered by least vertex id."""
        pool = set(within) if within is not None else set(range(self.n))
        comps: list[tuple[int, ...]] = []
        while pool:
            start = min(pool)
            stack = [start]
            pool.discard(start)
            comp = {start}
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if u in pool:
                        pool.discard(u)
                        comp.add(u)
                        stack.append(u)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.is_connected() and self.edge_count() == self.n - 1

    # -- derivation -------------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> tuple["ColoredGraph", dict[int, int]]:
        """Induced subgraph on `vertices` (sorted); returns (graph, old->new map)."""
        vs = sorted(set(vertices))
        for v in vs:
            if not (0 <= v < self.n):
                raise GraphError(f"vertex {v} out of range")
        idx = {v: i for i, v in enumerate(vs)}
        edges = [(idx[u], idx[v]) for u, v in self.edges() if u in idx and v in idx]
        cols = [self.colors[v] for v in vs]
        return ColoredGraph.build(len(vs), edges, cols), idx

    def with_extra_colors(self, overlay: Mapping[int, Iterable[int]]) -> "ColoredGraph":
        cols = list(self.colors)
        for v, extra in overlay.items():
            cols[v] = cols[v] | frozenset(int(c) for c in extra)
        return ColoredGraph(self.n, self.adj, tuple(cols))

    def with_edges_added(self, new_edges: Iterable[tuple[int, int]]) -> "ColoredGraph":
        return ColoredGraph.build(self.n, list(self.edges()) + list(new_edges), self.colors)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        payload: dict = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if any(self.colors):
            payload["colors"] = [sorted(cs) for cs in self.colors]
        return json.dumps(payload)

    @staticmethod
    def from_json(text: str) -> "ColoredGraph":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid graph JSON: {exc}") from exc
        if not isinstance(payload, dict) or "n" not in payload:
            raise GraphError("graph JSON must be an object with an 'n' field")
        edges = [tuple(e) for e in payload.get("edges", [])]
        return ColoredGraph.build(int(payload["n"]), edges, payload.get("colors"))

    @staticmethod
    def from_edge_list(text: str) -> "ColoredGraph":
        """Plain text: first line `n m`, then m lines `u v`."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphError("empty edge-list input")
        head = lines[0].split()
        if len(head) != 2:
            raise GraphError("edge-list header must be 'n m'")
        n, m = int(head[0]), int(head[1])
        if len(lines) - 1 != m:
            raise GraphError(f"expected {m} edge lines, found {len(lines) - 1}")
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphError(f"bad edge line: {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return ColoredGraph.build(n, edges)

    def to_dot(self, highlight: Iterable[int] = (), name: str = "g") -> str:
        marked = set(highlight)
        out = [f"graph {name} {{"]
        for v in range(self.n):
            attrs = []
            if self.colors[v]:
                attrs.append(f'label="{v}:{",".join(map(str, sorted(self.colors[v])))}"')
            if v in marked:
                attrs.append("style=filled fillcolor=tomato")
            out.append(f"  {v}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";")
        for u, v in self.edges():
            out.append(f"  {u} -- {v};")
        out.append("}")
        return "\n".join(out)


def load_graph(path: str) -> ColoredGraph:
    """Load a graph file, sniffing JSON vs edge-list format."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return ColoredGraph.from_json(text)
    return ColoredGraph.from_edge_list(text)


# -- distances -------------------------------------------------------------


def distance(g: ColoredGraph, u: int, target) -> float:
    """BFS distance from u to a vertex or to the nearest vertex of a set.

    Returns math.inf when unreachable, per d(u,X) = min over the set.
    """
    if not (0 <= u < g.n):
        raise GraphError(f"vertex {u} out of range")
    goal = {target} if isinstance(target, int) else set(target)
    for t in goal:
        if not (0 <= t < g.n):
            raise GraphError(f"vertex {t} out of range")
    if not goal:
        return INF
    if u in goal:
        return 0
    dist = {u: 0}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for w in frontier:
            for x in g.adj[w]:
                if x not in dist:
                    if x in goal:
                        return d
                    dist[x] = d
                    nxt.append(x)
        frontier = nxt
    return INF


def distances_within(g: ColoredGraph, source: int, allowed: frozenset[int]) -> dict[int, int]:
    """BFS distances from source using only vertices in `allowed`."""
    if source not in allowed:
        raise GraphError("source must lie in the allowed set")
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for w in frontier:
            for x in g.adj[w]:
                if x in allowed and x not in dist:
                    dist[x] = dist[w] + 1
                    nxt.append(x)
        frontier = nxt
    return dist


# -- flap decomposition ------------------------------------------------------


@dataclass(frozen=True)
class FlapDecomposition:
    """X-flaps of a graph with the adjacency-to-X recoloring.

    flaps[i] lists original vertex ids (sorted); recolored[i] is the induced
    colored graph on flaps[i] (vertex j of recolored[i] is flaps[i][j]) with
    fresh color fresh_colors[k] added to every vertex adjacent to x_order[k].
    """
    base: ColoredGraph
    x_order: tuple[int, ...]
    flaps: tuple[tuple[int, ...], ...]
    recolored: tuple[ColoredGraph, ...]
    fresh_colors: tuple[int, ...]

    def flap_of(self, v: int) -> Optional[int]:
        for i, f in enumerate(self.flaps):
            if v in f:
                return i
        return None


def flap_decompose(g: ColoredGraph, x: Sequence[int],
                   fresh_base: Optional[int] = None) -> FlapDecomposition:
    """Split g - X into connected flaps and recolor them against X.

    Flaps come in canonical order (least contained vertex id).  Fresh colors
    A_1..A_k default to consecutive ids above every color used in g; pass
    fresh_base when two graphs must agree on the meaning of the A_i.
    """
    xs = list(x)
    if len(set(xs)) != len(xs):
        raise GraphError("separator vertices must be distinct")
    for v in xs:
        if not (0 <= v < g.n):
            raise GraphError(f"vertex {v} out of range")
    if fresh_base is None:
        fresh_base = g.max_color() + 1
    fresh = tuple(fresh_base + i for i in range(len(xs)))
    rest = frozenset(range(g.n)) - frozenset(xs)
    flaps = tuple(g.components(within=rest))
    recolored = []
    for f in flaps:
        overlay: dict[int, set[int]] = {}
        for i, xv in enumerate(xs):
            for v in f:
                if g.has_edge(v, xv):
                    overlay.setdefault(v, set()).add(fresh[i])
        sub, idx = g.with_extra_colors(overlay).induced(f)
        recolored.append(sub)
    return FlapDecomposition(g, tuple(xs), flaps, tuple(recolored), fresh)


# -- partial isomorphism -----------------------------------------------------


def check_partial_isomorphism(g: ColoredGraph, h: ColoredGraph,
                              pairs: Sequence[tuple[int, int]]) -> bool:
    """True iff the pairing satisfies the equality condition and preserves
    adjacency, non-adjacency and colors in both directions."""
    for u, v in pairs:
        if not (0 <= u < g.n and 0 <= v < h.n):
            raise GraphError("pair references an out-of-range vertex")
    for i in range(len(pairs)):
        ui, vi = pairs[i]
        if g.colors[ui] != h.colors[vi]:
            return False
        for j in range(i):
            uj, vj = pairs[j]
            if (ui == uj) != (vi == vj):
                return False
            if g.has_edge(ui, uj) != h.has_edge(vi, vj):
                return False
    return True


# -- isomorphism -------------------------------------------------------------


def _refine(g: ColoredGraph, h: ColoredGraph) -> Optional[tuple[list[int], list[int]]]:
    """Joint color refinement; None when the refined histograms differ."""
    def initial(gr):
        return [(tuple(sorted(gr.colors[v])), len(gr.adj[v])) for v in range(gr.n)]

    la, lb = initial(g), initial(h)
    table: dict = {}
    la = [table.setdefault(s, len(table)) for s in la]
    lb = [table.setdefault(s, len(table)) for s in lb]
    while True:
        if sorted(la) != sorted(lb):
            return None
        table = {}
        na = [table.setdefault((la[v], tuple(sorted(la[u] for u in g.adj[v]))), len(table))
              for v in range(g.n)]
        nb = [table.setdefault((lb[v], tuple(sorted(lb[u] for u in h.adj[v]))), len(table))
              for v in range(h.n)]
        if len(set(na)) == len(set(la)):
            if sorted(na) != sorted(nb):
                return None
            return na, nb
        la, lb = na, nb


def _forest_code(g: ColoredGraph) -> Optional[tuple]:
    """Canonical code for a colored forest; None if g has a cycle."""
    if g.edge_count() >= g.n and g.n > 0:
        return None
    comps = g.components()
    if sum(len(c) - 1 for c in comps) != g.edge_count():
        return None  # some component has a cycle

    def tree_code(comp: tuple[int, ...]) -> tuple:
        inside = set(comp)
        if len(comp) == 1:
            v = comp[0]
            return ("uni", (tuple(sorted(g.colors[v])), ()))
        # strip leaves to find the one or two centers
        deg = {v: sum(1 for u in g.adj[v] if u in inside) for v in comp}
        layer = [v for v in comp if deg[v] <= 1]
        remaining = len(comp)
        removed = set()
        while remaining > 2:
            nxt = []
            for v in layer:
                removed.add(v)
                remaining -= 1
                for u in g.adj[v]:
                    if u in inside and u not in removed:
                        deg[u] -= 1
                        if deg[u] == 1:
                            nxt.append(u)
            layer = nxt
        centers = [v for v in comp if v not in removed]

        def rooted(v: int, parent: Optional[int]) -> tuple:
            kids = sorted(rooted(u, v) for u in g.adj[v]
                          if u in inside and u != parent)
            return (tuple(sorted(g.colors[v])), tuple(kids))

        # tag by center count so codes of either shape stay comparable
        if len(centers) == 1:
            return ("uni", rooted(centers[0], None))
        a, b = centers
        ca, cb = rooted(a, b), rooted(b, a)
        return ("bi", min((ca, cb), (cb, ca)))

    return tuple(sorted(tree_code(c) for c in comps))


def _match_backtrack(g: ColoredGraph, h: ColoredGraph,
                     la: list[int], lb: list[int],
                     collect_all: bool = False,
                     limit: int = 1 << 30) -> list[dict[int, int]]:
    """Label-guided backtracking search for isomorphisms g -> h."""
    n = g.n
    by_label: dict[int, list[int]] = {}
    for v in range(h.n):
        by_label.setdefault(lb[v], []).append(v)
    order: list[int] = []
    placed = [False] * n
    # order vertices to keep the frontier connected where possible
    label_size = {lab: len(vs) for lab, vs in by_label.items()}
    while len(order) < n:
        cands = [v for v in range(n) if not placed[v]]
        anchored = [v for v in cands if any(placed[u] for u in g.adj[v])]
        pool = anchored or cands
        v = min(pool, key=lambda v: (label_size[la[v]], v))
        order.append(v)
        placed[v] = True

    results: list[dict[int, int]] = []
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            results.append(dict(mapping))
            return not collect_all or len(results) >= limit
        v = order[i]
        for w in by_label[la[v]]:
            if w in used:
                continue
            ok = True
            for u in g.adj[v]:
                if u in mapping and not h.has_edge(mapping[u], w):
                    ok = False
                    break
            if ok:
                # non-adjacency must be preserved too
                for u in mapping:
                    if not g.has_edge(v, u) and h.has_edge(w, mapping[u]):
                        ok = False
                        break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    extend(0)
    return results


def find_isomorphism(g: ColoredGraph, h: ColoredGraph) -> Optional[dict[int, int]]:
    """A color- and adjacency-preserving bijection g -> h, or None."""
    if g.n != h.n or g.edge_count() != h.edge_count():
        return None
    if sorted(map(len, g.adj)) != sorted(map(len, h.adj)):
        return None
    refined = _refine(g, h)
    if refined is None:
        return None
    res = _match_backtrack(g, h, refined[0], refined[1])
    return res[0] if res else None


def are_isomorphic(g: ColoredGraph, h: ColoredGraph) -> bool:
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False
    cg = _forest_code(g)
    if cg is not None:
        return cg == _forest_code(h)
    return find_isomorphism(g, h) is not None


def automorphisms(g: ColoredGraph, limit: int = 50000) -> list[dict[int, int]]:
    """All automorphisms of g, up to `limit` of them."""
    refined = _refine(g, g)
    assert refined is not None
    return _match_backtrack(g, g, refined[0], refined[1], collect_all=True, limit=limit)


def iso_invariant_key(g: ColoredGraph) -> tuple:
    """Cheap isomorphism-invariant bucket key (not a canonical form)."""
    refined = _refine(g, g)
    assert refined is not None
    la = refined[0]
    hist = tuple(sorted((la.count(c) for c in set(la))))
    degs = tuple(sorted(len(a) for a in g.adj))
    cols = tuple(sorted(tuple(sorted(c)) for c in g.colors))
    return (g.n, g.edge_count(), degs, cols, hist)


def group_by_isomorphism(graphs: Sequence[ColoredGraph]) -> list[list[int]]:
    """Partition indices of `graphs` into isomorphism classes."""
    buckets: dict[tuple, list[int]] = {}
    forest_codes: dict[int, Optional[tuple]] = {}
    for i, gr in enumerate(graphs):
        forest_codes[i] = _forest_code(gr)
        buckets.setdefault(iso_invariant_key(gr), []).append(i)
    classes: list[list[int]] = []
    for members in buckets.values():
        reps: list[list[int]] = []
        for i in members:
            placed = False
            for cls in reps:
                j = cls[0]
                ci, cj = forest_codes[i], forest_codes[j]
                if ci is not None and cj is not None:
                    same = ci == cj
                else:
                    same = find_isomorphism(graphs[i], graphs[j]) is not None
                if same:
                    cls.append(i)
                    placed = True
                    break
            if not placed:
                reps.append([i])
        classes.extend(reps)
    classes.sort(key=lambda c: c[0])
    return classes


# -- flap similarity ---------------------------------------------------------


@dataclass(frozen=True)
class FlapSimilarity:
    decomposition: FlapDecomposition
    groups: tuple[tuple[int, ...], ...]
    max_class_size: int


def similar_flap_census(g: ColoredGraph, x: Sequence[int]) -> FlapSimilarity:
    """Group X-flaps into similarity classes.

    Two flaps are similar when the identity on X extends to an isomorphism of
    the induced subgraphs on X plus each flap, which is equivalent to their
    recolored versions being isomorphic as colored graphs.
    """
    dec = flap_decompose(g, x)
    classes = group_by_isomorphism(dec.recolored)
    groups = tuple(tuple(c) for c in classes)
    max_size = max((len(c) for c in groups), default=0)
    return FlapSimilarity(dec, groups, max_size)


def vertex_orbits(g: ColoredGraph, auts: Optional[list[dict[int, int]]] = None) -> list[int]:
    """orbit[v] = least vertex in v's automorphism orbit."""
    if auts is None:
        auts = automorphisms(g)
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in auts:
        for v, w in a.items():
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[max(rv, rw)] = min(rv, rw)
    return [find(v) for v in range(g.n)]
