"""Separator-driven Spoiler agents, round-bound calculators, and synthesis of
distinguishing formulas from exhaustive play.

The main agent walks a stack of restricted positions: at each level it pebbles
a separator of its current G-side region, compares the multisets of recolored
flaps on both sides, and either probes a surplus class until Duplicator is
caught (then bisects inside a flap) or spends one move on the other side to
force a doubled flap (then bisects).  The starred variant replaces the second
case by probing a deficit class, which recurses once more but keeps each
level's probing cost bounded by the similar-flap count.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from fodef.formulas import (
    Adj, Col, Eq, Exists, Forall, Formula, Not,
    conjunction, disjunction,
)
from fodef.game import (
    Agent, GameState, RUNNING, SIDE_G, SIDE_H, SPOILER_WON,
    new_game, step,
)
from fodef.graphs import (
    BudgetExceeded, ColoredGraph,
    distances_within, group_by_isomorphism,
)
from fodef.separators import (
    OClassification, brute_min_separator, class_o_separator, classify_o,
    tree_centroid_separator,
)


class StrategyError(RuntimeError):
    """The position violates a precondition or an internal guarantee."""


class HypothesisError(StrategyError):
    """A bisection start position does not satisfy its hypothesis."""


# -- depth and round-bound calculators -------------------------------------------


def choose_depth(n: int, m_or_s: int, epsilon, variant: str = "S"):
    """Recursion depth (variants 'S' and 'S_star', exact integer ceilings) or
    the real-valued alternation allowance (variant 'a')."""
    eps = Fraction(epsilon)
    if not (0 < eps < 1):
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if n < 1:
        raise ValueError("n must be positive")
    if variant == "a":
        return 2 * math.log2(n) / math.log2(1 / eps) + 1
    if m_or_s < 1:
        raise ValueError("flap parameter must be positive")
    if variant == "S":
        ratio = Fraction(n, m_or_s)
    elif variant == "S_star":
        ratio = Fraction(n, m_or_s + 1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    t = 0
    power = Fraction(1)
    inv = 1 / eps
    while power < ratio:
        power *= inv
        t += 1
    return t


def _k_sum(k, n: int, epsilon: Fraction, t: int) -> float:
    """Sum of k(eps^i * n) for i < t; k constant or callable over reals."""
    if callable(k):
        eps = float(epsilon)
        return sum(k(eps ** i * n) for i in range(t))
    return k * t


def bound(name: str, **params) -> float:
    """Closed-form round bounds by name (see BOUND_NAMES)."""
    log2 = math.log2
    if name == "lemma36":
        n, m, eps = params["n"], params["m"], Fraction(params["epsilon"])
        k = params["k"]
        t = params.get("t")
        if t is None:
            t = choose_depth(n, m, eps, "S")
        return _k_sum(k, n, eps, t) + m * (t + 1) + log2(n) + 2
    if name == "lemma37":
        n, m, eps, k = params["n"], params["m"], Fraction(params["epsilon"]), params["k"]
        return ((k + m) / log2(1 / eps) + 1) * log2(n) + m + 2
    if name == "thm41":
        n, d = params["n"], params["d"]
        c_d = (d + 1) / log2(1.5) + 1
        return c_d * log2(n) + d + 2
    if name == "thm43":
        n = params["n"]
        c = 12 / log2(1.5) + 1
        return c * log2(n) + 9
    if name == "lemma52":
        n, s, eps = params["n"], params["s"], Fraction(params["epsilon"])
        k = params["k"]
        t = params.get("t")
        if t is None:
            t = choose_depth(n, s, eps, "S_star")
        return _k_sum(k, n, eps, t) + (s + 1) * (t + 1) + log2(n) + 2
    if name == "lemma53":
        n, s, eps = params["n"], params["s"], Fraction(params["epsilon"])
        c, delta = params["c"], params["delta"]
        return (c / (1 - float(eps) ** delta) * n ** delta
                + ((s + 1) / log2(1 / eps) + 1) * log2(n) + s + 3)
    if name == "thm55_all":
        n, hh, dd = params["n"], params["H"], params["Delta"]
        return ((2 + math.sqrt(2)) * hh ** 1.5 * math.sqrt(n)
                + (dd + 2) * (log2(n) + 1) + 1)
    if name == "thm55_planar":
        n, dd = params["n"], params["Delta"]
        return ((4.5 * math.sqrt(2) + 3 * math.sqrt(3)) * math.sqrt(n)
                + ((dd + 1) / log2(1.5) + 1) * log2(n) + dd + 3)
    if name == "thm55_genus":
        n, dd, gg, c = params["n"], params["Delta"], params["g"], params["c"]
        return (c * math.sqrt(gg) * math.sqrt(n)
                + ((dd + 1) / log2(1.5) + 1) * log2(n) + dd + 3)
    raise ValueError(f"unknown bound {name!r}")


BOUND_NAMES = ("lemma36", "lemma37", "thm41", "thm43", "lemma52", "lemma53",
               "thm55_all", "thm55_planar", "thm55_genus")


# -- configuration and traces ------------------------------------------------------


@dataclass(frozen=True)
class StrategyConfig:
    provider: str = "tree_centroid"       # tree_centroid | class_o | brute_min
    variant: str = "S"                    # S | S_star
    epsilon: Fraction = Fraction(2, 3)
    depth: Optional[int] = None           # None: derived from n and m/s bounds
    m_bound: Optional[int] = None         # flap-count bound for depth selection
    s_bound: Optional[int] = None         # similar-flap bound (starred variant)
    brute_size_cap: int = 5

    def k_of(self, n: int) -> int:
        if self.provider == "tree_centroid":
            return 1
        if self.provider == "class_o":
            return 5
        return min(self.brute_size_cap, n)


@dataclass
class StrategyTrace:
    records: list = field(default_factory=list)
    events: list = field(default_factory=list)
    sep_sizes: list = field(default_factory=list)
    max_flaps: int = 0
    max_similar: int = 0

    def record(self, **kw):
        self.records.append(kw)

    def cases(self) -> list[str]:
        return [r["case"] for r in self.records]

    def to_json_dict(self) -> dict:
        return {"records": self.records, "events": self.events,
                "sep_sizes": self.sep_sizes, "max_flaps": self.max_flaps}


# -- bisection play ---------------------------------------------------------------


class _Bisection:
    """Shrinks the distance between two same-side pebbles whose partners lie
    in different components of the other graph minus its blocked set.

    anchors are ((p1_play, p1_other), (p2_play, p2_other)); play vertices
    must share the component `region` of the play graph minus blocked_play.
    """

    def __init__(self, machine: "StrategyMachine", play_side: str,
                 region: frozenset[int], anchors, blocked_play: frozenset[int],
                 blocked_other: frozenset[int]):
        self.m = machine
        self.side = play_side
        self.region = frozenset(region)
        self.blocked_other = frozenset(blocked_other)
        (u1, o1), (u2, o2) = anchors
        self.us = [u1, u2]
        self.os = [o1, o2]
        self.play_graph = machine.g if play_side == SIDE_G else machine.h
        self.other_graph = machine.h if play_side == SIDE_G else machine.g
        if u1 not in self.region or u2 not in self.region:
            raise HypothesisError("anchors must lie inside the play-side flap")
        if self.region & frozenset(blocked_play):
            raise HypothesisError("flap and blocked set overlap")
        if o1 in self.blocked_other or o2 in self.blocked_other:
            raise HypothesisError("partner pebbles must lie inside flaps")
        if self._same_component(o1, o2):
            raise HypothesisError("partners must lie in different flaps")
        self.budget = math.ceil(math.log2(max(2, len(self.region))))
        self.rounds = 0

    def _same_component(self, a: int, b: int) -> bool:
        if a in self.blocked_other or b in self.blocked_other:
            return False
        allowed = frozenset(range(self.other_graph.n)) - self.blocked_other
        return b in distances_within(self.other_graph, a, allowed)

    def next_move(self) -> tuple[str, int]:
        d1 = distances_within(self.play_graph, self.us[0], self.region)
        d2 = distances_within(self.play_graph, self.us[1], self.region)
        gap = d1.get(self.us[1])
        if gap is None or gap == 0:
            raise StrategyError("anchors must be distinct and connected in the flap")
        best = None
        for v in self.region:
            dv1, dv2 = d1.get(v), d2.get(v)
            if dv1 is None or dv2 is None or dv1 + dv2 != gap:
                continue  # midpoints are taken on a shortest path
            score = (max(dv1, dv2), v)
            if best is None or score < best:
                best = score
        self.rounds += 1
        return (self.side, best[1])

    def observe(self, pair: tuple[int, int]):
        u = pair[0] if self.side == SIDE_G else pair[1]
        v = pair[1] if self.side == SIDE_G else pair[0]
        for m in (0, 1):
            if not self._same_component(v, self.os[m]):
                self.us = [u, self.us[m]]
                self.os = [v, self.os[m]]
                return
        raise StrategyError("reply reunited both partners; the pairing "
                            "should already have broken")


# -- the strategy machine ----------------------------------------------------------


@dataclass
class _Frame:
    dom_g: frozenset[int]
    dom_h: frozenset[int]
    depth: int
    anchor: Optional[tuple[int, int]]          # pebble pair inside (dom_g, dom_h)
    enc_x: frozenset[int]                      # union of enclosing separators, G side
    enc_y: frozenset[int]
    overlay_g: dict = field(default_factory=dict)
    overlay_h: dict = field(default_factory=dict)
    cls: Optional[OClassification] = None      # membership certificate for dom_g
    phase: str = "init"
    case: str = ""
    queue: list = field(default_factory=list)
    x_order: list = field(default_factory=list)
    y_order: list = field(default_factory=list)
    flaps_g: list = field(default_factory=list)
    flaps_h: list = field(default_factory=list)
    class_of_g: list = field(default_factory=list)
    class_of_h: list = field(default_factory=list)
    fresh: list = field(default_factory=list)
    nclasses: int = 0
    provider_tags: Optional[list] = None       # (flap vertex set, annotation)
    target_class: Optional[int] = None
    probe_flaps: list = field(default_factory=list)
    probe_idx: int = 0
    local_pairs: list = field(default_factory=list)   # (u, v, gflap, hflap)
    visited_h: set = field(default_factory=set)
    final_hflap: Optional[int] = None
    pending_final: Optional[int] = None
    s0_dup_picks: list = field(default_factory=list)


class StrategyMachine:
    """Deterministic move generator advanced by observing each played pair."""

    def __init__(self, g: ColoredGraph, h: ColoredGraph, config: StrategyConfig,
                 classification: Optional[OClassification] = None):
        if not g.is_connected():
            raise StrategyError("the structured side must be connected")
        self.g = g
        self.h = h
        self.config = config
        self.trace = StrategyTrace()
        self.color_counter = max(g.max_color(), h.max_color()) + 1
        self.bisection: Optional[_Bisection] = None
        self.pending_move: Optional[tuple[str, int]] = None
        self.seen_rounds = 0
        cls = classification
        if config.provider == "tree_centroid" and not g.is_tree():
            raise StrategyError("tree separator requires a tree")
        if config.provider == "class_o":
            if cls is None:
                cls = classify_o(g)
            if not cls.in_class():
                raise StrategyError("graph is outside the supported class")
        top_depth = config.depth if config.depth is not None else self._auto_depth()
        self.frames: list[_Frame] = [
            _Frame(frozenset(range(g.n)), frozenset(range(h.n)), top_depth,
                   None, frozenset(), frozenset(), {}, {}, cls)]

    def _auto_depth(self) -> int:
        cfg = self.config
        n = max(1, self.g.n)
        if cfg.variant == "S_star":
            s = cfg.s_bound if cfg.s_bound is not None else max(1, self.g.max_degree())
            return choose_depth(n, s, cfg.epsilon, "S_star")
        if cfg.m_bound is not None:
            m = cfg.m_bound
        elif cfg.provider == "class_o":
            m = 7
        else:
            m = max(1, self.g.max_degree())
        return choose_depth(n, m, cfg.epsilon, "S")

    # -- separator providers -------------------------------------------------

    def _separate(self, frame: _Frame) -> tuple[list[int], Optional[list]]:
        """Separator of the current G-side region in original ids, plus
        per-flap membership annotations when the provider computes them.

        Annotations stay valid for the flap's standalone induced graph
        because induced() reindexes monotonically."""
        sub, idx = self.g.induced(frame.dom_g)
        back = {i: v for v, i in idx.items()}
        cfg = self.config
        if cfg.provider == "tree_centroid":
            res = tree_centroid_separator(sub)
            return sorted(back[i] for i in res.x), None
        if cfg.provider == "class_o":
            res = class_o_separator(sub, classification=frame.cls)
            tags = []
            for fi, f in enumerate(res.flaps):
                tags.append((frozenset(back[i] for i in f),
                             res.tags[fi] if res.tags else None))
            return sorted(back[i] for i in res.x), tags
        res = brute_min_separator(sub, cfg.epsilon, cfg.brute_size_cap)
        if res is None:
            raise StrategyError("no separator within the configured size cap")
        return sorted(back[i] for i in res.x), None

    # -- recoloring and flap classification -----------------------------------

    def _decompose(self, frame: _Frame):
        """Split both domains along the separator pairing and bucket the
        recolored flaps of both sides into isomorphism classes."""
        k = len(frame.x_order)
        fresh = [self.color_counter + i for i in range(k)]
        self.color_counter += k
        frame.fresh = fresh
        gs = frame.dom_g - frozenset(frame.x_order)
        hs = frame.dom_h - frozenset(frame.y_order)
        frame.flaps_g = [frozenset(c) for c in self.g.components(within=gs)]
        frame.flaps_h = [frozenset(c) for c in self.h.components(within=hs)]

        def recolored(graph, overlay, flap, sep_order):
            extra: dict[int, set[int]] = {}
            for v in flap:
                cs = set(overlay.get(v, ()))
                for i, xv in enumerate(sep_order):
                    if graph.has_edge(v, xv):
                        cs.add(fresh[i])
                if cs:
                    extra[v] = cs
            sub, _ = graph.with_extra_colors(extra).induced(flap)
            return sub

        gsubs = [recolored(self.g, frame.overlay_g, f, frame.x_order)
                 for f in frame.flaps_g]
        hsubs = [recolored(self.h, frame.overlay_h, f, frame.y_order)
                 for f in frame.flaps_h]
        classes = group_by_isomorphism(gsubs + hsubs)
        ng = len(gsubs)
        frame.class_of_g = [0] * ng
        frame.class_of_h = [0] * len(hsubs)
        for ci, members in enumerate(classes):
            for i in members:
                if i < ng:
                    frame.class_of_g[i] = ci
                else:
                    frame.class_of_h[i - ng] = ci
        frame.nclasses = len(classes)

    # -- public interface -------------------------------------------------------

    def fork(self) -> "StrategyMachine":
        memo = {id(self.g): self.g, id(self.h): self.h,
                id(self.config): self.config}
        return copy.deepcopy(self, memo)

    def next_move(self, state: GameState) -> tuple[str, int]:
        self._sync(state)
        if self.bisection is not None:
            move = self.bisection.next_move()
        else:
            move = self._plan()
        self.pending_move = move
        return move

    def sync(self, state: GameState):
        self._sync(state)

    # -- observation of replies ---------------------------------------------------

    def _sync(self, state: GameState):
        if self.seen_rounds < 0:  # pre-placed position: adopt it silently
            self.seen_rounds = len(state.pebbles)
            return
        for pair in state.pebbles[self.seen_rounds:]:
            self._observe(pair, state)
            self.seen_rounds += 1

    def _observe(self, pair: tuple[int, int], state: GameState):
        if self.bisection is not None:
            if state.status == RUNNING or self.seen_rounds + 1 < len(state.pebbles):
                self.bisection.observe(pair)
            return
        if self.pending_move is None:
            raise StrategyError("observed a round this agent did not plan")
        side, _ = self.pending_move
        self.pending_move = None
        if state.status != RUNNING and self.seen_rounds + 1 >= len(state.pebbles):
            if side == SIDE_H:
                self.trace.events.append(("OUT_LEMMA", self.seen_rounds + 1))
            return
        frame = self.frames[-1]
        if side == SIDE_G:
            v = pair[1]
            if v not in frame.dom_h and frame.anchor is not None:
                self.trace.events.append(("ESCAPE", self.seen_rounds + 1))
                self.bisection = _Bisection(self, SIDE_G, frame.dom_g,
                                            (pair, frame.anchor),
                                            frame.enc_x, frame.enc_y)
                return
            self._advance_g_phase(frame, pair)
        else:
            self._advance_h_phase(frame, pair, state)

    # -- planning -----------------------------------------------------------------

    def _plan(self) -> tuple[str, int]:
        frame = self.frames[-1]
        while True:
            if frame.phase == "init":
                self._enter(frame)
                continue
            if frame.phase in ("s0", "sep"):
                if frame.queue:
                    return (SIDE_G, frame.queue[0])
                if frame.phase == "s0":
                    frame.phase = "s0_final"
                    continue
                self._after_separator(frame)
                continue
            if frame.phase == "s0_final":
                return (SIDE_H, self._s0_final_vertex(frame))
            if frame.phase == "probe":
                if frame.probe_idx >= len(frame.probe_flaps):
                    if frame.case == "CASE1":
                        raise StrategyError(
                            "surplus-class probing exhausted without a deviation")
                    frame.phase = "case2_final"
                    continue
                return (SIDE_G, self._probe_vertex(frame))
            if frame.phase == "case2_final":
                return (SIDE_H, self._case2_final_vertex(frame))
            if frame.phase == "shortcut":
                return (SIDE_H, frame.queue[0])
            raise StrategyError(f"no move available in phase {frame.phase!r}")

    def _enter(self, frame: _Frame):
        n_dom = len(frame.dom_g)
        comps_h = self.h.components(within=frame.dom_h)
        if len(comps_h) > 1 and frame.anchor is None:
            frame.phase = "shortcut"
            frame.queue = [comps_h[0][0], comps_h[1][0]]
            self.trace.record(depth=frame.depth, case="HALVING", x=[],
                              note="disconnected_other_side")
            return
        if frame.depth <= 0 or self.config.k_of(n_dom) >= n_dom:
            frame.phase = "s0"
            pebbled = self._pebbled_g()
            frame.queue = [v for v in sorted(frame.dom_g) if v not in pebbled]
            if frame.anchor is not None and frame.anchor[1] in frame.dom_h:
                frame.s0_dup_picks.append(frame.anchor[1])
            self.trace.record(depth=frame.depth, case="S0", x=[], n=n_dom)
            return
        x, tags = self._separate(frame)
        frame.phase = "sep"
        frame.queue = list(x)
        frame.provider_tags = tags
        self.trace.sep_sizes.append(len(x))

    def _pebbled_g(self) -> set[int]:
        out = set()
        for fr in self.frames:
            out.update(fr.x_order)
            out.update(u for u, _, _, _ in fr.local_pairs)
            if fr.anchor:
                out.add(fr.anchor[0])
        return out

    def _pebbled_h(self) -> set[int]:
        out = set()
        for fr in self.frames:
            out.update(fr.y_order)
            out.update(v for _, v, _, _ in fr.local_pairs)
            if fr.anchor:
                out.add(fr.anchor[1])
            out.update(fr.s0_dup_picks)
            if fr.pending_final is not None:
                out.add(fr.pending_final)
        return out

    # -- reply handling ---------------------------------------------------------------

    def _advance_g_phase(self, frame: _Frame, pair):
        u, v = pair
        if frame.phase == "sep":
            assert frame.queue and frame.queue[0] == u
            frame.queue.pop(0)
            frame.x_order.append(u)
            frame.y_order.append(v)
            return
        if frame.phase == "s0":
            assert frame.queue and frame.queue[0] == u
            frame.queue.pop(0)
            if v in frame.dom_h:
                frame.s0_dup_picks.append(v)
            return
        if frame.phase == "probe":
            self._classify_probe_reply(frame, pair)
            return
        raise StrategyError(f"unexpected G-side reply in phase {frame.phase!r}")

    def _advance_h_phase(self, frame: _Frame, pair, state: GameState):
        u, v = pair  # u: Duplicator's G-side vertex, v: our move
        if frame.phase == "shortcut":
            frame.queue.pop(0)
            frame.local_pairs.append((u, v, None, None))
            if not frame.queue:
                (u1, v1, _, _), (u2, v2, _, _) = frame.local_pairs[-2:]
                self.bisection = _Bisection(self, SIDE_G, frame.dom_g,
                                            ((u1, v1), (u2, v2)),
                                            frame.enc_x, frame.enc_y)
            return
        if frame.phase == "s0_final":
            self.trace.events.append(("OUT_LEMMA", self.seen_rounds + 1))
            raise StrategyError("the closing move did not end the game")
        if frame.phase == "case2_final":
            self._after_case2_reply(frame, pair, state)
            return
        raise StrategyError(f"unexpected H-side reply in phase {frame.phase!r}")

    # -- S0 ----------------------------------------------------------------------

    def _s0_final_vertex(self, frame: _Frame) -> int:
        pebbled_h = self._pebbled_h()
        pool = sorted(frame.dom_h)
        adjacent = [w for w in pool if w not in pebbled_h
                    and any(self.h.has_edge(w, y) for y in frame.s0_dup_picks)]
        if adjacent:
            return adjacent[0]
        spare = [w for w in pool if w not in pebbled_h]
        if spare:
            return spare[0]
        spare_all = [w for w in range(self.h.n) if w not in pebbled_h]
        return spare_all[0] if spare_all else 0

    # -- separator placed: pick the case --------------------------------------------

    def _after_separator(self, frame: _Frame):
        self._decompose(frame)
        m = [0] * frame.nclasses
        mp = [0] * frame.nclasses
        for c in frame.class_of_g:
            m[c] += 1
        for c in frame.class_of_h:
            mp[c] += 1
        table = [{"class": ci, "m": m[ci], "m_prime": mp[ci]}
                 for ci in range(len(m)) if m[ci] or mp[ci]]
        self.trace.max_flaps = max(self.trace.max_flaps, len(frame.flaps_g),
                                   len(frame.flaps_h))
        if frame.anchor is not None:
            ga = next((i for i, f in enumerate(frame.flaps_g)
                       if frame.anchor[0] in f), None)
            ha = next((i for i, f in enumerate(frame.flaps_h)
                       if frame.anchor[1] in f), None)
            frame.local_pairs.append((frame.anchor[0], frame.anchor[1], ga, ha))
        surplus = [ci for ci in range(len(m)) if m[ci] > mp[ci]]
        if surplus:
            order = {}
            for i, ci in enumerate(frame.class_of_g):
                order.setdefault(ci, i)
            target = min(surplus, key=lambda ci: order[ci])
            frame.case = "CASE1"
            frame.target_class = target
            frame.probe_flaps = [i for i, c in enumerate(frame.class_of_g)
                                 if c == target]
            frame.probe_idx = 0
            frame.phase = "probe"
            self.trace.record(depth=frame.depth, case="CASE1",
                              x=list(frame.x_order), m_table=table,
                              f=len(frame.flaps_g))
            return
        deficit = [ci for ci in range(len(m)) if m[ci] < mp[ci]]
        if not deficit:
            raise StrategyError(
                "flap multisets agree on both sides; the position extends to "
                "an isomorphism")
        frame.case = "CASE2"
        if self.config.variant == "S_star":
            order_h = {}
            for i, ci in enumerate(frame.class_of_h):
                order_h.setdefault(ci, i)
            target = min(deficit, key=lambda ci: (m[ci], order_h[ci]))
            frame.target_class = target
            frame.probe_flaps = [i for i, c in enumerate(frame.class_of_g)
                                 if c == target]
            self.trace.max_similar = max(self.trace.max_similar, m[target])
        else:
            frame.target_class = None
            frame.probe_flaps = list(range(len(frame.flaps_g)))
        frame.probe_idx = 0
        frame.phase = "probe"
        self.trace.record(depth=frame.depth, case="CASE2",
                          x=list(frame.x_order), m_table=table,
                          f=len(frame.flaps_g),
                          starred=self.config.variant == "S_star")

    # -- probing ---------------------------------------------------------------------

    def _probe_vertex(self, frame: _Frame) -> int:
        flap = frame.flaps_g[frame.probe_flaps[frame.probe_idx]]
        pebbled = self._pebbled_g()
        free = sorted(v for v in flap if v not in pebbled)
        if free:
            return free[0]
        # fully pebbled flap (the anchor alone): re-pebbling is legal and the
        # only consistent reply is the mirrored partner
        return min(flap)

    def _classify_probe_reply(self, frame: _Frame, pair):
        u, v = pair
        gflap = frame.probe_flaps[frame.probe_idx]
        frame.probe_idx += 1
        hflap = next((i for i, f in enumerate(frame.flaps_h) if v in f), None)
        if hflap is None:
            raise StrategyError("probe reply in no flap while the game is running")
        collide = next(((pu, pv, pg, ph) for (pu, pv, pg, ph) in frame.local_pairs
                        if ph == hflap and pg is not None and pg != gflap), None)
        frame.local_pairs.append((u, v, gflap, hflap))
        if collide is not None:
            pu, pv, pg, ph = collide
            self.trace.events.append(("COLLIDE", self.seen_rounds + 1))
            self.bisection = _Bisection(
                self, SIDE_H, frame.flaps_h[hflap], ((pv, pu), (v, u)),
                frame.enc_y | frozenset(frame.y_order),
                frame.enc_x | frozenset(frame.x_order))
            return
        frame.visited_h.add(hflap)
        if frame.case == "CASE1" and frame.class_of_h[hflap] != frame.target_class:
            self._recurse(frame, gflap, hflap, (u, v))

    def _case2_final_vertex(self, frame: _Frame) -> int:
        ysep = frozenset(frame.y_order)
        pool = [i for i in range(len(frame.flaps_h)) if i not in frame.visited_h]
        if frame.target_class is not None:
            pool = [i for i in pool if frame.class_of_h[i] == frame.target_class]
        if not pool:
            raise StrategyError("no unvisited flap available on the other side")
        pool.sort(key=lambda i: min(frame.flaps_h[i]))
        flap = frame.flaps_h[pool[0]]
        cands = sorted(w for w in flap
                       if any(self.h.has_edge(w, y) for y in ysep))
        if not cands:
            raise StrategyError("chosen flap sends no edge to the separator image")
        frame.final_hflap = pool[0]
        frame.pending_final = cands[0]
        return cands[0]

    def _after_case2_reply(self, frame: _Frame, pair, state: GameState):
        u, v = pair  # u: Duplicator's G-side pick
        if u not in frame.dom_g:
            self.trace.events.append(("OUT_LEMMA", self.seen_rounds + 1))
            raise StrategyError("reply escaped the position but play continues")
        gflap = next((i for i, f in enumerate(frame.flaps_g) if u in f), None)
        if gflap is None:
            raise StrategyError("reply on the pebbled separator while running")
        mate = next(((pu, pv, pg, ph) for (pu, pv, pg, ph) in frame.local_pairs
                     if pg == gflap and ph != frame.final_hflap), None)
        if mate is not None:
            pu, pv, _, _ = mate
            self.bisection = _Bisection(
                self, SIDE_G, frame.flaps_g[gflap], ((pu, pv), (u, v)),
                frame.enc_x | frozenset(frame.x_order),
                frame.enc_y | frozenset(frame.y_order))
            return
        if frame.target_class is None:
            raise StrategyError("an unprobed reply flap cannot exist after "
                                "probing every flap")
        self._recurse(frame, gflap, frame.final_hflap, (u, v))

    # -- recursion ---------------------------------------------------------------------

    def _recurse(self, frame: _Frame, gflap: int, hflap: int, anchor):
        flap_g = frame.flaps_g[gflap]
        flap_h = frame.flaps_h[hflap]
        over_g = dict(frame.overlay_g)
        over_h = dict(frame.overlay_h)
        for vtx in flap_g:
            cs = set(over_g.get(vtx, ()))
            for i, xv in enumerate(frame.x_order):
                if self.g.has_edge(vtx, xv):
                    cs.add(frame.fresh[i])
            if cs:
                over_g[vtx] = frozenset(cs)
        for vtx in flap_h:
            cs = set(over_h.get(vtx, ()))
            for i, yv in enumerate(frame.y_order):
                if self.h.has_edge(vtx, yv):
                    cs.add(frame.fresh[i])
            if cs:
                over_h[vtx] = frozenset(cs)
        cls = None
        if frame.provider_tags:
            for fs, tag in frame.provider_tags:
                if fs == flap_g:
                    cls = tag
                    break
        sub = _Frame(flap_g, flap_h, frame.depth - 1, tuple(anchor),
                     frame.enc_x | frozenset(frame.x_order),
                     frame.enc_y | frozenset(frame.y_order),
                     over_g, over_h, cls)
        self.frames.append(sub)


class StrategySpoiler(Agent):
    role = "spoiler"

    def __init__(self, machine: StrategyMachine, label: str):
        self.machine = machine
        self.label = label

    @property
    def trace(self) -> StrategyTrace:
        return self.machine.trace

    def choose(self, state: GameState) -> tuple[str, int]:
        return self.machine.next_move(state)

    def finish(self, state: GameState):
        """Feed the final round so trace bookkeeping is complete."""
        self.machine.sync(state)

    def fork(self) -> "StrategySpoiler":
        return StrategySpoiler(self.machine.fork(), self.label)


def _with_variant(config: StrategyConfig, variant: str) -> StrategyConfig:
    if config.variant == variant:
        return config
    return StrategyConfig(**{**config.__dict__, "variant": variant})


def s_agent(g: ColoredGraph, h: ColoredGraph, config: StrategyConfig,
            classification: Optional[OClassification] = None) -> StrategySpoiler:
    """Separator-recursion Spoiler for a connected structured g versus an
    arbitrary non-isomorphic h; switches sides at most twice."""
    cfg = _with_variant(config, "S")
    return StrategySpoiler(StrategyMachine(g, h, cfg, classification), "s_agent")


def s_star_agent(g: ColoredGraph, h: ColoredGraph, config: StrategyConfig,
                 classification: Optional[OClassification] = None) -> StrategySpoiler:
    """Variant that probes a deficit class: each level spends at most
    similar-flap-count + 1 probing moves, at the price of one extra
    alternation per recursion level."""
    cfg = _with_variant(config, "S_star")
    return StrategySpoiler(StrategyMachine(g, h, cfg, classification), "s_star_agent")


def halving_agent(g: ColoredGraph, h: ColoredGraph, flap: Sequence[int],
                  anchors: tuple[tuple[int, int], tuple[int, int]],
                  x_set: Sequence[int], y_set: Sequence[int]) -> StrategySpoiler:
    """Bisection Spoiler for a position where two paired pebbles share the
    X-flap `flap` of g while their partners lie in different Y-flaps of h;
    wins within ceil(log2(|flap|)) further rounds, playing only in g.

    The position's pre-placed pebbles are adopted on the first move request.
    """
    machine = StrategyMachine.__new__(StrategyMachine)
    machine.g = g
    machine.h = h
    machine.config = StrategyConfig()
    machine.trace = StrategyTrace()
    machine.color_counter = 0
    machine.pending_move = None
    machine.seen_rounds = -1
    machine.frames = []
    machine.bisection = _Bisection(machine, SIDE_G, frozenset(flap), anchors,
                                   frozenset(x_set), frozenset(y_set))
    return StrategySpoiler(machine, "halving")


# -- formula synthesis ---------------------------------------------------------------


@dataclass
class ReplyNode:
    move: tuple[str, int]
    children: dict = field(default_factory=dict)  # reply -> ReplyNode | leaf pairs


@dataclass
class ReplyTree:
    """Exhaustive transcript family: the fixed agent's move at every node and
    a branch for every Duplicator reply."""
    g: ColoredGraph
    h: ColoredGraph
    root: ReplyNode
    depth: int
    branches: int


def reply_tree(g: ColoredGraph, h: ColoredGraph, spoiler: Agent, r_max: int,
               k: Optional[int] = None, node_cap: int = 500_000) -> ReplyTree:
    """Exhaust every Duplicator reply against a deterministic Spoiler agent.
    Every branch must end in a Spoiler win within r_max rounds."""
    counter = {"nodes": 0, "branches": 0, "depth": 0}

    def walk(state: GameState, agent: Agent) -> ReplyNode:
        counter["nodes"] += 1
        if counter["nodes"] > node_cap:
            raise BudgetExceeded(f"reply tree exceeded {node_cap} nodes")
        side, u = agent.choose(state)
        node = ReplyNode((side, u))
        other = h if side == SIDE_G else g
        for v in range(other.n):
            child_state = step(state, (side, u), v)
            if child_state.status == SPOILER_WON:
                counter["branches"] += 1
                counter["depth"] = max(counter["depth"], child_state.round)
                node.children[v] = child_state.pebbles
            elif child_state.status == RUNNING:
                node.children[v] = walk(child_state, agent.fork())
            else:
                raise StrategyError(
                    f"the agent did not win within {r_max} rounds; "
                    "the transcript family is not exhaustive")
        return node

    root = walk(new_game(g, h, r_max, k), spoiler)
    return ReplyTree(g, h, root, counter["depth"], counter["branches"])


def _violation_literal(g: ColoredGraph, h: ColoredGraph,
                       pairs: tuple[tuple[int, int], ...]) -> Formula:
    """A literal true on the G side and false on the H side of a broken
    configuration; the last pair must participate in the break."""
    j = len(pairs) - 1
    uj, vj = pairs[j]
    vj_name = f"v{j + 1}"
    for i in range(j):
        ui, vi = pairs[i]
        vi_name = f"v{i + 1}"
        if (ui == uj) != (vi == vj):
            return Eq(vi_name, vj_name) if ui == uj else Not(Eq(vi_name, vj_name))
        if g.has_edge(ui, uj) != h.has_edge(vi, vj):
            return Adj(vi_name, vj_name) if g.has_edge(ui, uj) \
                else Not(Adj(vi_name, vj_name))
    for c in sorted(g.colors[uj] - h.colors[vj]):
        return Col(c, vj_name)
    for c in sorted(h.colors[vj] - g.colors[uj]):
        return Not(Col(c, vj_name))
    raise StrategyError("configuration is not actually broken")


def extract_formula(tree: ReplyTree) -> Formula:
    """Closed formula in negation normal form, true on the tree's G side and
    false on its H side; rank equals the deepest branch length.

    A move on the G side binds an existential over the conjunction of all
    reply branches; a move on the H side binds a universal over their
    disjunction.
    """
    g, h = tree.g, tree.h

    def build(node: ReplyNode, depth: int) -> Formula:
        side, u = node.move
        var = f"v{depth + 1}"
        parts: list[Formula] = []
        for v in sorted(node.children):
            child = node.children[v]
            if isinstance(child, ReplyNode):
                parts.append(build(child, depth + 1))
            else:
                parts.append(_violation_literal(g, h, child))
        parts = list(dict.fromkeys(parts))
        if side == SIDE_G:
            return Exists(var, conjunction(parts))
        return Forall(var, disjunction(parts))

    return build(tree.root, 0)


def synthesize_distinguisher(g: ColoredGraph, h: ColoredGraph, spoiler: Agent,
                             r_max: int, k: Optional[int] = None,
                             node_cap: int = 500_000) -> Formula:
    """One-call pipeline: exhaust replies, then translate the play tree."""
    return extract_formula(reply_tree(g, h, spoiler, r_max, k, node_cap))
