"""The round-based two-player pebble game on a pair of colored graphs.

Spoiler picks a side and a vertex each round; Duplicator answers on the other
side.  Duplicator survives round r when the paired pebbles still induce a
partial isomorphism; the first broken round ends the game.  An optional
budget limits how often Spoiler may switch sides between consecutive rounds.
"""

from __future__ import annotations

import copy
import json
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from fodef.graphs import ColoredGraph, check_partial_isomorphism, find_isomorphism

SIDE_G = "G"
SIDE_H = "G'"

RUNNING = "running"
SPOILER_WON = "spoiler_won"
DUPLICATOR_SURVIVED = "duplicator_survived"


class IllegalMove(ValueError):
    pass


class AgentError(RuntimeError):
    pass


@dataclass(frozen=True)
class GameState:
    g: ColoredGraph
    h: ColoredGraph
    max_rounds: int
    alternation_budget: Optional[int]
    pebbles: tuple[tuple[int, int], ...] = ()
    sides: tuple[str, ...] = ()
    alternations_used: int = 0
    status: str = RUNNING

    @property
    def round(self) -> int:
        return len(self.pebbles)

    def last_side(self) -> Optional[str]:
        return self.sides[-1] if self.sides else None

    def switch_allowed(self, side: str) -> bool:
        if self.alternation_budget is None:
            return True
        last = self.last_side()
        if last is None or side == last:
            return True
        return self.alternations_used + 1 <= self.alternation_budget


def new_game(g: ColoredGraph, h: ColoredGraph, r: int,
             k: Optional[int] = None) -> GameState:
    if r < 1:
        raise IllegalMove(f"round count must be at least 1, got {r}")
    if k is not None and k < 0:
        raise IllegalMove("alternation budget must be non-negative")
    return GameState(g, h, r, k)


def step(state: GameState, spoiler_move: tuple[str, int],
         duplicator_move: int) -> GameState:
    """One full round; returns the new state with the win condition applied."""
    if state.status != RUNNING:
        raise IllegalMove("game is over")
    side, u = spoiler_move
    if side not in (SIDE_G, SIDE_H):
        raise IllegalMove(f"unknown side {side!r}")
    own = state.g if side == SIDE_G else state.h
    other = state.h if side == SIDE_G else state.g
    if not (0 <= u < own.n):
        raise IllegalMove(f"spoiler vertex {u} out of range")
    if not (0 <= duplicator_move < other.n):
        raise IllegalMove(f"duplicator vertex {duplicator_move} out of range")
    if not state.switch_allowed(side):
        raise IllegalMove("alternation budget exceeded")
    alts = state.alternations_used
    last = state.last_side()
    if last is not None and side != last:
        alts += 1
    pair = (u, duplicator_move) if side == SIDE_G else (duplicator_move, u)
    pebbles = state.pebbles + (pair,)
    ok = check_partial_isomorphism(state.g, state.h, pebbles)
    status = RUNNING
    if not ok:
        status = SPOILER_WON
    elif len(pebbles) >= state.max_rounds:
        status = DUPLICATOR_SURVIVED
    return replace(state, pebbles=pebbles, sides=state.sides + (side,),
                   alternations_used=alts, status=status)


# -- agents ----------------------------------------------------------------------


class Agent:
    """Base agent; spoilers implement choose(), duplicators respond()."""
    role = "duplicator"
    label = "agent"

    def choose(self, state: GameState) -> tuple[str, int]:
        raise NotImplementedError

    def respond(self, state: GameState, side: str, vertex: int) -> int:
        raise NotImplementedError

    def fork(self) -> "Agent":
        return copy.deepcopy(self)


class RandomDuplicator(Agent):
    label = "random"

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def respond(self, state, side, vertex):
        other = state.h if side == SIDE_G else state.g
        return self.rng.randrange(other.n)


class GreedyDuplicator(Agent):
    """Keeps the pairing a partial isomorphism whenever some reply can,
    preferring degree-matched vertices; least id breaks ties."""
    label = "greedy"

    def respond(self, state, side, vertex):
        own = state.g if side == SIDE_G else state.h
        other = state.h if side == SIDE_G else state.g
        mypairs = state.pebbles
        best = None
        for v in range(other.n):
            pair = (vertex, v) if side == SIDE_G else (v, vertex)
            keeps = check_partial_isomorphism(state.g, state.h, mypairs + (pair,))
            score = (0 if keeps else 1,
                     abs(own.degree(vertex) - other.degree(v)),
                     v)
            if best is None or score < best:
                best = score
        return best[2]


class MirrorDuplicator(Agent):
    """Plays the image of Spoiler's vertex along a fixed isomorphism."""
    label = "mirror"

    def __init__(self, mapping: dict[int, int]):
        self.fwd = dict(mapping)
        self.rev = {v: u for u, v in mapping.items()}

    def respond(self, state, side, vertex):
        return self.fwd[vertex] if side == SIDE_G else self.rev[vertex]


def mirror_duplicator(g: ColoredGraph, h: ColoredGraph) -> MirrorDuplicator:
    m = find_isomorphism(g, h)
    if m is None:
        raise AgentError("mirror duplicator needs isomorphic inputs")
    return MirrorDuplicator(m)


class HumanDuplicator(Agent):
    """Line-oriented terminal player."""
    label = "human"

    def __init__(self, input_fn: Callable[[str], str] = input,
                 output_fn: Callable[[str], None] = print):
        self.ask = input_fn
        self.say = output_fn

    def respond(self, state, side, vertex):
        other = state.h if side == SIDE_G else state.g
        other_name = SIDE_H if side == SIDE_G else SIDE_G
        self.say(f"round {state.round + 1}: spoiler played {vertex} on {side}")
        self.say(f"pebbles so far: {list(state.pebbles)}")
        while True:
            raw = self.ask(f"your vertex on {other_name} (0..{other.n - 1}): ")
            try:
                v = int(raw.strip())
            except ValueError:
                self.say("please enter an integer")
                continue
            if 0 <= v < other.n:
                return v
            self.say("out of range")


class ExhaustiveDuplicator(Agent):
    """Optimal replies from full game-tree search (small instances only)."""
    label = "exhaustive"

    def __init__(self, size_budget: int = 16):
        self.size_budget = size_budget
        self._searcher = None

    def respond(self, state, side, vertex):
        from fodef.oracle import RankSearcher
        if state.g.n + state.h.n > self.size_budget:
            raise AgentError(
                f"exhaustive duplicator refuses instances over {self.size_budget} vertices")
        if self._searcher is None:
            self._searcher = RankSearcher(state.g, state.h, state.alternation_budget)
        s = self._searcher
        other = state.h if side == SIDE_G else state.g
        rounds_left = state.max_rounds - state.round
        last = side
        alts = state.alternations_used
        if state.sides and side != state.sides[-1]:
            alts += 1
        best = None
        for v in range(other.n):
            pair = (vertex, v) if side == SIDE_G else (v, vertex)
            pebbles = state.pebbles + (pair,)
            if not check_partial_isomorphism(state.g, state.h, pebbles):
                surv = -1
            else:
                surv = s.survival(frozenset(pebbles), last, alts, rounds_left - 1)
            if best is None or (-surv, v) < best:
                best = (-surv, v)
        return best[1]


def builtin_duplicator(name: str, seed: Optional[int] = None,
                       size_budget: int = 16) -> Agent:
    """Factory for the named Duplicator policies."""
    if name == "random":
        if seed is None:
            raise AgentError("random duplicator requires a seed")
        return RandomDuplicator(seed)
    if name == "greedy":
        return GreedyDuplicator()
    if name == "exhaustive":
        return ExhaustiveDuplicator(size_budget)
    if name == "human":
        return HumanDuplicator()
    raise AgentError(f"unknown duplicator {name!r}")


# -- matches ----------------------------------------------------------------------


@dataclass(frozen=True)
class Transcript:
    moves: tuple[tuple[int, str, int, int], ...]  # (round, side, spoiler v, duplicator v)
    status: str
    rounds_used: int
    alternations: int
    annotations: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> str:
        return json.dumps({
            "moves": [{"round": r, "side": s, "spoiler": u, "duplicator": v}
                      for r, s, u, v in self.moves],
            "status": self.status,
            "alternations": self.alternations,
        })

    def replay(self, g: ColoredGraph, h: ColoredGraph, r: int,
               k: Optional[int] = None) -> str:
        state = new_game(g, h, r, k)
        for _, side, u, v in self.moves:
            state = step(state, (side, u), v)
        return state.status


def run_match(g: ColoredGraph, h: ColoredGraph, spoiler: Agent,
              duplicator: Agent, r: int, k: Optional[int] = None) -> Transcript:
    """Drive both agents to termination.

    A Spoiler attempt to overspend the alternation budget ends the match as a
    Duplicator survival rather than an error.
    """
    state = new_game(g, h, r, k)
    moves = []
    notes = {}
    while state.status == RUNNING:
        side, u = spoiler.choose(state)
        if not state.switch_allowed(side):
            notes["budget_exceeded"] = state.round + 1
            state = replace(state, status=DUPLICATOR_SURVIVED)
            break
        v = duplicator.respond(state, side, u)
        state = step(state, (side, u), v)
        moves.append((state.round, side, u, v))
    return Transcript(tuple(moves), state.status, state.round,
                      state.alternations_used, notes)
