import pytest
from hypothesis import given, settings, strategies as st

from fodef import formulas as F
from fodef.formulas import (
    Adj, And, Col, Eq, Exists, Forall, Not, Or,
    FormulaError, UnboundVariableError,
    alternation_number, analyze, evaluate, parse_formula, print_formula,
    quantifier_rank,
)
from fodef.graphs import ColoredGraph

from helpers import brute_nest


def cycle(n):
    return ColoredGraph.build(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return ColoredGraph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


VARS = ["x", "y", "z"]


@st.composite
def asts(draw, depth=4):
    if depth == 0:
        kind = draw(st.sampled_from(["adj", "eq", "col"]))
        if kind == "col":
            return Col(draw(st.integers(0, 3)), draw(st.sampled_from(VARS)))
        a, b = draw(st.sampled_from(VARS)), draw(st.sampled_from(VARS))
        return Adj(a, b) if kind == "adj" else Eq(a, b)
    kind = draw(st.sampled_from(["atom", "not", "and", "or", "ex", "all"]))
    if kind == "atom":
        return draw(asts(depth=0))
    if kind == "not":
        return Not(draw(asts(depth=depth - 1)))
    if kind in ("and", "or"):
        l, r = draw(asts(depth=depth - 1)), draw(asts(depth=depth - 1))
        return And(l, r) if kind == "and" else Or(l, r)
    v = draw(st.sampled_from(VARS))
    body = draw(asts(depth=depth - 1))
    return Exists(v, body) if kind == "ex" else Forall(v, body)


class TestParser:
    def test_basic(self):
        f = parse_formula("ex x. ex y. (~eq(x,y) & ~adj(x,y))")
        assert f == Exists("x", Exists("y", And(Not(Eq("x", "y")), Not(Adj("x", "y")))))
        assert quantifier_rank(f) == 2

    def test_irreflexive_universal(self):
        f = parse_formula("all z. adj(z,z)")
        assert not evaluate(f, cycle(4))
        assert not evaluate(f, complete(3))

    def test_unbalanced(self):
        with pytest.raises(FormulaError):
            parse_formula("ex x. (adj(x,y)")

    def test_strict_rejects_free_variables(self):
        with pytest.raises(UnboundVariableError):
            parse_formula("adj(x,y)", strict=True)
        parse_formula("ex x. ex y. adj(x,y)", strict=True)

    def test_reserved_words_not_identifiers(self):
        with pytest.raises(FormulaError):
            parse_formula("ex adj. eq(adj,adj)")

    def test_binary_requires_parens(self):
        with pytest.raises(FormulaError):
            parse_formula("adj(x,y) & eq(x,y)")

    @given(asts(depth=6))
    @settings(max_examples=150, deadline=None)
    def test_parse_print_roundtrip(self, f):
        assert parse_formula(print_formula(f)) == f


class TestEvaluate:
    def test_nonadjacent_pair_exists(self):
        f = parse_formula("ex x. ex y. (~eq(x,y) & ~adj(x,y))")
        assert evaluate(f, cycle(4))
        assert not evaluate(f, complete(3))

    def test_color_atom(self):
        g = ColoredGraph.build(3, [(0, 1)], [[], [1], []])
        assert evaluate(parse_formula("ex x. col(1,x)"), g)
        assert not evaluate(parse_formula("ex x. col(2,x)"), g)

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            evaluate(parse_formula("adj(x,y)"), cycle(3), {"x": 0})

    def test_assignment_and_shadowing(self):
        f = parse_formula("ex x. adj(x,y)")
        assert evaluate(f, cycle(3), {"y": 0})
        shadow = parse_formula("ex x. ex x. eq(x,x)")
        assert evaluate(shadow, cycle(3))

    @given(asts(depth=3), st.integers(0, 6))
    @settings(max_examples=80, deadline=None)
    def test_isomorphism_invariance(self, f, shift):
        fv = sorted(F.free_variables(f))
        g = cycle(5)
        perm = [(v + shift) % 5 for v in range(5)]
        h = ColoredGraph.build(5, [(perm[u], perm[v]) for u, v in g.edges()])
        env_g = {v: i for i, v in enumerate(fv)}
        env_h = {v: perm[i] for i, v in enumerate(fv)}
        assert evaluate(f, g, env_g) == evaluate(f, h, env_h)


class TestAnalyze:
    def test_spec_nest_examples(self):
        f = Exists("x", And(Adj("x", "y"), Forall("z", Not(Adj("x", "z")))))
        prof = analyze(f)
        assert prof.nest_summary == frozenset({"E", "EA"})
        assert prof.quantifier_rank == 2
        assert prof.alternation_number == 1
        assert prof.is_nnf

        g = Not(Exists("x", Forall("y", Adj("x", "y"))))
        prof = analyze(g)
        assert prof.nest_summary == frozenset({"AE"})
        assert prof.quantifier_rank == 2
        assert prof.alternation_number == 1
        assert not prof.is_nnf

        atom = Eq("x", "y")
        prof = analyze(atom)
        assert prof.nest_summary == frozenset({""})
        assert prof.quantifier_rank == 0
        assert prof.alternation_number == 0

    @given(asts())
    @settings(max_examples=200, deadline=None)
    def test_nest_matches_inductive_definition(self, f):
        assert analyze(f).nest_summary == frozenset(brute_nest(f))

    @given(asts())
    @settings(max_examples=200, deadline=None)
    def test_rank_and_alternation_from_nest(self, f):
        nest = brute_nest(f)
        assert quantifier_rank(f) == max(len(s) for s in nest)
        want = max(s.count("EA") + s.count("AE") for s in nest)
        assert alternation_number(f) == want

    @given(asts())
    @settings(max_examples=100, deadline=None)
    def test_negation_preserves_rank_and_alternation(self, f):
        assert quantifier_rank(Not(f)) == quantifier_rank(f)
        assert alternation_number(Not(f)) == alternation_number(f)

    def test_nest_cap(self):
        f = Eq("x", "x")
        for i in range(14):
            f = And(Exists(f"v{i}", f), Forall(f"w{i}", f))
        prof = analyze(f, nest_cap=64)
        assert prof.nest_summary is None
        assert prof.quantifier_rank == 14
