import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metacat.errors import ArityMismatch, CyclicGraph, EqualityFailure, MalformedGraph, MatchFailure
from metacat.fol import RULES, SIGNATURE, imp, neg, proves, wff, x0, x1
from metacat.hypergraph import (
    Ctor,
    Edge,
    Match,
    OpenHypergraph,
    Spider,
    compile_minus,
    compile_plus,
    evaluate,
    hg_edge,
    hg_identity,
    hg_parallel,
    hg_sequential,
    hg_spider,
    hg_symmetry,
    run,
    topological_order,
)
from metacat.oracle import canonicalize
from metacat.syntax import FreshCounter, Leaf, SyntaxMap, instantiate, match_against, smap_compose, smap_identity
from strategies import composable_pair, smap_with_args, trees

AX_MP = {r.name: r for r in RULES}["ax-mp"]
T, S = neg(Leaf(7)), imp(Leaf(8), Leaf(7))


def labels(h):
    return [e.label for e in h.edges]


class TestStructure:
    def test_identity(self):
        h = hg_identity(2)
        assert h.arity == (2, 2) and h.edges == ()
        assert h.in_boundary == h.out_boundary

    def test_symmetry_swaps(self):
        assert evaluate(hg_symmetry(1, 1), (T, S), FreshCounter(0)) == (S, T)
        assert evaluate(hg_symmetry(2, 1), (x0, x1, T), FreshCounter(0)) == (T, x0, x1)
        assert hg_symmetry(2, 3).edges == ()

    def test_eta_spider(self):
        h = hg_spider(0, 1)
        assert h.arity == (0, 1)
        assert evaluate(h, (), FreshCounter(5)) == (Leaf(5),)

    def test_spider_copies_one_fresh_leaf(self):
        assert evaluate(hg_spider(0, 3), (), FreshCounter(2)) == (Leaf(2),) * 3

    def test_spider_to_nothing(self):
        assert evaluate(hg_spider(2, 0), (T, T), FreshCounter(0)) == ()
        with pytest.raises(EqualityFailure):
            evaluate(hg_spider(2, 0), (T, S), FreshCounter(0))

    def test_sequential_glues(self):
        h = hg_sequential(hg_edge(Ctor(SIGNATURE["imp"])), hg_edge(Match(SIGNATURE["imp"])))
        assert h.arity == (2, 2)
        assert evaluate(h, (T, S), FreshCounter(0)) == (T, S)
        assert labels(h) == [Ctor(SIGNATURE["imp"]), Match(SIGNATURE["imp"])]

    def test_sequential_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            hg_sequential(hg_identity(2), hg_identity(1))

    def test_sequential_identity_unit(self):
        h = compile_plus(SyntaxMap(2, (imp(x0, x1),)))
        for g in (hg_sequential(hg_identity(2), h), hg_sequential(h, hg_identity(1))):
            assert evaluate(g, (T, S), FreshCounter(0)) == evaluate(h, (T, S), FreshCounter(0))

    def test_parallel(self):
        h = hg_parallel(hg_identity(1), hg_identity(1))
        assert evaluate(h, (T, S), FreshCounter(0)) == (T, S)
        wff_plus = hg_edge(Ctor(SIGNATURE["wff"]))
        two = hg_parallel(wff_plus, wff_plus)
        assert two.arity == (2, 2)
        assert evaluate(two, (x0, x1), FreshCounter(2)) == (wff(x0), wff(x1))
        assert evaluate(hg_parallel(two, hg_identity(0)), (x0, x1), FreshCounter(2)) == (wff(x0), wff(x1))


class TestInvariants:
    def test_two_consumers_rejected(self):
        e = Edge(Spider(1, 1), (0,), (1,))
        with pytest.raises(MalformedGraph):
            OpenHypergraph(2, (e,), (0,), (0, 1))

    def test_dangling_wire_rejected(self):
        with pytest.raises(MalformedGraph):
            OpenHypergraph(2, (), (0,), (0,))

    def test_wrong_port_count_rejected(self):
        with pytest.raises(MalformedGraph):
            OpenHypergraph(2, (Edge(Ctor(SIGNATURE["imp"]), (0,), (1,)),), (0,), (1,))

    def test_wire_out_of_range(self):
        with pytest.raises(MalformedGraph):
            OpenHypergraph(1, (), (0,), (3,))

    def test_cycle_rejected(self):
        a = Edge(Spider(2, 2), (0, 3), (1, 2))
        b = Edge(Spider(1, 1), (2,), (3,))
        with pytest.raises(CyclicGraph):
            OpenHypergraph(4, (a, b), (0,), (1,))

    def test_topological_tie_break(self):
        h = hg_parallel(hg_spider(0, 1), hg_spider(0, 1))
        assert topological_order(h) == [0, 1]
        assert evaluate(h, (), FreshCounter(3)) == (Leaf(3), Leaf(4))

    def test_order_respects_dependencies(self):
        # edge 0 consumes what edge 1 produces
        a = Edge(Ctor(SIGNATURE["wff"]), (1,), (2,))
        b = Edge(Spider(1, 1), (0,), (1,))
        h = OpenHypergraph(3, (a, b), (0,), (2,))
        assert topological_order(h) == [1, 0]
        assert evaluate(h, (x0,), FreshCounter(1)) == (wff(x0),)


class TestCompilePlus:
    def test_identity(self):
        h = compile_plus(smap_identity(1))
        assert labels(h) == [Spider(1, 1)]
        assert evaluate(h, (T,), FreshCounter(0)) == (T,)

    def test_copying(self):
        h = compile_plus(SyntaxMap(1, (imp(x0, x0),)))
        assert labels(h) == [Spider(1, 2), Ctor(SIGNATURE["imp"])]
        assert evaluate(h, (T,), FreshCounter(0)) == (imp(T, T),)

    def test_discarding(self):
        h = compile_plus(SyntaxMap(2, (proves(x1),)))
        assert labels(h) == [Spider(1, 0), Spider(1, 1), Ctor(SIGNATURE["proves"])]
        assert evaluate(h, (S, T), FreshCounter(0)) == (proves(T),)

    @given(smap_with_args())
    def test_arity_and_instantiate(self, case):
        u, args = case
        h = compile_plus(u)
        assert h.arity == (u.m, u.n)
        assert evaluate(h, args, FreshCounter(50)) == instantiate(u, args)

    @given(composable_pair(), st.data())
    @settings(max_examples=80)
    def test_functorial(self, uv, data):
        u, v = uv
        args = tuple(data.draw(st.lists(trees(3), min_size=u.m, max_size=u.m)))
        left = evaluate(hg_sequential(compile_plus(u), compile_plus(v)), args, FreshCounter(50))
        assert left == evaluate(compile_plus(smap_compose(u, v)), args, FreshCounter(50))


class TestCompileMinus:
    def test_identity(self):
        assert evaluate(compile_minus(smap_identity(1)), (T,), FreshCounter(0)) == (T,)

    def test_ax_mp_source(self):
        h = compile_minus(AX_MP.src)
        assert h.arity == (2, 2)
        assert sorted(map(str, labels(h))) == ["imp-", "proves-", "proves-", "spider 1,1", "spider 2,1"]

    def test_discard_gives_eta(self):
        h = compile_minus(SyntaxMap(2, (proves(x1),)))
        assert Spider(0, 1) in labels(h)
        assert evaluate(h, (proves(T),), FreshCounter(9)) == (Leaf(9), T)

    def test_match_failure(self):
        with pytest.raises(MatchFailure) as info:
            evaluate(compile_minus(AX_MP.src), (proves(T), proves(neg(T))), FreshCounter(0))
        assert info.value.expected == "imp"

    def test_equality_failure(self):
        with pytest.raises(EqualityFailure):
            evaluate(compile_minus(AX_MP.src), (proves(T), proves(imp(S, T))), FreshCounter(0))

    @given(smap_with_args(), st.data())
    def test_agrees_with_match_against(self, case, data):
        u, args = case
        if data.draw(st.booleans()):
            subjects = instantiate(u, args)
        else:
            subjects = tuple(data.draw(st.lists(trees(3), min_size=u.n, max_size=u.n)))
        expected = match_against(u, subjects, FreshCounter(3))
        try:
            got = evaluate(compile_minus(u), subjects, FreshCounter(3))
        except (MatchFailure, EqualityFailure):
            got = None
        assert (got is None) == (expected is None)
        if got is not None:
            assert canonicalize(got, 3) == canonicalize(expected, 3)

    @given(smap_with_args())
    def test_round_trip(self, case):
        u, args = case
        loop = hg_sequential(compile_plus(u), compile_minus(u))
        got = evaluate(loop, args, FreshCounter(100))
        if all(u.usage()):
            assert got == args
        assert instantiate(u, got) == instantiate(u, args)


class TestEvaluate:
    def test_unequal_spider_inputs(self):
        with pytest.raises(EqualityFailure) as info:
            evaluate(hg_spider(2, 1), (T, S), FreshCounter(0))
        assert info.value.edge == 0

    def test_ax_mp_span(self):
        h = hg_sequential(compile_minus(AX_MP.src), compile_plus(AX_MP.tgt))
        assert evaluate(h, (proves(T), proves(imp(T, S))), FreshCounter(0)) == (proves(S),)

    def test_wrong_input_count(self):
        with pytest.raises(ArityMismatch):
            evaluate(hg_identity(2), (T,), FreshCounter(0))

    def test_trace_stops_at_first_failure(self):
        h = hg_parallel(hg_spider(2, 1), hg_spider(2, 1))
        trace = run(h, (T, S, T, S), FreshCounter(0))
        assert trace.failure.edge == 0
        assert trace.order == []

    def test_deterministic_fresh_ids(self):
        h = compile_minus(SyntaxMap(3, (wff(x1),)))
        runs = {evaluate(h, (wff(T),), FreshCounter(4)) for _ in range(3)}
        assert runs == {(Leaf(4), T, Leaf(5))}


@given(smap_with_args(max_n=2), smap_with_args(max_n=2), st.data())
@settings(max_examples=80)
def test_interchange(c1, c2, data):
    (u1, a1), (u2, a2) = c1, c2
    h1, h2 = compile_plus(u1), compile_plus(u2)
    h3, h4 = compile_minus(u1), compile_minus(u2)
    left = hg_sequential(hg_parallel(h1, h2), hg_parallel(h3, h4))
    right = hg_parallel(hg_sequential(h1, h3), hg_sequential(h2, h4))
    x = evaluate(left, a1 + a2, FreshCounter(3))
    y = evaluate(right, a1 + a2, FreshCounter(3))
    assert canonicalize(x, 3) == canonicalize(y, 3)
