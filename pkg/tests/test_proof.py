import pytest

from metacat.errors import (
    ArityMismatch,
    DuplicateName,
    EqualityFailure,
    InvalidTheorem,
    MatchFailure,
    UnknownGenerator,
)
from metacat.fol import (
    ID_BODY,
    RULES,
    SIGNATURE,
    build_fol_env,
    build_negative_env,
    forall,
    imp,
    neg,
    proves,
    wff,
    x0,
    x1,
)
from metacat.hypergraph import evaluate, hg_identity
from metacat.proof import (
    ConclusionMismatch,
    Drop,
    Dup,
    Env,
    Gen,
    Id,
    Par,
    Seq,
    Sym,
    TheoremStmt,
    check_env,
    check_theorem,
    compile_derivation,
    compile_generator,
    derivation_arity,
    generator_theorem,
    register_theorem,
    resolved_conclusion,
)
from metacat.syntax import FreshCounter, Leaf, SyntaxMap

ENV = build_fol_env()
RULE_ENV = ENV.rules_only()
T, S = neg(Leaf(7)), imp(Leaf(8), Leaf(9))


def thm(name, m, hyps, concs, body):
    return TheoremStmt(name, SyntaxMap(m, hyps), SyntaxMap(m, concs), body)


class TestArity:
    def test_generator(self):
        assert derivation_arity(Gen("ax-mp"), ENV) == (2, 1)

    def test_inner_mismatch(self):
        with pytest.raises(ArityMismatch):
            derivation_arity(Seq(Par(Gen("wi"), Id(1)), Gen("wn")), ENV)

    def test_par(self):
        assert derivation_arity(Par(Id(2), Id(3)), ENV) == (5, 5)

    def test_structural(self):
        assert derivation_arity(Sym(2, 1), ENV) == (3, 3)
        assert derivation_arity(Dup(), ENV) == (1, 2)
        assert derivation_arity(Drop(), ENV) == (1, 0)

    def test_unknown(self):
        with pytest.raises(UnknownGenerator):
            derivation_arity(Gen("ax-3"), ENV)

    def test_theorem_reference(self):
        assert derivation_arity(Gen("id"), ENV) == (1, 1)


class TestCompile:
    def test_ax_mp(self):
        h = compile_generator(RULE_ENV.lookup("ax-mp"))
        assert evaluate(h, (proves(T), proves(imp(T, S))), FreshCounter(10)) == (proves(S),)

    def test_wn(self):
        h = compile_generator(RULE_ENV.lookup("wn"))
        assert evaluate(h, (wff(T),), FreshCounter(10)) == (wff(neg(T)),)

    def test_ax_gen_binds_fresh_leaf(self):
        h = compile_generator(RULE_ENV.lookup("ax-gen"))
        assert evaluate(h, (proves(T),), FreshCounter(10)) == (proves(forall(Leaf(10), T)),)

    def test_id(self):
        assert compile_derivation(Id(3), ENV) == hg_identity(3)

    def test_negation_of_implication(self):
        h = compile_derivation(Seq(Gen("wi"), Gen("wn")), ENV)
        assert evaluate(h, (wff(T), wff(S)), FreshCounter(10)) == (wff(neg(imp(T, S))),)

    def test_unit(self):
        d = Par(Gen("wi"), Gen("wn"))
        inputs = (wff(T), wff(S), wff(T))
        left = evaluate(compile_derivation(Seq(d, Id(2)), ENV), inputs, FreshCounter(10))
        assert left == evaluate(compile_derivation(d, ENV), inputs, FreshCounter(10))

    def test_dup_drop(self):
        assert evaluate(compile_derivation(Dup(), ENV), (T,), FreshCounter(10)) == (T, T)
        assert evaluate(compile_derivation(Drop(), ENV), (T,), FreshCounter(10)) == ()

    def test_seq_functorial(self):
        d1, d2 = Par(Gen("wi"), Id(1)), Gen("wi")
        inputs = (wff(T), wff(S), wff(T))
        whole = evaluate(compile_derivation(Seq(d1, d2), ENV), inputs, FreshCounter(10))
        mid = evaluate(compile_derivation(d1, ENV), inputs, FreshCounter(10))
        assert whole == evaluate(compile_derivation(d2, ENV), mid, FreshCounter(10))

    def test_theorem_span_vs_inline(self):
        # the span of wn-retyped only accepts negations; its body accepts anything well-formed
        span = compile_derivation(Gen("wn-retyped"), ENV)
        inline = compile_derivation(Gen("wn-retyped"), ENV, inline=True)
        assert evaluate(inline, (wff(S),), FreshCounter(10)) == (wff(neg(S)),)
        with pytest.raises(MatchFailure):
            evaluate(span, (wff(S),), FreshCounter(10))


class TestCheck:
    def test_id(self):
        report = check_theorem(ENV.theorem("id"), RULE_ENV)
        assert report.valid
        assert report.conclusion == (proves(imp(x0, x0)),)

    def test_specialization_counterexample(self):
        report = check_theorem(thm("bad", 1, (wff(x0),), (proves(x0),), ID_BODY), RULE_ENV)
        assert report.status == "invalid"
        assert report.failure == ConclusionMismatch(0, proves(x0), proves(imp(x0, x0)))
        assert "expected proves(x0), actual proves(imp(x0,x0))" in report.detail()

    def test_identity_body(self):
        assert check_theorem(thm("one", 1, (wff(x0),), (wff(x0),), Id(1)), RULE_ENV).valid

    def test_unsatisfied_hypothesis(self):
        report = check_theorem(thm("mp", 2, (proves(x0), proves(x1)), (proves(x1),), Gen("ax-mp")), RULE_ENV)
        assert report.status == "invalid" and report.failure_kind == "MatchFailure"

    def test_static_error(self):
        report = check_theorem(thm("short", 1, (wff(x0),), (wff(x0),), Gen("wi")), RULE_ENV)
        assert report.status == "error"
        assert "arity" in report.message

    def test_unknown_generator_is_static(self):
        assert check_theorem(thm("u", 1, (wff(x0),), (wff(x0),), Gen("nope")), RULE_ENV).status == "error"

    @pytest.mark.parametrize("rule", RULES, ids=lambda r: r.name)
    def test_generator_at_its_own_span(self, rule):
        assert check_theorem(generator_theorem(rule), RULE_ENV).valid

    def test_retyping(self):
        retyped = thm("wn2", 1, (wff(neg(x0)),), (wff(neg(neg(x0))),), Gen("wn"))
        assert check_theorem(retyped, RULE_ENV).valid

    def test_ax_gen_fresh_leaf(self):
        report = check_theorem(generator_theorem(RULE_ENV.lookup("ax-gen")), RULE_ENV)
        assert report.valid
        (raw,) = report.conclusion
        bound = raw.children[0].children[0]
        assert isinstance(bound, Leaf) and bound.id >= 2  # never a boundary leaf
        assert resolved_conclusion(report) == (proves(forall(x0, x1)),)

    def test_fresh_leaf_cannot_stand_for_two_things(self):
        # both copies carry the same fresh leaf, so they must generalize alike
        d = Seq(Gen("ax-gen"), Dup())
        ok = thm("g", 2, (proves(x1),), (proves(forall(x0, x1)), proves(forall(x0, x1))), d)
        bad = thm("g", 2, (proves(x1),), (proves(forall(x0, x1)), proves(forall(x1, x1))), d)
        assert check_theorem(ok, RULE_ENV).valid
        assert check_theorem(bad, RULE_ENV).failure_kind == "ConclusionMismatch"

    def test_fresh_leaf_generalizes_to_boundary_leaf(self):
        # the bound variable of ax-gen is arbitrary, so it may be claimed as x0 itself
        t = thm("g", 1, (proves(x0),), (proves(forall(x0, x0)),), Gen("ax-gen"))
        assert check_theorem(t, RULE_ENV).valid

    def test_boundary_leaves_are_rigid(self):
        t = thm("w", 2, (wff(x0),), (wff(neg(x1)),), Gen("wn"))
        report = check_theorem(t, RULE_ENV)
        assert report.failure == ConclusionMismatch(0, wff(neg(x1)), wff(neg(x0)))

    def test_dup_drop(self):
        dup = thm("d", 1, (wff(x0),), (wff(x0), wff(x0)), Dup())
        drop = thm("e", 1, (wff(x0),), (), Drop())
        assert check_theorem(dup, RULE_ENV).valid and check_theorem(drop, RULE_ENV).valid

    def test_uncrossed_reports_edge(self):
        report = check_theorem(build_negative_env().theorem("id-uncrossed"), RULE_ENV)
        assert report.status == "invalid"
        assert isinstance(report.failure, EqualityFailure)
        assert "ax-mp" in str(report.failure)


class TestRegister:
    def test_register_then_use(self):
        env = register_theorem(ENV.theorem("wnwi"), RULE_ENV)
        assert derivation_arity(Gen("wnwi"), env) == (2, 1)
        user = thm("u", 2, (wff(x0), wff(x1)), (wff(neg(imp(x0, x1))),), Gen("wnwi"))
        assert check_theorem(user, env).valid
        assert check_theorem(user, env, inline=True).valid

    def test_invalid_rejected(self):
        bad = thm("bad", 1, (wff(x0),), (proves(x0),), ID_BODY)
        with pytest.raises(InvalidTheorem):
            register_theorem(bad, RULE_ENV)

    def test_duplicate(self):
        with pytest.raises(DuplicateName):
            register_theorem(thm("wn", 1, (wff(x0),), (wff(x0),), Id(1)), RULE_ENV)
        env = register_theorem(ENV.theorem("wnwi"), RULE_ENV)
        with pytest.raises(DuplicateName):
            register_theorem(ENV.theorem("wnwi"), env)

    def test_env_rejects_clash(self):
        with pytest.raises(DuplicateName):
            Env(SIGNATURE, {r.name: r for r in RULES}, (thm("wn", 1, (), (), Id(0)),))


def test_check_env_corpus():
    reports = check_env(ENV)
    assert [r.status for _, r in reports] == ["valid"] * len(ENV.theorems)


def test_inline_conservative_on_corpus():
    spans = [(r.status, r.failure_kind) for _, r in check_env(ENV)]
    inlined = [(r.status, r.failure_kind) for _, r in check_env(ENV, inline=True)]
    assert spans == inlined
