import random

from metacat import laws
from metacat.fol import ID_BODY, build_fol_env
from metacat.proof import Gen, Id, Par, Seq, derivation_arity

ENV = build_fol_env()


def test_reassociate_keeps_arity():
    rng = random.Random(0)
    for _ in range(50):
        d = laws.reassociate(ID_BODY, ENV, rng)
        assert derivation_arity(d, ENV) == derivation_arity(ID_BODY, ENV)


def test_reassociate_changes_bracketing():
    rng = random.Random(1)
    variants = {repr(laws.reassociate(ID_BODY, ENV, rng)) for _ in range(10)}
    assert len(variants) > 1


def test_chain_flattens():
    d = Seq(Seq(Gen("wn"), Gen("wn")), Seq(Gen("wn"), Id(1)))
    assert laws._chain(d, Seq) == [Gen("wn"), Gen("wn"), Gen("wn"), Id(1)]
    assert laws._chain(Par(Id(1), Par(Id(2), Id(3))), Par) == [Id(1), Id(2), Id(3)]


def test_report_records_first_failure():
    report = laws.LawReport()
    report.record("law", True)
    report.record("law", False, note="first")
    report.record("law", False, note="second")
    assert not report.passed
    assert report.first_failure == {"law": "first"}
    assert report.lines() == ["law: 1/3 pass (3 defined)"]


def test_small_suites_pass():
    assert laws.syntax_laws(ENV.signature, cases=100, seed=2).passed
    assert laws.monoidal_laws(ENV, cases=40, seed=2).passed


def test_suites_are_seeded():
    a = laws.monoidal_laws(ENV, cases=20, seed=3)
    b = laws.monoidal_laws(ENV, cases=20, seed=3)
    assert (a.cases, a.defined) == (b.cases, b.defined)
