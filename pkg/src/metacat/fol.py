"""The first-order logic fragment, built in code.

``build_fol_env()`` constructs the same environment as ``corpus/fol.mcat``;
the tests hold the two against each other.
"""
from __future__ import annotations

from .proof import Drop, Dup, Env, Gen, Id, ProofGenerator, Sym, TheoremStmt, par, seq
from .syntax import Leaf, Node, SyntaxMap, declare_signature

SIGNATURE = declare_signature(
    [("wff", 1), ("proves", 1), ("not", 1), ("imp", 2), ("forall", 2)]
)


def _op(name):
    op = SIGNATURE[name]
    return lambda *args: Node(op, args)


wff, proves, neg, imp, forall = map(_op, ["wff", "proves", "not", "imp", "forall"])
x0, x1, x2 = Leaf(0), Leaf(1), Leaf(2)


def _rule(name, params, hyps, concs) -> ProofGenerator:
    m = len(params)
    return ProofGenerator(name, SyntaxMap(m, hyps), SyntaxMap(m, concs), tuple(params))


RULES = [
    _rule("wn", "p", (wff(x0),), (wff(neg(x0)),)),
    _rule("wi", "pq", (wff(x0), wff(x1)), (wff(imp(x0, x1)),)),
    _rule("ax-mp", "pq", (proves(x0), proves(imp(x0, x1))), (proves(x1),)),
    _rule("ax-1", "pq", (wff(x0), wff(x1)), (proves(imp(x0, imp(x1, x0))),)),
    _rule(
        "ax-2",
        "pqr",
        (wff(x0), wff(x1), wff(x2)),
        (proves(imp(imp(x0, imp(x1, x2)), imp(imp(x0, x1), imp(x0, x2)))),),
    ),
    _rule("ax-gen", ("x", "p"), (proves(x1),), (proves(forall(x0, x1)),)),
]

# Nine copies of wff(p), consumed left to right by
#   [ax-1 at (p, p->p)]: p, and wi's p p
#   [ax-2 at (p, p->p, p)]: p, wi's p p, p
#   [ax-1 at (p, p)]: p p
FAN_OUT_9 = seq(Dup(), par(Dup(), Dup()), par(Dup(), Dup(), Dup(), Dup()), par(Dup(), Id(7)))
WI, MP, AX1, AX2 = Gen("wi"), Gen("ax-mp"), Gen("ax-1"), Gen("ax-2")

# from nine wff(p): |- p->((p->p)->p), |- that->((p->(p->p))->(p->p)), |- p->(p->p)
ID_AXIOMS = [par(Id(1), WI, Id(1), WI, Id(1), Id(2)), par(AX1, AX2, AX1)]
ID_TAIL = [par(MP, Id(1)), Sym(1, 1), MP]
ID_BODY = seq(FAN_OUT_9, *ID_AXIOMS, *ID_TAIL)


def _thm(name, params, hyps, concs, body) -> TheoremStmt:
    m = len(params)
    return TheoremStmt(name, SyntaxMap(m, hyps), SyntaxMap(m, concs), body, tuple(params))


def _own_span(rule: ProofGenerator) -> TheoremStmt:
    return TheoremStmt(f"{rule.name}-span", rule.src, rule.tgt, Gen(rule.name), rule.params)


THEOREMS = [_own_span(r) for r in RULES] + [
    _thm("wn-retyped", "p", (wff(neg(x0)),), (wff(neg(neg(x0))),), Gen("wn")),
    _thm("wnwi", "pq", (wff(x0), wff(x1)), (wff(neg(imp(x0, x1))),), seq(WI, Gen("wn"))),
    _thm("id", "p", (wff(x0),), (proves(imp(x0, x0)),), ID_BODY),
    _thm("id-fanned", "p", (wff(x0),) * 9, (proves(imp(x0, x0)),), seq(*ID_AXIOMS, *ID_TAIL)),
    _thm("id-id", "p", (wff(x0),), (proves(imp(x0, x0)),), seq(Gen("id"), Id(1))),
    _thm(
        "wnwi-dropped",
        "pqr",
        (wff(x0), wff(x1), wff(x2)),
        (wff(neg(imp(x0, x1))),),
        par(Gen("wnwi"), Drop()),
    ),
]


def build_fol_env() -> Env:
    return Env(SIGNATURE, {r.name: r for r in RULES}, tuple(THEOREMS))


# negative tests: id with the last ax-mp fed its hypotheses in the wrong order,
# and id claimed with the weaker conclusion |- p
ID_UNCROSSED_BODY = seq(FAN_OUT_9, *ID_AXIOMS, par(MP, Id(1)), MP)

NEGATIVE_THEOREMS = [
    _thm("id-uncrossed", "p", (wff(x0),), (proves(imp(x0, x0)),), ID_UNCROSSED_BODY),
    _thm("id-specialized", "p", (wff(x0),), (proves(x0),), ID_BODY),
]


def build_negative_env() -> Env:
    return Env(SIGNATURE, {r.name: r for r in RULES}, tuple(NEGATIVE_THEOREMS))
