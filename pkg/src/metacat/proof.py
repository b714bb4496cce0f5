"""Proof generators, derivations and the checker.

A generator ``f : a -> b`` carries a span ``a <- m -> b`` of syntax maps. A
derivation is a symmetric monoidal term over generators, and a theorem pairs a
derivation with a claimed type ``(s, t)``.

Checking feeds the generic metavariables ``x0 .. x{m-1}`` through ``s`` and
the compiled derivation, then compares the result with ``t`` at the same
leaves. Leaves created fresh during evaluation stand for arbitrary terms, so
the comparison lets each fresh leaf be instantiated (consistently) to whatever
the claimed conclusion has in that position; boundary leaves are rigid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from . import hypergraph as hg
from .errors import (
    ArityMismatch,
    DuplicateName,
    EvalFailure,
    InvalidTheorem,
    StaticError,
    UnknownGenerator,
)
from .syntax import (
    FreshCounter,
    Leaf,
    Node,
    Signature,
    SyntaxMap,
    Tree,
    instantiate,
    render_tree,
    tree_equal,
)


@dataclass(frozen=True)
class ProofGenerator:
    name: str
    src: SyntaxMap
    tgt: SyntaxMap
    params: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.src.m != self.tgt.m:
            raise ArityMismatch(
                f"{self.name}: source and target contexts differ ({self.src.m} vs {self.tgt.m})"
            )

    @property
    def m(self) -> int:
        return self.src.m

    @property
    def a(self) -> int:
        return self.src.n

    @property
    def b(self) -> int:
        return self.tgt.n


# derivation terms


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Id:
    n: int


@dataclass(frozen=True)
class Sym:
    a: int
    b: int


@dataclass(frozen=True)
class Seq:
    first: "Derivation"
    second: "Derivation"


@dataclass(frozen=True)
class Par:
    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class Dup:
    pass


@dataclass(frozen=True)
class Drop:
    pass


Derivation = Union[Gen, Id, Sym, Seq, Par, Dup, Drop]


def seq(*ds: Derivation) -> Derivation:
    """Left-associated sequential composite."""
    out = ds[0]
    for d in ds[1:]:
        out = Seq(out, d)
    return out


def par(*ds: Derivation) -> Derivation:
    out = ds[0]
    for d in ds[1:]:
        out = Par(out, d)
    return out


@dataclass(frozen=True)
class TheoremStmt:
    name: str
    s: SyntaxMap
    t: SyntaxMap
    body: Derivation
    params: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.s.m != self.t.m:
            raise ArityMismatch(
                f"{self.name}: hypothesis and conclusion contexts differ ({self.s.m} vs {self.t.m})"
            )

    @property
    def m(self) -> int:
        return self.s.m

    def as_generator(self) -> ProofGenerator:
        return ProofGenerator(self.name, self.s, self.t, self.params)


@dataclass(frozen=True)
class Env:
    """A formal system: signature, rules, and the theorems usable as derived rules."""

    signature: Signature
    generators: dict[str, ProofGenerator] = field(default_factory=dict)
    theorems: tuple[TheoremStmt, ...] = ()

    def __post_init__(self):
        names = set(self.generators)
        for thm in self.theorems:
            if thm.name in names:
                raise DuplicateName(f"duplicate rule or theorem name {thm.name!r}")
            names.add(thm.name)

    def theorem(self, name: str) -> TheoremStmt | None:
        for thm in self.theorems:
            if thm.name == name:
                return thm
        return None

    def lookup(self, name: str) -> ProofGenerator:
        gen = self.generators.get(name)
        if gen is not None:
            return gen
        thm = self.theorem(name)
        if thm is None:
            raise UnknownGenerator(f"unknown rule or theorem {name!r}")
        return thm.as_generator()

    def names(self) -> list[str]:
        return list(self.generators) + [thm.name for thm in self.theorems]

    def rules_only(self) -> "Env":
        return Env(self.signature, dict(self.generators), ())


def derivation_arity(d: Derivation, env: Env) -> tuple[int, int]:
    if isinstance(d, Gen):
        gen = env.lookup(d.name)
        return gen.a, gen.b
    if isinstance(d, Id):
        return d.n, d.n
    if isinstance(d, Sym):
        return d.a + d.b, d.a + d.b
    if isinstance(d, Dup):
        return 1, 2
    if isinstance(d, Drop):
        return 1, 0
    if isinstance(d, Seq):
        a, b = derivation_arity(d.first, env)
        b2, c = derivation_arity(d.second, env)
        if b != b2:
            raise ArityMismatch(f"sequential composite: {a}->{b} then {b2}->{c}")
        return a, c
    if isinstance(d, Par):
        a1, b1 = derivation_arity(d.left, env)
        a2, b2 = derivation_arity(d.right, env)
        return a1 + a2, b1 + b2
    raise TypeError(f"not a derivation: {d!r}")


@lru_cache(maxsize=1024)
def compile_generator(f: ProofGenerator) -> hg.OpenHypergraph:
    return hg.with_owner(
        hg.hg_sequential(hg.compile_minus(f.src), hg.compile_plus(f.tgt)), hg.Owner(f.name)
    )


def compile_derivation(d: Derivation, env: Env, inline: bool = False) -> hg.OpenHypergraph:
    """Compile to the IR. Theorem references use their span unless ``inline``."""
    derivation_arity(d, env)
    cache: dict[str, hg.OpenHypergraph] = {}

    def go(d: Derivation) -> hg.OpenHypergraph:
        if isinstance(d, Gen):
            thm = env.theorem(d.name) if inline and d.name not in env.generators else None
            if thm is not None:
                return go(thm.body)
            if d.name not in cache:
                cache[d.name] = compile_generator(env.lookup(d.name))
            # fresh owner per occurrence so diagrams keep instances apart
            return hg.with_owner(cache[d.name], hg.Owner(d.name))
        if isinstance(d, Id):
            return hg.hg_identity(d.n)
        if isinstance(d, Sym):
            return hg.hg_symmetry(d.a, d.b)
        if isinstance(d, Dup):
            return hg.hg_spider(1, 2)
        if isinstance(d, Drop):
            return hg.hg_spider(1, 0)
        if isinstance(d, Seq):
            return hg.hg_sequential(go(d.first), go(d.second))
        return hg.hg_parallel(go(d.left), go(d.right))

    return go(d)


# checking


@dataclass(frozen=True)
class ConclusionMismatch:
    index: int
    expected: Tree
    actual: Tree

    def __str__(self) -> str:
        return (
            f"conclusion {self.index}: expected {render_tree(self.expected)}, "
            f"actual {render_tree(self.actual)}"
        )


@dataclass(frozen=True)
class CheckReport:
    status: str  # "valid" | "invalid" | "error"
    failure: EvalFailure | ConclusionMismatch | None = None
    message: str = ""
    # raw evaluation result, fresh leaves included; empty unless evaluation finished
    conclusion: tuple[Tree, ...] = ()
    # values given to fresh leaves to reach the claimed conclusion
    generalization: dict[int, Tree] = field(default_factory=dict, compare=False)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def failure_kind(self) -> str | None:
        return None if self.failure is None else type(self.failure).__name__

    def detail(self) -> str:
        if self.status == "error":
            return self.message
        if self.failure is None:
            return ""
        return f"{self.failure_kind}: {self.failure}"


def generic_leaves(m: int) -> tuple[Leaf, ...]:
    return tuple(Leaf(i) for i in range(m))


def _generalize(actual: Tree, expected: Tree, m: int, binding: dict[int, Tree]) -> bool:
    """Match ``actual`` onto ``expected`` treating leaves >= m as pattern variables."""
    stack = [(actual, expected)]
    while stack:
        a, e = stack.pop()
        if isinstance(a, Leaf):
            if a.id < m:
                if not (isinstance(e, Leaf) and e.id == a.id):
                    return False
            elif a.id in binding:
                if not tree_equal(binding[a.id], e):
                    return False
            else:
                binding[a.id] = e
        elif isinstance(e, Leaf) or a.op != e.op:
            return False
        else:
            stack.extend(zip(a.children, e.children))
    return True


def compare_conclusion(
    actual: Sequence[Tree], expected: Sequence[Tree], m: int
) -> tuple[ConclusionMismatch | None, dict[int, Tree]]:
    binding: dict[int, Tree] = {}
    for i, (a, e) in enumerate(zip(actual, expected)):
        if not _generalize(a, e, m, binding):
            return ConclusionMismatch(i, e, a), binding
    return None, binding


def resolved_conclusion(report: CheckReport) -> tuple[Tree, ...]:
    """The conclusion with fresh leaves replaced by their generalization."""
    binding = report.generalization

    def fill(t: Tree) -> Tree:
        if isinstance(t, Leaf):
            return binding.get(t.id, t)
        return Node(t.op, tuple(fill(c) for c in t.children))

    return tuple(fill(t) for t in report.conclusion)


def static_check(thm: TheoremStmt, env: Env) -> None:
    a, b = derivation_arity(thm.body, env)
    if (a, b) != (thm.s.n, thm.t.n):
        raise ArityMismatch(
            f"{thm.name}: body has arity {a}->{b} but the claimed type is {thm.s.n}->{thm.t.n}"
        )


def judge(thm: TheoremStmt, result: Sequence[Tree]) -> CheckReport:
    expected = instantiate(thm.t, generic_leaves(thm.m))
    mismatch, binding = compare_conclusion(result, expected, thm.m)
    if mismatch is not None:
        return CheckReport("invalid", mismatch, conclusion=tuple(result))
    return CheckReport("valid", conclusion=tuple(result), generalization=binding)


def check_graph(thm: TheoremStmt, env: Env, inline: bool = False) -> hg.OpenHypergraph:
    """The graph evaluated by :func:`check_theorem`: ``s+`` followed by the body."""
    return hg.hg_sequential(hg.compile_plus(thm.s), compile_derivation(thm.body, env, inline))


def check_theorem(thm: TheoremStmt, env: Env, inline: bool = False) -> CheckReport:
    try:
        static_check(thm, env)
        graph = check_graph(thm, env, inline)
    except StaticError as exc:
        return CheckReport("error", message=str(exc))
    try:
        result = hg.evaluate(graph, generic_leaves(thm.m), FreshCounter(thm.m))
    except EvalFailure as failure:
        return CheckReport("invalid", failure)
    return judge(thm, result)


def register_theorem(thm: TheoremStmt, env: Env) -> Env:
    if thm.name in env.generators or env.theorem(thm.name) is not None:
        raise DuplicateName(f"duplicate rule or theorem name {thm.name!r}")
    report = check_theorem(thm, env)
    if not report.valid:
        raise InvalidTheorem(f"{thm.name} does not check: {report.detail()}")
    return Env(env.signature, env.generators, env.theorems + (thm,))


def check_env(env: Env, inline: bool = False) -> list[tuple[TheoremStmt, CheckReport]]:
    """Check theorems in order; each valid theorem becomes usable by later ones."""
    working = env.rules_only()
    reports = []
    for thm in env.theorems:
        report = check_theorem(thm, working, inline)
        reports.append((thm, report))
        if report.valid:
            working = Env(working.signature, working.generators, working.theorems + (thm,))
    return reports


def generator_theorem(f: ProofGenerator) -> TheoremStmt:
    """The theorem stating a generator at its own span."""
    return TheoremStmt(f.name, f.src, f.tgt, Gen(f.name), f.params)
