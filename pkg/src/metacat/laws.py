"""Seeded law suites for syntax maps and derivations.

Each suite draws its own instances from a string-seeded RNG and returns a
:class:`LawReport` counting cases per law. The comparisons are semantic:
values are compared after fresh-leaf canonicalization, and definedness must
agree on both sides.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import hypergraph as hg
from .errors import EvalFailure
from .oracle import canonicalize, random_chain, random_derivation, random_hypotheses, random_smap, random_tree
from .proof import (
    Derivation,
    Env,
    Id,
    Par,
    Seq,
    Sym,
    TheoremStmt,
    check_theorem,
    compile_derivation,
    derivation_arity,
)
from .syntax import FreshCounter, Signature, Tree, instantiate, match_against, rename, smap_compose


@dataclass
class LawReport:
    cases: Counter = field(default_factory=Counter)
    failures: Counter = field(default_factory=Counter)
    defined: Counter = field(default_factory=Counter)  # cases where both sides were defined
    first_failure: dict[str, str] = field(default_factory=dict)

    def record(self, law: str, ok: bool, defined: bool = True, note: str = "") -> None:
        self.cases[law] += 1
        self.defined[law] += defined
        if not ok:
            self.failures[law] += 1
            self.first_failure.setdefault(law, note)

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        return [
            f"{law}: {self.cases[law] - self.failures[law]}/{self.cases[law]} pass"
            f" ({self.defined[law]} defined)"
            for law in sorted(self.cases)
        ]


def _eval(h: hg.OpenHypergraph, inputs: Sequence[Tree], m: int):
    try:
        return canonicalize(hg.evaluate(h, inputs, FreshCounter(m)), m).trees
    except EvalFailure:
        return None


# syntax maps


def syntax_laws(sig: Signature, cases: int = 1000, seed=0) -> LawReport:
    """Functoriality, retraction, exact round trip and ``u+`` against instantiate."""
    report = LawReport()
    rng = random.Random(f"syntax-laws:{seed}")
    # without constants a closed tree cannot exist, so contexts must be nonempty
    lo = 0 if any(op.arity == 0 for op in sig) else 1
    for i in range(cases):
        m, n, k = rng.randint(lo, 3), rng.randint(lo, 3), rng.randint(0, 3)
        u, v = random_smap(rng, sig, m, n), random_smap(rng, sig, n, k)
        ctx = rng.randint(1, 3)
        args = tuple(random_tree(rng, sig, ctx) for _ in range(m))
        note = f"case {i}: u={u}, v={v}"

        want = instantiate(v, instantiate(u, args))
        report.record("instantiate functoriality", instantiate(smap_compose(u, v), args) == want, note=note)

        plus, minus = hg.compile_plus(u), hg.compile_minus(u)
        image = instantiate(u, args)
        report.record("u+ evaluates as instantiate", _eval(plus, args, ctx) == canonicalize(image, ctx).trees, note=note)

        functor = hg.hg_sequential(plus, hg.compile_plus(v))
        report.record("u+ ; v+ = (u;v)+", _eval(functor, args, ctx) == canonicalize(want, ctx).trees, note=note)

        # u+ ; u- ; u+ : the fresh leaves made for unused metavariables are discarded again
        loop = hg.hg_sequential(hg.hg_sequential(plus, minus), hg.compile_plus(u))
        try:
            again = hg.evaluate(loop, args, FreshCounter(1000))
        except EvalFailure:
            again = None
        report.record("retraction u+;u-;u+ = u+", again == image, note=note)

        if all(u.usage()):
            back = hg.evaluate(hg.hg_sequential(plus, minus), args, FreshCounter(1000))
            report.record("exact round trip u+;u-", back == args, note=note)

        # u- against match_against, on images and on arbitrary subjects
        subjects = image if rng.random() < 0.5 else tuple(random_tree(rng, sig, ctx) for _ in range(n))
        bound = match_against(u, subjects, FreshCounter(ctx))
        expected = None if bound is None else canonicalize(bound, ctx).trees
        report.record("u- agrees with match_against", _eval(minus, subjects, ctx) == expected, bound is not None, note)
    return report


# derivations


def _instance(rng: random.Random, env: Env, size: int):
    """A random derivation with plausible inputs over a context of m leaves."""
    d, first = random_derivation(rng, env, size)
    m = rng.randint(1, 3)
    inputs = tuple(t for block in first for t in random_hypotheses(rng, env, block, m))
    return d, inputs, m


def _follow(rng: random.Random, env: Env, d: Derivation) -> Derivation:
    """A random continuation of ``d``; half of them use structure only, so are total."""
    _, b = derivation_arity(d, env)
    pool = env if rng.random() < 0.5 else Env(env.signature, {}, ())
    return random_chain(rng, pool, b, rng.randint(1, 2))[0]


def _agree(env: Env, left: Derivation, right: Derivation, inputs, m: int) -> tuple[bool, bool]:
    x = _eval(compile_derivation(left, env), inputs, m)
    y = _eval(compile_derivation(right, env), inputs, m)
    return x == y, x is not None


def monoidal_laws(env: Env, cases: int = 500, seed=0) -> LawReport:
    """Associativity, units, interchange and symmetry naturality, semantically."""
    report = LawReport()
    rng = random.Random(f"monoidal-laws:{seed}")
    for i in range(cases):
        d1, in1, m = _instance(rng, env, rng.randint(1, 3))
        d2 = _follow(rng, env, d1)
        d3 = _follow(rng, env, Seq(d1, d2))
        a1, b1 = derivation_arity(d1, env)
        note = f"case {i}: {d1} / {d2} / {d3}"

        ok, defined = _agree(env, Seq(Seq(d1, d2), d3), Seq(d1, Seq(d2, d3)), in1, m)
        report.record("sequential associativity", ok, defined, note)
        ok, defined = _agree(env, Seq(Id(a1), d1), d1, in1, m)
        report.record("left unit", ok, defined, note)
        ok, defined = _agree(env, Seq(d1, Id(b1)), d1, in1, m)
        report.record("right unit", ok, defined, note)
        ok, defined = _agree(env, Par(d1, Id(0)), d1, in1, m)
        report.record("monoidal unit", ok, defined, note)

        # a second, independent piece for the two-sided laws
        e1, in2, m2 = _instance(rng, env, rng.randint(1, 3))
        e1_inputs = tuple(_shift(t, m, m2) for t in in2)
        e2 = _follow(rng, env, e1)
        a2, b2 = derivation_arity(e1, env)
        ctx = m + m2
        inputs = in1 + e1_inputs

        ok, defined = _agree(env, Seq(Par(d1, e1), Par(d2, e2)), Par(Seq(d1, d2), Seq(e1, e2)), inputs, ctx)
        report.record("interchange", ok, defined, note)
        ok, defined = _agree(env, Seq(Par(d1, e1), Sym(b1, b2)), Seq(Sym(a1, a2), Par(e1, d1)), inputs, ctx)
        report.record("symmetry naturality", ok, defined, note)
        ok, defined = _agree(env, Par(Par(d1, e1), d2), Par(d1, Par(e1, d2)), inputs + _pad(rng, env, d2, ctx), ctx)
        report.record("parallel associativity", ok, defined, note)
    return report


def _shift(t: Tree, by: int, m: int) -> Tree:
    return rename(t, {i: i + by for i in range(m)})


def _pad(rng: random.Random, env: Env, d: Derivation, m: int) -> tuple[Tree, ...]:
    a, _ = derivation_arity(d, env)
    return tuple(random_tree(rng, env.signature, m, 2) for _ in range(a))


# re-association of theorem bodies


def _chain(d: Derivation, kind: type) -> list[Derivation]:
    if isinstance(d, kind):
        left, right = (d.first, d.second) if kind is Seq else (d.left, d.right)
        return _chain(left, kind) + _chain(right, kind)
    return [d]


def _refold(rng: random.Random, kind: type, items: list[Derivation]) -> Derivation:
    if len(items) == 1:
        return items[0]
    cut = rng.randrange(1, len(items))
    return kind(_refold(rng, kind, items[:cut]), _refold(rng, kind, items[cut:]))


def reassociate(d: Derivation, env: Env, rng: random.Random) -> Derivation:
    """Rebracket every Seq and Par chain at random and sprinkle identities."""
    if isinstance(d, (Seq, Par)):
        kind = type(d)
        items = [reassociate(x, env, rng) for x in _chain(d, kind)]
        out = _refold(rng, kind, items)
        if kind is Par and rng.random() < 0.3:
            out = Par(out, Id(0)) if rng.random() < 0.5 else Par(Id(0), out)
        return out
    if rng.random() < 0.3:
        a, b = derivation_arity(d, env)
        return Seq(Id(a), d) if rng.random() < 0.5 else Seq(d, Id(b))
    return d


def reassociation_invariance(
    env: Env, variants: int = 20, seed=0, check: Callable = check_theorem
) -> LawReport:
    """check status is unchanged by re-bracketing the body of every theorem in ``env``."""
    report = LawReport()
    rng = random.Random(f"reassociate:{seed}")
    working = env.rules_only()
    for thm in env.theorems:
        base = check(thm, working)
        for _ in range(variants):
            body = reassociate(thm.body, working, rng)
            variant = TheoremStmt(thm.name, thm.s, thm.t, body, thm.params)
            other = check(variant, working)
            same = (other.status, other.failure_kind) == (base.status, base.failure_kind)
            report.record(thm.name, same, base.valid, f"{thm.name}: {body}")
        if base.valid:
            working = Env(working.signature, working.generators, working.theorems + (thm,))
    return report
