"""Reference checker by direct recursion over derivations, plus a differential harness.

Nothing here touches the hypergraph IR: a generator application is
``match_against(src)`` followed by ``instantiate(tgt)``, and theorem references
are always applied through their span. :func:`differential_run` pits this
against the IR checker on seeded random instances.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import hypergraph as hg
from .errors import EvalFailure, StaticError
from .proof import (
    CheckReport,
    Derivation,
    Drop,
    Dup,
    Env,
    Gen,
    Id,
    Par,
    Seq,
    Sym,
    TheoremStmt,
    check_graph,
    check_theorem,
    derivation_arity,
    generic_leaves,
    judge,
    static_check,
)
from .syntax import (
    FreshCounter,
    Leaf,
    Node,
    Signature,
    SyntaxMap,
    Tree,
    instantiate,
    leaves,
    match_against,
    rename,
    smap_compose,
)


def eval_direct(
    d: Derivation, inputs: Sequence[Tree], env: Env, fresh: FreshCounter
) -> tuple[Tree, ...] | None:
    """Evaluate ``d`` on ``inputs``; None where the partial function is undefined."""
    a, _ = derivation_arity(d, env)
    if len(inputs) != a:
        raise StaticError(f"derivation expects {a} inputs, got {len(inputs)}")
    return _eval(d, tuple(inputs), env, fresh)


def _eval(d: Derivation, xs: tuple[Tree, ...], env: Env, fresh: FreshCounter):
    if isinstance(d, Gen):
        gen = env.lookup(d.name)
        bindings = match_against(gen.src, xs, fresh)
        return None if bindings is None else instantiate(gen.tgt, bindings)
    if isinstance(d, Id):
        return xs
    if isinstance(d, Sym):
        return xs[d.a :] + xs[: d.a]
    if isinstance(d, Dup):
        return xs + xs
    if isinstance(d, Drop):
        return ()
    if isinstance(d, Seq):
        mid = _eval(d.first, xs, env, fresh)
        return None if mid is None else _eval(d.second, mid, env, fresh)
    split, _ = derivation_arity(d.left, env)
    left = _eval(d.left, xs[:split], env, fresh)
    if left is None:
        return None
    right = _eval(d.right, xs[split:], env, fresh)
    return None if right is None else left + right


def check_direct(thm: TheoremStmt, env: Env) -> CheckReport:
    try:
        static_check(thm, env)
    except StaticError as exc:
        return CheckReport("error", message=str(exc))
    inputs = instantiate(thm.s, generic_leaves(thm.m))
    result = _eval(thm.body, inputs, env, FreshCounter(thm.m))
    if result is None:
        return CheckReport("invalid", message="undefined")
    return judge(thm, result)


@dataclass(frozen=True)
class CanonicalOutputs:
    trees: tuple[Tree, ...]
    boundary_m: int


def canonicalize(outputs: Sequence[Tree], boundary_m: int) -> CanonicalOutputs:
    """Renumber leaves >= boundary_m consecutively by first preorder occurrence."""
    mapping: dict[int, int] = {}
    for t in outputs:
        for i in leaves(t):
            if i >= boundary_m and i not in mapping:
                mapping[i] = boundary_m + len(mapping)
    return CanonicalOutputs(tuple(rename(t, mapping) for t in outputs), boundary_m)


# random instances
#
# Derivations are chains of ``size`` layers. A layer is a parallel composite of
# blocks whose input arities sum to the previous layer's output width; blocks
# are generators (weight 6), identities (2), dup (1.5), drop (1) and
# symmetries (1.5). Dup is disabled at width >= MAX_WIDTH. Sequential and
# parallel folds are associated randomly so both bracketings occur. Claimed
# hypotheses instantiate each first-layer generator's source pattern at random
# terms, so matching succeeds often; claimed conclusions are the oracle's own
# result (fresh leaves replaced by boundary leaves) with probability 0.6, a
# perturbed copy of it with probability 0.25, otherwise random.

MAX_WIDTH = 6
MAX_DEPTH = 3


def random_tree(rng: random.Random, sig: Signature, m: int, depth: int = MAX_DEPTH) -> Tree:
    ops = list(sig) if depth > 0 else [op for op in sig if op.arity == 0]
    if m > 0 and (not ops or rng.random() < 0.35):
        return Leaf(rng.randrange(m))
    if not ops:
        raise ValueError("cannot build a closed tree without constants")
    op = rng.choice(ops)
    return Node(op, tuple(random_tree(rng, sig, m, depth - 1) for _ in range(op.arity)))


def random_smap(rng: random.Random, sig: Signature, m: int, n: int, depth: int = MAX_DEPTH) -> SyntaxMap:
    return SyntaxMap(m, tuple(random_tree(rng, sig, m, depth) for _ in range(n)))


def _fold(rng: random.Random, ctor, items: list[Derivation]) -> Derivation:
    if len(items) == 1:
        return items[0]
    cut = rng.randrange(1, len(items))
    return ctor(_fold(rng, ctor, items[:cut]), _fold(rng, ctor, items[cut:]))


def _block(rng: random.Random, env: Env, room: int, width: int) -> tuple[Derivation, int, int]:
    gens = [env.lookup(name) for name in env.names()]
    options: list[tuple[float, str]] = []
    if any(g.a <= room for g in gens):
        options.append((6.0, "gen"))
    options.append((2.0, "id"))
    if width < MAX_WIDTH:
        options.append((1.5, "dup"))
    options.append((1.0, "drop"))
    if room >= 2:
        options.append((1.5, "sym"))
    kind = rng.choices([k for _, k in options], weights=[w for w, _ in options])[0]
    if kind == "gen":
        g = rng.choice([g for g in gens if g.a <= room])
        return Gen(g.name), g.a, g.b
    if kind == "id":
        k = rng.randint(1, min(room, 2))
        return Id(k), k, k
    if kind == "dup":
        return Dup(), 1, 2
    if kind == "drop":
        return Drop(), 1, 0
    a = rng.randint(1, room - 1)
    b = rng.randint(1, room - a)
    return Sym(a, b), a + b, a + b


def _layer(rng: random.Random, env: Env, width: int) -> tuple[list[Derivation], int]:
    blocks, out = [], 0
    room = width
    while room > 0:
        d, a, b = _block(rng, env, room, out + room)
        blocks.append(d)
        room -= a
        out += b
    return blocks, out


def random_chain(rng: random.Random, env: Env, width: int, size: int) -> tuple[Derivation, int]:
    """``size`` random layers starting from ``width`` wires, and the final width."""
    layers: list[Derivation] = []
    for _ in range(size):
        if width == 0:
            layers.append(Id(0))
            continue
        blocks, width = _layer(rng, env, width)
        layers.append(_fold(rng, Par, blocks))
    return _fold(rng, Seq, layers), width


def random_derivation(rng: random.Random, env: Env, size: int) -> tuple[Derivation, list[Derivation]]:
    """A well-typed derivation of ``size`` layers, and the blocks of its first layer."""
    first: list[Derivation] = []
    width = 0
    for _ in range(rng.randint(1, 3)):
        d, a, b = _block(rng, env, MAX_WIDTH, width)
        if a == 0:
            continue
        first.append(d)
        width += b
    if not first:
        first = [Id(1)]
        width = 1
    head = _fold(rng, Par, first)
    if size == 1:
        return head, first
    rest, _ = random_chain(rng, env, width, size - 1)
    return Seq(head, rest), first


def random_hypotheses(rng: random.Random, env: Env, block: Derivation, m: int) -> tuple[Tree, ...]:
    a, _ = derivation_arity(block, env)
    if isinstance(block, Gen) and rng.random() < 0.85:
        gen = env.lookup(block.name)
        args = random_smap(rng, env.signature, m, gen.m, depth=1)
        return smap_compose(args, gen.src).outputs
    return tuple(random_tree(rng, env.signature, m, 2) for _ in range(a))


def random_instance(env: Env, seed, size: int) -> tuple[Derivation, TheoremStmt]:
    rng = random.Random(f"instance:{seed}:{size}")
    d, first = random_derivation(rng, env, size)
    m = rng.randint(1, 3)
    s = SyntaxMap(m, tuple(t for block in first for t in random_hypotheses(rng, env, block, m)))
    _, b = derivation_arity(d, env)
    result = _eval(d, instantiate(s, generic_leaves(m)), env, FreshCounter(m))
    roll = rng.random()
    if result is not None and roll < 0.85:
        fill = {i: rng.randrange(m) for t in result for i in leaves(t) if i >= m}
        outs = [rename(t, fill) for t in result]
        if roll >= 0.6 and outs:
            outs[rng.randrange(len(outs))] = random_tree(rng, env.signature, m, 2)
        t = SyntaxMap(m, tuple(outs))
    else:
        t = random_smap(rng, env.signature, m, b, 2)
    return d, TheoremStmt("random", s, t, d)


def constructor_counts(d: Derivation) -> Counter:
    counts: Counter = Counter()
    stack = [d]
    while stack:
        x = stack.pop()
        counts[type(x).__name__] += 1
        if isinstance(x, Seq):
            stack += [x.first, x.second]
        elif isinstance(x, Par):
            stack += [x.left, x.right]
    return counts


@dataclass
class DifferentialSummary:
    trials: int = 0
    statuses: Counter = field(default_factory=Counter)
    divergences: int = 0
    first_divergence: str | None = None

    def line(self) -> str:
        parts = ", ".join(f"{k} {self.statuses[k]}" for k in ("valid", "invalid", "error"))
        return f"oracle: {self.trials} trials ({parts}), {self.divergences} divergences"


def _outcome(report: CheckReport) -> tuple[str, str | None]:
    mismatch = report.failure_kind == "ConclusionMismatch"
    return report.status, ("mismatch" if mismatch else None)


def compare_instance(thm: TheoremStmt, env: Env) -> str | None:
    """Describe how the two engines disagree on ``thm``, or None if they agree."""
    ir, direct = check_theorem(thm, env), check_direct(thm, env)
    if _outcome(ir) != _outcome(direct):
        return f"status: ir {ir.status} ({ir.detail()}) vs direct {direct.status} ({direct.detail()})"
    if ir.status == "error":
        return None
    leaves_ = generic_leaves(thm.m)
    try:
        ir_value = hg.evaluate(check_graph(thm, env), leaves_, FreshCounter(thm.m))
    except EvalFailure:
        ir_value = None
    direct_value = _eval(thm.body, instantiate(thm.s, leaves_), env, FreshCounter(thm.m))
    if (ir_value is None) != (direct_value is None):
        return "definedness differs"
    if ir_value is not None and canonicalize(ir_value, thm.m) != canonicalize(direct_value, thm.m):
        return "values differ after canonicalization"
    return None


def differential_run(env: Env, trials: int, seed) -> DifferentialSummary:
    summary = DifferentialSummary()
    if not env.names():
        return summary
    for i in range(trials):
        size = random.Random(f"size:{seed}:{i}").randint(1, 4)
        _, thm = random_instance(env, f"{seed}:{i}", size)
        summary.trials += 1
        summary.statuses[check_theorem(thm, env).status] += 1
        problem = compare_instance(thm, env)
        if problem is not None:
            summary.divergences += 1
            if summary.first_divergence is None:
                summary.first_divergence = f"trial {i} (seed {seed}): {problem}"
    return summary
