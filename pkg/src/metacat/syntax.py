"""Signatures, syntax trees and syntax maps.

A syntax map ``m -> n`` is an n-tuple of trees whose leaves are metavariable
indices below ``m``. Composition is substitution of trees for leaves; read
covariantly a map builds terms (:func:`instantiate`), read contravariantly it
is a pattern (:func:`match_against`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import ArityMismatch, DuplicateSymbol, UnknownSymbol


@dataclass(frozen=True)
class OpSymbol:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")


@dataclass(frozen=True)
class Signature:
    ops: tuple[OpSymbol, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for op in self.ops:
            if op.name in index:
                raise DuplicateSymbol(f"duplicate syntax symbol {op.name!r}")
            index[op.name] = op
        object.__setattr__(self, "_index", index)

    def __getitem__(self, name: str) -> OpSymbol:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown syntax symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self) -> Iterator[OpSymbol]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)


def declare_signature(decls: Iterable[tuple[str, int]]) -> Signature:
    return Signature(tuple(OpSymbol(name, arity) for name, arity in decls))


@dataclass(frozen=True)
class Leaf:
    id: int

    def __str__(self) -> str:
        return f"x{self.id}"


@dataclass(frozen=True)
class Node:
    op: OpSymbol
    children: tuple["Tree", ...] = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != self.op.arity:
            raise ArityMismatch(
                f"{self.op.name} takes {self.op.arity} arguments, got {len(self.children)}"
            )

    def __str__(self) -> str:
        return render_tree(self)


Tree = Union[Leaf, Node]


def tree_equal(a: Tree, b: Tree) -> bool:
    # explicit stack: deep trees must not hit the recursion limit
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if isinstance(x, Leaf):
            if not (isinstance(y, Leaf) and x.id == y.id):
                return False
        elif isinstance(y, Leaf) or x.op != y.op:
            return False
        else:
            stack.extend(zip(x.children, y.children))
    return True


def render_tree(t: Tree) -> str:
    if isinstance(t, Leaf):
        return f"x{t.id}"
    return f"{t.op.name}({','.join(render_tree(c) for c in t.children)})"


def leaves(t: Tree) -> Iterator[int]:
    """Leaf ids in left-to-right preorder."""
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            yield x.id
        else:
            stack.extend(reversed(x.children))


def substitute(t: Tree, args: Sequence[Tree]) -> Tree:
    if isinstance(t, Leaf):
        return args[t.id]
    return Node(t.op, tuple(substitute(c, args) for c in t.children))


def rename(t: Tree, mapping: dict[int, int]) -> Tree:
    """Rename leaves; ids absent from ``mapping`` are kept."""
    if isinstance(t, Leaf):
        return Leaf(mapping.get(t.id, t.id))
    return Node(t.op, tuple(rename(c, mapping) for c in t.children))


@dataclass(frozen=True)
class SyntaxMap:
    """An arrow ``m -> len(outputs)`` of the syntax category."""

    m: int
    outputs: tuple[Tree, ...] = ()

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("negative context size")
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for t in self.outputs:
            for i in leaves(t):
                if not 0 <= i < self.m:
                    raise ArityMismatch(f"leaf x{i} outside context of size {self.m}")

    @property
    def n(self) -> int:
        return len(self.outputs)

    def usage(self) -> list[int]:
        """Occurrence count of each metavariable."""
        counts = [0] * self.m
        for t in self.outputs:
            for i in leaves(t):
                counts[i] += 1
        return counts

    def __str__(self) -> str:
        return f"{self.m}->{self.n} ({', '.join(map(render_tree, self.outputs))})"


def smap_identity(n: int) -> SyntaxMap:
    return SyntaxMap(n, tuple(Leaf(i) for i in range(n)))


def smap_compose(u: SyntaxMap, v: SyntaxMap) -> SyntaxMap:
    """``u ; v`` in diagrammatic order: substitute u's outputs into v."""
    if u.n != v.m:
        raise ArityMismatch(f"cannot compose {u.m}->{u.n} with {v.m}->{v.n}")
    return SyntaxMap(u.m, tuple(substitute(t, u.outputs) for t in v.outputs))


def smap_tensor(u: SyntaxMap, v: SyntaxMap) -> SyntaxMap:
    shift = {i: i + u.m for i in range(v.m)}
    return SyntaxMap(u.m + v.m, u.outputs + tuple(rename(t, shift) for t in v.outputs))


class FreshCounter:
    """Allocates leaf ids never seen before in one checking run."""

    def __init__(self, start: int = 0):
        self.next = start

    def leaf(self) -> Leaf:
        leaf = Leaf(self.next)
        self.next += 1
        return leaf


def instantiate(u: SyntaxMap, args: Sequence[Tree]) -> tuple[Tree, ...]:
    if len(args) != u.m:
        raise ArityMismatch(f"map expects {u.m} arguments, got {len(args)}")
    return tuple(substitute(t, args) for t in u.outputs)


def match_tree(pattern: Tree, subject: Tree, binding: dict[int, Tree]) -> bool:
    """Extend ``binding`` so that ``pattern`` instantiates to ``subject``."""
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Leaf):
            bound = binding.get(p.id)
            if bound is None:
                binding[p.id] = s
            elif not tree_equal(bound, s):
                return False
        elif isinstance(s, Leaf) or s.op != p.op:
            return False
        else:
            stack.extend(reversed(list(zip(p.children, s.children))))
    return True


def match_against(
    u: SyntaxMap, subjects: Sequence[Tree], fresh: FreshCounter
) -> tuple[Tree, ...] | None:
    """Recover the metavariables of ``u`` from ``subjects``, or None.

    Metavariables that do not occur in ``u`` are bound to fresh leaves,
    allocated in increasing index order.
    """
    if len(subjects) != u.n:
        raise ArityMismatch(f"pattern has {u.n} outputs, got {len(subjects)} subjects")
    binding: dict[int, Tree] = {}
    for pattern, subject in zip(u.outputs, subjects):
        if not match_tree(pattern, subject, binding):
            return None
    return tuple(binding[i] if i in binding else fresh.leaf() for i in range(u.m))
