"""The ``.mcat`` surface format.

::

    file   := item*
    item   := "syntax" IDENT ":" NAT
            | "rule"  IDENT params? ":" ctx "=>" ctx
            | "thm"   IDENT params? ":" ctx "=>" ctx "{" dexpr "}"
    params := "(" IDENT* ")"
    ctx    := "[" (term ("," term)*)? "]"
    term   := IDENT | IDENT "(" (term ("," term)*)? ")"
    dexpr  := dpar (";" dpar)*
    dpar   := datom ("*" datom)*
    datom  := IDENT | "id" NAT | "sym" NAT NAT | "dup" | "drop" | "(" dexpr ")"

Whitespace is insignificant and ``//`` starts a line comment. A bare
identifier in a term is a metavariable and must be listed in the params;
constants are written with parentheses, ``c()``. ``id3`` is accepted as a
spelling of ``id 3``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import (
    ArityMismatch,
    DuplicateName,
    ParseError,
    Span,
    UnboundMetavariable,
    UnknownSymbol,
    WrongArgCount,
)
from .proof import (
    Derivation,
    Drop,
    Dup,
    Env,
    Gen,
    Id,
    Par,
    ProofGenerator,
    Seq,
    Sym,
    TheoremStmt,
)
from .syntax import Leaf, Node, OpSymbol, Signature, SyntaxMap, Tree

# lexing

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_-]*)|(?P<nat>[0-9]+)"
    r"|(?P<punct>=>|[()\[\]{},:;*])"
)

RESERVED = {"dup", "drop", "sym", "syntax", "rule", "thm"}
_ID_ATOM = re.compile(r"id([0-9]+)")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "nat" | "punct" | "eof"
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = match.lastgroup
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, match.group(), span))
        pos = match.end()
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens


# syntax tree of a source file


@dataclass(frozen=True)
class Term:
    name: str
    args: tuple["Term", ...] | None  # None for a bare identifier
    span: Span


@dataclass(frozen=True)
class DName:
    name: str
    span: Span


@dataclass(frozen=True)
class DId:
    n: int
    span: Span


@dataclass(frozen=True)
class DSym:
    a: int
    b: int
    span: Span


@dataclass(frozen=True)
class DDup:
    span: Span


@dataclass(frozen=True)
class DDrop:
    span: Span


@dataclass(frozen=True)
class DSeq:
    first: "DExpr"
    second: "DExpr"
    span: Span


@dataclass(frozen=True)
class DPar:
    left: "DExpr"
    right: "DExpr"
    span: Span


DExpr = Union[DName, DId, DSym, DDup, DDrop, DSeq, DPar]


@dataclass(frozen=True)
class SyntaxDecl:
    name: str
    arity: int
    span: Span


@dataclass(frozen=True)
class RuleDecl:
    name: str
    params: tuple[tuple[str, Span], ...]
    hyps: tuple[Term, ...]
    concs: tuple[Term, ...]
    span: Span


@dataclass(frozen=True)
class ThmDecl:
    name: str
    params: tuple[tuple[str, Span], ...]
    hyps: tuple[Term, ...]
    concs: tuple[Term, ...]
    body: DExpr
    span: Span


Item = Union[SyntaxDecl, RuleDecl, ThmDecl]


@dataclass(frozen=True)
class SourceFile:
    items: tuple[Item, ...]


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def fail(self, *expected: str, opened: Token | None = None):
        tok = self.tok
        found = "end of file" if tok.kind == "eof" else repr(tok.text)
        want = " or ".join(expected)
        if tok.kind == "eof" and opened is not None:
            raise ParseError(
                f"unclosed {opened.text!r}: expected {want}, found end of file", opened.span, expected
            )
        raise ParseError(f"expected {want}, found {found}", tok.span, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def expect(self, text: str, opened: Token | None = None) -> Token:
        if not self.at(text):
            self.fail(repr(text), opened=opened)
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            self.fail(what)
        return self.advance()

    def nat(self) -> int:
        if self.tok.kind != "nat":
            self.fail("number")
        return int(self.advance().text)

    def file(self) -> SourceFile:
        items = []
        while self.tok.kind != "eof":
            items.append(self.item())
        return SourceFile(tuple(items))

    def item(self) -> Item:
        start = self.tok
        if self.at("syntax"):
            self.advance()
            name = self.ident("symbol name").text
            self.expect(":")
            return SyntaxDecl(name, self.nat(), start.span)
        if self.at("rule") or self.at("thm"):
            self.advance()
            name = self.ident("rule name").text
            params: list[tuple[str, Span]] = []
            if self.at("("):
                opened = self.advance()
                while self.tok.kind == "ident":
                    tok = self.advance()
                    params.append((tok.text, tok.span))
                if not self.at(")"):
                    self.fail("parameter name", "')'", opened=opened)
                self.advance()
            self.expect(":")
            hyps = self.ctx()
            self.expect("=>")
            concs = self.ctx()
            if start.text == "rule":
                return RuleDecl(name, tuple(params), hyps, concs, start.span)
            opened = self.expect("{")
            body = self.dexpr(opened)
            self.expect("}", opened)
            return ThmDecl(name, tuple(params), hyps, concs, body, start.span)
        self.fail("'syntax'", "'rule'", "'thm'")

    def ctx(self) -> tuple[Term, ...]:
        opened = self.expect("[")
        return self.terms("]", opened)

    def terms(self, close: str, opened: Token) -> tuple[Term, ...]:
        terms = []
        if self.at(close):
            self.advance()
            return ()
        while True:
            if self.tok.kind != "ident":
                self.fail("term", repr(close), opened=opened)
            terms.append(self.term())
            if self.at(","):
                self.advance()
            elif self.at(close):
                self.advance()
                return tuple(terms)
            else:
                self.fail("','", repr(close), opened=opened)

    def term(self) -> Term:
        tok = self.advance()
        if not self.at("("):
            return Term(tok.text, None, tok.span)
        opened = self.advance()
        return Term(tok.text, self.terms(")", opened), tok.span)

    def dexpr(self, opened: Token) -> DExpr:
        expr = self.dpar(opened)
        while self.at(";"):
            op = self.advance()
            expr = DSeq(expr, self.dpar(opened), op.span)
        return expr

    def dpar(self, opened: Token) -> DExpr:
        expr = self.datom(opened)
        while self.at("*"):
            op = self.advance()
            expr = DPar(expr, self.datom(opened), op.span)
        return expr

    def datom(self, opened: Token) -> DExpr:
        tok = self.tok
        if self.at("("):
            inner_open = self.advance()
            expr = self.dexpr(inner_open)
            self.expect(")", inner_open)
            return expr
        if tok.kind != "ident":
            self.fail("derivation", opened=opened)
        self.advance()
        if tok.text == "id" and self.tok.kind == "nat":
            return DId(self.nat(), tok.span)
        numbered = _ID_ATOM.fullmatch(tok.text)
        if numbered:
            return DId(int(numbered.group(1)), tok.span)
        if tok.text == "sym":
            a = self.nat()
            return DSym(a, self.nat(), tok.span)
        if tok.text == "dup":
            return DDup(tok.span)
        if tok.text == "drop":
            return DDrop(tok.span)
        return DName(tok.text, tok.span)


def parse(text: str) -> SourceFile:
    return _Parser(text).file()


# elaboration


def _is_reserved(name: str) -> bool:
    return name in RESERVED or _ID_ATOM.fullmatch(name) is not None


class _Elaborator:
    def __init__(self):
        self.signature = Signature()
        self.generators: dict[str, ProofGenerator] = {}
        self.theorems: list[TheoremStmt] = []
        self.arity: dict[str, tuple[int, int]] = {}

    def declare_syntax(self, decls: list[SyntaxDecl]) -> None:
        ops: list[OpSymbol] = []
        seen: set[str] = set()
        for decl in decls:
            if decl.name in seen:
                raise DuplicateName(f"syntax symbol {decl.name!r} declared twice", decl.span)
            seen.add(decl.name)
            ops.append(OpSymbol(decl.name, decl.arity))
        self.signature = Signature(tuple(ops))

    def term(self, term: Term, params: dict[str, int]) -> Tree:
        if term.args is None:
            if term.name in params:
                return Leaf(params[term.name])
            if term.name in self.signature and self.signature[term.name].arity == 0:
                raise UnboundMetavariable(
                    f"{term.name!r} is not a parameter; write {term.name}() for the constant",
                    term.span,
                )
            if term.name in self.signature:
                raise UnboundMetavariable(
                    f"{term.name!r} is not a parameter; {term.name} is a syntax symbol of arity "
                    f"{self.signature[term.name].arity}",
                    term.span,
                )
            raise UnknownSymbol(f"{term.name!r} is neither a parameter nor a syntax symbol", term.span)
        if term.name not in self.signature:
            raise UnknownSymbol(f"unknown syntax symbol {term.name!r}", term.span)
        op = self.signature[term.name]
        if len(term.args) != op.arity:
            raise WrongArgCount(
                f"{op.name} takes {op.arity} arguments, got {len(term.args)}", term.span
            )
        return Node(op, tuple(self.term(a, params) for a in term.args))

    def span_of(self, decl: RuleDecl | ThmDecl) -> tuple[SyntaxMap, SyntaxMap, tuple[str, ...]]:
        if _is_reserved(decl.name):
            raise DuplicateName(f"{decl.name!r} is a reserved word", decl.span)
        if decl.name in self.arity:
            raise DuplicateName(f"rule or theorem {decl.name!r} already defined", decl.span)
        params: dict[str, int] = {}
        for name, span in decl.params:
            if name in params:
                raise DuplicateName(f"parameter {name!r} listed twice", span)
            params[name] = len(params)
        m = len(params)
        s = SyntaxMap(m, tuple(self.term(t, params) for t in decl.hyps))
        t = SyntaxMap(m, tuple(self.term(t, params) for t in decl.concs))
        return s, t, tuple(params)

    def derivation(self, expr: DExpr) -> tuple[Derivation, int, int]:
        if isinstance(expr, DName):
            if expr.name not in self.arity:
                raise UnknownSymbol(f"unknown rule or theorem {expr.name!r}", expr.span)
            a, b = self.arity[expr.name]
            return Gen(expr.name), a, b
        if isinstance(expr, DId):
            return Id(expr.n), expr.n, expr.n
        if isinstance(expr, DSym):
            k = expr.a + expr.b
            return Sym(expr.a, expr.b), k, k
        if isinstance(expr, DDup):
            return Dup(), 1, 2
        if isinstance(expr, DDrop):
            return Drop(), 1, 0
        if isinstance(expr, DSeq):
            d1, a, b = self.derivation(expr.first)
            d2, b2, c = self.derivation(expr.second)
            if b != b2:
                raise ArityMismatch(
                    f"';' joins {b} outputs to {b2} inputs", expr.span
                )
            return Seq(d1, d2), a, c
        d1, a1, b1 = self.derivation(expr.left)
        d2, a2, b2 = self.derivation(expr.right)
        return Par(d1, d2), a1 + a2, b1 + b2

    def item(self, item: Item) -> None:
        if isinstance(item, SyntaxDecl):
            return
        s, t, params = self.span_of(item)
        if isinstance(item, RuleDecl):
            self.generators[item.name] = ProofGenerator(item.name, s, t, params)
        else:
            body, a, b = self.derivation(item.body)
            if (a, b) != (s.n, t.n):
                raise ArityMismatch(
                    f"body of {item.name} has arity {a}->{b} but its statement is {s.n}->{t.n}",
                    item.span,
                )
            self.theorems.append(TheoremStmt(item.name, s, t, body, params))
        self.arity[item.name] = (s.n, t.n)


def elaborate(source: SourceFile) -> Env:
    """Resolve names and build the environment. Errors carry source spans."""
    elab = _Elaborator()
    elab.declare_syntax([i for i in source.items if isinstance(i, SyntaxDecl)])
    for item in source.items:
        elab.item(item)
    return Env(elab.signature, elab.generators, tuple(elab.theorems))


def load(text: str) -> Env:
    return elaborate(parse(text))


# printing


def _param_names(params: tuple[str, ...], m: int) -> tuple[str, ...]:
    return params if len(params) == m else tuple(f"x{i}" for i in range(m))


def format_term(t: Tree, names: tuple[str, ...]) -> str:
    if isinstance(t, Leaf):
        return names[t.id]
    return f"{t.op.name}({','.join(format_term(c, names) for c in t.children)})"


def format_derivation(d: Derivation, prec: int = 0) -> str:
    """Minimal parentheses: ``;`` is loosest, both operators left-associative."""
    if isinstance(d, Gen):
        return d.name
    if isinstance(d, Id):
        return f"id {d.n}"
    if isinstance(d, Sym):
        return f"sym {d.a} {d.b}"
    if isinstance(d, Dup):
        return "dup"
    if isinstance(d, Drop):
        return "drop"
    if isinstance(d, Seq):
        text = f"{format_derivation(d.first, 0)} ; {format_derivation(d.second, 1)}"
        return f"({text})" if prec > 0 else text
    text = f"{format_derivation(d.left, 1)} * {format_derivation(d.right, 2)}"
    return f"({text})" if prec > 1 else text


def _seq_chain(d: Derivation) -> list[Derivation]:
    chain = []
    while isinstance(d, Seq):
        chain.append(d.second)
        d = d.first
    chain.append(d)
    return chain[::-1]


def _statement(keyword: str, name: str, params, s: SyntaxMap, t: SyntaxMap) -> str:
    names = _param_names(params, s.m)
    hyps = ", ".join(format_term(x, names) for x in s.outputs)
    concs = ", ".join(format_term(x, names) for x in t.outputs)
    return f"{keyword} {name} ({' '.join(names)}) : [{hyps}] => [{concs}]"


def dump_lines(env: Env) -> Iterator[str]:
    for op in env.signature:
        yield f"syntax {op.name} : {op.arity}"
    if len(env.signature) and (env.generators or env.theorems):
        yield ""
    for gen in env.generators.values():
        yield _statement("rule", gen.name, gen.params, gen.src, gen.tgt)
    for thm in env.theorems:
        yield ""
        chain = _seq_chain(thm.body)
        yield _statement("thm", thm.name, thm.params, thm.s, thm.t) + " {"
        yield "  " + format_derivation(chain[0], 1)
        for step in chain[1:]:
            yield "  ; " + format_derivation(step, 1)
        yield "}"


def dump(env: Env) -> str:
    """Canonical text of ``env``; parses back to an equal environment."""
    lines = list(dump_lines(env))
    return "\n".join(lines) + "\n" if lines else ""


def parse_tree(text: str, signature: Signature) -> Tree:
    """Parse a rendered tree such as ``proves(imp(x0,x1))``; ``x<i>`` are leaves."""
    p = _Parser(text)
    term = p.term() if p.tok.kind == "ident" else p.fail("term")
    if p.tok.kind != "eof":
        p.fail("end of input")
    leaf = re.compile(r"x([0-9]+)")

    def build(t: Term) -> Tree:
        if t.args is None:
            found = leaf.fullmatch(t.name)
            if found is None:
                raise UnknownSymbol(f"{t.name!r} is not a leaf", t.span)
            return Leaf(int(found.group(1)))
        op = signature[t.name]
        if len(t.args) != op.arity:
            raise WrongArgCount(f"{op.name} takes {op.arity} arguments", t.span)
        return Node(op, tuple(build(a) for a in t.args))

    return build(term)

