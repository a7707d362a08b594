"""The script language: declarations plus commands, one per line.

The parser is a hand-rolled recursive descent over a token list; every
token keeps its line and column so errors point at the offending spot.
Parsing keeps the surface shape (references stay references) so that
formatting a parsed script reproduces canonical text exactly.

Grammar, with NAT a decimal numeral and NAME an identifier:

    script    : { line }
    line      : [ statement ] NEWLINE
    statement : "sig" NAME "=" NAME ":" NAT { "|" NAME ":" NAT }
              | "alg" NAME ":" NAME NAT "=" NAT { NAT }
              | NAME "=" expr
              | "iterate" NAME { option }
              | "mu" NAME { option }
              | "free" NAME NAT { option }
              | "cata" NAME NAME { option }
              | "nu" NAME { option }
              | "check" { option }
    option    : "size" ("nat" | "plump" [":" NAME])
              | ("budget" | "depth" | "stage" | "samples" | "seed") NAT
    expr      : term { "+" term }
    term      : factor { "*" factor }
    factor    : atom [ "^" NAT ]
    atom      : NAT | "X" | "Y" | NAME | "(" expr ")"
              | "sym" "<" NAME ">" atom
              | "mu" "Y" "." expr
              | "compose" "(" expr "," expr ")"
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DslNameError, DslSyntaxError

KEYWORDS = {
    "sig",
    "alg",
    "iterate",
    "mu",
    "free",
    "cata",
    "nu",
    "check",
    "size",
    "budget",
    "depth",
    "stage",
    "samples",
    "seed",
    "nat",
    "plump",
    "sym",
    "compose",
    "X",
    "Y",
}

COMMAND_WORDS = ("iterate", "mu", "free", "cata", "nu", "check")
OPTION_WORDS = ("size", "budget", "depth", "stage", "samples", "seed")


# -- surface expression nodes -------------------------------------------


class SurfaceExpr:
    __slots__ = ()


@dataclass(frozen=True)
class SNum(SurfaceExpr):
    value: int


@dataclass(frozen=True)
class SVar(SurfaceExpr):
    name: str  # "X" or "Y"


@dataclass(frozen=True)
class SRef(SurfaceExpr):
    name: str


@dataclass(frozen=True)
class SSum(SurfaceExpr):
    parts: Tuple[SurfaceExpr, ...]


@dataclass(frozen=True)
class SProd(SurfaceExpr):
    parts: Tuple[SurfaceExpr, ...]


@dataclass(frozen=True)
class SPow(SurfaceExpr):
    base: SurfaceExpr
    power: int


@dataclass(frozen=True)
class SSym(SurfaceExpr):
    group: str
    arg: SurfaceExpr


@dataclass(frozen=True)
class SMu(SurfaceExpr):
    body: SurfaceExpr


@dataclass(frozen=True)
class SCompose(SurfaceExpr):
    outer: SurfaceExpr
    inner: SurfaceExpr


# -- statements ----------------------------------------------------------


@dataclass(frozen=True)
class SigDecl:
    name: str
    ops: Tuple[Tuple[str, int], ...]
    line: int = 0


@dataclass(frozen=True)
class FuncDecl:
    name: str
    expr: SurfaceExpr
    line: int = 0


@dataclass(frozen=True)
class AlgDecl:
    name: str
    functor: str
    carrier: int
    table: Tuple[int, ...]
    line: int = 0


@dataclass(frozen=True)
class Command:
    kind: str
    functor: Optional[str] = None
    algebra: Optional[str] = None
    generators: Optional[int] = None
    options: Tuple[Tuple[str, object], ...] = ()
    line: int = 0

    def option(self, name: str, default=None):
        for k, v in self.options:
            if k == name:
                return v
        return default


@dataclass(frozen=True)
class Script:
    statements: Tuple[object, ...]


# -- tokenizer -----------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NAT, NEWLINE, EOF, or the symbol itself
    text: str
    line: int
    column: int


_SYMBOLS = "=+*^|:.<>(),"


def tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "\n":
            tokens.append(Token("NEWLINE", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("NAT", text[start:i], line, col))
            col += i - start
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("NAME", text[start:i], line, col))
            col += i - start
            continue
        if c in _SYMBOLS:
            tokens.append(Token(c, c, line, col))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("NEWLINE", "\n", line, col))
    tokens.append(Token("EOF", "", line + 1, 1))
    return tokens


# -- parser --------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.declared: dict = {}  # name -> "sig" | "functor" | "alg"

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise DslSyntaxError(
                f"expected {what or kind}, found {tok.text!r}",
                tok.line,
                tok.column,
            )
        return self.advance()

    def expect_word(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "NAME" or tok.text != word:
            raise DslSyntaxError(
                f"expected {word!r}, found {tok.text!r}", tok.line, tok.column
            )
        return self.advance()

    def expect_nat(self) -> int:
        return int(self.expect("NAT", "a number").text)

    def fresh_name(self) -> str:
        tok = self.expect("NAME", "a name")
        if tok.text in KEYWORDS:
            raise DslSyntaxError(
                f"{tok.text!r} is reserved", tok.line, tok.column
            )
        if tok.text in self.declared:
            raise DslSyntaxError(
                f"{tok.text!r} is already declared", tok.line, tok.column
            )
        return tok.text

    def known_name(self, role: str) -> str:
        tok = self.expect("NAME", f"a declared {role}")
        if self.declared.get(tok.text) != role:
            raise DslNameError(
                f"{tok.line}:{tok.column}: {tok.text!r} is not a declared {role}"
            )
        return tok.text

    # statements

    def parse_script(self) -> Script:
        statements = []
        while self.peek().kind != "EOF":
            if self.peek().kind == "NEWLINE":
                self.advance()
                continue
            statements.append(self.parse_statement())
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind != "NEWLINE":
                raise DslSyntaxError(
                    f"expected end of line, found {tok.text!r}",
                    tok.line,
                    tok.column,
                )
            self.advance()
        return Script(tuple(statements))

    def parse_statement(self):
        tok = self.peek()
        if tok.kind != "NAME":
            raise DslSyntaxError(
                f"expected a statement, found {tok.text!r}", tok.line, tok.column
            )
        if tok.text == "sig":
            return self.parse_sig()
        if tok.text == "alg":
            return self.parse_alg()
        if tok.text in COMMAND_WORDS:
            # "mu" is a command only when followed by a bare name and then
            # options or end of line; "mu Y. ..." never parses as a command
            # because command position requires a declared functor name
            return self.parse_command()
        return self.parse_funcdecl()

    def parse_sig(self) -> SigDecl:
        start = self.advance()
        name = self.fresh_name()
        self.expect("=")
        ops = [self.parse_opspec()]
        while self.peek().kind == "|":
            self.advance()
            ops.append(self.parse_opspec())
        labels = [label for label, _ in ops]
        if len(set(labels)) != len(labels):
            raise DslSyntaxError(
                f"duplicate operation name in {name!r}", start.line, start.column
            )
        self.declared[name] = "sig"
        return SigDecl(name, tuple(ops), line=start.line)

    def parse_opspec(self) -> tuple:
        tok = self.expect("NAME", "an operation name")
        if tok.text in KEYWORDS:
            raise DslSyntaxError(
                f"{tok.text!r} is reserved", tok.line, tok.column
            )
        self.expect(":")
        return tok.text, self.expect_nat()

    def parse_alg(self) -> AlgDecl:
        start = self.advance()
        name = self.fresh_name()
        self.expect(":")
        functor = self.known_name("functor")
        carrier = self.expect_nat()
        self.expect("=")
        table = []
        while self.peek().kind == "NAT":
            table.append(self.expect_nat())
        self.declared[name] = "alg"
        return AlgDecl(name, functor, carrier, tuple(table), line=start.line)

    def parse_funcdecl(self) -> FuncDecl:
        start = self.peek()
        name = self.fresh_name()
        self.expect("=")
        expr = self.parse_expr(in_mu=False)
        self.declared[name] = "functor"
        return FuncDecl(name, expr, line=start.line)

    def parse_command(self) -> Command:
        start = self.advance()
        kind = start.text
        functor = algebra = None
        generators = None
        if kind in ("iterate", "mu", "free", "cata", "nu"):
            functor = self.known_name("functor")
        if kind == "free":
            generators = self.expect_nat()
        if kind == "cata":
            algebra = self.known_name("alg")
        options = []
        seen = set()
        while True:
            tok = self.peek()
            if tok.kind != "NAME" or tok.text not in OPTION_WORDS:
                break
            self.advance()
            if tok.text in seen:
                raise DslSyntaxError(
                    f"duplicate option {tok.text!r}", tok.line, tok.column
                )
            seen.add(tok.text)
            if tok.text == "size":
                options.append(("size", self.parse_sizespec()))
            else:
                options.append((tok.text, self.expect_nat()))
        return Command(
            kind=kind,
            functor=functor,
            algebra=algebra,
            generators=generators,
            options=tuple(options),
            line=start.line,
        )

    def parse_sizespec(self) -> str:
        tok = self.expect("NAME", "'nat' or 'plump'")
        if tok.text == "nat":
            return "nat"
        if tok.text == "plump":
            if self.peek().kind == ":":
                self.advance()
                return "plump:" + self.known_name("sig")
            return "plump"
        raise DslSyntaxError(
            f"expected 'nat' or 'plump', found {tok.text!r}", tok.line, tok.column
        )

    # expressions

    def parse_expr(self, in_mu: bool) -> SurfaceExpr:
        parts = [self.parse_term(in_mu)]
        while self.peek().kind == "+":
            self.advance()
            parts.append(self.parse_term(in_mu))
        if len(parts) == 1:
            return parts[0]
        return SSum(tuple(parts))

    def parse_term(self, in_mu: bool) -> SurfaceExpr:
        parts = [self.parse_factor(in_mu)]
        while self.peek().kind == "*":
            self.advance()
            parts.append(self.parse_factor(in_mu))
        if len(parts) == 1:
            return parts[0]
        return SProd(tuple(parts))

    def parse_factor(self, in_mu: bool) -> SurfaceExpr:
        atom = self.parse_atom(in_mu)
        if self.peek().kind == "^":
            self.advance()
            return SPow(atom, self.expect_nat())
        return atom

    def parse_atom(self, in_mu: bool) -> SurfaceExpr:
        tok = self.peek()
        if tok.kind == "NAT":
            self.advance()
            return SNum(int(tok.text))
        if tok.kind == "(":
            self.advance()
            expr = self.parse_expr(in_mu)
            self.expect(")")
            return expr
        if tok.kind != "NAME":
            raise DslSyntaxError(
                f"expected an expression, found {tok.text!r}",
                tok.line,
                tok.column,
            )
        if tok.text == "X":
            self.advance()
            return SVar("X")
        if tok.text == "Y":
            if not in_mu:
                raise DslSyntaxError(
                    "Y only makes sense inside a fixpoint body",
                    tok.line,
                    tok.column,
                )
            self.advance()
            return SVar("Y")
        if tok.text == "sym":
            self.advance()
            self.expect("<")
            group = self.expect("NAME", "a symmetry group name").text
            self.expect(">")
            return SSym(group, self.parse_atom(in_mu))
        if tok.text == "mu":
            self.advance()
            self.expect_word("Y")
            self.expect(".")
            return SMu(self.parse_expr(in_mu=True))
        if tok.text == "compose":
            self.advance()
            self.expect("(")
            outer = self.parse_expr(in_mu)
            self.expect(",")
            inner = self.parse_expr(in_mu)
            self.expect(")")
            return SCompose(outer, inner)
        if tok.text in KEYWORDS:
            raise DslSyntaxError(
                f"{tok.text!r} is reserved", tok.line, tok.column
            )
        if self.declared.get(tok.text) not in ("functor", "sig"):
            raise DslNameError(
                f"{tok.line}:{tok.column}: {tok.text!r} is not declared"
            )
        self.advance()
        return SRef(tok.text)


def parse_script(text: str) -> Script:
    return Parser(text).parse_script()


# -- canonical formatting -------------------------------------------------


def _fmt_expr(e: SurfaceExpr, level: int = 0) -> str:
    """level 0 allows sums, 1 allows products, 2 atoms only."""
    if isinstance(e, SNum):
        return str(e.value)
    if isinstance(e, SVar):
        return e.name
    if isinstance(e, SRef):
        return e.name
    if isinstance(e, SSum):
        body = " + ".join(_fmt_expr(p, 1) for p in e.parts)
        return f"({body})" if level > 0 else body
    if isinstance(e, SProd):
        body = "*".join(_fmt_expr(p, 2) for p in e.parts)
        return f"({body})" if level > 1 else body
    if isinstance(e, SPow):
        return f"{_fmt_expr(e.base, 2)}^{e.power}"
    if isinstance(e, SSym):
        return f"sym<{e.group}> {_fmt_expr(e.arg, 2)}"
    if isinstance(e, SMu):
        body = f"mu Y. {_fmt_expr(e.body, 0)}"
        return f"({body})" if level > 0 else body
    if isinstance(e, SCompose):
        return f"compose({_fmt_expr(e.outer, 0)}, {_fmt_expr(e.inner, 0)})"
    raise TypeError(f"not a surface expression: {e!r}")


def format_statement(stmt) -> str:
    if isinstance(stmt, SigDecl):
        ops = " | ".join(f"{label}:{n}" for label, n in stmt.ops)
        return f"sig {stmt.name} = {ops}"
    if isinstance(stmt, FuncDecl):
        return f"{stmt.name} = {_fmt_expr(stmt.expr)}"
    if isinstance(stmt, AlgDecl):
        table = " ".join(str(v) for v in stmt.table)
        return f"alg {stmt.name} : {stmt.functor} {stmt.carrier} = {table}"
    if isinstance(stmt, Command):
        words = [stmt.kind]
        if stmt.functor is not None:
            words.append(stmt.functor)
        if stmt.generators is not None:
            words.append(str(stmt.generators))
        if stmt.algebra is not None:
            words.append(stmt.algebra)
        for k, v in stmt.options:
            words.append(k)
            words.append(str(v))
        return " ".join(words)
    raise TypeError(f"not a statement: {stmt!r}")


def format_script(script: Script) -> str:
    return "".join(format_statement(s) + "\n" for s in script.statements)


# -- lowering to functor expressions ---------------------------------------


def lower_expr(e: SurfaceExpr, env: dict):
    """Translate a surface expression to a functor expression.

    env maps declared names to ("sig", Signature) or ("functor", expr).
    X lowers to the first argument slot and Y to the second, so a
    fixpoint body is a functor in two arguments and everything else in
    one.  References to declared functors are inlined.
    """
    from .errors import DslNameError as _NameError
    from .finset import FiniteSet
    from .functors import (
        BUILTIN_GROUPOIDS,
        Compose,
        Constant,
        Container,
        Identity,
        MuParam,
        Product,
        Projection,
        Sum,
        SymContainer,
    )

    def go(node):
        if isinstance(node, SNum):
            return Constant(FiniteSet(node.value))
        if isinstance(node, SVar):
            return Identity() if node.name == "X" else Projection(1)
        if isinstance(node, SRef):
            role, value = env[node.name]
            if role == "sig":
                return Container(value)
            return value
        if isinstance(node, SSum):
            return Sum(tuple(go(p) for p in node.parts))
        if isinstance(node, SProd):
            return Product(tuple(go(p) for p in node.parts))
        if isinstance(node, SPow):
            return Product(tuple(go(node.base) for _ in range(node.power)))
        if isinstance(node, SSym):
            if node.group not in BUILTIN_GROUPOIDS:
                raise _NameError(f"unknown symmetry group {node.group!r}")
            sym = SymContainer(BUILTIN_GROUPOIDS[node.group])
            arg = go(node.arg)
            if arg == Identity():
                return sym
            return Compose(sym, (arg,))
        if isinstance(node, SMu):
            return MuParam(go(node.body))
        if isinstance(node, SCompose):
            return Compose(go(node.outer), (go(node.inner),))
        raise TypeError(f"not a surface expression: {node!r}")

    return go(e)
