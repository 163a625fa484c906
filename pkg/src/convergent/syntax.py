"""Text syntax for terms, atoms, clauses and indexed clause families.

Grammar (whitespace insignificant, ``%`` starts a comment running to end of line)::

    term   := VAR | SYM | SYM "(" term ("," term)* ")"
            | "iter" "(" SYM "," count "," term ")"
    atom   := SYM | SYM "(" term ("," term)* ")"
    clause := atom "." | atom ":-" atom ("," atom)* "."
    count  := NAT | [NAT "*"] "@k" [("+" | "-") NAT] ["mod" NAT]

``VAR`` starts with an uppercase letter or underscore, ``SYM`` with a
lowercase letter.  ``iter(f, n, t)`` is a macro for ``n`` nested
applications of ``f`` around ``t``.  The ``@k`` forms are only accepted when
parsing families, where the count is kept symbolic until instantiation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .terms import App, Atom, Var, iterate

__all__ = [
    "ParseError",
    "SignatureError",
    "Signature",
    "IndexExpr",
    "Iter",
    "parse_term",
    "parse_atom",
    "parse_clauses",
    "instantiate_term",
    "instantiate_atom",
    "has_index",
]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.message = message
        super().__init__(f"{message} at offset {offset} (line {self.line}, col {self.col})")


class SignatureError(ParseError):
    """A symbol used with two arities, or both as predicate and function."""


@dataclass
class Signature:
    functions: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)

    def add_function(self, name: str, arity: int, offset: int = 0, text: str = ""):
        self._add(self.functions, self.predicates, "function", name, arity, offset, text)

    def add_predicate(self, name: str, arity: int, offset: int = 0, text: str = ""):
        self._add(self.predicates, self.functions, "predicate", name, arity, offset, text)

    @staticmethod
    def _add(table, other, kind, name, arity, offset, text):
        if name in other:
            raise SignatureError(f"symbol {name!r} used both as predicate and function", offset, text)
        known = table.setdefault(name, arity)
        if known != arity:
            raise SignatureError(f"{kind} {name!r} used with arity {arity} and {known}", offset, text)

    def merged(self, other: "Signature") -> "Signature":
        out = Signature(dict(self.functions), dict(self.predicates))
        for name, arity in other.functions.items():
            out.add_function(name, arity)
        for name, arity in other.predicates.items():
            out.add_predicate(name, arity)
        return out

    def constants(self) -> list:
        return sorted(n for n, a in self.functions.items() if a == 0)


@dataclass(frozen=True, slots=True)
class IndexExpr:
    """``(scale*k + offset) mod modulus``, modulus optional."""

    scale: int = 1
    offset: int = 0
    modulus: Optional[int] = None

    def value(self, k: int) -> int:
        v = self.scale * k + self.offset
        if self.modulus is not None:
            v %= self.modulus
        if v < 0:
            raise ValueError(f"iteration count {self} is negative at k={k}")
        return v

    @property
    def injective(self) -> bool:
        return self.modulus is None and self.scale != 0

    @property
    def period(self) -> int:
        """Period of the value sequence; 0 for injective expressions."""
        if self.injective:
            return 0
        if self.modulus is None or self.scale % self.modulus == 0:
            return 1
        return self.modulus // gcd(self.scale, self.modulus)

    def __str__(self) -> str:
        s = "@k" if self.scale == 1 else f"{self.scale}*@k"
        if self.offset:
            s += f"+{self.offset}" if self.offset > 0 else f"-{-self.offset}"
        if self.modulus is not None:
            s += f" mod {self.modulus}"
        return s


@dataclass(frozen=True, slots=True)
class Iter:
    """Unexpanded ``iter(func, count, body)`` inside a family template."""

    func: str
    count: IndexExpr
    body: object

    def __str__(self) -> str:
        return f"iter({self.func},{self.count},{self.body})"


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>%[^\n]*)|(?P<implies>:-)|(?P<index>@k\b)"
    r"|(?P<num>\d+)|(?P<var>[A-Z_][A-Za-z0-9_]*)|(?P<sym>[a-z][A-Za-z0-9_]*)"
    r"|(?P<punct>[(),.+\-*])"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos] == "@":
                raise ParseError("malformed index placeholder (expected @k)", pos, text)
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Optional[Signature], family: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = signature if signature is not None else Signature()
        self.family = family

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect(self, kind: str, text: Optional[str] = None, what: str = ""):
        tok = self.peek()
        if tok[0] != kind or (text is not None and tok[1] != text):
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise self.error(f"expected {what or text or kind}, found {found}")
        self.i += 1
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok[0] == kind and (text is None or tok[1] == text)

    def term(self):
        tok = self.peek()
        if tok[0] == "var":
            self.i += 1
            return Var(tok[1])
        if tok[0] == "index":
            raise self.error("index placeholder @k is only allowed as an iter count")
        if tok[0] != "sym":
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise self.error(f"expected a term, found {found}")
        if tok[1] == "iter":
            return self.iter_macro()
        self.i += 1
        args = self.arglist() if self.at("punct", "(") else ()
        self.sig.add_function(tok[1], len(args), tok[2], self.text)
        return App(tok[1], args)

    def arglist(self) -> tuple:
        self.expect("punct", "(")
        args = [self.term()]
        while self.at("punct", ","):
            self.i += 1
            args.append(self.term())
        self.expect("punct", ")", what="',' or ')'")
        return tuple(args)

    def iter_macro(self):
        self.i += 1
        self.expect("punct", "(")
        ftok = self.expect("sym", what="function symbol")
        self.sig.add_function(ftok[1], 1, ftok[2], self.text)
        self.expect("punct", ",")
        count = self.count()
        self.expect("punct", ",")
        body = self.term()
        self.expect("punct", ")")
        if isinstance(count, IndexExpr):
            return Iter(ftok[1], count, body)
        return _wrap_template(ftok[1], count, body)

    def count(self):
        tok = self.peek()
        if tok[0] == "punct" and tok[1] == "-":
            raise self.error("negative iteration count")
        scale = 1
        if tok[0] == "num":
            if not (self.peek(1)[0] == "punct" and self.peek(1)[1] == "*"):
                self.i += 1
                return int(tok[1])
            scale = int(tok[1])
            self.i += 2
            tok = self.peek()
        if tok[0] != "index":
            raise self.error("expected an iteration count")
        if not self.family:
            raise self.error("index placeholder @k outside a family")
        self.i += 1
        offset = 0
        if self.at("punct", "+") or self.at("punct", "-"):
            sign = 1 if self.peek()[1] == "+" else -1
            self.i += 1
            offset = sign * int(self.expect("num", what="number")[1])
        modulus = None
        if self.at("sym", "mod"):
            self.i += 1
            mtok = self.expect("num", what="modulus")
            modulus = int(mtok[1])
            if modulus < 1:
                raise self.error("modulus must be positive", mtok)
        return IndexExpr(scale, offset, modulus)

    def atom(self) -> Atom:
        tok = self.expect("sym", what="predicate symbol")
        if tok[1] == "iter":
            raise self.error("iter cannot be used as a predicate", tok)
        args = self.arglist() if self.at("punct", "(") else ()
        self.sig.add_predicate(tok[1], len(args), tok[2], self.text)
        return Atom(tok[1], args)

    def clause(self):
        line = self.text.count("\n", 0, self.peek()[2]) + 1
        head = self.atom()
        body = []
        if self.at("implies"):
            self.i += 1
            body.append(self.atom())
            while self.at("punct", ","):
                self.i += 1
                body.append(self.atom())
        self.expect("punct", ".", what="'.'")
        return head, tuple(body), line

    def finish(self):
        if not self.at("eof"):
            raise self.error(f"unexpected trailing input {self.peek()[1]!r}")


def _wrap_template(f, n, body):
    for _ in range(n):
        body = App(f, (body,))
    return body


def parse_term(text: str, signature: Optional[Signature] = None):
    p = _Parser(text, signature, family=False)
    t = p.term()
    p.finish()
    return t


def parse_atom(text: str, signature: Optional[Signature] = None) -> Atom:
    p = _Parser(text, signature, family=False)
    a = p.atom()
    p.finish()
    return a


def parse_clauses(text: str, signature: Optional[Signature] = None, family: bool = False) -> list:
    """Return ``(head, body, line)`` triples in source order."""
    p = _Parser(text, signature, family=family)
    out = []
    while not p.at("eof"):
        out.append(p.clause())
    return out


def instantiate_term(t, k: int):
    if isinstance(t, Var):
        return t
    if isinstance(t, Iter):
        return iterate(t.func, t.count.value(k), instantiate_term(t.body, k))
    if not t.args:
        return t
    return App(t.head, tuple(instantiate_term(a, k) for a in t.args))


def instantiate_atom(p: Atom, k: int) -> Atom:
    return Atom(p.pred, tuple(instantiate_term(a, k) for a in p.args))


def index_exprs(t) -> list:
    if isinstance(t, Var):
        return []
    if isinstance(t, Iter):
        return [t.count] + index_exprs(t.body)
    out = []
    for a in t.args:
        out.extend(index_exprs(a))
    return out


def has_index(t) -> bool:
    return bool(index_exprs(t))
