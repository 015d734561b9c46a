"""Surface notation for feature structures, terms and DRSs.

    <s & currentAct!(type!greeting & speaker!name!?Speaker) & sem!"none"

``<type`` sets a node type, ``attr!value`` adds a feature, ``&`` conjoins by
unification, ``?Name`` is a variable, ``_`` an anonymous one, ``f(a,b)`` a term,
``[a,b|?T]`` a list and ``drs(Refs,[cond,...|?R])`` a DRS whose conditions form
a multiset.
"""

from __future__ import annotations

import itertools
import re
from typing import Dict, List, Optional, Tuple

from mnlg.errors import FSSyntaxError
from mnlg.feature_core import (
    FLAT,
    CondSet,
    Drs,
    FeatureStructure,
    PList,
    Term,
    TypeHierarchy,
    Value,
    Var,
    deref,
    resolve,
    resolve_all,
    unify_iter,
)

__all__ = ["Lexer", "Token", "FSParser", "parse_fs", "parse_value", "format_value"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*|%[^\n]*)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<punct>->|[<&!()\[\],|{}:\-.=>;])
    """,
    re.VERBOSE,
)

_BARE_ATOM = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_]*$")


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


class Lexer:
    """Tokenizer with one-token lookahead shared by every textual format."""

    def __init__(self, text: str, source: Optional[str] = None, line_offset: int = 0):
        self.source = source
        self.tokens: List[Token] = []
        pos, line, line_start = 0, 1 + line_offset, 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise FSSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
            kind = m.lastgroup
            chunk = m.group()
            if kind != "ws":
                self.tokens.append(Token(kind, chunk, line, pos - line_start + 1))
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rindex("\n") + 1
            pos = m.end()
        self.tokens.append(Token("eof", "", line, pos - line_start + 1))
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind in ("punct", "name") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.peek().text or 'end of input'!r}")
        return self.next()

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.error(f"expected a name, found {tok.text or 'end of input'!r}")
        return self.next().text

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise FSSyntaxError(message, tok.line, tok.col, self.source)


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class FSParser:
    """Parses values into a shared variable environment.

    Several values parsed with one parser (a tree's mother and daughters) share
    variables; :meth:`finish` resolves conjunctions like ``?CA & type!x`` into
    shared nodes. Anonymous ``_`` variables are numbered per parser, so
    they are distinct within one parse and reproducible across loads.
    """

    def __init__(self, lexer: Lexer, hierarchy: TypeHierarchy = FLAT, allow_anonymous: bool = True):
        self.lx = lexer
        self.h = hierarchy
        self.allow_anonymous = allow_anonymous
        self.env: Dict = {}
        self._anon = itertools.count(1)

    def finish(self, value: Value) -> Value:
        return resolve(value, self.env)

    def finish_all(self, values) -> list:
        return resolve_all(values, self.env)

    def conj(self) -> Value:
        start = self.lx.peek()
        items = [self.unit()]
        while self.lx.accept("&"):
            items.append(self.unit())
        if len(items) == 1:
            return items[0]
        result = items[0]
        for item in items[1:]:
            nb = next(unify_iter(result, item, self.env, self.h), None)
            if nb is None:
                self.lx.error("conflicting conjuncts", start)
            self.env = nb
        for item in items:
            if isinstance(item, Var):
                return item
        return deref(result, self.env)

    def unit(self) -> Value:
        lx = self.lx
        tok = lx.peek()
        if lx.accept("<"):
            name = lx.expect_name()
            if name not in self.h:
                lx.error(f"unknown type {name!r}", tok)
            return FeatureStructure(name)
        if lx.accept("("):
            v = self.conj()
            lx.expect(")")
            return v
        if lx.accept("["):
            return self._list()
        if lx.accept("{"):
            items, rest = self._seq("}")
            return CondSet(tuple(items), self._rest_var(rest, tok))
        if tok.kind == "var":
            lx.next()
            return Var(tok.text[1:])
        if tok.kind == "str":
            lx.next()
            return _unquote(tok.text)
        if tok.kind == "name":
            lx.next()
            if tok.text == "_":
                if not self.allow_anonymous:
                    lx.error("anonymous variable not allowed here", tok)
                return Var(f"_{next(self._anon)}")
            if lx.accept("!"):
                return FeatureStructure(self.h.top, {tok.text: self.unit()})
            if lx.accept("("):
                args, _ = self._seq(")", allow_tail=False)
                return self._term(tok, args)
            return tok.text
        lx.error(f"unexpected {tok.text or 'end of input'!r}")

    def _seq(self, close: str, allow_tail: bool = True) -> Tuple[list, Optional[Value]]:
        items, tail = [], None
        if self.lx.accept(close):
            return items, tail
        items.append(self.conj())
        while self.lx.accept(","):
            items.append(self.conj())
        if allow_tail and self.lx.accept("|"):
            tail = self.conj()
        self.lx.expect(close)
        return items, tail

    def _list(self) -> PList:
        items, tail = self._seq("]")
        return PList(tuple(items), tail)

    def _rest_var(self, rest, tok) -> Optional[Var]:
        if rest is None or isinstance(rest, Var):
            return rest
        self.lx.error("rest of a condition set must be a variable", tok)

    def _term(self, tok: Token, args: list) -> Value:
        if tok.text == "drs" and len(args) == 2:
            refs, conds = args
            if isinstance(conds, PList):
                return Drs(refs, CondSet(conds.items, self._rest_var(conds.tail, tok)))
            if isinstance(conds, Var):
                return Drs(refs, CondSet((), conds))
            if isinstance(conds, CondSet):
                return Drs(refs, conds)
            self.lx.error("drs conditions must be a list", tok)
        return Term(tok.text, tuple(args))


def parse_value(text: str, hierarchy: TypeHierarchy = FLAT, allow_anonymous: bool = True) -> Value:
    lx = Lexer(text)
    p = FSParser(lx, hierarchy, allow_anonymous)
    v = p.conj()
    if lx.peek().kind != "eof":
        lx.error(f"trailing input {lx.peek().text!r}")
    return p.finish(v)


def parse_fs(text: str, hierarchy: TypeHierarchy = FLAT) -> Value:
    """Parse one expression in feature-structure notation."""
    return parse_value(text, hierarchy)


def _atom(a: str) -> str:
    if _BARE_ATOM.match(a):
        return a
    return '"' + a.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_value(value: Value, top: str = "top") -> str:
    if isinstance(value, Var):
        return "?" + value.name
    if isinstance(value, str):
        return _atom(value)
    if isinstance(value, FeatureStructure):
        parts = []
        if value.type != top or not value.features:
            parts.append("<" + value.type)
        for k, v in value.features.items():
            inner = format_value(v, top)
            if isinstance(v, FeatureStructure) and " & " in inner:
                inner = f"({inner})"
            parts.append(f"{k}!{inner}")
        return " & ".join(parts)
    if isinstance(value, Term):
        return f"{value.functor}({','.join(format_value(a, top) for a in value.args)})"
    if isinstance(value, PList):
        tail = "" if value.tail is None else "|" + format_value(value.tail, top)
        return "[" + ",".join(format_value(a, top) for a in value.items) + tail + "]"
    if isinstance(value, CondSet):
        rest = "" if value.rest is None else "|" + format_value(value.rest, top)
        return "{" + ",".join(format_value(a, top) for a in value.items) + rest + "}"
    if isinstance(value, Drs):
        rest = "" if value.body.rest is None else "|" + format_value(value.body.rest, top)
        conds = ",".join(format_value(a, top) for a in value.body.items)
        return f"drs({format_value(value.refs, top)},[{conds}{rest}])"
    return repr(value)
