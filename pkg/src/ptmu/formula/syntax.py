"""ASCII concrete syntax: :func:`parse` and :func:`render`.

Grammar (loosest binding first)::

    expr    := conj ('\\/' conj)*
    conj    := unary ('/\\' unary)*
    unary   := ('mu' | 'nu') VAR '.' expr          -- scope extends maximally right
             | modality unary
             | '~' ATOM | ATOM | VAR | 'true' | 'false'
             | 'star' '(' expr ')' | '(' expr ')'
    modality:= '<>' | '[]' | '<c c>' | '[c c]'       c in {P, p, -}
             | '<>{>n}' | '[]{<=n}' | '<->{>n}' | '[-]{<=n}' | '<->' | '[-]'

Atoms are identifiers starting with a lowercase letter, plus the reserved
``P`` (colour P), ``p`` (colour P-bar) and ``N`` (the nominal).  Every other
identifier starting with an uppercase letter is a variable.  ``&`` and
``|`` are accepted as aliases for the conjunction and disjunction symbols.
"""

from __future__ import annotations

import logging
import re

from .nodes import (
    ANY, BINARY, FIXPOINTS, NOMINAL, P, PBAR,
    And, Atom, Bottom, Box, CBox, CDiamond, Diamond, Formula, GBox, GDiamond,
    InvBox, InvDiamond, Mu, NegAtom, Nu, Or, Star, Top, Var, free_variables,
)

logger = logging.getLogger(__name__)

RESERVED_ATOMS = (P, PBAR, NOMINAL)
KEYWORDS = ("mu", "nu", "true", "false", "star")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op>\\/|/\\|[&|]|<->|<>|\[-\]|\[\]|<=|[~().<>\[\]{}\-])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def is_atom_name(name: str) -> bool:
    return name in RESERVED_ATOMS or (name[:1].islower() and name not in KEYWORDS)


def is_var_name(name: str) -> bool:
    return name[:1].isupper() and name not in RESERVED_ATOMS


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return FormulaSyntaxError(message, tok[2], self.text)

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Formula:
        f = self.expr()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.conj()
        while self.peek()[1] in ("\\/", "|"):
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek()[1] in ("/\\", "&"):
            self.next()
            f = And(f, self.unary())
        return f

    def threshold(self, relation):
        if self.peek()[1] != "{":
            return None
        self.next()
        self.expect(relation)
        tok = self.next()
        if tok[0] != "int":
            raise self.error("expected a counting threshold", tok)
        self.expect("}")
        return int(tok[1])

    def color(self):
        tok = self.next()
        if tok[1] in (P, PBAR, ANY):
            return tok[1]
        raise self.error(f"expected a guard colour (P, p or -), found {tok[1]!r}", tok)

    def unary(self):
        kind, value, pos = self.peek()
        if value in ("mu", "nu") and kind == "ident":
            self.next()
            var = self.next()
            if var[0] != "ident" or not is_var_name(var[1]):
                raise self.error("expected a variable name after binder", var)
            self.expect(".")
            body = self.expr()
            return (Mu if value == "mu" else Nu)(var[1], body)
        if value == "<>":
            self.next()
            n = self.threshold(">")
            body = self.unary()
            return Diamond(body) if n is None else CDiamond(n, body)
        if value == "[]":
            self.next()
            n = self.threshold("<=")
            body = self.unary()
            return Box(body) if n is None else CBox(n, body)
        if value == "<->":
            self.next()
            n = self.threshold(">")
            return InvDiamond(0 if n is None else n, self.unary())
        if value == "[-]":
            self.next()
            n = self.threshold("<=")
            return InvBox(0 if n is None else n, self.unary())
        if value in ("<", "["):
            self.next()
            src, dst = self.color(), self.color()
            self.expect(">" if value == "<" else "]")
            body = self.unary()
            return (GDiamond if value == "<" else GBox)(src, dst, body)
        if value == "~":
            self.next()
            tok = self.next()
            if tok[0] == "ident" and is_atom_name(tok[1]):
                return NegAtom(tok[1])
            raise self.error("negation applies to atoms only", tok)
        if value == "(":
            self.next()
            f = self.expr()
            self.expect(")")
            return f
        if kind == "ident":
            self.next()
            if value == "true":
                return Top()
            if value == "false":
                return Bottom()
            if value == "star":
                self.expect("(")
                f = self.expr()
                self.expect(")")
                return Star(f)
            if is_atom_name(value):
                return Atom(value)
            return Var(value)
        raise self.error(f"unexpected {value or 'end of input'!r}")


def parse(text: str) -> Formula:
    """Parse concrete syntax; bound variables are renamed apart."""
    from .transform import rename_apart

    f = rename_apart(_Parser(text).parse())
    free = free_variables(f)
    if free:
        logger.info("formula has free variables: %s", ", ".join(sorted(free)))
    return f


def _open_right(f: Formula) -> bool:
    # a binder whose scope would swallow whatever follows
    if isinstance(f, FIXPOINTS):
        return True
    if isinstance(f, BINARY):
        return _open_right(f.right)
    kids = f.children()
    return bool(kids) and not isinstance(f, Star) and _open_right(kids[0])


def _prefix(f: Formula) -> str:
    if isinstance(f, Diamond):
        return "<>"
    if isinstance(f, Box):
        return "[]"
    if isinstance(f, GDiamond):
        return f"<{f.src} {f.dst}>"
    if isinstance(f, GBox):
        return f"[{f.src} {f.dst}]"
    if isinstance(f, CDiamond):
        return f"<>{{>{f.n}}}"
    if isinstance(f, CBox):
        return f"[]{{<={f.n}}}"
    if isinstance(f, InvDiamond):
        return f"<->{{>{f.n}}}"
    if isinstance(f, InvBox):
        return f"[-]{{<={f.n}}}"
    raise TypeError(type(f).__name__)


def render(f: Formula) -> str:
    """Concrete syntax for ``f``; ``parse(render(f)) == f`` for renamed-apart ``f``."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return "~" + f.name
    if isinstance(f, Var):
        return f.name
    if isinstance(f, BINARY):
        op = " \\/ " if isinstance(f, Or) else " /\\ "
        left, right = render(f.left), render(f.right)
        if _binds_looser(f.left, f) or _open_right(f.left):
            left = f"({left})"
        if isinstance(f.right, BINARY) and (isinstance(f.right, Or) or isinstance(f, And)):
            right = f"({right})"
        return left + op + right
    if isinstance(f, FIXPOINTS):
        body = render(f.body)
        if isinstance(f.body, BINARY):
            body = f"({body})"
        return f"{'mu' if isinstance(f, Mu) else 'nu'} {f.var}. {body}"
    if isinstance(f, Star):
        return f"star({render(f.body)})"
    body = render(f.body)
    if isinstance(f.body, BINARY):
        body = f"({body})"
    return f"{_prefix(f)} {body}"


def _binds_looser(child: Formula, parent: Formula) -> bool:
    return isinstance(child, Or) and isinstance(parent, And)

