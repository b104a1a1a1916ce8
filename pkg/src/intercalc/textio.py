"""The ``.ins`` surface syntax and report rendering.

Grammar::

    file   := item*
    item   := agents | rule | config
    agents := "agents" "{" IDENT "/" NAT ("," IDENT "/" NAT)* "}"
    rule   := "rule" IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
    config := "config" IDENT "=" "<" terms? "|" eqs? ">" ";"
    eqs    := term "=" term ("," term "=" term)*
    term   := IDENT | IDENT "(" terms? ")"
    terms  := term ("," term)*

``#`` starts a comment.  Declared agents always carry parentheses.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .core import (
    USER_NAME,
    Agent,
    Configuration,
    Equation,
    Rule,
    System,
    canonical_key,
    from_key,
    term_str,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|#[^\n]*)"
    r"|(?P<bowtie>><)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<nat>[0-9]+)"
    r"|(?P<punct>[{}()\[\],/;=<>|])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class SourceFile:
    system: System
    configs: dict = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind == "eof":
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident":
            self.fail(f"expected identifier, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def term(self):
        name = self.ident()
        if self.accept("("):
            args = [] if self.tok.text == ")" else self.terms()
            self.expect(")")
            return Agent(name.text, tuple(args))
        self.name_tokens.append((name.text, name))
        return name.text

    def terms(self) -> list:
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        return out

    def eqs(self) -> list:
        out = []
        while True:
            lhs = self.term()
            self.expect("=")
            rhs = self.term()
            out.append(Equation(lhs, rhs))
            if not self.accept(","):
                return out

    def config_body(self) -> Configuration:
        self.expect("<")
        iface = [] if self.tok.text == "|" else self.terms()
        self.expect("|")
        body = [] if self.tok.text == ">" else self.eqs()
        self.expect(">")
        return Configuration(tuple(iface), tuple(body))

    def file(self) -> SourceFile:
        signature: dict = {}
        rules: list = []
        configs: dict = {}
        self.name_tokens = []
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "ident" and t.text == "agents":
                self.i += 1
                self.expect("{")
                while True:
                    sym = self.ident()
                    self.expect("/")
                    nat = self.tok
                    if nat.kind != "nat":
                        self.fail("expected arity")
                    self.i += 1
                    if sym.text in signature:
                        self.fail(f"agent {sym.text!r} declared twice", sym)
                    signature[sym.text] = int(nat.text)
                    if not self.accept(","):
                        break
                self.expect("}")
            elif t.kind == "ident" and t.text == "rule":
                self.i += 1
                a = self.ident()
                self.expect("[")
                lp = [] if self.tok.text == "]" else self.terms()
                self.expect("]")
                if self.tok.kind != "bowtie":
                    self.fail("expected '><'")
                self.i += 1
                b = self.ident()
                self.expect("[")
                rp = [] if self.tok.text == "]" else self.terms()
                self.expect("]")
                self.expect(";")
                rules.append(Rule(a.text, b.text, tuple(lp), tuple(rp)))
            elif t.kind == "ident" and t.text == "config":
                self.i += 1
                name = self.ident()
                self.expect("=")
                c = self.config_body()
                self.expect(";")
                if name.text in configs:
                    self.fail(f"config {name.text!r} defined twice", name)
                configs[name.text] = c
            else:
                self.fail(f"expected 'agents', 'rule' or 'config', found {t.text!r}")
        for n, tok in self.name_tokens:
            if n in signature:
                self.fail(f"agent {n!r} used without parentheses", tok)
        return SourceFile(System(signature, tuple(rules)), configs)


def parse_system(text: str) -> SourceFile:
    """Parse a whole ``.ins`` file into a system plus named configurations."""
    return _Parser(text).file()


def parse_config(text: str, system: System | None = None) -> Configuration:
    """Parse a bare ``< terms | eqs >`` configuration."""
    p = _Parser(text)
    p.name_tokens = []
    c = p.config_body()
    p.accept(";")
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after configuration")
    if system is not None:
        for n, tok in p.name_tokens:
            if n in system.signature:
                p.fail(f"agent {n!r} used without parentheses", tok)
    return c


def parse_term(text: str):
    p = _Parser(text)
    p.name_tokens = []
    t = p.term()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after term")
    return t


# -- printing ----------------------------------------------------------------

def _printable(c: Configuration) -> Configuration:
    """Canonical form with bound names spelled as user identifiers."""
    canon = from_key(canonical_key(c))
    taken = set(canon.names())
    prefix = "x"
    while any(n.startswith(prefix) and n[len(prefix):].isdigit() for n in taken):
        prefix += "x"
    mapping = {n: f"{prefix}{n[2:]}" for n in taken if n.startswith("%b")}
    return canon.rename(mapping)


def format_config(c: Configuration) -> str:
    iface = ", ".join(map(term_str, c.interface))
    body = ", ".join(f"{term_str(e.left)} = {term_str(e.right)}" for e in c.body)
    left = f"< {iface} |" if iface else "< |"
    return f"{left} {body} >" if body else f"{left} >"


def print_config(c: Configuration) -> str:
    """Canonical text of ``c``: ``parse_config(print_config(c))`` is congruent to ``c``."""
    return format_config(_printable(c))


def print_rule(r: Rule) -> str:
    return f"rule {r.label()};"


def print_system(s: System, configs: dict | None = None) -> str:
    lines = []
    if s.signature:
        decl = ", ".join(f"{k}/{v}" for k, v in s.signature.items())
        lines.append(f"agents {{ {decl} }}")
    lines.extend(print_rule(r) for r in s.rules)
    for name, c in (configs or {}).items():
        lines.append(f"config {name} = {print_config(c)};")
    return "\n".join(lines) + "\n"


def is_user_name(n: str) -> bool:
    return bool(USER_NAME.match(n))


# -- reports -------------------------------------------------------------------

def to_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False)


def print_report(report, machine: bool = False) -> str:
    """Render a report object; ``machine=True`` gives one JSON document."""
    data = report.as_dict()
    if machine:
        return to_json(data)
    return report.describe()
