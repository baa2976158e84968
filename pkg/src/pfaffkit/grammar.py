"""Input documents: named forms, families and generator sets, plus task
lines that drive the engines.

A document is line oriented.  `#` starts a comment.  The ambient
dimension comes first (`n = 3`), then declarations

    NAME = <form expression>          x0^2*d1 - x0*x1*d0 + 1/2*x2^2*d3
    NAME = rational(F=..., G=...)     a rational family
    NAME = logarithmic(factors=[...], residues=[...])
    NAME = [A, B]                     an ordered generator set

and task lines such as `basis 3 1 2`, `frobenius A`,
`tangent A --twist 2`, `sumdim [A, B]`, `probe-sing A --trials 20
--seed 3` or `selftest`.  Variables are x0..xn, differentials d0..dn,
`*` multiplies (wedge on forms), `^` takes powers of polynomials, and
p/q writes a rational number.  Parsing a printed document reproduces
the document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .families import LogarithmicFamily, RationalFamily
from .forms import ExtForm, HPoly, dx

TASKS = (
    "basis", "frobenius", "wedge-top", "saturate", "tangent",
    "tangent-system", "homij", "hypb", "sumdim", "relations",
    "probe-sing", "selftest",
)

FLAG_KEYS = ("twist", "trials", "seed")

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^/()\[\],=])|(?P<bad>.)")

_VAR_RE = re.compile(r"^x(\d+)$")
_DIFF_RE = re.compile(r"^d(\d+)$")


@dataclass
class Token:
    kind: str  # "num" | "name" | "op"
    value: str
    start: int
    end: int


def tokenize(text: str, line_no: int):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "ws":
            continue
        if m.lastgroup == "bad":
            raise InputError(
                f"line {line_no}, column {m.start() + 1}: "
                f"unexpected character {m.group()!r}")
        tokens.append(Token(m.lastgroup, m.group(), m.start(), m.end()))
    return tokens


@dataclass
class Declaration:
    name: str
    kind: str  # "form" | "family" | "set"
    value: object  # ExtForm | family instance | list of member names

    def __eq__(self, other):
        return (isinstance(other, Declaration) and self.name == other.name
                and self.kind == other.kind and self.value == other.value)


@dataclass
class Task:
    name: str
    args: tuple  # of ("name", s) | ("int", i) | ("list", (names...)) | ("flag", (key, i))

    def __eq__(self, other):
        return (isinstance(other, Task) and self.name == other.name
                and self.args == other.args)


class InputDocument:
    def __init__(self, n, decls, tasks):
        self.n = n
        self.decls = decls  # name -> Declaration, insertion ordered
        self.tasks = tasks

    def __eq__(self, other):
        return (isinstance(other, InputDocument) and self.n == other.n
                and list(self.decls.items()) == list(other.decls.items())
                and self.tasks == other.tasks)

    def form_of(self, name: str) -> ExtForm:
        decl = self.decls[name]
        if decl.kind == "form":
            return decl.value
        if decl.kind == "family":
            return decl.value.form
        raise InputError(f"{name} is a generator set, not a single form")


class _ExprParser:
    """Recursive descent over one right-hand side; values are either
    Fraction scalars or forms."""

    def __init__(self, text, tokens, line_no, decls, n):
        self.text = text
        self.tokens = tokens
        self.line_no = line_no
        self.decls = decls
        self.n = n
        self.pos = 0

    def error(self, message, token=None):
        col = (token.start + 1) if token else (
            self.tokens[self.pos].start + 1 if self.pos < len(self.tokens)
            else len(self.text) + 1)
        return InputError(f"line {self.line_no}, column {col}: {message}")

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of expression")
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok.kind != "op" or tok.value != op:
            raise self.error(f"expected {op!r}", tok)
        return tok

    def at_op(self, *ops):
        tok = self.peek()
        return tok is not None and tok.kind == "op" and tok.value in ops

    # values: ("scalar", Fraction) or ("form", ExtForm)

    def _to_form(self, value):
        kind, payload = value
        if kind == "form":
            return payload
        return ExtForm.from_poly(HPoly.constant(payload, self.n), self.n)

    def _mul(self, a, b, token):
        if a[0] == "scalar" and b[0] == "scalar":
            return ("scalar", a[1] * b[1])
        if a[0] == "scalar":
            return ("form", b[1].scale(a[1]))
        if b[0] == "scalar":
            return ("form", a[1].scale(b[1]))
        from .forms import wedge
        return ("form", wedge(a[1], b[1]))

    def parse_expr(self):
        start_tok = self.peek()
        sign = 1
        if self.at_op("-"):
            self.take()
            sign = -1
        elif self.at_op("+"):
            self.take()
        value, span = self.parse_term()
        if sign < 0:
            value = ("scalar", -value[1]) if value[0] == "scalar" \
                else ("form", -value[1])
        while self.at_op("+", "-"):
            op = self.take()
            term, term_span = self.parse_term()
            if op.value == "-":
                term = ("scalar", -term[1]) if term[0] == "scalar" \
                    else ("form", -term[1])
            try:
                if value[0] == "scalar" and term[0] == "scalar":
                    value = ("scalar", value[1] + term[1])
                else:
                    value = ("form", self._to_form(value) + self._to_form(term))
            except InputError as exc:
                text = self.text[term_span[0]:term_span[1]].strip()
                raise InputError(
                    f"line {self.line_no}: term '{text}' breaks homogeneity "
                    f"of the sum ({exc})") from None
        return value

    def parse_term(self):
        first = self.peek()
        value = self.parse_factor()
        last_end = self.tokens[self.pos - 1].end
        while self.at_op("*"):
            tok = self.take()
            rhs = self.parse_factor()
            last_end = self.tokens[self.pos - 1].end
            value = self._mul(value, rhs, tok)
        return value, (first.start, last_end)

    def parse_factor(self):
        value = self.parse_atom()
        if self.at_op("^"):
            tok = self.take()
            exp_tok = self.take()
            if exp_tok.kind != "num":
                raise self.error("exponent must be a nonnegative integer",
                                 exp_tok)
            exponent = int(exp_tok.value)
            if value[0] == "scalar":
                return ("scalar", value[1] ** exponent)
            form = value[1]
            if form.k != 0:
                raise self.error(
                    "cannot exponentiate a differential form", tok)
            return ("form", ExtForm.from_poly(
                form.coeff(()) ** exponent, self.n))
        return value

    def parse_atom(self):
        tok = self.take()
        if tok.kind == "num":
            numerator = int(tok.value)
            if self.at_op("/"):
                self.take()
                den_tok = self.take()
                if den_tok.kind != "num" or int(den_tok.value) == 0:
                    raise self.error("denominator must be a nonzero integer",
                                     den_tok)
                return ("scalar", Fraction(numerator, int(den_tok.value)))
            return ("scalar", Fraction(numerator))
        if tok.kind == "op" and tok.value == "(":
            value = self.parse_expr()
            self.expect_op(")")
            return value
        if tok.kind == "op" and tok.value == "-":
            value = self.parse_atom()
            return ("scalar", -value[1]) if value[0] == "scalar" \
                else ("form", -value[1])
        if tok.kind == "name":
            var = _VAR_RE.match(tok.value)
            if var:
                i = int(var.group(1))
                if i > self.n:
                    raise self.error(
                        f"variable x{i} out of range for n = {self.n}", tok)
                return ("form", ExtForm.from_poly(
                    HPoly.variable(i, self.n), self.n))
            diff = _DIFF_RE.match(tok.value)
            if diff:
                i = int(diff.group(1))
                if i > self.n:
                    raise self.error(
                        f"differential d{i} out of range for n = {self.n}", tok)
                return ("form", dx(i, self.n))
            if tok.value in self.decls:
                decl = self.decls[tok.value]
                if decl.kind == "form":
                    return ("form", decl.value)
                if decl.kind == "family":
                    return ("form", decl.value.form)
                raise self.error(
                    f"generator set {tok.value} cannot appear in an "
                    f"expression", tok)
            raise self.error(f"unknown name {tok.value!r}", tok)
        raise self.error(f"unexpected token {tok.value!r}", tok)

    def require_poly(self, what: str) -> HPoly:
        value = self.parse_expr()
        if value[0] == "scalar":
            return HPoly.constant(value[1], self.n)
        form = value[1]
        if form.k != 0:
            raise self.error(f"{what} must be a polynomial, not a form")
        return form.coeff(())

    def require_scalar(self, what: str) -> Fraction:
        value = self.parse_expr()
        if value[0] == "scalar":
            return value[1]
        form = value[1]
        if form.k == 0 and (form.is_zero or form.coeff_degree == 0):
            return form.coeff(()).coeff((0,) * (self.n + 1))
        raise self.error(f"{what} must be a rational number")

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected trailing token {tok.value!r}", tok)


def _parse_family(parser: _ExprParser, head: str):
    parser.expect_op("(")
    kwargs = {}
    order = []
    while True:
        key_tok = parser.take()
        if key_tok.kind != "name":
            raise parser.error("expected a keyword argument", key_tok)
        parser.expect_op("=")
        key = key_tok.value
        if key in kwargs:
            raise parser.error(f"duplicate keyword {key}", key_tok)
        if head == "rational":
            if key not in ("F", "G"):
                raise parser.error(f"unknown keyword {key} for rational",
                                   key_tok)
            kwargs[key] = parser.require_poly(key)
        else:
            if key == "factors":
                parser.expect_op("[")
                factors = [parser.require_poly("factor")]
                while parser.at_op(","):
                    parser.take()
                    factors.append(parser.require_poly("factor"))
                parser.expect_op("]")
                kwargs[key] = factors
            elif key == "residues":
                parser.expect_op("[")
                residues = [parser.require_scalar("residue")]
                while parser.at_op(","):
                    parser.take()
                    residues.append(parser.require_scalar("residue"))
                parser.expect_op("]")
                kwargs[key] = residues
            else:
                raise parser.error(
                    f"unknown keyword {key} for logarithmic", key_tok)
        order.append(key)
        if parser.at_op(","):
            parser.take()
            continue
        parser.expect_op(")")
        break
    if head == "rational":
        if set(kwargs) != {"F", "G"}:
            raise InputError(
                f"line {parser.line_no}: rational needs F and G")
        return RationalFamily(kwargs["F"], kwargs["G"])
    if set(kwargs) != {"factors", "residues"}:
        raise InputError(
            f"line {parser.line_no}: logarithmic needs factors and residues")
    return LogarithmicFamily(kwargs["factors"], kwargs["residues"])


def _parse_set(parser: _ExprParser):
    parser.expect_op("[")
    names = []
    while True:
        tok = parser.take()
        if tok.kind != "name" or tok.value not in parser.decls:
            raise parser.error("generator sets list declared names", tok)
        decl = parser.decls[tok.value]
        if decl.kind == "set":
            raise parser.error("generator sets cannot nest", tok)
        names.append(tok.value)
        if parser.at_op(","):
            parser.take()
            continue
        parser.expect_op("]")
        break
    return names


def _parse_declaration(name, rhs, line_no, decls, n):
    tokens = tokenize(rhs, line_no)
    parser = _ExprParser(rhs, tokens, line_no, decls, n)
    first = parser.peek()
    if first is None:
        raise InputError(f"line {line_no}: empty right-hand side")
    if first.kind == "name" and first.value in ("rational", "logarithmic"):
        parser.take()
        family = _parse_family(parser, first.value)
        parser.done()
        if family.n != n:
            raise InputError(
                f"line {line_no}: family over the wrong variable count")
        return Declaration(name, "family", family)
    if first.kind == "op" and first.value == "[":
        names = _parse_set(parser)
        parser.done()
        return Declaration(name, "set", names)
    value = parser.parse_expr()
    parser.done()
    if value[0] == "scalar":
        form = ExtForm.from_poly(HPoly.constant(value[1], n), n)
    else:
        form = value[1]
    return Declaration(name, "form", form)


def _parse_task(line, line_no, decls):
    tokens = tokenize(line, line_no)
    # the task word may contain '-', which tokenizes as an operator
    pos = 0
    head = tokens[pos]
    name = head.value
    pos += 1
    while (pos + 1 < len(tokens) and tokens[pos].kind == "op"
           and tokens[pos].value == "-" and tokens[pos].end == tokens[pos].start + 1
           and tokens[pos + 1].kind == "name"
           and tokens[pos].start == tokens[pos - 1].end
           and tokens[pos + 1].start == tokens[pos].end):
        name = name + "-" + tokens[pos + 1].value
        pos += 2
    if name not in TASKS:
        raise InputError(f"line {line_no}: unknown task {name!r}")
    args = []
    while pos < len(tokens):
        tok = tokens[pos]
        if tok.kind == "op" and tok.value == "-":
            if (pos + 2 < len(tokens) and tokens[pos + 1].kind == "op"
                    and tokens[pos + 1].value == "-"
                    and tokens[pos + 2].kind == "name"):
                key = tokens[pos + 2].value
                if key not in FLAG_KEYS:
                    raise InputError(
                        f"line {line_no}: unknown flag --{key}")
                pos += 3
                sign = 1
                if (pos < len(tokens) and tokens[pos].kind == "op"
                        and tokens[pos].value == "-"):
                    sign = -1
                    pos += 1
                if pos >= len(tokens) or tokens[pos].kind != "num":
                    raise InputError(
                        f"line {line_no}: flag --{key} needs an integer")
                args.append(("flag", (key, sign * int(tokens[pos].value))))
                pos += 1
                continue
            raise InputError(f"line {line_no}: stray '-' in task arguments")
        if tok.kind == "op" and tok.value == "[":
            names = []
            pos += 1
            expect_name = True
            while pos < len(tokens):
                tok = tokens[pos]
                if expect_name:
                    if tok.kind != "name":
                        raise InputError(
                            f"line {line_no}: expected a name in list")
                    names.append(tok.value)
                    expect_name = False
                    pos += 1
                    continue
                if tok.kind == "op" and tok.value == ",":
                    expect_name = True
                    pos += 1
                    continue
                if tok.kind == "op" and tok.value == "]":
                    pos += 1
                    break
                raise InputError(
                    f"line {line_no}: malformed list in task arguments")
            else:
                raise InputError(f"line {line_no}: unterminated list")
            for member in names:
                if member not in decls:
                    raise InputError(
                        f"line {line_no}: unknown name {member!r}")
            args.append(("list", tuple(names)))
            continue
        if tok.kind == "num":
            args.append(("int", int(tok.value)))
            pos += 1
            continue
        if tok.kind == "name":
            if tok.value not in decls:
                raise InputError(
                    f"line {line_no}: unknown name {tok.value!r}")
            args.append(("name", tok.value))
            pos += 1
            continue
        raise InputError(
            f"line {line_no}: unexpected token {tok.value!r} in task")
    return Task(name, tuple(args))


def parse(text: str) -> InputDocument:
    n = None
    decls = {}
    tasks = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        task_head = head
        # normalize e.g. "wedge-top" written with the hyphen attached
        if head not in TASKS and "-" in head:
            task_head = head
        if task_head in TASKS or line.split("-")[0].strip() in ():
            pass
        match = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$", line)
        if match and match.group(1) not in TASKS:
            name, rhs = match.group(1), match.group(2).strip()
            if name == "n":
                if n is not None:
                    raise InputError(f"line {line_no}: n declared twice")
                if not re.fullmatch(r"\d+", rhs) or int(rhs) < 1:
                    raise InputError(
                        f"line {line_no}: n must be a positive integer")
                n = int(rhs)
                continue
            if n is None:
                raise InputError(
                    f"line {line_no}: declare n before {name!r}")
            if name in decls:
                raise InputError(f"line {line_no}: {name!r} already declared")
            if _VAR_RE.match(name) or _DIFF_RE.match(name) or name in TASKS:
                raise InputError(f"line {line_no}: {name!r} is reserved")
            decls[name] = _parse_declaration(name, rhs, line_no, decls, n)
            continue
        tasks.append(_parse_task(line, line_no, decls))
    return InputDocument(n, decls, tasks)


def _print_family(family) -> str:
    if isinstance(family, RationalFamily):
        return f"rational(F={family.F}, G={family.G})"
    factors = ", ".join(str(f) for f in family.factors)
    residues = ", ".join(str(r) for r in family.residues)
    return f"logarithmic(factors=[{factors}], residues=[{residues}])"


def format_document(doc: InputDocument) -> str:
    lines = []
    if doc.n is not None:
        lines.append(f"n = {doc.n}")
    for name, decl in doc.decls.items():
        if decl.kind == "form":
            lines.append(f"{name} = {decl.value}")
        elif decl.kind == "family":
            lines.append(f"{name} = {_print_family(decl.value)}")
        else:
            lines.append(f"{name} = [{', '.join(decl.value)}]")
    for task in doc.tasks:
        parts = [task.name]
        for kind, payload in task.args:
            if kind == "name":
                parts.append(payload)
            elif kind == "int":
                parts.append(str(payload))
            elif kind == "list":
                parts.append(f"[{', '.join(payload)}]")
            else:
                key, value = payload
                parts.append(f"--{key} {value}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
