"""Reader for the SMT-LIB flavored input language.

Only the regex-membership plus length-arithmetic fragment is accepted. Known
string or regex operators outside it (``str.++``, ``str.substr``, ...) raise
:class:`UnsupportedTerm`, which the CLI turns into an ``unknown`` answer
instead of an input error.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass, field

from regexlen import automata
from regexlen.alphabet import Alphabet
from regexlen.formula import (
    FALSE,
    TRUE,
    Add,
    And,
    BoolConst,
    Const,
    Formula,
    InRe,
    IntEq,
    IntLt,
    IntTerm,
    IntVar,
    Len,
    Mul,
    Not,
    Or,
    conj,
    linear_form,
)
from regexlen.formula import to_smtlib as formula_to_smtlib
from regexlen.regex import (
    EMPTY,
    EPSILON,
    Comp,
    Concat,
    Lit,
    Regex,
    Star,
    Union,
    char_class,
    concat,
    intersection,
    opt,
    plus,
    quote,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)


class UnsupportedTerm(ParseError):
    """A well-formed term outside the supported fragment."""


# -- s-expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Tok:
    kind: str  # "sym" | "num" | "str"
    value: object
    line: int
    col: int


@dataclass
class SList:
    items: list
    line: int
    col: int


_SYMBOL_CHARS = _re.compile(r"[^\s()\";|]+")


def read_sexprs(text: str) -> list:
    """Tokenize and group ``text`` into a list of top-level s-expressions."""
    out: list = []
    stack: list[SList] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def emit(x):
        (stack[-1].items if stack else out).append(x)

    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append(SList([], line, col))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            emit_done = stack.pop()
            emit(emit_done)
            i, col = i + 1, col + 1
            continue
        if c == '"':
            start_line, start_col = line, col
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string literal", start_line, start_col)
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        buf.append('"')
                        j += 2
                        continue
                    break
                buf.append(text[j])
                j += 1
            emit(Tok("str", _unescape("".join(buf), start_line, start_col), start_line, start_col))
            breaks = text.count("\n", i, j)
            if breaks:
                line += breaks
                col = j - text.rfind("\n", i, j)
            else:
                col += j + 1 - i
            i = j + 1
            continue
        if c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", line, col)
            emit(Tok("sym", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        m = _SYMBOL_CHARS.match(text, i)
        word = m.group()
        kind = "num" if word.isdigit() else "sym"
        emit(Tok(kind, int(word) if kind == "num" else word, line, col))
        i, col = m.end(), col + len(word)
    if stack:
        raise ParseError("unbalanced '('", stack[-1].line, stack[-1].col)
    return out


_ESCAPE = _re.compile(r"\\u\{([0-9a-fA-F]{1,5})\}|\\u([0-9a-fA-F]{4})")


def _unescape(raw: str, line: int, col: int) -> str:
    def sub(m):
        code = int(m.group(1) or m.group(2), 16)
        if code > 0x2FFFF:
            raise ParseError("escape out of range", line, col)
        return chr(code)

    return _ESCAPE.sub(sub, raw)


# -- scripts ---------------------------------------------------------------


@dataclass
class Script:
    declarations: dict = field(default_factory=dict)  # name -> "String" | "Int"
    assertions: list = field(default_factory=list)
    # ("check-sat" | "get-model", number of assertions seen so far)
    commands: list = field(default_factory=list)
    unsupported: str | None = None
    # commands at or after this index see the unsupported assertion
    unsupported_from: int | None = None

    @property
    def formula(self) -> Formula:
        return conj(*self.assertions)

    def formula_at(self, n_asserts: int) -> Formula:
        return conj(*self.assertions[:n_asserts])

    def __iter__(self):
        return iter((self.formula, self.declarations, self.commands))


_IGNORED = {"set-logic", "set-info", "set-option", "exit", "push", "pop", "get-info"}


def parse_script(text: str, alphabet: Alphabet | None = None, lenient: bool = False) -> Script:
    """Parse a whole script.

    With ``lenient`` an unsupported term does not raise; the script is
    returned with ``unsupported`` set to the diagnostic so the caller can
    still answer each ``check-sat`` (with ``unknown``).
    """
    alphabet = alphabet or Alphabet.ascii_printable()
    script = Script()
    for cmd in read_sexprs(text):
        if not isinstance(cmd, SList) or not cmd.items or not _is_sym(cmd.items[0]):
            raise ParseError("expected a command", *_pos(cmd))
        head = cmd.items[0].value
        args = cmd.items[1:]
        if head == "declare-const":
            _expect(cmd, len(args) == 2 and _is_sym(args[0]) and _is_sym(args[1]), "(declare-const <name> <sort>)")
            _declare(script, args[0], args[1])
        elif head == "declare-fun":
            ok = len(args) == 3 and _is_sym(args[0]) and isinstance(args[1], SList) and _is_sym(args[2])
            _expect(cmd, ok, "(declare-fun <name> () <sort>)")
            if args[1].items:
                raise UnsupportedTerm("uninterpreted functions with arguments", *_pos(cmd))
            _declare(script, args[0], args[2])
        elif head == "assert":
            _expect(cmd, len(args) == 1, "(assert <formula>)")
            try:
                script.assertions.append(_Elaborator(script.declarations, alphabet).boolean(args[0]))
            except UnsupportedTerm as e:
                if not lenient:
                    raise
                if script.unsupported is None:
                    script.unsupported = str(e)
                    script.unsupported_from = len(script.commands)
        elif head in ("check-sat", "get-model"):
            _expect(cmd, not args, f"({head})")
            script.commands.append((head, len(script.assertions)))
        elif head in _IGNORED:
            continue
        else:
            raise ParseError(f"unknown command {head!r}", *_pos(cmd))
    return script


def parse_formula(text: str, declarations: dict, alphabet: Alphabet | None = None) -> Formula:
    (sx,) = read_sexprs(text)
    return _Elaborator(declarations, alphabet or Alphabet.ascii_printable()).boolean(sx)


def parse_regex(text: str, alphabet: Alphabet | None = None) -> Regex:
    (sx,) = read_sexprs(text)
    return _Elaborator({}, alphabet or Alphabet.ascii_printable()).regex(sx)


def _declare(script: Script, name: Tok, sort: Tok):
    if sort.value not in ("String", "Int"):
        raise UnsupportedTerm(f"sort {sort.value}", sort.line, sort.col)
    if name.value in script.declarations:
        raise ParseError(f"{name.value!r} declared twice", name.line, name.col)
    script.declarations[name.value] = sort.value


def _is_sym(x) -> bool:
    return isinstance(x, Tok) and x.kind == "sym"


def _pos(x):
    return (x.line, x.col) if isinstance(x, (Tok, SList)) else (None, None)


def _expect(cmd, ok, shape):
    if not ok:
        raise ParseError(f"expected {shape}", cmd.line, cmd.col)


# -- terms -----------------------------------------------------------------


_INT_OPS = {"+", "-", "*", "str.len"}
_BOOL_OPS = {"and", "or", "not", "=>", "=", "<", "<=", ">", ">=", "distinct", "str.in_re"}


class _Elaborator:
    def __init__(self, declarations: dict, alphabet: Alphabet):
        self.decls = declarations
        self.alphabet = alphabet

    # sorts are inferred from the head symbol or the declaration
    def sort(self, x) -> str:
        if isinstance(x, Tok):
            if x.kind == "num":
                return "Int"
            if x.kind == "str":
                return "String"
            if x.value in ("true", "false"):
                return "Bool"
            if x.value in self.decls:
                return self.decls[x.value]
            if x.value.startswith("re."):
                return "RegLan"
            raise ParseError(f"undeclared symbol {x.value!r}", x.line, x.col)
        head = self._head(x)
        if head in _INT_OPS:
            return "Int"
        if head in _BOOL_OPS:
            return "Bool"
        if head.startswith("re.") or head == "str.to_re" or head.startswith("_ re."):
            return "RegLan"
        if head.startswith("str."):
            raise UnsupportedTerm(f"unsupported term {head}", x.line, x.col)
        raise ParseError(f"unknown function {head!r}", x.line, x.col)

    def _head(self, x: SList) -> str:
        if not x.items:
            raise ParseError("empty application", x.line, x.col)
        h = x.items[0]
        if _is_sym(h):
            return h.value
        if isinstance(h, SList) and h.items and _is_sym(h.items[0]) and h.items[0].value == "_":
            # indexed operator such as ((_ re.loop 1 3) r)
            return "_ " + str(h.items[1].value) if len(h.items) > 1 else "_"
        raise ParseError("expected a function symbol", *_pos(h))

    # -- Bool

    def boolean(self, x) -> Formula:
        if isinstance(x, Tok):
            if x.value == "true":
                return TRUE
            if x.value == "false":
                return FALSE
            if x.kind == "sym" and self.decls.get(x.value) == "Bool":
                raise UnsupportedTerm("Boolean variables", x.line, x.col)
            raise ParseError(f"expected a formula, got {x.value!r}", x.line, x.col)
        head = self._head(x)
        args = x.items[1:]
        if head == "and":
            return And(tuple(self.boolean(a) for a in args)) if args else TRUE
        if head == "or":
            return Or(tuple(self.boolean(a) for a in args)) if args else FALSE
        if head == "not":
            self._arity(x, args, 1)
            return Not(self.boolean(args[0]))
        if head == "=>":
            if len(args) < 2:
                raise ParseError("=> needs at least two arguments", x.line, x.col)
            out = self.boolean(args[-1])
            for a in reversed(args[:-1]):
                out = Or((Not(self.boolean(a)), out))
            return out
        if head == "str.in_re":
            self._arity(x, args, 2)
            return self.membership(args[0], args[1])
        if head in ("=", "distinct"):
            if len(args) < 2:
                raise ParseError(f"{head} needs at least two arguments", x.line, x.col)
            sorts = {self.sort(a) for a in args}
            if sorts == {"Int"}:
                ts = [self.integer(a) for a in args]
                if head == "=":
                    return conj(*(IntEq(ts[i], ts[i + 1]) for i in range(len(ts) - 1)))
                return conj(*(Not(IntEq(ts[i], ts[j])) for i in range(len(ts)) for j in range(i + 1, len(ts))))
            if sorts == {"Bool"} and len(args) == 2:
                a, b = self.boolean(args[0]), self.boolean(args[1])
                same = Or((And((a, b)), And((Not(a), Not(b)))))
                return same if head == "=" else Not(same)
            if sorts == {"String"}:
                raise UnsupportedTerm("unsupported term: string equality", x.line, x.col)
            raise ParseError(f"ill-sorted {head}", x.line, x.col)
        if head in ("<", "<=", ">", ">="):
            if len(args) < 2:
                raise ParseError(f"{head} needs at least two arguments", x.line, x.col)
            ts = [self.integer(a) for a in args]
            return conj(*(self._compare(head, ts[i], ts[i + 1]) for i in range(len(ts) - 1)))
        if self.sort(x) != "Bool":
            raise ParseError(f"expected a formula, got {head!r}", x.line, x.col)
        raise UnsupportedTerm(f"unsupported term {head}", x.line, x.col)

    @staticmethod
    def _compare(op, l, r) -> Formula:
        if op == "<":
            return IntLt(l, r)
        if op == ">":
            return IntLt(r, l)
        if op == "<=":
            return Or((IntLt(l, r), IntEq(l, r)))
        return Or((IntLt(r, l), IntEq(l, r)))

    def membership(self, s, r) -> Formula:
        regex = self.regex(r)
        subject = self.string(s)
        if isinstance(subject, str):
            # constant subject: decide now, the cube invariant wants variables
            a = automata.compile_regex(regex, self.alphabet)
            return BoolConst(automata.accepts(a, subject, self.alphabet))
        return InRe(subject.name, regex)

    # -- String: a variable (returned as IntVar-like handle) or a constant

    def string(self, x):
        if isinstance(x, Tok):
            if x.kind == "str":
                self._check_word(x.value, x)
                return x.value
            if x.kind == "sym" and self.decls.get(x.value) == "String":
                return _StrVar(x.value)
            if x.kind == "sym" and x.value not in self.decls:
                raise ParseError(f"undeclared symbol {x.value!r}", x.line, x.col)
            raise ParseError(f"expected a string term, got {x.value!r}", x.line, x.col)
        head = self._head(x)
        if head.startswith("str."):
            raise UnsupportedTerm(f"unsupported term {head}", x.line, x.col)
        raise ParseError(f"expected a string term, got {head!r}", x.line, x.col)

    def _check_word(self, word: str, where):
        for c in word:
            if c not in self.alphabet:
                raise ParseError(f"character {c!r} is not in the alphabet", *_pos(where))

    # -- Int

    def integer(self, x) -> IntTerm:
        if isinstance(x, Tok):
            if x.kind == "num":
                return Const(x.value)
            if x.kind == "sym" and self.decls.get(x.value) == "Int":
                return IntVar(x.value)
            if x.kind == "sym" and x.value not in self.decls:
                raise ParseError(f"undeclared symbol {x.value!r}", x.line, x.col)
            raise ParseError(f"expected an integer term, got {x.value!r}", x.line, x.col)
        head = self._head(x)
        args = x.items[1:]
        if head == "str.len":
            self._arity(x, args, 1)
            s = self.string(args[0])
            return Const(len(s)) if isinstance(s, str) else Len(s.name)
        if head == "+":
            if not args:
                raise ParseError("+ needs arguments", x.line, x.col)
            ts = [self.integer(a) for a in args]
            out = ts[0]
            for t in ts[1:]:
                out = Add(out, t)
            return out
        if head == "-":
            if not args:
                raise ParseError("- needs arguments", x.line, x.col)
            ts = [self.integer(a) for a in args]
            if len(ts) == 1:
                t = ts[0]
                return Const(-t.value) if isinstance(t, Const) else Mul(-1, t)
            out = ts[0]
            for t in ts[1:]:
                out = Add(out, Const(-t.value) if isinstance(t, Const) else Mul(-1, t))
            return out
        if head == "*":
            if len(args) < 2:
                raise ParseError("* needs at least two arguments", x.line, x.col)
            ts = [self.integer(a) for a in args]
            coef, rest = 1, []
            for t in ts:
                cs, k = linear_form(t)
                if cs:
                    rest.append(t)
                else:
                    coef *= k
            if len(rest) > 1:
                raise UnsupportedTerm("unsupported term: nonlinear multiplication", x.line, x.col)
            if not rest:
                return Const(coef)
            return Mul(coef, rest[0])
        if self.sort(x) != "Int":
            raise ParseError(f"expected an integer term, got {head!r}", x.line, x.col)
        raise UnsupportedTerm(f"unsupported term {head}", x.line, x.col)

    # -- RegLan

    def regex(self, x) -> Regex:
        if isinstance(x, Tok):
            if x.value == "re.allchar":
                return char_class(self.alphabet.chars)
            if x.value == "re.all":
                return Star(char_class(self.alphabet.chars))
            if x.value == "re.none":
                return EMPTY
            if x.kind == "sym" and x.value.startswith("re."):
                raise UnsupportedTerm(f"unsupported term {x.value}", x.line, x.col)
            raise ParseError(f"expected a regex, got {x.value!r}", x.line, x.col)
        head = self._head(x)
        args = x.items[1:]
        if head == "str.to_re":
            self._arity(x, args, 1)
            s = self.string(args[0])
            if not isinstance(s, str):
                raise UnsupportedTerm("unsupported term: str.to_re of a variable", x.line, x.col)
            return Lit(s)
        if head == "re.++":
            return concat(*(self.regex(a) for a in args)) if args else EPSILON
        if head == "re.union":
            if not args:
                return EMPTY
            out = self.regex(args[0])
            for a in args[1:]:
                out = Union(out, self.regex(a))
            return out
        if head in ("re.*", "re.+", "re.opt", "re.comp"):
            self._arity(x, args, 1)
            r = self.regex(args[0])
            return {"re.*": Star, "re.+": plus, "re.opt": opt, "re.comp": Comp}[head](r)
        if head in ("re.inter", "re.diff"):
            if len(args) < 2:
                raise ParseError(f"{head} needs at least two arguments", x.line, x.col)
            out = self.regex(args[0])
            for a in args[1:]:
                r = self.regex(a)
                out = intersection(out, r) if head == "re.inter" else intersection(out, Comp(r))
            return out
        if head == "re.range":
            self._arity(x, args, 2)
            lo, hi = self.string(args[0]), self.string(args[1])
            if not (isinstance(lo, str) and isinstance(hi, str)):
                raise UnsupportedTerm("unsupported term: re.range of a variable", x.line, x.col)
            if len(lo) != 1 or len(hi) != 1:
                return EMPTY
            return char_class(c for c in self.alphabet.chars if lo <= c <= hi)
        if head in ("_ re.^", "_ re.loop"):
            self._arity(x, args, 1)
            idx = x.items[0].items[2:]
            if not all(isinstance(i, Tok) and i.kind == "num" for i in idx):
                raise ParseError("indices must be numerals", x.line, x.col)
            bounds = [i.value for i in idx]
            r = self.regex(args[0])
            if head == "_ re.^":
                if len(bounds) != 1:
                    raise ParseError("(_ re.^ n) takes one index", x.line, x.col)
                return _power(r, bounds[0])
            if len(bounds) != 2:
                raise ParseError("(_ re.loop lo hi) takes two indices", x.line, x.col)
            lo, hi = bounds
            if hi < lo:
                return EMPTY
            tail = EPSILON
            for _ in range(hi - lo):
                tail = opt(concat(r, tail)) if tail != EPSILON else opt(r)
            return concat(_power(r, lo), tail) if lo else tail
        if head.startswith("re.") or head.startswith("_ re."):
            raise UnsupportedTerm(f"unsupported term {head.removeprefix('_ ')}", x.line, x.col)
        if head.startswith("str."):
            raise UnsupportedTerm(f"unsupported term {head}", x.line, x.col)
        raise ParseError(f"expected a regex, got {head!r}", x.line, x.col)

    @staticmethod
    def _arity(x, args, n):
        if len(args) != n:
            raise ParseError(f"{x.items[0].value if _is_sym(x.items[0]) else 'operator'} "
                             f"takes {n} argument{'s' if n != 1 else ''}", x.line, x.col)


def _power(r: Regex, n: int) -> Regex:
    return concat(*([r] * n)) if n else EPSILON


@dataclass(frozen=True)
class _StrVar:
    name: str


# -- printing --------------------------------------------------------------


def script_to_smtlib(script: Script) -> str:
    """Print a parsed script back; parsing the result gives the same terms."""
    lines = [f"(declare-const {name} {sort})" for name, sort in script.declarations.items()]
    done = 0
    for cmd, n in script.commands:
        for f in script.assertions[done:n]:
            lines.append(f"(assert {formula_to_smtlib(f)})")
        done = max(done, n)
        lines.append(f"({cmd})")
    for f in script.assertions[done:]:
        lines.append(f"(assert {formula_to_smtlib(f)})")
    return "\n".join(lines) + "\n"


def format_model(model: dict, declarations: dict) -> str:
    """``(model ...)`` block with one ``define-fun`` per declared variable."""
    lines = ["(model"]
    for name in sorted(declarations):
        sort = declarations[name]
        value = model.get(name, "" if sort == "String" else 0)
        if sort == "String":
            lines.append(f"  (define-fun {name} () String {quote(value)})")
        else:
            text = str(value) if value >= 0 else f"(- {-value})"
            lines.append(f"  (define-fun {name} () Int {text})")
    lines.append(")")
    return "\n".join(lines)
