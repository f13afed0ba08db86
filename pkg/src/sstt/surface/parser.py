r"""Recursive descent parser for the surface language.

The parser turns token lists into surface syntax trees. It performs no
scope resolution; names are kept as written and resolved later during
elaboration. All failures raise SurfaceError with code "syntax" and the
span of the offending token.

Precedence, loosest to tightest:

  term     lambda forms, Sig, binder-group arrows, plain arrows
  app      left-associative juxtaposition
  postfix  .1  .2  @ (p, ...)
  atom     U, refl, names, parens/pairs, extension types, Id/J/rec01,
           split

`Id`, `J`, and `rec01` consume a fixed number of postfix-level
arguments immediately, so `Id A a b` needs no parentheses while
`Id A (f x) b` parenthesizes the compound argument as usual.
"""

from __future__ import annotations

from pathlib import PurePath

import sstt.tope as T
from sstt.surface.ast import (
    SApp,
    SArrow,
    SAxiom,
    SCheck,
    SDecl,
    SDef,
    SEntails,
    SExtApp,
    SExtLam,
    SExtType,
    SId,
    SJ,
    SLam,
    SPair,
    SParamGroup,
    SPi,
    SProj,
    SRec01,
    SRefl,
    SSigma,
    SSplit,
    STerm,
    SUniverse,
    SVar,
    Span,
    SurfaceError,
    SurfaceModule,
)
from sstt.surface.lexer import Token, tokenize

_ATOM_START = frozenset({"IDENT", "U", "refl", "(", "<", "Id", "J", "rec01", "split"})


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found '{tok.text}'", tok.span)
        return self.advance()

    def error(self, message: str, span: Span) -> SurfaceError:
        return SurfaceError("syntax", message, span)

    # Declarations

    def parse_decl(self) -> SDecl:
        tok = self.peek()
        match tok.kind:
            case "def":
                return self._parse_def()
            case "axiom":
                return self._parse_axiom()
            case "#check":
                return self._parse_check()
            case "#entails":
                return self._parse_entails()
            case _:
                raise self.error(
                    f"expected a declaration (def, axiom, #check, or #entails), found '{tok.text}'",
                    tok.span,
                )

    def _parse_def(self) -> SDef:
        start = self.expect("def", "'def'")
        name = self.expect("IDENT", "a name after 'def'")
        params = self._parse_params()
        constraint = self._parse_constraint()
        self.expect(":", "':' before the declared type")
        ty = self.parse_term()
        self.expect(":=", "':=' before the body")
        body = self.parse_term()
        self.expect(";", "';' after the declaration")
        return SDef(name.text, params, constraint, ty, body, start.span)

    def _parse_axiom(self) -> SAxiom:
        start = self.expect("axiom", "'axiom'")
        name = self.expect("IDENT", "a name after 'axiom'")
        params = self._parse_params()
        constraint = self._parse_constraint()
        self.expect(":", "':' before the declared type")
        ty = self.parse_term()
        self.expect(";", "';' after the declaration")
        return SAxiom(name.text, params, constraint, ty, start.span)

    def _parse_check(self) -> SCheck:
        start = self.expect("#check", "'#check'")
        term = self.parse_term()
        self.expect(":", "':' between the term and its type")
        ty = self.parse_term()
        self.expect(";", "';' after the command")
        return SCheck(term, ty, start.span)

    def _parse_entails(self) -> SEntails:
        start = self.expect("#entails", "'#entails'")
        self.expect("[", "'[' opening the variable list")
        names: list[str] = []
        names.append(self.expect("IDENT", "an interval variable").text)
        while not self.at("]"):
            self.accept(",")
            names.append(self.expect("IDENT", "an interval variable").text)
        self.expect("]", "']' closing the variable list")
        hyp = self.parse_tope()
        self.expect("=>", "'=>' between hypothesis and goal")
        goal = self.parse_tope()
        self.expect(";", "';' after the command")
        return SEntails(tuple(names), hyp, goal, start.span)

    def _parse_params(self) -> tuple[SParamGroup, ...]:
        groups: list[SParamGroup] = []
        seen_cube = False
        while self.at("("):
            start = self.advance()
            names = self._parse_ident_list("a parameter name")
            self.expect(":", "':' in the parameter group")
            if self.at("NUMBER") and self.peek().text == "2" and self.peek(1).kind == ")":
                self.advance()
                ty: STerm | None = None
                seen_cube = True
            else:
                ty = self.parse_term()
                if seen_cube:
                    raise self.error(
                        "term parameters must come before interval parameters", start.span
                    )
            self.expect(")", "')' closing the parameter group")
            groups.append(SParamGroup(names, ty, start.span))
        return tuple(groups)

    def _parse_constraint(self) -> T.Tope | None:
        if not self.at("["):
            return None
        self.advance()
        tope = self.parse_tope()
        self.expect("]", "']' closing the constraint")
        return tope

    # Terms

    def parse_term(self) -> STerm:
        tok = self.peek()
        match tok.kind:
            case "\\":
                return self._parse_lambda()
            case "Sig":
                return self._parse_sigma()
            case "(" if self._pi_group_ahead():
                return self._parse_pi()
            case _:
                t = self._parse_app()
                if self.accept("->"):
                    return SArrow(t, self.parse_term(), tok.span)
                return t

    def _pi_group_ahead(self) -> bool:
        offset = 1
        saw_name = False
        while self.peek(offset).kind == "IDENT":
            offset += 1
            saw_name = True
        return saw_name and self.peek(offset).kind == ":"

    def _parse_lambda(self) -> STerm:
        start = self.expect("\\", "a lambda")
        if self.accept("{"):
            names = self._parse_ident_list("an interval binder")
            self.expect("}", "'}' closing the interval binders")
            self.expect(".", "'.' after the binders")
            return SExtLam(names, self.parse_term(), start.span)
        names = self._parse_ident_list("a binder")
        self.expect(".", "'.' after the binders")
        return SLam(names, self.parse_term(), start.span)

    def _parse_sigma(self) -> STerm:
        start = self.expect("Sig", "'Sig'")
        self.expect("(", "'(' opening the Sig binder")
        names = self._parse_ident_list("a binder")
        self.expect(":", "':' in the Sig binder")
        fst_type = self.parse_term()
        self.expect(")", "')' closing the Sig binder")
        snd_type = self.parse_term()
        return SSigma(names, fst_type, snd_type, start.span)

    def _parse_pi(self) -> STerm:
        start = self.peek()
        groups: list[tuple[tuple[str, ...], STerm]] = []
        while self.at("(") and self._pi_group_ahead():
            self.advance()
            names = self._parse_ident_list("a binder")
            self.expect(":", "':' in the binder group")
            domain = self.parse_term()
            self.expect(")", "')' closing the binder group")
            groups.append((names, domain))
        self.expect("->", "'->' after the binder group")
        codomain = self.parse_term()
        return SPi(tuple(groups), codomain, start.span)

    def _parse_ident_list(self, what: str) -> tuple[str, ...]:
        names = [self.expect("IDENT", what).text]
        while self.at("IDENT"):
            names.append(self.advance().text)
        return tuple(names)

    def _parse_app(self) -> STerm:
        t = self._parse_postfix()
        while self.peek().kind in _ATOM_START:
            arg = self._parse_postfix()
            t = SApp(t, arg, t.span)
        return t

    def _parse_postfix(self) -> STerm:
        t = self._parse_atom()
        while True:
            tok = self.peek()
            match tok.kind:
                case ".1":
                    self.advance()
                    t = SProj(t, 1, tok.span)
                case ".2":
                    self.advance()
                    t = SProj(t, 2, tok.span)
                case "@":
                    self.advance()
                    self.expect("(", "'(' opening the point tuple")
                    points = [self._parse_point()]
                    while self.accept(","):
                        points.append(self._parse_point())
                    self.expect(")", "')' closing the point tuple")
                    t = SExtApp(t, tuple(points), tok.span)
                case _:
                    return t

    def _parse_point(self) -> tuple[T.Interval, Span]:
        tok = self.peek()
        if tok.kind == "NUMBER" and tok.text in ("0", "1"):
            self.advance()
            return (T.I0 if tok.text == "0" else T.I1), tok.span
        if tok.kind == "IDENT":
            self.advance()
            return T.IVar(tok.text), tok.span
        raise self.error(
            f"expected an interval point (a variable, 0, or 1), found '{tok.text}'", tok.span
        )

    def _parse_atom(self) -> STerm:
        tok = self.peek()
        match tok.kind:
            case "U":
                self.advance()
                return SUniverse(tok.span)
            case "refl":
                self.advance()
                return SRefl(tok.span)
            case "IDENT":
                self.advance()
                return SVar(tok.text, tok.span)
            case "(":
                return self._parse_paren()
            case "<":
                return self._parse_ext_type()
            case "Id":
                self.advance()
                ty = self._parse_argument("Id")
                lhs = self._parse_argument("Id")
                rhs = self._parse_argument("Id")
                return SId(ty, lhs, rhs, tok.span)
            case "J":
                self.advance()
                motive = self._parse_argument("J")
                base = self._parse_argument("J")
                eq = self._parse_argument("J")
                return SJ(motive, base, eq, tok.span)
            case "rec01":
                self.advance()
                at_zero = self._parse_argument("rec01")
                at_one = self._parse_argument("rec01")
                return SRec01(at_zero, at_one, tok.span)
            case "split":
                return self._parse_split()
            case _:
                raise self.error(f"expected a term, found '{tok.text}'", tok.span)

    def _parse_argument(self, head: str) -> STerm:
        tok = self.peek()
        if tok.kind not in _ATOM_START:
            raise self.error(f"'{head}' is missing an argument: found '{tok.text}'", tok.span)
        return self._parse_postfix()

    def _parse_paren(self) -> STerm:
        start = self.expect("(", "'('")
        items = [self.parse_term()]
        while self.accept(","):
            items.append(self.parse_term())
        if len(items) == 1:
            self.expect(")", "')'")
            return items[0]
        self.expect(")", "')' closing the pair")
        paired = items[-1]
        for item in reversed(items[:-1]):
            paired = SPair(item, paired, start.span)
        return paired

    def _parse_ext_type(self) -> STerm:
        start = self.expect("<", "'<'")
        self.expect("{", "'{' opening the interval binders")
        names = self._parse_ident_list("an interval binder")
        self.expect("|", "'|' before the shape tope")
        shape = self.parse_tope()
        self.expect("}", "'}' closing the shape")
        self.expect("->", "'->' before the family")
        family = self.parse_term()
        cases: tuple[tuple[T.Tope, STerm], ...] | None = None
        if self.accept("["):
            cases = self._parse_case_list("]")
            self.expect("]", "']' closing the boundary cases")
        self.expect(">", "'>' closing the extension type")
        return SExtType(names, shape, family, cases, start.span)

    def _parse_split(self) -> STerm:
        start = self.expect("split", "'split'")
        self.expect("[", "'[' after 'split'")
        cases = self._parse_case_list("]")
        self.expect("]", "']' closing the split cases")
        return SSplit(cases, start.span)

    def _parse_case_list(self, closer: str) -> tuple[tuple[T.Tope, STerm], ...]:
        cases: list[tuple[T.Tope, STerm]] = []
        if self.at(closer):
            return ()
        while True:
            tope = self.parse_tope()
            self.expect("|->", "'|->' between the case tope and its value")
            value = self.parse_term()
            cases.append((tope, value))
            if not self.accept(","):
                return tuple(cases)

    # Topes

    def parse_tope(self) -> T.Tope:
        t = self._parse_and_tope()
        while self.accept("\\/"):
            t = T.Or(t, self._parse_and_tope())
        return t

    def _parse_and_tope(self) -> T.Tope:
        t = self._parse_atom_tope()
        while self.accept("/\\"):
            t = T.And(t, self._parse_atom_tope())
        return t

    def _parse_atom_tope(self) -> T.Tope:
        tok = self.peek()
        match tok.kind:
            case "TOP":
                self.advance()
                return T.TOP
            case "BOT":
                self.advance()
                return T.BOT
            case "(":
                self.advance()
                t = self.parse_tope()
                self.expect(")", "')' closing the tope")
                return t
            case _:
                lhs, _ = self._parse_point()
                op = self.peek()
                if op.kind == "==":
                    self.advance()
                    rhs, _ = self._parse_point()
                    return T.Eq(lhs, rhs)
                if op.kind == "<=":
                    self.advance()
                    rhs, _ = self._parse_point()
                    return T.Le(lhs, rhs)
                raise self.error(f"expected '==' or '<=', found '{op.text}'", op.span)


def _module_name(filename: str) -> str:
    stem = PurePath(filename).stem
    return stem if stem else filename


def parse_module(src: str, filename: str = "<input>", name: str | None = None) -> SurfaceModule:
    """Parse a full module: a sequence of declarations up to end of input."""
    parser = _Parser(tokenize(src, filename))
    decls: list[SDecl] = []
    while not parser.at("EOF"):
        decls.append(parser.parse_decl())
    return SurfaceModule(name if name is not None else _module_name(filename), tuple(decls))


def parse_term(src: str, filename: str = "<input>") -> STerm:
    """Parse a single term; trailing input is an error."""
    parser = _Parser(tokenize(src, filename))
    term = parser.parse_term()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise parser.error(f"unexpected '{tok.text}' after the term", tok.span)
    return term


def parse_tope_query(
    src: str, filename: str = "<query>"
) -> tuple[tuple[str, ...], T.Tope, T.Tope]:
    """Parse an entailment query: `[vars] HYP => GOAL`.

    The variable list may be omitted, in which case the variables are
    collected from the two topes in sorted order.
    """
    parser = _Parser(tokenize(src, filename))
    names: list[str] = []
    explicit = False
    if parser.accept("["):
        explicit = True
        while not parser.at("]"):
            parser.accept(",")
            names.append(parser.expect("IDENT", "an interval variable").text)
        parser.expect("]", "']' closing the variable list")
    hyp = parser.parse_tope()
    parser.expect("=>", "'=>' between hypothesis and goal")
    goal = parser.parse_tope()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise parser.error(f"unexpected '{tok.text}' after the query", tok.span)
    if not explicit:
        names = sorted(T.tope_vars(hyp) | T.tope_vars(goal))
    return tuple(names), hyp, goal
