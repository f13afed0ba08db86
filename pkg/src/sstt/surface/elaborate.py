"""Scope resolution and desugaring from surface syntax to kernel syntax.

Elaboration resolves every name to a bound variable, an interval
variable, or a module-level constant, and rewrites the surface sugar
(binder groups, arrows, boundary case lists, rec01) into kernel
constructors. It never consults types; the kernel checks the result.

Term and interval variables live in separate namespaces in the kernel,
but the surface language resolves names through one nested scope, so a
term binder can shadow an interval binder and vice versa. Using a name
in the wrong namespace is a cube-scope error here, with a span.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import sstt.tope as T
from sstt import kernel as K
from sstt.kernel.module import AxiomDecl, CheckCmd, Decl, DefDecl, EntailsCmd, Module
from sstt.surface import ast as S
from sstt.surface.ast import Span, SurfaceError


@dataclass(frozen=True)
class _Scope:
    """Nested binders, innermost last, plus interval binder groups for rec01."""

    locals_: tuple[tuple[str, str], ...] = ()
    cube_groups: tuple[tuple[str, ...], ...] = ()

    def push_terms(self, names: Iterable[str]) -> "_Scope":
        entries = tuple((n, "term") for n in names)
        return _Scope(self.locals_ + entries, self.cube_groups)

    def push_cubes(self, names: tuple[str, ...]) -> "_Scope":
        entries = tuple((n, "cube") for n in names)
        return _Scope(self.locals_ + entries, self.cube_groups + (names,))

    def kind_of(self, name: str) -> str | None:
        for bound, kind in reversed(self.locals_):
            if bound == name:
                return kind
        return None


def _require_distinct(names: tuple[str, ...], span: Span) -> None:
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise SurfaceError("scope", f"duplicate binder '{n}' in one group", span)
        seen.add(n)


def _group_capture_check(names: tuple[str, ...], domain: K.Term, span: Span) -> None:
    """Reject a binder group whose own names occur in its shared domain.

    The domain of a group like (x y : A) is elaborated once and reused
    for every binder, so a later copy would capture an earlier binder if
    the domain mentioned one of the group's own names.
    """
    if len(names) < 2:
        return
    free = K.free_term_vars(domain)
    for n in names[:-1]:
        if n in free:
            raise SurfaceError(
                "scope",
                f"'{n}' is bound by this group and also used in its domain; "
                "split the binder group",
                span,
            )


class _Elaborator:
    def __init__(self, known: set[str] | frozenset[str]):
        self.known = known

    # Terms

    def term(self, t: S.STerm, sc: _Scope) -> K.Term:
        match t:
            case S.SVar(name, span):
                return self._resolve(name, span, sc)
            case S.SUniverse(_):
                return K.Universe()
            case S.SPi(groups, codomain, span):
                return self._pi(groups, codomain, span, sc)
            case S.SArrow(domain, codomain, _):
                dom = self.term(domain, sc)
                cod = self.term(codomain, sc)
                binder = "_"
                if binder in K.free_term_vars(cod):
                    binder = K.fresh_name("_", K.free_term_vars(cod))
                return K.Pi(binder, dom, cod)
            case S.SLam(names, body, span):
                _require_distinct(names, span)
                out = self.term(body, sc.push_terms(names))
                for n in reversed(names):
                    out = K.Lam(n, out)
                return out
            case S.SSigma(names, fst_type, snd_type, span):
                _require_distinct(names, span)
                fst = self.term(fst_type, sc)
                _group_capture_check(names, fst, span)
                out = self.term(snd_type, sc.push_terms(names))
                for n in reversed(names):
                    out = K.Sigma(n, fst, out)
                return out
            case S.SPair(fst, snd, _):
                return K.Pair(self.term(fst, sc), self.term(snd, sc))
            case S.SProj(target, index, _):
                inner = self.term(target, sc)
                return K.Fst(inner) if index == 1 else K.Snd(inner)
            case S.SApp(fn, arg, _):
                return K.App(self.term(fn, sc), self.term(arg, sc))
            case S.SId(ty, lhs, rhs, _):
                return K.IdType(self.term(ty, sc), self.term(lhs, sc), self.term(rhs, sc))
            case S.SRefl(_):
                return K.Refl()
            case S.SJ(motive, base, eq, _):
                return K.J(self.term(motive, sc), self.term(base, sc), self.term(eq, sc))
            case S.SExtType(names, shape, family, cases, span):
                return self._ext_type(names, shape, family, cases, span, sc)
            case S.SExtLam(names, body, span):
                _require_distinct(names, span)
                return K.ExtLam(names, self.term(body, sc.push_cubes(names)))
            case S.SExtApp(fn, points, _):
                fn_k = self.term(fn, sc)
                resolved = tuple(self._point(p, pspan, sc) for p, pspan in points)
                return K.ExtApp(fn_k, resolved)
            case S.SSplit(cases, span):
                out_cases = []
                for tope, value in cases:
                    self._check_tope(tope, sc, span)
                    out_cases.append((tope, self.term(value, sc)))
                return K.Split(tuple(out_cases))
            case S.SRec01(at_zero, at_one, span):
                return self._rec01(at_zero, at_one, span, sc)
        raise TypeError(f"not a surface term: {t!r}")

    def _resolve(self, name: str, span: Span, sc: _Scope) -> K.Term:
        match sc.kind_of(name):
            case "term":
                return K.Var(name)
            case "cube":
                raise SurfaceError(
                    "cube-scope", f"'{name}' is an interval variable, not a term", span
                )
        if name in self.known:
            return K.Const(name)
        raise SurfaceError("scope", f"unknown name '{name}'", span)

    def _pi(
        self,
        groups: tuple[tuple[tuple[str, ...], S.STerm], ...],
        codomain: S.STerm,
        span: Span,
        sc: _Scope,
    ) -> K.Term:
        elaborated: list[tuple[tuple[str, ...], K.Term]] = []
        inner = sc
        for names, domain in groups:
            _require_distinct(names, span)
            dom = self.term(domain, inner)
            _group_capture_check(names, dom, span)
            elaborated.append((names, dom))
            inner = inner.push_terms(names)
        out = self.term(codomain, inner)
        for names, dom in reversed(elaborated):
            for n in reversed(names):
                out = K.Pi(n, dom, out)
        return out

    def _ext_type(
        self,
        names: tuple[str, ...],
        shape: T.Tope,
        family: S.STerm,
        cases: tuple[tuple[T.Tope, S.STerm], ...] | None,
        span: Span,
        sc: _Scope,
    ) -> K.Term:
        _require_distinct(names, span)
        inner = sc.push_cubes(names)
        self._check_tope(shape, inner, span)
        family_k = self.term(family, inner)
        if not cases:
            return K.ExtType(names, shape, T.BOT, family_k, None)
        for tope, _ in cases:
            self._check_tope(tope, inner, span)
        if len(cases) == 1:
            tope, value = cases[0]
            return K.ExtType(names, shape, tope, family_k, self.term(value, inner))
        subshape = T.or_all([tope for tope, _ in cases])
        boundary = K.Split(tuple((tope, self.term(value, inner)) for tope, value in cases))
        return K.ExtType(names, shape, subshape, family_k, boundary)

    def _rec01(self, at_zero: S.STerm, at_one: S.STerm, span: Span, sc: _Scope) -> K.Term:
        if not sc.cube_groups or len(sc.cube_groups[-1]) != 1:
            raise SurfaceError(
                "cube-scope",
                "rec01 needs exactly one interval variable bound by the nearest "
                "enclosing interval binder; write "
                "'split [v == 0 |-> a, v == 1 |-> b]' to name the variable",
                span,
            )
        v = T.IVar(sc.cube_groups[-1][0])
        zero = self.term(at_zero, sc)
        one = self.term(at_one, sc)
        return K.Split(((T.Eq(v, T.I0), zero), (T.Eq(v, T.I1), one)))

    def _point(self, point: T.Interval, span: Span, sc: _Scope) -> T.Interval:
        match point:
            case T.IVar(name):
                match sc.kind_of(name):
                    case "cube":
                        return point
                    case "term":
                        raise SurfaceError(
                            "cube-scope",
                            f"'{name}' is a term variable, not an interval variable",
                            span,
                        )
                raise SurfaceError(
                    "cube-scope", f"unknown interval variable '{name}'", span
                )
            case _:
                return point

    def _check_tope(self, tope: T.Tope, sc: _Scope, span: Span) -> None:
        for v in sorted(T.tope_vars(tope)):
            match sc.kind_of(v):
                case "cube":
                    continue
                case "term":
                    raise SurfaceError(
                        "cube-scope", f"'{v}' is a term variable, not an interval variable", span
                    )
            raise SurfaceError("cube-scope", f"unknown interval variable '{v}'", span)


def _elaborate_signature(
    elab: _Elaborator,
    params: tuple[S.SParamGroup, ...],
    constraint: T.Tope | None,
    ty: S.STerm,
    body: S.STerm | None,
    span: Span,
) -> tuple[K.Term, K.Term | None]:
    """Wrap a declared type and body in the parameter telescope.

    Term parameter groups become a Pi chain (lambdas on the body side);
    interval parameter groups and the optional constraint become a
    single extension type over all interval parameters with an empty
    subshape (an extension lambda on the body side).
    """
    sc = _Scope()
    term_wraps: list[tuple[tuple[str, ...], K.Term]] = []
    cube_names: list[str] = []
    for group in params:
        _require_distinct(group.names, group.span)
        if group.ty is None:
            for n in group.names:
                if n in cube_names:
                    raise SurfaceError(
                        "scope", f"duplicate binder '{n}' in one group", group.span
                    )
            sc = sc.push_cubes(group.names)
            cube_names.extend(group.names)
        else:
            dom = elab.term(group.ty, sc)
            _group_capture_check(group.names, dom, group.span)
            term_wraps.append((group.names, dom))
            sc = sc.push_terms(group.names)
    if constraint is not None:
        if not cube_names:
            raise SurfaceError(
                "cube-scope", "a constraint needs at least one interval parameter", span
            )
        elab._check_tope(constraint, sc, span)
    ty_k = elab.term(ty, sc)
    body_k = elab.term(body, sc) if body is not None else None
    if cube_names:
        shape = constraint if constraint is not None else T.TOP
        ty_k = K.ExtType(tuple(cube_names), shape, T.BOT, ty_k, None)
        if body_k is not None:
            body_k = K.ExtLam(tuple(cube_names), body_k)
    for names, dom in reversed(term_wraps):
        for n in reversed(names):
            ty_k = K.Pi(n, dom, ty_k)
            if body_k is not None:
                body_k = K.Lam(n, body_k)
    return ty_k, body_k


def elaborate_term(term: S.STerm, known: Iterable[str] = ()) -> K.Term:
    """Elaborate a standalone surface term against the given constant names."""
    return _Elaborator(set(known)).term(term, _Scope())


def elaborate_decl(decl: S.SDecl, known: set[str] | frozenset[str]) -> Decl:
    """Elaborate one declaration against the names already in scope."""
    elab = _Elaborator(known)
    match decl:
        case S.SDef(name, params, constraint, ty, body, span):
            ty_k, body_k = _elaborate_signature(elab, params, constraint, ty, body, span)
            assert body_k is not None
            return DefDecl(name, ty_k, body_k, span)
        case S.SAxiom(name, params, constraint, ty, span):
            ty_k, _ = _elaborate_signature(elab, params, constraint, ty, None, span)
            return AxiomDecl(name, ty_k, span)
        case S.SCheck(term, ty, span):
            sc = _Scope()
            return CheckCmd(
                elab.term(term, sc), elab.term(ty, sc), span, label=f"#check:{span[1]}"
            )
        case S.SEntails(cube_vars, hyp, goal, span):
            _require_distinct(cube_vars, span)
            sc = _Scope().push_cubes(cube_vars)
            elab._check_tope(hyp, sc, span)
            elab._check_tope(goal, sc, span)
            cube = T.CubeContext(cube_vars)
            return EntailsCmd(cube, hyp, goal, span, label=f"#entails:{span[1]}")
    raise TypeError(f"not a surface declaration: {decl!r}")


def elaborate_module(module: S.SurfaceModule, known: Iterable[str] = ()) -> Module:
    """Elaborate a whole module, threading declared names through.

    Later declarations may use earlier ones; forward references are
    scope errors. Checking is separate, so a name that later fails to
    check is still visible here; the checker reports dependents of a
    failed definition against the environment it actually built.
    """
    names = set(known)
    decls: list[Decl] = []
    for decl in module.decls:
        decls.append(elaborate_decl(decl, names))
        match decl:
            case S.SDef(name=n) | S.SAxiom(name=n):
                names.add(n)
    return Module(module.name, tuple(decls))
