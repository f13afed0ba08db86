"""Module-level checking: ordered declarations, collected results."""

from __future__ import annotations

from dataclasses import dataclass

from sstt import tope as T
from sstt.kernel.checker import check
from sstt.kernel.context import Declaration, Environment, TypingContext
from sstt.kernel.errors import KernelError
from sstt.kernel.syntax import Term, Universe

Span = tuple[str, int, int]


@dataclass(frozen=True)
class DefDecl:
    name: str
    ty: Term
    body: Term
    span: Span | None = None


@dataclass(frozen=True)
class AxiomDecl:
    name: str
    ty: Term
    span: Span | None = None


@dataclass(frozen=True)
class CheckCmd:
    term: Term
    ty: Term
    span: Span | None = None
    label: str = "#check"


@dataclass(frozen=True)
class EntailsCmd:
    cube: T.CubeContext
    hyp: T.Tope
    goal: T.Tope
    span: Span | None = None
    label: str = "#entails"


Decl = DefDecl | AxiomDecl | CheckCmd | EntailsCmd


@dataclass(frozen=True)
class Module:
    name: str
    decls: tuple[Decl, ...] = ()


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one declaration; errors carry the class code and model."""

    name: str
    kind: str  # def | axiom | check | entails
    status: str  # ok | error
    message: str = ""
    code: str | None = None
    span: Span | None = None
    elaborated: Term | None = None
    ty: Term | None = None
    countermodel: dict[str, int] | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _error_result(name: str, kind: str, span: Span | None, exc: Exception) -> CheckResult:
    if isinstance(exc, KernelError):
        return CheckResult(
            name=name,
            kind=kind,
            status="error",
            message=exc.message,
            code=exc.code,
            span=span,
            countermodel=exc.countermodel,
        )
    if isinstance(exc, T.ResourceError):
        return CheckResult(
            name=name, kind=kind, status="error", message=str(exc), code="resource", span=span
        )
    if isinstance(exc, T.ScopeError):
        return CheckResult(
            name=name, kind=kind, status="error", message=str(exc), code="cube-scope", span=span
        )
    raise exc


def check_declaration(env: Environment, decl: Decl) -> CheckResult:
    """Check one declaration against env; does not modify env."""
    ctx = TypingContext(env=env)
    match decl:
        case DefDecl(name, ty, body, span):
            try:
                ty2 = check(ctx, ty, Universe())
                body2 = check(ctx, body, ty2)
            except (KernelError, T.TopeError, RecursionError) as exc:
                if isinstance(exc, RecursionError):
                    exc = KernelError("resource", "recursion depth exhausted")
                return _error_result(name, "def", span, exc)
            return CheckResult(
                name=name, kind="def", status="ok", span=span, elaborated=body2, ty=ty2
            )
        case AxiomDecl(name, ty, span):
            try:
                ty2 = check(ctx, ty, Universe())
            except (KernelError, T.TopeError, RecursionError) as exc:
                if isinstance(exc, RecursionError):
                    exc = KernelError("resource", "recursion depth exhausted")
                return _error_result(name, "axiom", span, exc)
            return CheckResult(name=name, kind="axiom", status="ok", span=span, ty=ty2)
        case CheckCmd(term, ty, span, label):
            try:
                ty2 = check(ctx, ty, Universe())
                term2 = check(ctx, term, ty2)
            except (KernelError, T.TopeError, RecursionError) as exc:
                if isinstance(exc, RecursionError):
                    exc = KernelError("resource", "recursion depth exhausted")
                return _error_result(label, "check", span, exc)
            return CheckResult(
                name=label, kind="check", status="ok", span=span, elaborated=term2, ty=ty2
            )
        case EntailsCmd(cube, hyp, goal, span, label):
            try:
                holds = T.entails(cube, hyp, goal)
            except T.TopeError as exc:
                return _error_result(label, "entails", span, exc)
            if holds:
                return CheckResult(name=label, kind="entails", status="ok", span=span)
            cm = T.find_countermodel(cube, hyp, goal)
            msg = "entailment does not hold"
            if cm is not None:
                msg += f": countermodel {T.format_countermodel(cube, cm)}"
            return CheckResult(
                name=label,
                kind="entails",
                status="error",
                message=msg,
                code="non-inclusion",
                span=span,
                countermodel=cm,
            )
    raise TypeError(f"not a declaration: {decl!r}")


def check_module(module: Module, env: Environment | None = None) -> list[CheckResult]:
    """Check declarations in order against a growing environment.

    A failed definition is reported and skipped; later declarations that do
    not depend on it still check (dependents fail with scope errors).
    """
    if env is None:
        env = Environment()
    results: list[CheckResult] = []
    for decl in module.decls:
        if isinstance(decl, (DefDecl, AxiomDecl)) and decl.name in env:
            results.append(
                CheckResult(
                    name=decl.name,
                    kind="def" if isinstance(decl, DefDecl) else "axiom",
                    status="error",
                    message=f"name {decl.name!r} is already declared",
                    code="scope",
                    span=decl.span,
                )
            )
            continue
        result = check_declaration(env, decl)
        results.append(result)
        if result.ok:
            match decl:
                case DefDecl(name, _, _, _):
                    env.add(Declaration(name, result.ty, result.elaborated))
                case AxiomDecl(name, _, _):
                    env.add(Declaration(name, result.ty))
    return results
