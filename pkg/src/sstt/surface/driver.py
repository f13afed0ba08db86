"""Batch checking of surface source: parse, elaborate, check, report.

Declarations are processed in order against a growing environment. A
declaration that fails is reported and skipped, so later declarations
that do not depend on it still check; dependents fail with scope errors
because the failed name was never added.
"""

from __future__ import annotations

from pathlib import PurePath

from sstt.kernel.context import Declaration, Environment
from sstt.kernel.module import CheckResult, check_declaration
from sstt.surface import ast as S
from sstt.surface.ast import SurfaceError
from sstt.surface.elaborate import elaborate_decl
from sstt.surface.parser import parse_module


def _identify(decl: S.SDecl) -> tuple[str, str]:
    match decl:
        case S.SDef(name=name):
            return name, "def"
        case S.SAxiom(name=name):
            return name, "axiom"
        case S.SCheck(span=span):
            return f"#check:{span[1]}", "check"
        case S.SEntails(span=span):
            return f"#entails:{span[1]}", "entails"
    raise TypeError(f"not a surface declaration: {decl!r}")


def check_source(
    src: str, filename: str = "<input>", env: Environment | None = None
) -> list[CheckResult]:
    """Check every declaration in `src`, returning one result per declaration.

    A successful def or axiom extends `env` (a fresh environment when
    none is given) for the declarations after it. A parse failure
    produces a single file-level error result.
    """
    if env is None:
        env = Environment()
    try:
        module = parse_module(src, filename)
    except SurfaceError as exc:
        stem = PurePath(filename).stem or filename
        return [
            CheckResult(
                name=stem,
                kind="module",
                status="error",
                message=exc.message,
                code=exc.code,
                span=exc.span,
            )
        ]
    known = {d.name for d in env}
    results: list[CheckResult] = []
    for sdecl in module.decls:
        name, kind = _identify(sdecl)
        if kind in ("def", "axiom") and name in known:
            results.append(
                CheckResult(
                    name=name,
                    kind=kind,
                    status="error",
                    message=f"duplicate declaration of '{name}'",
                    code="scope",
                    span=sdecl.span,
                )
            )
            continue
        try:
            decl = elaborate_decl(sdecl, known)
        except SurfaceError as exc:
            results.append(
                CheckResult(
                    name=name,
                    kind=kind,
                    status="error",
                    message=exc.message,
                    code=exc.code,
                    span=exc.span,
                )
            )
            continue
        result = check_declaration(env, decl)
        results.append(result)
        if result.ok and kind in ("def", "axiom"):
            env.add(Declaration(result.name, result.ty, result.elaborated))
            known.add(result.name)
    return results
