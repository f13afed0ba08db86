"""Canonical ASCII printing of kernel terms.

The printer is the inverse of the parser up to annotations: parsing the
output and elaborating it yields a term alpha-equal to the input with
checker-inserted annotations erased. Parenthesization mirrors the
parser's precedence levels exactly, and freshened binder names (which
carry a '#' marker the lexer rejects) are renamed to primed variants
before printing.
"""

from __future__ import annotations

import sstt.tope as T
from sstt import kernel as K

_TERM, _APP, _POSTFIX, _ATOM = 0, 1, 2, 3


def _printable_binder(name: str, avoid: frozenset[str] | set[str]) -> str:
    """A parseable stand-in for a freshened binder name."""
    if "#" not in name:
        return name
    base = name.split("#", 1)[0] or "x"
    candidate = base
    while candidate in avoid:
        candidate += "'"
    return candidate


def _go(t: K.Term, level: int) -> str:
    text, own = _render(t)
    return f"({text})" if own < level else text


def _render_lam(t: K.Lam) -> str:
    names: list[str] = []
    cur: K.Term = t
    while isinstance(cur, K.Lam):
        name = _printable_binder(cur.binder, K.free_term_vars(cur.body) | set(names))
        if name in names:
            break
        body = cur.body if name == cur.binder else K.subst(cur.body, cur.binder, K.Var(name))
        names.append(name)
        cur = body
    return f"\\{' '.join(names)}. {_go(cur, _TERM)}"


def _rename_cube_binders(
    vs: tuple[str, ...], parts_free: set[str]
) -> tuple[tuple[str, ...], dict[str, str]]:
    avoid = set(parts_free) | {v for v in vs if "#" not in v}
    out: list[str] = []
    ren: dict[str, str] = {}
    for v in vs:
        v2 = _printable_binder(v, avoid)
        avoid.add(v2)
        out.append(v2)
        if v2 != v:
            ren[v] = v2
    return tuple(out), ren


def _render_ext_type(t: K.ExtType) -> str:
    parts_free: set[str] = set(T.tope_vars(t.shape)) | set(T.tope_vars(t.subshape))
    parts_free |= set(K.free_cube_vars(t.family))
    if t.boundary is not None:
        parts_free |= set(K.free_cube_vars(t.boundary))
    vs, ren = _rename_cube_binders(t.cube_vars, parts_free)
    shape = T.rename_tope(t.shape, ren) if ren else t.shape
    subshape = T.rename_tope(t.subshape, ren) if ren else t.subshape
    family = K.rename_cube(t.family, ren) if ren else t.family
    boundary = t.boundary
    if boundary is not None and ren:
        boundary = K.rename_cube(boundary, ren)

    head = f"<{{{' '.join(vs)} | {T.format_tope(shape)}}} -> {_go(family, _TERM)}"
    match boundary:
        case None if subshape == T.BOT:
            return head + ">"
        case None:
            return head + f" [{T.format_tope(subshape)} |-> split []]>"
        case K.Split(cases) if (
            len(cases) >= 2 and T.or_all([tope for tope, _ in cases]) == subshape
        ):
            rendered = ", ".join(
                f"{T.format_tope(tope)} |-> {_go(value, _TERM)}" for tope, value in cases
            )
            return head + f" [{rendered}]>"
        case _:
            return head + f" [{T.format_tope(subshape)} |-> {_go(boundary, _TERM)}]>"


def _render(t: K.Term) -> tuple[str, int]:
    match t:
        case K.Var(name) | K.Const(name):
            return name, _ATOM
        case K.Universe():
            return "U", _ATOM
        case K.Refl(_):
            return "refl", _ATOM
        case K.Pi(binder, domain, codomain):
            if binder not in K.free_term_vars(codomain):
                return f"{_go(domain, _APP)} -> {_go(codomain, _TERM)}", _TERM
            name = _printable_binder(binder, K.free_term_vars(codomain))
            body = (
                codomain if name == binder else K.subst(codomain, binder, K.Var(name))
            )
            return f"({name} : {_go(domain, _TERM)}) -> {_go(body, _TERM)}", _TERM
        case K.Lam():
            return _render_lam(t), _TERM
        case K.Sigma(binder, fst_type, snd_type):
            name = _printable_binder(binder, K.free_term_vars(snd_type))
            body = (
                snd_type if name == binder else K.subst(snd_type, binder, K.Var(name))
            )
            return f"Sig ({name} : {_go(fst_type, _TERM)}) {_go(body, _TERM)}", _TERM
        case K.Pair(fst, snd, _):
            return f"({_go(fst, _TERM)}, {_go(snd, _TERM)})", _ATOM
        case K.App(fn, arg):
            return f"{_go(fn, _APP)} {_go(arg, _POSTFIX)}", _APP
        case K.Fst(pair):
            return f"{_go(pair, _POSTFIX)}.1", _POSTFIX
        case K.Snd(pair):
            return f"{_go(pair, _POSTFIX)}.2", _POSTFIX
        case K.IdType(ty, lhs, rhs):
            return (
                f"Id {_go(ty, _POSTFIX)} {_go(lhs, _POSTFIX)} {_go(rhs, _POSTFIX)}",
                _APP,
            )
        case K.J(motive, base, eq):
            return (
                f"J {_go(motive, _POSTFIX)} {_go(base, _POSTFIX)} {_go(eq, _POSTFIX)}",
                _APP,
            )
        case K.ExtType():
            return _render_ext_type(t), _ATOM
        case K.ExtLam(cube_vars, body):
            vs, ren = _rename_cube_binders(cube_vars, set(K.free_cube_vars(body)))
            body2 = K.rename_cube(body, ren) if ren else body
            return f"\\{{{' '.join(vs)}}}. {_go(body2, _TERM)}", _TERM
        case K.ExtApp(fn, points):
            rendered = ", ".join(T.format_interval(p) for p in points)
            return f"{_go(fn, _POSTFIX)} @ ({rendered})", _POSTFIX
        case K.Split(cases):
            rendered = ", ".join(
                f"{T.format_tope(tope)} |-> {_go(value, _TERM)}" for tope, value in cases
            )
            return f"split [{rendered}]", _ATOM
    raise TypeError(f"not a kernel term: {t!r}")


def print_term(t: K.Term) -> str:
    """Render a kernel term as parseable surface text."""
    return _go(t, _TERM)


def print_declaration(name: str, ty: K.Term, body: K.Term | None = None) -> str:
    """Render a checked declaration; axioms have no body."""
    if body is None:
        return f"axiom {name} : {print_term(ty)} ;"
    return f"def {name} : {print_term(ty)} := {print_term(body)} ;"
