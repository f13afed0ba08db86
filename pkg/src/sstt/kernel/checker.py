"""Bidirectional checking, tope-aware definitional equality, normalization.

Equality is clause-directed: a judgment under a disjunctive restriction holds
iff it holds under every consistent clause of the restriction's DNF.  Head
reduction is restriction-sensitive because extension applications reduce to
their prescribed boundary whenever the restriction places the points inside
the subshape, and case splits reduce whenever the restriction decides a case.
"""

from __future__ import annotations

from sstt import tope as T
from sstt.kernel.context import TypingContext
from sstt.kernel.errors import KernelError
from sstt.kernel.syntax import (
    App,
    Const,
    ExtApp,
    ExtLam,
    ExtType,
    Fst,
    IdType,
    J,
    Lam,
    Pair,
    Pi,
    Refl,
    Sigma,
    Snd,
    Split,
    Term,
    Universe,
    Var,
    alpha_equal,
    free_cube_vars,
    free_term_vars,
    rename_cube,
    subst,
    subst_cube,
)

U = Universe()


def _show(t: Term | None) -> str:
    """Readable term rendering for error messages (lazy to avoid cycles)."""
    if t is None:
        return "<none>"
    try:
        from sstt.surface.printer import print_term

        return print_term(t)
    except ImportError:
        return repr(t)


def _point_map(cube_vars: tuple[str, ...], points: tuple) -> dict:
    return dict(zip(cube_vars, points))


# ---------------------------------------------------------------------------
# head reduction


def whnf(ctx: TypingContext, t: Term) -> Term:
    """Weak head normal form under the context's restriction.

    Unfolds defined constants, performs beta/projection/J/extension
    reduction, reduces case splits whose case tope is entailed, and applies
    the boundary rule for neutral extension applications.
    """
    while True:
        ctx.budget.spend()
        match t:
            case Const(n):
                d = ctx.env.lookup(n)
                if d is None:
                    raise KernelError("scope", f"unknown constant {n!r}")
                if d.value is None:
                    return t
                t = d.value
            case App(f, a):
                fw = whnf(ctx, f)
                if isinstance(fw, Lam):
                    t = subst(fw.body, fw.binder, a)
                elif isinstance(fw, Split):
                    t = Split(tuple((phi, App(body, a)) for phi, body in fw.cases))
                else:
                    return App(fw, a)
            case Fst(p):
                pw = whnf(ctx, p)
                if isinstance(pw, Pair):
                    t = pw.fst
                elif isinstance(pw, Split):
                    t = Split(tuple((phi, Fst(body)) for phi, body in pw.cases))
                else:
                    return Fst(pw)
            case Snd(p):
                pw = whnf(ctx, p)
                if isinstance(pw, Pair):
                    t = pw.snd
                elif isinstance(pw, Split):
                    t = Split(tuple((phi, Snd(body)) for phi, body in pw.cases))
                else:
                    return Snd(pw)
            case J(c, d, p):
                pw = whnf(ctx, p)
                if isinstance(pw, Refl):
                    t = d
                elif isinstance(pw, Split):
                    t = Split(tuple((phi, J(c, d, body)) for phi, body in pw.cases))
                else:
                    return J(c, d, pw)
            case ExtApp(f, points):
                fw = whnf(ctx, f)
                if isinstance(fw, ExtLam):
                    t = subst_cube(fw.body, _point_map(fw.cube_vars, points))
                elif isinstance(fw, Split):
                    t = Split(tuple((phi, ExtApp(body, points)) for phi, body in fw.cases))
                else:
                    red = _boundary_reduce(ctx, fw, points)
                    if red is None:
                        return ExtApp(fw, points)
                    t = red
            case Split(cases):
                for phi, body in cases:
                    if ctx.entails(phi):
                        t = body
                        break
                else:
                    return t
            case _:
                return t


def _boundary_reduce(ctx: TypingContext, fn: Term, points: tuple) -> Term | None:
    """Reduce a neutral extension application landing inside the subshape."""
    ety = whnf(ctx, _neutral_type(ctx, fn))
    if not isinstance(ety, ExtType) or ety.boundary is None:
        return None
    m = _point_map(ety.cube_vars, points)
    if ctx.entails(T.subst_tope(ety.subshape, m)):
        return subst_cube(ety.boundary, m)
    return None


def _neutral_type(ctx: TypingContext, t: Term) -> Term:
    """Type of a well-typed neutral term, trusting its parts (no re-checking)."""
    head, elims = _spine(t)
    ty = _head_type(ctx, head)
    acc = head
    for kind, x in elims:
        tw = whnf(ctx, ty)
        if kind == "app":
            if not isinstance(tw, Pi):
                raise KernelError("type-mismatch", "application of a non-function")
            ty = subst(tw.codomain, tw.binder, x)
            acc = App(acc, x)
        elif kind == "fst":
            if not isinstance(tw, Sigma):
                raise KernelError("type-mismatch", "projection of a non-pair")
            ty = tw.fst_type
            acc = Fst(acc)
        elif kind == "snd":
            if not isinstance(tw, Sigma):
                raise KernelError("type-mismatch", "projection of a non-pair")
            ty = subst(tw.snd_type, tw.binder, Fst(acc))
            acc = Snd(acc)
        else:
            if not isinstance(tw, ExtType):
                raise KernelError("type-mismatch", "extension application of a non-section")
            ty = subst_cube(tw.family, _point_map(tw.cube_vars, x))
            acc = ExtApp(acc, x)
    return ty


# ---------------------------------------------------------------------------
# definitional equality


def def_equal(ctx: TypingContext, a: Term, b: Term, ty: Term) -> bool:
    """Type-directed equality, split over the restriction's DNF clauses."""
    ctx.budget.spend()
    for cctx in _consistent_clauses(ctx):
        if not _equal_at(cctx, a, b, ty):
            return False
    return True


def _consistent_clauses(ctx: TypingContext):
    for clause in T.dnf_clauses(ctx.restriction):
        ctope = T.and_all(list(clause)) if clause else T.TOP
        cctx = ctx.with_restriction(ctope)
        if cctx.inconsistent():
            continue
        yield cctx


def _equal_at(ctx: TypingContext, a: Term, b: Term, ty: Term) -> bool:
    """Equality at a known type under a consistent conjunctive restriction."""
    ctx.budget.spend()
    tw = whnf(ctx, ty)
    match tw:
        case Pi(x, dom, cod):
            y = ctx.fresh(x)
            bctx = ctx.bind(y, dom)
            return def_equal(
                bctx, App(a, Var(y)), App(b, Var(y)), subst(cod, x, Var(y))
            )
        case Sigma(x, fst_ty, snd_ty):
            if not def_equal(ctx, Fst(a), Fst(b), fst_ty):
                return False
            return def_equal(ctx, Snd(a), Snd(b), subst(snd_ty, x, Fst(a)))
        case ExtType(vs, shape, _, fam, _):
            ws = ctx.fresh_cube(vs)
            ren = {v: T.IVar(w) for v, w in zip(vs, ws)}
            ectx = ctx.bind_cube(ws).restrict(T.subst_tope(shape, ren))
            pts = tuple(T.IVar(w) for w in ws)
            return def_equal(
                ectx, ExtApp(a, pts), ExtApp(b, pts), subst_cube(fam, ren)
            )
        case Split(cases):
            # a type given by cases: compare under each case separately
            return all(
                _equal_untyped(ctx.restrict(phi), a, b) for phi, _ in cases
            )
        case _:
            return _equal_whnf(ctx, whnf(ctx, a), whnf(ctx, b))


def _equal_untyped(ctx: TypingContext, a: Term, b: Term) -> bool:
    """Equality without a usable type, still clause- and whnf-directed."""
    ctx.budget.spend()
    for cctx in _consistent_clauses(ctx):
        if not _equal_whnf(cctx, whnf(cctx, a), whnf(cctx, b)):
            return False
    return True


def _equal_whnf(ctx: TypingContext, a: Term, b: Term) -> bool:
    """Structural comparison of two whnf terms; spines compare type-directed."""
    ctx.budget.spend()
    if isinstance(a, Split) or isinstance(b, Split):
        sp = a if isinstance(a, Split) else b
        return all(_equal_untyped(ctx.restrict(phi), a, b) for phi, _ in sp.cases)
    match (a, b):
        case (Universe(), Universe()):
            return True
        case (Refl(_), Refl(_)):
            return True
        case (Pi(x, a1, b1), Pi(y, a2, b2)) | (Sigma(x, a1, b1), Sigma(y, a2, b2)):
            if type(a) is not type(b):
                return False
            if not def_equal(ctx, a1, a2, U):
                return False
            z = ctx.fresh(x)
            return def_equal(
                ctx.bind(z, a1), subst(b1, x, Var(z)), subst(b2, y, Var(z)), U
            )
        case (IdType(t1, l1, r1), IdType(t2, l2, r2)):
            if not def_equal(ctx, t1, t2, U):
                return False
            return def_equal(ctx, l1, l2, t1) and def_equal(ctx, r1, r2, t1)
        case (ExtType(v1, s1, x1, f1, n1), ExtType(v2, s2, x2, f2, n2)):
            if len(v1) != len(v2):
                return False
            ws = ctx.fresh_cube(v1)
            r1 = {v: T.IVar(w) for v, w in zip(v1, ws)}
            r2 = {v: T.IVar(w) for v, w in zip(v2, ws)}
            s1r, s2r = T.subst_tope(s1, r1), T.subst_tope(s2, r2)
            x1r, x2r = T.subst_tope(x1, r1), T.subst_tope(x2, r2)
            ectx = ctx.bind_cube(ws)
            if not _equiv_under(ectx, s1r, s2r) or not _equiv_under(ectx, x1r, x2r):
                return False
            if not def_equal(
                ectx.restrict(s1r), subst_cube(f1, r1), subst_cube(f2, r2), U
            ):
                return False
            bctx = ectx.restrict(x1r)
            if bctx.inconsistent():
                return True
            if (n1 is None) or (n2 is None):
                # a missing boundary only types over an inconsistent subshape
                return n1 is None and n2 is None
            return def_equal(bctx, subst_cube(n1, r1), subst_cube(n2, r2), subst_cube(f1, r1))
        case (Lam(x1, b1, ann1), Lam(x2, b2, ann2)):
            z = ctx.fresh(x1)
            dom = ann1 if ann1 is not None else (ann2 if ann2 is not None else U)
            return _equal_untyped(
                ctx.bind(z, dom), subst(b1, x1, Var(z)), subst(b2, x2, Var(z))
            )
        case (Lam(x1, b1, ann1), _):
            z = ctx.fresh(x1)
            dom = ann1 if ann1 is not None else U
            return _equal_untyped(ctx.bind(z, dom), subst(b1, x1, Var(z)), App(b, Var(z)))
        case (_, Lam(x2, b2, ann2)):
            z = ctx.fresh(x2)
            dom = ann2 if ann2 is not None else U
            return _equal_untyped(ctx.bind(z, dom), App(a, Var(z)), subst(b2, x2, Var(z)))
        case (Pair(a1, b1, _), Pair(a2, b2, _)):
            return _equal_untyped(ctx, a1, a2) and _equal_untyped(ctx, b1, b2)
        case (Pair(a1, b1, _), _):
            return _equal_untyped(ctx, a1, Fst(b)) and _equal_untyped(ctx, b1, Snd(b))
        case (_, Pair(a2, b2, _)):
            return _equal_untyped(ctx, Fst(a), a2) and _equal_untyped(ctx, Snd(a), b2)
        case (ExtLam(v1, b1), ExtLam(v2, b2)):
            if len(v1) != len(v2):
                return False
            ws = ctx.fresh_cube(v1)
            return _equal_untyped(
                ctx.bind_cube(ws),
                rename_cube(b1, dict(zip(v1, ws))),
                rename_cube(b2, dict(zip(v2, ws))),
            )
        case (ExtLam(v1, b1), _):
            ws = ctx.fresh_cube(v1)
            pts = tuple(T.IVar(w) for w in ws)
            return _equal_untyped(
                ctx.bind_cube(ws), rename_cube(b1, dict(zip(v1, ws))), ExtApp(b, pts)
            )
        case (_, ExtLam(v2, b2)):
            ws = ctx.fresh_cube(v2)
            pts = tuple(T.IVar(w) for w in ws)
            return _equal_untyped(
                ctx.bind_cube(ws), ExtApp(a, pts), rename_cube(b2, dict(zip(v2, ws)))
            )
        case _:
            return _equal_spine(ctx, a, b)


def _equiv_under(ctx: TypingContext, p: T.Tope, q: T.Tope) -> bool:
    return T.entails(ctx.cube, T.and_(ctx.restriction, p), q) and T.entails(
        ctx.cube, T.and_(ctx.restriction, q), p
    )


def _spine(t: Term) -> tuple[Term, list]:
    elims: list = []
    while True:
        match t:
            case App(f, x):
                elims.append(("app", x))
                t = f
            case Fst(p):
                elims.append(("fst", None))
                t = p
            case Snd(p):
                elims.append(("snd", None))
                t = p
            case ExtApp(f, pts):
                elims.append(("ext", pts))
                t = f
            case _:
                return t, list(reversed(elims))


def _equal_spine(ctx: TypingContext, a: Term, b: Term) -> bool:
    ha, ea = _spine(a)
    hb, eb = _spine(b)
    if len(ea) != len(eb):
        return False
    match (ha, hb):
        case (Var(x), Var(y)):
            if x != y:
                return False
        case (Const(x), Const(y)):
            if x != y:
                return False
        case (J(c1, d1, p1), J(c2, d2, p2)):
            if not (
                _equal_untyped(ctx, c1, c2)
                and _equal_untyped(ctx, d1, d2)
                and _equal_untyped(ctx, p1, p2)
            ):
                return False
        case _:
            return False
    if not ea:
        return True
    ty = _head_type(ctx, ha)
    acc = ha
    for (ka, xa), (kb, xb) in zip(ea, eb):
        if ka != kb:
            return False
        tw = whnf(ctx, ty)
        if ka == "app":
            if not isinstance(tw, Pi):
                return _equal_untyped(ctx, xa, xb)
            if not def_equal(ctx, xa, xb, tw.domain):
                return False
            ty = subst(tw.codomain, tw.binder, xa)
            acc = App(acc, xa)
        elif ka == "fst":
            if not isinstance(tw, Sigma):
                return False
            ty = tw.fst_type
            acc = Fst(acc)
        elif ka == "snd":
            if not isinstance(tw, Sigma):
                return False
            ty = subst(tw.snd_type, tw.binder, Fst(acc))
            acc = Snd(acc)
        else:  # ext
            if len(xa) != len(xb):
                return False
            if not isinstance(tw, ExtType):
                return False
            for p, q in zip(xa, xb):
                if not ctx.entails(T.Eq(p, q)):
                    return False
            m = _point_map(tw.cube_vars, xa)
            ty = subst_cube(tw.family, m)
            acc = ExtApp(acc, xa)
    return True


def _head_type(ctx: TypingContext, head: Term) -> Term:
    match head:
        case Var(n):
            ty = ctx.lookup_var(n)
            if ty is None:
                raise KernelError("scope", f"unbound variable {n!r}")
            return ty
        case Const(n):
            d = ctx.env.lookup(n)
            if d is None:
                raise KernelError("scope", f"unknown constant {n!r}")
            return d.ty
        case _:
            _, ty = infer(ctx, head)
            return ty


# ---------------------------------------------------------------------------
# synthesis and checking


def infer(ctx: TypingContext, t: Term) -> tuple[Term, Term]:
    """Synthesize a type; returns the elaborated term and its type."""
    ctx.budget.spend()
    match t:
        case Var(n):
            ty = ctx.lookup_var(n)
            if ty is None:
                raise KernelError("scope", f"unbound variable {n!r}")
            return t, ty
        case Const(n):
            d = ctx.env.lookup(n)
            if d is None:
                raise KernelError("scope", f"unknown constant {n!r}")
            return t, d.ty
        case Universe():
            return t, U
        case Pi(x, dom, cod):
            dom2 = check(ctx, dom, U)
            cod2 = check(ctx.bind(x, dom2), cod, U)
            return Pi(x, dom2, cod2), U
        case Sigma(x, dom, cod):
            dom2 = check(ctx, dom, U)
            cod2 = check(ctx.bind(x, dom2), cod, U)
            return Sigma(x, dom2, cod2), U
        case IdType(ty, lhs, rhs):
            ty2 = check(ctx, ty, U)
            lhs2 = check(ctx, lhs, ty2)
            rhs2 = check(ctx, rhs, ty2)
            return IdType(ty2, lhs2, rhs2), U
        case ExtType():
            return _infer_ext_type(ctx, t)
        case App(f, a):
            f2, fty = infer(ctx, f)
            ftw = whnf(ctx, fty)
            if not isinstance(ftw, Pi):
                raise KernelError(
                    "type-mismatch",
                    f"application of a non-function: {_show(f)} has type {_show(fty)}",
                )
            a2 = check(ctx, a, ftw.domain)
            return App(f2, a2), subst(ftw.codomain, ftw.binder, a2)
        case Fst(p):
            p2, pty = infer(ctx, p)
            ptw = whnf(ctx, pty)
            if not isinstance(ptw, Sigma):
                raise KernelError(
                    "type-mismatch",
                    f"first projection of a non-pair: {_show(p)} has type {_show(pty)}",
                )
            return Fst(p2), ptw.fst_type
        case Snd(p):
            p2, pty = infer(ctx, p)
            ptw = whnf(ctx, pty)
            if not isinstance(ptw, Sigma):
                raise KernelError(
                    "type-mismatch",
                    f"second projection of a non-pair: {_show(p)} has type {_show(pty)}",
                )
            return Snd(p2), subst(ptw.snd_type, ptw.binder, Fst(p2))
        case ExtApp(f, points):
            f2, fty = infer(ctx, f)
            ftw = whnf(ctx, fty)
            if not isinstance(ftw, ExtType):
                raise KernelError(
                    "type-mismatch",
                    f"extension application of a non-section: {_show(f)} has type {_show(fty)}",
                )
            if len(points) != len(ftw.cube_vars):
                raise KernelError(
                    "arity",
                    f"extension application expects {len(ftw.cube_vars)} point(s), got {len(points)}",
                )
            for p in points:
                if isinstance(p, T.IVar) and p.name not in ctx.cube:
                    raise KernelError("cube-scope", f"unbound cube variable {p.name!r}")
            m = _point_map(ftw.cube_vars, points)
            shape_at = T.subst_tope(ftw.shape, m)
            if not ctx.entails(shape_at):
                cm = T.find_countermodel(ctx.cube, ctx.restriction, shape_at)
                raise KernelError(
                    "shape-membership",
                    "extension application at a point outside the shape: "
                    f"restriction {T.format_tope(ctx.restriction)} does not entail "
                    f"{T.format_tope(shape_at)}",
                    countermodel=cm,
                )
            return ExtApp(f2, points), subst_cube(ftw.family, m)
        case J(motive, base, eq):
            eq2, ety = infer(ctx, eq)
            etw = whnf(ctx, ety)
            if not isinstance(etw, IdType):
                raise KernelError(
                    "type-mismatch",
                    f"path induction target is not an identification: {_show(eq)} has type {_show(ety)}",
                )
            yv = ctx.fresh("y")
            qv = ctx.fresh("q")
            motive_ty = Pi(yv, etw.ty, Pi(qv, IdType(etw.ty, etw.lhs, Var(yv)), U))
            motive2 = check(ctx, motive, motive_ty)
            base2 = check(ctx, base, App(App(motive2, etw.lhs), Refl(etw.lhs)))
            return J(motive2, base2, eq2), App(App(motive2, etw.rhs), eq2)
        case Lam(x, body, ann):
            if ann is None:
                raise KernelError(
                    "not-synthesizable", "cannot infer a type for an unannotated lambda"
                )
            ann2 = check(ctx, ann, U)
            body2, bty = infer(ctx.bind(x, ann2), body)
            return Lam(x, body2, ann2), Pi(x, ann2, bty)
        case Pair(a, b, ann):
            if ann is None:
                raise KernelError(
                    "not-synthesizable", "cannot infer a type for an unannotated pair"
                )
            ann2 = check(ctx, ann, U)
            atw = whnf(ctx, ann2)
            if not isinstance(atw, Sigma):
                raise KernelError(
                    "type-mismatch", f"pair annotation is not a pair type: {_show(ann)}"
                )
            a2 = check(ctx, a, atw.fst_type)
            b2 = check(ctx, b, subst(atw.snd_type, atw.binder, a2))
            return Pair(a2, b2, ann2), ann2
        case Refl(s):
            if s is None:
                raise KernelError(
                    "not-synthesizable", "cannot infer the endpoints of a bare refl"
                )
            s2, sty = infer(ctx, s)
            return Refl(s2), IdType(sty, s2, s2)
        case ExtLam():
            raise KernelError(
                "not-synthesizable", "cannot infer a shape for an extension lambda"
            )
        case Split():
            raise KernelError(
                "not-synthesizable", "cannot infer a type for a bare case split"
            )
    raise TypeError(f"not a term: {t!r}")


def _infer_ext_type(ctx: TypingContext, t: ExtType) -> tuple[Term, Term]:
    ws = ctx.fresh_cube(t.cube_vars)
    ren = dict(zip(t.cube_vars, ws))
    shape = T.rename_tope(t.shape, ren)
    subshape = T.rename_tope(t.subshape, ren)
    family = rename_cube(t.family, ren)
    boundary = rename_cube(t.boundary, ren) if t.boundary is not None else None
    try:
        cube2 = ctx.cube.extend(ws)
        T._check_scope(cube2, shape)
        T._check_scope(cube2, subshape)
    except T.ScopeError as exc:
        raise KernelError("cube-scope", str(exc)) from None
    hyp = T.and_(ctx.restriction, subshape)
    if not T.entails(cube2, hyp, shape):
        cm = T.find_countermodel(cube2, hyp, shape)
        raise KernelError(
            "non-inclusion",
            f"subshape {T.format_tope(subshape)} is not included in shape "
            f"{T.format_tope(shape)}",
            countermodel=cm,
        )
    ectx = ctx.bind_cube(ws)
    family2 = check(ectx.restrict(shape), family, U)
    if boundary is None:
        if not T.entails(cube2, hyp, T.BOT):
            raise KernelError(
                "boundary-mismatch",
                "extension type over a non-empty subshape needs a boundary term",
            )
        boundary2 = None
    else:
        boundary2 = check(ectx.restrict(subshape), boundary, family2)
    return ExtType(ws, shape, subshape, family2, boundary2), U


def _scope_check_only(ctx: TypingContext, t: Term) -> None:
    """Scope hygiene for terms under an inconsistent restriction."""
    unbound = free_term_vars(t) - ctx.term_names()
    if unbound:
        raise KernelError("scope", f"unbound variable {sorted(unbound)[0]!r}")
    loose = free_cube_vars(t) - set(ctx.cube.names)
    if loose:
        raise KernelError("cube-scope", f"unbound cube variable {sorted(loose)[0]!r}")


def check(ctx: TypingContext, t: Term, ty: Term) -> Term:
    """Check t against ty; returns the annotated elaboration of t."""
    ctx.budget.spend()
    if ctx.inconsistent():
        _scope_check_only(ctx, t)
        return t
    tw = whnf(ctx, ty)
    match (t, tw):
        case (Lam(x, body, ann), Pi(y, dom, cod)):
            if ann is not None:
                ann2 = check(ctx, ann, U)
                if not def_equal(ctx, ann2, dom, U):
                    raise KernelError(
                        "type-mismatch",
                        f"annotated domain {_show(ann)} differs from expected {_show(dom)}",
                    )
            if x in (free_term_vars(cod) - {y}):
                x2 = ctx.fresh(x)
                body = subst(body, x, Var(x2))
                x = x2
            body2 = check(ctx.bind(x, dom), body, subst(cod, y, Var(x)))
            return Lam(x, body2, dom)
        case (Lam(), _):
            raise KernelError(
                "type-mismatch", f"a lambda cannot check against {_show(tw)}"
            )
        case (Pair(a, b, _), Sigma(y, fst_ty, snd_ty)):
            a2 = check(ctx, a, fst_ty)
            b2 = check(ctx, b, subst(snd_ty, y, a2))
            return Pair(a2, b2, tw)
        case (Pair(), _):
            raise KernelError(
                "type-mismatch", f"a pair cannot check against {_show(tw)}"
            )
        case (Refl(_), IdType(ity, lhs, rhs)):
            if not def_equal(ctx, lhs, rhs, ity):
                raise KernelError(
                    "type-mismatch",
                    f"refl needs judgmentally equal endpoints, got {_show(lhs)} and {_show(rhs)}",
                )
            return Refl(lhs)
        case (Refl(_), _):
            raise KernelError(
                "type-mismatch", f"refl cannot check against {_show(tw)}"
            )
        case (ExtLam(ws, body), ExtType(vs, shape, subshape, family, boundary)):
            if len(ws) != len(vs):
                raise KernelError(
                    "arity",
                    f"extension lambda binds {len(ws)} cube variable(s), "
                    f"the shape has {len(vs)}",
                )
            ws2 = ctx.fresh_cube(ws)
            body = rename_cube(body, dict(zip(ws, ws2)))
            ren = {v: T.IVar(w) for v, w in zip(vs, ws2)}
            shape2 = T.subst_tope(shape, ren)
            subshape2 = T.subst_tope(subshape, ren)
            family2 = subst_cube(family, ren)
            ectx = ctx.bind_cube(ws2)
            body2 = check(ectx.restrict(shape2), body, family2)
            if boundary is not None:
                boundary2 = subst_cube(boundary, ren)
                bctx = ectx.restrict(subshape2)
                _require_boundary(bctx, body2, boundary2, family2)
            return ExtLam(ws2, body2)
        case (ExtLam(), _):
            raise KernelError(
                "type-mismatch",
                f"an extension lambda cannot check against {_show(tw)}",
            )
        case (Split(cases), _):
            return _check_split(ctx, cases, tw)
        case _:
            t2, sty = infer(ctx, t)
            if not def_equal(ctx, sty, tw, U):
                raise KernelError(
                    "type-mismatch",
                    f"expected {_show(tw)}, found {_show(t)} of type {_show(sty)}",
                )
            return t2


def _require_boundary(ctx: TypingContext, body: Term, boundary: Term, family: Term) -> None:
    """Judgmental agreement with the boundary, reported per failing clause."""
    for cctx in _consistent_clauses(ctx):
        if not _equal_at(cctx, body, boundary, family):
            raise KernelError(
                "boundary-mismatch",
                "the body does not agree with the prescribed boundary on the "
                f"subshape branch {T.format_tope(cctx.restriction)}",
            )


def _check_split(ctx: TypingContext, cases: tuple, tw: Term) -> Term:
    for phi, _ in cases:
        try:
            T._check_scope(ctx.cube, phi)
        except T.ScopeError as exc:
            raise KernelError("cube-scope", str(exc)) from None
    union = T.or_all([phi for phi, _ in cases])
    if not ctx.entails(union):
        cm = T.find_countermodel(ctx.cube, ctx.restriction, union)
        raise KernelError(
            "coverage",
            f"case topes {T.format_tope(union)} do not cover the restriction "
            f"{T.format_tope(ctx.restriction)}",
            countermodel=cm,
        )
    elaborated = []
    for phi, body in cases:
        elaborated.append((phi, check(ctx.restrict(phi), body, tw)))
    for i in range(len(elaborated)):
        for j in range(i + 1, len(elaborated)):
            phi_i, body_i = elaborated[i]
            phi_j, body_j = elaborated[j]
            octx = ctx.restrict(T.and_(phi_i, phi_j))
            if not def_equal(octx, body_i, body_j, tw):
                raise KernelError(
                    "incompatible-cases",
                    "overlapping cases disagree on "
                    f"{T.format_tope(T.and_(phi_i, phi_j))}: "
                    f"{_show(body_i)} vs {_show(body_j)}",
                )
    return Split(tuple(elaborated))


# ---------------------------------------------------------------------------
# normalization


def normalize(ctx: TypingContext, t: Term) -> Term:
    """Full normal form: reduces everywhere, eta-contracts, canonicalizes
    interval points to their equality-class representatives, and puts
    embedded topes in DNF.  Idempotent on well-typed terms."""
    if ctx.inconsistent():
        return t
    ctx.budget.spend()
    t = whnf(ctx, t)
    match t:
        case Var() | Const() | Universe() | Refl():
            return t
        case Pi(x, dom, cod):
            dom2 = normalize(ctx, dom)
            return Pi(x, dom2, normalize(ctx.bind(x, dom2), cod))
        case Sigma(x, dom, cod):
            dom2 = normalize(ctx, dom)
            return Sigma(x, dom2, normalize(ctx.bind(x, dom2), cod))
        case IdType(ity, lhs, rhs):
            return IdType(normalize(ctx, ity), normalize(ctx, lhs), normalize(ctx, rhs))
        case Lam(x, body, ann):
            dom = ann if ann is not None else U
            body2 = normalize(ctx.bind(x, dom), body)
            match body2:
                case App(f, Var(y)) if y == x and x not in free_term_vars(f):
                    return f
            return Lam(x, body2, ann)
        case App(f, a):
            return App(normalize(ctx, f), normalize(ctx, a))
        case Fst(p):
            return Fst(normalize(ctx, p))
        case Snd(p):
            return Snd(normalize(ctx, p))
        case Pair(a, b, ann):
            a2, b2 = normalize(ctx, a), normalize(ctx, b)
            match (a2, b2):
                case (Fst(p), Snd(q)) if p == q:
                    return p
            return Pair(a2, b2, ann)
        case J(c, d, p):
            return J(normalize(ctx, c), normalize(ctx, d), normalize(ctx, p))
        case ExtType(vs, shape, subshape, family, boundary):
            ws = ctx.fresh_cube(vs)
            ren = {v: T.IVar(w) for v, w in zip(vs, ws)}
            shape2 = T.subst_tope(shape, ren)
            subshape2 = T.subst_tope(subshape, ren)
            ectx = ctx.bind_cube(ws)
            family2 = normalize(ectx.restrict(shape2), subst_cube(family, ren))
            boundary2 = (
                normalize(ectx.restrict(subshape2), subst_cube(boundary, ren))
                if boundary is not None
                else None
            )
            return ExtType(
                ws,
                T.dnf(ectx.cube, shape2),
                T.dnf(ectx.cube, subshape2),
                family2,
                boundary2,
            )
        case ExtLam(vs, body):
            ws = ctx.fresh_cube(vs)
            body2 = normalize(ctx.bind_cube(ws), rename_cube(body, dict(zip(vs, ws))))
            match body2:
                case ExtApp(f, pts) if pts == tuple(
                    T.IVar(w) for w in ws
                ) and not (set(ws) & free_cube_vars(f)):
                    return f
            return ExtLam(ws, body2)
        case ExtApp(f, points):
            return ExtApp(
                normalize(ctx, f), tuple(_canon_point(ctx, p) for p in points)
            )
        case Split(cases):
            live = []
            for phi, body in cases:
                cctx = ctx.restrict(phi)
                if cctx.inconsistent():
                    continue
                live.append((T.dnf(ctx.cube, phi), normalize(cctx, body)))
            if live and all(alpha_equal(b, live[0][1]) for _, b in live[1:]):
                covered = T.or_all([phi for phi, _ in live])
                if ctx.entails(covered):
                    return live[0][1]
            return Split(tuple(live))
    raise TypeError(f"not a term: {t!r}")


def _canon_point(ctx: TypingContext, p: T.Interval) -> T.Interval:
    """The canonical representative of p's equality class under the restriction."""
    candidates: list[T.Interval] = [T.I0, T.I1]
    candidates.extend(T.IVar(v) for v in ctx.cube.names)
    for c in candidates:
        if c == p or ctx.entails(T.Eq(p, c)):
            return c
    return p
