"""Core term syntax: AST, substitution, alpha equality, variable bookkeeping.

Two binder namespaces coexist: term variables (bound by Pi, Lam, Sigma) and
cube variables (bound by ExtType and ExtLam, ranging over the directed
interval).  Both substitution functions are capture avoiding across both
namespaces, since a substituted term may carry free variables of either kind.

`domain` on Lam, `sigma` on Pair and `subject` on Refl are elaboration
annotations: they let the checker re-synthesize types but carry no identity
of their own.  `alpha_equal` ignores them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from sstt.tope import (
    Interval,
    IVar,
    Tope,
    rename_tope,
    subst_interval,
    subst_tope,
    tope_vars,
)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Universe:
    pass


@dataclass(frozen=True)
class Pi:
    binder: str
    domain: "Term"
    codomain: "Term"


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"
    domain: "Term | None" = None


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Sigma:
    binder: str
    fst_type: "Term"
    snd_type: "Term"


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"
    sigma: "Term | None" = None


@dataclass(frozen=True)
class Fst:
    pair: "Term"


@dataclass(frozen=True)
class Snd:
    pair: "Term"


@dataclass(frozen=True)
class IdType:
    ty: "Term"
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Refl:
    subject: "Term | None" = None


@dataclass(frozen=True)
class J:
    """Identity eliminator: J(motive, base, eq) with eq : Id A a b.

    motive : (y : A) -> Id A a y -> U, base : motive a refl, and the result
    lives in motive b eq.  J(motive, base, refl) reduces to base.
    """

    motive: "Term"
    base: "Term"
    eq: "Term"


@dataclass(frozen=True)
class ExtType:
    """Sections over the shape that agree with `boundary` on the subshape.

    `shape` and `subshape` are topes over the ambient cube context extended
    with `cube_vars`; `subshape` must entail `shape`.  `family` is a type
    under the shape restriction, `boundary` a term of that family under the
    subshape restriction.  `boundary` may be None only when the subshape is
    inconsistent, which encodes the plain cotensor.
    """

    cube_vars: tuple[str, ...]
    shape: Tope
    subshape: Tope
    family: "Term"
    boundary: "Term | None"


@dataclass(frozen=True)
class ExtLam:
    cube_vars: tuple[str, ...]
    body: "Term"


@dataclass(frozen=True)
class ExtApp:
    fn: "Term"
    points: tuple[Interval, ...]


@dataclass(frozen=True)
class Split:
    """Tope case analysis: the term denotes case body on each case tope.

    Checking enforces that the case topes cover the ambient restriction and
    that bodies agree definitionally on overlaps, so the choice of entailed
    case during reduction is immaterial.
    """

    cases: tuple[tuple[Tope, "Term"], ...]


@dataclass(frozen=True)
class Const:
    name: str


Term = Union[
    Var,
    Universe,
    Pi,
    Lam,
    App,
    Sigma,
    Pair,
    Fst,
    Snd,
    IdType,
    Refl,
    J,
    ExtType,
    ExtLam,
    ExtApp,
    Split,
    Const,
]


# ---------------------------------------------------------------------------
# variable bookkeeping


def free_term_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(n):
            return frozenset((n,))
        case Universe() | Const() | Refl(None):
            return frozenset()
        case Refl(s):
            return free_term_vars(s)
        case Pi(x, a, b) | Sigma(x, a, b):
            return free_term_vars(a) | (free_term_vars(b) - {x})
        case Lam(x, body, ann):
            fv = free_term_vars(body) - {x}
            return fv | (free_term_vars(ann) if ann is not None else frozenset())
        case App(f, a):
            return free_term_vars(f) | free_term_vars(a)
        case Pair(a, b, ann):
            fv = free_term_vars(a) | free_term_vars(b)
            return fv | (free_term_vars(ann) if ann is not None else frozenset())
        case Fst(p) | Snd(p):
            return free_term_vars(p)
        case IdType(ty, l, r):
            return free_term_vars(ty) | free_term_vars(l) | free_term_vars(r)
        case J(c, d, p):
            return free_term_vars(c) | free_term_vars(d) | free_term_vars(p)
        case ExtType(_, _, _, fam, bnd):
            fv = free_term_vars(fam)
            return fv | (free_term_vars(bnd) if bnd is not None else frozenset())
        case ExtLam(_, body):
            return free_term_vars(body)
        case ExtApp(f, _):
            return free_term_vars(f)
        case Split(cases):
            out: frozenset[str] = frozenset()
            for _, body in cases:
                out |= free_term_vars(body)
            return out
    raise TypeError(f"not a term: {t!r}")


def free_cube_vars(t: Term) -> frozenset[str]:
    match t:
        case Var() | Universe() | Const() | Refl(None):
            return frozenset()
        case Refl(s):
            return free_cube_vars(s)
        case Pi(_, a, b) | Sigma(_, a, b):
            return free_cube_vars(a) | free_cube_vars(b)
        case Lam(_, body, ann):
            fv = free_cube_vars(body)
            return fv | (free_cube_vars(ann) if ann is not None else frozenset())
        case App(f, a):
            return free_cube_vars(f) | free_cube_vars(a)
        case Pair(a, b, ann):
            fv = free_cube_vars(a) | free_cube_vars(b)
            return fv | (free_cube_vars(ann) if ann is not None else frozenset())
        case Fst(p) | Snd(p):
            return free_cube_vars(p)
        case IdType(ty, l, r):
            return free_cube_vars(ty) | free_cube_vars(l) | free_cube_vars(r)
        case J(c, d, p):
            return free_cube_vars(c) | free_cube_vars(d) | free_cube_vars(p)
        case ExtType(vs, shape, sub, fam, bnd):
            inner = frozenset(tope_vars(shape)) | frozenset(tope_vars(sub))
            inner |= free_cube_vars(fam)
            if bnd is not None:
                inner |= free_cube_vars(bnd)
            return inner - set(vs)
        case ExtLam(vs, body):
            return free_cube_vars(body) - set(vs)
        case ExtApp(f, points):
            fv = free_cube_vars(f)
            for p in points:
                if isinstance(p, IVar):
                    fv |= {p.name}
            return fv
        case Split(cases):
            out: frozenset[str] = frozenset()
            for tope, body in cases:
                out |= frozenset(tope_vars(tope)) | free_cube_vars(body)
            return out
    raise TypeError(f"not a term: {t!r}")


def fresh_name(hint: str, avoid: frozenset[str] | set[str]) -> str:
    """A name not in `avoid`, derived from hint.

    Generated names use a '#' marker, which the surface lexer rejects, so a
    freshened name can never collide with any user-written identifier.
    """
    base = hint.split("#", 1)[0] or "x"
    if hint not in avoid:
        return hint
    k = 1
    while f"{base}#{k}" in avoid:
        k += 1
    return f"{base}#{k}"


# ---------------------------------------------------------------------------
# substitution


def _subst_under_binder(
    binder: str, body: Term, name: str, value: Term, extra: frozenset[str]
) -> tuple[str, Term]:
    """Substitute under one term binder, renaming it if it would capture."""
    if binder == name:
        return binder, body
    if binder in free_term_vars(value):
        new = fresh_name(binder, free_term_vars(value) | free_term_vars(body) | extra | {name})
        body = subst(body, binder, Var(new))
        binder = new
    return binder, subst(body, name, value)


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution of a term for a term variable."""
    match t:
        case Var(n):
            return value if n == name else t
        case Universe() | Const() | Refl(None):
            return t
        case Refl(s):
            return Refl(subst(s, name, value))
        case Pi(x, a, b):
            a2 = subst(a, name, value)
            x2, b2 = _subst_under_binder(x, b, name, value, frozenset())
            return Pi(x2, a2, b2)
        case Sigma(x, a, b):
            a2 = subst(a, name, value)
            x2, b2 = _subst_under_binder(x, b, name, value, frozenset())
            return Sigma(x2, a2, b2)
        case Lam(x, body, ann):
            ann2 = subst(ann, name, value) if ann is not None else None
            x2, body2 = _subst_under_binder(x, body, name, value, frozenset())
            return Lam(x2, body2, ann2)
        case App(f, a):
            return App(subst(f, name, value), subst(a, name, value))
        case Pair(a, b, ann):
            ann2 = subst(ann, name, value) if ann is not None else None
            return Pair(subst(a, name, value), subst(b, name, value), ann2)
        case Fst(p):
            return Fst(subst(p, name, value))
        case Snd(p):
            return Snd(subst(p, name, value))
        case IdType(ty, l, r):
            return IdType(subst(ty, name, value), subst(l, name, value), subst(r, name, value))
        case J(c, d, p):
            return J(subst(c, name, value), subst(d, name, value), subst(p, name, value))
        case ExtType(vs, shape, sub, fam, bnd):
            vs2, ren = _avoid_cube_capture(vs, free_cube_vars(value))
            if ren:
                shape, sub = rename_tope(shape, ren), rename_tope(sub, ren)
                fam = rename_cube(fam, ren)
                bnd = rename_cube(bnd, ren) if bnd is not None else None
            return ExtType(
                vs2,
                shape,
                sub,
                subst(fam, name, value),
                subst(bnd, name, value) if bnd is not None else None,
            )
        case ExtLam(vs, body):
            vs2, ren = _avoid_cube_capture(vs, free_cube_vars(value))
            if ren:
                body = rename_cube(body, ren)
            return ExtLam(vs2, subst(body, name, value))
        case ExtApp(f, points):
            return ExtApp(subst(f, name, value), points)
        case Split(cases):
            return Split(tuple((tope, subst(body, name, value)) for tope, body in cases))
    raise TypeError(f"not a term: {t!r}")


def _avoid_cube_capture(
    vs: tuple[str, ...], incoming: frozenset[str]
) -> tuple[tuple[str, ...], dict[str, str]]:
    """Rename the bound cube variables clashing with incoming free ones."""
    ren: dict[str, str] = {}
    out: list[str] = []
    taken = set(vs) | set(incoming)
    for v in vs:
        if v in incoming:
            new = fresh_name(v, frozenset(taken))
            taken.add(new)
            ren[v] = new
            out.append(new)
        else:
            out.append(v)
    return tuple(out), ren


def rename_cube(t: Term, ren: dict[str, str]) -> Term:
    return subst_cube(t, {k: IVar(v) for k, v in ren.items()})


def subst_cube(t: Term, mapping: dict[str, Interval]) -> Term:
    """Capture-avoiding substitution of interval terms for cube variables."""
    if not mapping:
        return t
    image_vars = frozenset(p.name for p in mapping.values() if isinstance(p, IVar))
    match t:
        case Var() | Universe() | Const() | Refl(None):
            return t
        case Refl(s):
            return Refl(subst_cube(s, mapping))
        case Pi(x, a, b):
            return Pi(x, subst_cube(a, mapping), subst_cube(b, mapping))
        case Sigma(x, a, b):
            return Sigma(x, subst_cube(a, mapping), subst_cube(b, mapping))
        case Lam(x, body, ann):
            ann2 = subst_cube(ann, mapping) if ann is not None else None
            return Lam(x, subst_cube(body, mapping), ann2)
        case App(f, a):
            return App(subst_cube(f, mapping), subst_cube(a, mapping))
        case Pair(a, b, ann):
            ann2 = subst_cube(ann, mapping) if ann is not None else None
            return Pair(subst_cube(a, mapping), subst_cube(b, mapping), ann2)
        case Fst(p):
            return Fst(subst_cube(p, mapping))
        case Snd(p):
            return Snd(subst_cube(p, mapping))
        case IdType(ty, l, r):
            return IdType(
                subst_cube(ty, mapping), subst_cube(l, mapping), subst_cube(r, mapping)
            )
        case J(c, d, p):
            return J(subst_cube(c, mapping), subst_cube(d, mapping), subst_cube(p, mapping))
        case ExtType(vs, shape, sub, fam, bnd):
            inner = {k: v for k, v in mapping.items() if k not in vs}
            vs2, ren = _avoid_cube_capture(vs, image_vars)
            if ren:
                shape, sub = rename_tope(shape, ren), rename_tope(sub, ren)
                fam = rename_cube(fam, ren)
                bnd = rename_cube(bnd, ren) if bnd is not None else None
            if not inner:
                return ExtType(vs2, shape, sub, fam, bnd)
            return ExtType(
                vs2,
                subst_tope(shape, inner),
                subst_tope(sub, inner),
                subst_cube(fam, inner),
                subst_cube(bnd, inner) if bnd is not None else None,
            )
        case ExtLam(vs, body):
            inner = {k: v for k, v in mapping.items() if k not in vs}
            vs2, ren = _avoid_cube_capture(vs, image_vars)
            if ren:
                body = rename_cube(body, ren)
            return ExtLam(vs2, subst_cube(body, inner) if inner else body)
        case ExtApp(f, points):
            return ExtApp(
                subst_cube(f, mapping),
                tuple(subst_interval(p, mapping) for p in points),
            )
        case Split(cases):
            return Split(
                tuple(
                    (subst_tope(tope, mapping), subst_cube(body, mapping))
                    for tope, body in cases
                )
            )
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# alpha equality


def _interval_eq(p: Interval, q: Interval, cl: dict[str, str], cr: dict[str, str]) -> bool:
    if isinstance(p, IVar) and isinstance(q, IVar):
        return cl.get(p.name, p.name) == cr.get(q.name, q.name)
    return p == q


def _tope_alpha(a: Tope, b: Tope, cl: dict[str, str], cr: dict[str, str]) -> bool:
    return rename_tope(a, cl) == rename_tope(b, cr)


def alpha_equal(a: Term, b: Term) -> bool:
    """Structural equality up to binder renaming, ignoring annotations."""
    fresh = iter(range(10**9))

    def go(a: Term, b: Term, tl: dict, tr: dict, cl: dict, cr: dict) -> bool:
        match (a, b):
            case (Var(x), Var(y)):
                return tl.get(x, x) == tr.get(y, y)
            case (Universe(), Universe()):
                return True
            case (Const(x), Const(y)):
                return x == y
            case (Refl(_), Refl(_)):
                return True
            case (Pi(x, a1, b1), Pi(y, a2, b2)) | (Sigma(x, a1, b1), Sigma(y, a2, b2)):
                if type(a) is not type(b):
                    return False
                if not go(a1, a2, tl, tr, cl, cr):
                    return False
                v = f"#a{next(fresh)}"
                return go(b1, b2, {**tl, x: v}, {**tr, y: v}, cl, cr)
            case (Lam(x, b1, _), Lam(y, b2, _)):
                v = f"#a{next(fresh)}"
                return go(b1, b2, {**tl, x: v}, {**tr, y: v}, cl, cr)
            case (App(f1, a1), App(f2, a2)):
                return go(f1, f2, tl, tr, cl, cr) and go(a1, a2, tl, tr, cl, cr)
            case (Pair(a1, b1, _), Pair(a2, b2, _)):
                return go(a1, a2, tl, tr, cl, cr) and go(b1, b2, tl, tr, cl, cr)
            case (Fst(p1), Fst(p2)) | (Snd(p1), Snd(p2)):
                if type(a) is not type(b):
                    return False
                return go(p1, p2, tl, tr, cl, cr)
            case (IdType(t1, l1, r1), IdType(t2, l2, r2)):
                return (
                    go(t1, t2, tl, tr, cl, cr)
                    and go(l1, l2, tl, tr, cl, cr)
                    and go(r1, r2, tl, tr, cl, cr)
                )
            case (J(c1, d1, p1), J(c2, d2, p2)):
                return (
                    go(c1, c2, tl, tr, cl, cr)
                    and go(d1, d2, tl, tr, cl, cr)
                    and go(p1, p2, tl, tr, cl, cr)
                )
            case (ExtType(v1, s1, x1, f1, n1), ExtType(v2, s2, x2, f2, n2)):
                if len(v1) != len(v2):
                    return False
                if (n1 is None) != (n2 is None):
                    return False
                ws = [f"#c{next(fresh)}" for _ in v1]
                cl2 = {**cl, **dict(zip(v1, ws))}
                cr2 = {**cr, **dict(zip(v2, ws))}
                if not _tope_alpha(s1, s2, cl2, cr2) or not _tope_alpha(x1, x2, cl2, cr2):
                    return False
                if not go(f1, f2, tl, tr, cl2, cr2):
                    return False
                return n1 is None or go(n1, n2, tl, tr, cl2, cr2)
            case (ExtLam(v1, b1), ExtLam(v2, b2)):
                if len(v1) != len(v2):
                    return False
                ws = [f"#c{next(fresh)}" for _ in v1]
                return go(b1, b2, tl, tr, {**cl, **dict(zip(v1, ws))}, {**cr, **dict(zip(v2, ws))})
            case (ExtApp(f1, p1), ExtApp(f2, p2)):
                if len(p1) != len(p2):
                    return False
                if not all(_interval_eq(p, q, cl, cr) for p, q in zip(p1, p2)):
                    return False
                return go(f1, f2, tl, tr, cl, cr)
            case (Split(c1), Split(c2)):
                if len(c1) != len(c2):
                    return False
                return all(
                    _tope_alpha(t1, t2, cl, cr) and go(b1, b2, tl, tr, cl, cr)
                    for (t1, b1), (t2, b2) in zip(c1, c2)
                )
        return False

    return go(a, b, {}, {}, {}, {})
