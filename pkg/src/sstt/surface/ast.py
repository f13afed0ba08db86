"""Surface syntax trees with source spans, and surface-level errors."""

from __future__ import annotations

from dataclasses import dataclass, field

from sstt import tope as T

Span = tuple[str, int, int]  # file, 1-based line, 1-based column


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning
    message: str
    span: Span
    hint: str | None = None


class SurfaceError(Exception):
    """Parse or elaboration failure with an error class and a span."""

    def __init__(self, code: str, message: str, span: Span):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.span = span


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class SVar:
    name: str
    span: Span


@dataclass(frozen=True)
class SUniverse:
    span: Span


@dataclass(frozen=True)
class SPi:
    groups: tuple[tuple[tuple[str, ...], "STerm"], ...]  # ((names, domain), ...)
    codomain: "STerm"
    span: Span


@dataclass(frozen=True)
class SArrow:
    domain: "STerm"
    codomain: "STerm"
    span: Span


@dataclass(frozen=True)
class SLam:
    names: tuple[str, ...]
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SSigma:
    names: tuple[str, ...]
    fst_type: "STerm"
    snd_type: "STerm"
    span: Span


@dataclass(frozen=True)
class SPair:
    fst: "STerm"
    snd: "STerm"
    span: Span


@dataclass(frozen=True)
class SProj:
    target: "STerm"
    index: int  # 1 or 2
    span: Span


@dataclass(frozen=True)
class SApp:
    fn: "STerm"
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SId:
    ty: "STerm"
    lhs: "STerm"
    rhs: "STerm"
    span: Span


@dataclass(frozen=True)
class SRefl:
    span: Span


@dataclass(frozen=True)
class SJ:
    motive: "STerm"
    base: "STerm"
    eq: "STerm"
    span: Span


@dataclass(frozen=True)
class SExtType:
    names: tuple[str, ...]
    shape: T.Tope
    family: "STerm"
    cases: tuple[tuple[T.Tope, "STerm"], ...] | None  # None: empty subshape
    span: Span


@dataclass(frozen=True)
class SExtLam:
    names: tuple[str, ...]
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SExtApp:
    fn: "STerm"
    points: tuple[tuple[T.Interval, Span], ...]
    span: Span


@dataclass(frozen=True)
class SSplit:
    cases: tuple[tuple[T.Tope, "STerm"], ...]
    span: Span


@dataclass(frozen=True)
class SRec01:
    at_zero: "STerm"
    at_one: "STerm"
    span: Span


STerm = (
    SVar
    | SUniverse
    | SPi
    | SArrow
    | SLam
    | SSigma
    | SPair
    | SProj
    | SApp
    | SId
    | SRefl
    | SJ
    | SExtType
    | SExtLam
    | SExtApp
    | SSplit
    | SRec01
)


# --- declarations ----------------------------------------------------------


@dataclass(frozen=True)
class SParamGroup:
    names: tuple[str, ...]
    ty: "STerm | None"  # None marks a cube parameter group (t : 2)
    span: Span


@dataclass(frozen=True)
class SDef:
    name: str
    params: tuple[SParamGroup, ...]
    constraint: T.Tope | None
    ty: STerm
    body: STerm
    span: Span


@dataclass(frozen=True)
class SAxiom:
    name: str
    params: tuple[SParamGroup, ...]
    constraint: T.Tope | None
    ty: STerm
    span: Span


@dataclass(frozen=True)
class SCheck:
    term: STerm
    ty: STerm
    span: Span


@dataclass(frozen=True)
class SEntails:
    cube_vars: tuple[str, ...]
    hyp: T.Tope
    goal: T.Tope
    span: Span


SDecl = SDef | SAxiom | SCheck | SEntails


@dataclass(frozen=True)
class SurfaceModule:
    name: str
    decls: tuple[SDecl, ...] = field(default_factory=tuple)
