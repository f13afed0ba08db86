"""Shape calculus: cube contexts restricted by topes, and their inclusions.

Shapes are pairs (cube context, tope).  Inclusions are tope entailments over a
shared cube.  Products and Leibniz tensors rename the combined cube into the
canonical alphabet t, s, r, t1, s1, r1, t2, ... so that standard shapes and
tensor goldens come out over the familiar variable names.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import tope as T
from .tope import BOT, TOP, And, CubeContext, Eq, IVar, Le, Or, Tope


class ShapeError(Exception):
    pass


class InclusionError(ShapeError):
    """An inclusion claim whose entailment fails; may carry a countermodel."""

    def __init__(self, message: str, countermodel: dict[str, int] | None = None):
        super().__init__(message)
        self.countermodel = countermodel


@dataclass(frozen=True)
class Shape:
    cube: CubeContext
    tope: Tope

    def __post_init__(self) -> None:
        extra = T.tope_vars(self.tope) - set(self.cube.names)
        if extra:
            raise ShapeError(f"tope mentions unbound variable(s) {sorted(extra)}")

    def __str__(self) -> str:
        binders = ", ".join(f"{n} : 2" for n in self.cube.names)
        return f"{{{binders} | {T.format_tope(self.tope)}}}"


@dataclass(frozen=True)
class ShapeInclusion:
    """sub |- sup over a shared cube; `verified` only via is_inclusion/tensor."""

    cube: CubeContext
    sub: Tope
    sup: Tope
    verified: bool = False

    def __str__(self) -> str:
        binders = ", ".join(f"{n} : 2" for n in self.cube.names)
        return (
            f"{{{binders} | {T.format_tope(self.sub)}}} "
            f"<= {{{binders} | {T.format_tope(self.sup)}}}"
        )

    @property
    def sub_shape(self) -> Shape:
        return Shape(self.cube, self.sub)

    @property
    def sup_shape(self) -> Shape:
        return Shape(self.cube, self.sup)


def is_inclusion(cube: CubeContext, sub: Tope, sup: Tope) -> ShapeInclusion:
    """Verify sub |- sup; on failure raise with a chain countermodel."""
    if not T.entails(cube, sub, sup):
        model = T.find_countermodel(cube, sub, sup)
        shown = T.format_countermodel(cube, model) if model is not None else "none"
        raise InclusionError(
            f"{T.format_tope(sub)} does not entail {T.format_tope(sup)} "
            f"over [{', '.join(cube.names)}]; countermodel: {shown}",
            model,
        )
    return ShapeInclusion(cube, sub, sup, verified=True)


# canonical cube alphabet: t, s, r, t1, s1, r1, t2, ...
_BASE = ("t", "s", "r")


def canonical_names(k: int) -> tuple[str, ...]:
    names = []
    for i in range(k):
        base = _BASE[i % 3]
        gen = i // 3
        names.append(base if gen == 0 else f"{base}{gen}")
    return tuple(names)


def _rename_pair(a_cube: CubeContext, b_cube: CubeContext) -> tuple[CubeContext, dict, dict]:
    names = canonical_names(len(a_cube) + len(b_cube))
    a_map = dict(zip(a_cube.names, names[: len(a_cube)]))
    b_map = dict(zip(b_cube.names, names[len(a_cube):]))
    return CubeContext(names), a_map, b_map


def product(a: Shape, b: Shape) -> Shape:
    cube, a_map, b_map = _rename_pair(a.cube, b.cube)
    return Shape(cube, T.and_(T.rename_tope(a.tope, a_map), T.rename_tope(b.tope, b_map)))


def leibniz_tensor(j: ShapeInclusion, k: ShapeInclusion) -> ShapeInclusion:
    """Pushout product of inclusions over the product cube.

    sub = (j.sub /\\ k.sup) \\/ (j.sup /\\ k.sub), sup = j.sup /\\ k.sup.
    """
    if not (j.verified and k.verified):
        raise ShapeError("leibniz_tensor requires verified inclusions")
    cube, j_map, k_map = _rename_pair(j.cube, k.cube)
    j_sub, j_sup = T.rename_tope(j.sub, j_map), T.rename_tope(j.sup, j_map)
    k_sub, k_sup = T.rename_tope(k.sub, k_map), T.rename_tope(k.sup, k_map)
    sub = T.or_(T.and_(j_sub, k_sup), T.and_(j_sup, k_sub))
    sup = T.and_(j_sup, k_sup)
    return is_inclusion(cube, sub, sup)


# ---------------------------------------------------------------------------
# standard shapes and inclusions

_t, _s, _r = IVar("t"), IVar("s"), IVar("r")
_I0, _I1 = T.I0, T.I1

_SHAPES: dict[str, Shape] = {
    "Delta0": Shape(CubeContext(()), TOP),
    "Delta1": Shape(CubeContext(("t",)), TOP),
    "Delta2": Shape(CubeContext(("t", "s")), Le(_s, _t)),
    "Delta3": Shape(CubeContext(("t", "s", "r")), And(Le(_r, _s), Le(_s, _t))),
    "bdDelta1": Shape(CubeContext(("t",)), Or(Eq(_t, _I0), Eq(_t, _I1))),
    "bdDelta2": Shape(
        CubeContext(("t", "s")),
        And(Le(_s, _t), Or(Or(Eq(_s, _I0), Eq(_t, _I1)), Eq(_s, _t))),
    ),
    "Lambda21": Shape(
        CubeContext(("t", "s")), And(Le(_s, _t), Or(Eq(_s, _I0), Eq(_t, _I1)))
    ),
    "square": Shape(CubeContext(("t", "s")), TOP),
}

_SHAPE_ALIASES = {
    "Δ0": "Delta0",
    "Δ1": "Delta1",
    "Δ2": "Delta2",
    "Δ3": "Delta3",
    "∂Δ1": "bdDelta1",
    "∂Δ2": "bdDelta2",
    "Λ21": "Lambda21",
    "Λ²₁": "Lambda21",
}

_INCLUSIONS: dict[str, tuple[CubeContext, Tope, Tope]] = {
    "i0": (CubeContext(("t",)), Eq(_t, _I0), TOP),
    "i1": (CubeContext(("t",)), Eq(_t, _I1), TOP),
    "b1": (CubeContext(("t",)), Or(Eq(_t, _I0), Eq(_t, _I1)), TOP),
    "bdDelta2-Delta2": (
        _SHAPES["bdDelta2"].cube,
        _SHAPES["bdDelta2"].tope,
        _SHAPES["Delta2"].tope,
    ),
    "Lambda21-Delta2": (
        _SHAPES["Lambda21"].cube,
        _SHAPES["Lambda21"].tope,
        _SHAPES["Delta2"].tope,
    ),
}

_INCLUSION_ALIASES = {
    "∂Δ2⊂Δ2": "bdDelta2-Delta2",
    "Λ²₁⊂Δ2": "Lambda21-Delta2",
    "Λ21⊂Δ2": "Lambda21-Delta2",
    "horn21": "Lambda21-Delta2",
}


def standard_shape(name: str) -> Shape:
    key = _SHAPE_ALIASES.get(name, name)
    if key not in _SHAPES:
        raise ShapeError(f"unknown standard shape {name!r}")
    return _SHAPES[key]


def standard_inclusion(name: str) -> ShapeInclusion:
    key = _INCLUSION_ALIASES.get(name, name)
    if key not in _INCLUSIONS:
        raise ShapeError(f"unknown standard inclusion {name!r}")
    cube, sub, sup = _INCLUSIONS[key]
    return is_inclusion(cube, sub, sup)


def standard(name: str) -> Shape | ShapeInclusion:
    """Look up a standard shape or inclusion by (possibly aliased) name."""
    key = _SHAPE_ALIASES.get(name, name)
    if key in _SHAPES:
        return _SHAPES[key]
    return standard_inclusion(name)


def standard_names() -> tuple[list[str], list[str]]:
    return sorted(_SHAPES), sorted(_INCLUSIONS)
