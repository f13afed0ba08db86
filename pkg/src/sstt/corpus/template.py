"""Generator for the lifting-calculus corpus file.

Shape inclusions are meta-level objects: the object language cannot
quantify over them, so the lifting calculus (cells, cotensors, lifting
conditions, and the statement types built from them) is stamped out once
per concrete inclusion from a single template.  Each instance pulls its
sub- and super-shape topes from the shape catalog, renames the canonical
cube variables so the lifting direction `t` stays free, and renders the
same declaration block with an instance suffix.

Regenerate with `python3 -m sstt.corpus.template`; the checked-in file
must match the generator's output exactly.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import sstt.tope as T
from sstt.shape import ShapeInclusion, leibniz_tensor, standard_inclusion

HEADER = """\
-- Generated by template.py; edit the template, not this file.
--
-- The lifting calculus for a shape inclusion: cells and subcells of a
-- type, the cotensor base and the restriction map into it, the
-- left-adjoint-right-inverse cell condition, the explicit lifting
-- condition, families with enough lifts, functors preserving the cell
-- condition, and the characterization statement types.  One block per
-- bundled inclusion; the suffix names the instance.
"""


@dataclass(frozen=True)
class Instance:
    """One stamped-out copy of the template.

    suffix: appended to every declaration name in the block.
    inclusion: the verified shape inclusion the block is about.
    cube_vars: fresh names for the inclusion's cube, avoiding `t`.
    full: whether to render the functor and characterization block.
    comment: one-line description of the inclusion.
    """

    suffix: str
    inclusion: ShapeInclusion
    cube_vars: tuple[str, ...]
    full: bool
    comment: str

    @property
    def phi(self) -> str:
        return self._rendered(self.inclusion.sub)

    @property
    def psi(self) -> str:
        return self._rendered(self.inclusion.sup)

    def _rendered(self, tope: T.Tope) -> str:
        ren = dict(zip(self.inclusion.cube.names, self.cube_vars))
        return T.format_tope(T.rename_tope(tope, ren))


def bundled_instances() -> tuple[Instance, ...]:
    b1 = standard_inclusion("b1")
    i0 = standard_inclusion("i0")
    return (
        Instance(
            suffix="I0",
            inclusion=i0,
            cube_vars=("s",),
            full=True,
            comment="the source-vertex inclusion of the interval",
        ),
        Instance(
            suffix="B1",
            inclusion=b1,
            cube_vars=("s",),
            full=True,
            comment="the two-endpoint inclusion of the interval",
        ),
        Instance(
            suffix="B1I0",
            inclusion=leibniz_tensor(b1, i0),
            cube_vars=("s", "r"),
            full=False,
            comment="the open-box inclusion into the square, the Leibniz"
            " tensor of the two-endpoint and source-vertex inclusions",
        ),
    )


def _case(tope: str, shape: str) -> str:
    """A boundary case tope cut down to the ambient shape.

    An extension type's subshape must be included in its shape, so a case
    picking out an end of the prism over a proper shape is conjoined with
    the shape tope; a full shape needs no cut.
    """
    if shape == "TOP":
        return tope
    return f"{tope} /\\ ({shape})"


def render_instance(inst: Instance) -> str:
    s = inst.suffix
    phi = inst.phi
    psi = inst.psi
    v = " ".join(inst.cube_vars)
    p = ", ".join(inst.cube_vars)
    psi0 = _case("t == 0", psi)
    psi1 = _case("t == 1", psi)
    phi0 = _case("t == 0", phi)
    phi1 = _case("t == 1", phi)
    core = f"""\
-- Instance {s}: {inst.comment}.
-- Subshape: {phi}.  Shape: {psi}.

def cells{s} (A : U) : U := <{{{v} | {psi}}} -> A> ;

def subcells{s} (A : U) : U := <{{{v} | {phi}}} -> A> ;

def restrict{s} (A : U) (c : cells{s} A) : subcells{s} A := \\{{{v}}}. c @ ({p}) ;

def cotensorBase{s} (B : U) (P : B -> U) : U :=
  Sig (w : cells{s} B)
      (Sig (k : subcells{s} (total B P))
           (Id (subcells{s} B) (restrict{s} B w) (\\{{{v}}}. (k @ ({p})).1))) ;

def cotensor{s} (B : U) (P : B -> U) (e : cells{s} (total B P)) : cotensorBase{s} B P :=
  (\\{{{v}}}. (e @ ({p})).1, restrict{s} (total B P) e, refl) ;

def isLARICell{s} (B : U) (P : B -> U) (g : cells{s} (total B P)) : U :=
  (e : cells{s} (total B P)) ->
  isEquiv (hom (cells{s} (total B P)) g e)
          (hom (cotensorBase{s} B P) (cotensor{s} B P g) (cotensor{s} B P e))
          (fmap (cells{s} (total B P)) (cotensorBase{s} B P) (cotensor{s} B P) g e) ;

def lariLifting{s} (B : U) (P : B -> U)
    (u : subcells{s} B) (v : <{{{v} | {psi}}} -> B [{phi} |-> u @ ({p})]>)
    (f : <{{{v} | {phi}}} -> P (u @ ({p}))>)
    (g : <{{{v} | {psi}}} -> P (v @ ({p})) [{phi} |-> f @ ({p})]>) : U :=
  (z : subcells{s} B) -> (w : <{{{v} | {psi}}} -> B [{phi} |-> z @ ({p})]>) ->
  (k : <{{{v} | {phi}}} -> P (z @ ({p}))>) ->
  (m : <{{{v} | {psi}}} -> P (w @ ({p})) [{phi} |-> k @ ({p})]>) ->
  (a1 : hom (subcells{s} B) u z) ->
  (a2 : <{{t {v} | {psi}}} -> B [{psi0} |-> v @ ({p}), {psi1} |-> w @ ({p}), {phi} |-> a1 @ (t) @ ({p})]>) ->
  (a3 : <{{t {v} | {phi}}} -> P (a1 @ (t) @ ({p})) [{phi0} |-> f @ ({p}), {phi1} |-> k @ ({p})]>) ->
  isContr (<{{t {v} | {psi}}} -> P (a2 @ (t, {p}))
            [{psi0} |-> g @ ({p}), {psi1} |-> m @ ({p}), {phi} |-> a3 @ (t, {p})]>) ;

def hasEnoughLARILifts{s} (B : U) (P : B -> U) : U :=
  (u : subcells{s} B) -> (v : <{{{v} | {psi}}} -> B [{phi} |-> u @ ({p})]>) ->
  (f : <{{{v} | {phi}}} -> P (u @ ({p}))>) ->
  Sig (g : <{{{v} | {psi}}} -> P (v @ ({p})) [{phi} |-> f @ ({p})]>)
      (isLARICell{s} B P (\\{{{v}}}. (v @ ({p}), g @ ({p})))) ;
"""
    if not inst.full:
        return core
    extra = f"""\

def lariFamilyCharacterization{s} (B : U) (rzB : isRezk B) (P : B -> U) : U :=
  equiv (hasEnoughLARILifts{s} B P)
        (hasLARIAdjoint (cotensorBase{s} B P) (cells{s} (total B P)) (cotensor{s} B P)) ;

def isLARIFunctor{s} (A B : U) (Q : A -> U) (P : B -> U)
    (j : A -> B) (phi : (a : A) -> Q a -> P (j a)) : U :=
  (m : cells{s} (total A Q)) -> isLARICell{s} A Q m ->
  isLARICell{s} B P (\\{{{v}}}. (j ((m @ ({p})).1), phi ((m @ ({p})).1) ((m @ ({p})).2))) ;

def liftCommutation{s} (A B : U) (Q : A -> U) (P : B -> U)
    (j : A -> B) (phi : (a : A) -> Q a -> P (j a))
    (hq : hasEnoughLARILifts{s} A Q) (hp : hasEnoughLARILifts{s} B P) : U :=
  (u : subcells{s} A) -> (v : <{{{v} | {psi}}} -> A [{phi} |-> u @ ({p})]>) ->
  (f : <{{{v} | {phi}}} -> Q (u @ ({p}))>) ->
  Id (<{{{v} | {psi}}} -> P (j (v @ ({p}))) [{phi} |-> phi (u @ ({p})) (f @ ({p}))]>)
     (\\{{{v}}}. phi (v @ ({p})) ((hq u v f).1 @ ({p})))
     ((hp (\\{{{v}}}. j (u @ ({p}))) (\\{{{v}}}. j (v @ ({p}))) (\\{{{v}}}. phi (u @ ({p})) (f @ ({p})))).1) ;

def lariFunctorCharacterization{s} (A B : U) (rzA : isRezk A) (rzB : isRezk B)
    (Q : A -> U) (P : B -> U) (j : A -> B) (phi : (a : A) -> Q a -> P (j a))
    (hq : hasEnoughLARILifts{s} A Q) (hp : hasEnoughLARILifts{s} B P) : U :=
  prod (isLARIFunctor{s} A B Q P j phi -> liftCommutation{s} A B Q P j phi hq hp)
       (liftCommutation{s} A B Q P j phi hq hp -> isLARIFunctor{s} A B Q P j phi) ;
"""
    return core + extra


def render_lari_sst() -> str:
    blocks = [render_instance(inst) for inst in bundled_instances()]
    return HEADER + "\n" + "\n".join(blocks)


def default_output() -> Path:
    return Path(__file__).resolve().parent / "data" / "lari.sst"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python3 -m sstt.corpus.template",
        description="regenerate the lifting-calculus corpus file",
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=default_output(),
        help="output path (default: the bundled data directory)",
    )
    parser.add_argument(
        "--diff",
        action="store_true",
        help="exit 1 if the file on disk differs from the rendered output",
    )
    args = parser.parse_args(argv)
    rendered = render_lari_sst()
    if args.diff:
        on_disk = args.out.read_text() if args.out.exists() else ""
        if on_disk != rendered:
            print(f"{args.out} is stale; regenerate it")
            return 1
        print(f"{args.out} is up to date")
        return 0
    args.out.write_text(rendered)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
