"""End-to-end acceptance suite.

Each test is one acceptance gate; `pytest -v` prints one pass/fail line per
gate.  The gates, in order: dual-route entailment agreement, the square
decomposition, the Leibniz tensor goldens, shape algebra, the bundled
library with its boundary sweep, the negative library, print/parse round
trips, and the command-line contract.
"""

import json
import random
import time

import jsonschema
import pytest

import sstt.shape as S
import sstt.tope as T
from sstt.cli import run_cli
from sstt.corpus import load_manifest, run_corpus
from sstt.kernel import (
    App,
    Const,
    Environment,
    ExtApp,
    ExtLam,
    Fst,
    J,
    Lam,
    Pair,
    Refl,
    Snd,
    TypingContext,
    Var,
    alpha_equal,
    check,
)
from sstt.surface import (
    check_source,
    elaborate_term,
    parse_term,
    print_declaration,
    print_term,
)

# --- gate 1: solver and oracle agree -----------------------------------------


def _atoms(names: tuple[str, ...]) -> list[T.Tope]:
    """All <= atoms over both operand orders; == atoms once per operand pair."""
    terms = [T.IVar(n) for n in names] + [T.I0, T.I1]
    atoms: list[T.Tope] = [T.Le(a, b) for a in terms for b in terms]
    for i, a in enumerate(terms):
        for b in terms[i:]:
            atoms.append(T.Eq(a, b))
    return atoms


def _exhaustive_topes(names: tuple[str, ...]) -> list[T.Tope]:
    """TOP, BOT, every atom, every ordered binary combination of atoms, and
    every right-nested ordered triple, under both connectives at both spots."""
    atoms = _atoms(names)
    topes: list[T.Tope] = [T.TOP, T.BOT]
    topes.extend(atoms)
    for op in (T.And, T.Or):
        for a in atoms:
            for b in atoms:
                topes.append(op(a, b))
    for outer in (T.And, T.Or):
        for inner in (T.And, T.Or):
            for a in atoms:
                for b in atoms:
                    for c in atoms:
                        topes.append(outer(a, inner(b, c)))
    return topes


def _random_tope(rng: random.Random, names: tuple[str, ...], depth: int) -> T.Tope:
    terms = [T.IVar(n) for n in names] + [T.I0, T.I1]
    if depth == 0 or rng.random() < 0.35:
        kind = rng.randrange(4)
        if kind == 0:
            return T.TOP
        if kind == 1:
            return T.BOT
        lhs, rhs = rng.choice(terms), rng.choice(terms)
        return T.Le(lhs, rhs) if kind == 2 else T.Eq(lhs, rhs)
    ctor = T.And if rng.random() < 0.5 else T.Or
    return ctor(_random_tope(rng, names, depth - 1), _random_tope(rng, names, depth - 1))


def test_solver_and_oracle_agree():
    started = time.monotonic()
    for names in (("t",), ("t", "s")):
        ctx = T.CubeContext(names)
        for x in _exhaustive_topes(names):
            assert T.entails(ctx, x, T.BOT) == T.oracle_entails(ctx, x, T.BOT)
            assert T.entails(ctx, T.TOP, x) == T.oracle_entails(ctx, T.TOP, x)
        small = [T.TOP, T.BOT] + _atoms(names)
        for hyp in small:
            for goal in small:
                assert T.entails(ctx, hyp, goal) == T.oracle_entails(ctx, hyp, goal)
    rng = random.Random(417)
    for i in range(600):
        names = ("t", "s", "r") if i % 2 == 0 else ("t", "s", "r", "q")
        ctx = T.CubeContext(names)
        hyp = _random_tope(rng, names, 6)
        goal = _random_tope(rng, names, 6)
        assert T.entails(ctx, hyp, goal) == T.oracle_entails(ctx, hyp, goal)
    assert time.monotonic() - started < 60.0


# --- gate 2: the square decomposes into two triangles -------------------------


def test_square_decomposes_into_two_triangles(capsys):
    assert run_cli(["tope", "entails", r"[t,s] TOP => (s<=t)\/(t<=s)"]) == 0
    assert capsys.readouterr().out == "true\n"
    assert run_cli(["tope", "entails", r"[t,s] (s<=t)\/(t<=s) => TOP"]) == 0
    assert capsys.readouterr().out == "true\n"


# --- gate 3: Leibniz tensor goldens -------------------------------------------


def test_leibniz_tensor_goldens():
    t, s = T.IVar("t"), T.IVar("s")
    ctx2 = T.CubeContext(("t", "s"))
    t0, t1, s0, s1 = T.Eq(t, T.I0), T.Eq(t, T.I1), T.Eq(s, T.I0), T.Eq(s, T.I1)
    goldens = {
        ("b1", "b1"): T.Or(T.Or(t0, t1), T.Or(s0, s1)),
        ("b1", "i0"): T.Or(T.Or(t0, t1), s0),
        ("i0", "i0"): T.Or(t0, s0),
    }
    for (j, k), expected in goldens.items():
        tensor = S.leibniz_tensor(S.standard_inclusion(j), S.standard_inclusion(k))
        assert tensor.verified
        assert tensor.cube.names == ("t", "s")
        assert T.equiv(ctx2, tensor.sub, expected), (j, k)
        assert T.equiv(ctx2, tensor.sup, T.TOP), (j, k)

    identity = S.is_inclusion(T.CubeContext(("t",)), T.TOP, T.TOP)
    squared = S.leibniz_tensor(identity, identity)
    assert T.equiv(T.CubeContext(squared.cube.names), squared.sub, squared.sup)


# --- gate 4: shape algebra -----------------------------------------------------


def test_shape_algebra(capsys):
    t, s = T.IVar("t"), T.IVar("s")
    ctx2 = T.CubeContext(("t", "s"))
    horn = S.standard_shape("Lambda21")
    triangle = S.standard_shape("Delta2")
    square = S.standard_shape("square")
    assert S.is_inclusion(ctx2, horn.tope, triangle.tope).verified
    assert S.is_inclusion(ctx2, triangle.tope, square.tope).verified

    boundary = S.standard_shape("bdDelta2")
    horn_plus_diagonal = T.Or(horn.tope, T.Eq(s, t))
    assert T.equiv(ctx2, boundary.tope, horn_plus_diagonal)

    with pytest.raises(S.InclusionError) as exc:
        S.is_inclusion(ctx2, square.tope, triangle.tope)
    assert exc.value.countermodel is not None

    assert run_cli(["shape", "subseteq", "square", "Delta2"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "false"
    assert out[1].startswith("countermodel: ")


# --- gates 5 and 6: the bundled library ----------------------------------------


def test_library_all_checks_with_boundary_sweep():
    report = run_corpus()
    positives = [e for e in report.entries if e.expected == "ok"]
    assert [e.filename for e in positives] == [
        "basics.sst",
        "simplicial.sst",
        "axioms.sst",
        "comma.sst",
        "reladj.sst",
        "lari.sst",
        "cocart.sst",
    ]
    failed = [(e.filename, e.diff) for e in positives if not e.passed]
    assert failed == []
    assert report.declaration_count >= 40
    assert report.boundary_checks > 0
    assert report.boundary_failures == ()


def test_ill_typed_variants_rejected_with_expected_classes():
    report = run_corpus()
    negatives = [e for e in report.entries if e.expected != "ok"]
    assert len(negatives) >= 10
    failed = [(e.filename, e.diff) for e in negatives if not e.passed]
    assert failed == []
    classes = {e.expected.split(":", 1)[1] for e in negatives}
    assert {
        "boundary-mismatch",
        "type-mismatch",
        "incompatible-cases",
        "cube-scope",
        "non-inclusion",
    } <= classes


# --- gate 7: print/parse round trips --------------------------------------------

_PRELUDE = """\
axiom A : U ;
axiom B : U ;
axiom a0 : A ;
axiom a1 : A ;
axiom b0 : B ;
axiom f : A -> B ;
axiom g : B -> A ;
axiom h : A -> A ;
axiom e : Id A a0 a1 ;
axiom l0 : Id A a0 a0 ;
axiom w : Sig (x : A) B ;
axiom mk : A -> Sig (x : A) B ;
axiom u : <{t | TOP} -> A [t == 0 |-> a0, t == 1 |-> a1]> ;
axiom varr : B -> <{t | TOP} -> A [t == 0 |-> a0, t == 1 |-> a1]> ;
"""

_KNOWN = {"A", "B", "a0", "a1", "b0", "f", "g", "h", "e", "l0", "w", "mk", "u", "varr"}

_TYPE_SOURCES = {
    "A": "A",
    "B": "B",
    "AA": "A -> A",
    "AB": "A -> B",
    "BA": "B -> A",
    "pair": "Sig (x : A) B",
    "loop": "Id A a0 a0",
    "path": "Id A a0 a1",
    "arrow": "<{t | TOP} -> A [t == 0 |-> a0, t == 1 |-> a1]>",
}


def _gen_neutral(rng: random.Random, key: str, depth: int):
    """A term of the keyed type whose type the kernel can synthesize."""
    if key == "A":
        if depth == 0:
            return Const(rng.choice(("a0", "a1")))
        pick = rng.randrange(6)
        if pick == 0:
            return App(Const("g"), _gen_term(rng, "B", depth - 1))
        if pick == 1:
            return App(Const("h"), _gen_term(rng, "A", depth - 1))
        if pick == 2:
            return Fst(_gen_neutral(rng, "pair", depth - 1))
        if pick == 3:
            point = rng.choice((T.I0, T.I1))
            return ExtApp(_gen_neutral(rng, "arrow", depth - 1), (point,))
        eq_key = rng.choice(("loop", "path"))
        return J(
            Lam("y", Lam("q", Const("A"))),
            _gen_term(rng, "A", depth - 1),
            _gen_neutral(rng, eq_key, depth - 1),
        )
    if key == "B":
        if depth == 0:
            return Const("b0")
        if rng.randrange(2) == 0:
            return App(Const("f"), _gen_term(rng, "A", depth - 1))
        return Snd(_gen_neutral(rng, "pair", depth - 1))
    if key == "pair":
        if depth == 0:
            return Const("w")
        return App(Const("mk"), _gen_term(rng, "A", depth - 1))
    if key == "arrow":
        if depth == 0:
            return Const("u")
        return App(Const("varr"), _gen_term(rng, "B", depth - 1))
    if key == "loop":
        return Const("l0")
    if key == "path":
        return Const("e")
    raise AssertionError(key)


def _gen_term(rng: random.Random, key: str, depth: int):
    """A term of the keyed type, valid in checking position."""
    if key in ("A", "B"):
        return _gen_neutral(rng, key, depth)
    if key == "AA":
        if depth == 0:
            return Const("h")
        pick = rng.randrange(4)
        if pick == 0:
            return Lam("x", Var("x"))
        if pick == 1:
            return Lam("x", App(Const("h"), Var("x")))
        if pick == 2:
            return Lam("x", App(Const("g"), App(Const("f"), Var("x"))))
        return Lam("x", _gen_term(rng, "A", depth - 1))
    if key == "AB":
        if depth == 0:
            return Const("f")
        if rng.randrange(2) == 0:
            return Lam("x", App(Const("f"), Var("x")))
        return Lam("x", _gen_term(rng, "B", depth - 1))
    if key == "BA":
        if depth == 0:
            return Const("g")
        if rng.randrange(2) == 0:
            return Lam("y", App(Const("h"), App(Const("g"), Var("y"))))
        return Lam("y", _gen_term(rng, "A", depth - 1))
    if key == "pair":
        if depth > 0 and rng.randrange(3) == 0:
            return _gen_neutral(rng, "pair", depth)
        inner = max(depth - 1, 0)
        return Pair(_gen_term(rng, "A", inner), _gen_term(rng, "B", inner))
    if key == "loop":
        return Refl() if rng.randrange(2) == 0 else Const("l0")
    if key == "path":
        return Const("e")
    if key == "arrow":
        if depth == 0:
            return Const("u")
        if rng.randrange(3) == 0:
            return _gen_neutral(rng, "arrow", depth)
        body = ExtApp(_gen_neutral(rng, "arrow", depth - 1), (T.IVar("t"),))
        return ExtLam(("t",), body)
    raise AssertionError(key)


def test_print_parse_round_trip():
    env = Environment()
    prelude = check_source(_PRELUDE, "prelude.sst", env)
    assert all(r.ok for r in prelude)
    types = {
        key: elaborate_term(parse_term(src), _KNOWN) for key, src in _TYPE_SOURCES.items()
    }
    rng = random.Random(20260817)
    keys = sorted(_TYPE_SOURCES)
    for i in range(500):
        key = keys[i % len(keys)]
        term = _gen_term(rng, key, rng.randint(0, 4))
        check(TypingContext(env=env), term, types[key])
        printed = print_term(term)
        again = elaborate_term(parse_term(printed), _KNOWN)
        assert alpha_equal(term, again), printed
        assert print_term(again) == printed

    manifest = load_manifest()
    library_env = Environment()
    originals = []
    for entry in manifest.entries:
        if entry.expects_error:
            continue
        src = (manifest.root / entry.filename).read_text()
        for r in check_source(src, entry.filename, library_env):
            assert r.ok
            if r.kind in ("def", "axiom"):
                originals.append(r)
    printed = "\n".join(print_declaration(r.name, r.ty, r.elaborated) for r in originals)
    results = check_source(printed, "printed.sst", Environment())
    assert len(results) == len(originals)
    for orig, again in zip(originals, results):
        assert again.ok, (orig.name, again.message)
        assert alpha_equal(again.ty, orig.ty), orig.name
        if orig.elaborated is not None:
            assert alpha_equal(again.elaborated, orig.elaborated), orig.name


# --- gate 8: the command-line contract -------------------------------------------

_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "kind": {"enum": ["def", "axiom", "check", "entails", "module"]},
                    "status": {"enum": ["ok", "error"]},
                    "diagnostics": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "severity": {"enum": ["error", "warning"]},
                                "message": {"type": "string"},
                                "span": {
                                    "type": "object",
                                    "properties": {
                                        "file": {"type": "string"},
                                        "line": {"type": "integer"},
                                        "col": {"type": "integer"},
                                    },
                                    "required": ["file", "line", "col"],
                                    "additionalProperties": False,
                                },
                            },
                            "required": ["severity", "message", "span"],
                            "additionalProperties": False,
                        },
                    },
                },
                "required": ["name", "kind", "status", "diagnostics"],
                "additionalProperties": False,
            },
        },
        "summary": {
            "type": "object",
            "properties": {
                "total": {"type": "integer"},
                "ok": {"type": "integer"},
                "errors": {"type": "integer"},
            },
            "required": ["total", "ok", "errors"],
            "additionalProperties": False,
        },
        "version": {"type": "string"},
    },
    "required": ["records", "summary", "version"],
    "additionalProperties": False,
}


def test_cli_contract(tmp_path, capsys):
    good = tmp_path / "good.sst"
    good.write_text("axiom A : U ;\naxiom a : A ;\ndef idA : A -> A := \\x. x ;\n")
    bad = tmp_path / "bad.sst"
    bad.write_text("axiom B : U ;\ndef broken : B := missing ;\n")

    assert run_cli(["check", str(good)]) == 0
    assert run_cli(["check", str(bad)]) == 1
    assert run_cli(["check", str(tmp_path / "absent.sst")]) == 2
    assert run_cli(["definitely-not-a-command"]) == 2
    capsys.readouterr()

    assert run_cli(["check", str(good), str(bad), "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, _REPORT_SCHEMA)
    assert report["summary"]["errors"] == 1

    manifest = load_manifest()
    library = tmp_path / "library.sst"
    chunks = [
        (manifest.root / e.filename).read_text()
        for e in manifest.entries
        if not e.expects_error
    ]
    library.write_text("\n".join(chunks))

    assert run_cli(["check", str(library), "--json"]) == 0
    plain = capsys.readouterr().out
    jsonschema.validate(json.loads(plain), _REPORT_SCHEMA)
    assert run_cli(["check", str(library), "--json", "--oracle"]) == 0
    with_oracle = capsys.readouterr().out
    assert with_oracle == plain
