"""Kernel unit tests: reduction, equality, bidirectional checking, modules."""

import pytest

from sstt import tope as T
from sstt.kernel import (
    App,
    AxiomDecl,
    Budget,
    CheckCmd,
    CheckResult,
    Const,
    Declaration,
    DefDecl,
    EntailsCmd,
    Environment,
    ExtApp,
    ExtLam,
    ExtType,
    Fst,
    IdType,
    J,
    KernelError,
    Lam,
    Module,
    Pair,
    Pi,
    Refl,
    Sigma,
    Snd,
    Split,
    TypingContext,
    Universe,
    Var,
    alpha_equal,
    check,
    check_module,
    def_equal,
    infer,
    normalize,
    subst,
    whnf,
)

U = Universe()
t, s = T.IVar("t"), T.IVar("s")
A = Const("A")
a0, b0 = Const("a0"), Const("b0")


def base_env() -> Environment:
    env = Environment()
    env.add(Declaration("A", U))
    env.add(Declaration("a0", A))
    env.add(Declaration("b0", A))
    return env


def ctx0() -> TypingContext:
    return TypingContext(env=base_env())


def boundary01(var: str, left, right) -> Split:
    v = T.IVar(var)
    return Split(((T.Eq(v, T.I0), left), (T.Eq(v, T.I1), right)))


def hom(ty, left, right, var: str = "t") -> ExtType:
    v = T.IVar(var)
    sub = T.Or(T.Eq(v, T.I0), T.Eq(v, T.I1))
    return ExtType((var,), T.TOP, sub, ty, boundary01(var, left, right))


def cotensor(ty, var: str = "t") -> ExtType:
    return ExtType((var,), T.TOP, T.BOT, ty, None)


# ---------------------------------------------------------------------------
# synthesis basics


def test_infer_universe_is_type_in_type():
    _, ty = infer(ctx0(), U)
    assert ty == U


def test_infer_variable():
    ctx = ctx0().bind("x", A)
    _, ty = infer(ctx, Var("x"))
    assert ty == A


def test_infer_unbound_variable():
    with pytest.raises(KernelError) as exc:
        infer(ctx0(), Var("nope"))
    assert exc.value.code == "scope"


def test_infer_bare_lambda_not_synthesizable():
    with pytest.raises(KernelError) as exc:
        infer(ctx0(), Lam("x", Var("x")))
    assert exc.value.code == "not-synthesizable"


def test_check_identity_function():
    idty = Pi("X", U, Pi("x", Var("X"), Var("X")))
    term = Lam("X", Lam("x", Var("x")))
    elab = check(ctx0(), term, idty)
    assert isinstance(elab, Lam) and elab.domain == U
    # stability: the elaborated term re-checks
    check(ctx0(), elab, idty)


def test_beta_and_projection_normalize():
    ctx = ctx0()
    assert def_equal(ctx, App(Lam("x", Var("x")), a0), a0, A)
    assert normalize(ctx, Fst(Pair(a0, b0))) == a0
    assert normalize(ctx, Snd(Pair(a0, b0))) == b0


def test_j_computation():
    ctx = ctx0()
    motive = Lam("y", Lam("q", A))
    assert normalize(ctx, J(motive, a0, Refl(a0))) == a0


def test_sym_via_j_checks():
    sym_ty = Pi(
        "X",
        U,
        Pi(
            "x",
            Var("X"),
            Pi(
                "y",
                Var("X"),
                Pi("p", IdType(Var("X"), Var("x"), Var("y")), IdType(Var("X"), Var("y"), Var("x"))),
            ),
        ),
    )
    sym = Lam(
        "X",
        Lam(
            "x",
            Lam(
                "y",
                Lam(
                    "p",
                    J(
                        Lam("y2", Lam("q", IdType(Var("X"), Var("y2"), Var("x")))),
                        Refl(),
                        Var("p"),
                    ),
                ),
            ),
        ),
    )
    elab = check(ctx0(), sym, sym_ty)
    check(ctx0(), elab, sym_ty)


def test_refl_needs_equal_endpoints():
    ctx = ctx0()
    check(ctx, Refl(), IdType(A, a0, a0))
    with pytest.raises(KernelError) as exc:
        check(ctx, Refl(), IdType(A, a0, b0))
    assert exc.value.code == "type-mismatch"


# ---------------------------------------------------------------------------
# extension types


def test_ext_type_formation():
    _, ty = infer(ctx0(), hom(A, a0, b0))
    assert ty == U


def test_ext_type_non_inclusion_rejected():
    bad = ExtType(("t",), T.Eq(t, T.I0), T.TOP, A, a0)
    with pytest.raises(KernelError) as exc:
        infer(ctx0(), bad)
    assert exc.value.code == "non-inclusion"
    assert exc.value.countermodel is not None


def test_ext_type_missing_boundary_rejected():
    bad = ExtType(("t",), T.TOP, T.Eq(t, T.I0), A, None)
    with pytest.raises(KernelError) as exc:
        infer(ctx0(), bad)
    assert exc.value.code == "boundary-mismatch"


def test_identity_arrow_checks():
    # constant section at a0 is an arrow from a0 to a0
    check(ctx0(), ExtLam(("t",), a0), hom(A, a0, a0))


def test_wrong_boundary_rejected_at_endpoint_branch():
    with pytest.raises(KernelError) as exc:
        check(ctx0(), ExtLam(("t",), b0), hom(A, a0, b0))
    assert exc.value.code == "boundary-mismatch"
    assert "t == 0" in exc.value.message


def test_ext_app_reduces_to_boundary():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    ctx = TypingContext(env=env)
    term = ExtApp(Const("g"), (T.I1,))
    _, ty = infer(ctx, term)
    assert ty == A
    assert def_equal(ctx, term, b0, A)
    assert normalize(ctx, term) == b0
    assert def_equal(ctx, ExtApp(Const("g"), (T.I0,)), a0, A)


def test_ext_beta():
    ctx = ctx0()
    section = ExtLam(("t",), a0)
    assert whnf(ctx.bind_cube(("u",)), ExtApp(section, (T.IVar("u"),))) == a0


def test_ext_eta():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    ctx = TypingContext(env=env)
    expanded = ExtLam(("u",), ExtApp(Const("g"), (T.IVar("u"),)))
    assert def_equal(ctx, expanded, Const("g"), hom(A, a0, b0))


def test_shape_membership_enforced():
    env = base_env()
    tri = ExtType(("t", "s"), T.Le(s, t), T.BOT, A, None)
    env.add(Declaration("f", tri))
    ctx = TypingContext(env=env, cube=T.CubeContext(("t", "s")))
    with pytest.raises(KernelError) as exc:
        infer(ctx, ExtApp(Const("f"), (t, s)))
    assert exc.value.code == "shape-membership"
    assert exc.value.countermodel is not None
    # inside the triangle the application is fine
    rctx = TypingContext(env=env, cube=T.CubeContext(("t", "s")), restriction=T.Le(s, t))
    _, ty = infer(rctx, ExtApp(Const("f"), (t, s)))
    assert ty == A


def test_ext_app_arity_checked():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    ctx = TypingContext(env=env)
    with pytest.raises(KernelError) as exc:
        infer(ctx, ExtApp(Const("g"), (T.I0, T.I1)))
    assert exc.value.code == "arity"


def test_ext_app_cube_scope():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    ctx = TypingContext(env=env)
    with pytest.raises(KernelError) as exc:
        infer(ctx, ExtApp(Const("g"), (T.IVar("nope"),)))
    assert exc.value.code == "cube-scope"


def test_point_congruence_under_eq_restriction():
    env = base_env()
    env.add(Declaration("g", cotensor(A)))
    cube = T.CubeContext(("t", "s"))
    eq_ctx = TypingContext(env=env, cube=cube, restriction=T.Eq(t, s))
    free_ctx = TypingContext(env=env, cube=cube)
    lhs = ExtApp(Const("g"), (t,))
    rhs = ExtApp(Const("g"), (s,))
    assert def_equal(eq_ctx, lhs, rhs, A)
    assert not def_equal(free_ctx, lhs, rhs, A)


# ---------------------------------------------------------------------------
# splits


def test_split_coverage_error():
    ctx = ctx0().bind_cube(("t",))
    sp = Split(((T.Eq(t, T.I0), a0),))
    with pytest.raises(KernelError) as exc:
        check(ctx, sp, A)
    assert exc.value.code == "coverage"


def test_split_incompatible_cases():
    ctx = ctx0().bind_cube(("t",)).restrict(T.Or(T.Eq(t, T.I0), T.TOP))
    sp = Split(((T.TOP, a0), (T.TOP, b0)))
    with pytest.raises(KernelError) as exc:
        check(ctx, sp, A)
    assert exc.value.code == "incompatible-cases"


def test_split_checks_and_permutation_is_equal():
    ctx = (
        ctx0()
        .bind_cube(("t",))
        .restrict(T.Or(T.Eq(t, T.I0), T.Eq(t, T.I1)))
    )
    sp1 = Split(((T.Eq(t, T.I0), a0), (T.Eq(t, T.I1), b0)))
    sp2 = Split(((T.Eq(t, T.I1), b0), (T.Eq(t, T.I0), a0)))
    e1 = check(ctx, sp1, A)
    e2 = check(ctx, sp2, A)
    assert def_equal(ctx, e1, e2, A)


def test_split_reduces_when_case_is_decided():
    ctx = ctx0().bind_cube(("t",)).restrict(T.Eq(t, T.I0))
    sp = Split(((T.Eq(t, T.I0), a0), (T.Eq(t, T.I1), b0)))
    assert whnf(ctx, sp) == a0


def test_stuck_split_equality_by_cases():
    # under TOP over [t,s] a linearity split is stuck but still compares
    cube = T.CubeContext(("t", "s"))
    ctx = TypingContext(env=base_env(), cube=cube)
    sp = Split(((T.Le(s, t), a0), (T.Le(t, s), a0)))
    assert def_equal(ctx, sp, a0, A)
    sp2 = Split(((T.Le(t, s), a0), (T.Le(s, t), a0)))
    assert def_equal(ctx, sp, sp2, A)


def test_type_level_split_checks():
    ctx = ctx0().bind_cube(("t",)).restrict(T.Or(T.Eq(t, T.I0), T.Eq(t, T.I1)))
    sp = Split(((T.Eq(t, T.I0), A), (T.Eq(t, T.I1), A)))
    check(ctx, sp, U)


def test_normalize_collapses_redundant_split():
    cube = T.CubeContext(("t", "s"))
    ctx = TypingContext(env=base_env(), cube=cube)
    sp = Split(((T.Le(s, t), a0), (T.Le(t, s), a0)))
    assert normalize(ctx, sp) == a0


# ---------------------------------------------------------------------------
# eta and equality structure


def test_eta_pi():
    env = base_env()
    env.add(Declaration("f", Pi("x", A, A)))
    ctx = TypingContext(env=env)
    expanded = Lam("x", App(Const("f"), Var("x")))
    assert def_equal(ctx, expanded, Const("f"), Pi("x", A, A))


def test_eta_sigma():
    env = base_env()
    env.add(Declaration("B", Pi("x", A, U)))
    sig = Sigma("x", A, App(Const("B"), Var("x")))
    env.add(Declaration("p", sig))
    ctx = TypingContext(env=env)
    expanded = Pair(Fst(Const("p")), Snd(Const("p")))
    assert def_equal(ctx, expanded, Const("p"), sig)


def test_def_equal_reflexive_and_monotone():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    cube = T.CubeContext(("t",))
    ctx = TypingContext(env=env, cube=cube)
    lhs = ExtApp(Const("g"), (t,))
    assert def_equal(ctx, lhs, lhs, A)
    # holds under TOP, still holds under a stronger restriction
    assert def_equal(ctx.restrict(T.Eq(t, T.I0)), lhs, a0, A)
    assert def_equal(ctx.restrict(T.And(T.Eq(t, T.I0), T.Le(t, t))), lhs, a0, A)


def test_def_equal_under_inconsistent_restriction_is_trivial():
    ctx = ctx0().bind_cube(("t",)).restrict(T.And(T.Eq(t, T.I0), T.Eq(t, T.I1)))
    assert def_equal(ctx, a0, b0, A)


def test_defined_constants_unfold_axioms_do_not():
    env = base_env()
    env.add(Declaration("twin", A, a0))  # def twin : A := a0
    ctx = TypingContext(env=env)
    assert def_equal(ctx, Const("twin"), a0, A)
    assert not def_equal(ctx, a0, b0, A)


# ---------------------------------------------------------------------------
# substitution and alpha equality


def test_subst_avoids_capture():
    inner = Lam("y", App(Var("x"), Var("y")))
    out = subst(inner, "x", Var("y"))
    assert alpha_equal(out, Lam("z", App(Var("y"), Var("z"))))
    assert not alpha_equal(out, Lam("y", App(Var("y"), Var("y"))))


def test_alpha_equal_ignores_annotations():
    assert alpha_equal(Lam("x", Var("x"), A), Lam("y", Var("y")))
    assert alpha_equal(Pair(a0, b0, Sigma("x", A, A)), Pair(a0, b0))
    assert alpha_equal(Refl(a0), Refl())


def test_alpha_equal_ext_binders():
    one = ExtLam(("t",), ExtApp(Var("g"), (t,)))
    two = ExtLam(("u",), ExtApp(Var("g"), (T.IVar("u"),)))
    assert alpha_equal(one, two)
    assert not alpha_equal(one, ExtLam(("t",), ExtApp(Var("g"), (T.I0,))))


# ---------------------------------------------------------------------------
# normalization properties


def test_normalize_idempotent_on_samples():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    cube = T.CubeContext(("t", "s"))
    ctx = TypingContext(env=env, cube=cube)
    samples = [
        App(Lam("x", Var("x")), a0),
        Fst(Pair(a0, b0)),
        ExtApp(Const("g"), (t,)),
        ExtLam(("u",), ExtApp(Const("g"), (T.IVar("u"),))),
        Split(((T.Le(s, t), a0), (T.Le(t, s), a0))),
        hom(A, a0, b0),
    ]
    for term in samples:
        once = normalize(ctx, term)
        twice = normalize(ctx, once)
        assert alpha_equal(once, twice)


def test_normalize_canonicalizes_points_under_eq():
    env = base_env()
    env.add(Declaration("g", cotensor(A)))
    cube = T.CubeContext(("t", "s"))
    ctx = TypingContext(env=env, cube=cube, restriction=T.Eq(t, s))
    lhs = normalize(ctx, ExtApp(Const("g"), (t,)))
    rhs = normalize(ctx, ExtApp(Const("g"), (s,)))
    assert alpha_equal(lhs, rhs)


def test_normalize_clause_wise_agrees_with_def_equal():
    env = base_env()
    env.add(Declaration("g", hom(A, a0, b0)))
    cube = T.CubeContext(("t",))
    restriction = T.Or(T.Eq(t, T.I0), T.Eq(t, T.I1))
    ctx = TypingContext(env=env, cube=cube, restriction=restriction)
    lhs = ExtApp(Const("g"), (t,))
    rhs = Split(((T.Eq(t, T.I0), a0), (T.Eq(t, T.I1), b0)))
    assert def_equal(ctx, lhs, rhs, A)
    for clause in T.dnf_clauses(restriction):
        ctope = T.and_all(list(clause)) if clause else T.TOP
        cctx = ctx.with_restriction(ctope)
        assert alpha_equal(normalize(cctx, lhs), normalize(cctx, rhs))


# ---------------------------------------------------------------------------
# modules


def test_check_module_and_dependency_skip():
    mod = Module(
        "m",
        (
            AxiomDecl("A", U),
            AxiomDecl("a0", A),
            DefDecl("good", A, Const("a0")),
            DefDecl("bad", A, Var("missing")),
            DefDecl("dependent", A, Const("bad")),
            DefDecl("independent", A, Const("good")),
        ),
    )
    results = check_module(mod)
    by_name = {r.name: r for r in results}
    assert by_name["good"].ok
    assert by_name["bad"].code == "scope"
    assert by_name["dependent"].code == "scope"
    assert by_name["independent"].ok


def test_check_module_duplicate_name():
    mod = Module("m", (AxiomDecl("A", U), AxiomDecl("A", U)))
    results = check_module(mod)
    assert results[0].ok and results[1].code == "scope"


def test_check_and_entails_commands():
    cube = T.CubeContext(("t", "s"))
    mod = Module(
        "m",
        (
            AxiomDecl("A", U),
            CheckCmd(Lam("x", Var("x")), Pi("x", Const("A"), Const("A"))),
            EntailsCmd(cube, T.TOP, T.Or(T.Le(s, t), T.Le(t, s))),
            EntailsCmd(cube, T.TOP, T.Le(s, t)),
        ),
    )
    results = check_module(mod)
    assert results[1].ok and results[1].kind == "check"
    assert results[2].ok and results[2].kind == "entails"
    assert not results[3].ok and "countermodel" in results[3].message


def test_resource_budget():
    env = base_env()
    deep = a0
    for _ in range(50):
        deep = App(Lam("x", Var("x")), deep)
    ctx = TypingContext(env=env, budget=Budget(30))
    with pytest.raises(KernelError) as exc:
        normalize(ctx, deep)
    assert exc.value.code == "resource"


def test_check_result_shape():
    mod = Module("m", (AxiomDecl("A", U),))
    (res,) = check_module(mod)
    assert isinstance(res, CheckResult)
    assert res.kind == "axiom" and res.status == "ok" and res.ty == U
