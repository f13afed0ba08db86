"""Dependent type kernel: core terms, bidirectional checking, equality."""

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
    fresh_name,
    subst,
    subst_cube,
)
from sstt.kernel.context import Budget, Declaration, Environment, TypingContext
from sstt.kernel.checker import check, def_equal, infer, normalize, whnf
from sstt.kernel.module import (
    AxiomDecl,
    CheckCmd,
    CheckResult,
    DefDecl,
    EntailsCmd,
    Module,
    check_module,
)

__all__ = [
    "App",
    "AxiomDecl",
    "Budget",
    "CheckCmd",
    "CheckResult",
    "Const",
    "Declaration",
    "DefDecl",
    "EntailsCmd",
    "Environment",
    "ExtApp",
    "ExtLam",
    "ExtType",
    "Fst",
    "IdType",
    "J",
    "KernelError",
    "Lam",
    "Module",
    "Pair",
    "Pi",
    "Refl",
    "Sigma",
    "Snd",
    "Split",
    "Term",
    "TypingContext",
    "Universe",
    "Var",
    "alpha_equal",
    "check",
    "check_module",
    "def_equal",
    "free_cube_vars",
    "free_term_vars",
    "fresh_name",
    "infer",
    "normalize",
    "subst",
    "subst_cube",
    "whnf",
]
