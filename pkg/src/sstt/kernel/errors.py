"""Kernel error type with a stable machine-readable class code."""

from __future__ import annotations

# The closed set of error classes surfaced to reports and to the corpus
# expectations.  Every KernelError carries exactly one of these.
ERROR_CLASSES = frozenset(
    {
        "syntax",
        "scope",
        "cube-scope",
        "type-mismatch",
        "not-synthesizable",
        "boundary-mismatch",
        "incompatible-cases",
        "non-inclusion",
        "shape-membership",
        "coverage",
        "arity",
        "resource",
    }
)


class KernelError(Exception):
    """A checking failure with an error class and an optional countermodel.

    The countermodel, when present, is a chain assignment (variable name to
    chain position) witnessing the tope entailment that failed.
    """

    def __init__(self, code: str, message: str, countermodel: dict[str, int] | None = None):
        if code not in ERROR_CLASSES:
            raise ValueError(f"unknown error class {code!r}")
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.countermodel = countermodel
