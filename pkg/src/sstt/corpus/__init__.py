"""The bundled formalization library and its runner.

The corpus is a directory of surface-language files listed in a manifest.
Files expected to check extend one shared environment in manifest order;
files expected to fail are checked against a copy of that environment, so
their scratch declarations never leak into later entries.  On top of the
per-file verdicts the runner sweeps a kernel invariant over everything
the positive files declared: evaluating any checked term of extension
type at the standard points of its subshape must reproduce the
prescribed boundary judgmentally.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product as iter_product
from pathlib import Path

import sstt.tope as T
from sstt.kernel.checker import def_equal, whnf
from sstt.kernel.context import Declaration, Environment, TypingContext
from sstt.kernel.module import CheckResult
from sstt.kernel.syntax import (
    App,
    Const,
    ExtApp,
    ExtType,
    Fst,
    Pi,
    Sigma,
    Snd,
    Term,
    fresh_name,
    subst,
    subst_cube,
)
from sstt.surface.driver import check_source
from sstt.surface.parser import parse_module

ERROR_PREFIX = "expected-error:"


@dataclass(frozen=True)
class ManifestEntry:
    """One manifest line: a file and what checking it should produce."""

    filename: str
    error_class: str | None = None

    @property
    def expects_error(self) -> bool:
        return self.error_class is not None

    @property
    def expected(self) -> str:
        if self.error_class is None:
            return "ok"
        return ERROR_PREFIX + self.error_class


@dataclass(frozen=True)
class CorpusManifest:
    root: Path
    entries: tuple[ManifestEntry, ...]


@dataclass(frozen=True)
class EntryReport:
    """Outcome of one manifest entry, with a diff when it diverged."""

    filename: str
    expected: str
    passed: bool
    results: tuple[CheckResult, ...]
    diff: str = ""


@dataclass(frozen=True)
class SweepFailure:
    name: str
    points: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class Report:
    entries: tuple[EntryReport, ...]
    declaration_count: int
    boundary_checks: int
    boundary_failures: tuple[SweepFailure, ...]

    @property
    def all_ok(self) -> bool:
        return all(e.passed for e in self.entries) and not self.boundary_failures


def corpus_dir() -> Path:
    """The corpus location: SSTT_CORPUS_DIR when set, else the bundled data."""
    override = os.environ.get("SSTT_CORPUS_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def load_manifest(root: Path | None = None) -> CorpusManifest:
    """Parse `manifest.txt` under root; `#` comments and blank lines skip."""
    if root is None:
        root = corpus_dir()
    entries: list[ManifestEntry] = []
    text = (root / "manifest.txt").read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"manifest.txt:{lineno}: expected 'FILE  EXPECTED', got {raw!r}")
        filename, expected = fields
        if expected == "ok":
            entries.append(ManifestEntry(filename))
        elif expected.startswith(ERROR_PREFIX) and len(expected) > len(ERROR_PREFIX):
            entries.append(ManifestEntry(filename, expected[len(ERROR_PREFIX):]))
        else:
            raise ValueError(
                f"manifest.txt:{lineno}: expected status 'ok' or "
                f"'{ERROR_PREFIX}CLASS', got {expected!r}"
            )
    return CorpusManifest(root=root, entries=tuple(entries))


def _clone(env: Environment) -> Environment:
    out = Environment()
    for decl in env:
        out.add(decl)
    return out


def _run_entry(entry: ManifestEntry, root: Path, env: Environment) -> EntryReport:
    src = (root / entry.filename).read_text()
    if entry.expects_error:
        results = check_source(src, entry.filename, _clone(env))
        errors = [r for r in results if not r.ok]
        if not errors:
            return EntryReport(
                entry.filename, entry.expected, False, tuple(results),
                diff="expected an error, every declaration checked",
            )
        wrong = [r for r in errors if r.code != entry.error_class]
        if wrong:
            diff = "; ".join(
                f"{r.name}: [{r.code}] where [{entry.error_class}] was expected"
                for r in wrong
            )
            return EntryReport(entry.filename, entry.expected, False, tuple(results), diff)
        return EntryReport(entry.filename, entry.expected, True, tuple(results))
    results = check_source(src, entry.filename, env)
    failed = [r for r in results if not r.ok]
    if failed:
        diff = "; ".join(f"{r.name}: [{r.code}] {r.message}" for r in failed)
        return EntryReport(entry.filename, entry.expected, False, tuple(results), diff)
    return EntryReport(entry.filename, entry.expected, True, tuple(results))


def run_corpus(manifest: CorpusManifest | None = None) -> Report:
    """Check every manifest entry in order, then sweep boundary strictness."""
    if manifest is None:
        manifest = load_manifest()
    env = Environment()
    entries = [_run_entry(entry, manifest.root, env) for entry in manifest.entries]
    checks, failures = boundary_sweep(env)
    return Report(
        entries=tuple(entries),
        declaration_count=len(env),
        boundary_checks=checks,
        boundary_failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# boundary-strictness sweep

_ENDPOINTS = (T.I0, T.I1)


def boundary_sweep(env: Environment) -> tuple[int, list[SweepFailure]]:
    """Check every declared term of extension type against its boundary.

    Each declaration's type is peeled: Pi domains are filled with fresh
    postulated constants, Sigma components are projected, and any
    extension type with a boundary reached this way is evaluated at every
    standard point (0/1 tuple) of its subshape, where the value must be
    judgmentally equal to the boundary instance.  Returns the number of
    point checks performed and the failures found (none, for a kernel
    that implements the boundary rule correctly).
    """
    checks = 0
    failures: list[SweepFailure] = []
    scratch = _clone(env)
    for decl in env:
        ctx = TypingContext(env=scratch)
        checks += _sweep(ctx, scratch, decl.name, Const(decl.name), decl.ty, failures)
    return checks, failures


def _sweep(
    ctx: TypingContext,
    scratch: Environment,
    name: str,
    term: Term,
    ty: Term,
    failures: list[SweepFailure],
) -> int:
    ty = whnf(ctx, ty)
    match ty:
        case Pi(x, dom, cod):
            taken = frozenset(d.name for d in scratch)
            c = fresh_name(x if x != "_" else "arg", taken)
            scratch.add(Declaration(c, dom))
            return _sweep(ctx, scratch, name, App(term, Const(c)), subst(cod, x, Const(c)), failures)
        case Sigma(x, fst_ty, snd_ty):
            n = _sweep(ctx, scratch, name, Fst(term), fst_ty, failures)
            n += _sweep(ctx, scratch, name, Snd(term), subst(snd_ty, x, Fst(term)), failures)
            return n
        case ExtType(vs, shape, subshape, family, boundary) if boundary is not None:
            checks = 0
            for pts in iter_product(_ENDPOINTS, repeat=len(vs)):
                m = dict(zip(vs, pts))
                if not ctx.entails(T.subst_tope(shape, m)):
                    continue
                if not ctx.entails(T.subst_tope(subshape, m)):
                    continue
                value = ExtApp(term, tuple(pts))
                prescribed = subst_cube(boundary, m)
                family_at = subst_cube(family, m)
                if not def_equal(ctx, value, prescribed, family_at):
                    coords = tuple(1 if p == T.I1 else 0 for p in pts)
                    failures.append(
                        SweepFailure(
                            name=name,
                            points=coords,
                            detail="evaluation differs from the prescribed boundary",
                        )
                    )
                checks += 1
            return checks
        case _:
            return 0


# ---------------------------------------------------------------------------
# symbol index


def symbol_index(manifest: CorpusManifest | None = None) -> dict[str, str]:
    """Map every def and axiom name in the positive files to its file.

    Raises ValueError if a name appears twice; the library promises each
    symbol exactly one home.
    """
    if manifest is None:
        manifest = load_manifest()
    index: dict[str, str] = {}
    for entry in manifest.entries:
        if entry.expects_error:
            continue
        src = (manifest.root / entry.filename).read_text()
        module = parse_module(src, entry.filename)
        for decl in module.decls:
            name = getattr(decl, "name", None)
            if name is None:
                continue
            if name in index:
                raise ValueError(
                    f"{name!r} is declared in both {index[name]} and {entry.filename}"
                )
            index[name] = entry.filename
    return index
