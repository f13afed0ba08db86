"""Command-line driver: check files, query the tope and shape engines.

Subcommands:

  check FILE...     type-check modules; each file is one self-contained
                    module checked from an empty environment, so files are
                    independent and may be checked concurrently (--jobs)
  tope entails Q    decide an entailment query "[vars] HYP => GOAL"
  shape tensor J K  Leibniz tensor of two standard inclusions
  shape subseteq    containment of two shapes, with a countermodel when it
                    fails; shapes are standard names or literals {t s | TOPE}
  shape eq          mutual containment of two shapes
  corpus            run the bundled library manifest and boundary sweep

Exit codes: 0 success, 1 a check or queried judgment failed, 2 usage or IO
error.  Reports go to stdout; in human mode diagnostics go to stderr.  The
machine report (--json) uses the fixed field names {name, kind, status,
diagnostics[{severity, message, span{file, line, col}}], summary}.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import sstt.shape as S
import sstt.tope as T
from sstt import __version__
from sstt.corpus import load_manifest, run_corpus
from sstt.kernel.context import Environment
from sstt.kernel.module import CheckResult
from sstt.surface.ast import SurfaceError
from sstt.surface.driver import check_source
from sstt.surface.parser import parse_tope_query
from sstt.surface.printer import print_declaration


def _format_model(model: dict[str, int]) -> str:
    return T.format_countermodel(T.CubeContext(tuple(model)), model)


def _diagnostic_message(r: CheckResult) -> str:
    message = f"[{r.code}] {r.message}" if r.code else r.message
    if r.countermodel is not None and "countermodel" not in r.message:
        message += f"; countermodel: {_format_model(r.countermodel)}"
    return message


def _record(filename: str, r: CheckResult) -> dict:
    diagnostics = []
    if not r.ok:
        file, line, col = r.span if r.span is not None else (filename, 0, 0)
        diagnostics.append(
            {
                "severity": "error",
                "message": _diagnostic_message(r),
                "span": {"file": file, "line": line, "col": col},
            }
        )
    return {"name": r.name, "kind": r.kind, "status": r.status, "diagnostics": diagnostics}


def _check_one(job: tuple[str, str]) -> list[CheckResult]:
    filename, src = job
    return check_source(src, filename, Environment())


def _cmd_check(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        print("sstt check: --jobs must be at least 1", file=sys.stderr)
        return 2
    jobs: list[tuple[str, str]] = []
    for name in args.files:
        try:
            jobs.append((name, Path(name).read_text()))
        except OSError as exc:
            reason = exc.strerror if exc.strerror else str(exc)
            print(f"sstt check: cannot read {name}: {reason}", file=sys.stderr)
            return 2
    if args.oracle:
        T.set_paranoid(True)
    try:
        if args.jobs > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                per_file = list(pool.map(_check_one, jobs))
        else:
            per_file = [_check_one(job) for job in jobs]
    except T.OracleDivergence as exc:
        print(f"sstt check: oracle divergence: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.oracle:
            T.set_paranoid(False)

    records = []
    errors = 0
    for (filename, _), results in zip(jobs, per_file):
        for r in results:
            records.append((filename, r))
            if not r.ok:
                errors += 1
    total = len(records)
    ok = total - errors

    if args.json:
        report = {
            "records": [_record(filename, r) for filename, r in records],
            "summary": {"total": total, "ok": ok, "errors": errors},
            "version": __version__,
        }
        print(json.dumps(report, indent=2))
        return 0 if errors == 0 else 1

    for filename, r in records:
        print(f"{filename}: {r.name}: {r.status}")
        if r.ok and args.dump and r.kind in ("def", "axiom"):
            print(print_declaration(r.name, r.ty, r.elaborated))
        if not r.ok:
            file, line, col = r.span if r.span is not None else (filename, 0, 0)
            print(f"{file}:{line}:{col}: error: {_diagnostic_message(r)}", file=sys.stderr)
    print(f"{total} checked, {ok} ok, {errors} errors")
    return 0 if errors == 0 else 1


def _cmd_tope_entails(args: argparse.Namespace) -> int:
    try:
        names, hyp, goal = parse_tope_query(args.query)
    except SurfaceError as exc:
        print(f"sstt tope: {exc.message}", file=sys.stderr)
        return 2
    ctx = T.CubeContext(names)
    try:
        holds = T.entails(ctx, hyp, goal)
    except T.TopeError as exc:
        print(f"sstt tope: {exc}", file=sys.stderr)
        return 2
    if holds:
        print("true")
        return 0
    print("false")
    model = T.find_countermodel(ctx, hyp, goal)
    if model is not None:
        print(f"countermodel: {T.format_countermodel(ctx, model)}")
    return 1


def _parse_shape_text(text: str) -> S.Shape:
    """A standard shape name, or a literal `{t s | TOPE}`."""
    text = text.strip()
    if not text.startswith("{"):
        return S.standard_shape(text)
    if not text.endswith("}"):
        raise S.ShapeError("shape literal must end with '}'")
    head, sep, tope_src = text[1:-1].partition("|")
    if not sep:
        raise S.ShapeError("shape literal needs '|' between the variables and the tope")
    names = tuple(head.replace(",", " ").split())
    binder = f"[{', '.join(names)}]"
    _, _, tope = parse_tope_query(f"{binder} TOP => {tope_src}")
    return S.Shape(T.CubeContext(names), tope)


def _cmd_shape_tensor(args: argparse.Namespace) -> int:
    try:
        j = S.standard_inclusion(args.j)
        k = S.standard_inclusion(args.k)
    except S.ShapeError as exc:
        print(f"sstt shape: {exc}", file=sys.stderr)
        return 2
    tensor = S.leibniz_tensor(j, k)
    print(f"over: [{', '.join(tensor.cube.names)}]")
    print(f"sub: {T.format_tope(tensor.sub)}")
    print(f"sup: {T.format_tope(tensor.sup)}")
    return 0


def _cmd_shape_rel(args: argparse.Namespace) -> int:
    try:
        a = _parse_shape_text(args.first)
        b = _parse_shape_text(args.second)
    except (S.ShapeError, SurfaceError) as exc:
        print(f"sstt shape: {exc}", file=sys.stderr)
        return 2
    if a.cube.names != b.cube.names:
        print(
            f"sstt shape: the shapes live over different cubes "
            f"[{', '.join(a.cube.names)}] and [{', '.join(b.cube.names)}]",
            file=sys.stderr,
        )
        return 2
    ctx = a.cube
    forward = T.entails(ctx, a.tope, b.tope)
    if args.relation == "subseteq":
        holds = forward
    else:
        holds = forward and T.entails(ctx, b.tope, a.tope)
    if holds:
        print("true")
        return 0
    print("false")
    if not forward:
        model = T.find_countermodel(ctx, a.tope, b.tope)
    else:
        model = T.find_countermodel(ctx, b.tope, a.tope)
    if model is not None:
        print(f"countermodel: {T.format_countermodel(ctx, model)}")
    return 1


def _cmd_corpus(args: argparse.Namespace) -> int:
    try:
        manifest = load_manifest()
    except (OSError, ValueError) as exc:
        print(f"sstt corpus: {exc}", file=sys.stderr)
        return 2
    report = run_corpus(manifest)
    for entry in report.entries:
        verdict = "ok" if entry.passed else "FAILED"
        print(f"{entry.filename}: expected {entry.expected}: {verdict}")
        if not entry.passed:
            print(f"{entry.filename}: {entry.diff}", file=sys.stderr)
    for failure in report.boundary_failures:
        print(
            f"boundary sweep: {failure.name} at {failure.points}: {failure.detail}",
            file=sys.stderr,
        )
    print(
        f"{report.declaration_count} declarations, "
        f"{report.boundary_checks} boundary points checked"
    )
    return 0 if report.all_ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sstt",
        description="Batch type checker for a simplicial type theory.",
    )
    parser.add_argument("--version", action="version", version=f"sstt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="type-check .sst modules")
    p_check.add_argument("files", nargs="+", metavar="FILE")
    p_check.add_argument("--json", action="store_true", help="machine-readable report")
    p_check.add_argument("--dump", action="store_true", help="print the elaborated core")
    p_check.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check every tope entailment against the brute-force oracle",
    )
    p_check.add_argument(
        "--jobs", type=int, default=1, metavar="N", help="check files concurrently"
    )
    p_check.set_defaults(handler=_cmd_check)

    p_tope = sub.add_parser("tope", help="tope layer queries")
    tope_sub = p_tope.add_subparsers(dest="tope_command", required=True)
    p_entails = tope_sub.add_parser("entails", help='decide "[vars] HYP => GOAL"')
    p_entails.add_argument("query")
    p_entails.set_defaults(handler=_cmd_tope_entails)

    p_shape = sub.add_parser("shape", help="shape layer queries")
    shape_sub = p_shape.add_subparsers(dest="shape_command", required=True)
    p_tensor = shape_sub.add_parser("tensor", help="Leibniz tensor of two inclusions")
    p_tensor.add_argument("j")
    p_tensor.add_argument("k")
    p_tensor.set_defaults(handler=_cmd_shape_tensor)
    for relation, blurb in (("subseteq", "shape containment"), ("eq", "shape equivalence")):
        p_rel = shape_sub.add_parser(relation, help=blurb)
        p_rel.add_argument("first")
        p_rel.add_argument("second")
        p_rel.set_defaults(handler=_cmd_shape_rel, relation=relation)

    p_corpus = sub.add_parser("corpus", help="run the bundled library manifest")
    p_corpus.set_defaults(handler=_cmd_corpus)
    return parser


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    return args.handler(args)


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
