"""Command-line interface over the run store, server, and eval harness."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .evaluation import (
    DuplicateId,
    MatrixFormatError,
    load_matrix,
    render_report,
)
from .gateway import ENV_MODEL, GatewayConfigError
from .planning import EmptyRequirement
from .runs import RunOptions, RunStore, TerminalRun, UnknownRun, WrongStage


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a flag parsed before the subcommand from being clobbered
    # by the subparser's default, so both positions work.
    parser.add_argument("--runs-dir", default=argparse.SUPPRESS,
                        help="run storage directory (default: runs)")
    parser.add_argument("--codegen", choices=["llm", "template"],
                        default=argparse.SUPPRESS,
                        help="script generation path (default: llm)")
    parser.add_argument("--llm", choices=["live", "record", "replay"],
                        default=argparse.SUPPRESS, dest="gateway_mode",
                        help="gateway mode (default: live)")
    parser.add_argument("--transcript", type=Path, default=argparse.SUPPRESS,
                        help="transcript file for replay mode")
    parser.add_argument("--model", default=argparse.SUPPRESS,
                        help=f"model name (default ${ENV_MODEL} or gpt-4.1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unigen",
        description="Generate playable engine projects from natural-language"
                    " game requirements.",
    )
    _add_common_flags(parser)

    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        _add_common_flags(command)
        return command

    new = add_command("new", "create a run")
    new.add_argument("requirement")

    advance = add_command("advance", "execute the run's next stage")
    advance.add_argument("id")
    advance.add_argument("--auto", action="store_true",
                         help="keep advancing until Assembled or Failed")

    run = add_command("run", "create a run and advance to Assembled")
    run.add_argument("requirement")

    debug = add_command("debug", "send an error report, apply the patch")
    debug.add_argument("id")
    debug.add_argument("--message", required=True)
    debug.add_argument("--log", type=Path, default=None,
                       help="compiler log file to attach")

    serve = add_command("serve", "serve the HTTP API and console")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--console-dir", type=Path, default=None,
                       help="static console assets (default: ./frontend/dist if present)")

    eval_cmd = add_command("eval", "score an interaction matrix")
    eval_cmd.add_argument("--matrix", type=Path, required=True)
    eval_cmd.add_argument("--csv", action="store_true",
                          help="treat the matrix file as id,description,result rows")

    return parser


def _resolve_common(args: argparse.Namespace) -> None:
    args.runs_dir = getattr(args, "runs_dir", "runs")
    args.codegen = getattr(args, "codegen", "llm")
    args.gateway_mode = getattr(args, "gateway_mode", "live")
    args.transcript = getattr(args, "transcript", None)
    args.model = getattr(args, "model", None)


def _store(args: argparse.Namespace) -> RunStore:
    return RunStore(Path(args.runs_dir))


def _options(args: argparse.Namespace) -> RunOptions:
    if args.gateway_mode == "replay" and args.transcript is None:
        raise GatewayConfigError("replay mode requires --transcript")
    return RunOptions(
        codegen_mode=args.codegen,
        gateway_mode=args.gateway_mode,
        transcript=args.transcript,
        model=args.model or os.environ.get(ENV_MODEL),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _resolve_common(args)
    try:
        return _dispatch(args)
    except (EmptyRequirement, UnknownRun, TerminalRun, WrongStage,
            GatewayConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "new":
        run_id = _store(args).create_run(args.requirement, _options(args))
        print(run_id)
        return 0

    if args.command == "advance":
        run = _store(args).advance(args.id, auto=args.auto)
        print(f"{run.id} {run.stage}")
        if run.error:
            print(f"error at {run.error['stage']}: {run.error['message']}",
                  file=sys.stderr)
            return 1
        return 0

    if args.command == "run":
        store = _store(args)
        run_id = store.create_run(args.requirement, _options(args))
        run = store.advance(run_id, auto=True)
        print(f"{run.id} {run.stage}")
        if run.error:
            print(f"error at {run.error['stage']}: {run.error['message']}",
                  file=sys.stderr)
            return 1
        return 0

    if args.command == "debug":
        from .debugging import EmptyReport, PatchTargetsUnknownFile, StaleBase

        log_text = args.log.read_text(encoding="utf-8") if args.log else None
        try:
            summary = _store(args).debug_message(args.id, args.message, log_text)
        except (EmptyReport, StaleBase, PatchTargetsUnknownFile) as exc:
            print(f"debug failed: {exc}", file=sys.stderr)
            return 1
        changed = ", ".join(summary["changedPaths"])
        print(f"patch {summary['patchId']} applied: {changed}")
        return 0

    if args.command == "serve":
        import uvicorn

        from .server import create_app

        console_dir = args.console_dir
        if console_dir is None:
            default_dir = Path("frontend") / "dist"
            console_dir = default_dir if default_dir.is_dir() else None
        app = create_app(_store(args), console_dir=console_dir)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "eval":
        try:
            matrix = load_matrix(args.matrix, force_csv=args.csv)
        except (DuplicateId, MatrixFormatError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(render_report(matrix), end="")
        if any(e.result == "pending" for e in matrix.entries):
            return 1
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
