from pathlib import Path
from typing import List, Optional
import argparse
import json
import logging
import sys

from pydantic import ValidationError

from .api import IndistinguishabilityKernel
from .constants import (
    DEFAULT_JOBS, DEFAULT_MAX_CANDIDATES, DEFAULT_MAX_DEPTH, DEFAULT_TIMEOUT, TERM_SUFFIX, Command, ExitCode,
    OutputFormat,
)
from .exceptions import BcidxError
from .length import render_length
from .proof import render_proof
from .search import SearchBudget
from .terms import render_term

logger = logging.getLogger(__name__)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=Path, default=None, help="File listing conditionals, smallest first")
    common.add_argument("--format", type=OutputFormat.from_str, default=OutputFormat.TEXT,
                        help="Output format: text or json")
    common.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH, dest="max_depth")
    common.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES, dest="max_candidates")
    common.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="Search time budget in seconds")
    common.add_argument("--max-nested-cs", type=int, default=None, dest="max_nested_cs",
                        help="Cap on nested case studies (default: candidate pool size + 1)")
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Threads for the first case study")
    common.add_argument("--emit", type=Path, default=None, help="Write the found proof here")
    common.add_argument("-o", "--output", type=Path, default=None, help="Write the transformed proof here")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcidx", description="Check and search indistinguishability proofs")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)
    helps = {
        Command.NORMALIZE: "Print the normal form of a term",
        Command.CHECK: "Check a proof file",
        Command.SEARCH: "Search for a proof of a goal",
        Command.RESTR_ELIM: "Remove Restr nodes from a proof",
        Command.CANDIDATES: "Print the candidate pool of a goal or term",
        Command.LENGTH: "Print the length of a term",
    }
    for command, text in helps.items():
        sub = commands.add_parser(command.value, parents=[common], help=text)
        sub.add_argument("input", type=Path)
    return parser


def _emit(text: str, target: Optional[Path]) -> None:
    if target is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        target.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {target}")


def _report(args: argparse.Namespace, payload: dict, text: str) -> None:
    if args.format is OutputFormat.JSON:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _normalize(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    doc = kernel.read_term(source)
    rendered = render_term(kernel.normalize(doc.term))
    _report(args, {"normal_form": rendered}, rendered)
    return ExitCode.OK


def _length(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    doc = kernel.read_term(source)
    rendered = render_length(kernel.length(doc.term))
    _report(args, {"length": rendered}, rendered)
    return ExitCode.OK


def _check(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    doc = kernel.read_proof(source)
    verdict = kernel.check(doc.derivation)
    _report(args, json.loads(verdict.model_dump_json()), verdict.describe())
    return ExitCode.OK if verdict.accepted else ExitCode.REJECTED


def _restr_elim(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    doc = kernel.read_proof(source)
    verdict = kernel.check(doc.derivation)
    if not verdict.accepted:
        _report(args, json.loads(verdict.model_dump_json()), verdict.describe())
        return ExitCode.REJECTED
    result = kernel.eliminate_restr(doc.derivation)
    _emit(render_proof(result, doc.context), args.output)
    return ExitCode.OK


def _candidates(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    if args.input.suffix == TERM_SUFFIX:
        pool = kernel.candidates(kernel.read_term(source).term)
    else:
        goal = kernel.read_goal(source).goal
        pool = kernel.candidates(goal.left, goal.right)
    lines = pool.render_lines()
    _report(args, {"candidates": lines, "truncated": pool.truncated}, "\n".join(lines))
    return ExitCode.OK


def _search(kernel: IndistinguishabilityKernel, args: argparse.Namespace, source: str) -> ExitCode:
    doc = kernel.read_goal(source)
    result = kernel.search(doc.goal)
    stats = result.stats.model_dump()
    if not result.found:
        _report(args, {"outcome": result.outcome.value, "stats": stats}, result.outcome.value)
        return ExitCode.REJECTED
    rendered = render_proof(result.derivation, doc.context)
    if args.emit is not None:
        _emit(rendered, args.emit)
        _report(args, {"outcome": result.outcome.value, "stats": stats, "proof": str(args.emit)},
                f"{result.outcome.value} ({result.derivation.node_count} nodes)")
    elif args.format is OutputFormat.JSON:
        _report(args, {"outcome": result.outcome.value, "stats": stats, "proof": rendered}, rendered)
    else:
        _emit(rendered, None)
    return ExitCode.OK


HANDLERS = {
    Command.NORMALIZE: _normalize,
    Command.CHECK: _check,
    Command.SEARCH: _search,
    Command.RESTR_ELIM: _restr_elim,
    Command.CANDIDATES: _candidates,
    Command.LENGTH: _length,
}


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    try:
        budget = SearchBudget(max_depth=args.max_depth, max_candidates=args.max_candidates, timeout=args.timeout,
                              max_nested_cs=args.max_nested_cs, jobs=args.jobs)
        kernel = IndistinguishabilityKernel(budget=budget)
        if args.order is not None:
            kernel.load_order(args.order)
        source = args.input.read_text(encoding="utf-8")
        return HANDLERS[Command.from_str(args.command)](kernel, args, source)
    except (BcidxError, ValidationError, ValueError) as e:
        logger.warning(f"Malformed input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.MALFORMED
    except OSError as e:
        logger.warning(f"Cannot read input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.MALFORMED


def main() -> None:
    try:
        code = run()
    except Exception:
        logger.exception("Unexpected error")
        raise
    sys.exit(code)


if __name__ == "__main__":
    main()
