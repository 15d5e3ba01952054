"""twistrank command line: construct, certify, grid, report"""
import argparse
import asyncio
import sys
from typing import Any, Dict, List, Optional

from src.certifier_registry import default_registry
from src.config import RunConfig, build_config
from src.models import RunReport
from src.observability import set_level
from src.pipeline import EXIT_INDETERMINATE, EXIT_USAGE, EXIT_VERIFIED, TwistRankPipeline
from src.policy import ConfigViolation
from src.report import load_report, render_text, replay_report, write_report


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _point(text: str) -> List[str]:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return parts


def cmd_construct(config: RunConfig) -> RunReport:
    return asyncio.run(TwistRankPipeline(config).construct())


def cmd_certify(config: RunConfig) -> RunReport:
    return asyncio.run(TwistRankPipeline(config).certify())


def cmd_grid(config: RunConfig) -> RunReport:
    return asyncio.run(TwistRankPipeline(config).grid())


def cmd_report(path: str, fmt: str = "text") -> int:
    """Validate a saved report, replay its certificates and print it"""
    report = load_report(path)
    replays, claims_hold = replay_report(report)
    if fmt == "json":
        write_report(report, "json")
    else:
        sys.stdout.write(render_text(report))
        for replay in replays:
            state = "ok" if replay.passed else "FAILED"
            sys.stdout.write(f"replay {replay.certifier}: {state} ({replay.detail})\n")
        sys.stdout.write(f"claims hold: {'yes' if claims_hold else 'no'}\n")
    if claims_hold and all(r.passed for r in replays):
        return EXIT_VERIFIED
    return EXIT_INDETERMINATE


COMMANDS = {"construct": cmd_construct, "certify": cmd_certify, "grid": cmd_grid}


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = (
        "s", "n", "f", "strict", "end_rank", "certifier", "M", "primes", "trials",
        "seed", "t1", "search_bound", "tol", "dependent_pair", "points",
        "grid_s", "grid_r", "grid_n", "out", "format",
    )
    values = {key: getattr(args, key, None) for key in keys}
    if getattr(args, "timing", False):
        values["include_timing"] = True
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistrank",
        description=(
            "Build the twist f(x_1)*z^s = f(x) of y^s = f(x) with its explicit points, "
            "verify it symbolically and certify the rank lower bound for s = 2, deg f = 3."
        ),
    )
    parser.add_argument("--log-level", default="INFO", help="Logging level for stderr")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with [construction] [certify] [grid] [output]")
    common.add_argument("--s", type=int, help="Cover degree s")
    common.add_argument("--n", type=int, help="Number of points / factors")
    common.add_argument(
        "--f",
        help='Coefficients of f, constant term first, e.g. "0,-1,0,1" for x^3 - x; rationals as p/q; write --f=-1,... when the first one is negative',
    )
    common.add_argument(
        "--strict",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Require n >= deg f (default on for construct and grid, off for certify)",
    )
    common.add_argument("--end-rank", dest="end_rank", type=int, help="Rank of End(J) used in the claimed bound")
    common.add_argument("--out", help="Write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], help="Report format (default json)")
    common.add_argument("--timing", action="store_true", help="Include timing spans and latencies")

    subparsers.add_parser("construct", parents=[common], help="Build and verify the construction")

    certifiers = default_registry().list_certifiers()
    certify = subparsers.add_parser(
        "certify",
        parents=[common],
        help="Certify the rank bound (s = 2, deg f = 3)",
        epilog="certifiers:\n" + "\n".join(f"  {c['name']}: {c['description']}" for c in certifiers),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    certify.add_argument("--certifier", choices=[c["name"] for c in certifiers] + ["both"])
    certify.add_argument("--M", type=int, help="Coefficient bound for refuted relations")
    certify.add_argument("--primes", type=_int_list, help="Comma-separated primes, e.g. 11,13,17")
    certify.add_argument("--trials", type=int, help="Specialization samples for the F_p certifier")
    certify.add_argument("--seed", type=int, help="Seed for the sampling")
    certify.add_argument("--t1", help="Rational value for x_1 in the height certifier")
    certify.add_argument("--search-bound", dest="search_bound", type=int, help="Point search bound on E_d")
    certify.add_argument("--tol", help='Height tolerance as a decimal string, e.g. "1e-8"')
    certify.add_argument(
        "--dependent-pair", dest="dependent_pair", type=_int_list,
        help="i,j: copy the specialization of P_i onto P_j (negative control)",
    )
    certify.add_argument(
        "--point", dest="points", type=_point, action="append",
        help="X,Y on E_d used instead of a search; repeat for each point after the first",
    )

    grid = subparsers.add_parser("grid", parents=[common], help="Construct and verify every (s, r, n) cell")
    grid.add_argument("--grid-s", dest="grid_s", type=_int_list, help="Values of s")
    grid.add_argument("--grid-r", dest="grid_r", type=_int_list, help="Degrees r of f")
    grid.add_argument("--grid-n", dest="grid_n", type=_int_list, help="Values of n")

    report = subparsers.add_parser("report", help="Validate a saved report and replay its certificates")
    report.add_argument("path", help="JSON report written by construct, certify or grid")
    report.add_argument("--format", choices=["json", "text"], default="text")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_level(args.log_level)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        if args.command == "report":
            return cmd_report(args.path, args.format)
        config = build_config(args.config, _overrides(args))
        report = COMMANDS[args.command](config)
        write_report(report, config.format, config.out)
        return report.exit_code
    except (ConfigViolation, ValueError) as e:
        print(f"twistrank: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
