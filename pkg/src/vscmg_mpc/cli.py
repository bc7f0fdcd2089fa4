"""Command-line front door.

    vscmg-mpc run [CONFIG] [--preset NAME] [--seed S] [--out DIR] [--dump-ltv]
    vscmg-mpc validate CONFIG
    vscmg-mpc gridcount P_GAMMA P_W P_WS P_WG P_Q N

Exit codes: 0 success, 2 config error, 3 divergence, 4 placement failure
without a viable fallback.
"""

import argparse
import json
import sys

from . import harness
from .errors import ParseError, ValidationError


def _build_parser():
    parser = argparse.ArgumentParser(prog="vscmg-mpc",
                                     description="VSCMG attitude-control workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write trajectory/summary logs")
    p_run.add_argument("config", nargs="?", help="scenario JSON file")
    p_run.add_argument("--preset", choices=sorted(harness.PRESETS),
                       help="start from a named preset (config file, if given, overrides it)")
    p_run.add_argument("--seed", type=int, help="override the initial-condition seed")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.add_argument("--dump-ltv", action="store_true",
                       help="write the (A, B) matrices at every sampling instant")

    p_val = sub.add_parser("validate", help="check a scenario file and exit")
    p_val.add_argument("config")

    p_grid = sub.add_parser("gridcount",
                            help="frozen-model count of a gain-scheduling grid")
    for name in ("p_gamma", "p_w", "p_ws", "p_wg", "p_q", "n"):
        p_grid.add_argument(name, type=int)
    return parser


def _scenario_from_args(args):
    if args.config is None and args.preset is None:
        raise ValidationError("give a config file, a --preset, or both")
    if args.config is None:
        return harness.preset_scenario(args.preset)
    if args.preset is None:
        return harness.load_scenario(args.config)
    with open(args.config) as fh:
        raw = json.load(fh)
    raw["preset"] = args.preset
    return harness.config_from_dict(raw)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "gridcount":
        try:
            count = harness.grid_design_count(args.p_gamma, args.p_w, args.p_ws,
                                              args.p_wg, args.p_q, args.n)
        except ValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return harness.EXIT_CONFIG
        print(count)
        return harness.EXIT_OK

    if args.command == "validate":
        try:
            harness.load_scenario(args.config)
        except (ParseError, ValidationError) as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return harness.EXIT_CONFIG
        print("ok")
        return harness.EXIT_OK

    # run
    try:
        cfg = _scenario_from_args(args)
    except (ParseError, ValidationError, json.JSONDecodeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return harness.EXIT_CONFIG
    artifacts = harness.run(cfg, args.out, seed=args.seed, dump_ltv=args.dump_ltv)
    print(artifacts.summary_path.read_text(), end="")
    print(f"trajectory: {artifacts.csv_path}")
    return artifacts.exit_code


if __name__ == "__main__":
    sys.exit(main())
