"""Command-line interface.

Subcommands::

    bilipjet expand --kind comp --order 3 [--substituted] [--json]
    bilipjet norm --profile u.csv --space "Lorentz:2,1"
    bilipjet verify [--suite default] [--grid 16] [--seed 0] [--out DIR]
    bilipjet boyd --space "Lp:2"

Exit codes: 0 success (no FAIL verdicts), 1 verification failure,
2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BilipjetError
from .spaces import norm, parse_space, read_profile_csv, boyd_lower_index
from .symbolic import (canonicalize, expand_composition, expand_inverse,
                       expand_product, format_expansion, to_json)
from .verify import VerifyConfig, run_suite, summarize


def _cmd_expand(args) -> int:
    if args.substituted and args.kind != "inv":
        print("error: --substituted only applies to --kind inv", file=sys.stderr)
        return 2
    if args.kind == "comp":
        expansion = expand_composition(args.order)
    elif args.kind == "inv":
        expansion = expand_inverse(args.order, substituted=args.substituted)
    else:
        expansion = expand_product(args.order)
    expansion = canonicalize(expansion)
    if args.json:
        print(json.dumps(to_json(expansion), indent=2, sort_keys=True))
    else:
        print(format_expansion(expansion))
        print(f"terms: {len(expansion.terms)}")
    return 0


def _cmd_norm(args) -> int:
    profile = read_profile_csv(args.profile)
    space = parse_space(args.space)
    value = norm(profile, space)
    print(repr(value))
    return 0


def _cmd_verify(args) -> int:
    config = VerifyConfig(suite=args.suite, grid=args.grid, seed=args.seed,
                          out_dir=args.out)
    reports = run_suite(config)
    if not args.quiet:
        print(summarize(reports))
    if args.out:
        print(f"reports written to {args.out}/verify.csv and verify.json")
    return 1 if any(r.verdict == "FAIL" for r in reports) else 0


def _cmd_boyd(args) -> int:
    space = parse_space(args.space)
    estimate, residual = boyd_lower_index(space)
    print(f"lower_boyd_index={estimate!r} fit_residual={residual!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilipjet",
        description="High-order derivative expansions of bilipschitz maps and "
                    "rearrangement-invariant norm checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print a derivative expansion")
    p.add_argument("--kind", choices=("comp", "inv", "prod"), required=True,
                   help="composition, inverse, or product rule")
    p.add_argument("--order", type=int, required=True, help="derivative order")
    p.add_argument("--substituted", action="store_true",
                   help="inverse expansion with lower orders substituted away")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("norm", help="norm of a step-profile CSV in a space")
    p.add_argument("--profile", required=True, help="CSV file: value,measure rows")
    p.add_argument("--space", required=True,
                   help="space spec, e.g. Lp:2, Lorentz:2,1, Orlicz:pow3, "
                        "Conv(Lp:2)^1.5, Linf")
    p.set_defaults(fn=_cmd_norm)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="default",
                   help="'default' or comma-separated check-id prefixes")
    p.add_argument("--grid", type=int, default=16, help="profile grid resolution")
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument("--out", default=None, help="directory for verify.csv/json")
    p.add_argument("--quiet", action="store_true", help="suppress per-check lines")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("boyd", help="estimate the lower Boyd index of a space")
    p.add_argument("--space", required=True, help="space spec")
    p.set_defaults(fn=_cmd_boyd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BilipjetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
