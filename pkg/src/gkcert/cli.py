"""Command-line interface.

Subcommands map one-to-one onto harness pipelines:

    gkcert scan        --config cfg.json [--prime-bound N]
    gkcert search-b    --config cfg.json [--prime-bound N]
    gkcert certify     --config cfg.json
    gkcert check-table [--config cfg.json]
    gkcert report      --config cfg.json

Common flags override the config file.  Exit code 0 means no invariant
violation occurred; violations (bad descriptors, exhausted search pools,
unknown pipelines) exit 1.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import GkcertError
from .harness import config_from_dict, load_config, run

PIPELINES = ("scan", "search-b", "certify", "check-table", "report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkcert",
        description=(
            "Exact-arithmetic certificates for the Gross-Kuz'min and "
            "Gross order-of-vanishing conjectures"
        ),
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in PIPELINES:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", help="JSON run configuration", default=None)
        p.add_argument("--prime-bound", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), action="append", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config) if args.config else config_from_dict({})
    except (OSError, GkcertError, ValueError) as exc:
        print(f"error: cannot load config: {exc}", file=sys.stderr)
        return 1
    config.pipelines = (args.command,)
    if args.prime_bound is not None:
        config.prime_bound = args.prime_bound
        if args.command == "search-b":
            config.search_prime_bound = args.prime_bound
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = args.out
    if args.format:
        config.formats = tuple(dict.fromkeys(args.format))
    try:
        result = run(config)
    except GkcertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in result.diagnostics:
        logging.getLogger("gkcert").info("%s", line)
    for line in result.violations:
        print(f"violation: {line}", file=sys.stderr)
    for path in result.outputs:
        print(path)
    print(f"{len(result.rows)} report rows, {len(result.certificates)} certificates")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
