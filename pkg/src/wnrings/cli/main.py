"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

from ..errors import ConsistencyError, WnError
from .commands import COMMANDS, run_command
from .instance import parse_instance


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wnrings",
        description="Certified checks on multivaluation rings, their lattices and local sentences.",
    )
    ap.add_argument("--instance", required=True, help="instance file")
    ap.add_argument("--machine", action="store_true", help="line-oriented CHECK output")
    ap.add_argument("--seed", type=int, default=0, help="sampling order only; results do not depend on it")
    ap.add_argument("--max-height", type=int, default=None, help="override the instance scope height")
    ap.add_argument("command", choices=sorted(list(COMMANDS) + ["suite"]), help="command to run")
    ap.add_argument("args", nargs="*", help="command arguments")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        with open(ns.instance, encoding="utf-8") as fh:
            inst = parse_instance(fh.read())
        if ns.max_height is not None and ns.max_height < 1:
            raise WnError("--max-height must be positive")
        report = run_command(inst, [ns.command, *ns.args], seed=ns.seed, max_height=ns.max_height)
    except ConsistencyError as exc:
        # an internal cross-check disagreed: a certified failure, not a usage error
        print(f"FAIL internal consistency: {exc}", file=sys.stderr)
        return 1
    except (WnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render(machine=ns.machine))
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
