"""Command line entry point.

    dramhx run CONFIG [--seed N] [--samples N] [--out-dir DIR]
    dramhx run CONFIG --evaluate-only --design "Lbc,Bc,dtb,dsb,L,do,t"
    dramhx evaluate --config CONFIG --design "Lbc,Bc,dtb,dsb,L,do,t"
    dramhx --print-default-config
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from . import config as cfgmod
from .errors import (
    ConfigError,
    DesignError,
    InvalidCaseError,
    NoFeasibleDesignError,
    TemperatureCrossError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVALID_CASE = 3
EXIT_NO_FEASIBLE = 4
EXIT_NOT_CONVERGED = 5
EXIT_MODEL = 6


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dramhx",
                                description="Sample shell-and-tube exchanger designs with DRAM.")
    p.add_argument("--print-default-config", action="store_true",
                   help="write the bundled case configuration to stdout and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command")

    r = sub.add_parser("run", help="sample, summarise and decide")
    r.add_argument("config")
    r.add_argument("--seed", type=int)
    r.add_argument("--samples", type=int)
    r.add_argument("--chains", type=int)
    r.add_argument("--out-dir")
    r.add_argument("--evaluate-only", action="store_true",
                   help="size and cost the --design vector without sampling")
    r.add_argument("--design", help="7 comma-separated values (SI units, Bc as a fraction)")

    e = sub.add_parser("evaluate", help="size and cost one design")
    e.add_argument("--config", help="configuration file (default: bundled case)")
    e.add_argument("--design", required=True)
    return p


def _overrides(args) -> dict:
    dram, output = {}, {}
    if getattr(args, "seed", None) is not None:
        dram["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        dram["n_samples"] = args.samples
    if getattr(args, "chains", None) is not None:
        dram["chains"] = args.chains
    if getattr(args, "out_dir", None) is not None:
        output["dir"] = args.out_dir
    out = {}
    if dram:
        out["dram"] = dram
    if output:
        out["output"] = output
    return out


def _load(path, overrides):
    if path is None:
        return cfgmod.parse("", overrides)
    return cfgmod.load(path, overrides)


def _print_evaluation(config, design) -> None:
    from .pipeline import evaluate_design

    x = cfgmod.design_from_values(design)
    result, cost = evaluate_design(config, x)
    sizing = asdict(result)
    geometry = sizing.pop("geometry")
    print(json.dumps({"design": dict(zip(x.NAMES, x.as_array().tolist())),
                      "sizing": sizing, "geometry": geometry, "cost": asdict(cost)},
                     indent=2))


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")

    if args.print_default_config:
        sys.stdout.write(cfgmod.DEFAULT_CONFIG)
        return EXIT_OK
    if args.command is None:
        _parser().print_usage(sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "evaluate":
            config = _load(args.config, {})
            _print_evaluation(config, args.design)
            return EXIT_OK

        config = _load(args.config, _overrides(args))
        if args.evaluate_only:
            if not args.design:
                raise ConfigError("--evaluate-only needs --design")
            _print_evaluation(config, args.design)
            return EXIT_OK

        from .pipeline import run

        outcome = run(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvalidCaseError, TemperatureCrossError) as exc:
        print(f"invalid case: {exc}", file=sys.stderr)
        return EXIT_INVALID_CASE
    except NoFeasibleDesignError as exc:
        print(f"no feasible design: {exc}", file=sys.stderr)
        return EXIT_NO_FEASIBLE
    except DesignError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL

    d = outcome.decision
    for name, path in outcome.paths.items():
        print(f"wrote {path}")
    print(f"min-TAC design from {d.source}: TAC = {d.cost.TAC:.2f} $/yr")
    for ref, red in d.tac_reduction.items():
        print(f"  vs {ref}: TAC {d.reference_tac[ref]:.2f}, reduction {100 * red:.2f}%")
    if not outcome.converged:
        worst = max(outcome.rhat, key=outcome.rhat.get)
        print(f"chain did not reach a stable distribution (max R-hat {outcome.rhat[worst]:.3f}"
              f" for {worst})", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
