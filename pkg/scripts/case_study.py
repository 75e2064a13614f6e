#!/usr/bin/env python3
"""Full sampling run on the bundled case with a short report.

    python3 scripts/case_study.py --samples 30000 --out results
"""

import argparse
import logging
import time

from dramhx import config as cfgmod
from dramhx.pipeline import ALL_NAMES, UNITS, run


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config")
    ap.add_argument("--samples", type=int, default=30000)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    over = {"dram": {"n_samples": args.samples}, "output": {"dir": args.out}}
    if args.seed is not None:
        over["dram"]["seed"] = args.seed
    cfg = cfgmod.load(args.config, over) if args.config else cfgmod.parse("", over)

    t0 = time.perf_counter()
    out = run(cfg)
    print(f"{sum(len(r.chain) for r in out.runs)} samples in {time.perf_counter() - t0:.1f} s,"
          f" extended: {out.extended}, converged: {out.converged}")
    print(f"acceptance by stage: {out.summary.acceptance}")
    print(f"{'var':<5}{'mean':>12}{'q05':>12}{'q95':>12}{'R-hat':>8}  unit")
    for name in ALL_NAMES:
        m = out.summary.marginals[name]
        print(f"{name:<5}{m.mean:12.5g}{m.q05:12.5g}{m.q95:12.5g}{out.rhat[name]:8.3f}  {UNITS[name]}")
    d = out.decision
    print(f"\nmin-TAC design ({d.source}): TAC {d.cost.TAC:.2f}")
    for ref, red in d.tac_reduction.items():
        print(f"  {ref}: TAC {d.reference_tac[ref]:.2f}, reduction {100 * red:.2f}%")
    for path in out.paths.values():
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
