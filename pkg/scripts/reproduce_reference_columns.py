#!/usr/bin/env python3
"""Size and cost the three literature design columns on the bundled case.

Prints the model's A_o, shell/tube pressure drops and TAC next to the
published values.
"""

import argparse
import warnings

from dramhx import config as cfgmod
from dramhx.pipeline import evaluate_design

COLUMNS = {
    "single_objective": ((0.06, 0.25, 0.000381, 0.003, 10.7, 0.0381, 0.003405),
                         (37.14, 22600, 8600)),
    "multi_objective": ((0.079, 0.16515, 0.000204, 0.003279, 3.426, 0.019578, 0.001652),
                        (37.14, 20620, 8584)),
    "dram_mean": ((0.0956, 0.2310, 0.00024864, 0.0034, 4.292, 0.0234, 0.00205),
                  (37.16, 21632, 8697)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="case configuration (default: bundled)")
    args = ap.parse_args()
    cfg = cfgmod.load(args.config) if args.config else cfgmod.default_config()

    print(f"{'column':<18}{'A_o':>9}{'pub':>8}{'dP_s':>9}{'pub':>8}{'dP_t':>9}{'pub':>8}"
          f"{'P_st W':>9}{'TAC':>10}")
    for name, (x, (A, dps, dpt)) in COLUMNS.items():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r, c = evaluate_design(cfg, x)
        print(f"{name:<18}{r.A_o:9.2f}{A:8.2f}{r.dP_s:9.0f}{dps:8.0f}{r.dP_t:9.0f}{dpt:8.0f}"
              f"{r.P_st:9.1f}{c.TAC:10.2f}")


if __name__ == "__main__":
    main()
