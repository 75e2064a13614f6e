#!/usr/bin/env python3
"""DRAM on a correlated 2-D Gaussian: moments and adapted covariance."""

import argparse

import numpy as np

from dramhx import dram


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, default=0.9)
    ap.add_argument("--samples", type=int, default=50000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    cov = np.array([[1.0, args.rho], [args.rho, 1.0]])
    prec = np.linalg.inv(cov)
    cfg = dram.DramConfig(cov0=np.eye(2), n0=1000, seed=args.seed, n_samples=args.samples)
    chain = dram.run_chain(lambda x: -0.5 * x @ prec @ x, cfg, np.zeros(2))
    s = chain.samples[cfg.n0:]

    np.set_printoptions(precision=4, suppress=True)
    print("sample mean:", s.mean(axis=0))
    print("sample covariance:\n", np.cov(s, rowvar=False))
    print("adapted C_n / s_d:\n", chain.state.cov / cfg.scale)
    print("acceptance by stage:", chain.acceptance_rates())


if __name__ == "__main__":
    main()
