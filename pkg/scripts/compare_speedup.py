"""Head-to-head of the one-shot scheme against the Dinkelbach baseline.

Times both over identical channel draws at a budget deep in the
saturation regime and prints the band, the mean-efficiency ratio, and
the wall-clock speedup.
"""
import argparse

from saturee.harness import compare_schemes, describe_report
from saturee.sysmodel import load_config, transmit_power_from_dbm


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/default.json")
    ap.add_argument("--budget-dbm", type=float, default=46.0)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    cfg, extras = load_config(args.config)
    budget = transmit_power_from_dbm(args.budget_dbm, cfg)
    report, _, _ = compare_schemes(cfg, budget, args.trials, args.seed,
                                   beta=extras.get("beta", 1.3))
    print(describe_report(report))


if __name__ == "__main__":
    main()
