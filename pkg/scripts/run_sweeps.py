"""Run the efficiency-versus-budget sweep for both shipped configs.

Writes one CSV per config into results/ (created if missing).  Trial
count and workers are adjustable; the defaults keep a laptop run under
a few minutes.
"""
import argparse
from pathlib import Path

from saturee.harness import ExperimentSpec, run_sweep, write_csv

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    out_dir = ROOT / "results"
    out_dir.mkdir(exist_ok=True)
    for name in ("default", "high_power"):
        spec = ExperimentSpec(
            kind="sweep",
            config_path=str(ROOT / "configs" / f"{name}.json"),
            trials=args.trials,
            seed=args.seed,
            workers=args.workers,
        )
        points = run_sweep(spec)
        out = out_dir / f"sweep_{name}.csv"
        write_csv(points, out)
        print(f"wrote {len(points)} rows to {out}")


if __name__ == "__main__":
    main()
