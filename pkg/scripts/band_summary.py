"""Print the saturation band for each shipped config.

Shows the closed-form bracket ends, the deterministic RZF calibration
point, and the interpolated operating power, in both W/Hz and dBm.
"""
from pathlib import Path

from saturee.satpower import compute_band
from saturee.sysmodel import load_config, transmit_power_to_dbm

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    for name in ("default", "high_power"):
        cfg, extras = load_config(ROOT / "configs" / f"{name}.json")
        band = compute_band(cfg, beta=extras.get("beta", 1.3))
        print(f"{name}: M={cfg.M} N={cfg.N} "
              f"Pc'={cfg.Pc_prime_dbm:.0f} dBm Po'={cfg.Po_prime_dbm:.0f} dBm")
        for label, p in (("p_lb", band.p_lb), ("p_rzf", band.p_rzf),
                         ("p_prop", band.p_prop), ("p_ub", band.p_ub)):
            print(f"  {label:7s} {p:.6e} W/Hz"
                  f"  ({transmit_power_to_dbm(p, cfg):7.2f} dBm)")
        print(f"  omega   {band.omega:.4f}  beta {band.beta}")


if __name__ == "__main__":
    main()
