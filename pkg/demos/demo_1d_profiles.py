"""1+1D recipe walkthrough.

Sweeps the shape exponent q and throat radius b0, synthesizes the
scattering-length and magnetic-field profiles a cesium condensate needs,
writes them as CSV, plots them when matplotlib is available, and prints
the slope feasibility audit for each case.

Run: python demos/demo_1d_profiles.py [--out DIR]
"""

import argparse
from pathlib import Path

from wormbec import (ShapeFunction, cesium_condensate, feasibility_1d,
                     sample_profile_1d, slope_metric)
from wormbec.profile1d import write_profile_csv

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

Q_VALUES = (2.0, 0.95, -0.5, -1.0)
B0_VALUES = (0.5, 1.0, 10.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demos/output", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    spec = cesium_condensate()
    print(f"cesium condensate: background sound speed "
          f"{spec.background_sound_speed * 1e3:.3f} mm/s at {spec.density:.0e} m^-3")
    print()

    if plt is not None:
        fig, axes = plt.subplots(2, len(Q_VALUES), figsize=(16, 7), sharex=True)

    for col, q in enumerate(Q_VALUES):
        for b0 in B0_VALUES:
            shape = ShapeFunction(b0=b0, q=q)
            samples = sample_profile_1d(shape, spec, x_max=20.0, step=0.1)
            write_profile_csv(samples, out / f"profile1d_q{q:g}_b0{b0:g}.csv")
            if plt is not None:
                xs = [s.x for s in samples]
                axes[0, col].plot(xs, [s.a_over_100a0 for s in samples],
                                  label=f"b0={b0:g}")
                axes[1, col].plot(xs, [s.b_gauss for s in samples])
        if plt is not None:
            axes[0, col].set_title(f"q = {q:g}")
            axes[0, col].set_ylabel("a / (100 a0)")
            axes[1, col].set_ylabel("B (G)")
            axes[1, col].set_xlabel("x (um)")
            axes[0, col].legend(fontsize=8)

    if plt is not None:
        fig.tight_layout()
        fig.savefig(out / "profiles_1d.png", dpi=120)
        print(f"wrote {out / 'profiles_1d.png'}")

    print("\nslope audit (exclusion window 10 um, threshold 0.067 per um):")
    for q in Q_VALUES:
        for b0 in B0_VALUES:
            shape = ShapeFunction(b0=b0, q=q)
            audit = feasibility_1d(shape, spec, window=10.0)
            at_ten = slope_metric(shape, spec.resonance, 10.0)
            verdict = "feasible" if audit.feasible else "NOT feasible"
            print(f"  q={q:>5g} b0={b0:>4g}: max slope {audit.max_slope:8.4f}/um "
                  f"at |x|={audit.slope_at:g}, slope(x=10)={at_ten:8.4f}/um "
                  f"-> {verdict}")
    print("\nthe q=0.95, b0=1 case varies a/(100 a0) by 0.038 per micron at "
          "x=10, inside the demonstrated 0.067 per micron control")


if __name__ == "__main__":
    main()
