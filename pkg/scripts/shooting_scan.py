"""Scan start amplitudes for the orbit that lands on the origin.

Each shot integrates until the orbit leaves {E > 0}; the side of the psi
axis where that happens classifies the amplitude as over- or undershooting.
A sign change brackets the critical amplitude, bisection refines it, and
the shot table plus the refined value are printed.

Usage:
    python3 shooting_scan.py [--lo 2] [--hi 12] [--step 1] [--tol 1e-6]
"""

import argparse

from vortexplane import classify_shot, scan_for_bracket, shoot_for_origin
from vortexplane.vorticity import constantin_model


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=2.0)
    ap.add_argument("--hi", type=float, default=12.0)
    ap.add_argument("--step", type=float, default=1.0)
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args()

    model = constantin_model()
    print(f"{'a':>8}  {'outcome':>8}  {'r_stop':>10}  {'min R':>12}")
    a = args.lo
    while a <= args.hi + 1e-12:
        rec = classify_shot(model, a)
        print(f"{a:8.3f}  {rec.outcome:>8}  {rec.r_stop:10.3f}  "
              f"{rec.min_radius:12.6f}")
        a += args.step

    a_lo, a_hi, _ = scan_for_bracket(model, args.lo, args.hi, args.step)
    print(f"\nbracket: [{a_lo:g}, {a_hi:g}]")
    result = shoot_for_origin(model, a_lo, a_hi, tol=args.tol)
    print(f"critical amplitude a* = {result.a_star:.10f}")
    print(f"closest approach to the origin: R = "
          f"{result.min_radius_achieved:.6e}")
    print(f"origin event fired: {result.origin_hit}")


if __name__ == "__main__":
    main()
