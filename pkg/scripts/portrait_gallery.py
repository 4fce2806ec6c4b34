"""Render phase portraits for the three built-in vorticity models.

For each model a couple of orbits are integrated and drawn over the zero
level set of the energy; the modulated model also shows its sandwich
envelopes. SVGs land in --out.

Usage:
    python3 portrait_gallery.py [--out portraits] [--rmax 120]
"""

import argparse
from pathlib import Path

from vortexplane import IntegrationConfig, build_portrait_svg, integrate
from vortexplane.vorticity import (constantin_model, example_model,
                                   power_law_model)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("portraits"))
    ap.add_argument("--rmax", type=float, default=120.0)
    ap.add_argument("--amplitudes", type=str, default="2,5,10")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    amps = [float(tok) for tok in args.amplitudes.split(",") if tok]
    models = (constantin_model(), example_model(0.02), power_law_model(0.3))
    for model in models:
        trajs = [integrate(model, a, IntegrationConfig(r_max=args.rmax))
                 for a in amps]
        svg = build_portrait_svg(model, trajectories=trajs, clip_radius=6.0)
        path = args.out / f"portrait_{model.model_id}.svg"
        path.write_text(svg, newline="")
        print(f"wrote {path} ({len(svg)} bytes, {len(trajs)} orbits)")


if __name__ == "__main__":
    main()
