#!/usr/bin/env python3
"""Write boundary polylines (CSV and JSON) for one d in each regime of interest.

The d values cover every qualitatively different picture: the triangle regime,
its endpoint, d = -1/3 (where C reaches D on the line x = 1), the transition
to the curved edge, a curved case and the degenerate triangle at d = 0.
"""

import argparse
from pathlib import Path

from sniep5 import region
from sniep5.construct import dumps

D_VALUES = {
    "triangle": -0.6,
    "half": -0.5,
    "quadrangle": -0.4,
    "third": -1.0 / 3.0,
    "pre_transition": -0.25,
    "transition": region.D_TRANS,
    "curved": -0.1,
    "zero": 0.0,
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="boundaries", help="output directory")
    p.add_argument("--samples", type=int, default=64)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, d in D_VALUES.items():
        pts = region.boundary_polyline(d, args.samples)
        (out / f"{name}.csv").write_text(region.polyline_to_csv(pts), encoding="utf-8")
        (out / f"{name}.json").write_text(dumps(region.polyline_to_json(d, pts)) + "\n", encoding="utf-8")
        print(f"{name:15s} d={d:+.6f}  {len(pts):3d} vertices  regime={int(region.regime(d))}")


if __name__ == "__main__":
    main()
