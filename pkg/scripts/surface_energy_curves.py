"""e_b against |h_N| for the five surface-energy panels, with finite-N points.

Each panel keeps h_1 fixed and scans beta along the direction of its first
h_N point.  The reference fields get a BAE estimate from the two
largest chain lengths (Richardson in 1/N).
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from hubbard_surface import ModelParams, derive_constants
from hubbard_surface.bae import BaeConvergenceError, solve
from hubbard_surface.model import CriticalLineError
from hubbard_surface.thermo import bulk_energy_density, surface_energy

PANELS = {
    "a": ((0.13, 0, 0), [(0.12, 0, 0.1204), (0.22, 0, 0.2184), (0.32, 0, 0.3164), (0.12, 0, 0.5572), (0.42, 0, 0.5220)]),
    "b": ((0.13, 0, 0), [(0.12, 0, 0.7505), (0.42, 0, 0.6573), (0.42, 0, 0.7733), (0.42, 0, 0.7159), (0.42, 0, 0.8185)]),
    "c": ((0.84, 0, 0), [(0.5723, 0, 0.53), (0.3315, 0, 0.75), (0.78, 0, 0.3378), (0.81, 0, 0.3688), (0.85, 0, 0.3774)]),
    "d": ((0.76, 0, 0), [(0.32, 0, 1.1876), (0.32, 0, 1.2909), (0.32, 0, 1.3937), (0.32, 0, 1.4962), (0.32, 0, 1.5983)]),
    "e": ((1.03, 0, 0), [(0.47, 0, 1.0496), (0.47, 0, 1.1583), (0.47, 0, 1.2655), (0.47, 0, 1.3717), (0.47, 0, 1.4770)]),
}


@dataclass
class CurveConfig:
    U: float = 1.3
    panels: str = "abcde"
    n_curve: int = 41
    sizes: list[int] = field(default_factory=lambda: [256, 512])


def curve(cfg: CurveConfig, h1, hNs):
    betas = [float(np.linalg.norm(h)) for h in hNs]
    lo, hi = min(betas) - 0.05, max(betas) + 0.05
    direction = np.asarray(hNs[0], float) / betas[0]
    for b in np.linspace(max(lo, 0.02), hi, cfg.n_curve):
        try:
            yield b, surface_energy(derive_constants(ModelParams(cfg.U, h1, tuple(b * direction)))).e_b
        except CriticalLineError:
            continue


def reference_point(cfg: CurveConfig, e_inf, h1, hN):
    dc = derive_constants(ModelParams(cfg.U, h1, hN))
    eb = surface_energy(dc).e_b
    n1, n2 = cfg.sizes[-2:]
    try:
        v1 = solve(dc, n1).E_hom - n1 * e_inf
        v2 = solve(dc, n2).E_hom - n2 * e_inf
        rich = (n2 * v2 - n1 * v1) / (n2 - n1)
    except BaeConvergenceError:
        v2 = rich = math.nan
    return dc, eb, v2, rich


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--panels", default="abcde")
    ap.add_argument("--n-curve", type=int, default=41)
    args = ap.parse_args(argv)
    cfg = CurveConfig(panels=args.panels, n_curve=args.n_curve)
    e_inf = bulk_energy_density(cfg.U)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["panel", "kind", "beta", "region", "e_b", "e_b_finite_N", "e_b_richardson"])
    for key in cfg.panels:
        h1, hNs = PANELS[key]
        for b, eb in curve(cfg, h1, hNs):
            w.writerow([key, "curve", f"{b:.6f}", "", f"{eb:.10f}", "", ""])
        for hN in hNs:
            dc, eb, fin, rich = reference_point(cfg, e_inf, h1, hN)
            w.writerow([key, "point", f"{dc.beta:.6f}", dc.region, f"{eb:.10f}", f"{fin:.10f}", f"{rich:.10f}"])


if __name__ == "__main__":
    main()
