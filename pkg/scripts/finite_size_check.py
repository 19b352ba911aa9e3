"""|E_hom(N) - N e_oo - e_b| over N for one parameter set per region.

Also prints the 1/N coefficient and a Richardson estimate of e_b from the
two largest sizes, to separate finite-size effects from errors in e_b.
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from hubbard_surface import constants_from_magnitudes
from hubbard_surface.bae import solve
from hubbard_surface.thermo import bulk_energy_density, surface_energy

CASES = [
    ("I", 0.13, (0.32, 0.0, 0.3164)),
    ("II", 0.13, (0.42, 0.0, 0.7733)),
    ("III", 0.84, (0.78, 0.0, 0.3378)),
    ("IV", 0.76, (0.32, 0.0, 1.2909)),
    ("V", 1.03, (0.47, 0.0, 1.2655)),
]


@dataclass
class FiniteSizeConfig:
    U: float = 1.3
    sizes: list[int] = field(default_factory=lambda: [64, 128, 256, 512])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="64,128,256,512")
    args = ap.parse_args(argv)
    cfg = FiniteSizeConfig(sizes=[int(s) for s in args.sizes.split(",")])
    e_inf = bulk_energy_density(cfg.U)
    print(f"e_inf({cfg.U}) = {e_inf:.15f}")
    for name, a, hN in CASES:
        dc = constants_from_magnitudes(cfg.U, a, float(np.linalg.norm(hN)))
        eb = surface_energy(dc).e_b
        vals = [solve(dc, N).E_hom - N * e_inf for N in cfg.sizes]
        devs = [v - eb for v in vals]
        n1, n2 = cfg.sizes[-2:]
        rich = (n2 * vals[-1] - n1 * vals[-2]) / (n2 - n1)
        print(
            f"{name:>3} alpha={a:.2f} beta={dc.beta:.4f} e_b={eb:+.8f}  "
            + " ".join(f"N={N}:{d:+.2e}" for N, d in zip(cfg.sizes, devs))
            + f"  N*dev={cfg.sizes[-1] * devs[-1]:+.3f}  richardson-e_b={rich - eb:+.1e}"
        )


if __name__ == "__main__":
    main()
