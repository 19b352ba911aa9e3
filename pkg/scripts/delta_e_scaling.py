"""delta_e = |E - E_hom| from exact diagonalisation and its power-law fit."""
import argparse
from dataclasses import dataclass, field

from hubbard_surface import ModelParams
from hubbard_surface.ed import delta_e, fit_power_law


@dataclass
class ScalingConfig:
    U: float = 1.3
    h1: tuple[float, float, float] = (0.13, 0.0, 0.0)
    hN: tuple[float, float, float] = (0.12, 0.0, 0.1204)
    sizes: list[int] = field(default_factory=lambda: [4, 6, 8, 10])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="4,6,8,10")
    ap.add_argument("--h1", default="0.13,0,0")
    ap.add_argument("--hN", default="0.12,0,0.1204")
    args = ap.parse_args(argv)
    vec = lambda s: tuple(float(x) for x in s.split(","))
    cfg = ScalingConfig(h1=vec(args.h1), hN=vec(args.hN), sizes=[int(s) for s in args.sizes.split(",")])
    p = ModelParams(cfg.U, cfg.h1, cfg.hN)
    pts = []
    print("N,E,E_hom,delta_e")
    for N in cfg.sizes:
        r = delta_e(p, N)
        pts.append((N, r.delta_e))
        print(f"{N},{r.E:.12f},{r.E_hom:.12f},{r.delta_e:.6e}")
    fit = fit_power_law(pts)
    print(f"# gamma={fit.gamma:.5f} tau={fit.tau:.4f} rms_log_residual={fit.rms_log_residual:.2e}")


if __name__ == "__main__":
    main()
