"""Reduced Bethe equations against exact diagonalisation for parallel fields."""
import argparse
from dataclasses import dataclass, field

from hubbard_surface import ModelParams, derive_constants
from hubbard_surface.bae import BaeConvergenceError, solve
from hubbard_surface.ed import sector_energies


@dataclass
class CompareConfig:
    U: float = 1.3
    pairs: list[tuple[float, float]] = field(
        default_factory=lambda: [(0.13, 0.45), (0.3, 0.84), (0.84, 0.3), (0.84, 0.84), (0.5, 0.95), (0.3, 1.5), (1.5, 2.0)]
    )
    sizes: list[int] = field(default_factory=lambda: [2, 4, 6, 8])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2,4,6,8")
    args = ap.parse_args(argv)
    cfg = CompareConfig(sizes=[int(s) for s in args.sizes.split(",")])
    print("alpha,beta,N,region,pattern,E_bae,E_ed,abs_diff")
    for a, b in cfg.pairs:
        p = ModelParams.parallel(cfg.U, a, b)
        dc = derive_constants(p)
        for N in cfg.sizes:
            e_ed = sector_energies(p, N)[N // 2]
            try:
                s = solve(dc, N)
                print(f"{a},{b},{N},{dc.region},{s.pattern},{s.E_hom:.14f},{e_ed:.14f},{abs(s.E_hom - e_ed):.2e}")
            except BaeConvergenceError:
                print(f"{a},{b},{N},{dc.region},unsolved,nan,{e_ed:.14f},nan")


if __name__ == "__main__":
    main()
