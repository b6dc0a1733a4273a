"""Grid and basis convergence of the two oracles for one Kratzer-Fues level.

    python scripts/convergence_study.py --A 1 --B 1 --l 0 --n 1
"""
import argparse
from dataclasses import dataclass

import numpy as np

from kratzer_spectra import frobenius as fr, laguerre as lg, oracle
from kratzer_spectra.model import RadialProblem


@dataclass
class ConvergenceConfig:
    A: float = 1.0
    B: float = 1.0
    l: int = 0
    n: int = 1
    grid_points: tuple = (1_000, 2_000, 4_000, 8_000, 16_000)
    basis_sizes: tuple = (5, 10, 20, 40)
    lambda_factor: float = 1.5


def main(cfg: ConvergenceConfig):
    p = RadialProblem.from_params(cfg.A, cfg.B, cfg.l)
    exact = fr.closed_form_energy(p, cfg.n)
    print(f"A={cfg.A} B={cfg.B} l={cfg.l} n={cfg.n}  closed form E = {exact:.15f}")

    print("\nfinite differences (3-point stencil, Richardson)")
    R = oracle.default_box(p, cfg.n)
    prev = None
    for M in cfg.grid_points:
        grid = oracle.GridSpec(R, M)
        ex = oracle.extrapolate(p, cfg.n, grid)
        err = ex.coarse - exact
        ratio = "" if prev is None else f"{prev / err:6.3f}"
        print(f"  M={M:6d} h={grid.h:.2e}  raw err {err: .3e}  extrapolated err "
              f"{ex.energy - exact: .3e}  ratio {ratio}")
        prev = err

    print(f"\nGalerkin, lambda = {cfg.lambda_factor} x matched")
    for nb in cfg.basis_sizes:
        if nb <= cfg.n:
            continue
        spec = lg.BasisSpec.matched(p, cfg.n, nb, cfg.lambda_factor)
        e = lg.galerkin_energy(p, cfg.n, spec)
        print(f"  N_b={nb:3d}  E - exact = {e - exact: .3e}")
    spec = lg.BasisSpec.matched(p, cfg.n, cfg.basis_sizes[-1])
    print(f"  matched spec, N_b={spec.size}: E - exact = {lg.galerkin_energy(p, cfg.n, spec) - exact: .3e}")
    prof = lg.band_profile(lg.build_galerkin(lg.BasisSpec.matched(p, cfg.n, 8), p), exact)
    print("\nband profile of H - E S (matched spec, N_b=8):", np.array2string(prof, precision=2))


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    for name in ("A", "B"):
        parser.add_argument(f"--{name}", type=float, default=getattr(ConvergenceConfig, name))
    parser.add_argument("--l", type=int, default=ConvergenceConfig.l)
    parser.add_argument("--n", type=int, default=ConvergenceConfig.n)
    a = parser.parse_args()
    main(ConvergenceConfig(A=a.A, B=a.B, l=a.l, n=a.n))
