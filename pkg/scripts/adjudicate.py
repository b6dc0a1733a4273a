"""Run the AB-vs-Frobenius adjudication with both oracles and print a table.

    python scripts/adjudicate.py [--levels 4]
"""
import argparse
from dataclasses import dataclass, field

from kratzer_spectra import ab


@dataclass
class AdjudicationConfig:
    records: list = field(default_factory=lambda: [(1.0, 1.0, 0), (1.0, 0.0, 0), (2.0, 0.5, 1), (0.5, 1.0, 1)])
    levels: int = 3
    oracles: tuple = ("fd", "galerkin")


def main(cfg: AdjudicationConfig):
    sweep = [(A, B, l, k) for A, B, l in cfg.records for k in range(cfg.levels)]
    for name in cfg.oracles:
        report = ab.build_discrepancy_report(sweep, oracle=name)
        print(f"\noracle={name} tol={report.tol:g}")
        print(f"{'A':>4} {'B':>4} {'l':>2} {'k':>2} {'N':>3} {'E_ab':>12} {'E_corr':>12} "
              f"{'E_oracle':>12} {'|dE_ab|':>9} {'|dE_corr|':>9}  verdict")
        for r in report.rows:
            bound = "-" if r.level_bound is None else r.level_bound
            flag = "*" if r.exceeds_ab_bound else " "
            print(f"{r.A:4g} {r.B:4g} {r.l:2d} {r.k:2d} {bound!s:>3}{flag}{r.E_ab:12.8f} "
                  f"{r.E_ab_corrected:12.8f} {r.E_oracle:12.8f} {r.err_ab:9.2e} "
                  f"{r.err_ab_corrected:9.2e}  {r.verdict}")
        print("counts:", report.counts(), "  (* = k beyond AB's own bound N)")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--levels", type=int, default=AdjudicationConfig.levels)
    main(AdjudicationConfig(levels=parser.parse_args().levels))
