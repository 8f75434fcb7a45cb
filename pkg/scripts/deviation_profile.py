"""Write the unit-ball deviation profile for a few slit lengths as CSV."""

import argparse
import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from slitnorm.torus import VerticalSlitTorus
from slitnorm.unit_ball import deviation_profile


@dataclass
class ProfileConfig:
    rhos: list = field(default_factory=lambda: [Fraction(2, 5), Fraction(3, 10), Fraction(1, 7)])
    samples: int = 600
    out_dir: Path = Path("results")


def run(cfg: ProfileConfig) -> list:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for rho in cfg.rhos:
        path = cfg.out_dir / f"profile_rho_{rho.numerator}_{rho.denominator}.csv"
        prof = deviation_profile(VerticalSlitTorus(rho), cfg.samples)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["flattened_coord", "gap", "m", "n", "kind"])
            for s in prof:
                w.writerow([f"{s.coord:.12g}", f"{s.gap:.12g}", f"{s.m:.12g}", f"{s.n:.12g}", s.kind])
        peak = max(prof, key=lambda s: s.gap)
        print(f"rho={rho}: max gap {peak.gap:.4e} at coord {peak.coord:.4f} -> {path}")
        written.append(path)
    return written


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=600)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--rho", action="append", type=Fraction)
    a = ap.parse_args()
    cfg = ProfileConfig(samples=a.samples, out_dir=a.out_dir)
    if a.rho:
        cfg.rhos = a.rho
    run(cfg)
