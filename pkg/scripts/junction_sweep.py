"""Sweep random zero-sum junctions and report worst residuals of the equivalent conditions.

Also sweeps junctions with a nonzero curvature sum, to show that the
collinearity and triple-crossing residuals grow with it.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from soapbubbles.cluster import JunctionGeometry, check_junction_conditions


@dataclass
class SweepConfig:
    samples: int = 10_000
    seed: int = 0
    max_curvature: float = 5.0


def sweep(cfg: SweepConfig, offset: float) -> tuple[float, float, int]:
    rng = np.random.default_rng(cfg.seed)
    worst_col = worst_cross = 0.0
    held = 0
    for _ in range(cfg.samples):
        k1, k3 = rng.uniform(-cfg.max_curvature, cfg.max_curvature, 2)
        J = JunctionGeometry.from_curvatures(complex(*rng.uniform(-3, 3, 2)), (k1, offset - k1 - k3, k3),
                                             rng.uniform(0, 2 * math.pi))
        c = check_junction_conditions(J)
        worst_col = max(worst_col, c.collinearity_residual)
        worst_cross = max(worst_cross, c.crossing_residual)
        held += c.centers_collinear and c.two_triple_crossings
    return worst_col, worst_cross, held


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=SweepConfig.samples)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = parser.parse_args()
    cfg = SweepConfig(args.samples, args.seed)
    print(f"{'curvature sum':>14s} {'collinearity':>13s} {'crossing':>10s} {'both hold':>10s}")
    for offset in (0.0, 1e-9, 1e-6, 1e-3, 1e-1):
        col, cross, held = sweep(cfg, offset)
        print(f"{offset:14.0e} {col:13.1e} {cross:10.1e} {held:6d}/{cfg.samples}")


if __name__ == "__main__":
    main()
