"""Realize every corpus graph and write cluster JSON, SVG and a one-line summary each.

    python3 scripts/render_corpus.py --out renders
"""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from soapbubbles import corpus
from soapbubbles.cluster import assign_pressures, validate
from soapbubbles.formats import SvgOptions, dump_cluster, write_svg
from soapbubbles.realize import realize

EXTRA = ["necklace_4", "diamond_ring_3", "prism_7"]


@dataclass
class RenderConfig:
    out: Path = Path("renders")
    svg_width: float = 600.0
    extra: bool = True


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=RenderConfig.out)
    parser.add_argument("--width", type=float, default=RenderConfig.svg_width)
    parser.add_argument("--no-extra", action="store_true", help="only the acceptance corpus")
    args = parser.parse_args()
    cfg = RenderConfig(args.out, args.width, not args.no_extra)
    cfg.out.mkdir(parents=True, exist_ok=True)

    graphs = dict(corpus.realizable_corpus())
    if cfg.extra:
        graphs.update({name: corpus.generate(name) for name in EXTRA})
    for name, G in graphs.items():
        t0 = time.perf_counter()
        C = realize(G)
        dt = time.perf_counter() - t0
        report = validate(C)
        P = assign_pressures(C)
        (cfg.out / f"{name}.cluster.json").write_bytes(dump_cluster(C))
        (cfg.out / f"{name}.svg").write_bytes(write_svg(C, SvgOptions(width=cfg.svg_width)))
        print(f"{name:24s} arcs={len(C.arcs):3d} passed={report.passed} "
              f"angle={report.max_angle_residual:.1e} curv={report.max_curvature_residual:.1e} "
              f"pressure_cycle={P.max_residual:.1e} {dt * 1000:.0f} ms")


if __name__ == "__main__":
    main()
