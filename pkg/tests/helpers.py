"""Independent reference computations shared by the tests."""

import cmath
import math

import numpy as np
from hypothesis import strategies as st

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
points = st.builds(complex, finite, finite)
unit_coeff = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


def fit_circle(p, q, r):
    """Circumcircle by solving the 3x3 linear system x^2+y^2+Dx+Ey+F=0."""
    A = np.array([[z.real, z.imag, 1.0] for z in (p, q, r)])
    b = -np.array([abs(z) ** 2 for z in (p, q, r)])
    D, E, F = np.linalg.solve(A, b)
    c = complex(-D / 2, -E / 2)
    return c, math.sqrt(abs(c) ** 2 - F)


def mobius(a, b, c, d, z, conj=False):
    if conj:
        z = z.conjugate()
    return (a * z + b) / (c * z + d)


def well_separated(*zs, gap=1e-2):
    return all(abs(zs[i] - zs[j]) > gap for i in range(len(zs)) for j in range(i + 1, len(zs)))


def angle_ccw(u, v):
    return (cmath.phase(v / u)) % (2 * math.pi)


def cli_session(workdir):
    """Run every CLI command once inside workdir; returns {name: (exit, bytes)}.

    Commands read the files written by earlier ones, so a single call exercises
    gen -> realize -> validate/pressures/transform and gen -> pack.
    """
    from pathlib import Path

    from soapbubbles.cli import main

    w = Path(workdir)
    out = {}

    def run(name, *argv):
        target = w / name
        code = main([*map(str, argv), "-o", str(target)])
        out[name] = (code, target.read_bytes() if target.exists() else b"")

    run("k4.json", "gen", "k4")
    run("diamonds.json", "gen", "two_diamonds")
    run("random.json", "gen", "random_cubic", "-n", 10, "--seed", 3)
    run("k4.cluster.json", "realize", w / "k4.json", "--svg", w / "k4.svg")
    out["k4.svg"] = (0, (w / "k4.svg").read_bytes())
    run("diamonds.cluster.json", "realize", w / "diamonds.json")
    run("k4.report.json", "validate", w / "k4.cluster.json")
    run("k4.pressures.json", "pressures", w / "k4.cluster.json")
    run("k4.moved.json", "transform", w / "k4.cluster.json", 1, 0, 0.2, 0.1, 0.1, 0, 1, 0.3)
    run("k4.mirror.json", "transform", w / "k4.cluster.json", 1, 0, 0, 0, 0, 0, 1, 0, "--conjugate")
    run("random.packing.json", "pack", w / "random.json")
    run("random.packing.seeded.json", "pack", w / "random.json", "--seed", 5)
    return out
