"""Tolerance record shared by every module."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    geom: float = 1e-9          # absolute, unit-scale data
    angle: float = 1e-6         # |angle - 2pi/3| in validation
    curvature: float = 1e-6     # |k1 + k2 + k3| in validation
    pack: float = 1e-10         # angle-sum residual target of the packer
    tangency: float = 1e-8
    snap: float = 1e-12         # curvature * diameter below this -> line

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, geom=self.geom * factor, tangency=self.tangency * factor)


DEFAULT = Tolerances()
