"""Recoil of a wavepacket after absorption, reduced to overlap coordinates.

A photon kick turns a packet phi into a recoiled packet that still
overlaps the original.  All this package ever needs from the kicked packet
is its decomposition over {phi, phi_perp}: a pair (a, b) with
a = <phi|recoiled phi> and b = +sqrt(1 - a^2).  The optional Gaussian model
derives the overlap scalar from a packet width and a recoil wavenumber.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfRangeError

#: slack accepted on |overlap| <= 1 and on the unit-circle residual
UNIT_TOLERANCE = 1e-12


def decompose_overlap(s: float) -> tuple[float, float]:
    """Coordinates (a, b) of a recoiled packet over {original, complement}.

    ``a`` equals the overlap scalar ``s`` and ``b = +sqrt(1 - s^2)``; the
    sign convention b >= 0 is part of the contract (any phase can be
    absorbed into the definition of the recoiled packet).
    """
    s = float(s)
    if abs(s) > 1.0 + UNIT_TOLERANCE:
        raise OutOfRangeError(f"overlap scalar {s!r} outside [-1, 1]")
    s = max(-1.0, min(1.0, s))
    return s, math.sqrt(max(0.0, 1.0 - s * s))


@dataclass(frozen=True)
class RecoilOverlaps:
    """Overlap coordinates (a, b) for atom A and (c, d) for atom B."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for name, lead, perp in (("a, b", self.a, self.b), ("c, d", self.c, self.d)):
            if perp < 0.0:
                raise ValueError(f"complement coordinate in ({name}) must be >= 0")
            residual = abs(lead * lead + perp * perp - 1.0)
            if residual > UNIT_TOLERANCE:
                raise ValueError(
                    f"({name}) must lie on the unit circle; residual {residual:.3e}"
                )

    @classmethod
    def from_scalars(cls, a: float, c: float) -> "RecoilOverlaps":
        """Build from the two overlap scalars <phi|recoiled phi>."""
        a, b = decompose_overlap(a)
        c, d = decompose_overlap(c)
        return cls(a=a, b=b, c=c, d=d)

    @classmethod
    def from_gaussian(
        cls, model_a: "GaussianRecoilModel", model_b: "GaussianRecoilModel | None" = None
    ) -> "RecoilOverlaps":
        """Build from Gaussian recoil models (atom B defaults to atom A's)."""
        sa = gaussian_recoil_overlap(model_a)
        sb = sa if model_b is None else gaussian_recoil_overlap(model_b)
        return cls.from_scalars(sa, sb)

    #: no recoil at all: the kicked packet equals the original
    @classmethod
    def none(cls) -> "RecoilOverlaps":
        return cls(a=1.0, b=0.0, c=1.0, d=0.0)


@dataclass(frozen=True)
class GaussianRecoilModel:
    """Gaussian packet of position standard deviation sigma_x kicked by k_recoil.

    Convention: sigma_x^2 is the variance of the position density |phi|^2.
    """

    sigma_x: float
    k_recoil: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma_x) and self.sigma_x > 0.0):
            raise ValueError(f"sigma_x must be finite and positive, got {self.sigma_x!r}")
        if not (math.isfinite(self.k_recoil) and self.k_recoil >= 0.0):
            raise ValueError(f"k_recoil must be finite and >= 0, got {self.k_recoil!r}")


def gaussian_recoil_overlap(model: GaussianRecoilModel) -> float:
    """Overlap magnitude |<phi|e^{ikx}|phi>| for a Gaussian packet.

    This is the characteristic function of the position density evaluated
    at the recoil wavenumber: exp(-k^2 sigma^2 / 2), always in (0, 1].
    """
    kx = model.k_recoil * model.sigma_x
    return math.exp(-0.5 * kx * kx)
