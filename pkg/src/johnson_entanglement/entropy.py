"""Von Neumann entropy of a free-fermion correlation spectrum and report sizes."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scheme import GraphSpec, neighborhood_size
from .spectral import CorrelationSpectrum, SubsystemSpec

__all__ = ["EntropyReport", "binary_entropy", "von_neumann", "report"]

LN2 = math.log(2.0)


def binary_entropy(lam: float) -> float:
    """-lam ln lam - (1-lam) ln(1-lam), with the 0 ln 0 = 0 convention."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mode occupation {lam} outside [0, 1]")
    if lam == 0.0 or lam == 1.0:
        return 0.0
    return -(lam * math.log(lam) + (1.0 - lam) * math.log1p(-lam))


def von_neumann(spectrum: CorrelationSpectrum) -> float:
    """Entanglement entropy in nats; each mode contributes at most ln 2."""
    return sum(mult * binary_entropy(lam) for lam, mult in spectrum.entries)


@dataclass(frozen=True)
class EntropyReport:
    entropy_nats: float
    subsystem_size: int
    boundary_size: int
    ratio_subsystem: float
    ratio_boundary: float


def _boundary_size(spec: GraphSpec, distances: list[int]) -> int:
    contiguous = distances == list(range(distances[0], distances[-1] + 1))
    if contiguous:
        return neighborhood_size(spec, distances[-1])
    return sum(neighborhood_size(spec, i) for i in distances)


def report(spec: GraphSpec, sub: SubsystemSpec, spectrum: CorrelationSpectrum) -> EntropyReport:
    """Entropy plus the area-law ratios S/|SV| and S/|boundary|.

    For a contiguous distance set the boundary is the outermost shell; for
    scattered shells every site is boundary.  Sizes come from the closed
    neighborhood-size formula, never from enumeration.
    """
    distances = sorted(sub.distances)
    size = sum(neighborhood_size(spec, i) for i in distances)
    boundary = _boundary_size(spec, distances)
    s = von_neumann(spectrum)
    if s < -1e-12:
        raise ArithmeticError("negative entropy")
    s = max(s, 0.0)
    if s > size * LN2 * (1.0 + 1e-12):
        raise ArithmeticError(f"entropy {s:g} exceeds the {size} ln 2 mode bound")
    return EntropyReport(s, size, boundary, s / size, s / boundary)
