"""Irreducible-module decomposition of the vertex space of J(n, k).

The adjacency/dual-adjacency pair embeds into two commuting su(2) copies of
sizes n - k and k; the vertex space splits into modules V_(j1, j2), each a
chain visiting at most one site per neighborhood of the base vertex.  Inside
a module the correlation projector has entries built purely from
Clebsch-Gordan coefficients, which is what makes n = 30 runs cheap: no object
ever grows past (k + 1) x (k + 1).

Doubled integers label all spins.  A module's chain rows are indexed by the
distance i, with m1 = (n - k)/2 - i and m2 = i - k/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scheme import GraphSpec, Vertex, neighborhood_size
from .specfn import cg_column
from .spectral import (
    CorrelationSpectrum,
    FillingSpec,
    SubsystemSpec,
    clamp_unit_interval,
    group_spectrum,
    level_labels_x2,
)

__all__ = [
    "ModuleLabel",
    "ModuleBlock",
    "HahnRelationReport",
    "enumerate_modules",
    "module_degeneracy",
    "level_degeneracy",
    "module_admissible_levels",
    "correlation_entries",
    "module_correlation_block",
    "single_neighborhood_eigenvalue",
    "assemble_spectrum",
    "check_hahn_algebra",
]


@dataclass(frozen=True)
class ModuleLabel:
    """An irreducible submodule V_(j1, j2) with its multiplicity.

    ``i_min..i_max`` is the contiguous run of neighborhoods the chain
    touches: i must satisfy |(n-k)/2 - i| <= j1 and |k/2 - i| <= j2.
    """

    j1_x2: int
    j2_x2: int
    degeneracy: int
    i_min: int
    i_max: int

    @property
    def dim(self) -> int:
        return self.i_max - self.i_min + 1

    @property
    def distances(self) -> range:
        return range(self.i_min, self.i_max + 1)

    def m1_x2(self, i: int, spec: GraphSpec) -> int:
        return (spec.n - spec.k) - 2 * i

    def m2_x2(self, i: int, spec: GraphSpec) -> int:
        return 2 * i - spec.k


@dataclass(frozen=True)
class ModuleBlock:
    """Restriction of the chopped correlation matrix to one module's rows."""

    label: ModuleLabel
    distances: tuple[int, ...]
    matrix: np.ndarray


def module_degeneracy(spec: GraphSpec, j1_x2: int, j2_x2: int) -> int:
    """Multiplicity D_(j1, j2) = (2j1+1)(2j2+1) C(n-k+1, s) C(k+1, t) / ((n-k+1)(k+1)).

    s and t are the depths (n-k)/2 - j1 and k/2 - j2.  The value is always a
    positive integer; exact integer division asserts that.
    """
    n, k = spec.n, spec.k
    s = ((n - k) - j1_x2) // 2
    t = (k - j2_x2) // 2
    num = (j1_x2 + 1) * (j2_x2 + 1) * math.comb(n - k + 1, s) * math.comb(k + 1, t)
    den = (n - k + 1) * (k + 1)
    d, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"non-integer multiplicity for (j1_x2={j1_x2}, j2_x2={j2_x2})")
    return d


def enumerate_modules(spec: GraphSpec) -> tuple[ModuleLabel, ...]:
    """All modules with positive multiplicity and a nonempty chain.

    Ordered by ascending (j1_x2, j2_x2).  Completeness holds exactly:
    sum over modules of dim * degeneracy = C(n, k).
    """
    n, k = spec.n, spec.k
    labels = []
    for j1_x2 in range((n - k) % 2, n - k + 1, 2):
        s = ((n - k) - j1_x2) // 2
        for j2_x2 in range(k % 2, k + 1, 2):
            t = (k - j2_x2) // 2
            i_min = max(s, t)
            i_max = min(n - k - s, k - t)
            if i_min > i_max:
                continue
            labels.append(
                ModuleLabel(j1_x2, j2_x2, module_degeneracy(spec, j1_x2, j2_x2), i_min, i_max)
            )
    labels.sort(key=lambda m: (m.j1_x2, m.j2_x2))
    if sum(m.dim * m.degeneracy for m in labels) != spec.vertex_count:
        raise ArithmeticError(f"module dimensions do not add up to C({n},{k})")
    return tuple(labels)


def module_admissible_levels(label: ModuleLabel, spec: GraphSpec) -> list[int]:
    """Doubled j labels coupled inside the module: max(|j1-j2|, n/2-k) .. j1+j2."""
    lo = max(abs(label.j1_x2 - label.j2_x2), spec.n - 2 * spec.k)
    return list(range(lo, label.j1_x2 + label.j2_x2 + 1, 2))


def level_degeneracy(j_x2: int, spec: GraphSpec) -> int:
    """Degeneracy D_j: total multiplicity of modules whose chain couples to j."""
    if j_x2 not in level_labels_x2(spec):
        raise ValueError(f"level j_x2={j_x2} outside {spec.n - 2 * spec.k}..{spec.n}")
    total = 0
    for label in enumerate_modules(spec):
        if abs(label.j1_x2 - label.j2_x2) <= j_x2 <= label.j1_x2 + label.j2_x2:
            total += label.degeneracy
    return total


def _column(label: ModuleLabel, spec: GraphSpec, j_x2: int) -> tuple[float, ...]:
    # cg_column orders by descending m1 = ascending i, starting at i_min.
    return cg_column(j_x2, label.j1_x2, label.j2_x2, spec.n - 2 * spec.k)


def correlation_entries(
    label: ModuleLabel, spec: GraphSpec, rows: list[int], levels_x2: list[int]
) -> np.ndarray:
    """Coefficient matrix G with G[r, c] = <row r | level c>; the block is G G^T."""
    g = np.zeros((len(rows), len(levels_x2)))
    for c, j_x2 in enumerate(levels_x2):
        col = _column(label, spec, j_x2)
        for r, i in enumerate(rows):
            g[r, c] = col[i - label.i_min]
    return g


def module_correlation_block(
    label: ModuleLabel, filling: FillingSpec, sub: SubsystemSpec, spec: GraphSpec
) -> ModuleBlock:
    """Correlation block sum_{j in SE} c^j_m1 c^j_m1' over the subsystem rows.

    Rows outside the module's chain are absent; an empty restriction yields a
    0 x 0 block.  The block is symmetric PSD with spectrum inside [0, 1].
    """
    rows = sorted(set(sub.distances) & set(label.distances))
    levels = [j for j in module_admissible_levels(label, spec) if j in filling.occupied]
    g = correlation_entries(label, spec, rows, levels)
    block = g @ g.T
    return ModuleBlock(label, tuple(rows), 0.5 * (block + block.T))


def single_neighborhood_eigenvalue(
    label: ModuleLabel, i: int, filling: FillingSpec, spec: GraphSpec
) -> float:
    """Closed-form eigenvalue sum_{j in SE} c^2 for the one-row block at distance i."""
    if i not in label.distances:
        raise ValueError(f"module ({label.j1_x2}, {label.j2_x2}) misses neighborhood {i}")
    total = 0.0
    for j_x2 in module_admissible_levels(label, spec):
        if j_x2 in filling.occupied:
            total += _column(label, spec, j_x2)[i - label.i_min] ** 2
    return float(min(total, 1.0))


def assemble_spectrum(
    spec: GraphSpec, filling: FillingSpec, sub: SubsystemSpec
) -> CorrelationSpectrum:
    """Correlation spectrum from per-module blocks, weighted by multiplicities.

    Each distinct block is diagonalized once; its eigenvalues enter with the
    module multiplicity.  The total multiplicity always equals the subsystem
    size.
    """
    pairs: list[tuple[float, int]] = []
    covered = 0
    for label in enumerate_modules(spec):
        block = module_correlation_block(label, filling, sub, spec)
        size = block.matrix.shape[0]
        if size == 0:
            continue
        covered += size * label.degeneracy
        for lam in clamp_unit_interval(np.linalg.eigvalsh(block.matrix)):
            pairs.append((float(lam), label.degeneracy))
    expected = sum(neighborhood_size(spec, i) for i in sub.distances)
    if covered != expected:
        raise ArithmeticError(f"module rows cover {covered} modes, subsystem has {expected}")
    return CorrelationSpectrum(group_spectrum(pairs))


@dataclass(frozen=True)
class HahnRelationReport:
    """Residuals of the two quadratic commutator relations on one module."""

    j1_x2: int
    j2_x2: int
    h2_residual: float
    h3_residual: float


def check_hahn_algebra(spec: GraphSpec, x0: Vertex | None = None) -> list[HahnRelationReport]:
    """Numerically test the commutator algebra closed by A and rescaled A*.

    With K1 = 2k(n-k)/(n(n-1)) A*, K2 = A and K3 = [K1, K2], evaluates

        [K2, K3] = a {K1, K2} + b K2 + c1 K1 + d1
        [K3, K1] = a K1^2     + b K1 + c2 K2 + d2

    per module, with a = -2, b = -2(n-2k)^2/n, c1 = -(n-2k) - 2n, c2 = -4 and
    central offsets d1, d2 built from the two Casimir values, which are
    constants on a module.  Residuals are reported, not raised: the module
    actions are basis independent, so the base vertex only tags the report.
    """
    from .heun import module_A_action, module_Astar_values  # runtime: heun imports us

    del x0  # relations are identical for every base vertex
    n, k = spec.n, spec.k
    a = -2.0
    b = -2.0 * (n - 2 * k) ** 2 / n
    c1 = -(n - 2 * k) - 2.0 * n
    c2 = -4.0
    reports = []
    for label in enumerate_modules(spec):
        k2 = module_A_action(label, spec)
        k1 = (2.0 * k * (n - k) / (n * (n - 1))) * np.diag(module_Astar_values(label, spec))
        k3 = k1 @ k2 - k2 @ k1
        cas1 = label.j1_x2 * (label.j1_x2 + 2) / 4.0
        cas2 = label.j2_x2 * (label.j2_x2 + 2) / 4.0
        d1 = -b * c1 / 4.0 + (n - 2 * k) * (cas1 - cas2)
        d2 = -2.0 * n + 4.0 * (cas1 + cas2) - b * b / 8.0 + b * n / 4.0
        eye = np.eye(label.dim)
        h2 = (k2 @ k3 - k3 @ k2) - (a * (k1 @ k2 + k2 @ k1) + b * k2 + c1 * k1 + d1 * eye)
        h3 = (k3 @ k1 - k1 @ k3) - (a * (k1 @ k1) + b * k1 + c2 * k2 + d2 * eye)
        reports.append(
            HahnRelationReport(
                label.j1_x2,
                label.j2_x2,
                float(np.max(np.abs(h2))),
                float(np.max(np.abs(h3))),
            )
        )
    return reports
