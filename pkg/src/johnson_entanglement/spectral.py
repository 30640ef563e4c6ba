"""Single-particle energies, ground-state filling and the dense oracle.

The hopping Hamiltonian sum_i alpha_i A_i is simultaneously diagonalized by
the adjacency eigenspaces; theta_j = j(j+1) - (n-2k)^2/4 - n/2 labels them by
a (half-)integer j running from n/2 - k to n/2.  The oracle path builds the
eigenprojectors E_j, the ground-state correlation projector and its chop to a
vertex subset explicitly, at dense scale only, as the reference for the two
structured routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scheme import (
    CapacityError,
    GraphSpec,
    Vertex,
    adjacency_matrix,
    default_base_vertex,
    dense_cap,
    distances_from,
    neighborhood_size,
)
from .specfn import _dual_hahn_rational, _hyp2f1_rational

__all__ = [
    "CLAMP_SLACK",
    "GROUP_TOL",
    "HoppingProfile",
    "EnergyLevel",
    "EnergyTable",
    "FillingSpec",
    "SubsystemSpec",
    "CorrelationSpectrum",
    "level_labels_x2",
    "theta_eigenvalue",
    "energy_table",
    "energy_exponential",
    "fill_ground_state",
    "symmetric_eigen",
    "eigenprojectors_oracle",
    "chopped_correlation_oracle",
    "spectrum_oracle",
    "adjacency_via_polynomial",
    "clamp_unit_interval",
    "group_spectrum",
]

# Eigenvalues of a product of projectors may stray this far outside [0, 1]
# before it is treated as an upstream bug rather than roundoff.
CLAMP_SLACK = 1e-6
# Absolute tolerance when grouping eigenvalues into (value, multiplicity) runs.
GROUP_TOL = 1e-8


@dataclass(frozen=True)
class HoppingProfile:
    """Hopping amplitudes alpha_0..alpha_k by distance; missing tail is zero."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(a) for a in self.alphas):
            raise ValueError("hopping amplitudes must be finite")

    def padded(self, k: int) -> tuple[float, ...]:
        if len(self.alphas) > k + 1:
            raise ValueError(f"got {len(self.alphas)} amplitudes for diameter {k}")
        return self.alphas + (0.0,) * (k + 1 - len(self.alphas))


@dataclass(frozen=True)
class EnergyLevel:
    j_x2: int
    theta: float
    omega: float
    degeneracy: int


@dataclass(frozen=True)
class EnergyTable:
    """One row per adjacency eigenspace, ascending in j."""

    rows: tuple[EnergyLevel, ...]


@dataclass(frozen=True)
class FillingSpec:
    """The occupied single-particle levels, as a set of doubled j labels."""

    occupied: frozenset[int]


@dataclass(frozen=True)
class SubsystemSpec:
    """A set of distances from the base vertex; the subsystem is their union."""

    distances: frozenset[int]
    x0: Vertex

    def __post_init__(self):
        if not self.distances:
            raise ValueError("subsystem needs at least one distance")


@dataclass(frozen=True)
class CorrelationSpectrum:
    """(eigenvalue, multiplicity) pairs of a chopped correlation matrix."""

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        for lam, mult in self.entries:
            if not 0.0 <= lam <= 1.0:
                raise ValueError(f"eigenvalue {lam} outside [0, 1]")
            if mult < 1:
                raise ValueError("multiplicities must be positive")

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _, mult in self.entries)


def level_labels_x2(spec: GraphSpec) -> list[int]:
    """Doubled j labels n - 2k, n - 2k + 2, ..., n of the k + 1 eigenspaces."""
    return list(range(spec.n - 2 * spec.k, spec.n + 1, 2))


def theta_eigenvalue(j_x2: int, spec: GraphSpec) -> float:
    """Adjacency eigenvalue theta_j = j(j+1) - (n-2k)^2/4 - n/2."""
    n, k = spec.n, spec.k
    return (j_x2 * (j_x2 + 2) - (n - 2 * k) ** 2) / 4.0 - n / 2.0


def _theta_plus_k_exact(j_x2: int, spec: GraphSpec) -> Fraction:
    n, k = spec.n, spec.k
    return Fraction(j_x2 * (j_x2 + 2) - (n - 2 * k) ** 2, 4) + Fraction(2 * k - n, 2)


def energy_table(spec: GraphSpec, hop: HoppingProfile) -> EnergyTable:
    """Energies Omega_j of sum_i alpha_i A_i on every adjacency eigenspace.

    Omega_j = sum_i alpha_i (-1)^i C(k, i) R_i(theta_j + k; 0, n-2k, k), the
    degree-i dual Hahn expansion of A_i in A.  The alternating sum cancels
    heavily (e.g. fast-decaying hopping near the bottom level), so it is
    accumulated in exact rational arithmetic and rounded once.  Degeneracies
    come from the module count.  For alpha = (0, 1, 0, ...) this collapses to
    Omega = theta.
    """
    from .terwilliger import level_degeneracy  # runtime import; cycle otherwise

    n, k = spec.n, spec.k
    alphas = [Fraction(a) for a in hop.padded(k)]
    rows = []
    for j_x2 in level_labels_x2(spec):
        lam = _theta_plus_k_exact(j_x2, spec)
        omega = Fraction(0)
        for i, alpha in enumerate(alphas):
            if alpha == 0:
                continue
            sgn = -1 if i % 2 else 1
            omega += alpha * sgn * math.comb(k, i) * _dual_hahn_rational(i, lam, 0, n - 2 * k, k)
        rows.append(
            EnergyLevel(j_x2, theta_eigenvalue(j_x2, spec), float(omega), level_degeneracy(j_x2, spec))
        )
    return EnergyTable(tuple(rows))


def energy_exponential(spec: GraphSpec, c: float) -> EnergyTable:
    """Energies for alpha_i = exp(-c i), via the closed hypergeometric form.

    Omega_j = (1 - e^-c)^(n/2 - j) 2F1(n/2 - k - j, -n/2 + k - j; 1; e^-c);
    both numerator parameters are nonpositive integers, so the sum
    terminates.  Evaluated exactly over the rational value of e^-c, which
    makes it agree with :func:`energy_table` at alpha_i = exp(-c i) to the
    final rounding.
    """
    if c < 0:
        raise ValueError("decay constant must be nonnegative")
    from .terwilliger import level_degeneracy

    n, k = spec.n, spec.k
    z = Fraction(math.exp(-c))
    rows = []
    for j_x2 in level_labels_x2(spec):
        theta = theta_eigenvalue(j_x2, spec)
        a = (n - 2 * k - j_x2) // 2
        b = -(n - 2 * k + j_x2) // 2
        omega = (1 - z) ** ((n - j_x2) // 2) * _hyp2f1_rational(a, b, 1, z)
        rows.append(EnergyLevel(j_x2, theta, float(omega), level_degeneracy(j_x2, spec)))
    return EnergyTable(tuple(rows))


def fill_ground_state(
    table: EnergyTable, include_zero_modes: bool = False, tol: float = 1e-12
) -> FillingSpec:
    """Occupied set SE = { j : Omega_j < -tol }.

    Levels with |Omega_j| <= tol sit at a degenerate ground-state choice;
    they are left empty unless ``include_zero_modes`` asks for them.
    """
    occ = set()
    for row in table.rows:
        if row.omega < -tol or (include_zero_modes and abs(row.omega) <= tol):
            occ.add(row.j_x2)
    return FillingSpec(frozenset(occ))


def symmetric_eigen(m: np.ndarray, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of an exactly symmetric matrix, ascending order.

    The reconstruction Q diag(w) Q^T is checked against the input to
    1e-9 * max|M| before returning.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    limit = dense_cap(cap)
    if m.shape[0] > limit:
        raise CapacityError(f"matrix dimension {m.shape[0]} over the dense cap {limit}")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not exactly symmetric")
    w, q = np.linalg.eigh(m)
    scale = max(np.max(np.abs(m)), 1.0)
    err = np.max(np.abs(q @ np.diag(w) @ q.T - m))
    if err > 1e-9 * scale:
        raise ArithmeticError(f"eigendecomposition reconstruction error {err:g}")
    return w, q


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def eigenprojectors_oracle(spec: GraphSpec, cap: int | None = None) -> dict[int, np.ndarray]:
    """Eigenprojectors E_j of the adjacency matrix, keyed by doubled j.

    Eigenvalues are grouped to the nearest theta_j within 1e-6 of the
    spectral spread; anything further from every theta is an error.  Each
    E_j is exactly symmetric, and trace(E_j) recovers the degeneracy.
    """
    a = adjacency_matrix(1, spec, cap)
    w, q = symmetric_eigen(a, cap)
    labels = level_labels_x2(spec)
    thetas = np.array([theta_eigenvalue(j_x2, spec) for j_x2 in labels])
    tol = 1e-6 * (thetas.max() - thetas.min())
    projectors: dict[int, np.ndarray] = {}
    for pos, j_x2 in enumerate(labels):
        sel = np.abs(w - thetas[pos]) <= tol
        block = q[:, sel]
        projectors[j_x2] = _symmetrize(block @ block.T)
    grouped = sum(int(np.sum(np.abs(w - t) <= tol)) for t in thetas)
    if grouped != len(w):
        raise ArithmeticError("adjacency eigenvalue did not land near a unique theta_j")
    return projectors


def subsystem_indices(spec: GraphSpec, sub: SubsystemSpec, cap: int | None = None) -> np.ndarray:
    """Canonical-order indices of the vertices at the selected distances."""
    d = distances_from(sub.x0, spec, cap)
    mask = np.isin(d, sorted(sub.distances))
    return np.nonzero(mask)[0]


def chopped_correlation_oracle(
    spec: GraphSpec, filling: FillingSpec, sub: SubsystemSpec, cap: int | None = None
) -> np.ndarray:
    """The ground-state correlation projector restricted to the subsystem rows."""
    projectors = eigenprojectors_oracle(spec, cap)
    dim = spec.vertex_count
    chat = np.zeros((dim, dim))
    for j_x2 in sorted(filling.occupied):
        chat += projectors[j_x2]
    idx = subsystem_indices(spec, sub, cap)
    return _symmetrize(chat[np.ix_(idx, idx)])


def clamp_unit_interval(values: np.ndarray) -> np.ndarray:
    """Clamp eigenvalues to [0, 1]; beyond the slack window it is a hard error."""
    values = np.asarray(values, dtype=np.float64)
    if values.size and (values.min() < -CLAMP_SLACK or values.max() > 1.0 + CLAMP_SLACK):
        raise ValueError(
            f"spectrum [{values.min():g}, {values.max():g}] strays outside [0,1]: upstream bug"
        )
    return np.clip(values, 0.0, 1.0)


def group_spectrum(pairs, tol: float = GROUP_TOL) -> tuple[tuple[float, int], ...]:
    """Merge (value, multiplicity) pairs whose values agree within ``tol``.

    Values are sorted; a group is anchored at its first member and the
    representative is the multiplicity-weighted mean, snapped to an exact
    0 or 1 when it lands within ``tol`` of either endpoint.
    """

    def _snap(value: float) -> float:
        if abs(value) <= tol:
            return 0.0
        if abs(value - 1.0) <= tol:
            return 1.0
        return value

    items = sorted((float(lam), int(d)) for lam, d in pairs)
    out: list[tuple[float, int]] = []
    anchor = None
    acc = 0.0
    mult = 0
    for lam, d in items:
        if anchor is not None and lam - anchor <= tol:
            acc += lam * d
            mult += d
        else:
            if anchor is not None:
                out.append((_snap(acc / mult), mult))
            anchor = lam
            acc = lam * d
            mult = d
    if anchor is not None:
        out.append((_snap(acc / mult), mult))
    return tuple(out)


def spectrum_oracle(c: np.ndarray) -> CorrelationSpectrum:
    """Eigenvalues of a chopped correlation matrix, clamped and grouped."""
    c = np.asarray(c, dtype=np.float64)
    if not np.array_equal(c, c.T):
        raise ValueError("chopped correlation matrix must be exactly symmetric")
    w = clamp_unit_interval(np.linalg.eigvalsh(c))
    return CorrelationSpectrum(group_spectrum((lam, 1) for lam in w))


def adjacency_via_polynomial(i: int, spec: GraphSpec, cap: int | None = None) -> np.ndarray:
    """A_i rebuilt as the degree-i dual Hahn polynomial of A, as matrices.

    A_i = (-1)^i C(k, i) R_i(A + k; 0, n-2k, k), expanded termwise so the
    product sweeps matrix factors (l(n-2k+1) + l^2) - (A + k).
    """
    n, k = spec.n, spec.k
    if not 0 <= i <= k:
        raise ValueError(f"distance index {i} outside 0..{k}")
    a = adjacency_matrix(1, spec, cap)
    dim = a.shape[0]
    eye = np.eye(dim)
    shifted = a + k * eye
    total = np.eye(dim)
    prod = np.eye(dim)
    coef = 1.0
    for r in range(i):
        coef *= (r - i) / ((1.0 + r) * (r - k) * (r + 1.0))
        prod = prod @ ((r * (n - 2 * k + 1) + r * r) * eye - shifted)
        total = total + coef * prod
    sgn = -1.0 if i % 2 else 1.0
    return sgn * math.comb(k, i) * total


def subsystem_size(spec: GraphSpec, sub: SubsystemSpec) -> int:
    """Number of sites in the subsystem, from the neighborhood-size formula."""
    return sum(neighborhood_size(spec, i) for i in sub.distances)


def nearest_neighbor_profile(spec: GraphSpec) -> HoppingProfile:
    return HoppingProfile((0.0, 1.0) + (0.0,) * (spec.k - 1))


def default_subsystem(spec: GraphSpec, distances) -> SubsystemSpec:
    return SubsystemSpec(frozenset(distances), default_base_vertex(spec))
