"""Commuting tridiagonal operator route for multi-neighborhood subsystems.

T = {A, A*} + mu A* + nu A is tridiagonal on every module chain.  Choosing
mu = -(theta_{j0+1} + theta_j0) and nu = -(theta*_{N+1} + theta*_N) makes the
couplings across the filling cut j0 and the subsystem cut N vanish exactly,
so T commutes with both projectors and hence with the chopped correlation
matrix.  T has a well-spread simple spectrum where the correlation matrix
clusters against 0 and 1, so diagonalizing T and reading the correlation
eigenvalues from Rayleigh quotients is the numerically comfortable path at
large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scheme import GraphSpec, default_base_vertex, neighborhood_size
from .spectral import (
    CorrelationSpectrum,
    FillingSpec,
    SubsystemSpec,
    clamp_unit_interval,
    group_spectrum,
    theta_eigenvalue,
)
from .terwilliger import ModuleLabel, enumerate_modules, module_correlation_block

__all__ = [
    "HeunSpec",
    "TridiagonalMatrix",
    "heun_spec",
    "dual_eigenvalue",
    "dual_eigenvalue_at_distance",
    "tridiagonal_A_coefficients",
    "tridiagonal_Astar_coefficients",
    "module_A_action",
    "module_Astar_values",
    "build_T",
    "build_T_level_basis",
    "restrict_to_subsystem",
    "commutant_residual",
    "spectrum_via_heun",
    "validate_action_convention",
]

# Relative gap below which neighboring T eigenvalues count as one cluster and
# the correlation matrix is rediagonalized inside the cluster span.
CLUSTER_REL_TOL = 1e-8


@dataclass(frozen=True)
class HeunSpec:
    """Cut positions and the induced operator weights.

    Use :func:`heun_spec`; mu and nu are functions of the cuts, never free.
    """

    n_cut: int
    j0_x2: int
    mu: float
    nu: float


@dataclass(frozen=True)
class TridiagonalMatrix:
    diagonal: tuple[float, ...]
    offdiagonal: tuple[float, ...]

    def dense(self) -> np.ndarray:
        d = np.diag(self.diagonal)
        if self.offdiagonal:
            off = np.array(self.offdiagonal)
            d += np.diag(off, 1) + np.diag(off, -1)
        return d


def heun_spec(spec: GraphSpec, n_cut: int, j0_x2: int) -> HeunSpec:
    """Weights for subsystem distances 0..n_cut and occupied levels up to j0."""
    n, k = spec.n, spec.k
    if not 0 <= n_cut < k:
        raise ValueError(f"subsystem cut {n_cut} outside 0..{k - 1}")
    if not n - 2 * k <= j0_x2 < n or (j0_x2 - n) % 2:
        raise ValueError(f"filling cut j0_x2={j0_x2} invalid for n={n}, k={k}")
    mu = -(theta_eigenvalue(j0_x2 + 2, spec) + theta_eigenvalue(j0_x2, spec))
    nu = -(dual_eigenvalue_at_distance(n_cut + 1, spec) + dual_eigenvalue_at_distance(n_cut, spec))
    return HeunSpec(n_cut, j0_x2, mu, nu)


def dual_eigenvalue(m1_x2: int, m2_x2: int, spec: GraphSpec) -> float:
    """Dual adjacency eigenvalue theta*_(m1, m2), affine in m1 - m2."""
    n, k = spec.n, spec.k
    if m1_x2 + m2_x2 != n - 2 * k:
        raise ValueError("m1 + m2 must equal n/2 - k")
    return (
        -(n - 1) * (n - 2 * k) ** 2 / (4.0 * k * (n - k))
        + n * (n - 1) * (m1_x2 - m2_x2) / (4.0 * k * (n - k))
    )


def dual_eigenvalue_at_distance(i: int, spec: GraphSpec) -> float:
    """theta* on the i-th neighborhood; n - 1 at i = 0, strictly decreasing."""
    n, k = spec.n, spec.k
    return dual_eigenvalue((n - k) - 2 * i, 2 * i - k, spec)


def tridiagonal_A_coefficients(label: ModuleLabel, m1_x2: int, spec: GraphSpec) -> tuple[float, float]:
    """Ladder weight a_m1 and diagonal b_m1 of A on a module chain.

    a_m1 = sqrt((j1+m1)(j1-m1+1)(j2-m2)(j2+m2+1)) couples m1 to m1 - 1, i.e.
    the row at distance i to the row at i + 1, and vanishes at the chain
    ends; b_m1 = j1(j1+1) + j2(j2+1) - m1^2 - m2^2 - n/2.
    """
    n, k = spec.n, spec.k
    m2_x2 = (n - 2 * k) - m1_x2
    i = ((n - k) - m1_x2) // 2
    if i not in label.distances:
        raise ValueError(f"m1_x2={m1_x2} outside the module chain")
    j1, j2 = label.j1_x2, label.j2_x2
    prod = (
        ((j1 + m1_x2) // 2)
        * ((j1 - m1_x2) // 2 + 1)
        * ((j2 - m2_x2) // 2)
        * ((j2 + m2_x2) // 2 + 1)
    )
    a = math.sqrt(prod)
    b = (j1 * (j1 + 2) + j2 * (j2 + 2) - m1_x2**2 - m2_x2**2) / 4.0 - n / 2.0
    return a, b


def tridiagonal_Astar_coefficients(j_x2: int, label: ModuleLabel, spec: GraphSpec) -> tuple[float, float]:
    """Ladder weight a*_j and diagonal b*_j of A* in the module's level basis.

    a*_j couples j to j - 1 and carries the square root of a product that
    vanishes at the admissible-range edges, so no coupling ever leaves the
    module.  For a one-row chain only b* is meaningful and it equals the
    dual eigenvalue of that single row.
    """
    n, k = spec.n, spec.k
    j1, j2 = label.j1_x2, label.j2_x2
    if not abs(j1 - j2) <= j_x2 <= j1 + j2:
        raise ValueError(f"level j_x2={j_x2} outside the module's coupling range")
    pref = n * (n - 1) / (k * (n - k))
    mm = n - 2 * k
    num = (
        (j_x2**2 - mm**2)
        * (j_x2**2 - (j1 - j2) ** 2)
        * ((j1 + j2 + 2) ** 2 - j_x2**2)
    )
    if j_x2 <= 1 or num <= 0:
        # j = 0 or 1/2 can only be a chain's lowest level, where the
        # vanishing numerator factor already means "no coupling below"
        a_star = 0.0
    else:
        a_star = pref * math.sqrt(num / ((j_x2**2 - 1) * j_x2**2)) / 8.0
    base = -(n - 1) * (n - 2 * k) / (2.0 * k)
    swing = n * (n - 1) * (n - 2 * k) / (2.0 * k * (n - k))
    if j_x2 == 0:
        ratio = 0.0
    else:
        ratio = (j1 + j2 + 2) * (j1 - j2) / (2.0 * j_x2 * (j_x2 + 2))
    b_star = base + swing * (0.5 + ratio)
    return a_star, b_star


def module_Astar_values(label: ModuleLabel, spec: GraphSpec) -> np.ndarray:
    """Diagonal of A* on the module chain, ordered by ascending distance."""
    return np.array([dual_eigenvalue_at_distance(i, spec) for i in label.distances])


def module_A_action(label: ModuleLabel, spec: GraphSpec) -> np.ndarray:
    """Dense tridiagonal matrix of A on the module chain (ascending distance)."""
    dim = label.dim
    out = np.zeros((dim, dim))
    for r, i in enumerate(label.distances):
        a, b = tridiagonal_A_coefficients(label, label.m1_x2(i, spec), spec)
        out[r, r] = b
        if r + 1 < dim:
            out[r, r + 1] = a
            out[r + 1, r] = a
    return out


def build_T(label: ModuleLabel, hs: HeunSpec, spec: GraphSpec) -> TridiagonalMatrix:
    """T on the module chain in the distance basis.

    Off-diagonal between rows i and i+1 is a_m1(i) (theta*(i+1) + theta*(i) + nu);
    at i = n_cut the parenthesis is the defining relation for nu and cancels to
    an exact floating-point zero, which is what decouples the subsystem block.
    """
    thetas = module_Astar_values(label, spec)
    diag = []
    off = []
    for r, i in enumerate(label.distances):
        a, b = tridiagonal_A_coefficients(label, label.m1_x2(i, spec), spec)
        t = thetas[r]
        diag.append(hs.nu * b + hs.mu * t + 2.0 * b * t)
        if r + 1 < label.dim:
            t_next = dual_eigenvalue_at_distance(i + 1, spec)
            off.append(a * ((t_next + t) + hs.nu))
    return TridiagonalMatrix(tuple(diag), tuple(off))


def build_T_level_basis(label: ModuleLabel, hs: HeunSpec, spec: GraphSpec) -> TridiagonalMatrix:
    """T on the same module in the level basis; the cut sits after j0 instead.

    The two representations are similar, so their spectra must agree; tests
    assert that module by module.
    """
    from .terwilliger import module_admissible_levels

    levels = module_admissible_levels(label, spec)
    diag = []
    off = []
    for pos, j_x2 in enumerate(levels):
        a_star, b_star = tridiagonal_Astar_coefficients(j_x2, label, spec)
        th = theta_eigenvalue(j_x2, spec)
        diag.append(hs.mu * b_star + hs.nu * th + 2.0 * b_star * th)
        if pos + 1 < len(levels):
            a_next, _ = tridiagonal_Astar_coefficients(j_x2 + 2, label, spec)
            th_next = theta_eigenvalue(j_x2 + 2, spec)
            off.append(a_next * ((th_next + th) + hs.mu))
    return TridiagonalMatrix(tuple(diag), tuple(off))


def restrict_to_subsystem(t: TridiagonalMatrix, label: ModuleLabel, n_cut: int) -> TridiagonalMatrix:
    """Rows of T at distances <= n_cut; exact because the cut coupling is zero."""
    size = min(label.i_max, n_cut) - label.i_min + 1
    if size <= 0:
        return TridiagonalMatrix((), ())
    return TridiagonalMatrix(t.diagonal[:size], t.offdiagonal[: size - 1])


def _heun_filling(spec: GraphSpec, hs: HeunSpec) -> FillingSpec:
    return FillingSpec(frozenset(range(spec.n - 2 * spec.k, hs.j0_x2 + 1, 2)))


def _heun_subsystem(spec: GraphSpec, hs: HeunSpec) -> SubsystemSpec:
    return SubsystemSpec(frozenset(range(hs.n_cut + 1)), default_base_vertex(spec))


def commutant_residual(
    label: ModuleLabel,
    hs: HeunSpec,
    filling: FillingSpec,
    sub: SubsystemSpec,
    spec: GraphSpec,
) -> float:
    """max |[C, T]| on the subsystem-restricted module block."""
    if sub.distances != frozenset(range(hs.n_cut + 1)):
        raise ValueError("subsystem must be the contiguous ball matching the cut")
    if filling.occupied != _heun_filling(spec, hs).occupied:
        raise ValueError("filling must be the contiguous bottom run matching j0")
    t_block = restrict_to_subsystem(build_T(label, hs, spec), label, hs.n_cut).dense()
    if t_block.shape[0] == 0:
        return 0.0
    c_block = module_correlation_block(label, filling, sub, spec).matrix
    return float(np.max(np.abs(c_block @ t_block - t_block @ c_block)))


def spectrum_via_heun(spec: GraphSpec, hs: HeunSpec) -> CorrelationSpectrum:
    """Correlation spectrum with per-module eigenvectors supplied by T.

    Per module: diagonalize the subsystem block of T, then evaluate the
    correlation block on each eigenvector.  T eigenvalue clusters (relative
    gap under 1e-8) fall back to rediagonalizing the correlation matrix
    inside the cluster span.  Multiplicities are the module multiplicities.
    """
    filling = _heun_filling(spec, hs)
    sub = _heun_subsystem(spec, hs)
    pairs: list[tuple[float, int]] = []
    covered = 0
    for label in enumerate_modules(spec):
        t_block = restrict_to_subsystem(build_T(label, hs, spec), label, hs.n_cut).dense()
        size = t_block.shape[0]
        if size == 0:
            continue
        covered += size * label.degeneracy
        c_block = module_correlation_block(label, filling, sub, spec).matrix
        w, q = np.linalg.eigh(t_block)
        scale = max(1.0, float(np.max(np.abs(w))))
        pos = 0
        lams: list[float] = []
        while pos < size:
            end = pos + 1
            while end < size and w[end] - w[end - 1] < CLUSTER_REL_TOL * scale:
                end += 1
            if end - pos == 1:
                v = q[:, pos]
                lams.append(float(v @ c_block @ v))
            else:
                span = q[:, pos:end]
                small = span.T @ c_block @ span
                lams.extend(float(x) for x in np.linalg.eigvalsh(0.5 * (small + small.T)))
            pos = end
        for lam in clamp_unit_interval(np.array(lams)):
            pairs.append((float(lam), label.degeneracy))
    expected = sum(neighborhood_size(spec, i) for i in range(hs.n_cut + 1))
    if covered != expected:
        raise ArithmeticError(f"module rows cover {covered} modes, subsystem has {expected}")
    return CorrelationSpectrum(group_spectrum(pairs))


def validate_action_convention(spec: GraphSpec, tol: float = 1e-8) -> float:
    """Check each module's A action reproduces the adjacency eigenvalues.

    The ladder indexing admits a transcription mirror; rebuilding the module
    action and matching its spectrum against theta_j over the admissible
    levels pins the convention.  Raises when the mismatch exceeds ``tol``.
    """
    from .terwilliger import module_admissible_levels

    worst = 0.0
    for label in enumerate_modules(spec):
        got = np.linalg.eigvalsh(module_A_action(label, spec))
        want = np.sort([theta_eigenvalue(j, spec) for j in module_admissible_levels(label, spec)])
        scale = max(1.0, float(np.max(np.abs(want))))
        worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    if worst > tol:
        raise ArithmeticError(f"module ladder convention broken: spectral mismatch {worst:g}")
    return worst
