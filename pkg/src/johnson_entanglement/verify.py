"""Cross-checking battery: every structural identity the package relies on,
runnable at small sizes where the dense oracle is available.

Each check returns its worst observed metric so regressions show up as
numbers, not just booleans.  The battery is deterministic; configurations
are enumerated grids, never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import entropy as entropy_mod
from . import heun as heun_mod
from . import scheme, spectral, terwilliger
from .scheme import GraphSpec, default_base_vertex
from .spectral import CorrelationSpectrum, FillingSpec, SubsystemSpec

__all__ = ["CheckResult", "run_battery", "expand_spectrum", "spectra_max_diff"]

DEFAULT_SIZES = ((4, 2), (6, 3), (8, 4))
QUICK_SIZES = ((4, 2), (6, 3))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "worst", float(self.worst))


def expand_spectrum(spectrum: CorrelationSpectrum) -> list[float]:
    """Eigenvalues repeated by multiplicity, ascending (dense-scale only)."""
    out: list[float] = []
    for lam, mult in spectrum.entries:
        out.extend([lam] * mult)
    return sorted(out)


def spectra_max_diff(a: CorrelationSpectrum, b: CorrelationSpectrum) -> float:
    """Worst per-eigenvalue gap between two spectra; inf on a size mismatch."""
    ea, eb = expand_spectrum(a), expand_spectrum(b)
    if len(ea) != len(eb):
        return math.inf
    if not ea:
        return 0.0
    return max(abs(x - y) for x, y in zip(ea, eb))


def _bottom_filling(spec: GraphSpec, levels: int) -> FillingSpec:
    labels = spectral.level_labels_x2(spec)
    return FillingSpec(frozenset(labels[:levels]))


def _check_scheme_identities(sizes, cap) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        dim = spec.vertex_count
        total = np.zeros((dim, dim))
        for i in range(k + 1):
            a_i = scheme.adjacency_matrix(i, spec, cap)
            total += a_i
            for i2 in range(i + 1, k + 1):
                worst = max(worst, float(np.max(a_i * scheme.adjacency_matrix(i2, spec, cap))))
        worst = max(worst, float(np.max(np.abs(total - np.ones((dim, dim))))))
        a1 = scheme.adjacency_matrix(1, spec, cap)
        worst = max(worst, float(np.max(np.abs(a1.sum(axis=1) - k * (n - k)))))
        x0 = default_base_vertex(spec)
        proj_sum = np.zeros((dim, dim))
        astar = scheme.dual_adjacency_matrix(x0, spec, cap)
        rebuilt = np.zeros((dim, dim))
        for i in range(k + 1):
            e_i = scheme.neighborhood_projector(x0, i, spec, cap)
            proj_sum += e_i
            rebuilt += heun_mod.dual_eigenvalue_at_distance(i, spec) * e_i
        worst = max(worst, float(np.max(np.abs(proj_sum - np.eye(dim)))))
        worst = max(worst, float(np.max(np.abs(rebuilt - astar))))
    return CheckResult("scheme_identities", worst <= 1e-10, worst, "distance partition, regularity, projector resolution")


def _check_embedding(sizes, cap) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        verts = scheme.enumerate_vertices(spec, cap)
        vecs = [scheme.embed_in_hypercube(v, spec) for v in verts]
        for a in range(len(verts)):
            for b in range(a, len(verts)):
                ham = sum(x != y for x, y in zip(vecs[a], vecs[b]))
                worst = max(worst, abs(ham - 2 * scheme.distance(verts[a], verts[b], spec)))
    return CheckResult("hypercube_embedding", worst == 0.0, worst, "hamming distance doubles graph distance")


def _check_hahn_polynomial(sizes, cap) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        for i in range(k + 1):
            diff = scheme.adjacency_matrix(i, spec, cap) - spectral.adjacency_via_polynomial(i, spec, cap)
            worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("hahn_polynomial_identity", worst <= 1e-8, worst, "A_i as a degree-i polynomial of A")


def _check_cg_orthonormality(sizes) -> CheckResult:
    worst = 0.0
    probe = [GraphSpec(n, k) for n, k in sizes] + [GraphSpec(30, 15), GraphSpec(29, 13)]
    for spec in probe:
        for label in terwilliger.enumerate_modules(spec):
            levels = terwilliger.module_admissible_levels(label, spec)
            g = terwilliger.correlation_entries(label, spec, list(label.distances), levels)
            eye = np.eye(label.dim)
            worst = max(worst, float(np.max(np.abs(g.T @ g - eye))))
            worst = max(worst, float(np.max(np.abs(g @ g.T - eye))))
    return CheckResult("cg_orthonormality", worst <= 1e-12, worst, "coupling columns orthonormal and complete")


def _check_module_completeness() -> CheckResult:
    bad = 0
    for n in range(2, 31):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            total = sum(m.dim * m.degeneracy for m in terwilliger.enumerate_modules(spec))
            if total != spec.vertex_count:
                bad += 1
    return CheckResult("module_completeness", bad == 0, float(bad), "sum dim*degeneracy = C(n,k) for n <= 30")


def _check_level_degeneracies(sizes, cap) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        projectors = spectral.eigenprojectors_oracle(spec, cap)
        for j_x2, e_j in projectors.items():
            worst = max(worst, abs(float(np.trace(e_j)) - terwilliger.level_degeneracy(j_x2, spec)))
    return CheckResult("level_degeneracies", worst <= 1e-6, worst, "trace(E_j) equals the module count")


def _check_action_convention(sizes) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        worst = max(worst, heun_mod.validate_action_convention(GraphSpec(n, k)))
    return CheckResult("action_convention", worst <= 1e-8, worst, "module A action reproduces theta_j")


def _check_t_basis_similarity(sizes) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        labels = spectral.level_labels_x2(spec)
        for n_cut in (0, k - 1):
            for j0_x2 in (labels[0], labels[-2]):
                hs = heun_mod.heun_spec(spec, n_cut, j0_x2)
                for label in terwilliger.enumerate_modules(spec):
                    w1 = np.linalg.eigvalsh(heun_mod.build_T(label, hs, spec).dense())
                    w2 = np.linalg.eigvalsh(heun_mod.build_T_level_basis(label, hs, spec).dense())
                    scale = max(1.0, float(np.max(np.abs(w1))))
                    worst = max(worst, float(np.max(np.abs(w1 - w2))) / scale)
    return CheckResult("t_basis_similarity", worst <= 1e-8, worst, "distance- and level-basis T agree spectrally")


def _check_route_agreement(sizes, cap) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        spec = GraphSpec(n, k)
        labels = spectral.level_labels_x2(spec)
        x0 = default_base_vertex(spec)
        for j0_pos in range(k):
            filling = FillingSpec(frozenset(labels[: j0_pos + 1]))
            for n_cut in range(k):
                sub = SubsystemSpec(frozenset(range(n_cut + 1)), x0)
                s_oracle = spectral.spectrum_oracle(
                    spectral.chopped_correlation_oracle(spec, filling, sub, cap)
                )
                s_modules = terwilliger.assemble_spectrum(spec, filling, sub)
                hs = heun_mod.heun_spec(spec, n_cut, labels[j0_pos])
                s_heun = heun_mod.spectrum_via_heun(spec, hs)
                worst = max(worst, spectra_max_diff(s_oracle, s_modules))
                worst = max(worst, spectra_max_diff(s_oracle, s_heun))
    return CheckResult("route_agreement", worst <= 1e-8, worst, "oracle, module and T-readout spectra agree")


def _check_hahn_algebra(sizes) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        for rec in terwilliger.check_hahn_algebra(GraphSpec(n, k)):
            worst = max(worst, rec.h2_residual, rec.h3_residual)
    return CheckResult("hahn_algebra_residuals", worst <= 1e-8, worst, "quadratic commutator relations per module")


def _check_heun_commutant(sizes, cap) -> CheckResult:
    worst = 0.0
    control_ok = True
    for n, k in sizes:
        spec = GraphSpec(n, k)
        labels = spectral.level_labels_x2(spec)
        hs = heun_mod.heun_spec(spec, min(1, k - 1), labels[min(1, k - 1)])
        filling = FillingSpec(frozenset(labels[: labels.index(hs.j0_x2) + 1]))
        sub = SubsystemSpec(frozenset(range(hs.n_cut + 1)), default_base_vertex(spec))
        perturbed = replace(hs, mu=hs.mu + 1.0)
        worst_perturbed = 0.0
        for label in terwilliger.enumerate_modules(spec):
            worst = max(worst, heun_mod.commutant_residual(label, hs, filling, sub, spec))
            t_block = heun_mod.restrict_to_subsystem(
                heun_mod.build_T(label, perturbed, spec), label, hs.n_cut
            ).dense()
            if t_block.shape[0] > 1:
                c_block = terwilliger.module_correlation_block(label, filling, sub, spec).matrix
                worst_perturbed = max(
                    worst_perturbed, float(np.max(np.abs(c_block @ t_block - t_block @ c_block)))
                )
        control_ok = control_ok and worst_perturbed > 1e-3
    passed = worst <= 1e-9 and control_ok
    return CheckResult(
        "heun_commutant", passed, worst, "[C, T] residual tiny; perturbed mu breaks it (negative control)"
    )


def _purity_configs(spec: GraphSpec):
    labels = spectral.level_labels_x2(spec)
    k = spec.k
    distance_sets = [frozenset({0}), frozenset({1}), frozenset(range(2)), frozenset({0, 2}), frozenset(range(k))]
    fillings = [
        frozenset(labels[:1]),
        frozenset(labels[:2]),
        frozenset(labels[::2]),
    ]
    for sd in distance_sets:
        for se in fillings:
            yield sd, se


def _check_purity_duality(cap) -> CheckResult:
    worst = 0.0
    count = 0
    for n, k in ((6, 3), (8, 4)):
        spec = GraphSpec(n, k)
        x0 = default_base_vertex(spec)
        for sd, se in _purity_configs(spec):
            count += 1
            filling = FillingSpec(se)
            sub = SubsystemSpec(sd, x0)
            comp = SubsystemSpec(frozenset(range(k + 1)) - sd, x0)
            s_a = entropy_mod.von_neumann(
                spectral.spectrum_oracle(spectral.chopped_correlation_oracle(spec, filling, sub, cap))
            )
            s_b = entropy_mod.von_neumann(
                spectral.spectrum_oracle(spectral.chopped_correlation_oracle(spec, filling, comp, cap))
            )
            worst = max(worst, abs(s_a - s_b))
    return CheckResult(
        "purity_duality", worst <= 1e-7 and count >= 20, worst, f"S(SV) = S(complement) on {count} configurations"
    )


def _check_mirror_symmetry(sizes) -> CheckResult:
    worst = 0.0
    for n, k in sizes:
        if n != 2 * k:
            continue
        spec = GraphSpec(n, k)
        x0 = default_base_vertex(spec)
        filling = _bottom_filling(spec, max(1, (k + 1) // 3))
        values = []
        for i in range(k + 1):
            sub = SubsystemSpec(frozenset({i}), x0)
            values.append(entropy_mod.von_neumann(terwilliger.assemble_spectrum(spec, filling, sub)))
        for i in range(k + 1):
            worst = max(worst, abs(values[i] - values[k - i]))
    return CheckResult("mirror_symmetry", worst <= 1e-8, worst, "S(i) = S(k-i) on balanced graphs")


def run_battery(sizes=None, quick: bool = False, cap: int | None = None) -> list[CheckResult]:
    """Run the battery; ``quick`` restricts to the fast subset of sizes/checks."""
    if sizes is None:
        sizes = QUICK_SIZES if quick else DEFAULT_SIZES
    results = [
        _check_scheme_identities(sizes, cap),
        _check_embedding(sizes, cap),
        _check_hahn_polynomial(sizes, cap),
        _check_cg_orthonormality(sizes),
        _check_module_completeness(),
        _check_level_degeneracies(sizes, cap),
        _check_action_convention(sizes),
        _check_t_basis_similarity(sizes),
        _check_route_agreement(sizes, cap),
        _check_hahn_algebra(sizes),
        _check_heun_commutant(sizes, cap),
        _check_mirror_symmetry(sizes),
    ]
    if not quick:
        results.append(_check_purity_duality(cap))
    return results
