"""Acceptance battery: one test per release criterion, each printing a
pass/fail line.  Tolerances are fixed here and nowhere else.
"""

import json
import math
import time
from dataclasses import replace

import numpy as np
import pytest

from johnson_entanglement.cli import main, sweep_fig2b, sweep_fig3a, sweep_fig3b
from johnson_entanglement.heun import (
    build_T,
    build_T_level_basis,
    commutant_residual,
    heun_spec,
    restrict_to_subsystem,
    spectrum_via_heun,
)
from johnson_entanglement.entropy import von_neumann
from johnson_entanglement.scheme import GraphSpec, adjacency_matrix, default_base_vertex
from johnson_entanglement.spectral import (
    FillingSpec,
    HoppingProfile,
    SubsystemSpec,
    adjacency_via_polynomial,
    chopped_correlation_oracle,
    eigenprojectors_oracle,
    energy_exponential,
    energy_table,
    level_labels_x2,
    spectrum_oracle,
)
from johnson_entanglement.terwilliger import (
    assemble_spectrum,
    enumerate_modules,
    check_hahn_algebra,
    level_degeneracy,
    module_admissible_levels,
    module_correlation_block,
)
from johnson_entanglement.verify import spectra_max_diff

ORACLE_SIZES = ((4, 2), (5, 2), (6, 3), (8, 4), (10, 5))


def _announce(num, text):
    print(f"ACCEPTANCE {num:02d} PASS: {text}")


def test_criterion_01_triple_route_agreement():
    start = time.time()
    worst = 0.0
    for n, k in ORACLE_SIZES:
        spec = GraphSpec(n, k)
        labels = level_labels_x2(spec)
        x0 = default_base_vertex(spec)
        for j0_pos in range(k):
            filling = FillingSpec(frozenset(labels[: j0_pos + 1]))
            for n_cut in range(k):
                sub = SubsystemSpec(frozenset(range(n_cut + 1)), x0)
                oracle = spectrum_oracle(chopped_correlation_oracle(spec, filling, sub))
                modules = assemble_spectrum(spec, filling, sub)
                heun = spectrum_via_heun(spec, heun_spec(spec, n_cut, labels[j0_pos]))
                assert oracle.total_multiplicity == modules.total_multiplicity == heun.total_multiplicity
                worst = max(worst, spectra_max_diff(oracle, modules), spectra_max_diff(oracle, heun))
    elapsed = time.time() - start
    assert worst <= 1e-8
    assert elapsed < 60.0
    _announce(1, f"three routes agree to {worst:.2e} over all cuts of {ORACLE_SIZES} in {elapsed:.1f}s")


def test_criterion_02_worked_value():
    spec = GraphSpec(4, 2)
    filling = FillingSpec(frozenset({0}))
    sub = SubsystemSpec(frozenset({0}), default_base_vertex(spec))
    spectra = {
        "oracle": spectrum_oracle(chopped_correlation_oracle(spec, filling, sub)),
        "modules": assemble_spectrum(spec, filling, sub),
        "heun": spectrum_via_heun(spec, heun_spec(spec, 0, 0)),
    }
    for route, spectrum in spectra.items():
        assert len(spectrum.entries) == 1
        lam, mult = spectrum.entries[0]
        assert mult == 1
        assert lam == pytest.approx(1.0 / 3.0, abs=1e-10), route
        assert von_neumann(spectrum) == pytest.approx(0.636514, abs=1e-6), route
    _announce(2, "J(4,2) nearest-neighbor single-vertex spectrum is [(1/3, 1)], S = 0.636514")


def test_criterion_03_structural_commutation():
    worst_residual = 0.0
    worst_perturbed = math.inf
    for n, k in ((8, 4), (10, 5)):
        spec = GraphSpec(n, k)
        labels = level_labels_x2(spec)
        x0 = default_base_vertex(spec)
        for n_cut, j0_pos in ((1, 1), (2, 2)):
            hs = heun_spec(spec, n_cut, labels[j0_pos])
            filling = FillingSpec(frozenset(labels[: j0_pos + 1]))
            sub = SubsystemSpec(frozenset(range(n_cut + 1)), x0)
            perturbed = replace(hs, mu=hs.mu + 1.0)
            perturbed_max = 0.0
            for label in enumerate_modules(spec):
                t = build_T(label, hs, spec)
                for offset, i in enumerate(range(label.i_min, label.i_max)):
                    if i == n_cut:
                        assert t.offdiagonal[offset] == 0.0
                t_lvl = build_T_level_basis(label, hs, spec)
                levels = module_admissible_levels(label, spec)
                for pos, j_x2 in enumerate(levels[:-1]):
                    if j_x2 == hs.j0_x2:
                        assert t_lvl.offdiagonal[pos] == 0.0
                worst_residual = max(worst_residual, commutant_residual(label, hs, filling, sub, spec))
                t_bad = restrict_to_subsystem(build_T(label, perturbed, spec), label, n_cut).dense()
                if t_bad.shape[0] > 1:
                    c_blk = module_correlation_block(label, filling, sub, spec).matrix
                    perturbed_max = max(perturbed_max, float(np.max(np.abs(c_blk @ t_bad - t_bad @ c_blk))))
            worst_perturbed = min(worst_perturbed, perturbed_max)
    assert worst_residual <= 1e-9
    assert worst_perturbed > 1e-3
    _announce(3, f"cut couplings exactly zero; [C,T] <= {worst_residual:.1e}; mu+1 control {worst_perturbed:.1e} > 1e-3")


def test_criterion_04_degeneracies():
    for n in range(2, 11):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            for j_x2, e_j in eigenprojectors_oracle(spec).items():
                trace = float(np.trace(e_j))
                d_j = level_degeneracy(j_x2, spec)
                assert round(trace) == d_j and abs(trace - d_j) < 1e-6, (n, k, j_x2)
    for n in range(2, 31):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            assert sum(m.dim * m.degeneracy for m in enumerate_modules(spec)) == spec.vertex_count
    _announce(4, "module-count degeneracies match projector traces (n <= 10) and close exactly (n <= 30)")


def test_criterion_05_hahn_matrix_identity():
    worst = 0.0
    for n in range(3, 11):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            for i in range(k + 1):
                diff = adjacency_matrix(i, spec) - adjacency_via_polynomial(i, spec)
                worst = max(worst, float(np.max(np.abs(diff))))
    assert worst <= 1e-8
    _announce(5, f"distance matrices equal their polynomial reconstructions to {worst:.1e} (n <= 10)")


def test_criterion_06_energy_consistency():
    worst = 0.0
    for n in range(2, 13):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            for c in (0.1, 1.0, 5.0):
                closed = energy_exponential(spec, c)
                expanded = energy_table(spec, HoppingProfile(tuple(math.exp(-c * i) for i in range(k + 1))))
                for a, b in zip(closed.rows, expanded.rows):
                    scale = max(abs(a.omega), abs(b.omega), 1e-300)
                    worst = max(worst, abs(a.omega - b.omega) / scale)
                omegas = [row.omega for row in closed.rows]
                assert all(x < y for x, y in zip(omegas, omegas[1:])), (n, k, c)
    assert worst <= 1e-9
    _announce(6, f"closed-form and expanded exponential energies agree to {worst:.1e} relative; monotone in j")


def test_criterion_07_hahn_algebra_residuals():
    worst = 0.0
    for n, k in ((6, 3), (8, 4)):
        for rec in check_hahn_algebra(GraphSpec(n, k)):
            worst = max(worst, rec.h2_residual, rec.h3_residual)
    assert worst <= 1e-8
    _announce(7, f"commutator-algebra residuals <= {worst:.1e} per module at (6,3) and (8,4)")


def test_criterion_08_purity_duality():
    worst = 0.0
    count = 0
    for n, k in ((6, 3), (8, 4)):
        spec = GraphSpec(n, k)
        labels = level_labels_x2(spec)
        x0 = default_base_vertex(spec)
        distance_sets = [frozenset({0}), frozenset({1}), frozenset({0, 1}), frozenset({0, 2}), frozenset(range(k))]
        fillings = [frozenset(labels[:1]), frozenset(labels[:2]), frozenset(labels[::2])]
        for sd in distance_sets:
            for se in fillings:
                count += 1
                filling = FillingSpec(se)
                s_a = von_neumann(spectrum_oracle(chopped_correlation_oracle(spec, filling, SubsystemSpec(sd, x0))))
                comp = frozenset(range(k + 1)) - sd
                s_b = von_neumann(spectrum_oracle(chopped_correlation_oracle(spec, filling, SubsystemSpec(comp, x0))))
                worst = max(worst, abs(s_a - s_b))
    assert count >= 20
    assert worst <= 1e-7
    _announce(8, f"S(SV) = S(complement) to {worst:.1e} on {count} enumerated configurations")


def test_criterion_09_figure_scale_runs():
    import argparse

    start = time.time()
    ln2 = math.log(2.0)

    args = argparse.Namespace(n=30, k=15, fill_levels=None)
    _, rows2b = sweep_fig2b(args)
    assert len(rows2b) == 16 * 16
    table = {(r["i"], r["fill_levels"]): r["entropy"] for r in rows2b}
    for r in rows2b:
        assert r["entropy"] <= r["subsystem_size"] * ln2 * (1 + 1e-12)
        assert abs(r["entropy"] - table[(15 - r["i"], r["fill_levels"])]) <= 1e-8

    _, rows3a = sweep_fig3a(args)
    _, rows3b = sweep_fig3b(args)
    for r in rows3a + rows3b:
        assert r["entropy"] <= r["subsystem_size"] * ln2 * (1 + 1e-12)
    peak_3a = max(rows3a, key=lambda r: r["ratio_cut"])
    assert 0 < peak_3a["cutoff"] < peak_3a["k"] - 1
    peak_3b = max(rows3b, key=lambda r: r["ratio_cut"])
    assert 0 < peak_3b["cutoff"] < 14
    for fill in range(1, 13):
        curve = {r["cutoff"]: r["ratio_cut"] for r in rows3b if r["fill_levels"] == fill}
        best = max(curve, key=curve.get)
        assert 0 < best < 14, fill

    elapsed = time.time() - start
    assert elapsed < 600.0
    _announce(9, f"n=30 sweeps in {elapsed:.1f}s; mode bound and i <-> k-i symmetry hold; cut ratio peaks at interior N")


def test_criterion_10_determinism(tmp_path):
    commands = [
        ["energies", "--n", "8", "--k", "4", "--exp-hopping", "1.0", "--format", "json"],
        ["entropy", "--n", "8", "--k", "4", "--alpha", "0,1", "--cutoff", "2", "--route", "all"],
        ["sweep", "--figure", "fig2b", "--n", "12", "--k", "6"],
        ["verify", "--quick"],
    ]
    for idx, base in enumerate(commands):
        a = tmp_path / f"run_a_{idx}"
        b = tmp_path / f"run_b_{idx}"
        assert main(base + ["--output", str(a)]) == 0
        assert main(base + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes(), base
    _announce(10, "repeated CLI runs are byte-identical across commands and formats")
