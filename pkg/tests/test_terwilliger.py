import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from johnson_entanglement.scheme import GraphSpec, default_base_vertex
from johnson_entanglement.spectral import (
    FillingSpec,
    SubsystemSpec,
    chopped_correlation_oracle,
    level_labels_x2,
    spectrum_oracle,
)
from johnson_entanglement.terwilliger import (
    check_hahn_algebra,
    assemble_spectrum,
    enumerate_modules,
    level_degeneracy,
    module_admissible_levels,
    module_correlation_block,
    module_degeneracy,
    single_neighborhood_eigenvalue,
)
from johnson_entanglement.verify import spectra_max_diff


def _by_spins(spec):
    return {(m.j1_x2, m.j2_x2): m for m in enumerate_modules(spec)}


def test_modules_octahedron():
    spec = GraphSpec(4, 2)
    mods = _by_spins(spec)
    dims = {(j1, j2): m.dim for (j1, j2), m in mods.items()}
    assert dims == {(2, 2): 3, (2, 0): 1, (0, 2): 1, (0, 0): 1}
    assert all(m.degeneracy == 1 for m in mods.values())
    assert sum(m.dim * m.degeneracy for m in mods.values()) == 6


def test_modules_complete_graph_total():
    for n in (4, 6, 9):
        spec = GraphSpec(n, 1)
        assert sum(m.dim * m.degeneracy for m in enumerate_modules(spec)) == n


def test_modules_unbalanced_case_with_short_chain():
    # J(6, 2): the (j1, j2) = (1, 1) chain only reaches neighborhoods 1..2,
    # and the (0, 0) label has no admissible rows at all
    spec = GraphSpec(6, 2)
    mods = _by_spins(spec)
    assert (0, 0) not in mods
    assert mods[(2, 2)].dim == 2
    assert mods[(2, 2)].degeneracy == 3
    assert sum(m.dim * m.degeneracy for m in mods.values()) == 15


def test_module_completeness_up_to_30():
    for n in range(2, 31):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            total = sum(m.dim * m.degeneracy for m in enumerate_modules(spec))
            assert total == spec.vertex_count, (n, k)


def test_module_degeneracy_positive_integers():
    for n in (17, 24, 30):
        for k in range(1, n // 2 + 1):
            spec = GraphSpec(n, k)
            for m in enumerate_modules(spec):
                assert m.degeneracy >= 1
                assert module_degeneracy(spec, m.j1_x2, m.j2_x2) == m.degeneracy


def test_level_degeneracy_octahedron():
    spec = GraphSpec(4, 2)
    assert [level_degeneracy(j, spec) for j in (4, 2, 0)] == [1, 3, 2]


def test_level_degeneracy_top_is_one():
    for n, k in [(4, 2), (7, 3), (12, 5)]:
        assert level_degeneracy(n, GraphSpec(n, k)) == 1


def test_level_degeneracy_classical_formula():
    # D_j = C(n, u) - C(n, u-1) with u = (n - j_x2) / 2
    for n, k in [(8, 4), (9, 3), (11, 5)]:
        spec = GraphSpec(n, k)
        for j_x2 in level_labels_x2(spec):
            u = (n - j_x2) // 2
            expected = math.comb(n, u) - (math.comb(n, u - 1) if u else 0)
            assert level_degeneracy(j_x2, spec) == expected


def test_level_degeneracy_sums_to_vertex_count():
    for n, k in [(8, 4), (10, 5), (30, 15)]:
        spec = GraphSpec(n, k)
        assert sum(level_degeneracy(j, spec) for j in level_labels_x2(spec)) == spec.vertex_count


def test_level_degeneracy_range_check():
    with pytest.raises(ValueError):
        level_degeneracy(1, GraphSpec(4, 2))


def test_block_identity_when_all_filled():
    spec = GraphSpec(6, 3)
    filling = FillingSpec(frozenset(level_labels_x2(spec)))
    sub = SubsystemSpec(frozenset(range(4)), default_base_vertex(spec))
    for label in enumerate_modules(spec):
        block = module_correlation_block(label, filling, sub, spec)
        assert np.allclose(block.matrix, np.eye(label.dim), atol=1e-12)


def test_block_empty_filling_is_zero():
    spec = GraphSpec(6, 3)
    sub = SubsystemSpec(frozenset({1}), default_base_vertex(spec))
    for label in enumerate_modules(spec):
        block = module_correlation_block(label, FillingSpec(frozenset()), sub, spec)
        assert np.allclose(block.matrix, 0.0)


def test_block_octahedron_single_site():
    spec = GraphSpec(4, 2)
    label = _by_spins(spec)[(2, 2)]
    block = module_correlation_block(
        label, FillingSpec(frozenset({0})), SubsystemSpec(frozenset({0}), default_base_vertex(spec)), spec
    )
    assert block.matrix.shape == (1, 1)
    assert block.matrix[0, 0] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_block_dimension_matches_formula():
    spec = GraphSpec(9, 4)
    x0 = default_base_vertex(spec)
    filling = FillingSpec(frozenset(level_labels_x2(spec)[:2]))
    for dset in ({0, 2}, {1, 3, 4}, {2}):
        sub = SubsystemSpec(frozenset(dset), x0)
        for label in enumerate_modules(spec):
            block = module_correlation_block(label, filling, sub, spec)
            expected = sum(
                1
                for i in dset
                if abs((spec.n - spec.k) - 2 * i) <= label.j1_x2 and abs(2 * i - spec.k) <= label.j2_x2
            )
            assert block.matrix.shape == (expected, expected)


def test_single_neighborhood_eigenvalues():
    spec = GraphSpec(4, 2)
    label = _by_spins(spec)[(2, 2)]
    filling = FillingSpec(frozenset({0}))
    assert single_neighborhood_eigenvalue(label, 0, filling, spec) == pytest.approx(1.0 / 3.0)
    full = FillingSpec(frozenset(level_labels_x2(spec)))
    assert single_neighborhood_eigenvalue(label, 1, full, spec) == pytest.approx(1.0)
    complement = FillingSpec(frozenset(level_labels_x2(spec)) - frozenset({0}))
    assert single_neighborhood_eigenvalue(label, 0, filling, spec) + single_neighborhood_eigenvalue(
        label, 0, complement, spec
    ) == pytest.approx(1.0)


def test_single_neighborhood_out_of_chain():
    spec = GraphSpec(6, 2)
    label = _by_spins(spec)[(2, 2)]  # chain covers 1..2 only
    with pytest.raises(ValueError):
        single_neighborhood_eigenvalue(label, 0, FillingSpec(frozenset({2})), spec)


def test_assemble_matches_oracle_battery():
    for n, k in [(4, 2), (5, 2), (6, 3), (8, 4)]:
        spec = GraphSpec(n, k)
        labels = level_labels_x2(spec)
        x0 = default_base_vertex(spec)
        fillings = [frozenset(labels[:1]), frozenset(labels[:2]), frozenset(labels[::2])]
        dsets = [frozenset({0}), frozenset({1}), frozenset(range(min(2, k) + 1)), frozenset({0, k})]
        for occ in fillings:
            for dset in dsets:
                filling = FillingSpec(occ)
                sub = SubsystemSpec(dset, x0)
                direct = assemble_spectrum(spec, filling, sub)
                oracle = spectrum_oracle(chopped_correlation_oracle(spec, filling, sub))
                assert spectra_max_diff(direct, oracle) <= 1e-8, (n, k, occ, dset)


def test_assemble_whole_graph_is_projector():
    spec = GraphSpec(6, 3)
    labels = level_labels_x2(spec)
    filling = FillingSpec(frozenset(labels[:2]))
    sub = SubsystemSpec(frozenset(range(spec.k + 1)), default_base_vertex(spec))
    spectrum = assemble_spectrum(spec, filling, sub)
    values = {round(l, 12) for l, _ in spectrum.entries}
    assert values <= {0.0, 1.0}
    occ = sum(level_degeneracy(j, spec) for j in labels[:2])
    by_value = {l: m for l, m in spectrum.entries}
    assert by_value[1.0] == occ
    assert by_value[0.0] == spec.vertex_count - occ


def test_assemble_multiplicity_totals():
    spec = GraphSpec(30, 15)
    labels = level_labels_x2(spec)
    filling = FillingSpec(frozenset(labels[:4]))
    sub = SubsystemSpec(frozenset({7}), default_base_vertex(spec))
    spectrum = assemble_spectrum(spec, filling, sub)
    assert spectrum.total_multiplicity == math.comb(15, 7) ** 2


@given(st.integers(4, 16), st.data())
def test_admissible_levels_count_is_dim(n, data):
    k = data.draw(st.integers(1, n // 2))
    spec = GraphSpec(n, k)
    for label in enumerate_modules(spec):
        assert len(module_admissible_levels(label, spec)) == label.dim


def test_hahn_relations_balanced_graphs():
    for n, k in [(4, 2), (6, 3), (8, 4)]:
        for rec in check_hahn_algebra(GraphSpec(n, k)):
            assert rec.h2_residual <= 1e-8, (n, k, rec)
            assert rec.h3_residual <= 1e-8, (n, k, rec)


def test_hahn_relation_one_dimensional_modules_trivial():
    spec = GraphSpec(4, 2)
    for rec in check_hahn_algebra(spec):
        if (rec.j1_x2, rec.j2_x2) != (2, 2):
            # scalars commute; both sides must cancel to zero exactly
            assert rec.h2_residual <= 1e-12
            assert rec.h3_residual <= 1e-12


def test_hahn_second_relation_holds_off_balance():
    # the pure-square relation has no balanced-only terms and stays exact
    for n, k in [(6, 2), (7, 3), (9, 4)]:
        for rec in check_hahn_algebra(GraphSpec(n, k)):
            assert rec.h3_residual <= 1e-8, (n, k, rec)
