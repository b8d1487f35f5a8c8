import numpy as np
import pytest
from pymajorana import CouplingParams, DomainError, LatticeSpec, \
    analytic_edge_operator, build_majorana, detect_zero_modes
from pymajorana.edge import EdgePair, bulk_mode_operator, \
    edge_site_weight_deviation, k0_diagonal_form, localization_profile, \
    participation_ratio, resolve_edge_pair, splitting_sweep


def test_zero_modes_at_sweet_spot():
    spec = LatticeSpec(3, 4)
    form = build_majorana(spec, CouplingParams.sweet_spot(1.0))
    report = detect_zero_modes(form)
    assert report.count == 2
    assert report.interior_weight < 1e-10
    assert np.allclose(report.profiles[0], [1, 0, 0])
    assert np.allclose(report.profiles[1], [0, 0, 1])
    assert np.allclose(report.participation, [4.0, 4.0])
    assert report.splitting < 1e-10
    assert report.gap > 0.1
    assert edge_site_weight_deviation(spec, report._vectors) < 1e-10


def test_zero_modes_scale_free():
    for t in (1e-3, 1e3):
        spec = LatticeSpec(2, 3)
        form = build_majorana(spec, CouplingParams.sweet_spot(t))
        assert detect_zero_modes(form).count == 2


def test_no_zero_modes_in_trivial_phase():
    form = build_majorana(LatticeSpec(3, 4), CouplingParams(1.0, 1.0, 5.0))
    report = detect_zero_modes(form)
    assert report.count == 0
    assert report.splitting > 1.0


def test_edge_pair_orientation():
    assert resolve_edge_pair(LatticeSpec(3, 4)) == EdgePair(lead=3, tail=1)
    assert resolve_edge_pair(LatticeSpec(2, 1)) == EdgePair(lead=2, tail=1)
    assert resolve_edge_pair(LatticeSpec(1, 3)) == EdgePair(lead=1, tail=1)


def test_analytic_edge_operator_is_zero_mode():
    for spec in (LatticeSpec(2, 2), LatticeSpec(3, 4), LatticeSpec(4, 1)):
        for t in (1.0, -0.7):
            form = build_majorana(spec, CouplingParams.sweet_spot(t))
            mode = analytic_edge_operator(spec)
            assert abs(mode.anticommutator - 1.0) < 1e-14
            assert mode.residual(form) < 1e-12
            assert mode.is_zero_mode(form)
            profile = localization_profile(mode, spec)
            assert abs(profile[0] + profile[-1] - 1.0) < 1e-14


def test_edge_operator_fails_away_from_sweet_spot():
    spec = LatticeSpec(3, 4)
    form = build_majorana(spec, CouplingParams(1.0, 0.5, 0.8))
    assert not analytic_edge_operator(spec).is_zero_mode(form)


def test_bulk_modes():
    spec = LatticeSpec(3, 2)
    for m in (1, 2):
        mode = bulk_mode_operator(spec, m)
        assert abs(mode.anticommutator - 1.0) < 1e-14
        profile = localization_profile(mode, spec)
        assert np.allclose(profile[m - 1:m + 1], [0.5, 0.5])
    with pytest.raises(DomainError):
        bulk_mode_operator(spec, 3)


def test_k0_diagonal_form():
    report = k0_diagonal_form(LatticeSpec(4, 3), 1.5)
    assert report.zero_count == 1
    assert report.multiplicity == 3
    assert abs(report.common_value - 3.0) < 1e-12


def test_participation_ratio():
    assert participation_ratio([1, 0, 0]) == 1.0
    assert abs(participation_ratio([1, 1, 1, 1]) - 4.0) < 1e-12


def test_splitting_sweep_order():
    spec = LatticeSpec(2, 3)
    grid = [CouplingParams(1.0, 1.0, mu) for mu in (1.0, 2.5, 5.0)]
    rows = splitting_sweep(spec, grid, jobs=2)
    assert [r.mu for r in rows] == [1.0, 2.5, 5.0]
    assert list(rows[0].keys()) == ['t', 'delta', 'mu', 'splitting', 'gap']
    assert rows[0].splitting < 1e-10
    assert rows[2].splitting > 1.0
    assert rows == splitting_sweep(spec, grid, jobs=1)


def test_splitting_sweep_rejects_bad_grid():
    with pytest.raises(DomainError):
        splitting_sweep(LatticeSpec(2, 2), [(1.0, 1.0, 1.0)])


def test_zero_modes_on_every_small_cylinder():
    p = CouplingParams.sweet_spot(1.0)
    for M in range(2, 9):
        for N in range(2, 9):
            spec = LatticeSpec(M, N)
            report = detect_zero_modes(build_majorana(spec, p))
            assert report.count == 2, spec
            assert report.interior_weight < 1e-10
            assert edge_site_weight_deviation(spec, report._vectors) < 1e-10


def test_splitting_vanishes_only_at_sweet_spot():
    grid = [CouplingParams(1.0, 1.0, mu) for mu in (0.8, 0.9, 1.0, 1.1, 1.2)]
    rows = splitting_sweep(LatticeSpec(3, 4), grid, jobs=2)
    for row in rows:
        if row.mu == 1.0:
            assert row.splitting <= 1e-10
        else:
            assert row.splitting > 1e-4


def test_splitting_continuous_under_refinement():
    spec = LatticeSpec(3, 4)
    steps = (1e-1, 1e-2, 1e-3, 1e-4)
    grid = [CouplingParams(1.0, 1.0, 0.95)]
    grid += [CouplingParams(1.0, 1.0, 0.95 + h) for h in steps]
    rows = splitting_sweep(spec, grid)
    jumps = [abs(row.splitting - rows[0].splitting) for row in rows[1:]]
    for h, jump in zip(steps, jumps):
        assert jump <= 2 * h + 1e-12
    assert jumps == sorted(jumps, reverse=True)
