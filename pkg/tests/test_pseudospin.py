import math

import numpy as np
import pytest
from pymajorana import CouplingParams, DomainError, InvariantViolation, \
    LatticeSpec, ResourceLimitError, algebra_check, build_pseudospin
from pymajorana.fock import FockSpace, build_manybody_h, commutator_norm
from pymajorana.pseudospin import AXES, LEVI_CIVITA, TwoModeBasis, \
    embed_two_mode, eigenstate_expectations, factor_entropy, \
    particle_hole_map, phi_state_expectations, phi_tilde_states, \
    quantum_number_table, two_mode_matrices


def _four_by_four():
    return build_pseudospin(LatticeSpec(2, 2), embed=False)


def test_levi_civita():
    assert LEVI_CIVITA[0, 1, 2] == 1
    assert LEVI_CIVITA[1, 0, 2] == -1
    assert LEVI_CIVITA[0, 0, 1] == 0
    assert np.count_nonzero(LEVI_CIVITA) == 6


def test_basis_actions():
    ops = two_mode_matrices()
    e = np.eye(4)
    sz, tauz = ops['s']['z'], ops['tau']['z']
    assert np.allclose(sz.dot(e[1]), 0.5 * e[1])
    assert np.allclose(sz.dot(e[2]), -0.5 * e[2])
    assert np.allclose(tauz.dot(e[3]), 0.5 * e[3])
    assert np.allclose(tauz.dot(e[0]), -0.5 * e[0])
    for axis in AXES:
        s, tau = ops['s'][axis], ops['tau'][axis]
        assert not s[np.ix_([0, 3], [0, 3])].any()
        assert not tau[np.ix_([1, 2], [1, 2])].any()
        assert not s[np.ix_([0, 3], [1, 2])].any()
        assert not tau[np.ix_([0, 3], [1, 2])].any()


def test_quantum_number_table():
    rows = quantum_number_table()
    assert [r.state for r in rows] == [1, 2, 3, 4]
    assert [(r.sz, r.s2) for r in rows] == [
        (0.0, 0.0), (0.5, 0.75), (-0.5, 0.75), (0.0, 0.0)]
    assert [(r.tauz, r.tau2) for r in rows] == [
        (-0.5, 0.75), (0.0, 0.0), (0.0, 0.0), (0.5, 0.75)]
    assert [(r.s, r.tau) for r in rows] == [
        ('0', 'dn'), ('up', '0'), ('dn', '0'), ('0', 'up')]


def test_algebra_matrix():
    report = algebra_check(_four_by_four())
    assert report.matrix < 1e-12
    assert 'fock' not in report


def test_algebra_fock():
    for spec in (LatticeSpec(2, 2), LatticeSpec(3, 2)):
        report = algebra_check(build_pseudospin(spec))
        assert report.fock < 1e-10


def test_fock_requires_cap():
    with pytest.raises(ResourceLimitError):
        build_pseudospin(LatticeSpec(4, 4), cap=10)
    ps = _four_by_four()
    with pytest.raises(DomainError):
        ps.op('s', 'x', fock=True)


def test_particle_hole_map():
    ps = _four_by_four()
    P = particle_hole_map(ps)
    assert np.allclose(P.dot(P), np.eye(4))
    assert np.allclose(P.conj().T.dot(ps.square('s')).dot(P),
                       ps.square('tau'))
    jx = ps.matrices['J']['x']
    assert np.allclose(jx.dot(P), P.dot(jx))
    assert not P[np.ix_([1, 2], [1, 2])].any()
    assert not P[np.ix_([0, 3], [0, 3])].any()


def test_embedding_reproduces_fock_operators():
    ps = build_pseudospin(LatticeSpec(2, 2))
    for triple in ('s', 'tau', 'J'):
        for axis in AXES:
            lifted = embed_two_mode(ps.op(triple, axis), ps)
            assert abs(lifted - ps.op(triple, axis, fock=True)).max() < 1e-12

    P = embed_two_mode(particle_hole_map(ps), ps)
    assert commutator_norm(P, ps.op('J', 'x', fock=True)) < 1e-12


def test_jx_conserved():
    spec = LatticeSpec(3, 2)
    ps = build_pseudospin(spec)
    h = build_manybody_h(ps.space, CouplingParams.sweet_spot(0.8))
    assert commutator_norm(ps.op('J', 'x', fock=True), h) < 1e-12


def test_phi_tilde_states():
    rows = phi_tilde_states()
    assert [r.jx for r in rows] == [0.5, -0.5]
    for row in rows:
        assert row.jx_residual < 1e-12
        assert abs(row.s2 - 0.375) < 1e-12
        assert abs(row.tau2 - 0.375) < 1e-12
        assert abs(row.entropy - math.log(2)) < 1e-12


def test_basis_states_are_product_states():
    basis = TwoModeBasis()
    for k in range(4):
        assert factor_entropy(basis.vectors[:, k], basis) == 0.0


def test_basis_isometric_in_fock():
    ps = build_pseudospin(LatticeSpec(2, 3))
    columns = ps.basis.fock(ps.space, ps.modes)
    assert columns.shape == (64, 4)


def test_eigenstate_expectations():
    report = eigenstate_expectations(LatticeSpec(2, 2),
                                     CouplingParams.sweet_spot(1.0))
    rows = report.rows
    assert len(rows) == 16
    assert report.jx_commutator < 1e-12
    for row in rows:
        assert abs(abs(row.jx) - 0.5) < 1e-8
        assert abs(row.s2 + row.tau2 - 0.75) < 1e-8

    ground = [r for r in rows if abs(r.energy - rows[0].energy) < 1e-8]
    assert sorted(round(r.jx, 8) for r in ground) == [-0.5, 0.5]
    assert report.flagged == sum(r.phi_flag for r in rows) == 0


def test_eigenstate_expectations_flag_half_filled_states():
    report = eigenstate_expectations(LatticeSpec(3, 2),
                                     CouplingParams.sweet_spot(1.0))
    assert len(report.rows) == 64
    flagged = [r for r in report.rows if r.phi_flag]
    assert report.flagged == len(flagged) > 0
    for row in flagged:
        assert abs(abs(row.jx) - 0.5) < 1e-8
        assert abs(row.s2 - 0.375) < 1e-8
        assert abs(row.tau2 - 0.375) < 1e-8


def test_phi_state_expectations():
    ps = build_pseudospin(LatticeSpec(3, 1))
    minus, plus = phi_state_expectations(ps)
    assert (minus.name, plus.name) == ('phi-', 'phi+')
    assert abs(minus.jx + 0.5) < 1e-10
    assert abs(plus.jx - 0.5) < 1e-10
    for row in (minus, plus):
        assert abs(row.s2 - 0.375) < 1e-10
        assert abs(row.tau2 - 0.375) < 1e-10
        assert row.phi_flag == 1
    with pytest.raises(DomainError):
        phi_state_expectations(_four_by_four())

def test_eigenstate_expectations_need_sweet_spot():
    with pytest.raises(DomainError):
        eigenstate_expectations(LatticeSpec(2, 2),
                                CouplingParams(1.0, 0.5, 0.5))


def test_cluster_leak_detected(mocker):
    spec = LatticeSpec(2, 2)
    space = FockSpace(spec)
    h = build_manybody_h(space, CouplingParams(1.0, 0.5, 0.2))
    mocker.patch('pymajorana.pseudospin.build_manybody_h', return_value=h)
    mocker.patch('pymajorana.pseudospin.commutator_norm', return_value=0.0)
    with pytest.raises(InvariantViolation) as e:
        eigenstate_expectations(spec, CouplingParams.sweet_spot(1.0))
    assert e.value.name == 'simultaneous_diagonalization'
