import math

import numpy as np
import pytest
from pymajorana import DomainError, InvariantViolation, LatticeSpec
from pymajorana.fourier import build_block, build_blocks, fourier_basis, \
    grid_label, k_values, verify_block_decomposition


def test_k_grid():
    assert k_values(1) == [0.0]
    assert np.allclose(k_values(4), [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    with pytest.raises(DomainError):
        k_values(0)
    assert grid_label(4, math.pi) == 2
    assert grid_label(4, -math.pi / 2) == 3
    with pytest.raises(DomainError):
        grid_label(4, 0.3)


def test_basis_unitary():
    U = fourier_basis(LatticeSpec(2, 3))
    assert U.shape == (12, 12)
    assert np.allclose(U.conj().T.dot(U), np.eye(12))


def test_k0_block_decouples_edge_majoranas():
    spec = LatticeSpec(3, 4)
    block = build_block(spec, 1.0, 0.0)
    # b_{1,0} is column 1, a_{M,0} is column 2M-2
    assert not block.matrix[:, 1].any()
    assert not block.matrix[:, 4].any()
    energies = block.nonnegative_branch()
    assert np.allclose(energies, [0.0, 2.0, 2.0])


def test_k_pi_single_row():
    block = build_block(LatticeSpec(1, 2), 1.0, math.pi)
    assert block.is_self_conjugate
    assert np.allclose(block.nonnegative_branch(), [4.0])


def test_generic_block_not_self_conjugate():
    block = build_block(LatticeSpec(2, 4), 1.0, math.pi / 2)
    assert not block.is_self_conjugate
    with pytest.raises(DomainError):
        block.nonnegative_branch()
    assert np.allclose(block.matrix, block.matrix.conj().T)


def test_blocks_reproduce_spectrum():
    for spec in (LatticeSpec(1, 1), LatticeSpec(2, 2), LatticeSpec(3, 4),
                 LatticeSpec(2, 5)):
        report = verify_block_decomposition(spec, 1.0)
        assert report.passed
        assert len(report.blocks) == spec.cols
        assert report.off_block < 1e-10
        assert report.spectrum_deviation < 1e-10


def test_blocks_scale_with_t():
    spec = LatticeSpec(2, 3)
    for t in (0.5, -1.5):
        report = verify_block_decomposition(spec, t)
        assert report.t == t
        union = np.sort(np.concatenate(
            [b.eigenvalues for b in build_blocks(spec, t)]))
        expected = np.sort(np.concatenate(
            [b.eigenvalues for b in build_blocks(spec, 1.0)])) * abs(t)
        assert np.allclose(union, expected)


def test_block_mismatch_detected(mocker):
    spec = LatticeSpec(2, 3)
    wrong = build_blocks(spec, 2.0)
    mocker.patch('pymajorana.fourier.build_blocks', return_value=wrong)
    with pytest.raises(InvariantViolation) as e:
        verify_block_decomposition(spec, 1.0)
    assert e.value.name == 'fourier_block'


def test_conjugate_blocks_share_singular_values():
    for spec in (LatticeSpec(3, 4), LatticeSpec(2, 5)):
        N = spec.cols
        for l, K in enumerate(k_values(N)):
            block = build_block(spec, 1.0, K)
            partner = build_block(spec, 1.0, k_values(N)[(N - l) % N])
            assert np.allclose(block.singular_values,
                               partner.singular_values, atol=1e-12)
