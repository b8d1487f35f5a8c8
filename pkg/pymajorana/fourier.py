"""
Fourier blocks of the sweet-spot Majorana form along the periodic
direction.

The plane-wave vectors ``v[m, n, f] = exp(iKn) / sqrt(N)`` with
``K = 2 pi l / N`` turn ``iA`` into ``N`` Hermitian blocks of size ``2M``
over the basis ``(a_{1,K}, b_{1,K}, ..., a_{M,K}, b_{M,K})``. For ``K = 0``
the onsite coefficient ``(1 - e^{iK})`` vanishes, which leaves
``b_{1,0}`` and ``a_{M,0}`` uncoupled.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from addict import Dict

from .hamiltonian import CouplingParams, build_majorana
from .interface import DomainError, InvariantViolation
from .lattice import Flavor, majorana_index
from .utils import ZERO_TOL, max_abs

logger = logging.getLogger(__name__)

GRID_TOL = 1e-9
COMMUTATOR_TOL = 1e-12


@dataclass
class FourierBlock(object):
    K: float
    l: int
    matrix: np.ndarray

    @property
    def is_self_conjugate(self):
        return self.l == 0 or abs(self.K - math.pi) < GRID_TOL

    @property
    def eigenvalues(self):
        return scipy.linalg.eigvalsh(self.matrix)

    @property
    def singular_values(self):
        return np.sort(np.abs(self.eigenvalues))

    def nonnegative_branch(self):
        """
        Upper half of the block spectrum. Only self-conjugate blocks
        (K = 0 or pi) have a spectrum symmetric about zero.
        """
        if not self.is_self_conjugate:
            raise DomainError('K=%g block is not self-conjugate' % self.K,
                              name='nonnegative_branch')
        values = self.eigenvalues
        return np.abs(values[len(values) // 2:])


def k_values(N):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError('N must be a positive integer, got %r' % (N, ),
                          name='k_values')
    return [2 * math.pi * l / N for l in range(int(N))]


def grid_label(N, K):
    """Returns ``l`` with ``K == 2 pi l / N`` modulo 2 pi."""
    x = K * N / (2 * math.pi)
    l = int(round(x))
    if abs(x - l) * 2 * math.pi / N > GRID_TOL:
        raise DomainError('K=%r is not on the %d-point grid' % (K, N),
                          name='k_grid', deviation=abs(x - l))
    return l % N


def fourier_vectors(spec, K):
    """Columns ``(m, flavor)`` of plane waves on the Majorana indices."""
    M, N = spec.rows, spec.cols
    V = np.zeros((spec.num_majoranas, 2 * M), dtype=complex)
    phases = np.exp(1j * K * np.arange(1, N + 1)) / math.sqrt(N)
    for m in range(1, M + 1):
        for flavor in Flavor:
            column = 2 * (m - 1) + flavor
            for n in range(1, N + 1):
                V[majorana_index(spec, m, n, flavor), column] = phases[n - 1]
    return V


def fourier_basis(spec):
    return np.hstack([fourier_vectors(spec, K) for K in k_values(spec.cols)])


def build_block(spec, t, K):
    l = grid_label(spec.cols, K)
    K = 2 * math.pi * l / spec.cols
    M = spec.rows
    block = np.zeros((2 * M, 2 * M), dtype=complex)
    onsite = -2j * t * (1 - np.exp(1j * K))
    if l == 0:
        onsite = 0.0
    for m in range(M):
        a, b = 2 * m, 2 * m + 1
        block[a, b] = onsite
        block[b, a] = np.conj(onsite)
        if m + 1 < M:
            block[a, b + 2] = 2j * t
            block[b + 2, a] = -2j * t
    return FourierBlock(K=K, l=l, matrix=block)


def build_blocks(spec, t):
    return [build_block(spec, t, K) for K in k_values(spec.cols)]


def verify_block_decomposition(spec, t, tol=ZERO_TOL):
    form = build_majorana(spec, CouplingParams.sweet_spot(t))
    X = form.hermitian_matrix()
    scale = 1.0 + form.norm()
    U = fourier_basis(spec)
    unitarity = max_abs(U.conj().T.dot(U) - np.eye(U.shape[1]))
    if unitarity > tol:
        raise InvariantViolation('Fourier basis is not unitary',
                                 name='fourier_unitarity',
                                 deviation=unitarity)

    rotated = U.conj().T.dot(X).dot(U)
    blocks = build_blocks(spec, t)
    size = 2 * spec.rows
    mask = np.ones(rotated.shape, dtype=bool)
    rows = []
    block_deviation = 0.0
    for i, block in enumerate(blocks):
        window = slice(i * size, (i + 1) * size)
        mask[window, window] = False
        deviation = max_abs(rotated[window, window] - block.matrix)
        block_deviation = max(block_deviation, deviation)
        if deviation > tol * scale:
            raise InvariantViolation(
                'Block K=%g differs from the rotated form' % block.K,
                name='fourier_block', deviation=deviation)
        rows.append(Dict(K=block.K, l=block.l,
                         eigenvalues=[float(e) for e in block.eigenvalues]))

    off_block = max_abs(rotated[mask])
    if off_block > tol * scale:
        raise InvariantViolation('Rotated form is not block diagonal',
                                 name='block_diagonal', deviation=off_block)

    union = np.sort(np.concatenate([b.eigenvalues for b in blocks]))
    full = scipy.linalg.eigvalsh(X)
    spectrum_deviation = max_abs(union - full)
    if spectrum_deviation > tol * scale:
        raise InvariantViolation('Block spectra do not add up to the form',
                                 name='block_spectrum_union',
                                 deviation=spectrum_deviation)

    embedded = [
        fourier_vectors(spec, b.K).dot(b.matrix).dot(
            fourier_vectors(spec, b.K).conj().T)
        for b in blocks
    ]
    commutator_tol = COMMUTATOR_TOL * max(1.0, form.norm() ** 2)
    commutator = 0.0
    for (i, P), (j, Q) in itertools.combinations(enumerate(embedded), 2):
        deviation = max_abs(P.dot(Q) - Q.dot(P))
        commutator = max(commutator, deviation)
        if deviation > commutator_tol:
            raise InvariantViolation(
                'Blocks K=%g and K=%g do not commute' % (
                    blocks[i].K, blocks[j].K),
                name='block_commutator', deviation=deviation)

    logger.info('Block decomposition %s t=%g: off-block %.2e, union %.2e',
                spec, t, off_block, spectrum_deviation)
    return Dict(
        spec=str(spec),
        t=t,
        blocks=rows,
        block_deviation=block_deviation,
        off_block=off_block,
        spectrum_deviation=spectrum_deviation,
        commutator=commutator,
        passed=True,
    )
