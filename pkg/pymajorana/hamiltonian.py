"""
The model in its two single-particle representations.

``NambuForm`` is the Bogoliubov-de Gennes matrix over (c, c^+) and
``MajoranaForm`` the real antisymmetric matrix ``A`` of
``H = (i/4) gamma^T A gamma + offset``. Both are assembled bond by bond
from the same lattice walk so that N=1 and N=2 wrap-arounds accumulate
additively.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from addict import Dict

from .interface import (ComputationError, DomainError, InvariantViolation,
                        QuadraticForm)
from .lattice import Flavor, site_index
from .utils import ZERO_TOL, max_abs, zero_tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CouplingParams(object):
    t: float = 1.0
    delta: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        for name in ('t', 'delta', 'mu'):
            if not np.isfinite(getattr(self, name)):
                raise DomainError('%s must be finite' % (name, ),
                                  name='coupling_params')

    @classmethod
    def sweet_spot(cls, t=1.0):
        return cls(t=t, delta=t, mu=t)

    @property
    def is_sweet_spot(self):
        return self.t == self.delta == self.mu

    def as_dict(self):
        return dict(t=self.t, delta=self.delta, mu=self.mu)


@dataclass
class SpectrumResult(object):
    energies: np.ndarray
    offset: float = 0.0
    source: str = ''
    full: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.energies = np.sort(np.asarray(self.energies, dtype=float))
        if self.full is None:
            self.full = np.sort(np.concatenate([-self.energies,
                                                self.energies]))

    @property
    def ground_energy(self):
        return -0.5 * float(np.sum(self.energies)) + self.offset

    @property
    def gap(self):
        """Smallest single-particle energy above the zero threshold."""
        tol = zero_tolerance(self.scale)
        positive = self.energies[self.energies > tol]
        return float(positive[0]) if positive.size else 0.0

    @property
    def splitting(self):
        return float(self.energies[0]) if self.energies.size else 0.0

    @property
    def scale(self):
        return float(self.energies[-1]) if self.energies.size else 0.0

    def to_dict(self):
        return Dict(
            source=self.source,
            energies=[float(e) for e in self.energies],
            full=[float(e) for e in self.full],
            offset=float(self.offset),
            ground_energy=self.ground_energy,
        )


def bonds(spec):
    """
    Directed nearest-neighbour bonds ``(r, r')`` as flat site indices:
    vertical to ``(m+1, n)`` while ``m < M`` and horizontal to
    ``(m, n+1)`` with the column wrapped.
    """
    result = []
    for m in range(1, spec.rows + 1):
        for n in range(1, spec.cols + 1):
            r = site_index(spec, m, n)
            if m < spec.rows:
                result.append((r, site_index(spec, m + 1, n)))
            result.append((r, site_index(spec, m, n + 1)))
    return result


class NambuForm(QuadraticForm):
    """
    ``H = 1/2 Psi^+ H_BdG Psi + offset`` with ``Psi = (c_1..c_L, c_1^+..)``
    and ``offset = 1/2 Tr h + constant``.
    """

    kind = 'nambu'

    def __init__(self, spec, params, matrix, offset, constant):
        super(NambuForm, self).__init__(spec, params, matrix, offset)
        self.constant = constant

    def hermitian_matrix(self):
        return self.matrix

    def norm(self):
        return float(np.linalg.norm(self.matrix, 2))


class MajoranaForm(QuadraticForm):

    kind = 'majorana'

    def hermitian_matrix(self):
        return 1j * self.matrix

    def norm(self):
        return float(np.linalg.norm(self.matrix, 2))

    def nonzero_pairs(self, tol=0.0):
        """Upper-triangle index pairs whose coefficient exceeds ``tol``."""
        rows, cols = np.nonzero(np.abs(np.triu(self.matrix)) > tol)
        return set(zip(rows.tolist(), cols.tolist()))


def build_nambu(spec, p):
    L = spec.num_sites
    h = np.zeros((L, L))
    d = np.zeros((L, L))
    constant = 0.0
    for i, j in bonds(spec):
        h[i, j] -= p.t
        h[j, i] -= p.t
        if i != j:
            d[i, j] += p.delta
            d[j, i] -= p.delta

    for i in range(L):
        h[i, i] += 2 * p.mu
        constant -= p.mu

    matrix = np.zeros((2 * L, 2 * L), dtype=complex)
    matrix[:L, :L] = h
    matrix[:L, L:] = d
    matrix[L:, :L] = d.conj().T
    matrix[L:, L:] = -h.T
    offset = 0.5 * float(np.trace(h)) + constant
    logger.debug('Nambu form %s %s: dim=%d offset=%g',
                 spec, p, 2 * L, offset)
    return NambuForm(spec, p, matrix, offset, constant)


def build_majorana(spec, p):
    A = np.zeros((spec.num_majoranas, spec.num_majoranas))
    offset = 0.0

    def add(x, y, coefficient):
        A[x, y] += coefficient
        A[y, x] -= coefficient

    for r, s in bonds(spec):
        a_r, b_r = 2 * r + Flavor.A, 2 * r + Flavor.B
        a_s, b_s = 2 * s + Flavor.A, 2 * s + Flavor.B
        add(a_r, b_s, p.t + p.delta)
        add(b_r, a_s, -(p.t - p.delta))
        if r == s:
            # -2t c^+c = -t + i t a b
            offset -= p.t

    for r in range(spec.num_sites):
        add(2 * r + Flavor.A, 2 * r + Flavor.B, -2 * p.mu)

    asym = max_abs(A + A.T)
    if asym != 0.0:
        raise InvariantViolation('Majorana matrix is not antisymmetric',
                                 name='antisymmetry', deviation=asym)

    logger.debug('Majorana form %s %s: dim=%d', spec, p, A.shape[0])
    return MajoranaForm(spec, p, A, offset)


def _eigvalsh(matrix, what):
    try:
        return scipy.linalg.eigvalsh(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise ComputationError(
            'Eigensolver failed on %s (dim=%d, norm=%.3e, finite=%s): %s' % (
                what, matrix.shape[0], max_abs(matrix),
                bool(np.all(np.isfinite(matrix))), e),
            name='eigensolver')


def single_particle_spectrum(form):
    """
    Nonnegative half of the +/- spectrum of the form's Hermitian matrix.
    """
    values = _eigvalsh(form.hermitian_matrix(), form.kind)
    half = form.dimension // 2
    energies = np.abs(values[half:])
    return SpectrumResult(energies, offset=form.offset, source=form.kind,
                          full=np.sort(values))


def particle_hole_deviation(result):
    full = np.sort(result.full)
    return max_abs(full + full[::-1])


def representation_equivalence(spec, p, tol=ZERO_TOL):
    nambu = single_particle_spectrum(build_nambu(spec, p))
    majorana = single_particle_spectrum(build_majorana(spec, p))
    scale = 1.0 + max(nambu.scale, majorana.scale)
    deviation = max_abs(nambu.full - majorana.full)
    ground = abs(nambu.ground_energy - majorana.ground_energy)
    report = Dict(
        spec=str(spec),
        params=p.as_dict(),
        max_deviation=deviation,
        ground_nambu=nambu.ground_energy,
        ground_majorana=majorana.ground_energy,
        particle_hole=particle_hole_deviation(nambu),
        passed=deviation <= tol * scale and ground <= tol * scale,
    )
    if not report.passed:
        raise InvariantViolation(
            'Nambu and Majorana spectra disagree for %s %s' % (spec, p),
            name='representation_equivalence',
            deviation=max(deviation, ground))

    logger.info('Representation equivalence %s: max deviation %.2e',
                spec, deviation)
    return report
