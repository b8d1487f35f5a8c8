"""
Zero modes of the Majorana form and the edge-mode operator.

At ``t = delta = mu`` the K=0 Majoranas pair up along the rows,
``a_{m,0}`` with ``b_{m+1,0}``, and two of them stay unpaired: the B
flavor on one edge row and the A flavor on the other. Which row is which
is read off the kernel of the K=0 block rather than assumed.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from addict import Dict

from .fourier import build_block
from .hamiltonian import CouplingParams, build_majorana, \
    single_particle_spectrum
from .interface import DomainError, InvariantViolation
from .lattice import Flavor, row_indices, row_of
from .process import TaskPool
from .utils import ZERO_TOL, cluster_values, max_abs, zero_tolerance

logger = logging.getLogger(__name__)

EdgePair = namedtuple('EdgePair', ['lead', 'tail'])


@dataclass
class ModeOperator(object):
    """
    Fermionic operator ``d = sum_j w_j gamma_j`` over the Majorana basis,
    normalised so that ``{d, d^+} = 2 sum |w_j|^2 = 1``.
    """
    spec: object
    coefficients: np.ndarray
    label: str = ''

    @property
    def anticommutator(self):
        return 2.0 * float(np.sum(np.abs(self.coefficients) ** 2))

    def majorana_components(self):
        """Real vectors ``(u, v)`` with ``d = (u.gamma - i v.gamma) / 2``."""
        w = np.asarray(self.coefficients)
        return 2.0 * w.real, -2.0 * w.imag

    def residual(self, form):
        """Largest ``|A u|`` over the two Majorana components."""
        return max(float(np.linalg.norm(form.matrix.dot(x)))
                   for x in self.majorana_components())

    def is_zero_mode(self, form, tol=None):
        if tol is None:
            tol = zero_tolerance(form.norm())
        return self.residual(form) <= tol


def row_weights(spec, vector):
    weights = np.abs(np.asarray(vector)) ** 2
    total = float(np.sum(weights))
    if total == 0.0:
        raise DomainError('Zero vector has no profile', name='row_weights')
    per_row = weights.reshape(spec.rows, 2 * spec.cols).sum(axis=1)
    return per_row / total


def participation_ratio(vector):
    p = np.abs(np.asarray(vector)) ** 2
    p = p / np.sum(p)
    return float(1.0 / np.sum(p ** 2))


def _labels(spec):
    index = np.arange(spec.num_majoranas)
    return np.array([2 * (row_of(spec, i) - 1) + i % 2 for i in index],
                    dtype=float)


def pure_representatives(Z, labels):
    """
    Rotates the orthonormal columns of ``Z`` into eigenvectors of the
    compressed label operator. Columns spanned by vectors of a single
    (row, flavor) label come out supported on that label only.
    """
    if Z.shape[1] == 0:
        return Z
    compressed = Z.T.dot(labels[:, None] * Z)
    _, R = scipy.linalg.eigh(compressed)
    pure = Z.dot(R)
    for k in range(pure.shape[1]):
        pivot = np.argmax(np.abs(pure[:, k]))
        if pure[pivot, k] < 0:
            pure[:, k] = -pure[:, k]
    return pure


def kernel(matrix, tol):
    _, s, vh = scipy.linalg.svd(matrix)
    return vh[s <= tol].T, s


def detect_zero_modes(form, tol=None):
    spec = form.spec
    if tol is None:
        tol = zero_tolerance(form.norm())
    Z, _ = kernel(form.matrix, tol)
    vectors = pure_representatives(Z, _labels(spec))
    spectrum = single_particle_spectrum(form)
    profiles = [row_weights(spec, vectors[:, k])
                for k in range(vectors.shape[1])]
    report = Dict(
        spec=str(spec),
        params=form.params.as_dict(),
        tol=tol,
        count=int(vectors.shape[1]),
        profiles=[[float(w) for w in p] for p in profiles],
        participation=[participation_ratio(vectors[:, k])
                       for k in range(vectors.shape[1])],
        interior_weight=interior_weight(spec, vectors),
        gap=spectrum.gap,
        splitting=spectrum.splitting,
    )
    report._vectors = vectors
    logger.debug('%s %s: %d zero directions, gap %.3g',
                 spec, form.params, report.count, report.gap)
    return report


def resolve_edge_pair(spec, tol=ZERO_TOL):
    """
    Rows carrying the unpaired A Majorana (``lead``) and the unpaired B
    Majorana (``tail``) in the K=0 block.
    """
    block = build_block(spec, 1.0, 0.0)
    A0 = block.matrix.imag
    Z, _ = kernel(A0, zero_tolerance(np.linalg.norm(A0, 2), tol))
    labels = np.arange(2 * spec.rows, dtype=float)
    vectors = pure_representatives(Z, labels)
    lead = tail = None
    for k in range(vectors.shape[1]):
        position = int(np.argmax(np.abs(vectors[:, k])))
        row, flavor = position // 2 + 1, Flavor(position % 2)
        if flavor == Flavor.A and lead is None:
            lead = row
        elif flavor == Flavor.B and tail is None:
            tail = row

    if lead is None or tail is None:
        raise InvariantViolation(
            'K=0 block of %s has no unpaired A/B Majoranas' % (spec, ),
            name='edge_pair', deviation=float(vectors.shape[1]))
    return EdgePair(lead, tail)


def collective_vector(spec, m, flavor):
    v = np.zeros(spec.num_majoranas)
    v[row_indices(spec, m, flavor)] = 1.0 / math.sqrt(spec.cols)
    return v


def _mode(spec, first, second, label, sign=-1):
    u = collective_vector(spec, *first)
    v = collective_vector(spec, *second)
    return ModeOperator(spec, 0.5 * (u + sign * 1j * v), label=label)


def analytic_edge_operator(spec):
    """``d_M = (a_{lead,0} - i b_{tail,0}) / 2``."""
    pair = resolve_edge_pair(spec)
    return _mode(spec, (pair.lead, Flavor.A), (pair.tail, Flavor.B), 'd_M')


def bulk_mode_operator(spec, m):
    """
    ``d_m = (a_{m,0} + i b_{m+1,0}) / 2`` for ``1 <= m < M``. This sign
    makes the K=0 part of the form equal ``2t sum_m (d_m^+ d_m - 1/2)``.
    """
    if not 1 <= m < spec.rows:
        raise DomainError('bulk mode m=%r outside [1, %d)' % (m, spec.rows),
                          name='bulk_mode_operator')
    return _mode(spec, (m, Flavor.A), (m + 1, Flavor.B), 'd_%d' % m,
                 sign=1)


def localization_profile(mode, spec):
    return row_weights(spec, mode.coefficients)


def k0_diagonal_form(spec, t):
    """
    K=0 block energies: one zero mode and ``M - 1`` copies of a common
    nonzero value.
    """
    energies = build_block(spec, t, 0.0).nonnegative_branch()
    tol = zero_tolerance(2 * abs(t))
    zero = energies[energies <= tol]
    nonzero = energies[energies > tol]
    clusters = cluster_values(nonzero, ZERO_TOL)
    if len(clusters) > 1:
        spread = float(nonzero[-1] - nonzero[0])
        raise InvariantViolation(
            'K=0 block energies are not degenerate for %s' % (spec, ),
            name='k0_diagonal_form', deviation=spread)

    common = clusters[0][0] if clusters else 0.0
    return Dict(
        energies=[float(e) for e in energies],
        zero_count=int(zero.size),
        common_value=common,
        multiplicity=int(nonzero.size),
    )


def sweep_point(spec):
    def evaluate(p):
        result = single_particle_spectrum(build_majorana(spec, p))
        return Dict(t=p.t, delta=p.delta, mu=p.mu,
                    splitting=result.splitting, gap=result.gap)
    return evaluate


def splitting_sweep(spec, grid, jobs=1):
    grid = list(grid)
    for p in grid:
        if not isinstance(p, CouplingParams):
            raise DomainError('grid entries must be CouplingParams',
                              name='splitting_sweep')
    rows = TaskPool(jobs, name='Sweep').map(sweep_point(spec), grid)
    logger.info('Swept %d points on %s', len(rows), spec)
    return rows


def interior_weight(spec, vectors):
    if spec.rows <= 2:
        return 0.0
    return max(
        [float(np.sum(row_weights(spec, vectors[:, k])[1:-1]))
         for k in range(vectors.shape[1])] or [0.0])


def edge_site_weight_deviation(spec, vectors):
    """
    Largest deviation of per-site weight from ``1/N`` on the supported
    edge row of each representative.
    """
    worst = 0.0
    for k in range(vectors.shape[1]):
        p = np.abs(vectors[:, k]) ** 2
        support = p[p > 0.5 / spec.cols]
        worst = max(worst, max_abs(support - 1.0 / spec.cols))
    return worst
