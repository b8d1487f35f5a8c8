"""
Exact many-body oracle in the occupation-number basis.

Mode ``j`` (the flat site index) is bit ``j`` of the basis label and its
Jordan-Wigner string runs over the lower bits, so
``c_j = I x .. x sigma^- x Z x .. x Z`` with the least significant factor
last in the Kronecker product.
"""

import os
import math
import logging
from collections import namedtuple

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from addict import Dict
from scipy import sparse
from scipy.special import entr

from .edge import analytic_edge_operator, bulk_mode_operator, \
    resolve_edge_pair
from .fourier import build_block
from .hamiltonian import bonds, build_nambu, single_particle_spectrum
from .interface import ComputationError, DomainError, InvariantViolation, \
    ResourceLimitError
from .lattice import Flavor, site_index
from .utils import CLUSTER_TOL, cluster_values, max_abs

logger = logging.getLogger(__name__)

ORACLE_CAP = 14
DEFAULT_CAP = int(os.environ.get('PYMAJORANA_CAP', ORACLE_CAP))
DENSE_LIMIT = 2 ** 10
LOWEST_LEVELS = 16
CAR_TOL = 1e-12
STATE_TOL = 1e-12

EdgeModes = namedtuple('EdgeModes', ['first', 'second', 'pair'])

_ID2 = sparse.identity(2, format='csr')
_Z = sparse.csr_matrix(np.array([[1., 0.], [0., -1.]]))
_LOWER = sparse.csr_matrix(np.array([[0., 1.], [0., 0.]]))


def annihilator(nmodes, j):
    c = sparse.identity(1, format='csr')
    for k in reversed(range(nmodes)):
        if k > j:
            factor = _ID2
        elif k == j:
            factor = _LOWER
        else:
            factor = _Z
        c = sparse.kron(c, factor, format='csr')
    c.eliminate_zeros()
    return c.astype(complex)


def anticommutator(X, Y):
    return X.dot(Y) + Y.dot(X)


def commutator_norm(X, Y):
    if X.shape != Y.shape or X.shape[0] != X.shape[1]:
        raise DomainError(
            'Incompatible operators %s and %s' % (X.shape, Y.shape),
            name='commutator_norm')
    return max_abs(X.dot(Y) - Y.dot(X))


class FockSpace(object):
    """
    The site operators ``c_j``, ``c_j^+``, ``a_j``, ``b_j`` of one
    lattice as sparse matrices on the ``2^(MN)``-dimensional Fock space.
    """

    def __init__(self, spec, cap=None):
        cap = DEFAULT_CAP if cap is None else cap
        if spec.num_sites > cap:
            raise ResourceLimitError(
                '%s has %d sites; Fock dimension 2^%d = %d exceeds the '
                '%d-site cap' % (spec, spec.num_sites, spec.num_sites,
                                 2 ** spec.num_sites, cap),
                name='oracle_cap')

        self.spec = spec
        self.nmodes = spec.num_sites
        self.dim = 2 ** self.nmodes
        self.annihilators = [annihilator(self.nmodes, j)
                             for j in range(self.nmodes)]
        self.creators = [c.conj().T.tocsr() for c in self.annihilators]
        self.identity = sparse.identity(self.dim, dtype=complex,
                                        format='csr')
        logger.debug('Fock space %s: dim=%d', spec, self.dim)
        self.verify_car()

    def c(self, m, n):
        return self.annihilators[site_index(self.spec, m, n)]

    def cdag(self, m, n):
        return self.creators[site_index(self.spec, m, n)]

    def number(self, j):
        return self.creators[j].dot(self.annihilators[j])

    def a(self, j):
        return self.creators[j] + self.annihilators[j]

    def b(self, j):
        return -1j * (self.creators[j] - self.annihilators[j])

    def majorana(self, index):
        site, flavor = divmod(index, 2)
        return self.a(site) if flavor == Flavor.A else self.b(site)

    def vacuum(self):
        state = np.zeros(self.dim, dtype=complex)
        state[0] = 1.0
        return state

    def _sample_pairs(self):
        L = self.nmodes
        pairs = set()
        for i in range(L):
            for j in (i, (i + 1) % L, L - 1):
                pairs.add((min(i, j), max(i, j)))
        return sorted(pairs)

    def verify_car(self, pairs=None):
        pairs = self._sample_pairs() if pairs is None else pairs
        worst = 0.0
        for i, j in pairs:
            ci, cj = self.annihilators[i], self.annihilators[j]
            expected = self.identity if i == j else 0 * self.identity
            worst = max(
                worst,
                max_abs(anticommutator(ci, self.creators[j]) - expected),
                max_abs(anticommutator(ci, cj)),
            )
        if worst > CAR_TOL:
            raise InvariantViolation(
                'Canonical anticommutation fails on %s' % (self.spec, ),
                name='car', deviation=worst)
        return worst

    def mode_operator(self, mode):
        """Sparse matrix of ``sum_j w_j gamma_j`` for a ModeOperator."""
        result = sparse.csr_matrix((self.dim, self.dim), dtype=complex)
        for index, w in enumerate(mode.coefficients):
            if w != 0:
                result = result + w * self.majorana(index)
        return result

    def collective(self, m):
        """``c_{m,0} = N^{-1/2} sum_n c_{m,n}``."""
        N = self.spec.cols
        total = sum(self.c(m, n) for n in range(1, N + 1))
        return (total / math.sqrt(N)).tocsr()


def site_operators(spec, cap=None):
    return FockSpace(spec, cap=cap)


def build_manybody_h(space, p):
    h = sparse.csr_matrix((space.dim, space.dim), dtype=complex)
    cs, cds = space.annihilators, space.creators
    for i, j in bonds(space.spec):
        h = h - p.t * (cds[i].dot(cs[j]) + cds[j].dot(cs[i]))
        h = h - p.delta * (cs[i].dot(cs[j]) + cds[j].dot(cds[i]))
    for j in range(space.nmodes):
        h = h + p.mu * (2 * space.number(j) - space.identity)

    h = h.tocsr()
    h.eliminate_zeros()
    deviation = max_abs(h - h.conj().T)
    if deviation > CAR_TOL:
        raise InvariantViolation('Many-body Hamiltonian is not Hermitian',
                                 name='hermiticity', deviation=deviation)
    return h


def eigensystem(h):
    """Dense diagonalization; limited to ``DENSE_LIMIT`` dimensions."""
    if h.shape[0] > DENSE_LIMIT:
        raise ResourceLimitError(
            'Dense diagonalization limited to dimension %d, got %d' % (
                DENSE_LIMIT, h.shape[0]),
            name='dense_limit')
    try:
        return scipy.linalg.eigh(h.toarray())
    except np.linalg.LinAlgError as e:
        raise ComputationError('eigh failed (dim=%d, norm=%.3e): %s' % (
            h.shape[0], max_abs(h), e), name='eigensolver')


def manybody_spectrum(h, k=LOWEST_LEVELS):
    """
    Full spectrum up to ``DENSE_LIMIT`` dimensions, otherwise the ``k``
    lowest levels from an iterative solver. Returns ``(values, complete)``.
    """
    if h.shape[0] <= DENSE_LIMIT:
        return scipy.linalg.eigvalsh(h.toarray()), True

    try:
        values = scipy.sparse.linalg.eigsh(h, k=k, which='SA',
                                           return_eigenvectors=False)
    except scipy.sparse.linalg.ArpackNoConvergence as e:
        raise ComputationError('eigsh did not converge (dim=%d): %s' % (
            h.shape[0], e), name='eigensolver')
    return np.sort(values.real), False


def degeneracy_multiplicities(space, p, tol=CLUSTER_TOL):
    values, complete = manybody_spectrum(build_manybody_h(space, p))
    clusters = cluster_values(values, tol)
    if not complete and len(clusters) > 1:
        # the highest cluster may be cut by the iterative solver
        clusters = clusters[:-1]

    rows = [Dict(energy=e, multiplicity=k) for e, k, _ in clusters]
    odd = [r for r in rows if r.multiplicity % 2]
    if p.is_sweet_spot and p.t != 0 and odd:
        raise InvariantViolation(
            'Odd multiplicity at E=%.12g on %s' % (odd[0].energy, space.spec),
            name='even_degeneracy', deviation=float(len(odd)))
    return rows


def free_fermion_levels(result):
    """All ``offset + sum_k n_k e_k - 1/2 sum_k e_k`` for ``n_k in {0,1}``."""
    levels = np.zeros(1)
    for e in result.energies:
        levels = np.concatenate([levels, levels + e])
    return np.sort(levels + result.ground_energy)


def oracle_consistency(space, p, tol=1e-8):
    values, complete = manybody_spectrum(build_manybody_h(space, p))
    if not complete:
        raise ResourceLimitError('Full spectrum needs a dense oracle',
                                 name='dense_limit')
    levels = free_fermion_levels(
        single_particle_spectrum(build_nambu(space.spec, p)))
    deviation = max_abs(values - levels)
    if deviation > tol * (1 + max_abs(levels)):
        raise InvariantViolation(
            'Many-body spectrum differs from free-fermion levels on %s %s' % (
                space.spec, p),
            name='oracle_consistency', deviation=deviation)
    return deviation


def collective_edge_modes(space, pair=None):
    """
    Collective operators of the two edges, ordered ``(lead, tail)``:
    ``first`` sits on the row with the unpaired A Majorana.
    """
    pair = pair or resolve_edge_pair(space.spec)
    first = space.collective(pair.lead)
    second = space.collective(pair.tail)
    deviation = max(
        max_abs(anticommutator(first, first.conj().T) - space.identity),
        max_abs(anticommutator(second, second.conj().T) - space.identity),
    )
    if pair.lead != pair.tail:
        deviation = max(deviation, max_abs(anticommutator(first, second)),
                        max_abs(anticommutator(first, second.conj().T)))
    if deviation > CAR_TOL:
        raise InvariantViolation('Collective edge modes violate CAR',
                                 name='collective_car', deviation=deviation)
    return EdgeModes(first, second, pair)


def two_mode_basis(space, modes):
    """``|Vac>, c_1^+|Vac>, c_M^+|Vac>, c_1^+ c_M^+|Vac>`` as columns."""
    vac = space.vacuum()
    f, s = modes.first.conj().T, modes.second.conj().T
    return np.column_stack([vac, f.dot(vac), s.dot(vac), f.dot(s.dot(vac))])


def two_mode_amplitudes(space, modes, state, tol=1e-10):
    """
    Amplitudes of ``state`` on the two-mode basis as a 2x2 matrix
    indexed by the occupations ``(n_first, n_second)``.
    """
    basis = two_mode_basis(space, modes)
    coefficients = basis.conj().T.dot(state)
    leak = float(np.linalg.norm(state - basis.dot(coefficients)))
    if leak > tol:
        raise InvariantViolation(
            'State leaves the two-mode edge subspace',
            name='two_mode_subspace', deviation=leak)
    return coefficients[[0, 2, 1, 3]].reshape(2, 2)


def entanglement_entropy(amplitudes):
    s = scipy.linalg.svdvals(np.asarray(amplitudes))
    p = s ** 2
    p = p / np.sum(p)
    return float(np.sum(entr(p)))


def spin_mapping_states(amplitudes):
    """
    The two spin pictures of an edge state, as 2x2 matrices indexed by
    (spin on the first edge, spin on the second edge) with 0 = down.
    The pair mapping sends ``c_M^+ c_1^+|Vac>`` to up-up; the hole mapping
    sends ``c_1^+|Vac>`` to up-down and ``c_M^+|Vac>`` to down-up.
    """
    C = np.asarray(amplitudes, dtype=complex)
    pair = np.zeros((2, 2), dtype=complex)
    pair[0, 0] = C[0, 0]
    pair[1, 1] = -C[1, 1]
    hole = np.zeros((2, 2), dtype=complex)
    hole[1, 0] = C[1, 0]
    hole[0, 1] = C[0, 1]
    return Dict(pair=pair, hole=hole)


def edge_pair_states(space):
    spec = space.spec
    if spec.rows < 2:
        raise DomainError('Edge pair states need M >= 2', name='edge_pair')
    modes = collective_edge_modes(space)
    d = space.mode_operator(analytic_edge_operator(spec))
    vac = space.vacuum()
    hole = (modes.first.conj().T.dot(vac)
            - modes.second.conj().T.dot(vac)) / math.sqrt(2)
    particle = d.conj().T.dot(hole)
    annihilated = float(np.linalg.norm(d.dot(hole)))
    if annihilated > STATE_TOL:
        raise InvariantViolation('d_M does not annihilate |M-Vac>',
                                 name='mode_vacuum', deviation=annihilated)

    norm = float(np.linalg.norm(particle))
    if abs(norm - 1) > STATE_TOL:
        raise InvariantViolation('d_M^+|M-Vac> is not normalised',
                                 name='particle_norm', deviation=abs(norm - 1))

    C_hole = two_mode_amplitudes(space, modes, hole)
    C_particle = two_mode_amplitudes(space, modes, particle)
    report = Dict(
        spec=str(spec),
        lead=modes.pair.lead,
        tail=modes.pair.tail,
        annihilation_residual=annihilated,
        hole_entropy=entanglement_entropy(C_hole),
        particle_entropy=entanglement_entropy(C_particle),
        hole_mapping_entropy=entanglement_entropy(
            spin_mapping_states(C_hole).hole),
        pair_mapping_entropy=entanglement_entropy(
            spin_mapping_states(C_particle).pair),
    )
    report._hole = hole
    report._particle = particle
    logger.info('Edge pair states %s: S(hole)=%.12f S(particle)=%.12f',
                spec, report.hole_entropy, report.particle_entropy)
    return report


def bulk_mode_operators(space):
    return [space.mode_operator(bulk_mode_operator(space.spec, m))
            for m in range(1, space.spec.rows)]


def d_vacuum_state(space):
    """
    ``|d-Vac> = Lambda prod_j d_j |Vac>`` over the bulk modes, followed by
    ``d_M`` unless it already annihilates the product, so that every
    ``d_j`` including ``d_M`` annihilates the result. Returns
    ``(state, Lambda)``.
    """
    ds = bulk_mode_operators(space)
    edge = space.mode_operator(analytic_edge_operator(space.spec))
    state = space.vacuum()
    for d in ds:
        state = d.dot(state)
    if float(np.linalg.norm(edge.dot(state))) > STATE_TOL:
        state = edge.dot(state)

    norm = float(np.linalg.norm(state))
    if norm < STATE_TOL:
        raise InvariantViolation('prod d_j |Vac> vanishes',
                                 name='d_vacuum', deviation=norm)
    state = state / norm
    residual = max(float(np.linalg.norm(d.dot(state))) for d in ds + [edge])
    if residual > STATE_TOL:
        raise InvariantViolation('|d-Vac> is not annihilated by all d_j',
                                 name='d_vacuum', deviation=residual)
    return state, 1.0 / norm


def phi_states(space, occupied=()):
    """
    ``Phi_- = prod_{j in occupied} d_j^+ |d-Vac>`` and
    ``Phi_+ = d_M^+ Phi_-``.
    """
    ds = bulk_mode_operators(space)
    state, _ = d_vacuum_state(space)
    for j in sorted(occupied, reverse=True):
        if not 1 <= j < space.spec.rows:
            raise DomainError('d_%r is not a bulk mode' % (j, ),
                              name='phi_states')
        state = ds[j - 1].conj().T.dot(state)
    d = space.mode_operator(analytic_edge_operator(space.spec))
    return state, d.conj().T.dot(state)


def degeneracy_pairing_check(space, h, d, tol=1e-9):
    """
    For every energy cluster, the states annihilated by ``d`` are mapped
    by ``d^+`` to normalised eigenstates of the same energy.
    """
    values, vectors = eigensystem(h)
    worst = 0.0
    rows = []
    for energy, size, index in cluster_values(values):
        V = vectors[:, index]
        D = d.dot(V)
        _, s, vh = scipy.linalg.svd(D, full_matrices=True)
        s = np.concatenate([s, np.zeros(size - len(s))])
        null = vh[s <= tol].conj().T
        for k in range(null.shape[1]):
            psi = V.dot(null[:, k])
            phi = d.conj().T.dot(psi)
            norm_error = abs(float(np.linalg.norm(phi)) - 1.0)
            residual = float(np.linalg.norm(h.dot(phi) - energy * phi))
            worst = max(worst, norm_error, residual)
        rows.append(Dict(energy=energy, multiplicity=size,
                         annihilated=int(null.shape[1])))

    if worst > tol * (1 + max_abs(values)):
        raise InvariantViolation('d_M^+ does not pair degenerate states',
                                 name='degeneracy_pairing', deviation=worst)
    return Dict(clusters=rows, max_residual=worst)


def k0_oracle(space, t):
    """
    Many-body K=0 form ``(i/4) gamma0^T A0 gamma0`` against
    ``2t sum_m (d_m^+ d_m - 1/2)`` and against the block's free-fermion
    levels.
    """
    spec = space.spec
    block = build_block(spec, t, 0.0)
    A0 = block.matrix.imag
    gammas = []
    norm = 1.0 / math.sqrt(spec.cols)
    for m in range(1, spec.rows + 1):
        for flavor in Flavor:
            total = sum(space.majorana(2 * site_index(spec, m, n) + flavor)
                        for n in range(1, spec.cols + 1))
            gammas.append((norm * total).tocsr())

    h0 = sparse.csr_matrix((space.dim, space.dim), dtype=complex)
    for p in range(len(gammas)):
        for q in range(len(gammas)):
            if A0[p, q] != 0:
                h0 = h0 + 0.25j * A0[p, q] * gammas[p].dot(gammas[q])

    diagonal = -0.5 * (spec.rows - 1) * 2 * t * space.identity
    for d in bulk_mode_operators(space):
        diagonal = diagonal + 2 * t * d.conj().T.dot(d)
    residual = max_abs(h0 - diagonal)

    energies = block.nonnegative_branch()
    levels = np.zeros(1)
    for e in energies:
        levels = np.concatenate([levels, levels + e])
    levels = np.sort(levels - 0.5 * np.sum(energies))
    expected = np.unique(np.round(levels, 9))
    checks = [('k0_diagonal_form', residual)]
    level_deviation = None
    if space.dim <= DENSE_LIMIT:
        values = scipy.linalg.eigvalsh(h0.toarray())
        distinct = np.unique(np.round(values, 9))
        level_deviation = float('inf')
        if distinct.shape == expected.shape:
            level_deviation = max_abs(distinct - expected)
        checks.append(('k0_levels', level_deviation))
    else:
        logger.debug('%s: K=0 levels not diagonalized above dimension %d',
                     spec, DENSE_LIMIT)

    tol = 1e-10 * (1 + abs(t))
    for name, deviation in checks:
        if deviation > tol:
            raise InvariantViolation(
                'K=0 form on %s fails %s' % (spec, name), name=name,
                deviation=deviation)
    return Dict(residual=residual, level_deviation=level_deviation,
                common_value=2 * t, levels=[float(v) for v in expected])
