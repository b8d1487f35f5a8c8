"""
Pseudospins of the two collective edge modes.

``s`` is built from the hopping bilinears between the edges and ``tau``
from the pair operators; both act on the four states
``|1> = |Vac>, |2> = c_1^+|Vac>, |3> = c_M^+|Vac>, |4> = c_1^+ c_M^+|Vac>``
where edge ``1`` is the row with the unpaired A Majorana and edge ``M``
the row with the unpaired B Majorana (see ``edge.resolve_edge_pair``).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from addict import Dict
from scipy import sparse
from scipy.special import entr

from .fock import FockSpace, annihilator, build_manybody_h, \
    collective_edge_modes, commutator_norm, eigensystem, phi_states, \
    two_mode_basis
from .interface import DomainError, InvariantViolation
from .utils import cluster_values, max_abs

logger = logging.getLogger(__name__)

AXES = ('x', 'y', 'z')
TRIPLES = ('s', 'tau', 'J')
MATRIX_TOL = 1e-12
FOCK_TOL = 1e-10
STATE_TOL = 1e-8
HALF_FILLED = 3.0 / 8.0

LEVI_CIVITA = np.zeros((3, 3, 3))
LEVI_CIVITA[0, 1, 2] = LEVI_CIVITA[1, 2, 0] = LEVI_CIVITA[2, 0, 1] = 1
LEVI_CIVITA[0, 2, 1] = LEVI_CIVITA[2, 1, 0] = LEVI_CIVITA[1, 0, 2] = -1


@dataclass(frozen=True)
class TwoModeBasis(object):
    """
    The four edge states with their factorized labels ``(s, tau)``:
    ``|1> = |0>_s |dn>_tau``, ``|4> = |0>_s |up>_tau``,
    ``|2> = |up>_s |0>_tau``, ``|3> = |dn>_s |0>_tau``.
    """
    labels: tuple = ('Vac', 'c1+', 'cM+', 'c1+cM+')
    factors: tuple = (('0', 'dn'), ('up', '0'), ('dn', '0'), ('0', 'up'))

    @property
    def size(self):
        return len(self.labels)

    @property
    def vectors(self):
        return np.eye(self.size, dtype=complex)

    def fock(self, space, modes):
        """Columns of the basis states in the full Fock space."""
        columns = two_mode_basis(space, modes)
        isometry = max_abs(columns.conj().T.dot(columns) - np.eye(self.size))
        if isometry > FOCK_TOL:
            raise InvariantViolation(
                'Two-mode basis is not orthonormal in the Fock space',
                name='two_mode_isometry', deviation=isometry)
        return columns


def _triples(first, second, identity):
    cf, cs = first, second
    cfd, csd = cf.conj().T, cs.conj().T
    s = dict(
        x=0.5 * (cfd.dot(cs) + csd.dot(cf)),
        y=-0.5j * (cfd.dot(cs) - csd.dot(cf)),
        z=0.5 * (cfd.dot(cf) - csd.dot(cs)),
    )
    tau = dict(
        x=0.5 * (csd.dot(cfd) + cf.dot(cs)),
        y=-0.5j * (csd.dot(cfd) - cf.dot(cs)),
        z=0.5 * (csd.dot(cs) + cfd.dot(cf) - identity),
    )
    J = dict((axis, s[axis] + tau[axis]) for axis in AXES)
    return dict(s=s, tau=tau, J=J)


def _square(triple):
    return sum(triple[axis].dot(triple[axis]) for axis in AXES)


@dataclass
class PseudospinSet(object):
    """
    ``s``, ``tau`` and ``J = s + tau`` as 4x4 matrices on the two-mode
    basis and, when a Fock space is attached, as sparse Fock operators.
    """
    spec: object
    matrices: dict
    basis: TwoModeBasis = field(default_factory=TwoModeBasis)
    fock: dict = None
    space: FockSpace = field(default=None, repr=False)
    modes: object = field(default=None, repr=False)

    def op(self, triple, axis, fock=False):
        source = self.fock if fock else self.matrices
        if source is None:
            raise DomainError('No Fock embedding for %s' % (self.spec, ),
                              name='pseudospin_fock')
        return source[triple][axis]

    def square(self, triple, fock=False):
        return _square((self.fock if fock else self.matrices)[triple])

    @property
    def identity(self):
        return np.eye(self.basis.size, dtype=complex)


def two_mode_matrices():
    first = annihilator(2, 0).toarray()
    second = annihilator(2, 1).toarray()
    return _triples(first, second, np.eye(4, dtype=complex))


def build_pseudospin(spec, space=None, cap=None, embed=True):
    """
    The 4x4 form is always built. With ``embed`` the operators are also
    realised on the Fock space of ``spec``, which is subject to the
    oracle size cap.
    """
    ps = PseudospinSet(spec, two_mode_matrices())
    if embed:
        space = space or FockSpace(spec, cap=cap)
        modes = collective_edge_modes(space)
        ps.fock = _triples(modes.first, modes.second, space.identity)
        ps.space, ps.modes = space, modes
        logger.debug('Pseudospins of %s embedded (lead=%d, tail=%d)',
                     spec, modes.pair.lead, modes.pair.tail)
    return ps


def _commutator(X, Y):
    return X.dot(Y) - Y.dot(X)


def algebra_check(ps):
    """
    Spin commutation relations of ``s``, ``tau`` and ``J``, ``[s, tau] =
    0`` and ``s^2 + tau^2 = 3/4``; 4x4 to 1e-12, Fock to 1e-10.
    """
    report = Dict(spec=str(ps.spec))
    layers = [('matrix', ps.matrices, ps.identity, MATRIX_TOL)]
    if ps.fock is not None:
        layers.append(('fock', ps.fock, ps.space.identity, FOCK_TOL))

    for layer, ops, identity, tol in layers:
        deviations = []
        for triple in TRIPLES:
            for axis in AXES:
                X = ops[triple][axis]
                deviations.append(('%s%s hermitian' % (triple, axis),
                                   max_abs(X - X.conj().T)))
            for i, j in itertools.product(range(3), repeat=2):
                expected = sum(1j * LEVI_CIVITA[i, j, k] * ops[triple][c]
                               for k, c in enumerate(AXES))
                commutator = _commutator(ops[triple][AXES[i]],
                                         ops[triple][AXES[j]])
                deviations.append(
                    ('[%s%s,%s%s]' % (triple, AXES[i], triple, AXES[j]),
                     max_abs(commutator - expected)))

        for a, b in itertools.product(AXES, repeat=2):
            deviations.append(
                ('[s%s,tau%s]' % (a, b),
                 max_abs(_commutator(ops['s'][a], ops['tau'][b]))))

        total = _square(ops['s']) + _square(ops['tau'])
        deviations.append(('s2+tau2', max_abs(total - 0.75 * identity)))
        for name, deviation in deviations:
            if deviation > tol:
                raise InvariantViolation(
                    '%s: %s fails (%s)' % (ps.spec, name, layer),
                    name=name, deviation=deviation)
        report[layer] = max(d for _, d in deviations)

    logger.info('Pseudospin algebra %s: %s', ps.spec,
                ', '.join('%s %.1e' % (k, report[k])
                          for k in ('matrix', 'fock') if k in report))
    return report


def _eigenvector(X, value, support):
    """Eigenvector of the restriction of ``X`` to ``support``."""
    block = X[np.ix_(support, support)]
    values, vectors = scipy.linalg.eigh(block)
    k = int(np.argmin(np.abs(values - value)))
    if abs(values[k] - value) > MATRIX_TOL:
        raise InvariantViolation(
            'No eigenvalue %g on %s' % (value, support),
            name='sector_eigenvector', deviation=abs(values[k] - value))
    v = np.zeros(X.shape[0], dtype=complex)
    v[support] = vectors[:, k]
    pivot = np.argmax(np.abs(v))
    return v * (abs(v[pivot]) / v[pivot])


S_SECTOR = [1, 2]
TAU_SECTOR = [0, 3]


def particle_hole_map(ps):
    """
    The involution exchanging the ``s`` sector ``{|2>, |3>}`` with the
    ``tau`` sector ``{|1>, |4>}`` eigenvector by eigenvector of ``J^x``.
    """
    sx, taux = ps.matrices['s']['x'], ps.matrices['tau']['x']
    P = np.zeros((4, 4), dtype=complex)
    for value in (0.5, -0.5):
        u = _eigenvector(sx, value, S_SECTOR)
        v = _eigenvector(taux, value, TAU_SECTOR)
        P += np.outer(u, v.conj()) + np.outer(v, u.conj())

    P_inv = P.conj().T
    deviations = dict(
        unitary=max_abs(P_inv.dot(P) - ps.identity),
        squares=max_abs(P_inv.dot(ps.square('s')).dot(P) - ps.square('tau')),
        jx=max_abs(_commutator(ps.matrices['J']['x'], P)),
    )
    for name, deviation in deviations.items():
        if deviation > MATRIX_TOL:
            raise InvariantViolation('Particle-hole map fails %s' % name,
                                     name='particle_hole_%s' % name,
                                     deviation=deviation)
    return P


def embed_two_mode(X, ps):
    """
    Lifts a 4x4 operator to ``sum X[x, y] C_x^+ V C_y`` where ``V``
    projects on empty edge modes and ``C_x^+`` creates basis state ``x``.
    """
    if ps.space is None:
        raise DomainError('No Fock embedding for %s' % (ps.spec, ),
                          name='embed_two_mode')
    f, s = ps.modes.first, ps.modes.second
    identity = ps.space.identity
    V = (identity - f.conj().T.dot(f)).dot(identity - s.conj().T.dot(s))
    lower = [identity, f, s, s.dot(f)]
    result = sparse.csr_matrix(identity.shape, dtype=complex)
    for x, y in itertools.product(range(4), repeat=2):
        if X[x, y] != 0:
            result = result + X[x, y] * lower[x].conj().T.dot(V).dot(lower[y])
    return result.tocsr()


def quantum_number_table(ps=None):
    ps = ps or PseudospinSet(None, two_mode_matrices())
    s2, tau2 = ps.square('s'), ps.square('tau')
    rows = []
    for k, label in enumerate(ps.basis.labels):
        e = ps.basis.vectors[:, k]
        values = dict(
            sz=ps.matrices['s']['z'].dot(e),
            s2=s2.dot(e),
            tauz=ps.matrices['tau']['z'].dot(e),
            tau2=tau2.dot(e),
        )
        row = Dict(state=k + 1, label=label,
                   s=ps.basis.factors[k][0], tau=ps.basis.factors[k][1])
        for name, image in values.items():
            value = float(np.real(image[k]))
            deviation = max_abs(image - value * e)
            if deviation > MATRIX_TOL:
                raise InvariantViolation(
                    '|%d> is not an eigenstate of %s' % (k + 1, name),
                    name='quantum_numbers', deviation=deviation)
            row[name] = value
        rows.append(row)
    return rows


_S_FACTOR = {'0': 0, 'up': 1, 'dn': 2}


def factor_entropy(state, basis=None):
    """
    Entanglement entropy between the ``s`` and ``tau`` factors of a
    two-mode state written in the factorized labels.
    """
    basis = basis or TwoModeBasis()
    C = np.zeros((3, 3), dtype=complex)
    for k, (s, tau) in enumerate(basis.factors):
        C[_S_FACTOR[s], _S_FACTOR[tau]] = state[k]
    p = scipy.linalg.svdvals(C) ** 2
    return float(np.sum(entr(p / np.sum(p))))


def phi_tilde_states(ps=None):
    """
    ``(|0>_s |->_tau + |->_s |0>_tau) / sqrt(2)`` for the ``x`` eigenvalues
    ``+1/2`` and ``-1/2``.
    """
    ps = ps or PseudospinSet(None, two_mode_matrices())
    jx = ps.matrices['J']['x']
    s2, tau2 = ps.square('s'), ps.square('tau')
    rows = []
    for sign, value in (('+', 0.5), ('-', -0.5)):
        v = _eigenvector(ps.matrices['tau']['x'], value, TAU_SECTOR)
        u = _eigenvector(ps.matrices['s']['x'], value, S_SECTOR)
        phi = (v + u) / math.sqrt(2)
        row = Dict(
            name='phi_tilde' + sign,
            jx_residual=max_abs(jx.dot(phi) - value * phi),
            jx=value,
            s2=float(np.real(phi.conj().dot(s2).dot(phi))),
            tau2=float(np.real(phi.conj().dot(tau2).dot(phi))),
            entropy=factor_entropy(phi, ps.basis),
        )
        if row.jx_residual > MATRIX_TOL:
            raise InvariantViolation(
                'phi_tilde%s is not a J^x eigenstate' % sign,
                name='phi_tilde', deviation=row.jx_residual)
        row._state = phi
        rows.append(row)
    return rows


def _expectation(state, X):
    return float(np.real(np.vdot(state, X.dot(state))))


def _flagged(jx, s2, tau2):
    return (abs(abs(jx) - 0.5) <= STATE_TOL
            and abs(s2 - HALF_FILLED) <= STATE_TOL
            and abs(tau2 - HALF_FILLED) <= STATE_TOL)


def eigenstate_expectations(spec, p, cap=None):
    """
    Joint eigenstates of ``H``, ``J^x`` and the embedded particle-hole map
    with ``<s^2>`` and ``<tau^2>``. States with ``|J^x| = 1/2`` and
    ``<s^2> = <tau^2> = 3/8`` are flagged.
    """
    if not p.is_sweet_spot:
        raise DomainError('Pseudospin expectations need t = delta = mu',
                          name='eigenstate_expectations')
    ps = build_pseudospin(spec, cap=cap)
    h = build_manybody_h(ps.space, p)
    jx = ps.op('J', 'x', fock=True)
    s2, tau2 = ps.square('s', fock=True), ps.square('tau', fock=True)
    P = embed_two_mode(particle_hole_map(ps), ps)

    conserved = commutator_norm(jx, h)
    if conserved > MATRIX_TOL * (1 + max_abs(h)):
        raise InvariantViolation('J^x does not commute with H on %s' % spec,
                                 name='jx_conserved', deviation=conserved)

    values, vectors = eigensystem(h)
    rows = []
    for energy, _, index in cluster_values(values):
        V = vectors[:, index]
        JV = jx.dot(V)
        compressed = V.conj().T.dot(JV)
        leak = max_abs(JV - V.dot(compressed))
        if leak > STATE_TOL:
            raise InvariantViolation(
                'J^x leaves the E=%.12g cluster' % energy,
                name='simultaneous_diagonalization', deviation=leak)

        j_values, W = scipy.linalg.eigh(compressed)
        for j_value, _, j_index in cluster_values(j_values, STATE_TOL):
            Y = V.dot(W[:, j_index])
            if Y.shape[1] > 1:
                # P may leave the subspace; only its compression is used
                _, R = scipy.linalg.eigh(Y.conj().T.dot(P.dot(Y)))
                Y = Y.dot(R)
            for k in range(Y.shape[1]):
                y = Y[:, k]
                s2_value = _expectation(y, s2)
                tau2_value = _expectation(y, tau2)
                rows.append(Dict(
                    energy=energy, jx=j_value, s2=s2_value, tau2=tau2_value,
                    phi_flag=int(_flagged(j_value, s2_value, tau2_value))))

    flagged = sum(r.phi_flag for r in rows)
    logger.info('Pseudospin expectations %s: %d states, %d flagged',
                spec, len(rows), flagged)
    return Dict(spec=str(spec), params=p.as_dict(), jx_commutator=conserved,
                flagged=flagged, rows=rows)


def phi_state_expectations(ps, occupied=()):
    """``<J^x>``, ``<s^2>`` and ``<tau^2>`` of ``Phi_-`` and ``Phi_+``."""
    if ps.space is None:
        raise DomainError('No Fock embedding for %s' % (ps.spec, ),
                          name='phi_state_expectations')
    jx = ps.op('J', 'x', fock=True)
    s2, tau2 = ps.square('s', fock=True), ps.square('tau', fock=True)
    rows = []
    for name, state in zip(('phi-', 'phi+'), phi_states(ps.space, occupied)):
        row = Dict(name=name, jx=_expectation(state, jx),
                   s2=_expectation(state, s2), tau2=_expectation(state, tau2))
        row.phi_flag = int(_flagged(row.jx, row.s2, row.tau2))
        rows.append(row)
    return rows
