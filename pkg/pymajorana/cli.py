"""Command line front end: ``pymajorana [options] COMMAND``."""

import argparse
import itertools
import logging
import math
import sys

from addict import Dict

from .edge import analytic_edge_operator, detect_zero_modes, \
    k0_diagonal_form, resolve_edge_pair, splitting_sweep
from .fock import DEFAULT_CAP, ORACLE_CAP, FockSpace, build_manybody_h, \
    commutator_norm, degeneracy_multiplicities, edge_pair_states, \
    k0_oracle, oracle_consistency, DENSE_LIMIT
from .fourier import verify_block_decomposition
from .hamiltonian import CouplingParams, build_majorana, \
    representation_equivalence, single_particle_spectrum
from .interface import DomainError, InvariantViolation, MajoranaError, \
    UsageError
from .lattice import LatticeSpec
from .pseudospin import algebra_check, build_pseudospin, \
    eigenstate_expectations, phi_state_expectations, phi_tilde_states
from .serialize import FORMATS, serialize, write_output
from .utils import ZERO_TOL, parse_grid, parse_key_values, parse_number, \
    zero_tolerance

logger = logging.getLogger(__name__)

COMMANDS = ('spectrum', 'blocks', 'zero-modes', 'sweep', 'oracle',
            'pseudospin', 'check')
ORACLE_COMMANDS = ('oracle', 'pseudospin')

DEFAULTS = dict(
    rows=None,
    cols=None,
    t=1.0,
    delta=1.0,
    mu=1.0,
    tol=ZERO_TOL,
    format='json',
    out='-',
    jobs=1,
    cap=DEFAULT_CAP,
    grid=(),
    scale=None,
)
INT_KEYS = ('rows', 'cols', 'jobs', 'cap')
FLOAT_KEYS = ('t', 'delta', 'mu', 'tol')
ENTROPY_TOL = 1e-12
DENSE_SITES = DENSE_LIMIT.bit_length() - 1


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message, name='usage')


def build_parser():
    parser = ArgumentParser(
        prog='pymajorana',
        description='Majorana edge modes of the Kitaev model on a cylinder')
    parser.add_argument('--rows', help='M, rows along the open direction')
    parser.add_argument('--cols', help='N, columns along the periodic one')
    parser.add_argument('--t', help='hopping amplitude')
    parser.add_argument('--delta', help='p-wave pairing amplitude')
    parser.add_argument('--mu', help='chemical potential')
    parser.add_argument('--tol', help='relative zero tolerance')
    parser.add_argument('--format', choices=FORMATS)
    parser.add_argument('--out', help='output path, - for stdout')
    parser.add_argument('--jobs', help='worker threads for sweeps')
    parser.add_argument('--cap', help='largest M*N for the Fock oracle')
    parser.add_argument('--config', help='flat key=value config file')
    parser.add_argument('--grid', action='append',
                        help='sweep axis name=v1,v2 or name=start:stop:count')
    parser.add_argument('--scale',
                        help='t=delta=mu value(s), same syntax as --grid')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', action='store_true')
    verbosity.add_argument('--quiet', action='store_true')
    parser.add_argument('command', choices=COMMANDS)
    return parser


def _read_config(path):
    try:
        with open(path) as f:
            return parse_key_values(f.read(), source=path)
    except (IOError, OSError) as e:
        raise UsageError('Cannot read config %s: %s' % (path, e),
                         name='config')


def _coerce(key, value):
    if key in INT_KEYS or key in FLOAT_KEYS:
        number = parse_number(value, key)
        if not math.isfinite(number):
            raise UsageError('%s must be finite, got %r' % (key, value),
                             name='parse_config')
        if key in FLOAT_KEYS:
            return number
        if number != int(number):
            raise UsageError('%s must be an integer, got %r' % (key, value),
                             name='parse_config')
        return int(number)
    if key == 'grid':
        if isinstance(value, (list, tuple)):
            return tuple(value)
        return tuple(v.strip() for v in value.split(';') if v.strip())
    return value


def parse_config(argv=None):
    """
    Defaults, then the ``--config`` file, then flags. Unknown config keys
    and malformed values are usage errors.
    """
    args = build_parser().parse_args(argv)
    config = Dict(DEFAULTS)

    if args.config:
        for key, value in _read_config(args.config).items():
            if key not in DEFAULTS:
                raise UsageError('Unknown config key %r in %s' % (
                    key, args.config), name='parse_config')
            config[key] = _coerce(key, value)

    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = _coerce(key, value)

    config.command = args.command
    config.verbose = args.verbose
    config.quiet = args.quiet
    validate(config)
    return config


def validate(config):
    for key in ('rows', 'cols'):
        if config[key] is None:
            raise UsageError('--%s is required' % key, name='parse_config')
        if config[key] < 1:
            raise UsageError('%s must be positive' % key,
                             name='parse_config')
    if config.tol <= 0:
        raise UsageError('tol must be positive', name='parse_config')
    if config.jobs < 1:
        raise UsageError('jobs must be positive', name='parse_config')
    if config.format not in FORMATS:
        raise UsageError('Unknown format %r' % config.format,
                         name='parse_config')

    sites = config.rows * config.cols
    if config.command in ORACLE_COMMANDS and sites > config.cap:
        raise UsageError(
            '%s needs the Fock oracle: %dx%d has %d sites, cap is %d '
            '(dimension 2^%d)' % (config.command, config.rows, config.cols,
                                  sites, config.cap, sites),
            name='oracle_cap')
    if config.command == 'pseudospin' and sites > DENSE_SITES:
        raise UsageError(
            'pseudospin diagonalizes densely: %dx%d has dimension 2^%d, '
            'limit is 2^%d' % (config.rows, config.cols, sites, DENSE_SITES),
            name='dense_limit')
    if config.cap > ORACLE_CAP:
        logger.warning('Oracle cap raised to %d sites (default %d)',
                       config.cap, ORACLE_CAP)

    for entry in config.grid:
        parse_grid(entry)
    if config.scale is not None:
        scales = parse_grid('t=' + config.scale)[1]
        if config.command != 'sweep' and len(scales) != 1:
            raise UsageError('--scale takes a single value for %s' % (
                config.command, ), name='parse_config')


def _params(config):
    if config.scale is not None:
        value = parse_grid('t=' + config.scale)[1][0]
        return CouplingParams.sweet_spot(value)
    return CouplingParams(config.t, config.delta, config.mu)


def sweep_grid(config):
    """Cartesian product in ``t, delta, mu`` order, ``mu`` fastest."""
    if config.scale is not None:
        return [CouplingParams.sweet_spot(v)
                for v in parse_grid('t=' + config.scale)[1]]

    axes = dict(t=[config.t], delta=[config.delta], mu=[config.mu])
    for entry in config.grid:
        name, values = parse_grid(entry)
        axes[name] = values
    return [CouplingParams(*point) for point in
            itertools.product(axes['t'], axes['delta'], axes['mu'])]


def _require_sweet_spot(p, command):
    if not p.is_sweet_spot:
        raise UsageError('%s needs t = delta = mu (use --scale)' % command,
                         name='sweet_spot')


def run_spectrum(spec, p, config):
    result = single_particle_spectrum(build_majorana(spec, p))
    equivalence = representation_equivalence(spec, p, config.tol)
    report = result.to_dict()
    report.spec = str(spec)
    report.params = p.as_dict()
    report.gap = result.gap
    report.splitting = result.splitting
    report.representation_deviation = equivalence.max_deviation
    return report


def run_blocks(spec, p, config):
    _require_sweet_spot(p, 'blocks')
    report = verify_block_decomposition(spec, p.t, config.tol)
    report.k0 = k0_diagonal_form(spec, p.t)
    return report


def run_zero_modes(spec, p, config):
    form = build_majorana(spec, p)
    report = detect_zero_modes(form, zero_tolerance(form.norm(), config.tol))
    if p.is_sweet_spot:
        pair = resolve_edge_pair(spec)
        mode = analytic_edge_operator(spec)
        report.lead, report.tail = pair.lead, pair.tail
        report.edge_operator_residual = mode.residual(form)
    return report


def run_sweep(spec, p, config):
    return splitting_sweep(spec, sweep_grid(config), jobs=config.jobs)


def run_oracle(spec, p, config):
    space = FockSpace(spec, cap=config.cap)
    h = build_manybody_h(space, p)
    report = Dict(spec=str(spec), params=p.as_dict(), dimension=space.dim)
    report.rows = degeneracy_multiplicities(space, p)
    report.ground_energy = report.rows[0].energy
    if space.dim <= DENSE_LIMIT:
        report.free_fermion_deviation = oracle_consistency(space, p)

    if p.is_sweet_spot:
        d = space.mode_operator(analytic_edge_operator(spec))
        report.edge_commutator = commutator_norm(d, h)
        if spec.rows >= 2:
            states = edge_pair_states(space)
            report.hole_entropy = states.hole_entropy
            report.particle_entropy = states.particle_entropy
            report.k0 = k0_oracle(space, p.t)
    return report


def run_pseudospin(spec, p, config):
    _require_sweet_spot(p, 'pseudospin')
    report = eigenstate_expectations(spec, p, cap=config.cap)
    ps = build_pseudospin(spec, cap=config.cap)
    report.algebra = algebra_check(ps)
    report.phi_tilde = phi_tilde_states()
    if spec.rows >= 2:
        report.phi_states = phi_state_expectations(ps)
    return report


def run_check(spec, p, config):
    """Acceptance identities for one geometry; stops at the first failure."""
    report = Dict(spec=str(spec), params=p.as_dict())
    report.representation = representation_equivalence(
        spec, p, config.tol).max_deviation

    if not p.is_sweet_spot:
        report.passed = True
        return report

    report.blocks = verify_block_decomposition(
        spec, p.t, config.tol).spectrum_deviation
    if p.t == 0:
        report.passed = True
        return report

    modes = run_zero_modes(spec, p, config)
    if modes.count != 2:
        raise InvariantViolation(
            'Expected 2 zero modes on %s, found %d' % (spec, modes.count),
            name='zero_mode_count', deviation=float(modes.count))
    if modes.interior_weight > config.tol:
        raise InvariantViolation('Zero modes leak into the bulk',
                                 name='edge_localization',
                                 deviation=modes.interior_weight)
    report.zero_modes = modes.count
    report.k0 = k0_diagonal_form(spec, p.t).common_value

    if spec.num_sites <= config.cap:
        oracle = run_oracle(spec, p, config)
        report.edge_commutator = oracle.edge_commutator
        if spec.rows >= 2:
            for key in ('hole_entropy', 'particle_entropy'):
                deviation = abs(oracle[key] - math.log(2))
                if deviation > ENTROPY_TOL:
                    raise InvariantViolation(
                        '%s differs from ln 2' % key, name=key,
                        deviation=deviation)
                report[key] = oracle[key]
            report.pseudospin = algebra_check(
                build_pseudospin(spec, cap=config.cap)).fock
    else:
        logger.warning('%s exceeds the oracle cap %d; many-body checks '
                       'skipped', spec, config.cap)

    report.passed = True
    return report


HANDLERS = {
    'spectrum': run_spectrum,
    'blocks': run_blocks,
    'zero-modes': run_zero_modes,
    'sweep': run_sweep,
    'oracle': run_oracle,
    'pseudospin': run_pseudospin,
    'check': run_check,
}


def _set_verbosity(config):
    package = logging.getLogger('pymajorana')
    if config.verbose:
        package.setLevel(logging.DEBUG)
    elif config.quiet:
        package.setLevel(logging.WARNING)


def run(config):
    """Runs one command; returns the exit status."""
    _set_verbosity(config)
    spec = None
    try:
        spec = LatticeSpec(config.rows, config.cols)
        p = _params(config)
        if spec.degenerate:
            logger.warning('%s: single column, horizontal bonds wrap onto '
                           'the same site', spec)
        report = HANDLERS[config.command](spec, p, config)
    except (UsageError, DomainError) as e:
        logger.error('%s', e)
        return 2
    except MajoranaError as e:
        logger.error('%s failed on %s: %s', config.command, spec, e)
        try:
            write_output(serialize(e.to_dict(), config.format), config.out)
        except (IOError, OSError):
            logger.exception('Cannot write %s:', config.out)
        return 1

    try:
        write_output(serialize(report, config.format), config.out)
    except (IOError, OSError) as e:
        logger.error('Cannot write %s: %s', config.out, e)
        return 1
    except UsageError as e:
        logger.error('%s', e)
        return 2
    return 0


def main(argv=None):
    try:
        config = parse_config(argv)
    except UsageError as e:
        sys.stderr.write('pymajorana: %s\n' % e)
        return 2
    return run(config)
