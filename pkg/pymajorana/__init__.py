import sys
import logging

from .interface import MajoranaError, DomainError, InvariantViolation, \
    ResourceLimitError, ComputationError, UsageError
from .lattice import LatticeSpec, Flavor
from .hamiltonian import CouplingParams, build_nambu, build_majorana, \
    single_particle_spectrum
from .fourier import build_block, verify_block_decomposition
from .edge import detect_zero_modes, analytic_edge_operator
from .fock import FockSpace, build_manybody_h
from .pseudospin import build_pseudospin, algebra_check
from .serialize import serialize


LOG_FMT = '%(asctime)-15s [%(levelname)s] [%(threadName)s]' \
      ' [%(name)-9s:%(lineno)d] %(message)s'
DATE_FMT = '%Y-%m-%d %H:%M:%S'

logger = logging.getLogger('pymajorana')
handler = logging.StreamHandler(stream=sys.stderr)
handler.setFormatter(logging.Formatter(LOG_FMT, DATE_FMT))
logger.addHandler(handler)
logger.setLevel(logging.INFO)


__VERSION__ = '0.1.0'

__all__ = (
    'MajoranaError',
    'DomainError',
    'InvariantViolation',
    'ResourceLimitError',
    'ComputationError',
    'UsageError',
    'LatticeSpec',
    'Flavor',
    'CouplingParams',
    'build_nambu',
    'build_majorana',
    'single_particle_spectrum',
    'build_block',
    'verify_block_decomposition',
    'detect_zero_modes',
    'analytic_edge_operator',
    'FockSpace',
    'build_manybody_h',
    'build_pseudospin',
    'algebra_check',
    'serialize',
)
