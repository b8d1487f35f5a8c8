"""
Cylinder geometry and Majorana indexing.

Sites are labelled ``(m, n)`` with ``1 <= m <= M`` along the open
direction and ``n`` taken modulo ``N`` along the periodic one. Each site
carries two Majoranas, ``a = c^+ + c`` and ``b = -i(c^+ - c)``, stored at
flat indices ``2 * site + flavor``. The site order is also the
Jordan-Wigner order of the many-body oracle.
"""

import enum
import logging
from collections import namedtuple
from dataclasses import dataclass

from .interface import DomainError

logger = logging.getLogger(__name__)


class Flavor(enum.IntEnum):
    A = 0
    B = 1


class EdgeType(enum.IntEnum):
    ONSITE = 0
    VERT = 1
    HORIZ = 2


MajoranaIndex = namedtuple('MajoranaIndex', ['site', 'flavor'])
Edge = namedtuple('Edge', ['kind', 'first', 'second'])


@dataclass(frozen=True)
class LatticeSpec(object):
    rows: int
    cols: int

    def __post_init__(self):
        for name in ('rows', 'cols'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(
                    '%s must be a positive integer, got %r' % (name, value),
                    name='lattice_spec')

    @property
    def num_sites(self):
        return self.rows * self.cols

    @property
    def num_majoranas(self):
        return 2 * self.rows * self.cols

    @property
    def degenerate(self):
        # a single column wraps every horizontal bond onto its own site
        return self.cols == 1

    def __str__(self):
        return '%dx%d' % (self.rows, self.cols)


def site_index(spec, m, n):
    if not 1 <= m <= spec.rows:
        raise DomainError(
            'row m=%r outside [1, %d]' % (m, spec.rows), name='site_index')
    return (m - 1) * spec.cols + (n - 1) % spec.cols


def majorana_index(spec, m, n, flavor):
    return 2 * site_index(spec, m, n) + int(flavor)


def site_coords(spec, site):
    if not 0 <= site < spec.num_sites:
        raise DomainError(
            'site %r outside [0, %d)' % (site, spec.num_sites),
            name='site_coords')
    return site // spec.cols + 1, site % spec.cols + 1


def decode_majorana(spec, index):
    if not 0 <= index < spec.num_majoranas:
        raise DomainError(
            'Majorana index %r outside [0, %d)' % (
                index, spec.num_majoranas),
            name='decode_majorana')
    return MajoranaIndex(site_coords(spec, index // 2), Flavor(index % 2))


def row_of(spec, index):
    return index // 2 // spec.cols + 1


def row_indices(spec, m, flavor):
    """Flat Majorana indices of one flavor along row ``m``."""
    return [majorana_index(spec, m, n, flavor)
            for n in range(1, spec.cols + 1)]


def brick_wall_edges(spec):
    """
    Edge list of the sweet-spot Majorana graph, ordered by site then by
    edge type. For N=1 the wrapped horizontal edge coincides with the
    onsite pair and is left out; the builders still add its coefficient.
    """
    edges = []
    for m in range(1, spec.rows + 1):
        for n in range(1, spec.cols + 1):
            a = majorana_index(spec, m, n, Flavor.A)
            edges.append(Edge(EdgeType.ONSITE, a,
                              majorana_index(spec, m, n, Flavor.B)))
            if m + 1 <= spec.rows:
                edges.append(Edge(
                    EdgeType.VERT,
                    majorana_index(spec, m + 1, n, Flavor.B), a))
            if spec.cols > 1:
                edges.append(Edge(
                    EdgeType.HORIZ,
                    majorana_index(spec, m, n + 1, Flavor.B), a))

    if spec.degenerate:
        logger.debug('%s: horizontal self-wrap merged into onsite pairs',
                     spec)
    return edges
