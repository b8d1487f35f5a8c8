import math

import numpy as np
from scipy import sparse
from six import string_types

from .interface import UsageError

ZERO_TOL = 1e-10
CLUSTER_TOL = 1e-8
FLOAT_FMT = '%.17g'

GRID_KEYS = ('t', 'delta', 'mu')


def zero_tolerance(norm, tol=ZERO_TOL):
    """Scale-invariant zero threshold ``tol * (1 + norm)``."""
    return tol * (1.0 + norm)


def max_abs(x):
    if sparse.issparse(x):
        if x.nnz == 0:
            return 0.0
        return float(abs(x).max())

    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x)))


def cluster_values(values, rel_tol=CLUSTER_TOL):
    """
    Single-linkage clustering of real values. Two neighbours (after
    sorting) belong to the same cluster when their gap is at most
    ``rel_tol * (1 + |value|)``. Returns a list of
    ``(mean, multiplicity, indices)`` in ascending order, where indices
    refer to positions in the input.
    """
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind='stable')
    clusters = []
    current = []
    for i in order:
        if current:
            last = values[current[-1]]
            if values[i] - last > rel_tol * (1.0 + abs(last)):
                clusters.append(current)
                current = []
        current.append(int(i))

    if current:
        clusters.append(current)

    return [
        (float(np.mean(values[c])), len(c), c) for c in clusters
    ]


def format_float(x):
    x = float(x)
    if x == 0 and math.copysign(1.0, x) < 0:
        return '-0.0'
    return FLOAT_FMT % x


def parse_number(s, name='value'):
    if not isinstance(s, string_types):
        return float(s)

    try:
        return float(s.strip())
    except ValueError:
        raise UsageError('Unparsable number for %s: %r' % (name, s),
                         name='parse_number')


def parse_grid(s):
    """
    Parses a sweep grid entry ``name=v1,v2,...`` or
    ``name=start:stop:count`` (inclusive, evenly spaced) into
    ``(name, [values])``.
    """
    if '=' not in s:
        raise UsageError('Grid entry %r is not name=values' % (s, ),
                         name='parse_grid')

    name, _, spec = s.partition('=')
    name = name.strip().replace('-', '_')
    if name not in GRID_KEYS:
        raise UsageError(
            'Unknown grid parameter %r; supported are %s' % (
                name, ','.join(GRID_KEYS)),
            name='parse_grid')

    if ':' in spec:
        parts = spec.split(':')
        if len(parts) != 3:
            raise UsageError('Range %r must be start:stop:count' % (spec, ),
                             name='parse_grid')
        start = parse_number(parts[0], name)
        stop = parse_number(parts[1], name)
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError('Count %r is not an integer' % (parts[2], ),
                             name='parse_grid')
        if count < 1:
            raise UsageError('Count must be positive', name='parse_grid')
        values = [float(v) for v in np.linspace(start, stop, count)]
    else:
        values = [parse_number(v, name) for v in spec.split(',') if v.strip()]

    if not values:
        raise UsageError('Grid %r is empty' % (name, ), name='parse_grid')

    return name, values


def parse_key_values(text, source='<config>'):
    """
    Parses flat ``key=value`` text. Blank lines and ``#`` comments are
    skipped; keys are normalised to snake case.
    """
    result = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue

        if '=' not in line:
            raise UsageError(
                '%s:%d: expected key=value, got %r' % (source, lineno, line),
                name='parse_config')

        key, _, value = line.partition('=')
        key = key.strip().replace('-', '_')
        if not key:
            raise UsageError('%s:%d: empty key' % (source, lineno),
                             name='parse_config')
        result[key] = value.strip()

    return result
