"""
Deterministic CSV and JSON output of the reports.

Keys keep their insertion order and keys starting with ``_`` hold in-memory
arrays that are never written. Finite floats are emitted with 17
significant digits and negative zero as ``-0.0``. Infinities and NaN are
written as ``Infinity``, ``-Infinity`` and ``NaN``, which Python's ``json``
module reads back but strict JSON parsers reject.
"""

import csv
import io
import json
import math
import sys
from collections import OrderedDict

import numpy as np
import six

from .hamiltonian import SpectrumResult
from .interface import UsageError
from .lattice import LatticeSpec
from .utils import format_float

FORMATS = ('json', 'csv')

SPECTRUM_HEADER = ('index', 'epsilon')
BLOCKS_HEADER = ('K', 'l', 'index', 'eigenvalue')
SWEEP_HEADER = ('t', 'delta', 'mu', 'splitting', 'gap')
PSEUDOSPIN_HEADER = ('energy', 'jx', 's2', 'tau2', 'phi_flag')


def to_plain(obj):
    """Reduces a report to dicts, lists, strings and Python numbers."""
    if isinstance(obj, SpectrumResult):
        return to_plain(obj.to_dict())
    if isinstance(obj, LatticeSpec):
        return str(obj)
    if isinstance(obj, dict):
        return OrderedDict(
            (str(k), to_plain(v)) for k, v in obj.items()
            if not str(k).startswith('_'))
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (six.integer_types, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, six.string_types):
        return obj
    raise UsageError('Cannot serialize %s' % type(obj).__name__,
                     name='serialize')


def _scalar(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(value)
        return format_float(value)
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def _json(value, indent, depth):
    pad = ' ' * (indent * (depth + 1))
    end = ' ' * (indent * depth)
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = ['%s%s: %s' % (pad, json.dumps(k), _json(v, indent, depth + 1))
                 for k, v in value.items()]
        return '{\n%s\n%s}' % (',\n'.join(items), end)
    if isinstance(value, list):
        if not value:
            return '[]'
        if not any(isinstance(v, (dict, list)) for v in value):
            return '[%s]' % ', '.join(_scalar(v) for v in value)
        items = [pad + _json(v, indent, depth + 1) for v in value]
        return '[\n%s\n%s]' % (',\n'.join(items), end)
    return _scalar(value)


def dumps_json(report, indent=2):
    return _json(to_plain(report), indent, 0) + '\n'


def _cell(value):
    if isinstance(value, (dict, list)):
        return _json(value, 0, 0).replace('\n', '')
    if value is None:
        return ''
    if isinstance(value, six.string_types):
        return value
    return _scalar(value)


def table(report):
    """``(header, rows)`` of the CSV rendition of a report."""
    if isinstance(report, SpectrumResult):
        return SPECTRUM_HEADER, list(enumerate(report.energies))

    plain = to_plain(report)
    if isinstance(plain, list):
        header = tuple(plain[0].keys()) if plain else SWEEP_HEADER
        return header, [[r[k] for k in header] for r in plain]

    if 'energies' in plain:
        return SPECTRUM_HEADER, list(enumerate(plain['energies']))

    if 'rows' in plain:
        rows = plain['rows']
        header = tuple(rows[0].keys()) if rows else PSEUDOSPIN_HEADER
        return header, [[r[k] for k in header] for r in rows]

    if 'blocks' in plain:
        rows = []
        for block in plain['blocks']:
            for i, e in enumerate(block['eigenvalues']):
                rows.append([block['K'], block['l'], i, e])
        return BLOCKS_HEADER, rows

    return ('key', 'value'), [[k, v] for k, v in plain.items()]


def dumps_csv(report):
    header, rows = table(report)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(to_plain(v)) for v in row])
    return out.getvalue()


def serialize(report, fmt='json'):
    if fmt not in FORMATS:
        raise UsageError('Unknown format %r; supported are %s' % (
            fmt, ','.join(FORMATS)), name='format')
    text = dumps_json(report) if fmt == 'json' else dumps_csv(report)
    return text.encode('utf-8')


def write_output(data, path='-'):
    if path in (None, '-'):
        stream = getattr(sys.stdout, 'buffer', sys.stdout)
        stream.write(data)
        stream.flush()
        return

    with open(path, 'wb') as f:
        f.write(data)
