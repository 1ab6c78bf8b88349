"""
JSON documents for matrix tuples, Fuchsian systems and Okubo systems, the
construction program format and report output.

Exact scalars are strings: "p/q" for rationals, and for Q(z_N) an array of
phi(N) such strings giving the power-basis coordinates.
"""
from __future__ import annotations

import datetime
import json
import math
from fractions import Fraction

import numpy as np

from midconv.errors import DocumentError
from midconv.fields import QQ, CycloElem, CyclotomicField, field_for_order
from midconv.fuchsian import FuchsianSystem, OkuboSystem
from midconv.katz import MiddleConv, ScalarAdd
from midconv.linalg import Matrix
from midconv.mult_conv import MatTuple

__license__ = "MIT"

KINDS = ('mat-tuple', 'fuchsian', 'okubo')


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise DocumentError("not a rational number: {!r}".format(text))


def parse_field(spec):
    if not isinstance(spec, dict) or spec.get('kind') not in ('rational', 'cyclotomic'):
        raise DocumentError("bad field description {!r}".format(spec))
    if spec['kind'] == 'rational':
        return QQ
    order = spec.get('order')
    if not isinstance(order, int) or order < 1:
        raise DocumentError("bad cyclotomic order {!r}".format(order))
    return field_for_order(order)


def field_spec(field) -> dict:
    if isinstance(field, CyclotomicField):
        return {'kind': 'cyclotomic', 'order': field.order}
    return {'kind': 'rational'}


def parse_scalar(value, field):
    if isinstance(field, CyclotomicField):
        if not isinstance(value, list):
            raise DocumentError("expected {} coordinates in Q(z{}), got {!r}".format(
                field.degree, field.order, value))
        if len(value) != field.degree:
            raise DocumentError("expected {} coordinates, got {}".format(field.degree, len(value)))
        return field.element([parse_rational(c) for c in value])
    if isinstance(value, list):
        if len(value) == 1:
            return parse_rational(value[0])
        raise DocumentError("cyclotomic scalar {!r} in a rational document".format(value))
    return parse_rational(value)


def format_scalar(value, field):
    if isinstance(field, CyclotomicField):
        return [str(c) for c in field(value).coeffs]
    if isinstance(value, CycloElem):
        value = value.to_rational()
    return str(Fraction(value))


def parse_matrix(rows, n: int, field) -> Matrix:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(row, list) or len(row) != n
                                                          for row in rows):
        raise DocumentError("expected a {0}x{0} matrix, got {1!r}".format(n, rows))
    return Matrix.from_rows([[parse_scalar(x, field) for x in row] for row in rows], field)


def format_matrix(m: Matrix, field) -> list:
    return [[format_scalar(x, field) for x in row] for row in m.to_rows()]


def _require(data: dict, key: str):
    if key not in data:
        raise DocumentError("document misses '{}'".format(key))
    return data[key]


def parse_document(data):
    ''' MatTuple, FuchsianSystem or OkuboSystem from a decoded JSON object. '''
    if not isinstance(data, dict):
        raise DocumentError("a document must be a JSON object")
    kind = _require(data, 'kind')
    if kind not in KINDS:
        raise DocumentError("unknown document kind {!r}".format(kind))
    field = parse_field(_require(data, 'field'))
    n = _require(data, 'n')
    if not isinstance(n, int) or n < 0:
        raise DocumentError("bad dimension n = {!r}".format(n))

    if kind == 'okubo':
        T = [parse_rational(t) for t in _require(data, 'T')]
        if len(T) != n:
            raise DocumentError("T has {} entries, expected {}".format(len(T), n))
        return OkuboSystem(tuple(T), parse_matrix(_require(data, 'b'), n, field))

    matrices = [parse_matrix(m, n, field) for m in _require(data, 'matrices')]
    r = data.get('r', len(matrices))
    if r != len(matrices):
        raise DocumentError("r = {} but {} matrices given".format(r, len(matrices)))
    if kind == 'mat-tuple':
        return MatTuple(tuple(matrices), field)
    points = [parse_rational(t) for t in _require(data, 'points')]
    return FuchsianSystem(tuple(points), tuple(matrices), field)


def to_document(obj) -> dict:
    if isinstance(obj, MatTuple):
        return {
            'kind': 'mat-tuple',
            'field': field_spec(obj.field),
            'n': obj.n,
            'r': obj.r,
            'matrices': [format_matrix(m, obj.field) for m in obj],
        }
    if isinstance(obj, FuchsianSystem):
        return {
            'kind': 'fuchsian',
            'field': field_spec(obj.field),
            'n': obj.n,
            'r': obj.r,
            'points': [str(t) for t in obj.points],
            'matrices': [format_matrix(a, obj.field) for a in obj.residues],
        }
    if isinstance(obj, OkuboSystem):
        return {
            'kind': 'okubo',
            'field': field_spec(obj.field),
            'n': obj.size,
            'r': len(obj.distinct_points()),
            'points': [str(t) for t in obj.distinct_points()],
            'T': [str(t) for t in obj.T],
            'b': format_matrix(obj.b, obj.field),
        }
    raise DocumentError("cannot serialize {!r}".format(type(obj).__name__))


def parse_program(data) -> list:
    ''' Steps like {"scalar-add": ["1/2", "2/3"]} or {"middle-conv": "-3/4"}. '''
    if not isinstance(data, list):
        raise DocumentError("a program is a JSON list of steps")
    steps = []
    for index, item in enumerate(data, 1):
        if not isinstance(item, dict) or len(item) != 1:
            raise DocumentError("step {} must be an object with a single key".format(index))
        (name, value), = item.items()
        if name == 'scalar-add':
            if not isinstance(value, list):
                raise DocumentError("step {}: scalar-add needs a list of shifts".format(index))
            steps.append(ScalarAdd(tuple(parse_rational(d) for d in value)))
        elif name == 'middle-conv':
            steps.append(MiddleConv(parse_rational(value)))
        else:
            raise DocumentError("step {}: unknown step {!r}".format(index, name))
    return steps


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float("{:.17g}".format(value))
        return value if math.isfinite(value) else str(value)
    return value


def dumps(data) -> str:
    return json.dumps(jsonable(data), indent=2) + "\n"


def read_json(path: str):
    with open(path, encoding='utf-8') as handle:
        return json.load(handle)


def read_document(path: str):
    return parse_document(read_json(path))


def write_json(data, path: str = None):
    ''' Write to path, or to standard output without one. '''
    text = dumps(data)
    if path is None:
        print(text, end='')
        return
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)


def write_document(obj, path: str = None):
    write_json(to_document(obj), path)


class ReportWriter:
    ''' One JSON object per line. DATE in the file name becomes today's date. '''

    def __init__(self, filename):
        self.filename = filename.replace('DATE', datetime.date.today().isoformat())
        with open(self.filename, 'w', encoding='utf-8'):
            pass

    def append(self, record):
        with open(self.filename, 'a', encoding='utf-8') as handle:
            handle.write(json.dumps(jsonable(record)) + "\n")
