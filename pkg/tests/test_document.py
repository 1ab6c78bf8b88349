import datetime
import json
from fractions import Fraction

import numpy as np
import pytest

from midconv.document import (ReportWriter, format_scalar, jsonable, parse_document, parse_program, parse_rational,
                              parse_scalar, read_document, read_json, to_document, write_document, write_json)
from midconv.errors import DocumentError, PreconditionError
from midconv.fields import QQ, CyclotomicField, zeta
from midconv.fuchsian import OkuboSystem
from midconv.katz import MiddleConv, ScalarAdd
from midconv.linalg import Matrix
from midconv.mult_conv import MatTuple

F = Fraction
SEED = {
    'kind': 'fuchsian',
    'field': {'kind': 'rational'},
    'n': 1,
    'r': 2,
    'points': ['0', '1'],
    'matrices': [[['1/2']], [['1/3']]],
}


def test_fuchsian_document(seed):
    assert parse_document(SEED) == seed
    assert to_document(seed) == SEED


def test_cyclotomic_tuple_document():
    field = CyclotomicField(3)
    a = MatTuple((Matrix.from_rows([[zeta(3), 1], [0, 1]], field), Matrix.from_rows([[1, 0], [-1, 1]], field)))
    data = to_document(a)
    assert data['field'] == {'kind': 'cyclotomic', 'order': 3}
    assert data['matrices'][0][0][0] == ['0', '1']
    assert parse_document(json.loads(json.dumps(data))) == a


def test_okubo_document():
    ok = OkuboSystem((0, F(1, 2), F(1, 2)), Matrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, F(9, 2)]], QQ))
    data = to_document(ok)
    assert data['points'] == ['0', '1/2']
    assert data['r'] == 2
    assert parse_document(data) == ok


def test_scalars():
    assert parse_rational(" -3/4 ") == F(-3, 4)
    assert parse_rational(2) == 2
    for bad in ("1/0", "abc", None):
        with pytest.raises(DocumentError):
            parse_rational(bad)
    field = CyclotomicField(4)
    assert parse_scalar(['0', '1'], field) == zeta(4)
    assert parse_scalar(['1/2'], QQ) == F(1, 2)
    assert format_scalar(zeta(4) * 2, field) == ['0', '2']
    assert format_scalar(field.element([F(1, 3), 0]), QQ) == '1/3'
    with pytest.raises(DocumentError):
        parse_scalar(['1', '2', '3'], field)
    with pytest.raises(DocumentError):
        parse_scalar(['1', '2'], QQ)


@pytest.mark.parametrize("change", [
    {'kind': None},
    {'kind': 'matrix'},
    {'field': {'kind': 'real'}},
    {'field': {'kind': 'cyclotomic', 'order': 0}},
    {'n': 2},
    {'n': -1},
    {'r': 3},
    {'matrices': [[['1/2', '1']], [['1/3']]]},
])
def test_malformed_documents(change):
    data = dict(SEED, **change)
    data = {k: v for k, v in data.items() if v is not None}
    with pytest.raises(DocumentError):
        parse_document(data)


def test_document_errors():
    with pytest.raises(DocumentError, match="JSON object"):
        parse_document([SEED])
    with pytest.raises(DocumentError, match="points"):
        parse_document({k: v for k, v in SEED.items() if k != 'points'})
    with pytest.raises(PreconditionError):
        parse_document(dict(SEED, points=['0', '0']))
    with pytest.raises(DocumentError, match="coordinates"):
        parse_document(dict(SEED, field={'kind': 'cyclotomic', 'order': 5}, matrices=[[[['1', '0']]], [[['1']]]]))


def test_program():
    steps = parse_program([{'scalar-add': ['1/2', '0']}, {'middle-conv': '-3/4'}])
    assert steps == [ScalarAdd((F(1, 2), F(0))), MiddleConv(F(-3, 4))]
    assert parse_program([]) == []


@pytest.mark.parametrize("program", [
    {'middle-conv': '1/2'},
    [{'middle-conv': '1/2', 'scalar-add': ['0']}],
    [{'scalar-add': '1/2'}],
    [{'twist': '1/2'}],
    [{'middle-conv': 'x'}],
])
def test_bad_program(program):
    with pytest.raises(DocumentError):
        parse_program(program)


def test_jsonable():
    data = {
        'z': 1 + 2j,
        'inf': float('inf'),
        'mu': F(1, 3),
        'count': np.int64(4),
        'flag': np.bool_(True),
        'array': np.array([0.5, 1.5]),
        1: (1, 2),
    }
    assert jsonable(data) == {
        'z': [1.0, 2.0],
        'inf': 'inf',
        'mu': '1/3',
        'count': 4,
        'flag': True,
        'array': [0.5, 1.5],
        '1': [1, 2],
    }
    assert json.dumps(jsonable(data))
    assert jsonable(0.1 + 0.2) == 0.30000000000000004


def test_write_and_read(tmp_path, seed):
    path = str(tmp_path / "seed.json")
    write_document(seed, path)
    assert read_document(path) == seed
    write_json({'mu': F(1, 4)}, path)
    assert read_json(path) == {'mu': '1/4'}


def test_write_to_stdout(capsys, seed):
    write_document(seed)
    assert json.loads(capsys.readouterr().out) == SEED


def test_report_writer(tmp_path):
    writer = ReportWriter(str(tmp_path / "steps DATE.jsonl"))
    assert writer.filename.endswith("steps {}.jsonl".format(datetime.date.today().isoformat()))
    writer.append({'step': 1, 'mu': F(1, 4)})
    writer.append({'step': 2, 'residual': 1e-9})
    with open(writer.filename) as handle:
        lines = [json.loads(line) for line in handle]
    assert lines == [{'step': 1, 'mu': '1/4'}, {'step': 2, 'residual': 1e-9}]
