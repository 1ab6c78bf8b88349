import datetime
import json

import pytest

from midconv.__main__ import run

SEED = {
    'kind': 'fuchsian',
    'field': {'kind': 'rational'},
    'n': 1,
    'points': ['0', '1'],
    'matrices': [[['1/2']], [['1/3']]],
}
SCALARS = {'kind': 'mat-tuple', 'field': {'kind': 'rational'}, 'n': 1, 'matrices': [[['2']], [['3']]]}
HYPERGEOMETRIC = {
    'kind': 'mat-tuple',
    'field': {'kind': 'rational'},
    'n': 2,
    'matrices': [[['1', '1'], ['0', '1']], [['1', '0'], ['-1', '1']]],
}
LAME = ['lame', '--n', '1/6', '--B', '0', '--roots', '0,1/2,-1/2']


def run_cli(*argv):
    with pytest.raises(SystemExit) as exit_info:
        run([str(a) for a in argv])
    return exit_info.value.code


def dump(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def load(path):
    return json.loads(path.read_text())


def test_conv_mult_middle(tmp_path):
    infile = dump(tmp_path / "a.json", SCALARS)
    out, report = tmp_path / "mc.json", tmp_path / "report.json"
    assert run_cli('conv-mult', '--in', infile, '--lambda', 5, '--middle', '--out', out, '--report', report) == 0
    assert load(out)['n'] == 2
    assert load(report) == {'operation': 'middle-conv', 'dim': 2, 'k_dim': 0, 'l_dim': 0, 'formula_dim': 2,
                            'formula_ok': True}


def test_conv_mult_plain(tmp_path):
    infile = dump(tmp_path / "a.json", SCALARS)
    out = tmp_path / "c.json"
    assert run_cli('conv-mult', '--in', infile, '--lambda', 5, '--out', out) == 0
    assert load(out)['matrices'][0] == [['10', '2'], ['0', '1']]


def test_conv_reports_default_to_stdout(tmp_path, capsys):
    infile = dump(tmp_path / "a.json", SCALARS)
    capsys.readouterr()
    assert run_cli('--log', 'warning', 'conv-mult', '--in', infile, '--lambda', 5, '--middle',
                   '--out', tmp_path / "mc.json") == 0
    assert json.loads(capsys.readouterr().out) == {'operation': 'middle-conv', 'dim': 2, 'k_dim': 0, 'l_dim': 0,
                                                   'formula_dim': 2, 'formula_ok': True}

    seed = dump(tmp_path / "seed.json", SEED)
    assert run_cli('--log', 'warning', 'conv-add', '--in', seed, '--mu', '1/4', '--middle',
                   '--out', tmp_path / "add.json") == 0
    report = json.loads(capsys.readouterr().out)
    assert (report['dim'], report['k_dim'], report['l_dim']) == (2, 0, 0)


def test_conv_mult_zero_dimensional(tmp_path):
    infile = dump(tmp_path / "a.json", dict(SCALARS, matrices=[[['1']], [['1']]]))
    report = tmp_path / "report.json"
    assert run_cli('conv-mult', '--in', infile, '--lambda', 5, '--middle', '--out', tmp_path / "mc.json",
                   '--report', report) == 0
    assert load(report)['dim'] == 0


def test_conv_mult_root_of_unity(tmp_path):
    infile = dump(tmp_path / "a.json", HYPERGEOMETRIC)
    out = tmp_path / "mc.json"
    assert run_cli('conv-mult', '--in', infile, '--lambda-mu', '1/3', '--middle', '--out', out) == 0
    data = load(out)
    assert data['field'] == {'kind': 'cyclotomic', 'order': 3}
    assert data['n'] == 2


def test_conv_mult_needs_lambda(tmp_path):
    infile = dump(tmp_path / "a.json", SCALARS)
    assert run_cli('conv-mult', '--in', infile) == 2
    assert run_cli('conv-mult', '--in', infile, '--lambda', 2, '--lambda-mu', '1/2') == 2


def test_io_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run_cli('conv-add', '--in', broken, '--mu', '1/4') == 3
    assert run_cli('conv-add', '--in', tmp_path / "missing.json", '--mu', '1/4') == 3
    malformed = dump(tmp_path / "bad.json", dict(SEED, kind='unknown'))
    assert run_cli('conv-add', '--in', malformed, '--mu', '1/4') == 3


def test_wrong_document_kind(tmp_path):
    infile = dump(tmp_path / "a.json", SCALARS)
    assert run_cli('conv-add', '--in', infile, '--mu', '1/4') == 1


def test_conv_add(tmp_path):
    infile = dump(tmp_path / "seed.json", SEED)
    out, report = tmp_path / "mc.json", tmp_path / "report.json"
    assert run_cli('conv-add', '--in', infile, '--mu', '-5/6', '--middle', '--out', out, '--report', report) == 0
    assert load(out)['n'] == 1
    data = load(report)
    assert (data['dim'], data['k_dim'], data['l_dim']) == (1, 0, 1)
    assert data['okubo']['T'] == ['0', '1']

    assert run_cli('conv-add', '--in', infile, '--mu', '1/4', '--out', out) == 0
    assert load(out)['n'] == 2


def test_construct(tmp_path):
    seed = dump(tmp_path / "seed.json", SEED)
    program = dump(tmp_path / "program.json", [{'middle-conv': '1/4'}, {'scalar-add': ['1/2', '0']}])
    out = tmp_path / "rank2.json"
    assert run_cli('construct', '--seed', seed, '--program', program, '--out', out,
                   '--report', tmp_path / "steps DATE.jsonl") == 0
    assert load(out)['n'] == 2
    steps = tmp_path / "steps {}.jsonl".format(datetime.date.today().isoformat())
    lines = [json.loads(line) for line in steps.read_text().splitlines()]
    assert [line['step'] for line in lines] == [1, 2]


def test_construct_rejects_bad_seed(tmp_path):
    seed = dump(tmp_path / "seed.json", dict(SEED, matrices=[[['1']], [['1/3']]]))
    assert run_cli('construct', '--seed', seed) == 1


def test_lame_and_pcurvature(tmp_path):
    system, report = tmp_path / "lame.json", tmp_path / "pcurv.json"
    assert run_cli(*LAME, '--out', system) == 0
    assert load(system)['n'] == 2
    assert run_cli('pcurvature', '--in', system, '--pmax', 13, '--out', report) == 0
    reports = load(report)['reports']
    assert [r['prime'] for r in reports] == [2, 3, 5, 7, 11, 13]
    assert [r['index'] for r in reports if r['good']] == [1, 1, 1, 1]


def test_lame_okubo(tmp_path):
    okubo = tmp_path / "okubo.json"
    assert run_cli(*LAME, '--mu', '1/3', '--okubo-out', okubo) == 0
    data = load(okubo)
    assert data['kind'] == 'okubo'
    assert data['n'] == 3


def test_lame_coincident_roots():
    assert run_cli('lame', '--n', '1/6', '--B', '0', '--roots', '0,1,1') == 1


def test_verify_rh(tmp_path):
    infile = dump(tmp_path / "seed.json", SEED)
    out = tmp_path / "rh.json"
    assert run_cli('verify-rh', '--in', infile, '--mu', '2') == 1
    assert run_cli('verify-rh', '--in', infile, '--mu', '1/4', '--out', out) == 0
    data = load(out)
    assert data['success'] is True
    assert data['dim']['mc_add'] == 2


def test_config_file(tmp_path):
    system = tmp_path / "lame.json"
    assert run_cli(*LAME, '--out', system) == 0

    bad = tmp_path / "bad.ini"
    bad.write_text("[Other]\npmax = 7\n")
    assert run_cli('--config', bad, 'pcurvature', '--in', system) == 1

    config = tmp_path / "midconv.ini"
    config.write_text("[Defaults]\npmax = 7\nlog = warning\n")
    report = tmp_path / "pcurv.json"
    assert run_cli('--config', config, 'pcurvature', '--in', system, '--out', report) == 0
    assert [r['prime'] for r in load(report)['reports']] == [2, 3, 5, 7]


def test_version():
    assert run_cli('--version') == 0
