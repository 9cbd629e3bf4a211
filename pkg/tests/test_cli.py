import json
import re

import pytest

from hyperlat import cli
from hyperlat.tables import VerificationReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants(capsys):
    code, out, _ = run(capsys, 'invariants', 'U + <-3>')
    assert code == 0
    assert 'd=3 odd eta=1' in out and 'represents_zero: True' in out
    code, out, _ = run(capsys, 'invariants', '<1>')
    assert code == 0 and 'det: 1' in out and 'type: odd' in out and 'trivial' in out
    code, out, _ = run(capsys, 'invariants', '<3> + <-1> + <-1>')
    assert 'd=3 odd eta=0' in out and 'represents_zero: False' in out


def test_invariants_jsonl_is_stable(capsys):
    _, a, _ = run(capsys, 'invariants', '@1:50', '--format', 'jsonl')
    _, b, _ = run(capsys, 'invariants', '@1:50', '--format', 'jsonl')
    assert a == b
    rec = json.loads(a)
    assert rec['det'] > 0 and 'eta' in rec


def test_vinberg(capsys):
    code, out, _ = run(capsys, 'vinberg', 'U + <-1>')
    assert code == 0
    assert 'walls (3):' in out and 'status: finite_area' in out and 'h: 0' in out
    code, out, _ = run(capsys, 'vinberg', '<7> + <-1> + <-1>', '--format', 'jsonl')
    rec = json.loads(out)
    assert code == 0 and len(rec['walls']) == 4 and rec['h'] == 1
    code, out, _ = run(capsys, 'vinberg', 'U + <-29>', '--max-height', '50')
    assert code == 2 and 'budget_exhausted' in out


def test_vinberg_basepoint(capsys):
    code, out, _ = run(capsys, 'vinberg', 'U + <-1>', '--basepoint', '1,1,0')
    assert code == 0 and 'base point: (1,1,0)' in out
    code, _, err = run(capsys, 'vinberg', 'U + <-1>', '--basepoint', '1,0,0')
    assert code == 1 and 'positive norm' in err


def test_dual(capsys):
    code, out, _ = run(capsys, 'dual', '@1:3', '--m', '3')
    assert code == 0
    assert 'm-dual gram: ((1,0,0),(0,-3,0),(0,0,-3))' in out
    assert 'root gram: ((-6,3,3),(3,-3,0),(3,0,-2))' in out
    code, out, _ = run(capsys, 'dual', '<3> + <-1> + <-1>', '--m', '3', '--roots', '(0,-1,1);(0,1,0);(1,0,-3)')
    assert code == 0 and 'root gram: ((-6,3,3),(3,-3,0),(3,0,-2))' in out
    code, _, err = run(capsys, 'dual', '@1:3', '--m', '2')
    assert code == 1 and 'does not divide' in err


def test_verify(capsys):
    code, out, _ = run(capsys, 'verify', '--table', '1', '--case', '4')
    assert code == 0 and out.strip().endswith('1/1 pass')
    code, out, _ = run(capsys, 'verify', '--table', '3', '--case', '1', '--format', 'jsonl')
    assert code == 0 and json.loads(out)['passed']
    code, _, err = run(capsys, 'verify', '--table', '1', '--case', '999')
    assert code == 1 and 'no case 999' in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    def broken(case, budget, classify):
        rep = VerificationReport(case.case_id)
        rep.add('d', False, 'x', 'y')
        return rep
    monkeypatch.setattr(cli, 'verify_case', broken)
    code, out, _ = run(capsys, 'verify', '--table', '1', '--case', '1')
    assert code == 3 and '0/1 pass' in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, 'invariants', 'V + <1>')
    assert code == 1 and err.startswith('hyperlat: error')
    with pytest.raises(SystemExit) as e:
        cli.main(['frobnicate'])
    assert e.value.code == 1
    code, _, err = run(capsys, 'invariants', '@1:500')
    assert code == 1
    code, _, err = run(capsys, 'vinberg', 'U + <-1>', '--max-walls', '0')
    assert code == 1


def test_render(capsys, tmp_path):
    out = tmp_path / 'n1.svg'
    code, msg, _ = run(capsys, 'render', 'U + <-1>', '-o', str(out))
    assert code == 0 and '3 walls' in msg
    svg = out.read_text()
    assert len(re.findall(r'class="wall"', svg)) == 3
    assert len(re.findall(r'class="ideal"', svg)) == 1
    code, _, _ = run(capsys, 'render', 'U + <-1>', '-o', str(out))
    assert out.read_text() == svg
    code, _, err = run(capsys, 'render', 'U + <-1>', '-o', str(tmp_path / 'no' / 'x.svg'))
    assert code == 1 and 'cannot write' in err
