import csv
import json

import numpy as np
import pytest

from actions.report_utils import dumps
from peano_berg import main
from tests.conftest import roots_of_unity_normal, write_matrix


def run(config_file, *argv):
    return main([*argv, '--config', config_file])


def test_surjectivity_command(config_file, capsys):
    assert run(config_file, 'curve', 'surjectivity', '--depth', '3') == 0
    assert "729/729 cells covered, bijection: yes" in capsys.readouterr().out


def test_eval_at_zero(config_file, capsys):
    assert run(config_file, 'curve', 'eval', '--t', '0', '--depth', '4') == 0
    point = json.loads(capsys.readouterr().out)['point']
    assert point[0] < 0.01 and point[1] < 0.01


def test_eval_out_of_range(config_file, capsys):
    assert run(config_file, 'curve', 'eval', '--t', '2') == 2
    assert 'outside [0, 1]' in capsys.readouterr().err


def test_cells_in_curve_order(config_file, capsys):
    assert run(config_file, 'curve', 'cells', '--depth', '1') == 0
    cells = json.loads(capsys.readouterr().out)['cells']
    assert cells[:4] == [[0, 0], [0, 1], [0, 2], [1, 2]]


def test_unknown_flag_is_a_usage_error(config_file):
    assert run(config_file, 'curve', 'eval', '--bogus') == 2


def test_missing_config_file(tmp_path):
    assert main(['curve', 'eval', '--config', str(tmp_path / 'absent.yaml')]) == 2


def test_pipeline_writes_all_reports(config_file, diag_file, tmp_path, capsys):
    out = tmp_path / 'run'
    assert run(config_file, 'pipeline', '--input', diag_file, '--depth', '4', '--out', str(out)) == 0
    for name in ('model.json', 'selection.json', 'decomposition.json', 'traces.csv'):
        assert (out / name).exists()

    report = json.loads((out / 'decomposition.json').read_text())
    assert report['config']['seed'] == 7
    assert report['config']['depth'] == 4
    checks = report['checks']
    assert checks['berg_residual'] <= 1e-10
    assert checks['reconstruction_error'] <= checks['reconstruction_bound']

    with open(out / 'traces.csv', newline='') as f:
        rows = list(csv.DictReader(f))
    assert [int(row['degree']) for row in rows] == [8, 16, 32]
    assert 'reconstruction error' in capsys.readouterr().out


def test_pipeline_is_deterministic(config_file, diag_file, tmp_path):
    for name in ('a', 'b'):
        assert run(config_file, 'pipeline', '--input', diag_file, '--out', str(tmp_path / name)) == 0
    first = (tmp_path / 'a' / 'decomposition.json').read_bytes()
    second = (tmp_path / 'b' / 'decomposition.json').read_bytes()
    assert first == second


def test_one_by_one_pipeline(config_file, tmp_path):
    matrix = write_matrix(tmp_path / 'one.json', [[2.0]])
    out = tmp_path / 'one'
    assert run(config_file, 'pipeline', '--input', matrix, '--degrees', '2,4', '--out', str(out)) == 0
    report = json.loads((out / 'decomposition.json').read_text())
    assert report['l_norm'] < 1e-12


def test_non_normal_input(config_file, tmp_path, capsys):
    matrix = write_matrix(tmp_path / 'jordan.json', [[0, 1], [0, 0]])
    assert run(config_file, 'pipeline', '--input', matrix, '--out', str(tmp_path / 'x')) == 3
    assert 'normality check failed' in capsys.readouterr().err


def test_unreadable_input(config_file, tmp_path):
    assert run(config_file, 'model', '--input', str(tmp_path / 'absent.json')) == 2


def test_model_command(config_file, diag_file, capsys):
    assert run(config_file, 'model', '--input', diag_file) == 0
    model = json.loads(capsys.readouterr().out)
    assert model['n'] == 2
    assert model['cyclic'] is True
    assert sum(atom['weight'] for atom in model['mu']['atoms']) == pytest.approx(1.0)


def test_select_command(config_file, diag_file, tmp_path):
    out = tmp_path / 'select'
    assert run(config_file, 'select', '--input', diag_file, '--depth', '2', '--out', str(out)) == 0
    data = json.loads((out / 'selection.json').read_text())
    entries = data['selection']['entries']
    assert len(entries) == 2
    assert all(entry['t_den'] == 81 for entry in entries)


def test_decompose_laplacian(config_file, capsys):
    assert run(config_file, 'decompose', '--laplacian', '16', '--delta', '0.05') == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data['singular_values']) == 16
    assert all(r <= d for r, d in zip(data['residuals'], data['schedule']))


def test_decompose_hermitian_input(config_file, tmp_path):
    matrix = write_matrix(tmp_path / 'h.json', np.diag([0.2, 0.6, 0.9]))
    out = tmp_path / 'wvn'
    assert run(config_file, 'decompose', '--input', matrix, '--out', str(out)) == 0
    assert (out / 'wvn.json').exists()
    assert (out / 'wvn_steps.csv').exists()


def test_pipeline_with_wide_windows(config_file, rng, tmp_path):
    matrix = write_matrix(tmp_path / 'roots.json', roots_of_unity_normal(8, rng))
    out = tmp_path / 'wide'
    assert run(config_file, 'pipeline', '--input', matrix, '--delta', '0.3', '--out', str(out)) == 0
    report = json.loads((out / 'decomposition.json').read_text())
    assert report['config']['delta'] == 0.3
    assert report['l_norm'] > 0.1
    assert all(r <= d for r, d in zip(report['wvn']['residuals'], report['wvn']['schedule']))
    with open(out / 'traces.csv', newline='') as f:
        rows = list(csv.DictReader(f))
    assert all(row['ok'] == 'True' for row in rows)
    assert all(float(row['gap']) <= float(row['bound']) + 1e-10 for row in rows)


def test_json_floats_carry_17_significant_digits():
    text = dumps({'x': 0.1, 'n': 3, 'flag': True, 'values': [1.5, -2e-10], 'name': 'a'})
    assert '"x": 1.0000000000000001e-01' in text
    assert '1.5000000000000000e+00' in text
    assert '"n": 3' in text and '"flag": true' in text and '"name": "a"' in text
    data = json.loads(text)
    assert data['x'] == 0.1
    assert data['values'] == [1.5, -2e-10]
