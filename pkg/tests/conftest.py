import json

import numpy as np
import pytest

from config import Config
from spectral import random_normal, random_unitary


def write_matrix(path, a) -> str:
    """Writes a matrix in the {"n", "re", "im"} input format"""
    a = np.asarray(a, dtype=complex)
    path.write_text(json.dumps({'n': a.shape[0], 're': a.real.tolist(), 'im': a.imag.tolist()}))
    return str(path)


def roots_of_unity_normal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random normal matrix whose eigenvalues are the n-th roots of unity"""
    return random_normal(n, rng, np.exp(2j * np.pi * np.arange(n) / n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def config_file(tmp_path):
    """Configuration with the log file and reports inside tmp_path"""
    path = tmp_path / 'config.yaml'
    path.write_text(
        "paths:\n"
        f"  log_file: \"{tmp_path / 'logs' / 'peano_berg.log'}\"\n"
        f"  output_dir: \"{tmp_path / 'reports'}\"\n"
        "pipeline:\n"
        "  depth: 4\n"
        "  degrees: [8, 16, 32]\n"
        "  delta: 0.05\n"
        "  seed: 7\n"
        "solver:\n"
        "  name: schur\n"
    )
    return str(path)


@pytest.fixture
def config(config_file):
    return Config(config_file)


@pytest.fixture
def diag_file(tmp_path):
    return write_matrix(tmp_path / 'diag.json', np.diag([1j, -1j]))


@pytest.fixture
def rotated_hermitian(rng):
    """Q diag(t) Q* with t spread over [0, 1]"""
    q = random_unitary(12, rng)
    t = np.linspace(0.05, 0.95, 12)
    h = q @ np.diag(t) @ q.conj().T
    return (h + h.conj().T) / 2
