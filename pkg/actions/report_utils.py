import csv
import json
import math
import os
import re
import logging
from typing import Any, Dict, List

import numpy as np

from errors import ValidationError
from spectral import NormalMatrix


def read_matrix_json(file_path: str) -> NormalMatrix:
    """
    Reads a matrix JSON file and validates normality
    Args:
        file_path: path to {"n", "re", "im"}
    Returns:
        NormalMatrix: the validated matrix
    """
    if not os.path.exists(file_path):
        raise ValidationError(f"input file not found: {file_path}", stage='input',
                              hint='pass --input with a matrix JSON file')
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"cannot parse {file_path}: {e}", stage='input')
    logging.info(f"Read matrix from {file_path}")
    return NormalMatrix.from_dict(data)


def read_hermitian_json(file_path: str) -> np.ndarray:
    """Reads a matrix JSON file that must be Hermitian"""
    h = read_matrix_json(file_path).entries
    if np.linalg.norm(h - h.conj().T) > 1e-10 * max(np.linalg.norm(h), 1.0):
        raise ValidationError(f"matrix in {file_path} is not Hermitian", stage='input')
    return h


FLOAT_FORMAT = '.16e'
_FLOAT_TOKEN = re.compile(r'"@float:([^"]+)"')


def _tag_floats(value: Any) -> Any:
    # finite floats become tagged strings so json keeps them untouched until formatting
    if isinstance(value, bool) or not isinstance(value, float):
        if isinstance(value, dict):
            return {key: _tag_floats(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [_tag_floats(item) for item in value]
        return value
    if not math.isfinite(value):
        return value
    return f"@float:{format(value, FLOAT_FORMAT)}"


def dumps(data: Dict[str, Any]) -> str:
    """Stable JSON text: insertion-ordered keys, floats at 17 significant digits"""
    text = json.dumps(_tag_floats(data), indent=2, ensure_ascii=False)
    return _FLOAT_TOKEN.sub(r'\1', text) + '\n'


def write_json(file_path: str, data: Dict[str, Any]) -> str:
    os.makedirs(os.path.dirname(file_path) or '.', exist_ok=True)
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write(dumps(data))
    logging.info(f"Wrote {file_path}")
    return file_path


def write_csv(file_path: str, rows: List[Dict[str, Any]]) -> str:
    os.makedirs(os.path.dirname(file_path) or '.', exist_ok=True)
    with open(file_path, 'w', encoding='utf-8', newline='') as f:
        if rows:
            writer = csv.DictWriter(f, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    logging.info(f"Wrote {file_path} ({len(rows)} rows)")
    return file_path
