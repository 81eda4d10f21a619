import os
import logging
from argparse import Namespace

import numpy as np

from config import Config, PipelineConfig
from spectral import SpectralModel, build_model, unit_vector
from .report_utils import dumps, read_matrix_json, write_json


def load_model(settings: PipelineConfig) -> SpectralModel:
    """Reads the input matrix and builds its spectral model for the configured vector"""
    matrix = read_matrix_json(settings.input_path)
    x = unit_vector(matrix.n, settings.vector, np.random.default_rng(settings.seed))
    return build_model(matrix, x, settings.solver)


def cmd_model(config: Config, args: Namespace) -> int:
    """Writes model.json: eigenpairs, cyclic vector and the atomic measure mu"""
    settings = config.pipeline_config(input_path=args.input, vector=args.vector, solver=args.solver,
                                      seed=args.seed, output_dir=args.out)
    logging.info("Building the spectral model...")
    model = load_model(settings)
    data = {'config': settings.to_dict(), **model.to_dict()}
    if args.out:
        write_json(os.path.join(settings.output_dir, 'model.json'), data)
    else:
        print(dumps(data), end='')
    return 0
