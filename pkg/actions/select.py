import os
import logging
from argparse import Namespace
from typing import Any, Dict

from compact import AffineFrame, normalize_spectrum
from config import Config, PipelineConfig
from selection import SelectionTable, build_selection, right_inverse_violations
from spectral import SpectralModel
from .model import load_model
from .report_utils import dumps, write_json


def selection_report(settings: PipelineConfig, model: SpectralModel):
    """Frame, cover and selection table for the spectrum of the model"""
    frame, cover = normalize_spectrum(model.atom_values, settings.depth)
    table = build_selection(cover)
    bad = right_inverse_violations(table)
    if bad:
        logging.warning(f"{len(bad)} cells break phi(psi(z)) = z")
    return frame, table


def selection_to_dict(settings: PipelineConfig, frame: AffineFrame, table: SelectionTable) -> Dict[str, Any]:
    return {
        'config': settings.to_dict(),
        'frame': frame.to_dict(),
        'cover': table.cells.to_dict(),
        'K': table.K.to_dict(),
        'selection': table.to_dict(),
    }


def cmd_select(config: Config, args: Namespace) -> int:
    """Writes selection.json for the spectrum of the input matrix"""
    settings = config.pipeline_config(input_path=args.input, depth=args.depth, vector=args.vector,
                                      solver=args.solver, seed=args.seed, output_dir=args.out)
    logging.info(f"Building the selection table at depth {settings.depth}...")
    frame, table = selection_report(settings, load_model(settings))
    data = selection_to_dict(settings, frame, table)
    if args.out:
        write_json(os.path.join(settings.output_dir, 'selection.json'), data)
    else:
        print(dumps(data), end='')
    return 0
