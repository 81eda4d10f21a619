import os
import logging
from argparse import Namespace

from calculus import discrete_laplacian, make_schedule, wvn_decompose
from config import Config
from errors import ValidationError
from .report_utils import dumps, read_hermitian_json, write_csv, write_json


def cmd_decompose(config: Config, args: Namespace) -> int:
    """Greedy diagonal-plus-small split of a Hermitian input or of the discrete Laplacian"""
    settings = config.pipeline_config(delta=args.delta, input_path=args.input, output_dir=args.out)
    if args.laplacian is not None:
        if args.laplacian < 1:
            raise ValidationError(f"Laplacian size must be positive, got {args.laplacian}", stage='cli')
        h = discrete_laplacian(args.laplacian)
        source = {'laplacian': args.laplacian}
    else:
        h = read_hermitian_json(settings.input_path)
        source = {'input': settings.input_path}
    logging.info(f"Decomposing a {h.shape[0]}x{h.shape[0]} Hermitian matrix...")

    split = wvn_decompose(h, make_schedule(settings.delta, h.shape[0], settings.delta_decay))
    data = {'config': settings.to_dict(), 'source': source, **split.to_dict()}
    if args.out:
        write_json(os.path.join(settings.output_dir, 'wvn.json'), data)
        write_csv(os.path.join(settings.output_dir, 'wvn_steps.csv'),
                  [{'step': k, 'seed': s, 'mu': m, 'delta': d, 'residual': r}
                   for k, (s, m, d, r) in enumerate(zip(split.seeds, split.mu.tolist(),
                                                        split.schedule.tolist(),
                                                        split.residuals.tolist()))])
    else:
        print(dumps(data), end='')
    return 0
