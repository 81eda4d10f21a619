import logging
from argparse import Namespace

import numpy as np

from config import Config
from curve import cell_of_interval, cells_of_indices, eval_point, interval_containing, surjectivity_report
from .report_utils import dumps


def cmd_curve(config: Config, args: Namespace) -> int:
    """curve eval | cells | surjectivity"""
    depth = args.depth if args.depth is not None else config.depth
    config.pipeline_config(depth=depth)
    logging.info(f"Curve {args.sub} at depth {depth}")

    if args.sub == 'eval':
        interval = interval_containing(args.t, depth)
        x, y = eval_point(args.t, depth)
        cell = cell_of_interval(interval)
        print(dumps({'t': str(args.t), 'depth': depth, 'interval': interval.index,
                     'cell': [cell.col, cell.row], 'point': [x, y]}), end='')
    elif args.sub == 'cells':
        cols, rows = cells_of_indices(depth, np.arange(9 ** depth))
        print(dumps({'depth': depth, 'cells': [[c, r] for c, r in zip(cols.tolist(), rows.tolist())]}),
              end='')
    else:
        report = surjectivity_report(depth, config.max_depth)
        print(report.summary())
        if not report.bijection:
            return 3
    return 0
