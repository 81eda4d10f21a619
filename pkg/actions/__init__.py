from .inspect_curve import cmd_curve
from .select import cmd_select
from .model import cmd_model
from .decompose import cmd_decompose
from .pipeline import cmd_pipeline

COMMANDS = {
    'curve': cmd_curve,
    'select': cmd_select,
    'model': cmd_model,
    'decompose': cmd_decompose,
    'pipeline': cmd_pipeline,
}

__all__ = [
    'cmd_curve',
    'cmd_select',
    'cmd_model',
    'cmd_decompose',
    'cmd_pipeline',
    'COMMANDS'
]
