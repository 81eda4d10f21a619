import argparse

def parse_degrees(text: str):
    """'8,16,32' -> [8, 16, 32]"""
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"degrees must be comma-separated integers, got {text!r}")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--config',
                        help='Path to the configuration file')
    parser.add_argument('--verbose', '-v',
                        action='store_true',
                        help='Log debug output to the console')


def _add_matrix_input(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument('--input',
                        required=required,
                        help='Matrix JSON file {"n", "re", "im"}')
    parser.add_argument('--vector',
                        help="Cyclic vector: ones, random or comma-separated values")
    parser.add_argument('--solver',
                        help='Eigensolver: schur, eig or eigh')
    parser.add_argument('--seed',
                        type=int,
                        help='Random seed')


def create_parser() -> argparse.ArgumentParser:
    """Builds the command-line parser"""
    parser = argparse.ArgumentParser(
        prog='peano-berg',
        description='Normal matrices as continuous functions of Hermitian ones: diagonal plus compact')
    commands = parser.add_subparsers(dest='command', required=True)

    curve = commands.add_parser('curve', help='Inspect the finite-depth Peano curve')
    curve.add_argument('sub',
                       choices=['eval', 'cells', 'surjectivity'],
                       help='eval: f(t); cells: cells in curve order; surjectivity: coverage check')
    curve.add_argument('--t',
                       default='0',
                       help='Curve parameter in [0, 1], e.g. 0.5 or 1/9')
    curve.add_argument('--depth',
                       type=int,
                       help='Subdivision depth')
    _add_common(curve)

    select = commands.add_parser('select', help='Selection table for the spectrum of a matrix')
    _add_matrix_input(select)
    select.add_argument('--depth', type=int, help='Subdivision depth')
    select.add_argument('--out', help='Output directory')
    _add_common(select)

    model = commands.add_parser('model', help='Spectral model of a normal matrix')
    _add_matrix_input(model)
    model.add_argument('--out', help='Output directory')
    _add_common(model)

    decompose = commands.add_parser('decompose', help='Diagonal-plus-small split of a Hermitian matrix')
    source = decompose.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', help='Hermitian matrix JSON file')
    source.add_argument('--laplacian',
                        type=int,
                        help='Use the n-point discrete Laplacian')
    decompose.add_argument('--delta', type=float, help='Spectral window width')
    decompose.add_argument('--out', help='Output directory')
    _add_common(decompose)

    pipeline = commands.add_parser('pipeline', help='Run the whole chain and write all reports')
    _add_matrix_input(pipeline)
    pipeline.add_argument('--depth', type=int, help='Subdivision depth')
    pipeline.add_argument('--degrees',
                          type=parse_degrees,
                          help='Ascending polynomial degrees, e.g. 8,16,32')
    pipeline.add_argument('--delta', type=float, help='Spectral window width')
    pipeline.add_argument('--out', help='Output directory')
    _add_common(pipeline)

    return parser
