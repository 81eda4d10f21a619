from typing import Dict, Type
import logging

from errors import ValidationError
from .base import EigenSolver
from .eig import EigSolver
from .eigh import HermitianSolver
from .schur import SchurSolver

# Registry of available solvers
SOLVERS: Dict[str, Type[EigenSolver]] = {
    'schur': SchurSolver,
    'eig': EigSolver,
    'eigh': HermitianSolver,
}


def create_solver(name: str) -> EigenSolver:
    """
    Creates an eigensolver strategy by registry name
    Args:
        name: key of SOLVERS
    Returns:
        EigenSolver: the solver
    """
    logging.debug(f"Creating eigensolver: {name}")
    solver_class = SOLVERS.get(name)
    if not solver_class:
        raise ValidationError(f"unknown solver: {name}", stage='spectral',
                              hint=f"choose one of {', '.join(sorted(SOLVERS))}")
    return solver_class()
