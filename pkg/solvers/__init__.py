from .base import EigenSolver, Eigenpairs
from .eig import EigSolver
from .eigh import HermitianSolver
from .schur import SchurSolver
from .factory import SOLVERS, create_solver

__all__ = [
    'EigenSolver',
    'Eigenpairs',
    'EigSolver',
    'HermitianSolver',
    'SchurSolver',
    'SOLVERS',
    'create_solver'
]
