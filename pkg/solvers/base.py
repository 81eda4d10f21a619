from abc import ABC, abstractmethod
from dataclasses import dataclass
import logging

import numpy as np

from errors import SolverError

UNITARY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Eigenpairs:
    """Eigenvalues and the matching eigenvector columns"""
    values: np.ndarray
    vectors: np.ndarray


class EigenSolver(ABC):
    """Abstract base class for dense eigensolver strategies"""

    name = 'base'

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def decompose(self, matrix: np.ndarray) -> Eigenpairs:
        """Eigendecomposition of a square matrix"""
        pass

    def check_unitary(self, vectors: np.ndarray):
        """Raises SolverError when the eigenvector matrix is not unitary"""
        n = vectors.shape[1]
        defect = np.linalg.norm(vectors.conj().T @ vectors - np.eye(n))
        if defect > UNITARY_TOLERANCE:
            raise SolverError(f"{self.name}: eigenvector matrix is not unitary (defect {defect:.3e})",
                              stage='spectral', hint='use --solver schur')
        self.logger.debug(f"{self.name}: unitarity defect {defect:.3e}")
