import numpy as np
import scipy.linalg

from errors import SolverError
from .base import EigenSolver, Eigenpairs

# strictly upper Schur mass allowed relative to the matrix norm
NORMAL_SCHUR_TOLERANCE = 1e-8


class SchurSolver(EigenSolver):
    """Complex Schur form A = Z T Z*; for a normal A the factor T is diagonal"""

    name = 'schur'

    def decompose(self, matrix: np.ndarray) -> Eigenpairs:
        a = np.asarray(matrix, dtype=complex)
        t, z = scipy.linalg.schur(a, output='complex')
        off_diagonal = np.linalg.norm(np.triu(t, 1))
        scale = max(np.linalg.norm(a), np.finfo(float).tiny)
        if off_diagonal > NORMAL_SCHUR_TOLERANCE * scale:
            raise SolverError(f"Schur factor is not diagonal (off-diagonal norm {off_diagonal:.3e})",
                              stage='spectral', hint='the matrix is not normal')
        self.logger.debug(f"Schur off-diagonal norm {off_diagonal:.3e}")
        return Eigenpairs(np.diag(t).copy(), z)
