import numpy as np
import scipy.linalg

from errors import SolverError
from .base import EigenSolver, Eigenpairs

HERMITIAN_TOLERANCE = 1e-10


class HermitianSolver(EigenSolver):
    """eigh for Hermitian input; eigenvalues come back real and ascending"""

    name = 'eigh'

    def decompose(self, matrix: np.ndarray) -> Eigenpairs:
        h = np.asarray(matrix)
        asymmetry = np.linalg.norm(h - h.conj().T)
        if asymmetry > HERMITIAN_TOLERANCE * max(np.linalg.norm(h), 1.0):
            raise SolverError(f"matrix is not Hermitian (|H - H*| = {asymmetry:.3e})",
                              stage='spectral')
        values, vectors = scipy.linalg.eigh(h)
        return Eigenpairs(values, vectors)
