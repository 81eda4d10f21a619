import numpy as np
import scipy.linalg

from .base import EigenSolver, Eigenpairs
from .decorators import with_fallback


class EigSolver(EigenSolver):
    """General eigensolver; clustered eigenvalues can spoil unitarity, hence the fallback"""

    name = 'eig'

    @with_fallback('schur')
    def decompose(self, matrix: np.ndarray) -> Eigenpairs:
        values, vectors = scipy.linalg.eig(np.asarray(matrix, dtype=complex))
        vectors = vectors / np.linalg.norm(vectors, axis=0)
        self.check_unitary(vectors)
        return Eigenpairs(values, vectors)
