"""A normal matrix as the continuous image of a Hermitian one.

The matrix A with cyclic vector x is modelled as multiplication by the
identity on L2(mu), mu the atomic spectral measure. The selection psi pushes
mu forward to gamma on K, the transport T: L2(gamma) -> L2(mu), g -> g o psi,
is unitary, and B = multiplication by t on L2(gamma) is Hermitian with
phi(B) = A up to one cell diameter.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from compact import AffineFrame, locate
from curve import ParamInterval, cell_of_interval
from errors import (NormalityError, NotCyclicError, PreconditionError,
                    ResolutionError, SolverError, ValidationError)
from selection import SelectionTable
from solvers import create_solver

logger = logging.getLogger(__name__)

NORMALITY_TOLERANCE = 1e-10
EIGEN_RESIDUAL_TOLERANCE = 1e-8
UNITARY_TOLERANCE = 1e-10
MASS_TOLERANCE = 1e-12
MIN_WEIGHT = 1e-10
# relative distance under which two eigenvalues count as one atom
MERGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NormalMatrix:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2)) if self.n else 0.0

    @staticmethod
    def commutator_norm(a: np.ndarray) -> float:
        adjoint = a.conj().T
        return float(np.linalg.norm(a @ adjoint - adjoint @ a))

    @classmethod
    def from_array(cls, a) -> 'NormalMatrix':
        """Validates shape and normality: |AA* - A*A|_F <= 1e-10 |A|_F^2"""
        entries = np.array(a, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ValidationError(f"expected a non-empty square matrix, got shape {entries.shape}",
                                  stage='spectral')
        if not np.all(np.isfinite(entries)):
            raise ValidationError("matrix has non-finite entries", stage='spectral')
        defect = cls.commutator_norm(entries)
        if defect > NORMALITY_TOLERANCE * np.linalg.norm(entries) ** 2:
            raise NormalityError(f"normality check failed: ‖AA*−A*A‖_F = {defect:.6e}",
                                 stage='spectral', hint='the input must be a normal matrix')
        return cls(entries)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NormalMatrix':
        try:
            re = np.array(data['re'], dtype=float)
            im = np.array(data['im'], dtype=float) if 'im' in data else np.zeros_like(re)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed matrix JSON: {e}", stage='input')
        if re.shape != im.shape:
            raise ValidationError("'re' and 'im' have different shapes", stage='input')
        if 'n' in data and re.shape != (int(data['n']), int(data['n'])):
            raise ValidationError(f"declared n={data['n']} but got shape {re.shape}", stage='input')
        return cls.from_array(re + 1j * im)

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 're': self.entries.real.tolist(), 'im': self.entries.imag.tolist()}


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many atoms; `labels` holds the exact interval index of atoms on K"""
    points: np.ndarray
    weights: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.points.shape != self.weights.shape:
            raise ValidationError("atom points and weights differ in length", stage='spectral')
        if np.any(self.weights <= 0):
            raise ValidationError("atom weights must be positive", stage='spectral')

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def to_dict(self) -> Dict[str, Any]:
        atoms = []
        for k, (point, weight) in enumerate(zip(self.points, self.weights)):
            atom = {'re': float(np.real(point)), 'im': float(np.imag(point)), 'weight': float(weight)}
            if self.labels is not None:
                atom['index'] = int(self.labels[k])
            atoms.append(atom)
        return {'atoms': atoms, 'total_mass': self.total_mass}


@dataclass(frozen=True)
class SpectralModel:
    matrix: NormalMatrix
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    vector: np.ndarray
    atom_values: np.ndarray
    weights: np.ndarray
    atom_of: np.ndarray  # eigenpair -> atom

    @property
    def measure(self) -> AtomicMeasure:
        return AtomicMeasure(self.atom_values, self.weights)

    @property
    def is_cyclic(self) -> bool:
        return len(self.atom_values) == self.matrix.n

    def eigen_residual(self) -> float:
        a, v = self.matrix.entries, self.eigenvectors
        return float(np.max(np.linalg.norm(a @ v - v * self.eigenvalues, axis=0)))

    def unitarity_defect(self) -> float:
        v = self.eigenvectors
        return float(np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1])))

    def multiplication_residual(self) -> float:
        """|V diag(lambda) V* - A|_op: the multiplication model reproduces A"""
        v = self.eigenvectors
        return float(np.linalg.norm(v @ np.diag(self.eigenvalues) @ v.conj().T - self.matrix.entries, 2))

    def cyclic_basis(self) -> np.ndarray:
        """Columns U e_i for the normalized indicators of the atoms: P_i x / |P_i x|"""
        if not self.is_cyclic:
            raise NotCyclicError("repeated eigenvalues: A is not multiplicity-free",
                                 stage='spectral', hint='the pipeline needs distinct eigenvalues')
        coefficients = self.eigenvectors.conj().T @ self.vector
        return self.eigenvectors * (coefficients / np.abs(coefficients))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.matrix.n,
            'eigenvalues': [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            'vector': [[float(z.real), float(z.imag)] for z in self.vector],
            'mu': self.measure.to_dict(),
            'cyclic': self.is_cyclic,
            'eigen_residual': self.eigen_residual(),
            'unitarity_defect': self.unitarity_defect(),
            'multiplication_residual': self.multiplication_residual(),
        }


def unit_vector(n: int, choice: Optional[str] = None,
                rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Cyclic vector from a CLI option: 'ones' (default), 'random' or comma-separated reals"""
    if choice in (None, '', 'ones'):
        x = np.ones(n, dtype=complex)
    elif choice == 'random':
        rng = rng if rng is not None else np.random.default_rng()
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
    else:
        try:
            x = np.array([complex(part) for part in choice.split(',')], dtype=complex)
        except ValueError as e:
            raise ValidationError(f"cannot read vector {choice!r}: {e}", stage='spectral')
    if x.shape != (n,):
        raise ValidationError(f"vector has length {x.size}, matrix has n={n}", stage='spectral')
    norm = np.linalg.norm(x)
    if norm == 0:
        raise ValidationError("cyclic vector is zero", stage='spectral', hint='pass --vector random')
    return x / norm


def _merge_atoms(values: np.ndarray, weights: np.ndarray, tolerance: float):
    atom_values, atom_weights, members = [], [], []
    atom_of = np.empty(len(values), dtype=int)
    for i, (value, weight) in enumerate(zip(values, weights)):
        for k, representative in enumerate(atom_values):
            if abs(value - representative) <= tolerance:
                members[k].append(value)
                atom_weights[k] += weight
                atom_of[i] = k
                break
        else:
            atom_values.append(value)
            atom_weights.append(weight)
            members.append([value])
            atom_of[i] = len(atom_values) - 1
    centers = np.array([np.mean(group) for group in members], dtype=complex)
    return centers, np.array(atom_weights, dtype=float), atom_of


def build_model(matrix: NormalMatrix, x: Optional[np.ndarray] = None,
                solver: str = 'schur') -> SpectralModel:
    """Eigendecomposition and atomic spectral measure of A for the vector x"""
    n = matrix.n
    x = unit_vector(n) if x is None else np.asarray(x, dtype=complex)
    if x.shape != (n,):
        raise ValidationError(f"vector has shape {x.shape}, expected ({n},)", stage='spectral')
    if abs(np.linalg.norm(x) - 1) > MASS_TOLERANCE:
        raise ValidationError(f"cyclic vector has norm {np.linalg.norm(x)}, expected 1",
                              stage='spectral')

    pairs = create_solver(solver).decompose(matrix.entries)
    order = np.lexsort((pairs.values.imag, pairs.values.real))
    values, vectors = pairs.values[order], pairs.vectors[:, order]

    norm = matrix.norm
    residual = float(np.max(np.linalg.norm(matrix.entries @ vectors - vectors * values, axis=0)))
    if residual > EIGEN_RESIDUAL_TOLERANCE * norm + np.finfo(float).tiny:
        raise SolverError(f"eigenpair residual {residual:.3e} too large", stage='spectral',
                          hint='use --solver schur')
    defect = float(np.linalg.norm(vectors.conj().T @ vectors - np.eye(n)))
    if defect > UNITARY_TOLERANCE:
        raise SolverError(f"eigenvectors not unitary (defect {defect:.3e})", stage='spectral',
                          hint='use --solver schur')

    weights = np.abs(vectors.conj().T @ x) ** 2
    weights = weights / weights.sum()
    atom_values, atom_weights, atom_of = _merge_atoms(values, weights, MERGE_TOLERANCE * max(norm, 1.0))
    if len(atom_values) < n:
        logger.warning(f"{n - len(atom_values)} repeated eigenvalues merged; "
                       f"the model covers the cyclic subspace of x only")
    light = np.flatnonzero(atom_weights < MIN_WEIGHT)
    if light.size:
        raise NotCyclicError(
            f"not cyclic for this vector: weight {atom_weights[light[0]]:.3e} "
            f"at eigenvalue {atom_values[light[0]]}",
            stage='spectral', hint='pass --vector random')

    logger.info(f"Spectral model: n={n}, {len(atom_values)} atoms, residual {residual:.3e}")
    return SpectralModel(matrix, values, vectors, x, atom_values, atom_weights, atom_of)


def pushforward(mu: AtomicMeasure, table: SelectionTable, frame: AffineFrame) -> AtomicMeasure:
    """gamma = mu o psi^-1: each atom moves to psi(cell(lambda)), weights summed on collisions"""
    mass: Dict[int, float] = {}
    for point, weight in zip(mu.points, mu.weights):
        cell = locate(point, frame, table.depth)
        if cell not in table.cells:
            raise ResolutionError(f"atom {point} falls outside the spectrum cover",
                                  stage='spectral', hint='increase --depth')
        j = table.psi_index(cell)
        mass[j] = mass.get(j, 0.0) + weight
    labels = np.array(sorted(mass), dtype=np.int64)
    gamma = AtomicMeasure(labels / table.denominator,
                          np.array([mass[j] for j in labels.tolist()], dtype=float), labels)
    if abs(gamma.total_mass - mu.total_mass) > MASS_TOLERANCE:
        raise PreconditionError(f"pushforward lost mass: {mu.total_mass} -> {gamma.total_mass}",
                                stage='spectral')
    return gamma


@dataclass(frozen=True)
class TransportOperator:
    """g -> g o psi from L2(gamma) to L2(mu), as a 0/1 matrix on atom values"""
    matrix: np.ndarray
    weights_mu: np.ndarray
    weights_gamma: np.ndarray

    def apply(self, g: np.ndarray) -> np.ndarray:
        return self.matrix @ g

    def adjoint_apply(self, f: np.ndarray) -> np.ndarray:
        """T* with respect to the weighted inner products; equals f o phi"""
        return (self.matrix.T @ (self.weights_mu * f)) / self.weights_gamma

    def unitary(self) -> np.ndarray:
        """T in the orthonormal bases of normalized atom indicators"""
        return np.sqrt(self.weights_mu)[:, None] * self.matrix / np.sqrt(self.weights_gamma)[None, :]

    def unitarity_defect(self) -> float:
        w = self.unitary()
        identity = np.eye(w.shape[0])
        return float(max(np.linalg.norm(w.conj().T @ w - identity, 2),
                         np.linalg.norm(w @ w.conj().T - identity, 2)))

    def norm_ratio(self, g: np.ndarray) -> float:
        """|Tg|_mu / |g|_gamma"""
        tg = self.apply(g)
        return math.sqrt(np.sum(self.weights_mu * np.abs(tg) ** 2)
                         / np.sum(self.weights_gamma * np.abs(g) ** 2))


def build_transport(mu: AtomicMeasure, gamma: AtomicMeasure, table: SelectionTable,
                    frame: AffineFrame) -> TransportOperator:
    """Pair every mu-atom with the gamma-atom at its selected parameter"""
    if len(mu) != len(gamma):
        raise ResolutionError(
            f"mismatched atom counts: {len(mu)} eigenvalues but {len(gamma)} parameters "
            f"(several eigenvalues share a depth-{table.depth} cell)",
            stage='spectral', hint='increase --depth')
    position = {int(j): k for k, j in enumerate(gamma.labels)}
    matrix = np.zeros((len(mu), len(gamma)))
    for i, point in enumerate(mu.points):
        k = position[table.psi_index(locate(point, frame, table.depth))]
        matrix[i, k] = 1.0
        if abs(mu.weights[i] - gamma.weights[k]) > MASS_TOLERANCE:
            raise PreconditionError("gamma is not the pushforward of mu", stage='spectral')
    transport = TransportOperator(matrix, mu.weights.copy(), gamma.weights.copy())
    defect = transport.unitarity_defect()
    if defect > MASS_TOLERANCE:
        raise PreconditionError(f"transport is not unitary (defect {defect:.3e})", stage='spectral')
    return transport


def hermitian_model(gamma: AtomicMeasure) -> np.ndarray:
    """B = multiplication by t on L2(gamma): the diagonal of the atom positions"""
    points = np.asarray(gamma.points)
    if np.iscomplexobj(points):
        if np.any(points.imag != 0):
            raise ValidationError("atoms of gamma must be real", stage='spectral')
        points = points.real
    if np.any((points < 0) | (points > 1)):
        raise ValidationError("atoms of gamma must lie in [0, 1]", stage='spectral')
    return np.diag(points.astype(float))


def phi_value(j: int, table: SelectionTable, frame: AffineFrame) -> complex:
    """phi at the left endpoint of interval j: its cell center in frame coordinates"""
    x, y = cell_of_interval(ParamInterval(table.depth, j)).center
    return complex(frame.restore(complex(x, y)))


def reconstruct(b: np.ndarray, table: SelectionTable, frame: AffineFrame) -> np.ndarray:
    """phi_d(B), entrywise on the diagonal of B"""
    values = []
    for t in np.diag(b).real:
        j = int(round(t * table.denominator))
        if abs(t - j / table.denominator) > MASS_TOLERANCE or not 0 <= j < table.denominator \
                or ParamInterval(table.depth, j) not in table.K:
            raise ValidationError(f"diagonal entry {t} is not a left endpoint of K",
                                  stage='spectral', hint='rebuild B from the same selection table')
        values.append(phi_value(j, table, frame))
    return np.diag(np.array(values, dtype=complex))


def reconstruction_bound(frame: AffineFrame, depth: int) -> float:
    return frame.scale * math.sqrt(2) * 3.0 ** -depth


def reconstruction_error(mu: AtomicMeasure, gamma: AtomicMeasure, phi_b: np.ndarray,
                         table: SelectionTable, frame: AffineFrame) -> float:
    """max_i |phi_d(psi(lambda_i)) - lambda_i|; defined even when atoms collapsed"""
    position = {int(j): k for k, j in enumerate(gamma.labels)}
    values = np.diag(phi_b)
    errors = [abs(values[position[table.psi_index(locate(z, frame, table.depth))]] - z)
              for z in mu.points]
    return float(max(errors))


def intertwining_error(mu: AtomicMeasure, transport: TransportOperator, phi_b: np.ndarray) -> float:
    """|T M_phi T* - M_z|_op on L2(mu)"""
    w = transport.unitary()
    return float(np.linalg.norm(w @ phi_b @ w.conj().T - np.diag(mu.points), 2))


def lift(model: SpectralModel, transport: TransportOperator, operator: np.ndarray) -> np.ndarray:
    """Carry an operator on L2(gamma) back to the space of A"""
    basis = model.cyclic_basis() @ transport.unitary()
    return basis @ operator @ basis.conj().T


def _matrix_polyval(coefficients: Sequence[complex], a: np.ndarray) -> np.ndarray:
    result = np.zeros_like(a, dtype=complex)
    identity = np.eye(a.shape[0])
    for c in reversed(list(coefficients)):
        result = result @ a + c * identity
    return result


def polynomial_check(model: SpectralModel, transport: TransportOperator, phi_b: np.ndarray,
                     coefficients: Sequence[complex]) -> float:
    """|p(A) - lift(p(phi_d(B)))|_op for a power-series polynomial p"""
    pa = _matrix_polyval(coefficients, model.matrix.entries)
    pb = np.diag(np.polynomial.polynomial.polyval(np.diag(phi_b), list(coefficients)))
    return float(np.linalg.norm(pa - lift(model, transport, pb), 2))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=rng)


def random_normal(n: int, rng: np.random.Generator,
                  eigenvalues: Optional[Sequence[complex]] = None) -> np.ndarray:
    """Q diag(lambda) Q* for a random unitary Q"""
    if eigenvalues is None:
        eigenvalues = rng.normal(size=n) + 1j * rng.normal(size=n)
    q = random_unitary(n, rng)
    return q @ np.diag(np.asarray(eigenvalues, dtype=complex)) @ q.conj().T
