"""Polynomial functional calculus and the diagonal-plus-compact split of A.

Chain: A -> (Lambda, K, psi) -> B = D + C (greedy Weyl-von Neumann step on a
rotated copy of B) -> A = phi(D) + L, with L = phi(B) - phi(D) approached by
C_n = p_n(B) - p_n(D) for Chebyshev approximants p_n of phi.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg
from numpy.polynomial import Chebyshev

from compact import AffineFrame, normalize_spectrum
from curve import cells_of_indices
from errors import NotCyclicError, PreconditionError, ValidationError
from selection import SelectionTable, build_selection
from solvers import create_solver
from spectral import (AtomicMeasure, NormalMatrix, SpectralModel, TransportOperator,
                      build_model, build_transport, hermitian_model, intertwining_error,
                      pushforward, random_unitary, reconstruct, reconstruction_bound,
                      reconstruction_error, unit_vector)

logger = logging.getLogger(__name__)

SPECTRUM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-10
SEED_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10
# floating-point slack added to the analytic bounds when they are compared with measurements
ROUNDOFF = 1e-10


@dataclass(frozen=True)
class ExtendedPhi:
    """Piecewise-linear complex function through (knots, values), constant outside"""
    knots: np.ndarray
    values: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (np.interp(t, self.knots, self.values.real)
                + 1j * np.interp(t, self.knots, self.values.imag))


def extend_phi(table: SelectionTable, frame: AffineFrame) -> ExtendedPhi:
    """Interpolate phi through (left endpoint of j, frame image of the cell center of j), j in K"""
    indices = table.K.indices()
    if indices.size == 0:
        raise ValidationError("empty K", stage='calculus')
    cols, rows = cells_of_indices(table.depth, indices)
    side = 3.0 ** -table.depth
    centers = (cols + 0.5) * side + 1j * (rows + 0.5) * side
    return ExtendedPhi(indices / table.denominator, np.asarray(frame.restore(centers), dtype=complex))


@dataclass(frozen=True)
class PolyApprox:
    degree: int
    effective_degree: int
    real: Chebyshev
    imag: Chebyshev
    sup_error_real: float
    sup_error_imag: float

    @property
    def sup_error(self) -> float:
        return math.hypot(self.sup_error_real, self.sup_error_imag)

    def __call__(self, t):
        return self.real(t) + 1j * self.imag(t)

    def coefficients(self) -> np.ndarray:
        """Complex Chebyshev coefficients in the window of the [0, 1] domain"""
        size = max(len(self.real.coef), len(self.imag.coef))
        return (np.pad(self.real.coef, (0, size - len(self.real.coef)))
                + 1j * np.pad(self.imag.coef, (0, size - len(self.imag.coef))))


def _sample_grid(degree: int, knots: np.ndarray) -> np.ndarray:
    count = max(100 * max(degree, 1), 20 * degree ** 2) + 1
    return np.union1d(np.linspace(0.0, 1.0, count), knots)


def _certified_error(poly: Chebyshev, grid: np.ndarray, target: np.ndarray) -> float:
    # between neighbouring samples the target is linear, so the error deviates
    # from its chord by at most h^2/8 * sup|p''|
    sampled = float(np.max(np.abs(poly(grid) - target)))
    if poly.degree() < 2:
        return sampled
    curvature = float(np.sum(np.abs(poly.deriv(2).coef)))
    h = float(np.max(np.diff(grid)))
    return sampled + h * h / 8 * curvature


def _fit(phi: ExtendedPhi, degree: int) -> PolyApprox:
    grid = _sample_grid(degree, phi.knots)
    target = phi(grid)
    real = Chebyshev.fit(grid, target.real, degree, domain=[0, 1])
    imag = Chebyshev.fit(grid, target.imag, degree, domain=[0, 1])
    return PolyApprox(degree, degree, real, imag,
                      _certified_error(real, grid, target.real),
                      _certified_error(imag, grid, target.imag))


def approx_sequence(phi: ExtendedPhi, degrees: Sequence[int]) -> List[PolyApprox]:
    """
    Least-squares Chebyshev approximants with certified, non-increasing sup errors
    Args:
        phi: piecewise-linear function on [0, 1]
        degrees: strictly ascending non-negative degrees
    Returns:
        List[PolyApprox]: one approximant per degree
    """
    degrees = list(degrees)
    if any(d < 0 for d in degrees):
        raise ValidationError(f"negative degree in {degrees}", stage='calculus')
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValidationError(f"degrees must be strictly ascending: {degrees}", stage='calculus')
    produced: List[PolyApprox] = []
    for degree in degrees:
        approx = _fit(phi, degree)
        if produced and approx.sup_error > produced[-1].sup_error:
            previous = produced[-1]
            logger.warning(f"Degree {degree} certifies {approx.sup_error:.3e} > "
                           f"{previous.sup_error:.3e}; reusing degree {previous.effective_degree}")
            approx = PolyApprox(degree, previous.effective_degree, previous.real, previous.imag,
                                previous.sup_error_real, previous.sup_error_imag)
        logger.debug(f"Degree {degree}: sup error {approx.sup_error:.3e}")
        produced.append(approx)
    return produced


def _check_hermitian(h: np.ndarray, stage: str = 'calculus'):
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {h.shape}", stage=stage)
    asymmetry = np.linalg.norm(h - h.conj().T)
    if asymmetry > HERMITIAN_TOLERANCE * max(np.linalg.norm(h), 1.0):
        raise ValidationError(f"matrix is not Hermitian (|H - H*| = {asymmetry:.3e})", stage=stage)


def apply_poly(p: PolyApprox, h: np.ndarray) -> np.ndarray:
    """p(H) by the Clenshaw recurrence on the matrix argument"""
    h = np.asarray(h)
    _check_hermitian(h)
    spectrum = scipy.linalg.eigvalsh(h)
    if spectrum[0] < -SPECTRUM_TOLERANCE or spectrum[-1] > 1 + SPECTRUM_TOLERANCE:
        raise ValidationError(f"spectrum [{spectrum[0]:.6g}, {spectrum[-1]:.6g}] is outside [0, 1]",
                              stage='calculus')
    n = h.shape[0]
    identity = np.eye(n)
    offset, slope = p.real.mapparms()
    x = offset * identity + slope * h
    b1 = np.zeros((n, n), dtype=complex)
    b2 = np.zeros((n, n), dtype=complex)
    coefficients = p.coefficients()
    for c in coefficients[:0:-1]:
        b1, b2 = c * identity + 2 * x @ b1 - b2, b1
    return coefficients[0] * identity + x @ b1 - b2


def phi_of_hermitian(phi, h: np.ndarray) -> np.ndarray:
    """phi(H) through the eigendecomposition of H"""
    pairs = create_solver('eigh').decompose(h)
    v = pairs.vectors
    return (v * phi(pairs.values)) @ v.conj().T


@dataclass(frozen=True)
class WvnDecomposition:
    """H = F diag(mu) F* + C from the greedy spectral-window construction

    residuals[k] = |(H - mu_k) f_k|; windows lists the spectral windows in
    the order they were opened, each with the steps it produced.
    """
    basis: np.ndarray
    mu: np.ndarray
    remainder: np.ndarray
    residuals: np.ndarray
    schedule: np.ndarray
    seeds: List[int]
    skipped: List[Dict[str, int]]
    windows: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.mu)

    @property
    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.remainder))

    @property
    def hs_bound(self) -> float:
        return float(2 * np.sqrt(np.sum(self.schedule[:len(self.mu)] ** 2)))

    def diagonal_operator(self) -> np.ndarray:
        return (self.basis * self.mu) @ self.basis.conj().T

    def singular_values(self) -> np.ndarray:
        return scipy.linalg.svdvals(self.remainder)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mu': self.mu.tolist(),
            'residuals': self.residuals.tolist(),
            'schedule': self.schedule[:len(self.mu)].tolist(),
            'seeds': list(self.seeds),
            'skipped_seeds': list(self.skipped),
            'windows': list(self.windows),
            'hs_norm': self.hs_norm,
            'hs_bound': self.hs_bound,
            'hs_within_bound': self.hs_norm <= self.hs_bound,
            'singular_values': self.singular_values().tolist(),
        }


def make_schedule(delta: float, n: int, decay: float = 1.0) -> np.ndarray:
    """delta_k = delta * decay^k for k < n"""
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}", stage='calculus')
    if not 0 < decay <= 1:
        raise ValidationError(f"delta decay must lie in (0, 1], got {decay}", stage='calculus')
    return delta * decay ** np.arange(n)


def _window_sizes(theta: np.ndarray, schedule: np.ndarray) -> np.ndarray:
    # a window of m eigenvalues opened at step k spends steps k..k+m-1, so its
    # span must fit the narrowest of them: theta[i+m-1] - theta[i] <= delta_{k+m-1}
    sizes = np.empty(len(theta), dtype=int)
    for i in range(len(theta)):
        fits = theta[i:] - theta[i] <= schedule[:len(theta) - i]
        sizes[i] = len(fits) if fits.all() else int(np.argmin(fits))
    return sizes


def _heaviest_window(masses: np.ndarray, sizes: np.ndarray):
    cumulative = np.concatenate(([0.0], np.cumsum(masses)))
    starts = np.arange(len(masses))
    totals = cumulative[starts + sizes] - cumulative[starts]
    start = int(np.argmax(totals))
    return start, start + int(sizes[start])


def wvn_decompose(h: np.ndarray, schedule: Sequence[float]) -> WvnDecomposition:
    """Greedy diagonal-plus-small split of a Hermitian matrix

    The complement M_k of f_1..f_{k-1} is always a sum of eigenspaces of H,
    so compressing H to M_k keeps the eigenpairs of H not yet consumed. A
    step takes the next usable standard basis vector, projects it into M_k
    and opens the spectral window carrying most of its mass. The normalized
    projection onto that window becomes f_k and an orthonormal completion
    inside the window supplies the following steps, so the window is
    consumed whole. Every f in a window shares mu, the window midpoint, hence
    |(H - mu) f| <= span / 2 <= delta for each step the window spends.
    """
    h = np.asarray(h, dtype=complex)
    _check_hermitian(h, stage='wvn')
    n = h.shape[0]
    schedule = np.asarray(schedule, dtype=float)
    if schedule.size < n:
        raise ValidationError(f"schedule has {schedule.size} entries, need {n}", stage='wvn')
    if np.any(schedule[:n] <= 0):
        raise ValidationError("schedule entries must be positive", stage='wvn')

    pairs = create_solver('eigh').decompose(h)
    remaining = np.arange(n)
    columns, mu, residuals, seeds, skipped, windows = [], [], [], [], [], []
    pointer = 0
    while len(columns) < n:
        k = len(columns)
        complement = pairs.vectors[:, remaining]
        theta = pairs.values[remaining]

        for attempt in range(n):
            seed = (pointer + attempt) % n
            coordinates = complement[seed, :].conj()
            if np.linalg.norm(coordinates) >= SEED_TOLERANCE:
                break
            skipped.append({'step': k, 'seed': seed})
            logger.warning(f"WvN step {k}: seed e_{seed} degenerates in the complement, skipped")
        pointer = seed + 1

        start, end = _heaviest_window(np.abs(coordinates) ** 2, _window_sizes(theta, schedule[k:]))
        lead = coordinates[start:end] / np.linalg.norm(coordinates[start:end])
        local = np.column_stack((lead, scipy.linalg.null_space(lead.conj()[None, :])))
        mu_window = (theta[start] + theta[end - 1]) / 2
        windows.append({'step': k, 'seed': seed, 'size': end - start,
                        'low': float(theta[start]), 'high': float(theta[end - 1])})

        for f in (complement[:, start:end] @ local).T:
            step = len(columns)
            residual = float(np.linalg.norm(h @ f - mu_window * f))
            if residual > schedule[step]:
                raise PreconditionError(f"step {step}: residual {residual:.3e} exceeds delta "
                                        f"{schedule[step]:.3e}", stage='wvn', hint='increase --delta')
            columns.append(f)
            mu.append(float(mu_window))
            residuals.append(residual)
            seeds.append(seed)
        remaining = np.delete(remaining, np.arange(start, end))
        logger.debug(f"WvN step {k}: seed e_{seed}, window [{theta[start]:.6g}, {theta[end - 1]:.6g}] "
                     f"of {end - start} eigenvalues")

    basis = np.column_stack(columns)
    defect = np.linalg.norm(basis.conj().T @ basis - np.eye(n))
    if defect > UNITARY_TOLERANCE:
        raise PreconditionError(f"WvN basis is not unitary (defect {defect:.3e})", stage='wvn')
    mu = np.array(mu)
    remainder = h - (basis * mu) @ basis.conj().T
    result = WvnDecomposition(basis, mu, remainder, np.array(residuals), schedule, seeds, skipped, windows)
    if result.hs_norm > result.hs_bound:
        logger.warning(f"|C|_HS = {result.hs_norm:.3e} exceeds 2(sum delta^2)^(1/2) = {result.hs_bound:.3e}")
    logger.info(f"WvN split of a {n}x{n} matrix: {len(windows)} windows, |C|_HS = {result.hs_norm:.3e}")
    return result


def discrete_laplacian(n: int) -> np.ndarray:
    """(2I - S - S*) / 4 on n points; its spectrum lies in (0, 1)"""
    return (2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / 4


def truncation_profile(sizes: Sequence[int], delta: float,
                       decay: float = 1.0) -> Dict[int, np.ndarray]:
    """Singular values of C for the Laplacian family: the compactness proxy"""
    profile = {}
    for n in sizes:
        split = wvn_decompose(discrete_laplacian(n), make_schedule(delta, n, decay))
        profile[n] = split.singular_values()
    return profile


def telescoping_residuals(d: np.ndarray, c: np.ndarray, k_max: int = 4) -> List[Dict[str, Any]]:
    """(D+C)^k - D^k against the sum of all words in D, C with at least one C"""
    h_norm = float(np.linalg.norm(d + c, 2))
    rows = []
    for k in range(1, k_max + 1):
        lhs = np.linalg.matrix_power(d + c, k) - np.linalg.matrix_power(d, k)
        words = (w for w in itertools.product((d, c), repeat=k) if any(m is c for m in w))
        rhs = sum(reduce(np.matmul, word) for word in words)
        residual = float(np.linalg.norm(lhs - rhs, 2))
        tolerance = 1e-9 * h_norm ** k
        rows.append({'k': k, 'residual': residual, 'tolerance': tolerance,
                     'ok': residual <= tolerance})
    return rows


@dataclass(frozen=True)
class DecompositionReport:
    """Everything measured along A -> B = D + C -> A = phi(D) + L"""
    depth: int
    degrees: List[int]
    seed: int
    solver: str
    model: SpectralModel
    frame: AffineFrame
    table: SelectionTable
    gamma: AtomicMeasure
    transport: TransportOperator
    rotation: np.ndarray
    wvn: WvnDecomposition
    phi_b: np.ndarray
    phi_mu: np.ndarray
    remainder: np.ndarray
    approximants: List[PolyApprox]
    c_n_trace: List[Dict[str, Any]]
    telescoping: List[Dict[str, Any]]
    checks: Dict[str, float] = field(default_factory=dict)

    @property
    def phi_of_d(self) -> np.ndarray:
        basis = self.wvn.basis
        return (basis * self.phi_mu) @ basis.conj().T

    @property
    def l_norm(self) -> float:
        return float(np.linalg.norm(self.remainder, 2))

    @property
    def trace_non_increasing(self) -> bool:
        gaps = [row['gap'] for row in self.c_n_trace]
        return all(b <= a + ROUNDOFF for a, b in zip(gaps, gaps[1:]))

    @property
    def all_within_bounds(self) -> bool:
        return all(row['ok'] for row in self.c_n_trace) and all(row['ok'] for row in self.telescoping)

    def headline(self) -> Dict[str, float]:
        last = self.c_n_trace[-1] if self.c_n_trace else {'gap': 0.0, 'bound': 0.0}
        return {
            'reconstruction_error': self.checks['reconstruction_error'],
            'reconstruction_bound': self.checks['reconstruction_bound'],
            'final_c_n_gap': last['gap'],
            'final_c_n_bound': last['bound'],
            'berg_residual': self.checks['berg_residual'],
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            'depth': self.depth,
            'degrees': list(self.degrees),
            'seed': self.seed,
            'solver': self.solver,
            'n': self.model.matrix.n,
            'frame': self.frame.to_dict(),
            'b_diagonal': self.gamma.points.tolist(),
            'phi_b_diagonal': [[float(z.real), float(z.imag)] for z in np.diag(self.phi_b)],
            'wvn': self.wvn.to_dict(),
            'phi_of_mu': [[float(z.real), float(z.imag)] for z in self.phi_mu],
            'l_norm': self.l_norm,
            'l_singular_values': scipy.linalg.svdvals(self.remainder).tolist(),
            'c_n_trace': self.c_n_trace,
            'trace_non_increasing': self.trace_non_increasing,
            'telescoping': self.telescoping,
            'checks': dict(self.checks),
        }

    def trace_rows(self) -> List[Dict[str, Any]]:
        columns = ('degree', 'effective_degree', 'sup_error', 'bound', 'gap', 'mapping_gap', 'ok')
        return [{key: row[key] for key in columns} for row in self.c_n_trace]


def berg_assemble(matrix: NormalMatrix, depth: int, degrees: Sequence[int], delta: float,
                  seed: int = 0, vector: Optional[np.ndarray] = None, solver: str = 'schur',
                  delta_decay: float = 1.0) -> DecompositionReport:
    """
    A = phi(D) + L for a normal matrix, with every quantitative step checked
    Args:
        matrix: normal input A
        depth: grid depth d of the spectrum cover
        degrees: strictly ascending polynomial degrees for C_n
        delta: first spectral window width
        seed: seed of the random rotation Q
        vector: cyclic vector (defaults to the normalized ones vector)
        solver: eigensolver registry name
        delta_decay: delta_k = delta * delta_decay^k
    Returns:
        DecompositionReport: the split together with its measured checks
    """
    model = build_model(matrix, unit_vector(matrix.n) if vector is None else vector, solver)
    if not model.is_cyclic:
        raise NotCyclicError("A has repeated eigenvalues; it needs several cyclic subspaces",
                             stage='spectral', hint='use a matrix with distinct eigenvalues')
    frame, cover = normalize_spectrum(model.atom_values, depth)
    table = build_selection(cover)
    mu = model.measure
    gamma = pushforward(mu, table, frame)
    transport = build_transport(mu, gamma, table, frame)
    b = hermitian_model(gamma)
    phi_b = reconstruct(b, table, frame)
    logger.info(f"Hermitian model: {b.shape[0]} atoms on K at depth {depth}")

    rng = np.random.default_rng(seed)
    q = random_unitary(b.shape[0], rng)
    h = q @ b @ q.conj().T
    h = (h + h.conj().T) / 2
    split = wvn_decompose(h, make_schedule(delta, h.shape[0], delta_decay))

    phi = extend_phi(table, frame)
    phi_mu = phi(split.mu)
    phi_of_d = (split.basis * phi_mu) @ split.basis.conj().T
    a_model = q @ phi_b @ q.conj().T
    remainder = a_model - phi_of_d

    approximants = approx_sequence(phi, degrees)
    phi_h = phi_of_hermitian(phi, h)
    trace = []
    for approx in approximants:
        p_h = apply_poly(approx, h)
        p_d = (split.basis * approx(split.mu)) @ split.basis.conj().T
        gap = float(np.linalg.norm(p_h - p_d - remainder, 2))
        mapping_gap = float(np.linalg.norm(p_h - phi_h, 2))
        bound = 2 * approx.sup_error
        trace.append({'degree': approx.degree, 'effective_degree': approx.effective_degree,
                      'sup_error': approx.sup_error, 'bound': bound, 'gap': gap,
                      'mapping_gap': mapping_gap,
                      'ok': gap <= bound + ROUNDOFF and mapping_gap <= approx.sup_error + ROUNDOFF})
        logger.debug(f"C_{approx.degree}: gap {gap:.3e} (bound {bound:.3e})")

    # G0 carries the rotated model space back to the space of A
    lifted = model.cyclic_basis() @ transport.unitary() @ q.conj().T
    diagonal_basis = lifted @ split.basis
    in_basis = diagonal_basis.conj().T @ (lifted @ phi_of_d @ lifted.conj().T) @ diagonal_basis
    checks = {
        'reconstruction_error': reconstruction_error(mu, gamma, phi_b, table, frame),
        'reconstruction_bound': reconstruction_bound(frame, depth),
        'transport_defect': transport.unitarity_defect(),
        'intertwining_error': intertwining_error(mu, transport, phi_b),
        'multiplication_residual': model.multiplication_residual(),
        'berg_residual': float(np.linalg.norm(a_model - (phi_of_d + remainder), 2)),
        'berg_tolerance': 1e-10 * matrix.norm,
        'phi_h_consistency': float(np.linalg.norm(phi_h - a_model, 2)),
        'lift_error': float(np.linalg.norm(matrix.entries - lifted @ a_model @ lifted.conj().T, 2)),
        'phi_of_d_offdiagonal': float(np.linalg.norm(in_basis - np.diag(np.diag(in_basis)), 2)),
        'hs_norm': split.hs_norm,
        'hs_bound': split.hs_bound,
    }
    telescoping = telescoping_residuals(split.diagonal_operator(), split.remainder)
    report = DecompositionReport(depth, list(degrees), seed, solver, model, frame, table, gamma,
                                 transport, q, split, phi_b, phi_mu, remainder, approximants,
                                 trace, telescoping, checks)
    if not report.all_within_bounds:
        logger.warning("Some C_n or telescoping checks exceed their bounds")
    logger.info(f"Berg split: |L| = {report.l_norm:.3e}, residual {checks['berg_residual']:.3e}")
    return report
