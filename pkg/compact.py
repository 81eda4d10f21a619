"""Finite-resolution covers of compact sets and the unit-square normalization."""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from curve import Cell2D, ParamInterval
from errors import ValidationError

logger = logging.getLogger(__name__)

MARGIN = 0.10
# mapped points may overshoot [0, 1] by round-off only
EDGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GridSet2D:
    depth: int
    cells: FrozenSet[Cell2D]

    def __post_init__(self):
        if any(cell.depth != self.depth for cell in self.cells):
            raise ValidationError("grid cells of mixed depth", stage='compact')

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: Cell2D) -> bool:
        return cell in self.cells

    def __or__(self, other: 'GridSet2D') -> 'GridSet2D':
        _same_depth(self.depth, other.depth)
        return GridSet2D(self.depth, self.cells | other.cells)

    def sorted_cells(self):
        return sorted(self.cells)

    def centers(self) -> np.ndarray:
        return np.array([cell.center for cell in self.sorted_cells()], dtype=float).reshape(-1, 2)

    def coarsen(self, depth: int) -> 'GridSet2D':
        if depth > self.depth:
            raise ValidationError(f"cannot coarsen depth {self.depth} to {depth}", stage='compact')
        shrink = 3 ** (self.depth - depth)
        return GridSet2D(depth, frozenset(
            Cell2D(depth, cell.col // shrink, cell.row // shrink) for cell in self.cells))

    def to_dict(self) -> Dict[str, Any]:
        return {'depth': self.depth,
                'cells': [[cell.col, cell.row] for cell in self.sorted_cells()]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSet2D':
        depth = int(data['depth'])
        return cls(depth, frozenset(Cell2D(depth, int(c), int(r)) for c, r in data['cells']))


@dataclass(frozen=True)
class GridSet1D:
    depth: int
    intervals: FrozenSet[ParamInterval]

    def __post_init__(self):
        if any(iv.depth != self.depth for iv in self.intervals):
            raise ValidationError("intervals of mixed depth", stage='compact')

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, iv: ParamInterval) -> bool:
        return iv in self.intervals

    def indices(self) -> np.ndarray:
        return np.array(sorted(iv.index for iv in self.intervals), dtype=np.int64)

    def coarsen(self, depth: int) -> 'GridSet1D':
        if depth > self.depth:
            raise ValidationError(f"cannot coarsen depth {self.depth} to {depth}", stage='compact')
        shrink = 9 ** (self.depth - depth)
        return GridSet1D(depth, frozenset(
            ParamInterval(depth, iv.index // shrink) for iv in self.intervals))

    def to_dict(self) -> Dict[str, Any]:
        return {'depth': self.depth, 'intervals': [int(j) for j in self.indices()]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSet1D':
        depth = int(data['depth'])
        return cls(depth, frozenset(ParamInterval(depth, int(j)) for j in data['intervals']))


@dataclass(frozen=True)
class AffineFrame:
    """Similarity z -> (z - center) / scale + (1 + i) / 2 onto the unit square"""
    center: complex
    scale: float

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValidationError(f"frame scale must be positive, got {self.scale}", stage='compact')

    def embed(self, z):
        return (np.asarray(z) - self.center) / self.scale + complex(0.5, 0.5)

    def restore(self, p):
        return (np.asarray(p) - complex(0.5, 0.5)) * self.scale + self.center

    def to_dict(self) -> Dict[str, Any]:
        return {'center': [float(np.real(self.center)), float(np.imag(self.center))],
                'scale': float(self.scale)}


IDENTITY_FRAME = AffineFrame(complex(0.5, 0.5), 1.0)


def _same_depth(a: int, b: int):
    if a != b:
        raise ValidationError(f"depth mismatch: {a} != {b}", stage='compact')


def _grid_index(x: float, depth: int) -> int:
    side = 3 ** depth
    return min(max(int(math.floor(x * side)), 0), side - 1)


def locate(point: complex, frame: AffineFrame, depth: int) -> Cell2D:
    """Depth-d cell holding the mapped point (floor convention, right edge clamped)"""
    mapped = complex(frame.embed(point))
    x, y = mapped.real, mapped.imag
    low, high = -EDGE_TOLERANCE, 1 + EDGE_TOLERANCE
    if not (low <= x <= high and low <= y <= high):
        raise ValidationError(
            f"point {point} maps to ({x:.6g}, {y:.6g}), outside the unit square",
            stage='compact', hint='normalize the spectrum with a frame that covers it')
    return Cell2D(depth, _grid_index(x, depth), _grid_index(y, depth))


def rasterize(points: Iterable[complex], frame: AffineFrame, depth: int) -> GridSet2D:
    """Outer cover of a finite point set: every depth-d cell holding a mapped point"""
    return GridSet2D(depth, frozenset(locate(z, frame, depth) for z in points))


def normalize_spectrum(eigs: Iterable[complex], depth: int) -> Tuple[AffineFrame, GridSet2D]:
    """
    Frame sending the bounding square of eigs (10% margin) onto [0,1]^2
    Args:
        eigs: eigenvalues of A
        depth: grid depth d
    Returns:
        Tuple[AffineFrame, GridSet2D]: the frame and the depth-d cover of the spectrum
    """
    values = np.asarray(list(eigs), dtype=complex)
    if values.size == 0:
        raise ValidationError("spectrum of a bounded operator is non-empty",
                              stage='compact', hint='the input matrix has no eigenvalues')
    lo_x, hi_x = values.real.min(), values.real.max()
    lo_y, hi_y = values.imag.min(), values.imag.max()
    center = complex((lo_x + hi_x) / 2, (lo_y + hi_y) / 2)
    side = max(hi_x - lo_x, hi_y - lo_y)
    if side <= 1e-300:
        scale = 1.0
    else:
        scale = side / (1 - MARGIN)
    frame = AffineFrame(center, float(scale))
    logger.debug(f"Spectrum frame: center={center}, scale={scale}")
    return frame, rasterize(values, frame, depth)


def hausdorff(a: GridSet2D, b: GridSet2D) -> float:
    """Symmetric Hausdorff distance between the cell-center sets"""
    _same_depth(a.depth, b.depth)
    if not len(a) or not len(b):
        raise ValidationError("Hausdorff distance of an empty cover", stage='compact')
    distances = cdist(a.centers(), b.centers())
    return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))
