"""Exact finite-depth arithmetic for the Peano curve f: [0,1] -> [0,1]^2.

At depth d the parameter interval [j*9^-d, (j+1)*9^-d] is mapped onto one
closed square of side 3^-d. The map is computed by running the base-9
digits of j through a small automaton whose state is a CurveOrientation
(a pair of reflections). Each level walks the 3x3 sub-squares column by
column in a serpentine: up the left column, down the middle, up the right.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import List, Tuple, Union

import numpy as np

from errors import ValidationError

logger = logging.getLogger(__name__)

MAX_DEPTH = 6
HOLDER_CONSTANT = 3 * math.sqrt(2)

Param = Union[Real, Fraction, str]
Point = Tuple[float, float]
ExactPoint = Tuple[Fraction, Fraction]


@dataclass(frozen=True, order=True)
class ParamInterval:
    """The closed interval [index * 9^-depth, (index + 1) * 9^-depth]"""
    depth: int
    index: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValidationError(f"negative depth {self.depth}", stage='curve')
        if not 0 <= self.index < 9 ** self.depth:
            raise ValidationError(
                f"interval index {self.index} outside [0, 9^{self.depth})", stage='curve')

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, 9 ** self.depth)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, 9 ** self.depth)

    def children(self) -> List['ParamInterval']:
        return [ParamInterval(self.depth + 1, 9 * self.index + k) for k in range(9)]

    def parent(self) -> 'ParamInterval':
        if self.depth == 0:
            raise ValidationError("depth-0 interval has no parent", stage='curve')
        return ParamInterval(self.depth - 1, self.index // 9)


@dataclass(frozen=True, order=True)
class Cell2D:
    """Closed square of side 3^-depth at grid position (col, row)"""
    depth: int
    col: int
    row: int

    def __post_init__(self):
        side = 3 ** self.depth
        if self.depth < 0 or not (0 <= self.col < side and 0 <= self.row < side):
            raise ValidationError(
                f"cell ({self.col}, {self.row}) outside the depth-{self.depth} grid", stage='curve')

    @property
    def side(self) -> float:
        return 3.0 ** -self.depth

    @property
    def diameter(self) -> float:
        return math.sqrt(2) * self.side

    @property
    def center(self) -> Point:
        return ((self.col + 0.5) * self.side, (self.row + 0.5) * self.side)

    def contains(self, other: 'Cell2D') -> bool:
        """True when `other` is a subcell of this one (or equal to it)"""
        if other.depth < self.depth:
            return False
        shrink = 3 ** (other.depth - self.depth)
        return other.col // shrink == self.col and other.row // shrink == self.row

    def shares_edge_with(self, other: 'Cell2D') -> bool:
        return (self.depth == other.depth
                and abs(self.col - other.col) + abs(self.row - other.row) == 1)


@dataclass(frozen=True)
class CurveOrientation:
    """Reflection state of a sub-curve: x -> 1-x and/or y -> 1-y"""
    flip_x: bool = False
    flip_y: bool = False

    def compose(self, other: 'CurveOrientation') -> 'CurveOrientation':
        return CurveOrientation(self.flip_x != other.flip_x, self.flip_y != other.flip_y)

    def apply(self, c: int, r: int) -> Tuple[int, int]:
        """Place local 3x3 slot (c, r) under this orientation"""
        return (2 - c if self.flip_x else c, 2 - r if self.flip_y else r)


IDENTITY = CurveOrientation()


def _serpentine(k: int) -> Tuple[int, int]:
    c = k // 3
    r = k % 3 if c % 2 == 0 else 2 - k % 3
    return c, r


def _slot_orientation(c: int, r: int) -> CurveOrientation:
    # odd row: the sub-curve runs right to left; odd column: top to bottom
    return CurveOrientation(r % 2 == 1, c % 2 == 1)


def _descend(iv: ParamInterval) -> Tuple[int, int, CurveOrientation]:
    col = row = 0
    orientation = IDENTITY
    for level in range(iv.depth):
        k = (iv.index // 9 ** (iv.depth - 1 - level)) % 9
        c, r = _serpentine(k)
        cp, rp = orientation.apply(c, r)
        col, row = 3 * col + cp, 3 * row + rp
        orientation = orientation.compose(_slot_orientation(c, r))
    return col, row, orientation


def cell_of_interval(iv: ParamInterval) -> Cell2D:
    """Image cell f(iv) of a depth-d parameter interval"""
    col, row, _ = _descend(iv)
    return Cell2D(iv.depth, col, row)


def cell_index_of(cell: Cell2D) -> ParamInterval:
    """The unique depth-d interval whose image is `cell`"""
    index = 0
    orientation = IDENTITY
    for level in range(cell.depth):
        shift = 3 ** (cell.depth - 1 - level)
        # reflections are involutions, so apply() also undoes them
        c, r = orientation.apply((cell.col // shift) % 3, (cell.row // shift) % 3)
        k = 3 * c + (r if c % 2 == 0 else 2 - r)
        index = 9 * index + k
        orientation = orientation.compose(_slot_orientation(c, r))
    return ParamInterval(cell.depth, index)


def interval_endpoints(iv: ParamInterval) -> Tuple[ExactPoint, ExactPoint]:
    """Exact values f(left) and f(right): the corners where the curve enters and leaves the cell"""
    col, row, orientation = _descend(iv)
    side = 3 ** iv.depth
    entry = (Fraction(col + int(orientation.flip_x), side),
             Fraction(row + int(orientation.flip_y), side))
    exit_ = (Fraction(col + int(not orientation.flip_x), side),
             Fraction(row + int(not orientation.flip_y), side))
    return entry, exit_


def cells_of_indices(depth: int, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized cell_of_interval over an array of depth-d indices"""
    js = np.asarray(indices, dtype=np.int64)
    cols = np.zeros_like(js)
    rows = np.zeros_like(js)
    flip_x = np.zeros(js.shape, dtype=bool)
    flip_y = np.zeros(js.shape, dtype=bool)
    for level in range(depth):
        k = (js // 9 ** (depth - 1 - level)) % 9
        c = k // 3
        r = np.where(c % 2 == 0, k % 3, 2 - k % 3)
        cols = 3 * cols + np.where(flip_x, 2 - c, c)
        rows = 3 * rows + np.where(flip_y, 2 - r, r)
        flip_x ^= (r % 2 == 1)
        flip_y ^= (c % 2 == 1)
    return cols, rows


def to_fraction(t: Param) -> Fraction:
    try:
        return Fraction(t)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"cannot read curve parameter {t!r}: {e}", stage='curve')


def interval_containing(t: Param, depth: int) -> ParamInterval:
    """Depth-d interval holding t: floor(t * 9^d), with t = 1 sent to the last interval"""
    exact = to_fraction(t)
    if not 0 <= exact <= 1:
        raise ValidationError(f"curve parameter {t} outside [0, 1]", stage='curve',
                              hint='pass --t between 0 and 1')
    index = math.floor(exact * 9 ** depth)
    return ParamInterval(depth, min(index, 9 ** depth - 1))


def eval_point(t: Param, depth: int) -> Point:
    """Center of the image cell of the depth-d interval containing t"""
    return cell_of_interval(interval_containing(t, depth)).center


def eval_points(ts: np.ndarray, depth: int) -> np.ndarray:
    """Vectorized eval_point for float parameters; returns an (m, 2) array"""
    ts = np.asarray(ts, dtype=float)
    if np.any((ts < 0) | (ts > 1)):
        raise ValidationError("curve parameters outside [0, 1]", stage='curve')
    scale = 9 ** depth
    indices = np.minimum(np.floor(ts * scale).astype(np.int64), scale - 1)
    cols, rows = cells_of_indices(depth, indices)
    side = 3.0 ** -depth
    return np.column_stack(((cols + 0.5) * side, (rows + 0.5) * side))


@dataclass(frozen=True)
class SurjectivityReport:
    depth: int
    total: int
    covered: int
    bijection: bool
    permutation: np.ndarray  # flat cell index col * 3^d + row, per interval j

    def summary(self) -> str:
        return (f"{self.covered}/{self.total} cells covered, "
                f"bijection: {'yes' if self.bijection else 'no'}")


def _check_depth(depth: int, max_depth: int):
    if depth < 0:
        raise ValidationError(f"negative depth {depth}", stage='curve')
    if depth > max_depth:
        raise ValidationError(
            f"depth {depth} exceeds the enumeration limit {max_depth}",
            stage='curve', hint=f'use --depth {max_depth} or less')


def surjectivity_report(depth: int, max_depth: int = MAX_DEPTH) -> SurjectivityReport:
    """Enumerate all 9^d intervals and count how often each cell is hit"""
    _check_depth(depth, max_depth)
    total = 9 ** depth
    cols, rows = cells_of_indices(depth, np.arange(total))
    flat = cols * 3 ** depth + rows
    hits = np.bincount(flat, minlength=total)
    covered = int(np.count_nonzero(hits))
    bijection = bool(np.all(hits == 1))
    logger.debug(f"Depth {depth}: {covered}/{total} cells covered")
    return SurjectivityReport(depth, total, covered, bijection, flat)


def adjacency_violations(depth: int, max_depth: int = MAX_DEPTH) -> int:
    """Number of consecutive interval pairs whose cells do not share an edge"""
    _check_depth(depth, max_depth)
    cols, rows = cells_of_indices(depth, np.arange(9 ** depth))
    steps = np.abs(np.diff(cols)) + np.abs(np.diff(rows))
    return int(np.count_nonzero(steps != 1))


def nesting_violations(depth: int, max_depth: int = MAX_DEPTH) -> int:
    """Number of depth-(d+1) intervals whose cell is not inside their parent's cell"""
    _check_depth(depth + 1, max_depth)
    children = np.arange(9 ** (depth + 1))
    child_cols, child_rows = cells_of_indices(depth + 1, children)
    parent_cols, parent_rows = cells_of_indices(depth, children // 9)
    bad = (child_cols // 3 != parent_cols) | (child_rows // 3 != parent_rows)
    return int(np.count_nonzero(bad))


def holder_violations(s: np.ndarray, t: np.ndarray, depth: int) -> int:
    """Count pairs breaking |f(s) - f(t)| <= 3*sqrt(2)*|s-t|^(1/2) + 2*sqrt(2)*3^-d"""
    gap = np.linalg.norm(eval_points(s, depth) - eval_points(t, depth), axis=1)
    bound = HOLDER_CONSTANT * np.sqrt(np.abs(np.asarray(s) - np.asarray(t))) \
        + 2 * math.sqrt(2) * 3.0 ** -depth
    return int(np.count_nonzero(gap > bound))
