"""Preimage K = f^-1(Lambda), the restriction phi = f|K and the infimum selection psi.

psi(z) is the left endpoint of the smallest-index interval of K whose image
cell is z. At a fixed depth the infimum is a minimum over finitely many
integers, so every value here is exact.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from compact import AffineFrame, GridSet1D, GridSet2D, locate, rasterize
from curve import (MAX_DEPTH, Cell2D, ParamInterval, Param, cell_index_of,
                   cell_of_interval, cells_of_indices, to_fraction)
from errors import PreconditionError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectionTable:
    depth: int
    cells: GridSet2D
    K: GridSet1D
    entries: Dict[Cell2D, int] = field(compare=False)

    @property
    def denominator(self) -> int:
        return 9 ** self.depth

    def psi_index(self, cell: Cell2D) -> int:
        try:
            return self.entries[cell]
        except KeyError:
            raise ValidationError(f"cell {cell} is not in the spectrum cover", stage='selection',
                                  hint='increase --depth')

    def psi(self, cell: Cell2D) -> Fraction:
        return Fraction(self.psi_index(cell), self.denominator)

    def psi_interval(self, cell: Cell2D) -> ParamInterval:
        return ParamInterval(self.depth, self.psi_index(cell))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'depth': self.depth,
            'entries': [{'cell': [cell.col, cell.row], 't_num': self.entries[cell],
                         't_den': self.denominator}
                        for cell in sorted(self.entries)],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SelectionTable':
        depth = int(data['depth'])
        entries = {}
        for entry in data['entries']:
            if int(entry['t_den']) != 9 ** depth:
                raise ValidationError(f"selection entry {entry} has the wrong denominator",
                                      stage='selection')
            entries[Cell2D(depth, *entry['cell'])] = int(entry['t_num'])
        cells = GridSet2D(depth, frozenset(entries))
        return cls(depth, cells, preimage(cells), entries)


def _check_cover(cover: GridSet2D):
    if not len(cover):
        raise ValidationError("empty spectrum cover", stage='selection')
    if cover.depth > MAX_DEPTH:
        raise ValidationError(f"depth {cover.depth} exceeds {MAX_DEPTH}", stage='selection',
                              hint=f'use --depth {MAX_DEPTH} or less')


def preimage(cover: GridSet2D) -> GridSet1D:
    """K: the depth-d intervals whose image cell lies in the cover"""
    _check_cover(cover)
    K = GridSet1D(cover.depth, frozenset(cell_index_of(cell) for cell in cover.cells))
    logger.debug(f"Preimage of {len(cover)} cells: {len(K)} intervals")
    return K


def build_selection(cover: GridSet2D) -> SelectionTable:
    """Fold over K keeping, per image cell, the smallest interval index"""
    K = preimage(cover)
    depth = cover.depth
    indices = K.indices()
    cols, rows = cells_of_indices(depth, indices)
    entries: Dict[Cell2D, int] = {}
    for j, col, row in zip(indices.tolist(), cols.tolist(), rows.tolist()):
        entries.setdefault(Cell2D(depth, col, row), j)
    missing = cover.cells - entries.keys()
    if missing:
        raise PreconditionError(f"{len(missing)} cells have no preimage interval",
                                stage='selection')
    logger.info(f"Selection table at depth {depth}: {len(entries)} cells")
    return SelectionTable(depth, cover, K, entries)


def right_inverse_violations(table: SelectionTable) -> List[Cell2D]:
    """Cells z with f(psi-interval(z)) != z"""
    return [cell for cell in table.cells.cells
            if cell_of_interval(table.psi_interval(cell)) != cell]


def minimality_violations(table: SelectionTable) -> List[Cell2D]:
    """Cells for which some smaller-index interval maps onto them (exhaustive scan)"""
    depth = table.depth
    side = 3 ** depth
    cols, rows = cells_of_indices(depth, np.arange(9 ** depth))
    flat = cols * side + rows
    # np.unique reports first occurrences, i.e. the smallest j per cell
    uniques, first = np.unique(flat, return_index=True)
    smallest = dict(zip(uniques.tolist(), first.tolist()))
    return [cell for cell, j in table.entries.items()
            if smallest[cell.col * side + cell.row] < j]


def _threshold(r: Param) -> Fraction:
    exact = to_fraction(r)
    if not 0 <= exact <= 1:
        raise ValidationError(f"threshold {r} outside [0, 1]", stage='selection')
    return exact


def sublevel(table: SelectionTable, r: Param) -> GridSet2D:
    """{z : psi(z) <= r}"""
    exact = _threshold(r)
    return GridSet2D(table.depth, frozenset(
        cell for cell in table.entries if table.psi(cell) <= exact))


def sublevel_via_preimage(table: SelectionTable, r: Param) -> GridSet2D:
    """Image of the intervals of K starting at or before r, kept only where minimal"""
    last = math.floor(_threshold(r) * table.denominator)
    cells = set()
    for j in table.K.indices().tolist():
        if j > last:
            break
        cell = cell_of_interval(ParamInterval(table.depth, j))
        if table.entries.get(cell) == j:
            cells.add(cell)
    return GridSet2D(table.depth, frozenset(cells))


def refinement_violations(coarse: SelectionTable, fine: SelectionTable,
                          points: Iterable[complex], frame: AffineFrame) -> List[complex]:
    """Points where psi at the finer depth is smaller than at the coarser depth"""
    bad = []
    for z in points:
        before = coarse.psi(locate(z, frame, coarse.depth))
        after = fine.psi(locate(z, frame, fine.depth))
        if after < before:
            bad.append(z)
    return bad


def refine_selection(table: SelectionTable, points: Iterable[complex],
                     frame: AffineFrame) -> SelectionTable:
    """Selection table one level deeper; psi never decreases at any point"""
    points = list(points)
    fine = build_selection(rasterize(points, frame, table.depth + 1))
    bad = refinement_violations(table, fine, points, frame)
    if bad:
        raise PreconditionError(f"psi decreased under refinement at {bad}", stage='selection')
    return fine


def _closed_indices(x: Fraction, side: int) -> List[int]:
    scaled = x * side
    base = math.floor(scaled)
    candidates = [base - 1, base] if scaled == base else [base]
    return [i for i in candidates if 0 <= i < side]


def point_fiber(point: Tuple[Param, Param], depth: int) -> List[int]:
    """Indices of all depth-d intervals whose closed image cell contains the point"""
    x, y = (to_fraction(v) for v in point)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValidationError(f"point {point} outside the unit square", stage='selection')
    side = 3 ** depth
    return sorted(cell_index_of(Cell2D(depth, c, r)).index
                  for c in _closed_indices(x, side) for r in _closed_indices(y, side))


def psi_of_point(point: Tuple[Param, Param], depth: int) -> Fraction:
    """Infimum of the fiber over a point of the unit square"""
    return Fraction(point_fiber(point, depth)[0], 9 ** depth)
