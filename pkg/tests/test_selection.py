from fractions import Fraction

import numpy as np
import pytest

from compact import IDENTITY_FRAME, GridSet2D, locate, normalize_spectrum, rasterize
from curve import Cell2D, ParamInterval, cell_of_interval
from errors import ValidationError
from selection import (SelectionTable, build_selection, minimality_violations, point_fiber,
                       preimage, psi_of_point, refine_selection, refinement_violations,
                       right_inverse_violations, sublevel, sublevel_via_preimage)


def full_square(depth: int) -> GridSet2D:
    side = 3 ** depth
    return GridSet2D(depth, frozenset(Cell2D(depth, c, r) for c in range(side) for r in range(side)))


@pytest.fixture
def random_spectra(rng):
    """20 random spectra of up to 16 points"""
    return [rng.normal(size=n) + 1j * rng.normal(size=n) for n in rng.integers(1, 17, size=20)]


def test_single_cell_selection():
    table = build_selection(GridSet2D(1, frozenset({Cell2D(1, 1, 1)})))
    assert table.psi(Cell2D(1, 1, 1)) == Fraction(4, 9)
    assert table.K.indices().tolist() == [4]


def test_full_square_selects_each_interval_once():
    table = build_selection(full_square(2))
    assert len(table.K) == 81
    assert sorted(table.entries.values()) == list(range(81))
    assert right_inverse_violations(table) == []
    assert minimality_violations(table) == []


def test_preimage_of_empty_cover_is_rejected():
    with pytest.raises(ValidationError):
        preimage(GridSet2D(2, frozenset()))


def test_unknown_cell_points_at_depth():
    table = build_selection(GridSet2D(1, frozenset({Cell2D(1, 0, 0)})))
    with pytest.raises(ValidationError) as e:
        table.psi(Cell2D(1, 2, 2))
    assert 'increase --depth' in str(e.value)


def test_right_inverse_on_random_spectra(random_spectra):
    depth = 4
    for eigs in random_spectra:
        frame, cover = normalize_spectrum(eigs, depth)
        table = build_selection(cover)
        assert right_inverse_violations(table) == []
        for z in eigs:
            cell = locate(z, frame, depth)
            assert cell_of_interval(table.psi_interval(cell)) == cell


@pytest.mark.parametrize('depth', [2, 3, 4, 5])
def test_psi_never_decreases_under_refinement(random_spectra, depth):
    for eigs in random_spectra:
        frame, cover = normalize_spectrum(eigs, depth)
        coarse = build_selection(cover)
        fine = build_selection(rasterize(eigs, frame, depth + 1))
        assert refinement_violations(coarse, fine, eigs, frame) == []


def test_refine_selection_goes_one_level_deeper(rng):
    eigs = rng.normal(size=6) + 1j * rng.normal(size=6)
    frame, cover = normalize_spectrum(eigs, 3)
    fine = refine_selection(build_selection(cover), eigs, frame)
    assert fine.depth == 4


def test_sublevels_are_nested(rng):
    eigs = rng.normal(size=16) + 1j * rng.normal(size=16)
    _, cover = normalize_spectrum(eigs, 3)
    table = build_selection(cover)
    thresholds = np.sort(rng.random(50))
    previous = frozenset()
    for r in thresholds:
        current = sublevel(table, float(r)).cells
        assert previous <= current
        assert current == sublevel_via_preimage(table, float(r)).cells
        previous = current
    assert sublevel(table, 1).cells == cover.cells
    assert sublevel(table, 0).cells <= cover.cells


def test_sublevel_threshold_outside_unit_interval():
    table = build_selection(full_square(1))
    with pytest.raises(ValidationError):
        sublevel(table, 1.5)


def test_fiber_over_a_grid_vertex():
    assert point_fiber((Fraction(1, 3), Fraction(1, 3)), 1) == [0, 1, 4, 5]
    assert psi_of_point((Fraction(1, 3), Fraction(1, 3)), 1) == 0


def test_fiber_over_an_interior_point():
    assert point_fiber((0.5, 0.5), 1) == [4]
    assert psi_of_point(('1/2', '1/2'), 2) == Fraction(40, 81)


def test_fiber_outside_square():
    with pytest.raises(ValidationError):
        point_fiber((1.2, 0.5), 1)


def test_table_json_round_trip():
    table = build_selection(rasterize([0.1 + 0.2j, 0.8 + 0.8j], IDENTITY_FRAME, 3))
    restored = SelectionTable.from_dict(table.to_dict())
    assert restored.entries == table.entries
    assert restored.K == table.K


def test_table_json_with_wrong_denominator():
    data = build_selection(full_square(1)).to_dict()
    data['entries'][0]['t_den'] = 10
    with pytest.raises(ValidationError):
        SelectionTable.from_dict(data)


def test_preimage_of_a_circle_matches_exhaustive_scan():
    depth = 4
    circle = np.exp(2j * np.pi * np.arange(100) / 100)
    _, cover = normalize_spectrum(circle, depth)
    K = preimage(cover)
    for j in range(9 ** depth):
        interval = ParamInterval(depth, j)
        assert (interval in K) == (cell_of_interval(interval) in cover)
    image = {cell_of_interval(ParamInterval(depth, j)) for j in K.indices().tolist()}
    assert image == cover.cells
