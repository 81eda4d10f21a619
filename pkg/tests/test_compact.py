import numpy as np
import pytest

from compact import (IDENTITY_FRAME, AffineFrame, GridSet1D, GridSet2D, hausdorff, locate,
                     normalize_spectrum, rasterize)
from curve import Cell2D, ParamInterval
from errors import ValidationError


def test_frame_maps_bounding_square_inside_margin():
    frame, cover = normalize_spectrum([0, 1], 1)
    assert frame.scale == pytest.approx(1 / 0.9)
    assert complex(frame.embed(0)) == pytest.approx(0.05 + 0.5j)
    assert complex(frame.embed(1)) == pytest.approx(0.95 + 0.5j)
    assert cover.cells == {Cell2D(1, 0, 1), Cell2D(1, 2, 1)}


def test_single_eigenvalue_gets_unit_scale():
    frame, cover = normalize_spectrum([3 - 2j], 2)
    assert frame.scale == 1.0
    assert cover.cells == {Cell2D(2, 4, 4)}


def test_empty_spectrum_is_rejected():
    with pytest.raises(ValidationError, match='non-empty'):
        normalize_spectrum([], 2)


def test_embed_and_restore_are_inverse(rng):
    frame = AffineFrame(1 - 1j, 3.5)
    z = rng.normal(size=10) + 1j * rng.normal(size=10)
    assert np.allclose(frame.restore(frame.embed(z)), z)


def test_every_eigenvalue_lands_in_its_cover(rng):
    eigs = rng.normal(size=16) + 1j * rng.normal(size=16)
    frame, cover = normalize_spectrum(eigs, 3)
    assert all(locate(z, frame, 3) in cover for z in eigs)
    assert len(cover) <= 16


def test_locate_rejects_points_off_the_square():
    with pytest.raises(ValidationError):
        locate(2 + 0.5j, IDENTITY_FRAME, 2)


def test_right_edge_is_clamped_to_last_cell():
    assert locate(1 + 1j, IDENTITY_FRAME, 2) == Cell2D(2, 8, 8)


def test_coarsen_and_union():
    fine = rasterize([0.1 + 0.1j, 0.9 + 0.9j], IDENTITY_FRAME, 2)
    coarse = fine.coarsen(1)
    assert coarse.cells == {Cell2D(1, 0, 0), Cell2D(1, 2, 2)}
    union = coarse | GridSet2D(1, frozenset({Cell2D(1, 1, 1)}))
    assert len(union) == 3
    with pytest.raises(ValidationError):
        fine.coarsen(3)


def test_interval_set_coarsen():
    intervals = GridSet1D(2, frozenset({ParamInterval(2, 10), ParamInterval(2, 17), ParamInterval(2, 80)}))
    assert intervals.coarsen(1).indices().tolist() == [1, 8]


def test_grid_json_round_trip():
    cover = rasterize([0.2 + 0.3j, 0.7 + 0.1j], IDENTITY_FRAME, 3)
    assert GridSet2D.from_dict(cover.to_dict()) == cover


def test_mixed_depth_is_rejected():
    with pytest.raises(ValidationError):
        GridSet2D(1, frozenset({Cell2D(1, 0, 0), Cell2D(2, 0, 0)}))


def test_hausdorff_distance():
    a = GridSet2D(1, frozenset({Cell2D(1, 0, 0)}))
    b = GridSet2D(1, frozenset({Cell2D(1, 0, 0), Cell2D(1, 2, 0)}))
    assert hausdorff(a, a) == 0
    assert hausdorff(a, b) == pytest.approx(2 / 3)


def test_hausdorff_between_opposite_corners():
    a = GridSet2D(1, frozenset({Cell2D(1, 0, 0)}))
    b = GridSet2D(1, frozenset({Cell2D(1, 2, 2)}))
    assert hausdorff(a, b) == pytest.approx(2 / 3 * np.sqrt(2))


def test_rasterize_distributes_over_union(rng):
    s = rng.random(30) + 1j * rng.random(30)
    t = rng.random(30) + 1j * rng.random(30)
    for depth in (1, 3, 5):
        joint = rasterize(np.concatenate((s, t)), IDENTITY_FRAME, depth)
        assert joint.cells == (rasterize(s, IDENTITY_FRAME, depth) | rasterize(t, IDENTITY_FRAME, depth)).cells
