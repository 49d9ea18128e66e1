import json
import math

import numpy as np
import pytest

from needlecolor._rng import make_stream
from needlecolor.colorings import (
    ConstantColoring,
    GridColoring,
    Hex3Coloring,
    PolygonalColoring,
    StripeColoring,
    make_random_grid,
    parse_coloring,
    verify_periodicity,
)
from needlecolor.exceptions import (
    InvalidArgumentError,
    InvalidConstructionError,
)
from needlecolor.geometry import PeriodLattice
from needlecolor.io import coloring_from_dict, load_coloring, save_coloring

from conftest import SQRT3_2

STRIPE = StripeColoring(SQRT3_2)


def stripe_as_polygons(width):
    lat = PeriodLattice((1, 0), (0, 2 * width))
    tiles = (
        ([(0, 0), (1, 0), (1, width), (0, width)], 0),
        ([(0, width), (1, width), (1, 2 * width), (0, 2 * width)], 1),
    )
    return PolygonalColoring(lat, tiles, 2)


def test_stripe_examples():
    assert STRIPE.color_at((0, 0)) == 0
    assert STRIPE.color_at((5, SQRT3_2)) == 1
    assert STRIPE.color_at((0, -0.1)) == 1


def test_predict_validates_shape():
    assert STRIPE.predict([[0, 0], [5, SQRT3_2]]).tolist() == [0, 1]
    with pytest.raises(ValueError):
        STRIPE.predict([[0, 0, 0]])
    with pytest.raises(ValueError):
        STRIPE.predict([[0, np.nan]])


def test_color_at_is_pure():
    pts = make_stream(5).uniform(-20, 20, (1000, 2))
    h = Hex3Coloring(0.61)
    assert np.array_equal(h.predict(pts), h.predict(pts))


def test_hex3_adjacent_centers_differ():
    h = Hex3Coloring(0.61)
    cx, cy = h.center(2, -1)
    for dq, dr in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
        nx, ny = h.center(2 + dq, -1 + dr)
        assert h.color_at((cx, cy)) != h.color_at((nx, ny))


def test_hex3_proper_face_coloring():
    h = Hex3Coloring(0.61)
    pts = make_stream(6).uniform(-30, 30, (10_000, 2))
    q, r = h.hex_index(pts[:, 0], pts[:, 1])
    center = h.colors(*h.center(q, r))
    for dq, dr in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
        assert np.all(h.colors(*h.center(q + dq, r + dr)) != center)


def test_hex3_point_goes_to_nearest_center():
    h = Hex3Coloring(0.7)
    pts = make_stream(7).uniform(-10, 10, (5000, 2))
    q, r = h.hex_index(pts[:, 0], pts[:, 1])
    cx, cy = h.center(q, r)
    d = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    # brute force over a neighbourhood of axial offsets
    best = np.full(len(pts), np.inf)
    for dq in range(-2, 3):
        for dr in range(-2, 3):
            ox, oy = h.center(q + dq, r + dr)
            best = np.minimum(best, np.hypot(pts[:, 0] - ox, pts[:, 1] - oy))
    assert np.allclose(d, best, atol=1e-12)
    assert np.all(d <= 0.7 + 1e-12)


def test_random_grid_deterministic():
    a = make_random_grid(8, 16, 2, make_stream(7))
    b = make_random_grid(8, 16, 2, make_stream(7))
    assert np.array_equal(a.cells, b.cells)
    assert a.cell_side == 0.5


def test_random_grid_rejects_large_cells():
    with pytest.raises(InvalidConstructionError, match="1/sqrt"):
        make_random_grid(8, 4, 2, make_stream(7))
    with pytest.raises(InvalidConstructionError, match="exceed 2"):
        make_random_grid(2, 16, 2, make_stream(7))


def test_random_grid_color_frequencies():
    g = make_random_grid(8, 16, 3, make_stream(8))
    freq = np.bincount(g.cells.ravel(), minlength=3) / g.cells.size
    se = math.sqrt((1 / 3) * (2 / 3) / g.cells.size)
    assert np.all(np.abs(freq - 1 / 3) <= 5 * se)


SHIPPED = [
    STRIPE,
    StripeColoring(0.5),
    Hex3Coloring(0.61),
    Hex3Coloring(0.37),
    make_random_grid(8, 16, 3, make_stream(9)),
    ConstantColoring(),
    stripe_as_polygons(0.8),
]


@pytest.mark.parametrize("c", SHIPPED, ids=lambda c: type(c).__name__)
def test_periodicity(c):
    report = verify_periodicity(c, 100_000, make_stream(10))
    assert report.ok, report.violations


def test_stripe_lattice_declared():
    assert STRIPE.lattice.v == pytest.approx((0, math.sqrt(3)))


def test_grid_lattice():
    g = make_random_grid(8, 16, 2, make_stream(1))
    assert g.lattice.u == (8.0, 0.0) and g.lattice.v == (0.0, 8.0)


def test_stripe_has_no_monochromatic_unit_triangle():
    rng = make_stream(11)
    n = 100_000
    cx, cy = rng.uniform(-10, 10, n), rng.uniform(-10, 10, n)
    rot = rng.uniform(0, 2 * math.pi, n)
    r = 1 / math.sqrt(3)
    cols = [STRIPE.colors(cx + r * np.cos(rot + a), cy + r * np.sin(rot + a))
            for a in (0, 2 * math.pi / 3, 4 * math.pi / 3)]
    mono = (cols[0] == cols[1]) & (cols[1] == cols[2])
    assert not mono.any()


def test_polygonal_matches_stripe():
    poly = stripe_as_polygons(SQRT3_2)
    pts = make_stream(12).uniform(-5, 5, (20_000, 2))
    assert np.array_equal(poly.predict(pts), STRIPE.predict(pts))


def test_polygonal_sliver_goes_to_nearest_tile():
    lat = PeriodLattice((1, 0), (0, 1))
    eps = 1e-8
    tiles = (
        ([(0, 0), (0.5 - eps, 0), (0.5 - eps, 1), (0, 1)], 0),
        ([(0.5 + eps, 0), (1, 0), (1, 1), (0.5 + eps, 1)], 1),
    )
    c = PolygonalColoring(lat, tiles, 2)
    assert c.color_at((0.5 - eps / 2, 0.5)) == 0
    assert c.color_at((0.5 + eps / 2, 0.5)) == 1


def test_polygonal_rejects_overlap_and_gaps():
    lat = PeriodLattice((1, 0), (0, 1))
    with pytest.raises(InvalidConstructionError):
        PolygonalColoring(lat, (([(0, 0), (0.6, 0), (0.6, 1), (0, 1)], 0),
                                ([(0.4, 0), (1, 0), (1, 1), (0.4, 1)], 1)), 2)
    with pytest.raises(InvalidConstructionError):
        PolygonalColoring(lat, (([(0, 0), (0.5, 0), (0.5, 1), (0, 1)], 0),), 2)
    with pytest.raises(InvalidArgumentError):
        PolygonalColoring(lat, (([(0, 0), (1, 0), (1, 1), (0, 1)], 2),), 2)


def test_json_round_trip(tmp_path):
    grid = make_random_grid(8, 16, 3, make_stream(13))
    poly = stripe_as_polygons(0.8)
    pts = make_stream(14).uniform(-20, 20, (5000, 2))
    for c in (grid, poly):
        path = tmp_path / "c.json"
        save_coloring(c, path)
        doc = json.loads(path.read_text())
        assert set(doc) >= {"lattice", "k"}
        back = load_coloring(path)
        assert np.array_equal(back.predict(pts), c.predict(pts))


def test_json_without_type_is_inferred():
    c = coloring_from_dict({"lattice": {"u": [2, 0], "v": [0, 2]}, "k": 2,
                            "cells": [[0, 1], [1, 0]]})
    assert isinstance(c, GridColoring)
    assert c.color_at((1.5, 0.2)) == 1 and c.color_at((1.5, 1.2)) == 0


def test_parse_coloring():
    assert parse_coloring("stripe:0.8660254").width == 0.8660254
    assert parse_coloring("hex3:0.61").edge == 0.61
    g = parse_coloring("grid:8:16:2:7")
    assert np.array_equal(g.cells, make_random_grid(8, 16, 2, make_stream(7)).cells)
    with pytest.raises(InvalidArgumentError, match="stripe:<width>"):
        parse_coloring("spiral:1")
