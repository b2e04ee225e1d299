"""Arc triangles, reflections and tessellation closure."""

import math

import numpy as np
import pytest

from schwarz_atlas import triangle as tri
from schwarz_atlas.triangle import Geometry, GeneralizedCircle, reflect_point


def test_classify_exact():
    assert tri.classify(2, 3, 5) is Geometry.SPHERICAL
    assert tri.classify(2, 3, 6) is Geometry.EUCLIDEAN
    assert tri.classify(2, 3, 7) is Geometry.HYPERBOLIC
    # exact rational comparison on a case floats would get wrong:
    # 1/3 + 1/3 + 1/3 = 1 exactly
    assert tri.classify(3, 3, 3) is Geometry.EUCLIDEAN
    with pytest.raises(ValueError):
        tri.classify(1, 3, 7)
    with pytest.raises(ValueError):
        tri.classify(2, 3, 0)


def test_build_hyperbolic_triangle():
    t = tri.build_triangle(2, 3, 7)
    measured = t.measured_angles()
    for got, want in zip(measured, (math.pi / 2, math.pi / 3, math.pi / 7)):
        assert abs(got - want) < 1e-10
    assert t.incidence_residual() < 1e-10
    # geodesic sides: |center|^2 = 1 + r^2 or diameters through the origin
    for s in t.sides:
        assert s.unit_circle_orthogonality_residual() < 1e-10


def test_build_euclidean_triangle():
    t = tri.build_triangle(2, 4, 4)
    assert t.max_angle_residual() < 1e-10
    assert all(s.is_line for s in t.sides)


def test_build_spherical_octant():
    t = tri.build_triangle(2, 2, 2)
    assert t.vertices[0] == 0
    assert abs(t.vertices[1] - 1) < 1e-14
    assert abs(t.vertices[2] - 1j) < 1e-14
    assert t.max_angle_residual() < 1e-12


def test_reflect_point_cases():
    unit = GeneralizedCircle.from_center_radius(0.0, 1.0)
    assert abs(reflect_point(2.0 + 0j, unit) - 0.5) < 1e-15
    rng = np.random.default_rng(0)
    line = GeneralizedCircle.from_line(1j * np.exp(0.3j), 0.25)
    for _ in range(50):
        p = complex(rng.normal(), rng.normal())
        for circ in (unit, line):
            assert abs(reflect_point(reflect_point(p, circ), circ) - p) < 1e-13
    # points on the circle are fixed
    on = np.exp(0.77j)
    assert abs(reflect_point(on, unit) - on) < 1e-15


def test_reflect_circle_involution():
    mirror = GeneralizedCircle.from_center_radius(0.3 + 0.2j, 0.8)
    target = GeneralizedCircle.from_center_radius(-0.4 + 0.9j, 0.5)
    once = tri.reflect_circle(target, mirror)
    twice = tri.reflect_circle(once, mirror)
    assert abs(twice.center - target.center) < 1e-10
    assert abs(twice.radius - target.radius) < 1e-10


@pytest.mark.parametrize("klm,count", [
    ((2, 3, 3), 24), ((2, 3, 4), 48), ((2, 3, 5), 120),
    ((2, 2, 2), 8), ((2, 2, 6), 24),
])
def test_spherical_closure_counts(klm, count):
    tess = tri.tessellate(*klm)
    assert tess.closure_reached
    assert tess.tile_count == count
    assert tess.max_angle_residual() < 1e-8


def test_hyperbolic_tiles_stay_in_disc():
    tess = tri.tessellate(2, 3, 7, max_word_length=6)
    assert not tess.closure_reached
    for t in tess.tiles:
        for v in t.vertices:
            assert abs(v) < 1.0
    assert tess.max_angle_residual() < 1e-8


def test_orthogonal_circle_residuals():
    for klm in [(2, 3, 7), (3, 3, 4)]:
        tess = tri.tessellate(*klm, max_word_length=5)
        circle, residual = tri.orthogonal_circle(tess)
        assert abs(circle.radius - 1.0) < 1e-15
        assert residual < 1e-9
    with pytest.raises(ValueError):
        tri.orthogonal_circle(tri.tessellate(2, 3, 3))


def test_tile_interiors_disjoint():
    tess = tri.tessellate(2, 3, 7, max_word_length=6)
    centers = [t.interior_point for t in tess.tiles]
    for i, t in enumerate(tess.tiles):
        for j, c in enumerate(centers):
            if i == j:
                continue
            assert not t.contains(c, margin=1e-9), (i, j)


def test_word_ordering():
    tess = tri.tessellate(2, 3, 7, max_word_length=3)
    words = tess.words
    assert words[0] == ""
    assert words == sorted(words, key=lambda w: (len(w), w))


def test_angles_preserved_along_words():
    tess = tri.tessellate(2, 3, 7, max_word_length=5)
    want = {math.pi / 2, math.pi / 3, math.pi / 7}
    for t in tess.tiles:
        for a in t.measured_angles():
            assert min(abs(a - w) for w in want) < 1e-8


def test_svg_deterministic_and_structured(tmp_path):
    tess = tri.tessellate(2, 3, 7, max_word_length=6)
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    data1 = tri.export_svg(tess, p1)
    data2 = tri.export_svg(tess, p2)
    assert data1 == data2
    assert p1.read_bytes() == p2.read_bytes()
    assert data1.count("<path") == tess.tile_count
    assert "<circle" in data1  # the bounding circle of the disc model


def test_svg_rejects_empty(tmp_path):
    tess = tri.Tessellation(tiles=[], words=[], geometry=Geometry.HYPERBOLIC,
                            depth=0, closure_reached=False, base=None)
    with pytest.raises(ValueError):
        tri.export_svg(tess, tmp_path / "x.svg")


def test_spherical_svg_renders_all_tiles(tmp_path):
    tess = tri.tessellate(2, 3, 3)
    data = tri.export_svg(tess, tmp_path / "s.svg")
    assert data.count("<path") == tess.tile_count


def test_ideal_triangle():
    t = tri.triangle_from_angles(0.0, 0.0, 0.0)
    for v in t.vertices:
        assert abs(abs(v) - 1.0) < 1e-14
    for s in t.sides:
        assert s.unit_circle_orthogonality_residual() < 1e-12
