"""Reflection triangles and their tessellations: circular-arc triangles in the
plane models of spherical / Euclidean / hyperbolic geometry, breadth-first
closure under side reflections, orthogonality checks against the unit circle,
and deterministic SVG export.

A generalized circle is stored by the real coefficients of
A|z|^2 + 2 Re(conj(B) z) + C = 0  (A, C real, B complex); A ~ 0 is a line.
Spherical tessellations run on the unit sphere internally (reflections in
great-circle planes) and are projected stereographically at the end; tiles
reaching too close to the projection pole are reported in a secondary chart.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

__all__ = [
    "Geometry",
    "GeneralizedCircle",
    "ArcTriangle",
    "Tessellation",
    "classify",
    "classify_angles",
    "build_triangle",
    "triangle_from_angles",
    "reflect_point",
    "reflect_circle",
    "tessellate",
    "orthogonal_circle",
    "export_svg",
]

_LINE_EPS = 1e-12


class Geometry(Enum):
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


def classify(k, l, m):
    """Classify the (k, l, m) triangle by its exact angle sum 1/k + 1/l + 1/m."""
    for v in (k, l, m):
        if not isinstance(v, int) or v < 2:
            raise ValueError(f"triangle orders must be integers >= 2, got {(k, l, m)}")
    return classify_angles(Fraction(1, k), Fraction(1, l), Fraction(1, m))


def classify_angles(kappa, lam, mu):
    """Same classification for angles (kappa, lam, mu) given as fractions of pi."""
    total = Fraction(kappa) + Fraction(lam) + Fraction(mu)
    if total > 1:
        return Geometry.SPHERICAL
    if total == 1:
        return Geometry.EUCLIDEAN
    return Geometry.HYPERBOLIC


# ---------------------------------------------------------------------------
# generalized circles

@dataclass(frozen=True)
class GeneralizedCircle:
    a: float
    b: complex
    c: float

    @classmethod
    def from_center_radius(cls, center, radius):
        if radius <= 0:
            raise ValueError(f"radius must be positive, got {radius}")
        center = complex(center)
        return cls(1.0, -center, abs(center) ** 2 - radius**2)

    @classmethod
    def from_line(cls, normal, offset):
        """Line {z : Re(conj(u) z) = offset} with u the unit normal."""
        normal = complex(normal)
        mod = abs(normal)
        if mod == 0:
            raise ValueError("line normal must be nonzero")
        return cls(0.0, normal / mod, -2.0 * float(offset))

    @classmethod
    def through(cls, z1, z2, z3):
        """Circle or line through three points (exact determinant construction)."""
        x1, y1 = z1.real, z1.imag
        x2, y2 = z2.real, z2.imag
        x3, y3 = z3.real, z3.imag
        s1, s2, s3 = abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2
        a = x1 * (y2 - y3) - y1 * (x2 - x3) + (x2 * y3 - x3 * y2)
        d = -(s1 * (y2 - y3) - y1 * (s2 - s3) + (s2 * y3 - s3 * y2))
        e = s1 * (x2 - x3) - x1 * (s2 - s3) + (s2 * x3 - s3 * x2)
        f = -(s1 * (x2 * y3 - x3 * y2) - x1 * (s2 * y3 - s3 * y2) + y1 * (s2 * x3 - s3 * x2))
        scale = max(abs(a), abs(d) / 2, abs(e) / 2, abs(f), 1e-300)
        return cls(a / scale, complex(d, e) / (2 * scale), f / scale)

    @property
    def is_line(self):
        return abs(self.a) <= _LINE_EPS * max(abs(self.b), abs(self.c), 1.0)

    @property
    def center(self):
        if self.is_line:
            raise ValueError("a line has no center")
        return -self.b / self.a

    @property
    def radius(self):
        if self.is_line:
            raise ValueError("a line has no radius")
        r2 = (abs(self.b) ** 2 - self.a * self.c) / self.a**2
        if r2 <= 0:
            raise ValueError("degenerate circle (non-positive squared radius)")
        return math.sqrt(r2)

    @property
    def line_normal(self):
        return self.b / abs(self.b)

    @property
    def line_offset(self):
        return -self.c / (2 * abs(self.b))

    def eval(self, z):
        """Sign of this is the side of the circle z lies on; zero on the circle."""
        return self.a * abs(z) ** 2 + 2 * (self.b.conjugate() * z).real + self.c

    def unit_circle_orthogonality_residual(self):
        """|c|^2 = 1 + r^2 for circles; distance from the origin for lines."""
        if self.is_line:
            return abs(self.line_offset)
        return abs(abs(self.center) ** 2 - self.radius**2 - 1.0)


def reflect_point(p, circ):
    """Inversion in a circle / mirror reflection in a line; an involution."""
    if circ.is_line:
        u, d = circ.line_normal, circ.line_offset
        return p - 2 * ((u.conjugate() * p).real - d) * u
    c = circ.center
    w = p - c
    if w == 0:
        raise ValueError("cannot invert the center of the circle")
    return c + circ.radius**2 / w.conjugate()


def _spread_points(circ):
    if circ.is_line:
        u, d = circ.line_normal, circ.line_offset
        base = d * u
        t = 1j * u
        return (base - t, base, base + t)
    c, r = circ.center, circ.radius
    return tuple(c + r * cmath.exp(1j * th) for th in (0.5, 2.6, 4.7))


def reflect_circle(circ, mirror):
    """Image of a generalized circle under reflection in another one.

    Uses three sample points and an exact three-point reconstruction, which
    covers every circle/line case uniformly; sample points are displaced when
    one coincides with the inversion center.
    """
    pts = list(_spread_points(circ))
    if not mirror.is_line:
        c0 = mirror.center
        for i, p in enumerate(pts):
            if abs(p - c0) < 1e-13:
                if circ.is_line:
                    pts[i] = p + 0.37j * circ.line_normal * 0.5
                else:
                    pts[i] = circ.center + circ.radius * cmath.exp(1j * (0.5 + 0.9 * (i + 1)))
    images = [reflect_point(p, mirror) for p in pts]
    return GeneralizedCircle.through(*images)


def circle_intersections(c1, c2):
    """Intersection points of two generalized circles (list of 0, 1 or 2 points)."""
    if c1.is_line and c2.is_line:
        u1, d1 = c1.line_normal, c1.line_offset
        u2, d2 = c2.line_normal, c2.line_offset
        det = u1.real * u2.imag - u1.imag * u2.real
        if abs(det) < 1e-14:
            return []
        x = (d1 * u2.imag - d2 * u1.imag) / det
        y = (u1.real * d2 - u2.real * d1) / det
        return [complex(x, y)]
    if c1.is_line:
        c1, c2 = c2, c1
    if c2.is_line:
        u, d = c2.line_normal, c2.line_offset
        c, r = c1.center, c1.radius
        s = (u.conjugate() * c).real - d
        h2 = r * r - s * s
        if h2 < 0:
            return []
        foot = c - s * u
        t = math.sqrt(h2) * 1j * u
        return [foot + t, foot - t] if h2 > 0 else [foot]
    ca, ra = c1.center, c1.radius
    cb, rb = c2.center, c2.radius
    d = abs(cb - ca)
    if d < 1e-15:
        return []
    along = (d * d + ra * ra - rb * rb) / (2 * d)
    h2 = ra * ra - along * along
    u = (cb - ca) / d
    if h2 < 0:
        return []
    foot = ca + along * u
    if h2 == 0:
        return [foot]
    t = math.sqrt(h2) * 1j * u
    return [foot + t, foot - t]


def tangent_direction(circ, p, towards):
    """Unit tangent of the circle at p, oriented so it points toward `towards`."""
    if circ.is_line:
        tau = 1j * circ.line_normal
    else:
        nu = p - circ.center
        tau = 1j * nu / abs(nu)
    if (tau.conjugate() * (towards - p)).real < 0:
        tau = -tau
    return tau


def angle_between_sides(s1, m1, s2, m2, vertex):
    """Interior angle between two sides meeting at `vertex`.

    m1, m2 are points on the respective arcs used to orient the tangents away
    from the vertex; tangent circles (cusps) give angle 0.
    """
    t1 = tangent_direction(s1, vertex, m1)
    t2 = tangent_direction(s2, vertex, m2)
    return abs(cmath.phase(t1.conjugate() * t2))


# ---------------------------------------------------------------------------
# triangles

@dataclass(frozen=True)
class ArcTriangle:
    vertices: tuple            # (v0, v1, v2) complex
    sides: tuple               # (s0, s1, s2); side i joins the two vertices != i
    angles: tuple              # target interior angles at v0, v1, v2 (radians)
    side_midpoints: tuple      # a point on each arc, used for orientation and SVG
    interior_point: complex
    chart: str = "primary"     # spherical tiles far from the origin use "secondary"

    def measured_angles(self):
        out = []
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            out.append(
                angle_between_sides(
                    self.sides[j], self.side_midpoints[j],
                    self.sides[k], self.side_midpoints[k],
                    self.vertices[i],
                )
            )
        return tuple(out)

    def max_angle_residual(self):
        return max(
            min(abs(a - b) for b in self.angles) for a in self.measured_angles()
        )

    def incidence_residual(self):
        worst = 0.0
        for i in range(3):
            for j in range(3):
                if j == i:
                    continue
                worst = max(worst, abs(self.sides[j].eval(self.vertices[i])))
        return worst

    def contains(self, p, margin=0.0):
        for s in self.sides:
            ref = s.eval(self.interior_point)
            val = s.eval(p)
            if val * (1 if ref > 0 else -1) < margin:
                return False
        return True


def _geodesic_side(va, vb, geometry):
    """Side circle through two vertices: orthogonal to the unit circle in the
    hyperbolic model, antipodally symmetric in the spherical chart, straight in
    the Euclidean plane; diameters degenerate to lines through the origin."""
    if geometry is Geometry.EUCLIDEAN or abs(va * vb.conjugate() - vb * va.conjugate()) < 1e-14:
        chord = vb - va
        u = 1j * chord / abs(chord)
        return GeneralizedCircle.from_line(u, (u.conjugate() * va).real)
    sign = 1.0 if geometry is Geometry.HYPERBOLIC else -1.0
    # solve 2 Re(conj(c) v) = |v|^2 + sign for c
    a11, a12, r1 = 2 * va.real, 2 * va.imag, abs(va) ** 2 + sign
    a21, a22, r2 = 2 * vb.real, 2 * vb.imag, abs(vb) ** 2 + sign
    det = a11 * a22 - a12 * a21
    if abs(det) < 1e-14:
        raise ValueError("degenerate side: vertices are radially aligned")
    cx = (r1 * a22 - r2 * a12) / det
    cy = (a11 * r2 - a21 * r1) / det
    c = complex(cx, cy)
    r2val = abs(c) ** 2 - sign
    return GeneralizedCircle.from_center_radius(c, math.sqrt(r2val))


def _arc_midpoint(side, va, vb):
    """Point of the arc between va and vb (the shorter arc), or the chord
    midpoint for a straight side."""
    if side.is_line:
        return (va + vb) / 2
    c, r = side.center, side.radius
    th1, th2 = cmath.phase(va - c), cmath.phase(vb - c)
    delta = (th2 - th1) % (2 * math.pi)
    if delta > math.pi:
        th1, delta = th2, 2 * math.pi - delta
    return c + r * cmath.exp(1j * (th1 + delta / 2))


def triangle_from_angles(a0, a1, a2, geometry=None):
    """Construct a circular-arc triangle with the given interior angles.

    The first vertex sits at 0 with its first side along the positive real
    axis.  Angles are radians; in the hyperbolic case a zero angle produces an
    ideal vertex on the unit circle.
    """
    if geometry is None:
        total = a0 + a1 + a2
        geometry = (
            Geometry.SPHERICAL if total > math.pi + 1e-12
            else Geometry.EUCLIDEAN if abs(total - math.pi) <= 1e-12
            else Geometry.HYPERBOLIC
        )
    if geometry is not Geometry.HYPERBOLIC and min(a0, a1, a2) <= 0:
        raise ValueError("zero angles are only meaningful in the hyperbolic case")

    if a0 == a1 == a2 == 0.0:
        return _ideal_triangle()

    # keep a nonzero angle at the origin vertex
    order = (0, 1, 2)
    if a0 == 0:
        order = (1, 2, 0) if a1 > 0 else (2, 0, 1)
    aa = [(a0, a1, a2)[i] for i in order]

    if geometry is Geometry.EUCLIDEAN:
        vb = complex(1.0, 0.0)
        vc = cmath.rect(math.sin(aa[1]) / math.sin(aa[2]), aa[0])
    elif geometry is Geometry.SPHERICAL:
        cos_c = (math.cos(aa[2]) + math.cos(aa[0]) * math.cos(aa[1])) / (
            math.sin(aa[0]) * math.sin(aa[1]))
        cos_b = (math.cos(aa[1]) + math.cos(aa[0]) * math.cos(aa[2])) / (
            math.sin(aa[0]) * math.sin(aa[2]))
        side_c, side_b = math.acos(cos_c), math.acos(cos_b)
        vb = complex(math.tan(side_c / 2), 0.0)
        vc = cmath.rect(math.tan(side_b / 2), aa[0])
    else:
        def _radial(cosh_val):
            if math.isinf(cosh_val):
                return 1.0
            d = math.acosh(cosh_val)
            return math.tanh(d / 2)

        def _cosh_side(x, y, z):
            sx, sy = math.sin(x), math.sin(y)
            if sx == 0.0 or sy == 0.0:
                return math.inf
            return (math.cos(x) * math.cos(y) + math.cos(z)) / (sx * sy)

        vb = complex(_radial(_cosh_side(aa[0], aa[1], aa[2])), 0.0)
        vc = cmath.rect(_radial(_cosh_side(aa[0], aa[2], aa[1])), aa[0])

    verts3 = [complex(0.0), vb, vc]
    sides3 = [
        _geodesic_side(vb, vc, geometry),
        _geodesic_side(complex(0.0), vc, geometry),
        _geodesic_side(complex(0.0), vb, geometry),
    ]
    mids3 = [_arc_midpoint(sides3[i], verts3[(i + 1) % 3], verts3[(i + 2) % 3]) for i in range(3)]

    # undo the ordering permutation
    inv = [order.index(i) for i in range(3)]
    verts = tuple(verts3[inv[i]] for i in range(3))
    sides = tuple(sides3[inv[i]] for i in range(3))
    mids = tuple(mids3[inv[i]] for i in range(3))
    angles = (a0, a1, a2)

    interior = _find_interior_point(verts, sides)
    return ArcTriangle(
        vertices=verts, sides=sides, angles=angles,
        side_midpoints=mids, interior_point=interior,
    )


def _ideal_triangle():
    """All three vertices on the unit circle (the cusp-cusp-cusp case)."""
    w = cmath.exp(2j * math.pi / 3)
    verts = (complex(1.0), w, w.conjugate())
    sides = tuple(
        _geodesic_side(verts[(i + 1) % 3], verts[(i + 2) % 3], Geometry.HYPERBOLIC)
        for i in range(3)
    )
    mids = tuple(_arc_midpoint(sides[i], verts[(i + 1) % 3], verts[(i + 2) % 3])
                 for i in range(3))
    return ArcTriangle(
        vertices=verts, sides=sides, angles=(0.0, 0.0, 0.0),
        side_midpoints=mids, interior_point=complex(0.0),
    )


def _find_interior_point(verts, sides):
    # interior side of side i is the side its opposite vertex lies on
    refs = [sides[i].eval(verts[i]) for i in range(3)]
    candidates = [
        (verts[0] + verts[1] + verts[2]) / 3,
        verts[0] + ((verts[1] - verts[0]) + (verts[2] - verts[0])) / 4,
        verts[1] + ((verts[0] - verts[1]) + (verts[2] - verts[1])) / 4,
        verts[2] + ((verts[0] - verts[2]) + (verts[1] - verts[2])) / 4,
        (verts[0] + verts[1] + verts[2]) / 3 * 0.5,
    ]
    for p in candidates:
        vals = [sides[i].eval(p) for i in range(3)]
        if all(v * r > 0 for v, r in zip(vals, refs)):
            return p
    raise ValueError("could not locate an interior point of the triangle")


def build_triangle(k, l, m):
    """Fundamental (k, l, m) triangle with interior angles pi/k, pi/l, pi/m."""
    geometry = classify(k, l, m)
    return triangle_from_angles(math.pi / k, math.pi / l, math.pi / m, geometry)


# ---------------------------------------------------------------------------
# tessellation

@dataclass
class Tessellation:
    tiles: list
    words: list
    geometry: Geometry
    depth: int
    closure_reached: bool
    base: ArcTriangle = field(repr=False)

    @property
    def tile_count(self):
        return len(self.tiles)

    def max_angle_residual(self):
        return max(t.max_angle_residual() for t in self.tiles)

    def max_orthogonality_residual(self):
        if self.geometry is not Geometry.HYPERBOLIC:
            raise ValueError("orthogonality residual is a hyperbolic-model quantity")
        return max(s.unit_circle_orthogonality_residual() for t in self.tiles for s in t.sides)

    def report(self):
        rep = {
            "geometry": self.geometry.value,
            "tile_count": self.tile_count,
            "depth": self.depth,
            "closure_reached": self.closure_reached,
            "max_angle_residual": self.max_angle_residual(),
        }
        if self.geometry is Geometry.HYPERBOLIC:
            rep["max_orthogonality_residual"] = self.max_orthogonality_residual()
        return rep


def _plane_tile_key(verts):
    return tuple(sorted((round(v.real, 8), round(v.imag, 8)) for v in verts))


def _reflect_plane_tile(tri, i):
    mirror = tri.sides[i]
    verts = tuple(reflect_point(v, mirror) for v in tri.vertices)
    sides = tuple(reflect_circle(s, mirror) for s in tri.sides)
    mids = tuple(reflect_point(p, mirror) for p in tri.side_midpoints)
    interior = reflect_point(tri.interior_point, mirror)
    return ArcTriangle(
        vertices=verts, sides=sides, angles=tri.angles,
        side_midpoints=mids, interior_point=interior,
    )


def tessellate(k, l, m, max_tiles=20000, max_word_length=None):
    """Breadth-first closure of the (k, l, m) triangle under side reflections.

    Reflections are enumerated in word order (length first, then a < b < c for
    the three sides), tiles are deduplicated by rounded vertex triples, and the
    sweep stops at closure or at the first exhausted budget.  Spherical input
    closes up with one tile per element of the full reflection group.
    """
    geometry = classify(k, l, m)
    if geometry is Geometry.SPHERICAL:
        return _tessellate_sphere(k, l, m, max_tiles, max_word_length)
    base = build_triangle(k, l, m)
    tiles, words = [base], [""]
    seen = {_plane_tile_key(base.vertices)}
    queue = [(base, "")]
    budget_hit = False
    while queue:
        nxt = []
        for tri, word in queue:
            for i, letter in enumerate("abc"):
                child = _reflect_plane_tile(tri, i)
                key = _plane_tile_key(child.vertices)
                if key in seen:
                    continue
                if (max_word_length is not None and len(word) + 1 > max_word_length) \
                        or len(tiles) >= max_tiles:
                    budget_hit = True
                    continue
                seen.add(key)
                tiles.append(child)
                words.append(word + letter)
                nxt.append((child, word + letter))
        queue = nxt
    depth = max(len(w) for w in words)
    return Tessellation(
        tiles=tiles, words=words, geometry=geometry, depth=depth,
        closure_reached=not budget_hit, base=base,
    )


# --- spherical case: work on the unit sphere, project afterwards -----------

def _lift(z):
    """Inverse stereographic projection (north pole at infinity)."""
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return np.array([0.0, 0.0, 1.0])
    s = abs(z) ** 2
    return np.array([2 * z.real, 2 * z.imag, s - 1.0]) / (1.0 + s)


def _project(v):
    if 1.0 - v[2] < 1e-12:
        return complex(math.inf, math.inf)
    return complex(v[0], v[1]) / (1.0 - v[2])


def _project_secondary(v):
    if 1.0 + v[2] < 1e-12:
        return complex(math.inf, math.inf)
    return complex(v[0], -v[1]) / (1.0 + v[2])


def _great_circle(normal, secondary=False):
    n1, n2, n3 = normal
    if secondary:
        n2, n3 = -n2, -n3
    scale = max(abs(n1), abs(n2), abs(n3))
    return GeneralizedCircle(n3 / scale, complex(n1, n2) / scale, -n3 / scale)


def _sphere_key(verts):
    return tuple(sorted(tuple(round(x, 8) for x in v) for v in verts))


def _tessellate_sphere(k, l, m, max_tiles, max_word_length):
    base = build_triangle(k, l, m)
    verts = [_lift(v) for v in base.vertices]
    normals = []
    for i in range(3):
        p, q = verts[(i + 1) % 3], verts[(i + 2) % 3]
        n = np.cross(p, q)
        norm = np.linalg.norm(n)
        if norm < 1e-12:
            raise ValueError("degenerate spherical side (antipodal vertices)")
        normals.append(n / norm)
    mids = []
    for i in range(3):
        p, q = verts[(i + 1) % 3], verts[(i + 2) % 3]
        msum = p + q
        mids.append(msum / np.linalg.norm(msum))
    center = sum(verts)
    center = center / np.linalg.norm(center)

    base_tile = (tuple(verts), tuple(normals), tuple(mids), center)
    tiles, words = [base_tile], [""]
    seen = {_sphere_key(base_tile[0])}
    queue = [(base_tile, "")]
    budget_hit = False

    def srefl(v, n):
        # renormalize: reflections in almost-unit normals otherwise compound
        # norm drift exponentially along long words
        w = v - 2.0 * float(v @ n) * n
        return w / np.linalg.norm(w)

    while queue:
        nxt = []
        for tile, word in queue:
            tverts, tnorms, tmids, tcenter = tile
            for i, letter in enumerate("abc"):
                n = tnorms[i]
                cverts = tuple(srefl(v, n) for v in tverts)
                key = _sphere_key(cverts)
                if key in seen:
                    continue
                if (max_word_length is not None and len(word) + 1 > max_word_length) \
                        or len(tiles) >= max_tiles:
                    budget_hit = True
                    continue
                child = (
                    cverts,
                    tuple(srefl(x, n) for x in tnorms),
                    tuple(srefl(x, n) for x in tmids),
                    srefl(tcenter, n),
                )
                seen.add(key)
                tiles.append(child)
                words.append(word + letter)
                nxt.append((child, word + letter))
        queue = nxt

    angles = (math.pi / k, math.pi / l, math.pi / m)
    arc_tiles = []
    for tverts, tnorms, tmids, tcenter in tiles:
        primary_ok = all(1.0 - v[2] > 0.06 for v in list(tverts) + list(tmids))
        if primary_ok:
            proj, chart = _project, "primary"
            secondary = False
        else:
            proj, chart = _project_secondary, "secondary"
            secondary = True
        pv = tuple(proj(v) for v in tverts)
        ps = tuple(_great_circle(n, secondary) for n in tnorms)
        pm = tuple(proj(v) for v in tmids)
        arc_tiles.append(ArcTriangle(
            vertices=pv, sides=ps, angles=angles,
            side_midpoints=pm, interior_point=proj(tcenter), chart=chart,
        ))
    depth = max(len(w) for w in words)
    return Tessellation(
        tiles=arc_tiles, words=words, geometry=Geometry.SPHERICAL, depth=depth,
        closure_reached=not budget_hit, base=arc_tiles[0],
    )


def orthogonal_circle(tess):
    """The unit circle of the disc model, with the worst orthogonality residual
    of any tile side against it."""
    if tess.geometry is not Geometry.HYPERBOLIC:
        raise ValueError("the orthogonal circle exists for hyperbolic tessellations only")
    residual = tess.max_orthogonality_residual()
    return GeneralizedCircle.from_center_radius(0.0, 1.0), residual


# ---------------------------------------------------------------------------
# SVG export

_FILL = ("#dce6f2", "#f2e3dc")
_STROKE = "#20242c"


def _fmt(x):
    return f"{x:.9f}"


def _arc_command(side, v_from, v_to, mid):
    if side.is_line or not all(map(math.isfinite, (v_to.real, v_to.imag))):
        return f"L {_fmt(v_to.real)} {_fmt(v_to.imag)}"
    c, r = side.center, side.radius
    th1 = cmath.phase(v_from - c)
    th2 = cmath.phase(v_to - c)
    thm = cmath.phase(mid - c)
    ccw_to_mid = (thm - th1) % (2 * math.pi)
    ccw_to_end = (th2 - th1) % (2 * math.pi)
    sweep_ccw = ccw_to_mid <= ccw_to_end
    delta = ccw_to_end if sweep_ccw else (2 * math.pi - ccw_to_end)
    large = 1 if delta > math.pi else 0
    sweep = 1 if sweep_ccw else 0
    return (
        f"A {_fmt(r)} {_fmt(r)} 0 {large} {sweep} "
        f"{_fmt(v_to.real)} {_fmt(v_to.imag)}"
    )


def _tile_path(tri):
    v = tri.vertices
    mids = tri.side_midpoints
    pieces = [f"M {_fmt(v[0].real)} {_fmt(v[0].imag)}"]
    # the side joining v[i] and v[i+1] is the one opposite the third vertex
    for i in range(3):
        j = (i + 1) % 3
        opp = (i + 2) % 3
        pieces.append(_arc_command(tri.sides[opp], v[i], v[j], mids[opp]))
    pieces.append("Z")
    return " ".join(pieces)


def _unproject(z, chart):
    """Chart coordinate back to the sphere; the secondary chart is z' = 1/z."""
    if chart == "secondary":
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return np.array([0.0, 0.0, -1.0])
        if z == 0:
            return np.array([0.0, 0.0, 1.0])
        z = 1.0 / z
    return _lift(z)


def _sampled_sphere_path(tri, clip=8.0, samples=48):
    # tiles flagged "secondary" or touching the projection pole are drawn by
    # sampling the sphere arcs in the primary chart and clipping
    pieces = []
    pen_down = False
    for i in range(3):
        j = (i + 1) % 3
        opp = (i + 2) % 3
        a = _unproject(tri.vertices[i], tri.chart)
        b = _unproject(tri.vertices[j], tri.chart)
        mid = _unproject(tri.side_midpoints[opp], tri.chart)
        for t in range(samples + 1):
            s = t / samples
            # slerp a -> mid -> b through the arc midpoint
            if s <= 0.5:
                p0, p1, f = a, mid, 2 * s
            else:
                p0, p1, f = mid, b, 2 * s - 1
            omega = math.acos(max(-1.0, min(1.0, float(p0 @ p1))))
            if omega < 1e-12:
                v = p0
            else:
                v = (math.sin((1 - f) * omega) * p0 + math.sin(f * omega) * p1) / math.sin(omega)
            z = _project(v / np.linalg.norm(v))
            if math.isfinite(z.real) and abs(z) <= clip:
                cmd = "L" if pen_down else "M"
                pieces.append(f"{cmd} {_fmt(z.real)} {_fmt(z.imag)}")
                pen_down = True
            else:
                pen_down = False
    return " ".join(pieces) if pieces else "M 0 0"


def export_svg(tess, path, size=640, stroke_width=0.004):
    """Write a deterministic SVG rendering: one path element per tile, arcs via
    the elliptical-arc command, the unit circle for hyperbolic geometry."""
    if not tess.tiles:
        raise ValueError("refusing to render an empty tessellation")
    if tess.geometry is Geometry.HYPERBOLIC:
        box = (-1.05, -1.05, 2.1, 2.1)
    elif tess.geometry is Geometry.SPHERICAL:
        box = (-4.2, -4.2, 8.4, 8.4)
    else:
        xs = [v.real for t in tess.tiles for v in t.vertices]
        ys = [v.imag for t in tess.tiles for v in t.vertices]
        pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        box = (min(xs) - pad, min(ys) - pad,
               (max(xs) - min(xs)) + 2 * pad, (max(ys) - min(ys)) + 2 * pad)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(box[0])} {_fmt(box[1])} {_fmt(box[2])} {_fmt(box[3])}">',
        '<g transform="scale(1,-1)">',
    ]
    for tri, word in zip(tess.tiles, tess.words):
        spherical_fallback = (
            tess.geometry is Geometry.SPHERICAL
            and (tri.chart == "secondary"
                 or any(not math.isfinite(v.real) or abs(v) > 4.0 for v in tri.vertices))
        )
        if spherical_fallback:
            d = _sampled_sphere_path(tri)
            fill = "none"
        else:
            d = _tile_path(tri)
            fill = _FILL[len(word) % 2]
        lines.append(
            f'<path d="{d}" fill="{fill}" stroke="{_STROKE}" '
            f'stroke-width="{_fmt(stroke_width * max(box[2], box[3]))}"/>'
        )
    if tess.geometry is Geometry.HYPERBOLIC:
        lines.append(
            f'<circle cx="0" cy="0" r="1" fill="none" stroke="{_STROKE}" '
            f'stroke-width="{_fmt(1.5 * stroke_width * box[2])}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(data)
    return data
