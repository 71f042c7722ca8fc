"""Cylinders, shear matrices, sheared-vertex closed forms and reassembly.

The double odd n-gon decomposes into (n-1)/2 horizontal cylinders, all of
modulus 2cot(pi/n), so the parabolic shear M_n acts as one full Dehn twist
per cylinder. Sheared vertex x-coordinates have cosine-polynomial closed
forms; the vertex generator guide reproduces them by a purely geometric
"snaking" chain of polygon gluings, and verify_reassembly confronts the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .geometry import Mat2, Vec, vadd, vsub
from .surface import LOWER, UPPER, Surface, build_surface, flip_shear_matrix, shear_matrix

UPPER_RIGHT = "upper_right"
UPPER_LEFT = "upper_left"
LOWER_RIGHT = "lower_right"
LOWER_LEFT = "lower_left"
POINT_FAMILIES = (UPPER_RIGHT, UPPER_LEFT, LOWER_RIGHT, LOWER_LEFT)

LEFT = "left"
RIGHT = "right"


# ---- trig identities ------------------------------------------------------


def telescoping_identity(theta: float, k: int) -> tuple[float, float]:
    """(lhs, rhs) of cot(theta/2) sin(k theta) = 1 + 2 sum cos(i theta) + cos(k theta)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not 0.0 < theta < math.pi or abs(math.sin(theta / 2.0)) < 1e-15:
        raise ValueError("theta must lie in (0, pi), away from cot poles")
    lhs = math.sin(k * theta) * math.cos(theta / 2.0) / math.sin(theta / 2.0)
    rhs = 1.0 + 2.0 * sum(math.cos(i * theta) for i in range(1, k)) + math.cos(k * theta)
    return lhs, rhs


def identity_sum(alpha: float, k: int) -> tuple[float, float]:
    """(lhs, rhs) of sum_{i<=k} cot(a/2) sin(i a) = k + sum_{i<=k} (2(k-i)+1) cos(i a)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not 0.0 < alpha < math.pi or abs(math.sin(alpha / 2.0)) < 1e-15:
        raise ValueError("alpha must lie in (0, pi), away from cot poles")
    cot_half = math.cos(alpha / 2.0) / math.sin(alpha / 2.0)
    lhs = sum(cot_half * math.sin(i * alpha) for i in range(1, k + 1))
    rhs = k + sum((2.0 * (k - i) + 1.0) * math.cos(i * alpha) for i in range(1, k + 1))
    return lhs, rhs


# ---- matrices -------------------------------------------------------------


def veech_shear(n: int) -> Mat2:
    return shear_matrix(n)


def veech_generator(n: int) -> Mat2:
    return flip_shear_matrix(n)


# ---- cylinders ------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    index: int
    width: float
    height: float
    modulus: float
    y_interval: tuple[float, float]
    # original edge pairs crossing this cylinder (right side, left side)
    crossing_edges: tuple[int, int]
    upper_band: tuple[Vec, ...]
    lower_band: tuple[Vec, ...]


def _slice_width(poly: list[Vec], y: float) -> float:
    """Length of the horizontal chord of a convex polygon at height y."""
    xs: list[float] = []
    m = len(poly)
    for i in range(m):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % m]
        if (y0 - y) * (y1 - y) < 0.0:
            t = (y - y0) / (y1 - y0)
            xs.append(x0 + t * (x1 - x0))
    if len(xs) < 2:
        return 0.0
    return max(xs) - min(xs)


def cylinder_width(surface: Surface, c: int, at: float = 0.5) -> float:
    """Geometric circumference of cylinder c, sliced at relative height `at`."""
    y0, y1 = surface.levels()[c - 1], surface.levels()[c]
    y = y0 + at * (y1 - y0)
    up, lo = surface.band_polygons(c)
    # a leaf at height y continues in the lower band at the translated height
    # (band bottoms glue to band bottoms), not at the half-turn reflection
    y_lo = y + 2.0 * surface.center[1] - (y0 + y1)
    return _slice_width(up, y) + _slice_width(lo, y_lo)


def decompose_cylinders(surface: Surface) -> list[Cylinder]:
    out = []
    levels = surface.levels()
    for c in range(1, surface.m + 1):
        up, lo = surface.band_polygons(c)
        width = cylinder_width(surface, c)
        height = levels[c] - levels[c - 1]
        out.append(
            Cylinder(
                index=c,
                width=width,
                height=height,
                modulus=width / height,
                y_interval=(levels[c - 1], levels[c]),
                crossing_edges=(c + 1, surface.n + 1 - c),
                upper_band=tuple(up),
                lower_band=tuple(lo),
            )
        )
    return out


# ---- closed-form sheared x-coordinates ------------------------------------


def sheared_x(family: str, n: int, k: int) -> float:
    """Closed-form x-coordinate of the M_n image of the level-k side vertex."""
    if family not in POINT_FAMILIES:
        raise ValueError(f"unknown point family {family!r}")
    m = (n - 1) // 2
    if not 0 <= k <= m:
        raise ValueError(f"level {k} out of range 0..{m}")
    alpha = 2.0 * math.pi / n
    ca = math.cos(alpha)
    s3 = sum((4.0 * (k - i) + 3.0) * math.cos(i * alpha) for i in range(1, k + 1))
    s1 = sum((4.0 * (k - i) + 1.0) * math.cos(i * alpha) for i in range(1, k + 1))
    if family == UPPER_RIGHT:
        return 2.0 * k + 1.0 + s3
    if family == UPPER_LEFT:
        return 2.0 * k + s1
    if family == LOWER_RIGHT:
        return 2.0 - 2.0 * k + ca - s1
    return 1.0 - 2.0 * k + ca - s3  # lower left


def side_vertex(surface: Surface, family: str, k: int) -> Vec:
    """The unsheared level-k side vertex of the given family."""
    if family == UPPER_RIGHT:
        return surface.right_point(k)
    if family == UPPER_LEFT:
        return surface.left_point(k)
    if family == LOWER_RIGHT:
        return surface.half_turn(surface.left_point(k))
    if family == LOWER_LEFT:
        return surface.half_turn(surface.right_point(k))
    raise ValueError(f"unknown point family {family!r}")


# ---- vertex generator guide ------------------------------------------------


@dataclass(frozen=True)
class GuidePoint:
    polygon: str  # upper | lower
    side: str  # left | right
    level: int
    x: float
    y: float


@dataclass(frozen=True)
class VertexGuide:
    n: int
    points: tuple[GuidePoint, ...]

    def lookup(self, polygon: str, side: str, level: int) -> GuidePoint:
        for p in self.points:
            if (p.polygon, p.side, p.level) == (polygon, side, level):
                return p
        raise KeyError((polygon, side, level))

    def __iter__(self) -> Iterator[GuidePoint]:
        return iter(self.points)


def _bar_endpoints(surface: Surface, polygon: str, level: int) -> dict[str, Vec]:
    """Level bar endpoints of one polygon copy at offset 0, keyed by side.

    The apex level is a zero-length bar: both sides map to the apex vertex.
    """
    if level == surface.m:
        pt = surface.apex()
        up = {LEFT: pt, RIGHT: pt}
    else:
        up = {LEFT: surface.left_point(level), RIGHT: surface.right_point(level)}
    if polygon == UPPER:
        return up
    # the half turn swaps the sides
    return {LEFT: surface.half_turn(up[RIGHT]), RIGHT: surface.half_turn(up[LEFT])}


def build_vertex_guide(n: int, snap_tol: float = 1e-9) -> VertexGuide:
    """Guide x-positions from the geometric gluing chain, not the closed forms.

    Starting from the base copy, repeatedly glue a half-turned copy along the
    right-side edge S_k and then a straight copy along the mirror edge
    S_{n+2-k}; each double step lands a copy at a purely horizontal offset
    whose level-(k-1) bar marks the guide. The chain for the lower polygon
    runs the same way starting from the lower copy (its level-1 bar lies on
    the x-axis and is fixed). The lower level-0 row comes from the first
    half-turned copy glued in the upper chain.
    """
    surface = build_surface(n)
    t = {k: surface.identification_offset(k) for k in range(1, n + 1)}
    points: list[GuidePoint] = []

    def emit(polygon: str, level: int, offset: Vec) -> None:
        if abs(offset[1]) > snap_tol:
            raise AssertionError(f"chain offset not horizontal: {offset}")
        for side, p in _bar_endpoints(surface, polygon, level).items():
            points.append(GuidePoint(polygon=polygon, side=side, level=level, x=p[0] + offset[0], y=p[1]))

    # upper chain
    emit(UPPER, 0, (0.0, 0.0))
    offset = (0.0, 0.0)
    for k in range(2, surface.m + 2):
        lower_offset = vadd(offset, t[k])
        if k == 2:
            # S_1 edge of the first glued lower copy: the lower level-0 row
            y_shift = lower_offset[1]
            if abs(y_shift) > snap_tol:
                raise AssertionError(f"lower level-0 copy not horizontal: {lower_offset}")
            for side, p in _bar_endpoints(surface, LOWER, 0).items():
                points.append(GuidePoint(polygon=LOWER, side=side, level=0, x=p[0] + lower_offset[0], y=p[1]))
        offset = vsub(lower_offset, t[n + 2 - k])
        emit(UPPER, k - 1, offset)

    # lower chain
    emit(LOWER, 1, (0.0, 0.0))
    offset = (0.0, 0.0)
    for k in range(3, surface.m + 2):
        upper_offset = vsub(offset, t[k])
        offset = vadd(upper_offset, t[n + 2 - k])
        emit(LOWER, k - 1, offset)

    return VertexGuide(n=n, points=tuple(points))


# ---- reassembly check ------------------------------------------------------


@dataclass(frozen=True)
class ReassemblyReport:
    n: int
    tol: float
    max_residual: float
    passed: bool
    worst: tuple[str, str, int]
    y_preserved: bool


_FAMILY_OF = {
    (UPPER, RIGHT): UPPER_RIGHT,
    (UPPER, LEFT): UPPER_LEFT,
    (LOWER, RIGHT): LOWER_RIGHT,
    (LOWER, LEFT): LOWER_LEFT,
}


def verify_reassembly(n: int, tol: float = 1e-8) -> ReassemblyReport:
    """Compare every guide x-position against the sheared original vertex."""
    surface = build_surface(n)
    guide = build_vertex_guide(n)
    M = veech_shear(n)
    worst = ("", "", -1)
    max_residual = 0.0
    y_ok = True
    for gp in guide:
        v = side_vertex(surface, _FAMILY_OF[(gp.polygon, gp.side)], gp.level)
        image = M.apply(v)
        r = abs(gp.x - image[0])
        if r > max_residual:
            max_residual = r
            worst = (gp.polygon, gp.side, gp.level)
        if gp.y != image[1]:  # shear row (0 1) must keep y bit-identical
            y_ok = False
    return ReassemblyReport(
        n=n,
        tol=tol,
        max_residual=max_residual,
        passed=max_residual < tol and y_ok,
        worst=worst,
        y_preserved=y_ok,
    )
