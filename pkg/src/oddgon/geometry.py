"""Small exact-ish planar geometry kit: 2-vectors, segments, 2x2 matrices.

Everything works on plain float tuples. Tolerances are explicit arguments
with conservative defaults; callers that need tighter control pass their own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Vec = tuple[float, float]

DEFAULT_EPS = 1e-9


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vscale(a: Vec, s: float) -> Vec:
    return (a[0] * s, a[1] * s)


def vlerp(a: Vec, b: Vec, t: float) -> Vec:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def vnorm(a: Vec) -> float:
    return math.hypot(a[0], a[1])


def vdist(a: Vec, b: Vec) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def angle_of(v: Vec) -> float:
    """Direction of v in (-pi, pi]."""
    return math.atan2(v[1], v[0])


def unit(theta: float) -> Vec:
    return (math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 matrix."""

    a: float
    b: float
    c: float
    d: float

    def apply(self, v: Vec) -> Vec:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inv(self) -> "Mat2":
        k = self.det()
        return Mat2(self.d / k, -self.b / k, -self.c / k, self.a / k)

    def rows(self) -> list[list[float]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY2 = Mat2(1.0, 0.0, 0.0, 1.0)
FLIP_X = Mat2(-1.0, 0.0, 0.0, 1.0)


def rotation(theta: float) -> Mat2:
    c, s = math.cos(theta), math.sin(theta)
    return Mat2(c, -s, s, c)


@dataclass(frozen=True)
class Segment:
    p0: Vec
    p1: Vec

    def direction(self) -> Vec:
        return vsub(self.p1, self.p0)

    def midpoint(self) -> Vec:
        return vlerp(self.p0, self.p1, 0.5)

    def length(self) -> float:
        return vdist(self.p0, self.p1)

    def point_at(self, t: float) -> Vec:
        return vlerp(self.p0, self.p1, t)

    def reversed(self) -> "Segment":
        return Segment(self.p1, self.p0)

    def translated(self, off: Vec) -> "Segment":
        return Segment(vadd(self.p0, off), vadd(self.p1, off))

    def transformed(self, m: Mat2) -> "Segment":
        return Segment(m.apply(self.p0), m.apply(self.p1))


@dataclass(frozen=True)
class Hit:
    """Intersection of a parametric line p+t*d with a segment (param u in [0,1])."""

    t: float
    u: float
    point: Vec


def ray_segment_hit(origin: Vec, d: Vec, seg: Segment, eps: float = DEFAULT_EPS) -> Optional[Hit]:
    """First-class ray/segment solve; returns None for parallel or out-of-range u.

    u is clamped-tested against [-eps, 1+eps] so near-endpoint hits are
    reported; callers decide whether an endpoint hit is a corner event.
    """
    e = seg.direction()
    denom = cross(d, e)
    if abs(denom) < 1e-15 * max(1.0, vnorm(e)):
        return None
    w = vsub(seg.p0, origin)
    t = cross(w, e) / denom
    u = cross(w, d) / denom
    if u < -eps or u > 1.0 + eps:
        return None
    return Hit(t=t, u=u, point=vlerp(seg.p0, seg.p1, u))


def segment_crossing_param(a: Segment, b: Segment, eps: float = DEFAULT_EPS) -> Optional[tuple[float, float]]:
    """Proper crossing of two segments: params (t on a, u on b), both in (eps, 1-eps).

    Returns None for parallel segments, touches at endpoints, or misses.
    """
    hit = ray_segment_hit(a.p0, a.direction(), b, eps=eps)
    if hit is None:
        return None
    if eps < hit.t < 1.0 - eps and eps < hit.u < 1.0 - eps:
        return (hit.t, hit.u)
    return None


def point_on_segment(p: Vec, seg: Segment, eps: float = DEFAULT_EPS) -> Optional[float]:
    """Param of p on seg if p lies on it (within eps, param in [-eps, 1+eps])."""
    d = seg.direction()
    L2 = dot(d, d)
    if L2 == 0.0:
        return None
    t = dot(vsub(p, seg.p0), d) / L2
    if t < -eps or t > 1.0 + eps:
        return None
    foot = seg.point_at(t)
    if vdist(p, foot) <= eps * max(1.0, math.sqrt(L2)):
        return t
    return None


def clip_polygon_halfplane(poly: Sequence[Vec], n: Vec, c: float) -> list[Vec]:
    """Sutherland-Hodgman clip of a convex polygon against dot(n, x) >= c."""
    out: list[Vec] = []
    m = len(poly)
    if m == 0:
        return out
    for i in range(m):
        p = poly[i]
        q = poly[(i + 1) % m]
        fp = dot(n, p) - c
        fq = dot(n, q) - c
        if fp >= 0.0:
            out.append(p)
        if (fp > 0.0 and fq < 0.0) or (fp < 0.0 and fq > 0.0):
            t = fp / (fp - fq)
            out.append(vlerp(p, q, t))
    return out


def polygon_area(poly: Sequence[Vec]) -> float:
    s = 0.0
    m = len(poly)
    for i in range(m):
        s += cross(poly[i], poly[(i + 1) % m])
    return 0.5 * s


def polygon_centroid(poly: Sequence[Vec]) -> Vec:
    a = polygon_area(poly)
    if abs(a) < 1e-30:
        # degenerate: average the vertices
        xs = sum(p[0] for p in poly) / len(poly)
        ys = sum(p[1] for p in poly) / len(poly)
        return (xs, ys)
    cx = cy = 0.0
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        w = cross(p, q)
        cx += (p[0] + q[0]) * w
        cy += (p[1] + q[1]) * w
    return (cx / (6.0 * a), cy / (6.0 * a))


def point_in_polygon(p: Vec, poly: Sequence[Vec], eps: float = DEFAULT_EPS) -> bool:
    """Containment in a convex ccw polygon, boundary-inclusive up to eps."""
    m = len(poly)
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        if cross(vsub(b, a), vsub(p, a)) < -eps:
            return False
    return True


def round_sig(x: float, digits: int = 12) -> float:
    """Round to `digits` significant decimal digits (JSON stability)."""
    if x == 0.0 or not math.isfinite(x):
        return 0.0 if x == 0.0 else x
    return float(f"{x:.{digits}g}")
