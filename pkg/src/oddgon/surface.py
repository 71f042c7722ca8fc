"""Double regular odd n-gon translation surfaces.

The surface is two regular n-gons (n odd): an upper copy with bottom edge
from (0,0) to (1,0), and a lower copy obtained by a half turn about the
midpoint of the upper polygon's last edge. Opposite (parallel) edges are
identified by translation. On top of the n original edge pairs the model
carries:

  * auxiliary diagonals (horizontal and pi/n-slanted chords, n-3 per
    polygon) that stratify each polygon into cylinder bands, and
  * primed edges: the images of the original edges under the orientation-
    reversing shear generator, realized as cylinder-parallelogram diagonals
    split into per-polygon pieces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .geometry import (
    Mat2,
    Segment,
    Vec,
    point_in_polygon,
    round_sig,
    unit,
    vadd,
    vscale,
    vsub,
)

UPPER = "upper"
LOWER = "lower"

ORIGINAL = "original"
AUXILIARY = "auxiliary"
PRIMED = "primed"


def other_polygon(polygon: str) -> str:
    return LOWER if polygon == UPPER else UPPER


def letter_for_index(k: int) -> str:
    """Original edge letter: 1 -> 'A', 2 -> 'B', ..."""
    if not 1 <= k <= 26:
        raise ValueError(f"edge index {k} out of letter range")
    return chr(ord("A") + k - 1)


def index_for_letter(label: str) -> int:
    """Accepts 'C', 'S3' or '3'."""
    s = label.strip()
    if s.upper().startswith("S") and s[1:].isdigit():
        return int(s[1:])
    if s.isdigit():
        return int(s)
    if len(s) == 1 and s.isalpha():
        return ord(s.upper()) - ord("A") + 1
    raise ValueError(f"cannot parse edge label {label!r}")


@dataclass(frozen=True)
class Edge:
    label: str
    kind: str  # original | auxiliary | primed
    polygon: str  # upper | lower
    index: int
    seg: Segment


@dataclass(frozen=True)
class PrimedEdge:
    index: int
    label: str
    # True for the two direction-fixed edges (horizontal and pi/n): the
    # primed edge coincides with the original pair instead of crossing it.
    coincident: bool
    pieces: tuple[Edge, ...]


def shear_matrix(n: int) -> Mat2:
    """Parabolic multi-twist: one full Dehn twist in every horizontal cylinder."""
    return Mat2(1.0, 2.0 / math.tan(math.pi / n), 0.0, 1.0)


def flip_shear_matrix(n: int) -> Mat2:
    """Orientation-reversing generator: flip x, then shear.

    Self-inverse; fixes the directions 0 and pi/n and swaps the sector
    (0, pi/n) with (pi/n, pi).
    """
    return Mat2(-1.0, 2.0 / math.tan(math.pi / n), 0.0, 1.0)


class Surface:
    """Geometric model of one double odd n-gon, with derived edge systems."""

    def __init__(self, n: int):
        if n < 5 or n % 2 == 0:
            raise ValueError("n must be an odd integer >= 5")
        self.n = n
        self.alpha = 2.0 * math.pi / n
        self.sector = math.pi / n
        self.m = (n - 1) // 2

        # Upper polygon, ccw; edge S_k runs from vertex k-1 to vertex k and
        # points in direction (k-1)*alpha.
        verts: list[Vec] = [(0.0, 0.0)]
        for k in range(1, n):
            verts.append(vadd(verts[-1], unit((k - 1) * self.alpha)))
        self.upper: list[Vec] = verts
        # Half-turn center: midpoint of S_n (from vertex n-1 to vertex 0).
        self.center: Vec = vscale(vadd(verts[n - 1], verts[0]), 0.5)
        self.lower: list[Vec] = [self.half_turn(p) for p in verts]

    # ---- basic geometry -------------------------------------------------

    def half_turn(self, p: Vec) -> Vec:
        return (2.0 * self.center[0] - p[0], 2.0 * self.center[1] - p[1])

    def vertices(self, polygon: str) -> list[Vec]:
        return self.upper if polygon == UPPER else self.lower

    def outline(self, polygon: str) -> list[Vec]:
        """Vertex cycle in ccw order (the half turn preserves orientation)."""
        return list(self.vertices(polygon))

    def edge_seg(self, polygon: str, k: int) -> Segment:
        vs = self.vertices(polygon)
        return Segment(vs[(k - 1) % self.n], vs[k % self.n])

    def edge_direction(self, k: int) -> float:
        """Direction of the upper S_k representative."""
        return (k - 1) * self.alpha

    def identification_offset(self, k: int) -> Vec:
        """Translation taking the lower S_k representative onto the upper one."""
        return vsub(self.edge_seg(UPPER, k).midpoint(), self.edge_seg(LOWER, k).midpoint())

    def entering_polygon(self, k: int) -> str:
        """Polygon entered when edge pair k is crossed in a sector direction."""
        d = unit(self.sector / 2.0)
        e = self.edge_seg(UPPER, k).direction()
        outward = (e[1], -e[0])  # ccw polygon: outward normal of the upper copy
        exits_upper = d[0] * outward[0] + d[1] * outward[1] > 0.0
        return LOWER if exits_upper else UPPER

    def letter(self, k: int) -> str:
        return letter_for_index(k)

    @property
    def node_indices(self) -> tuple[int, int]:
        """Original edges fixed in direction by the flip-shear: S_1 and S_{(n+3)/2}."""
        return (1, (self.n + 3) // 2)

    # ---- side points and levels ----------------------------------------

    def right_point(self, j: int) -> Vec:
        """j-th vertex up the right side of the upper polygon (0 = (1,0))."""
        if not 0 <= j <= self.m:
            raise ValueError("level out of range")
        return self.upper[1 + j]

    def left_point(self, j: int) -> Vec:
        """j-th vertex up the left side of the upper polygon (0 = (0,0))."""
        if not 0 <= j <= self.m:
            raise ValueError("level out of range")
        return self.upper[(self.n - j) % self.n]

    def apex(self) -> Vec:
        return self.upper[self.m + 1]

    def levels(self) -> list[float]:
        """Heights y_0=0 < y_1 < ... < y_m of the upper polygon's vertex rows."""
        return [self.right_point(j)[1] for j in range(self.m + 1)]

    def band_polygons(self, c: int) -> tuple[list[Vec], list[Vec]]:
        """Cylinder band c (1..m) as (upper piece, lower piece), both ccw.

        The upper piece is the slab of the upper polygon between levels c-1
        and c; the top band degenerates to the apex triangle.
        """
        if not 1 <= c <= self.m:
            raise ValueError("cylinder index out of range")
        if c == self.m:
            up = [self.left_point(c - 1), self.right_point(c - 1), self.apex()]
        else:
            up = [
                self.left_point(c - 1),
                self.right_point(c - 1),
                self.right_point(c),
                self.left_point(c),
            ]
        lo = [self.half_turn(p) for p in up]  # rotation by pi keeps ccw order
        return up, lo

    def cylinder_of_edge(self, k: int) -> int:
        """Cylinder band crossed by original edge pair k (k != 1)."""
        if k == 1:
            raise ValueError("the horizontal edge bounds no band")
        if 2 <= k <= self.m + 1:
            return k - 1
        return self.n + 1 - k

    # ---- auxiliary edges -------------------------------------------------

    @cached_property
    def aux_edges(self) -> list[Edge]:
        """All 2(n-3) auxiliary diagonals; per polygon, index i in 1..n-3.

        Odd i = 2j+1: slanted chord (direction pi/n) from left level j to
        right level j+1. Even i = 2j: horizontal chord at level j.
        """
        out: list[Edge] = []
        for polygon in (UPPER, LOWER):
            for i in range(1, self.n - 2):
                if i % 2 == 1:
                    j = (i - 1) // 2
                    seg = Segment(self.left_point(j), self.right_point(j + 1))
                else:
                    j = i // 2
                    seg = Segment(self.left_point(j), self.right_point(j))
                if polygon == LOWER:
                    seg = Segment(self.half_turn(seg.p0), self.half_turn(seg.p1))
                label = ("u" if polygon == UPPER else "l") + str(i)
                out.append(Edge(label=label, kind=AUXILIARY, polygon=polygon, index=i, seg=seg))
        return out

    def aux_for(self, polygon: str) -> list[Edge]:
        return [e for e in self.aux_edges if e.polygon == polygon]

    # ---- primed edges ----------------------------------------------------

    @cached_property
    def primed_edges(self) -> list[PrimedEdge]:
        out = []
        for k in range(1, self.n + 1):
            out.append(self._primed_edge(k))
        return out

    def _primed_edge(self, k: int) -> PrimedEdge:
        label = self.letter(k) + "'"
        if k in self.node_indices:
            pieces = tuple(
                Edge(label=label, kind=PRIMED, polygon=p, index=k, seg=self.edge_seg(p, k))
                for p in (UPPER, LOWER)
            )
            return PrimedEdge(index=k, label=label, coincident=True, pieces=pieces)

        # Present the cylinder crossed by S_k as a parallelogram glued along
        # the upper S_k representative; the primed edge is the diagonal whose
        # vector is the flip-shear image of the edge vector, and it meets S_k
        # at its midpoint (= the parallelogram center).
        c = self.cylinder_of_edge(k)
        up_poly, lo_poly = self.band_polygons(c)
        t = self.identification_offset(k)
        lo_translated = [vadd(p, t) for p in lo_poly]
        center = self.edge_seg(UPPER, k).midpoint()
        v = flip_shear_matrix(self.n).apply(self.edge_seg(UPPER, k).direction())
        half = vscale(v, 0.5)
        ends = (vsub(center, half), vadd(center, half))

        pieces = []
        for end in ends:
            seg = Segment(center, end)
            probe = seg.point_at(0.5)
            if point_in_polygon(probe, up_poly, eps=1e-9):
                pieces.append(Edge(label=label, kind=PRIMED, polygon=UPPER, index=k, seg=seg))
            elif point_in_polygon(probe, lo_translated, eps=1e-9):
                back = seg.translated(vscale(t, -1.0))
                pieces.append(Edge(label=label, kind=PRIMED, polygon=LOWER, index=k, seg=back))
            else:
                raise AssertionError(f"primed half of S_{k} lies in neither band piece")
        return PrimedEdge(index=k, label=label, coincident=False, pieces=tuple(pieces))

    def primed_for(self, polygon: str) -> list[Edge]:
        out = []
        for pe in self.primed_edges:
            if pe.coincident:
                continue  # crossed exactly when the original pair is crossed
            for piece in pe.pieces:
                if piece.polygon == polygon:
                    out.append(piece)
        return out


def build_surface(n: int) -> Surface:
    return Surface(n)


# ---- serialization -------------------------------------------------------


def _point_json(p: Vec) -> list[float]:
    return [round_sig(p[0]), round_sig(p[1])]


def surface_json(surface: Surface, include_derived: bool = True) -> dict:
    """JSON-ready dict: polygons, edges (all kinds), identifications."""
    n = surface.n
    edges = []
    for polygon in (UPPER, LOWER):
        for k in range(1, n + 1):
            seg = surface.edge_seg(polygon, k)
            edges.append(
                {
                    "label": f"S{k}",
                    "polygon": polygon,
                    "kind": ORIGINAL,
                    "p0": _point_json(seg.p0),
                    "p1": _point_json(seg.p1),
                }
            )
    if include_derived:
        for e in surface.aux_edges:
            edges.append(
                {
                    "label": e.label,
                    "polygon": e.polygon,
                    "kind": AUXILIARY,
                    "p0": _point_json(e.seg.p0),
                    "p1": _point_json(e.seg.p1),
                }
            )
        for pe in surface.primed_edges:
            for piece in pe.pieces:
                edges.append(
                    {
                        "label": f"S{pe.index}'",
                        "polygon": piece.polygon,
                        "kind": PRIMED,
                        "p0": _point_json(piece.seg.p0),
                        "p1": _point_json(piece.seg.p1),
                    }
                )
    return {
        "n": n,
        "polygons": {
            "upper": [_point_json(p) for p in surface.upper],
            "lower": [_point_json(p) for p in surface.lower],
        },
        "edges": edges,
        "identifications": [[f"upper:S{k}", f"lower:S{k}"] for k in range(1, n + 1)],
    }
