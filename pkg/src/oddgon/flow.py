"""Linear trajectories on the double n-gon: tracing, normalization, derivation.

The tracer walks a ray chart-to-chart; identifications are translations, so
the direction never changes. Direction normalization into [0, pi/n) is done
by an honest point map: rotations by even multiples of pi/n act about the
polygon centers, and the odd half-turn swaps the two polygons, so every
multiple of pi/n is realized by a piecewise isometry whose edge permutation
is read off geometrically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .geometry import (
    Segment,
    Vec,
    point_on_segment,
    ray_segment_hit,
    rotation,
    round_sig,
    unit,
    vadd,
    vdist,
    vsub,
)
from .surface import (
    LOWER,
    UPPER,
    Surface,
    letter_for_index,
    other_polygon,
)

CORNER_DELTA = 1e-12
PERIOD_TOL = 1e-9
STEP_MIN = 1e-12


class CornerHit(Exception):
    """Raised when a ray passes within delta of a polygon vertex."""

    def __init__(self, polygon: str, point: Vec, crossings_done: int):
        self.polygon = polygon
        self.point = point
        self.crossings_done = crossings_done
        super().__init__(f"trajectory within corner tolerance at {point} in {polygon} after {crossings_done} crossings")


@dataclass(frozen=True)
class Crossing:
    index: int  # original edge index 1..n
    letter: str
    polygon: str  # polygon entered at this crossing
    point: Vec  # entry point, in the entered polygon's chart
    param: float  # position along the upper representative, 0..1


@dataclass
class Trajectory:
    n: int
    start_polygon: str
    start_point: Vec
    theta: float
    crossings: list[Crossing]
    periodic: bool = False
    period: Optional[int] = None
    start_edge: Optional[int] = None
    start_param: Optional[float] = None

    @property
    def letters(self) -> str:
        return "".join(c.letter for c in self.crossings)

    @property
    def period_word(self) -> Optional[str]:
        if not self.periodic or self.period is None:
            return None
        return self.letters[: self.period]

    def segment(self, i: int, surface: Surface) -> tuple[str, Vec, Vec]:
        """Chart segment between crossings i and i+1: (polygon, from, to)."""
        a = self.crossings[i]
        b = self.crossings[i + 1]
        t = surface.identification_offset(b.index)
        if a.polygon == UPPER:
            exit_point = vadd(b.point, t)  # b entered the lower chart
        else:
            exit_point = vsub(b.point, t)
        return a.polygon, a.point, exit_point


def _exit_hit(surface: Surface, polygon: str, p: Vec, d: Vec, delta: float):
    """Smallest positive ray hit among the polygon's original edges."""
    best = None
    best_k = 0
    for k in range(1, surface.n + 1):
        seg = surface.edge_seg(polygon, k)
        hit = ray_segment_hit(p, d, seg, eps=1e-9)
        if hit is None or hit.t <= STEP_MIN:
            continue
        if best is None or hit.t < best.t:
            best, best_k = hit, k
    if best is None:
        raise CornerHit(polygon, p, 0)  # degenerate direction from boundary
    seg = surface.edge_seg(polygon, best_k)
    if min(vdist(best.point, seg.p0), vdist(best.point, seg.p1)) < delta:
        raise CornerHit(polygon, best.point, 0)
    return best_k, best


def _entry_from_edge(surface: Surface, k: int, point_on_upper: Vec, theta: float) -> tuple[str, Vec]:
    """Polygon and chart point the flow enters from a point on edge pair k."""
    d = unit(theta)
    e = surface.edge_seg(UPPER, k).direction()
    outward_upper = (e[1], -e[0])
    if d[0] * outward_upper[0] + d[1] * outward_upper[1] > 0.0:
        return LOWER, vsub(point_on_upper, surface.identification_offset(k))
    return UPPER, point_on_upper


def _upper_param(surface: Surface, k: int, polygon: str, point: Vec) -> float:
    """Edge parameter measured along the upper representative."""
    if polygon == UPPER:
        seg = surface.edge_seg(UPPER, k)
        q = point
    else:
        seg = surface.edge_seg(UPPER, k)
        q = vadd(point, surface.identification_offset(k))
    d = seg.direction()
    L2 = d[0] * d[0] + d[1] * d[1]
    return ((q[0] - seg.p0[0]) * d[0] + (q[1] - seg.p0[1]) * d[1]) / L2


def trace(
    surface: Surface,
    start: tuple[str, Vec],
    theta: float,
    max_crossings: int = 100,
    delta: float = CORNER_DELTA,
    start_edge: Optional[int] = None,
    start_param: Optional[float] = None,
) -> Trajectory:
    """Cutting sequence of a ray. `start` is (polygon, chart point).

    If the start point lies on an edge (pass start_edge), that edge is
    emitted as crossing 0 and tracing continues into the polygon the
    direction flows into. Periodicity: first return within PERIOD_TOL of
    crossing 0 on the same edge pair and polygon.
    """
    d = unit(theta)
    crossings: list[Crossing] = []
    traj = Trajectory(
        n=surface.n,
        start_polygon=start[0],
        start_point=start[1],
        theta=theta,
        crossings=crossings,
        start_edge=start_edge,
        start_param=start_param,
    )

    polygon, p = start
    if start_edge is not None:
        polygon, p = _entry_from_edge(
            surface, start_edge, start[1] if start[0] == UPPER else vadd(start[1], surface.identification_offset(start_edge)), theta
        )
        crossings.append(
            Crossing(
                index=start_edge,
                letter=letter_for_index(start_edge),
                polygon=polygon,
                point=p,
                param=_upper_param(surface, start_edge, polygon, p),
            )
        )

    while len(crossings) < max_crossings:
        try:
            k, hit = _exit_hit(surface, polygon, p, d, delta)
        except CornerHit as ch:
            raise CornerHit(ch.polygon, ch.point, len(crossings)) from None
        t_off = surface.identification_offset(k)
        if polygon == UPPER:
            entered, q = LOWER, vsub(hit.point, t_off)
        else:
            entered, q = UPPER, vadd(hit.point, t_off)
        crossings.append(
            Crossing(
                index=k,
                letter=letter_for_index(k),
                polygon=entered,
                point=q,
                param=_upper_param(surface, k, entered, q),
            )
        )
        polygon, p = entered, q
        first = crossings[0]
        last = crossings[-1]
        if (
            len(crossings) > 1
            and last.index == first.index
            and last.polygon == first.polygon
            and vdist(last.point, first.point) < PERIOD_TOL
        ):
            traj.periodic = True
            traj.period = len(crossings) - 1
            crossings.pop()  # the repeat is bookkeeping, not a new letter
            break
    return traj


def trace_from_edge(
    surface: Surface,
    edge_index: int,
    param: float,
    theta: float,
    max_crossings: int = 100,
    delta: float = CORNER_DELTA,
) -> Trajectory:
    """Trace from a point given by its parameter on the upper representative."""
    if not 1 <= edge_index <= surface.n:
        raise ValueError(f"edge index {edge_index} out of range for n={surface.n}")
    if not 0.0 < param < 1.0:
        raise ValueError("edge parameter must be strictly inside (0, 1)")
    p = surface.edge_seg(UPPER, edge_index).point_at(param)
    return trace(
        surface,
        (UPPER, p),
        theta,
        max_crossings=max_crossings,
        delta=delta,
        start_edge=edge_index,
        start_param=param,
    )


# ---- direction normalization ----------------------------------------------


@dataclass(frozen=True)
class NormalizedDirection:
    theta: float
    steps: int  # rotation by -steps * pi/n was applied
    letter_map: dict[str, str]  # original letter -> normalized letter

    def apply(self, word: str) -> str:
        return "".join(self.letter_map.get(ch, ch) for ch in word)

    def invert(self, word: str) -> str:
        inv = {v: k for k, v in self.letter_map.items()}
        return "".join(inv.get(ch, ch) for ch in word)


def rotation_isometry(surface: Surface, steps: int) -> Callable[[str, Vec], tuple[str, Vec]]:
    """Point map of the surface isometry with derivative R(-steps * pi/n).

    Even steps rotate each polygon about its own center; an odd step adds the
    polygon-swapping half turn.
    """
    n = surface.n
    j = steps % (2 * n)
    odd = j % 2 == 1
    e = (j - n) % (2 * n) if odd else j
    R = rotation(-e * math.pi / n)
    centers = {
        UPPER: (
            sum(p[0] for p in surface.upper) / n,
            sum(p[1] for p in surface.upper) / n,
        ),
        LOWER: (
            sum(p[0] for p in surface.lower) / n,
            sum(p[1] for p in surface.lower) / n,
        ),
    }

    def apply(polygon: str, point: Vec) -> tuple[str, Vec]:
        O = centers[polygon]
        q = vadd(O, R.apply(vsub(point, O)))
        if odd:
            return other_polygon(polygon), surface.half_turn(q)
        return polygon, q

    return apply


def edge_permutation(surface: Surface, steps: int) -> dict[int, int]:
    """Edge-index permutation induced by rotation_isometry, matched geometrically."""
    iso = rotation_isometry(surface, steps)
    perm: dict[int, int] = {}
    for k in range(1, surface.n + 1):
        polygon, q = iso(UPPER, surface.edge_seg(UPPER, k).midpoint())
        target = None
        for k2 in range(1, surface.n + 1):
            if vdist(q, surface.edge_seg(polygon, k2).midpoint()) < 1e-6:
                target = k2
                break
        if target is None:
            raise AssertionError(f"rotated edge S_{k} matches no standard edge")
        perm[k] = target
    if sorted(perm.values()) != list(range(1, surface.n + 1)):
        raise AssertionError("edge matching is not a bijection")
    return perm


def normalize_direction(surface: Surface, theta: float) -> NormalizedDirection:
    """Rotate theta into [0, pi/n) and report the induced letter permutation."""
    sector = surface.sector
    th = theta % (2.0 * math.pi)
    steps = int(math.floor(th / sector))
    th_norm = th - steps * sector
    if th_norm >= sector:  # guard the floating boundary
        steps += 1
        th_norm -= sector
    if th_norm < 0.0:
        th_norm = 0.0
    perm = edge_permutation(surface, steps)
    letter_map = {letter_for_index(k): letter_for_index(v) for k, v in perm.items()}
    return NormalizedDirection(theta=th_norm, steps=steps, letter_map=letter_map)


# ---- geometric derivation ---------------------------------------------------


@dataclass(frozen=True)
class GeometricDerivation:
    letters: str
    cyclic: bool
    normalized_theta: float
    rotation_steps: int
    primed_hits: tuple[tuple[float, str], ...]  # (time, derived letter)


def _chart_segments(surface: Surface, traj: Trajectory):
    """(index, polygon, from, to) chart segments; periodic orbits are closed."""
    m = len(traj.crossings)
    for i in range(m - 1):
        polygon, a, b = traj.segment(i, surface)
        yield i, polygon, a, b
    if traj.periodic and m >= 1:
        last = traj.crossings[-1]
        first = traj.crossings[0]
        t = surface.identification_offset(first.index)
        if last.polygon == UPPER:
            exit_point = vadd(first.point, t)
        else:
            exit_point = vsub(first.point, t)
        yield m - 1, last.polygon, last.point, exit_point


def _collect_primed_letters(surface: Surface, traj: Trajectory) -> list[tuple[float, str]]:
    """Primed-edge crossings along the traced span, as (time, letter) events.

    Time is crossing-index-valued: the segment between crossings i and i+1
    spans (i, i+1). The two direction-fixed primed edges coincide with their
    original pairs, so those fire exactly at the chart transitions.
    """
    node_idx = set(surface.node_indices)
    events: list[tuple[float, str]] = []

    for i, c in enumerate(traj.crossings):
        if c.index in node_idx:
            events.append((float(i), c.letter))

    for i, polygon, a, b in _chart_segments(surface, traj):
        seg = Segment(a, b)
        for piece in surface.primed_for(polygon):
            hit = ray_segment_hit(a, seg.direction(), piece.seg, eps=1e-9)
            if hit is None:
                continue
            if 1e-9 < hit.t < 1.0 - 1e-9 and 1e-9 < hit.u < 1.0 - 1e-9:
                events.append((i + hit.t, letter_for_index(piece.index)))
    events.sort(key=lambda e: e[0])
    return events


def derive_geometric(surface: Surface, traj: Trajectory) -> GeometricDerivation:
    """Derived cutting sequence: the primed edges crossed by the trajectory.

    Trajectories outside the standard sector are first moved into it by the
    rotation isometry (re-tracing the mapped start), and the derived word is
    mapped back through the inverse letter permutation.
    """
    norm = normalize_direction(surface, traj.theta)
    if norm.steps % (2 * surface.n) != 0:
        # the isometry maps crossings one-to-one, so trace the same span
        span = len(traj.crossings) + (1 if traj.periodic else 0)
        iso = rotation_isometry(surface, norm.steps)
        if traj.start_edge is not None:
            polygon, point = iso(UPPER, surface.edge_seg(UPPER, traj.start_edge).point_at(traj.start_param))
            k2 = None
            for k in range(1, surface.n + 1):
                par = point_on_segment(point, surface.edge_seg(polygon, k), eps=1e-9)
                if par is not None and 1e-9 < par < 1.0 - 1e-9:
                    k2 = k
                    break
            base = trace(
                surface,
                (polygon, point),
                norm.theta,
                max_crossings=span,
                start_edge=k2,
                start_param=None,
            )
        else:
            polygon, point = iso(traj.start_polygon, traj.start_point)
            base = trace(
                surface,
                (polygon, point),
                norm.theta,
                max_crossings=span,
            )
    else:
        base = traj
    if base is not traj and base.letters != norm.apply(traj.letters):
        raise AssertionError("rotated trace does not reproduce the permuted cutting sequence")

    events = _collect_primed_letters(surface, base)
    if base.periodic:
        word = "".join(ch for t, ch in events if 0.0 <= t < float(base.period))
    else:
        word = "".join(ch for _, ch in events)
    return GeometricDerivation(
        letters=norm.invert(word),
        cyclic=base.periodic,
        normalized_theta=norm.theta,
        rotation_steps=norm.steps,
        primed_hits=tuple((round_sig(t, 12), ch) for t, ch in events),
    )


def trajectory_json(traj: Trajectory) -> dict:
    letters = traj.period_word if traj.periodic else traj.letters
    start: dict = {
        "polygon": traj.start_polygon,
        "point": [round_sig(traj.start_point[0]), round_sig(traj.start_point[1])],
    }
    if traj.start_edge is not None:
        start["edge"] = f"S{traj.start_edge}"
        start["t"] = round_sig(traj.start_param) if traj.start_param is not None else None
    return {
        "start": start,
        "theta": round_sig(traj.theta),
        "letters": list(letters),
        "periodic": traj.periodic,
        "period": traj.period,
    }
