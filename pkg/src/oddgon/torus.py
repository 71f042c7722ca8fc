"""Square-torus baseline: tracing, the between-two-As rule, and un-shearing.

The unit square torus with A = horizontal edges (lines y in Z) and B =
vertical edges (lines x in Z) is the sanity case: its derivation rule
("between every two A's, remove a B") is NOT the sandwich rule, and the tests
pin that contrast. The shear here is M = (1 1; 0 1); derivation applies the
inverse (1 -1; 0 1) to the whole line and re-reads the cutting sequence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .flow import CornerHit, PERIOD_TOL

TORUS_SHEAR = ((1.0, 1.0), (0.0, 1.0))
TORUS_SHEAR_INV = ((1.0, -1.0), (0.0, 1.0))
HORIZONTAL, VERTICAL = "A", "B"

_DELTA = 1e-12


@dataclass(frozen=True)
class TorusCrossing:
    t: float
    letter: str
    point: tuple[float, float]


@dataclass
class TorusTrajectory:
    start: tuple[float, float]
    theta: float
    crossings: list[TorusCrossing]
    periodic: bool = False
    period: Optional[int] = None

    @property
    def letters(self) -> str:
        return "".join(c.letter for c in self.crossings)

    @property
    def period_word(self) -> Optional[str]:
        if not self.periodic or self.period is None:
            return None
        return self.letters[: self.period]


def _line_crossings(p0: float, d: float, t_max: float) -> list[float]:
    """Times in (0, t_max] at which p0 + t*d crosses an integer."""
    if abs(d) < 1e-15:
        return []
    out = []
    if d > 0:
        k = math.floor(p0) + 1
        if abs(p0 - round(p0)) < 1e-12:
            k = round(p0) + 1
        t = (k - p0) / d
        while t <= t_max:
            out.append(t)
            k += 1
            t = (k - p0) / d
    else:
        k = math.ceil(p0) - 1
        if abs(p0 - round(p0)) < 1e-12:
            k = round(p0) - 1
        t = (k - p0) / d
        while t <= t_max:
            out.append(t)
            k -= 1
            t = (k - p0) / d
    return out


def _frac_dist(x: float) -> float:
    return abs(x - round(x))


def torus_trace(
    start: tuple[float, float],
    theta: float,
    max_crossings: int = 100,
    delta: float = _DELTA,
    t_max: Optional[float] = None,
) -> TorusTrajectory:
    """Cutting sequence of the line start + t*(cos theta, sin theta).

    A start on a lattice line emits that crossing at t = 0. CornerHit when
    any crossing passes within delta of a lattice point.
    """
    dx, dy = math.cos(theta), math.sin(theta)
    x0, y0 = start
    events: list[tuple[float, str]] = []
    if _frac_dist(y0) < 1e-12:
        events.append((0.0, HORIZONTAL))
    elif _frac_dist(x0) < 1e-12:
        events.append((0.0, VERTICAL))

    # generous horizon; extended on demand until max_crossings is reached
    horizon = t_max if t_max is not None else (max_crossings + 2) / max(abs(dx) + abs(dy), 1e-9)
    for t in _line_crossings(y0, dy, horizon):
        events.append((t, HORIZONTAL))
    for t in _line_crossings(x0, dx, horizon):
        events.append((t, VERTICAL))
    events.sort()
    events = events[:max_crossings] if t_max is None else events

    crossings: list[TorusCrossing] = []
    for t, letter in events:
        px, py = x0 + t * dx, y0 + t * dy
        other = _frac_dist(px) if letter == HORIZONTAL else _frac_dist(py)
        if other < delta:
            raise CornerHit("torus", (px, py), len(crossings))
        crossings.append(TorusCrossing(t=t, letter=letter, point=(px, py)))

    traj = TorusTrajectory(start=start, theta=theta, crossings=crossings)
    first = crossings[0] if crossings else None
    for i in range(1, len(crossings)):
        c = crossings[i]
        if (
            c.letter == first.letter
            and _frac_dist(c.point[0] - first.point[0]) < PERIOD_TOL
            and _frac_dist(c.point[1] - first.point[1]) < PERIOD_TOL
        ):
            traj.periodic = True
            traj.period = i
            traj.crossings = crossings[:i]
            break
    return traj


def torus_derive_rule(word: str, cyclic: bool = False) -> str:
    """Remove one B from every maximal B-run between consecutive A's."""
    for ch in word:
        if ch not in (HORIZONTAL, VERTICAL):
            raise ValueError(f"torus words use letters A and B only, got {ch!r}")
    if not word:
        return ""
    a_positions = [i for i, ch in enumerate(word) if ch == HORIZONTAL]
    if not a_positions:
        return word
    drop: set[int] = set()
    if cyclic:
        pairs = list(zip(a_positions, a_positions[1:] + [a_positions[0] + len(word)]))
        doubled = word + word
        for lo, hi in pairs:
            for j in range(lo + 1, hi):
                if doubled[j] == VERTICAL:
                    drop.add(j % len(word))
                    break
    else:
        for lo, hi in zip(a_positions, a_positions[1:]):
            for j in range(lo + 1, hi):
                if word[j] == VERTICAL:
                    drop.add(j)
                    break
    return "".join(ch for i, ch in enumerate(word) if i not in drop)


def torus_derive_geometric(traj: TorusTrajectory) -> str:
    """Re-read the cutting sequence after applying the inverse shear.

    The inverse shear acts affinely on the whole plane, so the image of the
    traced span is traced over the same time interval; for periodic orbits
    one period of the image orbit is returned.
    """
    x0, y0 = traj.start
    dx, dy = math.cos(traj.theta), math.sin(traj.theta)
    ix, iy = x0 - y0, y0
    idx, idy = dx - dy, dy
    itheta = math.atan2(idy, idx)
    iscale = math.hypot(idx, idy)
    if traj.periodic:
        image = torus_trace((ix, iy), itheta, max_crossings=4 * len(traj.crossings) + 8)
        if not image.periodic:
            raise AssertionError("image of a periodic torus orbit failed to close up")
        return image.period_word
    if not traj.crossings:
        return ""
    t_end = traj.crossings[-1].t * iscale + 1e-12
    image = torus_trace((ix, iy), itheta, max_crossings=10 ** 9, t_max=t_end)
    return image.letters
