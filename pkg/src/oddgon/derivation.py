"""Cutting-sequence derivation: the sandwich rule and the diagram pipeline.

Two independent routes produce derived sequences:

* `ksl_window` / `ksl_cyclic` apply the combinatorial rule directly: keep
  exactly the letters whose predecessor and successor agree.
* `derive_via_diagrams` walks a word through the four-stage transition
  diagrams (arrows -> augmented -> dual -> primed) built geometrically from
  the surface, reading the derived word off the primed labels.

`sandwich_equivalence_check` compares the two routes on enumerated cyclic
walks and sampled windows.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .flow import CornerHit, Trajectory, _chart_segments, trace_from_edge
from .geometry import (
    Segment,
    clip_polygon_halfplane,
    point_in_polygon,
    polygon_area,
    polygon_centroid,
    ray_segment_hit,
    vlerp,
)
from .surface import Surface, index_for_letter, letter_for_index

import math


# ---- the combinatorial rule -------------------------------------------------


def ksl_window(word: str) -> str:
    """Keep the sandwiched letters of a finite window.

    A letter is sandwiched when its neighbors agree; the first and last
    letters have no verdict and are dropped.
    """
    return "".join(
        word[i] for i in range(1, len(word) - 1) if word[i - 1] == word[i + 1]
    )


def ksl_cyclic(word: str) -> str:
    """Keep the sandwiched letters of a cyclic word (neighbors wrap)."""
    L = len(word)
    if L == 0:
        return ""
    return "".join(
        word[i] for i in range(L) if word[(i - 1) % L] == word[(i + 1) % L]
    )


def cyclic_normal_form(word: str) -> str:
    """Lexicographically least rotation, for cyclic-word comparison."""
    if not word:
        return ""
    return min(word[i:] + word[:i] for i in range(len(word)))


EMPTY, FIXED, CYCLE, TRUNCATED = "Empty", "Fixed", "Cycle", "Truncated"


@dataclass(frozen=True)
class ClosureResult:
    status: str
    orbit: tuple[str, ...]  # normal forms, starting with the input
    steps: int


def derivability_closure(word: str, cyclic: bool = True, max_steps: int = 64) -> ClosureResult:
    """Iterate the sandwich rule until it stabilizes, empties, or cycles."""
    rule = ksl_cyclic if cyclic else ksl_window
    norm = cyclic_normal_form if cyclic else (lambda w: w)
    w = norm(word)
    orbit = [w]
    seen = {w: 0}
    for step in range(1, max_steps + 1):
        w2 = norm(rule(orbit[-1]))
        if w2 == "":
            orbit.append(w2)
            return ClosureResult(EMPTY, tuple(orbit), step)
        if w2 == orbit[-1]:
            return ClosureResult(FIXED, tuple(orbit), step)
        if w2 in seen:
            orbit.append(w2)
            return ClosureResult(CYCLE, tuple(orbit), step)
        seen[w2] = step
        orbit.append(w2)
    return ClosureResult(TRUNCATED, tuple(orbit), max_steps)


# ---- diagram data model -----------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    label: Optional[str] = None


@dataclass(frozen=True)
class TransitionDiagram:
    stage: str
    nodes: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def arrow_set(self) -> set[tuple[str, str]]:
        return {(a.source, a.target) for a in self.arrows}


class InvalidPath(ValueError):
    """A word is not realizable as a walk in the transition diagrams."""


def diagram_json(diagram: TransitionDiagram) -> dict:
    return {
        "stage": diagram.stage,
        "nodes": list(diagram.nodes),
        "arrows": [
            {"from": a.source, "to": a.target, "label": a.label}
            for a in diagram.arrows
        ],
    }


def diagram_dot(diagram: TransitionDiagram) -> str:
    lines = [f'digraph "{diagram.stage}" {{', "  rankdir=LR;"]
    for node in diagram.nodes:
        lines.append(f'  "{node}";')
    for a in diagram.arrows:
        attr = f' [label="{a.label}"]' if a.label else ""
        lines.append(f'  "{a.source}" -> "{a.target}"{attr};')
    lines.append("}")
    return "\n".join(lines)


# ---- stage 1: arrows --------------------------------------------------------

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def _arrow_region(surface: Surface, x: int, y: int, tol: float) -> list[tuple[float, float]]:
    """Clipped (u, v) parameter region of sector chords from edge x to edge y.

    u parameterizes the chart representative of edge x in the polygon entered
    through x, v the representative of edge y in the same chart; the chord
    direction must lie in [0, pi/n).
    """
    q = surface.entering_polygon(x)
    ex = surface.edge_seg(q, x)
    ey = surface.edge_seg(q, y)
    dx = ex.direction()
    dy = ey.direction()
    # delta(u, v) = ey(v) - ex(u), affine in (u, v)
    base = (ey.p0[0] - ex.p0[0], ey.p0[1] - ex.p0[1])
    tan = math.tan(surface.sector)
    # constraint 1: delta_y >= 0   ->  -dx_y * u + dy_y * v >= -base_y
    region = clip_polygon_halfplane(UNIT_SQUARE, (-dx[1], dy[1]), -base[1])
    # constraint 2: tan * delta_x - delta_y >= 0
    n2 = (-tan * dx[0] + dx[1], tan * dy[0] - dy[1])
    c2 = -(tan * base[0] - base[1])
    region = clip_polygon_halfplane(region, n2, c2)
    if abs(polygon_area(region)) <= tol:
        return []
    # Reject regions that are degenerate everywhere: chords running along an
    # edge line or pointing exactly at the sector boundary. A linear functional
    # that is nonnegative on the region and positive anywhere is positive at
    # the centroid, so one interior representative decides.
    u, v = polygon_centroid(region)
    p1 = ex.point_at(u)
    p2 = ey.point_at(v)
    d = (p2[0] - p1[0], p2[1] - p1[1])
    if d[0] <= tol or tan * d[0] - d[1] <= tol:
        return []
    mid = (0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1]))
    if not point_in_polygon(mid, surface.vertices(q), eps=-1e-9):
        return []
    return region


def _horizontal_arrow(surface: Surface, x: int, y: int) -> Optional[tuple[float, float]]:
    """Representative (u, v) for a horizontal (theta = 0) chord, if one exists."""
    q = surface.entering_polygon(x)
    ex = surface.edge_seg(q, x)
    ey = surface.edge_seg(q, y)
    lo = max(min(ex.p0[1], ex.p1[1]), min(ey.p0[1], ey.p1[1]))
    hi = min(max(ex.p0[1], ex.p1[1]), max(ey.p0[1], ey.p1[1]))
    if hi - lo < 1e-9:
        return None
    ymid = 0.5 * (lo + hi)

    def param_at(seg: Segment, yv: float) -> float:
        return (yv - seg.p0[1]) / (seg.p1[1] - seg.p0[1])

    u = param_at(ex, ymid)
    v = param_at(ey, ymid)
    if ex.point_at(u)[0] < ey.point_at(v)[0] - 1e-9:
        return (u, v)
    return None


def build_arrows_diagram(surface: Surface, tol: float = 1e-9) -> TransitionDiagram:
    """Which ordered letter pairs occur consecutively for sector directions."""
    n = surface.n
    letters = [letter_for_index(k) for k in range(1, n + 1)]
    arrows = []
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if _arrow_region(surface, x, y, tol) or _horizontal_arrow(surface, x, y):
                arrows.append(Arrow(letter_for_index(x), letter_for_index(y)))
    arrows.sort(key=lambda a: (a.source, a.target))
    return TransitionDiagram(stage="arrows", nodes=tuple(letters), arrows=tuple(arrows))


# ---- stage 2: augmented -----------------------------------------------------


def _region_samples(region: list[tuple[float, float]], count: int = 5) -> list[tuple[float, float]]:
    c = polygon_centroid(region)
    pts = [c]
    for vert in region[: count - 1]:
        pts.append(vlerp(c, vert, 0.5))
    return pts


def _aux_sequence_for_chord(surface: Surface, polygon: str, a, b) -> tuple[str, ...]:
    seg = Segment(a, b)
    d = seg.direction()
    hits = []
    for e in surface.aux_for(polygon):
        hit = ray_segment_hit(a, d, e.seg, eps=1e-9)
        if hit is not None and 1e-9 < hit.t < 1.0 - 1e-9 and 1e-9 < hit.u < 1.0 - 1e-9:
            hits.append((hit.t, e.label))
    hits.sort()
    return tuple(label for _, label in hits)


def _aux_label(surface: Surface, x: int, y: int, tol: float) -> tuple[str, ...]:
    """Ordered auxiliary edges crossed between consecutive hits of x then y."""
    q = surface.entering_polygon(x)
    ex = surface.edge_seg(q, x)
    ey = surface.edge_seg(q, y)
    region = _arrow_region(surface, x, y, tol)
    reps = _region_samples(region) if region else []
    if not reps:
        hz = _horizontal_arrow(surface, x, y)
        if hz is None:
            raise InvalidPath(f"no arrow {letter_for_index(x)} -> {letter_for_index(y)}")
        reps = [hz]
    seqs = {
        _aux_sequence_for_chord(surface, q, ex.point_at(u), ey.point_at(v))
        for u, v in reps
    }
    if len(seqs) != 1:
        raise AssertionError(
            f"auxiliary crossings differ across the {letter_for_index(x)}->{letter_for_index(y)} region: {seqs}"
        )
    return seqs.pop()


def build_augmented_diagram(surface: Surface, tol: float = 1e-9) -> tuple[TransitionDiagram, dict]:
    base = build_arrows_diagram(surface, tol)
    aux_of: dict[tuple[str, str], tuple[str, ...]] = {}
    arrows = []
    for a in base.arrows:
        seq = _aux_label(surface, index_for_letter(a.source), index_for_letter(a.target), tol)
        aux_of[(a.source, a.target)] = seq
        arrows.append(Arrow(a.source, a.target, ",".join(seq) if seq else None))
    diagram = TransitionDiagram(stage="augmented", nodes=base.nodes, arrows=tuple(arrows))
    return diagram, aux_of


# ---- stages 3 and 4: dual and primed ---------------------------------------


def _node_letters(surface: Surface) -> frozenset[str]:
    return frozenset(letter_for_index(k) for k in surface.node_indices)


def _enumerate_dual_transitions(
    surface: Surface, aux_of: dict[tuple[str, str], tuple[str, ...]]
) -> set[tuple[str, str, str]]:
    """All (from, to, letters-between) triples linking consecutive dual nodes.

    Dual nodes are auxiliary edges plus the two direction-fixed original
    letters. Walks that fail to reach a dual node within a generous bound
    would mean a node-free cycle, which the geometry rules out.
    """
    nodes = _node_letters(surface)
    succ: dict[str, list[str]] = {}
    for (x, y) in aux_of:
        succ.setdefault(x, []).append(y)
    found: set[tuple[str, str, str]] = set()
    bound = 4 * surface.n

    def walk_from_letter(d0: str, letter: str, acc: str, depth: int) -> None:
        if depth > bound:
            raise AssertionError("walk exceeded bound; node-free cycle in diagrams")
        for y in succ.get(letter, ()):
            aux = aux_of[(letter, y)]
            if aux:
                found.add((d0, aux[0], acc))
            elif y in nodes:
                found.add((d0, y, acc))
            else:
                walk_from_letter(d0, y, acc + y, depth + 1)

    # transitions starting at an auxiliary token
    for (x, y), aux in aux_of.items():
        for i, name in enumerate(aux):
            if i + 1 < len(aux):
                found.add((name, aux[i + 1], ""))
            elif y in nodes:
                found.add((name, y, ""))
            else:
                walk_from_letter(name, y, y, 0)
    # transitions starting at a node letter
    for letter in nodes:
        walk_from_letter(letter, letter, "", 0)
    return found


def _sector_sample_plan(surface: Surface, samples: int, seed: int):
    rng = random.Random(seed)
    n = surface.n
    for _ in range(samples):
        theta = surface.sector * (0.06 + 0.88 * rng.random())
        k = rng.randrange(1, n + 1)
        u = 0.05 + 0.9 * rng.random()
        yield k, u, theta


def _trajectory_events(surface: Surface, traj: Trajectory) -> list[tuple[float, str, str]]:
    """Time-ordered (time, kind, name) stream of original/aux/primed crossings."""
    events: list[tuple[float, str, str]] = []
    for i, c in enumerate(traj.crossings):
        events.append((float(i), "orig", c.letter))
    for i, polygon, a, b in _chart_segments(surface, traj):
        seg = Segment(a, b)
        d = seg.direction()
        for e in surface.aux_for(polygon):
            hit = ray_segment_hit(a, d, e.seg, eps=1e-9)
            if hit is not None and 1e-9 < hit.t < 1.0 - 1e-9 and 1e-9 < hit.u < 1.0 - 1e-9:
                events.append((i + hit.t, "aux", e.label))
        for e in surface.primed_for(polygon):
            hit = ray_segment_hit(a, d, e.seg, eps=1e-9)
            if hit is not None and 1e-9 < hit.t < 1.0 - 1e-9 and 1e-9 < hit.u < 1.0 - 1e-9:
                events.append((i + hit.t, "primed", e.label.rstrip("'")))
    events.sort(key=lambda ev: ev[0])
    return events


def _scan_sampled_transitions(
    surface: Surface,
    aux_of: dict[tuple[str, str], tuple[str, ...]],
    samples: int,
    crossings: int,
    seed: int,
) -> dict[tuple[str, str, str], str]:
    """Observed primed content per dual transition, from traced trajectories.

    Also cross-checks the sampled aux crossings between consecutive original
    letters against the clipping-derived augmented labels.
    """
    nodes = _node_letters(surface)
    observed: dict[tuple[str, str, str], str] = {}
    for k, u, theta in _sector_sample_plan(surface, samples, seed):
        try:
            traj = trace_from_edge(surface, k, u, theta, max_crossings=crossings)
        except CornerHit:
            continue
        events = _trajectory_events(surface, traj)

        origs = [(t, name) for t, kind, name in events if kind == "orig"]
        for (t1, x), (t2, y) in zip(origs, origs[1:]):
            between = tuple(
                name
                for t, kind, name in events
                if kind == "aux" and t1 + 1e-9 < t < t2 - 1e-9
            )
            if (x, y) not in aux_of:
                raise AssertionError(f"sampled letter pair {x}->{y} has no arrow")
            if between != aux_of[(x, y)]:
                raise AssertionError(
                    f"sampled aux crossings {between} for {x}->{y} differ from region label {aux_of[(x, y)]}"
                )

        duals = [
            (t, name)
            for t, kind, name in events
            if kind == "aux" or (kind == "orig" and name in nodes)
        ]
        for (t1, d1), (t2, d2) in zip(duals, duals[1:]):
            originals = "".join(
                name for t, kind, name in events if kind == "orig" and t1 + 1e-9 < t < t2 - 1e-9
            )
            primeds = "".join(
                name for t, kind, name in events if kind == "primed" and t1 + 1e-9 < t < t2 - 1e-9
            )
            key = (d1, d2, originals)
            if key in observed and observed[key] != primeds:
                raise AssertionError(
                    f"primed content of dual transition {key} is not well defined: "
                    f"{observed[key]!r} vs {primeds!r}"
                )
            observed[key] = primeds
    return observed


@dataclass
class DiagramPipeline:
    """The four transition diagrams plus the lookup tables used to walk them."""

    n: int
    surface: Surface
    stages: dict[str, TransitionDiagram]
    aux_of: dict[tuple[str, str], tuple[str, ...]]
    transitions: dict[tuple[str, str, str], str]  # (from, to, originals) -> primed letters
    node_letters: frozenset[str]

    def stage(self, name: str) -> TransitionDiagram:
        return self.stages[name]


def build_pipeline_diagrams(
    surface: Surface,
    tol: float = 1e-9,
    samples: int = 80,
    crossings: int = 400,
    seed: int = 0,
) -> DiagramPipeline:
    """Build arrows, augmented, dual, and primed diagrams for one surface.

    Dual arrows are enumerated combinatorially from the augmented diagram;
    their primed labels are read off traced sample trajectories, and the two
    views must agree exactly (every enumerated transition realized, every
    sampled transition predicted).
    """
    augmented, aux_of = build_augmented_diagram(surface, tol)
    arrows_diagram = build_arrows_diagram(surface, tol)
    nodes = _node_letters(surface)

    # the two direction-fixed letters must occur in a unique reversible context
    for letter in nodes:
        ins = [a.source for a in arrows_diagram.arrows if a.target == letter]
        outs = [a.target for a in arrows_diagram.arrows if a.source == letter]
        if len(ins) != 1 or len(outs) != 1 or ins != outs:
            raise AssertionError(f"direction-fixed letter {letter} lacks a unique sandwich context")

    predicted = _enumerate_dual_transitions(surface, aux_of)
    observed = _scan_sampled_transitions(surface, aux_of, samples, crossings, seed)

    extra = set(observed) - predicted
    if extra:
        raise AssertionError(f"sampled dual transitions not predicted by the chain graph: {sorted(extra)}")
    missing = predicted - set(observed)
    if missing:
        raise AssertionError(
            f"dual transitions never realized by {samples} sample trajectories: {sorted(missing)}; increase samples"
        )

    aux_names = sorted({name for seq in aux_of.values() for name in seq})
    dual_nodes = tuple(sorted(nodes) + aux_names)
    dual_arrows = []
    primed_arrows = []
    for (d1, d2, originals) in sorted(predicted):
        primeds = observed[(d1, d2, originals)]
        dual_arrows.append(Arrow(d1, d2, originals or None))
        primed_arrows.append(Arrow(d1, d2, "".join(ch + "'" for ch in primeds) or None))

    stages = {
        "arrows": arrows_diagram,
        "augmented": augmented,
        "dual": TransitionDiagram("dual", dual_nodes, tuple(dual_arrows)),
        "primed": TransitionDiagram("primed", dual_nodes, tuple(primed_arrows)),
    }
    return DiagramPipeline(
        n=surface.n,
        surface=surface,
        stages=stages,
        aux_of=aux_of,
        transitions=observed,
        node_letters=nodes,
    )


# ---- walking words through the diagrams ------------------------------------


def _token_stream(pipeline: DiagramPipeline, word: str) -> list[tuple[str, str, int]]:
    """(kind, name, anchor) tokens of the word's unique augmented walk."""
    for ch in word:
        index_for_letter(ch)  # validates the alphabet
    if not word:
        return []
    stream: list[tuple[str, str, int]] = [("orig", word[0], 0)]
    for i in range(len(word) - 1):
        pair = (word[i], word[i + 1])
        if pair not in pipeline.aux_of:
            raise InvalidPath(f"letter pair {pair[0]}->{pair[1]} is not an arrow")
        for name in pipeline.aux_of[pair]:
            stream.append(("aux", name, i))
        stream.append(("orig", word[i + 1], i + 1))
    return stream


def _dual_elements(pipeline: DiagramPipeline, stream) -> list[tuple[int, str, int]]:
    """(stream position, node name, anchor) for the dual nodes in a stream."""
    out = []
    for pos, (kind, name, anchor) in enumerate(stream):
        if kind == "aux" or (kind == "orig" and name in pipeline.node_letters):
            out.append((pos, name, anchor))
    return out


def _transition_label(pipeline: DiagramPipeline, stream, p1: int, p2: int, d1: str, d2: str) -> str:
    originals = "".join(
        name for kind, name, _ in stream[p1 + 1 : p2] if kind == "orig"
    )
    key = (d1, d2, originals)
    if key not in pipeline.transitions:
        raise InvalidPath(f"no dual transition {d1}->{d2} via {originals!r}")
    return pipeline.transitions[key]


def derive_via_diagrams(pipeline: DiagramPipeline, word: str, cyclic: bool = False) -> str:
    """Derived word of a diagram walk, read off the primed labels.

    Window semantics match ksl_window: the first and last letters carry no
    verdict. Cyclic words are walked on a tripled copy and one full period of
    transitions is collected.
    """
    if cyclic:
        return _derive_cyclic(pipeline, word)
    stream = _token_stream(pipeline, word)
    duals = _dual_elements(pipeline, stream)
    out: list[str] = []
    for i, (pos, name, anchor) in enumerate(duals):
        if stream[pos][0] == "orig" and 0 < anchor < len(word) - 1:
            out.append(name)
        if i + 1 < len(duals):
            pos2, name2, _ = duals[i + 1]
            out.append(_transition_label(pipeline, stream, pos, pos2, name, name2))
    return "".join(out)


def _derive_cyclic(pipeline: DiagramPipeline, word: str) -> str:
    L = len(word)
    if L == 0:
        return ""
    stream = _token_stream(pipeline, word * 3)
    duals = _dual_elements(pipeline, stream)
    out: list[str] = []
    for i, (pos, name, anchor) in enumerate(duals):
        if not L <= anchor < 2 * L:
            continue
        if stream[pos][0] == "orig":
            out.append(name)
        if i + 1 >= len(duals):
            raise AssertionError("tripled walk ended before its transitions completed")
        pos2, name2, _ = duals[i + 1]
        out.append(_transition_label(pipeline, stream, pos, pos2, name, name2))
    return "".join(out)


# ---- equivalence of the two routes ------------------------------------------


@dataclass
class EquivalenceReport:
    n: int
    cycles_checked: int
    windows_checked: int
    failures: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _cyclic_walks(pipeline: DiagramPipeline, max_len: int) -> set[str]:
    """All distinct cyclic walks (as normal forms) up to the given length."""
    succ: dict[str, list[str]] = {}
    for (x, y) in pipeline.aux_of:
        succ.setdefault(x, []).append(y)
    words: set[str] = set()

    def dfs(start: str, path: list[str]) -> None:
        cur = path[-1]
        for y in succ.get(cur, ()):
            if y == start:
                words.add(cyclic_normal_form("".join(path)))
            if len(path) < max_len:
                path.append(y)
                dfs(start, path)
                path.pop()

    for start in sorted(succ):
        dfs(start, [start])
    return words


def sandwich_equivalence_check(
    pipeline: DiagramPipeline,
    max_cycle_len: int = 10,
    windows: int = 200,
    window_len: int = 30,
    seed: int = 0,
) -> EquivalenceReport:
    """Compare diagram derivation with the sandwich rule on both word types."""
    report = EquivalenceReport(n=pipeline.n, cycles_checked=0, windows_checked=0)

    for w in sorted(_cyclic_walks(pipeline, max_cycle_len)):
        expected = cyclic_normal_form(ksl_cyclic(w))
        got = cyclic_normal_form(derive_via_diagrams(pipeline, w, cyclic=True))
        report.cycles_checked += 1
        if expected != got:
            report.failures.append((f"cyclic {w}", expected, got))

    succ: dict[str, list[str]] = {}
    for (x, y) in sorted(pipeline.aux_of):
        succ.setdefault(x, []).append(y)
    rng = random.Random(seed)
    starts = sorted(succ)
    for _ in range(windows):
        cur = rng.choice(starts)
        path = [cur]
        while len(path) < window_len:
            nxt = succ.get(path[-1])
            if not nxt:
                break
            path.append(rng.choice(nxt))
        w = "".join(path)
        expected = ksl_window(w)
        got = derive_via_diagrams(pipeline, w)
        report.windows_checked += 1
        if expected != got:
            report.failures.append((f"window {w}", expected, got))
    return report
