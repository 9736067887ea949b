"""Wavefront tracking for piecewise-constant weak solutions.

States are step functions; fronts move at their chord (Rankine-Hugoniot)
speed so every configuration is a weak solution by construction. The
evolve loop advances a priority queue of pairwise collision events:

  * entropic mode re-solves each collision with the admissible local fan,
    replacing ascending jumps by staircases of rarefaction fragments that
    rise at most rarefaction_step each;
  * as_given mode merges colliding fronts into the single chord-speed
    front, preserving non-entropic jumps indefinitely. Merging is always a
    valid weak continuation for scalar convex flux, so the forced-entropic
    fallback only triggers (and is logged) if a merge cannot be formed.

Snapshots are emitted at every event time. Between events positions are
affine in time, which downstream consumers (ledgers, traces, residuals)
rely on. Snapshots taken exactly at an event carry coincident positions
with strictly increasing speeds there; ordering is strict immediately
after.
"""

from __future__ import annotations

import heapq
import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClawError,
    EventCascadeError,
    FluxRangeError,
    InvariantViolation,
)
from .fluxes import ConvexFlux, chord_slope
from .riemann import (
    ENTROPIC_SHOCK,
    EXPANSION_SHOCK,
    Rarefaction,
    Shock,
    WaveFan,
)

RAREFACTION_FRAGMENT = "rarefaction_fragment"

_TIME_TOL = 1e-12
_SPACE_TOL = 1e-12
_MAX_SIMULTANEOUS = 64


@dataclass(frozen=True)
class FrontState:
    """Snapshot of a tracked solution: m fronts separating m + 1 states."""

    time: float
    positions: np.ndarray
    states: np.ndarray
    speeds: np.ndarray
    kinds: tuple[str, ...]
    front_ids: np.ndarray

    @property
    def n_fronts(self) -> int:
        return len(self.positions)

    def value_at(self, x: float | np.ndarray) -> float | np.ndarray:
        """Left-limit evaluation of the step function."""
        idx = np.searchsorted(self.positions, np.asarray(x, dtype=float), side="left")
        out = self.states[idx]
        return float(out) if np.ndim(x) == 0 else out

    def to_step(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.positions), np.array(self.states)


@dataclass(frozen=True)
class EventRecord:
    time: float
    x: float
    kind: str  # "collision" | "emission" | "uncover"
    forced: bool = False


@dataclass
class Trajectory:
    """Ordered snapshots at event times plus the final time."""

    flux: ConvexFlux
    snapshots: list[FrontState]
    t_end: float
    mode: str
    rarefaction_step: float
    events: list[EventRecord] = field(default_factory=list)
    forced_events: list[EventRecord] = field(default_factory=list)

    @property
    def t_start(self) -> float:
        return self.snapshots[0].time

    def event_times(self) -> list[float]:
        return [e.time for e in self.events]

    def state_at(self, t: float) -> FrontState:
        """Snapshot advanced to time t (last event snapshot, positions moved)."""
        if t < self.t_start - _TIME_TOL or t > self.t_end + _TIME_TOL:
            raise FluxRangeError(
                f"t={t} outside the trajectory span "
                f"[{self.t_start}, {self.t_end}]"
            )
        times = [s.time for s in self.snapshots]
        i = bisect_right(times, t) - 1
        if i < 0:
            i = 0
        base = self.snapshots[i]
        dt = t - base.time
        return FrontState(
            time=t,
            positions=base.positions + dt * base.speeds,
            states=base.states,
            speeds=base.speeds,
            kinds=base.kinds,
            front_ids=base.front_ids,
        )

    def sample(self, t: float, xs: np.ndarray) -> np.ndarray:
        return np.asarray(self.state_at(t).value_at(np.asarray(xs, dtype=float)))

    def segments(self):
        """Yield (t_a, t_b, snapshot) with affine front motion on [t_a, t_b]."""
        snaps = self.snapshots
        for i, snap in enumerate(snaps):
            t_a = snap.time
            t_b = snaps[i + 1].time if i + 1 < len(snaps) else self.t_end
            if t_b > t_a + _TIME_TOL or (i + 1 == len(snaps) and t_b > t_a):
                yield (t_a, min(t_b, self.t_end), snap)

    def support_bbox(self) -> tuple[float, float]:
        lo = math.inf
        hi = -math.inf
        for t_a, t_b, snap in self.segments():
            if snap.n_fronts == 0:
                continue
            for t in (t_a, t_b):
                dt = t - snap.time
                lo = min(lo, float(snap.positions[0] + dt * snap.speeds[0]))
                hi = max(hi, float(snap.positions[-1] + dt * snap.speeds[-1]))
        if not np.isfinite(lo):
            return (0.0, 0.0)
        return (lo, hi)


# ---------------------------------------------------------------------------
# construction helpers


def _label(u_l: float, u_r: float) -> str:
    return ENTROPIC_SHOCK if u_l > u_r else EXPANSION_SHOCK


def front_state(
    flux: ConvexFlux,
    time: float,
    positions,
    states,
    kinds=None,
    front_ids=None,
) -> FrontState:
    """Build a validated snapshot; speeds are computed from chords."""
    pos = np.asarray(positions, dtype=float)
    vals = np.asarray(states, dtype=float)
    if len(vals) != len(pos) + 1:
        raise InvariantViolation(
            f"{len(pos)} fronts need {len(pos) + 1} states, got {len(vals)}"
        )
    if np.any(np.diff(pos) < 0.0):
        raise InvariantViolation(f"front positions must be non-decreasing: {pos}")
    if np.any(np.abs(vals) > flux.domain_radius + 1e-12):
        raise FluxRangeError(
            f"states exceed the band [-{flux.domain_radius}, {flux.domain_radius}]"
        )
    for i in range(len(pos)):
        if vals[i] == vals[i + 1]:
            raise InvariantViolation(
                f"front {i} at x={pos[i]} separates equal states {vals[i]}"
            )
    speeds = np.array(
        [chord_slope(flux, float(vals[i]), float(vals[i + 1])) for i in range(len(pos))]
    )
    # Where positions coincide (event instants) the fronts must fan out.
    same = np.where(np.diff(pos) <= 0.0)[0]
    for i in same:
        if speeds[i + 1] <= speeds[i] + 0.0:
            raise InvariantViolation(
                f"coincident fronts at x={pos[i]} do not fan out: speeds "
                f"{speeds[i]}, {speeds[i + 1]}"
            )
    if kinds is None:
        kinds = tuple(_label(float(vals[i]), float(vals[i + 1])) for i in range(len(pos)))
    else:
        kinds = tuple(kinds)
    if front_ids is None:
        front_ids = np.arange(len(pos), dtype=int)
    else:
        front_ids = np.asarray(front_ids, dtype=int)
    return FrontState(float(time), pos, vals, speeds, kinds, front_ids)


def state_from_data(flux: ConvexFlux, xs, us, time: float = 0.0) -> FrontState:
    """Snapshot straight from step-function data, dropping zero jumps."""
    xs = list(map(float, xs))
    us = list(map(float, us))
    if len(us) != len(xs) + 1:
        raise InvariantViolation(
            f"{len(xs)} breakpoints need {len(xs) + 1} values, got {len(us)}"
        )
    pos: list[float] = []
    vals: list[float] = [us[0]]
    for x, u in zip(xs, us[1:]):
        if u == vals[-1]:
            continue
        pos.append(x)
        vals.append(u)
    return front_state(flux, time, pos, vals)


def resolve_jump(
    flux: ConvexFlux, u_l: float, u_r: float, rarefaction_step: float
) -> tuple[list[float], list[str]]:
    """Entropic local resolution of the jump (u_l, u_r).

    Returns the state chain [u_l, ..., u_r] and one kind per front:
    a single entropic shock when descending, a staircase of fragments
    rising at most rarefaction_step each when ascending.
    """
    if u_l == u_r:
        return ([u_l], [])
    if u_l > u_r:
        return ([u_l, u_r], [ENTROPIC_SHOCK])
    k = max(1, int(math.ceil((u_r - u_l) / rarefaction_step - 1e-12)))
    chain = list(np.linspace(u_l, u_r, k + 1))
    return (chain, [RAREFACTION_FRAGMENT] * k)


def from_fan(fan: WaveFan, t: float, rarefaction_step: float | None = None) -> FrontState:
    """Discretize a fan at time t > 0 into a tracked snapshot.

    Shocks keep their speed; each rarefaction becomes a staircase whose
    fragments sit at their own chord speeds times t.
    """
    if t <= 0.0:
        raise FluxRangeError(f"fan discretization needs t > 0, got {t}")
    flux = fan.flux
    if rarefaction_step is None:
        rarefaction_step = 0.01 * flux.domain_radius
    pos: list[float] = []
    vals: list[float] = [fan.left_state]
    kinds: list[str] = []
    for w in fan.waves:
        if isinstance(w, Shock):
            pos.append(w.sigma * t)
            vals.append(w.u_plus)
            kinds.append(w.kind)
        else:
            chain, _ = resolve_jump(flux, w.u_lo, w.u_hi, rarefaction_step)
            for a, b in zip(chain[:-1], chain[1:]):
                pos.append(chord_slope(flux, a, b) * t)
                vals.append(b)
                kinds.append(RAREFACTION_FRAGMENT)
    return front_state(flux, t, pos, vals, kinds)


def entropic_resolve_state(
    flux: ConvexFlux, state: FrontState, rarefaction_step: float
) -> FrontState:
    """Re-solve every front of a snapshot with its admissible local fan.

    Descending jumps stay single shocks; ascending jumps become fragment
    staircases emitted at the front's position. The step function is
    unchanged as an L1 object; only the front decomposition differs.
    """
    pos: list[float] = []
    vals: list[float] = [float(state.states[0])]
    kinds: list[str] = []
    for i in range(state.n_fronts):
        chain, ks = resolve_jump(
            flux, float(state.states[i]), float(state.states[i + 1]), rarefaction_step
        )
        pos.extend([float(state.positions[i])] * (len(chain) - 1))
        vals.extend(chain[1:])
        kinds.extend(ks)
    return front_state(flux, state.time, pos, vals, kinds)


def mass(state: FrontState) -> float:
    """Integral of the step function; requires compactly supported data."""
    vals = state.states
    if state.n_fronts == 0:
        if vals[0] != 0.0:
            raise InvariantViolation("mass of a nonzero constant state diverges")
        return 0.0
    if vals[0] != 0.0 or vals[-1] != 0.0:
        raise InvariantViolation(
            f"mass needs zero tail states, got {vals[0]}, {vals[-1]}"
        )
    widths = np.diff(state.positions)
    return float(np.dot(vals[1:-1], widths))


def linf(state: FrontState) -> float:
    return float(np.max(np.abs(state.states)))


def l1_between_states(a: FrontState, b: FrontState) -> float:
    """Exact L1 distance between two step functions with matching tails."""
    if a.states[0] != b.states[0] or a.states[-1] != b.states[-1]:
        raise InvariantViolation("L1 distance needs matching tail states")
    cuts = np.unique(np.concatenate([a.positions, b.positions]))
    if cuts.size == 0:
        return 0.0
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    widths = np.diff(cuts)
    total = float(
        np.dot(np.abs(np.asarray(a.value_at(mids)) - np.asarray(b.value_at(mids))), widths)
    )
    return total


# ---------------------------------------------------------------------------
# the event loop


class _Tracker:
    def __init__(self, flux: ConvexFlux, snap: FrontState, mode: str, step: float):
        self.flux = flux
        self.mode = mode
        self.step = step
        self.t = snap.time
        self.pos = list(map(float, snap.positions))
        self.vals = list(map(float, snap.states))
        self.kinds = list(snap.kinds)
        self.speeds = list(map(float, snap.speeds))
        self.ids = list(map(int, snap.front_ids))
        self._next_id = max(self.ids, default=-1) + 1
        self._counter = itertools.count()
        self.heap: list[tuple] = []
        self.snapshots: list[FrontState] = []
        self.events: list[EventRecord] = []
        self.forced: list[EventRecord] = []

    def new_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i

    def snapshot(self) -> FrontState:
        return FrontState(
            time=self.t,
            positions=np.array(self.pos),
            states=np.array(self.vals),
            speeds=np.array(self.speeds),
            kinds=tuple(self.kinds),
            front_ids=np.array(self.ids, dtype=int),
        )

    def advance_to(self, t: float) -> None:
        dt = t - self.t
        if dt < -_TIME_TOL:
            raise InvariantViolation(f"time regression {self.t} -> {t}")
        if dt != 0.0:
            self.pos = [x + s * dt for x, s in zip(self.pos, self.speeds)]
        self.t = t

    def push_pair(self, i: int, t_stop: float) -> None:
        if i < 0 or i + 1 >= len(self.pos):
            return
        rel = self.speeds[i] - self.speeds[i + 1]
        if rel <= 1e-14:
            return
        gap = self.pos[i + 1] - self.pos[i]
        dt = max(gap, 0.0) / rel
        t_col = self.t + dt
        if t_col > t_stop + _TIME_TOL:
            return
        x_col = self.pos[i] + self.speeds[i] * dt
        heapq.heappush(
            self.heap,
            (t_col, x_col, next(self._counter), self.ids[i], self.ids[i + 1]),
        )

    def push_all_pairs(self, t_stop: float) -> None:
        for i in range(len(self.pos) - 1):
            self.push_pair(i, t_stop)

    def _pair_indices(self, id_l: int, id_r: int) -> tuple[int, int] | None:
        try:
            i = self.ids.index(id_l)
        except ValueError:
            return None
        if i + 1 >= len(self.ids) or self.ids[i + 1] != id_r:
            return None
        return (i, i + 1)

    def replace_group(
        self, p: int, q: int, x: float, chain: list[float], kinds: list[str]
    ) -> tuple[int, int]:
        """Replace fronts p..q (inclusive) by the chain emitted at x."""
        k = len(chain) - 1
        new_pos = [x] * k
        new_speeds = [
            chord_slope(self.flux, chain[j], chain[j + 1]) for j in range(k)
        ]
        new_ids = [self.new_id() for _ in range(k)]
        self.pos[p : q + 1] = new_pos
        self.speeds[p : q + 1] = new_speeds
        self.kinds[p : q + 1] = kinds
        self.ids[p : q + 1] = new_ids
        self.vals[p : q + 2] = chain
        return (p, p + k - 1)

    def run(self, t_end: float, uncover_events: list | None = None) -> None:
        """Drive the queue to t_end. uncover_events inject boundary fronts."""
        uncovers = sorted(uncover_events or [], key=lambda e: e[0])
        u_idx = 0
        self.push_all_pairs(t_end)
        while True:
            next_col = self.heap[0][0] if self.heap else math.inf
            next_unc = uncovers[u_idx][0] if u_idx < len(uncovers) else math.inf
            t_next = min(next_col, next_unc)
            if t_next > t_end + _TIME_TOL or not np.isfinite(t_next):
                break
            if next_unc <= next_col:
                t, x, side, new_value = uncovers[u_idx]
                u_idx += 1
                self.advance_to(t)
                self._apply_uncover(x, side, new_value, t_end)
                continue
            entry = heapq.heappop(self.heap)
            t, x = entry[0], entry[1]
            pair = self._pair_indices(entry[3], entry[4])
            if pair is None:
                continue
            group = [(entry, pair)]
            stash = []
            while self.heap and self.heap[0][0] <= t + _TIME_TOL:
                e2 = heapq.heappop(self.heap)
                p2 = self._pair_indices(e2[3], e2[4])
                if p2 is None:
                    continue
                if abs(e2[1] - x) <= 1e-9:
                    group.append((e2, p2))
                else:
                    stash.append(e2)
            self.advance_to(t)
            lo = min(p[0] for _, p in group)
            hi = max(p[1] for _, p in group)
            # Guard against accidental grouping of distinct collisions: every
            # front in the merged span must actually sit at the event point.
            coincident = all(
                abs(self.pos[i] - x) <= 1e-8 * max(1.0, abs(x))
                for i in range(lo, hi + 1)
            )
            if not coincident:
                lo, hi = pair
                for e2, _ in group[1:]:
                    heapq.heappush(self.heap, e2)
            for e2 in stash:
                heapq.heappush(self.heap, e2)
            if hi - lo + 1 > _MAX_SIMULTANEOUS:
                raise EventCascadeError(
                    f"{hi - lo + 1} fronts collide at t={t}, x={x}; "
                    f"cap is {_MAX_SIMULTANEOUS}"
                )
            self._apply_collision(lo, hi, x, t_end)
        self.advance_to(t_end)
        self.snapshots.append(self.snapshot())

    def _apply_collision(self, p: int, q: int, x: float, t_end: float) -> None:
        u_left = self.vals[p]
        u_right = self.vals[q + 1]
        forced = False
        if self.mode == "entropic":
            chain, kinds = resolve_jump(self.flux, u_left, u_right, self.step)
        else:
            try:
                if u_left == u_right:
                    chain, kinds = ([u_left], [])
                else:
                    chain = [u_left, u_right]
                    kinds = [_label(u_left, u_right)]
                    chord_slope(self.flux, u_left, u_right)
            except ClawError:
                chain, kinds = resolve_jump(self.flux, u_left, u_right, self.step)
                forced = True
        first, last = self.replace_group(p, q, x, chain, kinds)
        rec = EventRecord(self.t, x, "collision", forced)
        self.events.append(rec)
        if forced:
            self.forced.append(rec)
        self.snapshots.append(self.snapshot())
        for i in range(first - 1, last + 1):
            self.push_pair(i, t_end)

    def _apply_uncover(self, x: float, side: str, new_value: float, t_end: float) -> None:
        """Inject boundary data at the moving edge of a trapezoid re-solve."""
        if side == "left":
            old = self.vals[0]
            chain, kinds = resolve_jump(self.flux, new_value, old, self.step)
            k = len(chain) - 1
            self.pos[0:0] = [x] * k
            self.speeds[0:0] = [
                chord_slope(self.flux, chain[j], chain[j + 1]) for j in range(k)
            ]
            self.kinds[0:0] = kinds
            self.ids[0:0] = [self.new_id() for _ in range(k)]
            self.vals[0:1] = chain
            touched = range(-1, k + 1)
        else:
            old = self.vals[-1]
            chain, kinds = resolve_jump(self.flux, old, new_value, self.step)
            k = len(chain) - 1
            base = len(self.pos)
            self.pos.extend([x] * k)
            self.speeds.extend(
                chord_slope(self.flux, chain[j], chain[j + 1]) for j in range(k)
            )
            self.kinds.extend(kinds)
            self.ids.extend(self.new_id() for _ in range(k))
            self.vals[-1:] = chain
            touched = range(base - 1, base + k)
        self.events.append(EventRecord(self.t, x, "uncover"))
        self.snapshots.append(self.snapshot())
        for i in touched:
            self.push_pair(i, t_end)


def evolve(
    initial: FrontState,
    flux: ConvexFlux,
    t_end: float,
    mode: str = "entropic",
    rarefaction_step: float | None = None,
) -> Trajectory:
    """Track the solution from `initial` up to t_end.

    entropic mode first re-solves every ascending jump of the initial
    snapshot into a fragment staircase, then handles each collision with
    the admissible local fan. as_given mode keeps the data verbatim and
    merges collisions into single chord-speed fronts.
    """
    if mode not in ("entropic", "as_given"):
        raise FluxRangeError(f"mode must be 'entropic' or 'as_given', got {mode!r}")
    if t_end < initial.time:
        raise FluxRangeError(
            f"t_end={t_end} precedes the initial time {initial.time}"
        )
    if rarefaction_step is None:
        rarefaction_step = 0.01 * flux.domain_radius
    if rarefaction_step <= 0.0:
        raise FluxRangeError(f"rarefaction_step must be positive: {rarefaction_step}")
    start = initial
    if mode == "entropic":
        start = entropic_resolve_state(flux, initial, rarefaction_step)
    tracker = _Tracker(flux, start, mode, rarefaction_step)
    tracker.snapshots.append(tracker.snapshot())
    tracker.run(t_end)
    return Trajectory(
        flux=flux,
        snapshots=tracker.snapshots,
        t_end=float(t_end),
        mode=mode,
        rarefaction_step=rarefaction_step,
        events=tracker.events,
        forced_events=tracker.forced,
    )
