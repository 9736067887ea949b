"""Weak-form residual battery.

A candidate solution u is audited against the distributional identity

    int_0^T int u d_t psi + f(u) d_x psi dx dt + int u(., t0) psi(., t0) dx = 0

for a fixed battery of smooth compactly supported bumps psi. The battery
is generated deterministically inside a bounding box (default 20 bumps:
five x-centers, two t-bands, two width scales), half of them reaching
down to the initial time so the data term is exercised.

For tracked trajectories the x-integrals collapse to sums over fronts:
with psi = X(x) T(t) separable,

    int u d_t psi dx   = -T'(t) sum_j [u]_j  XA(x_j),
    int f(u) d_x psi dx = -T(t)  sum_j [f]_j X(x_j),

where XA is the antiderivative of X and [.]_j right-minus-left jumps.
Only Gauss panels in t remain, so residuals of exact weak solutions sit
at quadrature noise (< 1e-9). Fans are integrated by panelled 2D Gauss
quadrature split at the wave supports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fluxes import ConvexFlux
from .quadrature import leggauss
from .riemann import WaveFan, evaluate_fan, fan_breakpoints

# Tabulated antiderivative of the standard bump B(s) = exp(1 - 1/(1 - s^2)).
_GRID = np.linspace(-1.0, 1.0, 160001)


def _bump(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    out = np.zeros_like(s)
    sq = np.clip(1.0 - s[inside] ** 2, 1e-300, None)
    out[inside] = np.exp(1.0 - 1.0 / sq)
    return out


def _dbump(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    out = np.zeros_like(s)
    sq = np.clip(1.0 - s[inside] ** 2, 1e-300, None)
    out[inside] = np.exp(1.0 - 1.0 / sq) * (-2.0 * s[inside] / sq**2)
    return out


_BUMP_VALS = _bump(_GRID)
_BUMP_ANTI = np.concatenate(
    (
        [0.0],
        np.cumsum(0.5 * (_BUMP_VALS[:-1] + _BUMP_VALS[1:]) * np.diff(_GRID)),
    )
)
BUMP_MASS = float(_BUMP_ANTI[-1])


def _bump_anti(s: np.ndarray) -> np.ndarray:
    """Antiderivative of B from -1, clamped to [0, BUMP_MASS] outside."""
    return np.interp(np.asarray(s, dtype=float), _GRID, _BUMP_ANTI)


@dataclass(frozen=True)
class BumpTest:
    """Separable test function psi(x, t) = B((x-x0)/ax) B((t-t0)/bt)."""

    x0: float
    t0: float
    ax: float
    bt: float

    def x_part(self, x) -> np.ndarray:
        return _bump((np.asarray(x, dtype=float) - self.x0) / self.ax)

    def x_anti(self, x) -> np.ndarray:
        return self.ax * _bump_anti((np.asarray(x, dtype=float) - self.x0) / self.ax)

    def t_part(self, t) -> np.ndarray:
        return _bump((np.asarray(t, dtype=float) - self.t0) / self.bt)

    def dt_part(self, t) -> np.ndarray:
        return _dbump((np.asarray(t, dtype=float) - self.t0) / self.bt) / self.bt

    def value(self, x, t) -> np.ndarray:
        return self.x_part(x) * self.t_part(t)

    def dx(self, x, t) -> np.ndarray:
        return (
            _dbump((np.asarray(x, dtype=float) - self.x0) / self.ax)
            / self.ax
            * self.t_part(t)
        )

    def dt(self, x, t) -> np.ndarray:
        return self.x_part(x) * self.dt_part(t)

    @property
    def t_support(self) -> tuple[float, float]:
        return (self.t0 - self.bt, self.t0 + self.bt)

    @property
    def x_support(self) -> tuple[float, float]:
        return (self.x0 - self.ax, self.x0 + self.ax)


def bump_battery(
    x_lo: float, x_hi: float, t_lo: float, t_hi: float
) -> list[BumpTest]:
    """Twenty deterministic bumps covering the box.

    Five x-centers by two scale choices, alternating between an interior
    t-band and one straddling t_lo so the initial-data term is active.
    Every bump vanishes at t_hi (the weak identity carries no terminal
    term, so test functions must die out before the final time).
    """
    bumps: list[BumpTest] = []
    width = x_hi - x_lo
    height = t_hi - t_lo
    centers = np.linspace(x_lo + 0.15 * width, x_hi - 0.15 * width, 5)
    for scale, ax_frac in ((0, 0.45), (1, 0.25)):
        for j, x0 in enumerate(centers):
            ax = ax_frac * width
            t0_frac = 0.4 + 0.1 * ((j + scale) % 3)
            bumps.append(
                BumpTest(
                    x0=float(x0),
                    t0=t_lo + t0_frac * height,
                    ax=ax,
                    bt=min(0.3, 0.95 - t0_frac) * height,
                )
            )
            bumps.append(
                BumpTest(
                    x0=float(x0),
                    t0=t_lo + 0.1 * height,
                    ax=ax,
                    bt=0.35 * height,
                )
            )
    return bumps


def default_battery_for(traj) -> list[BumpTest]:
    lo, hi = traj.support_bbox()
    pad = max(1.0, 0.2 * (hi - lo))
    return bump_battery(lo - pad, hi + pad, traj.t_start, traj.t_end)


def trajectory_weak_residual(traj, psi: BumpTest, n_gauss: int = 14) -> float:
    """Residual of a tracked trajectory against one bump."""
    flux = traj.flux
    nodes, weights = leggauss(n_gauss)
    total = 0.0
    t_lo_psi, t_hi_psi = psi.t_support

    def time_integrand(ts: np.ndarray, snap) -> np.ndarray:
        out = np.zeros_like(ts)
        jumps_u = np.diff(snap.states)
        jumps_f = np.diff(np.asarray(flux.f(snap.states), dtype=float))
        for k, t in enumerate(ts):
            xj = snap.positions + (t - snap.time) * snap.speeds
            term_t = -float(psi.dt_part(t)) * float(np.dot(jumps_u, psi.x_anti(xj)))
            term_x = -float(psi.t_part(t)) * float(np.dot(jumps_f, psi.x_part(xj)))
            out[k] = term_t + term_x
        return out

    for t_a, t_b, snap in traj.segments():
        lo = max(t_a, t_lo_psi, traj.t_start)
        hi = min(t_b, t_hi_psi)
        if hi <= lo or snap.n_fronts == 0:
            continue
        n_panels = max(4, int(np.ceil((hi - lo) / (psi.bt / 12.0))))
        edges = np.linspace(lo, hi, n_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (a + b)
            half = 0.5 * (b - a)
            ts = mid + half * nodes
            total += half * float(np.dot(weights, time_integrand(ts, snap)))
    # initial-data term
    t0 = traj.t_start
    if t_lo_psi < t0 < t_hi_psi:
        snap0 = traj.snapshots[0]
        jumps_u = np.diff(snap0.states)
        total += -float(psi.t_part(t0)) * float(
            np.dot(jumps_u, psi.x_anti(snap0.positions))
        )
    return total


def trajectory_max_residual(traj, battery=None) -> float:
    if battery is None:
        battery = default_battery_for(traj)
    return max(abs(trajectory_weak_residual(traj, psi)) for psi in battery)


def fan_weak_residual(
    fan: WaveFan, psi: BumpTest, t_max: float, n_gauss: int = 14
) -> float:
    """Residual of a self-similar fan on the strip (0, t_max]."""
    flux = fan.flux
    nodes, weights = leggauss(n_gauss)
    speeds = fan_breakpoints(fan)
    x_lo_psi, x_hi_psi = psi.x_support
    t_lo_psi, t_hi_psi = psi.t_support

    def space_integral(t: float) -> float:
        cuts = sorted({x_lo_psi, x_hi_psi, *[s * t for s in speeds]})
        cuts = [c for c in cuts if x_lo_psi <= c <= x_hi_psi]
        if cuts[0] > x_lo_psi:
            cuts.insert(0, x_lo_psi)
        if cuts[-1] < x_hi_psi:
            cuts.append(x_hi_psi)
        all_edges: list[np.ndarray] = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b <= a:
                continue
            n_sub = max(2, int(np.ceil((b - a) / (psi.ax / 6.0))))
            all_edges.append(np.linspace(a, b, n_sub + 1))
        if not all_edges:
            return 0.0
        mids = np.concatenate([0.5 * (e[:-1] + e[1:]) for e in all_edges])
        halves = np.concatenate([0.5 * np.diff(e) for e in all_edges])
        xs = (mids[:, None] + halves[:, None] * nodes[None, :]).ravel()
        v = np.asarray(evaluate_fan(fan, xs / t), dtype=float)
        integrand = v * psi.dt(xs, t) + np.asarray(flux.f(v), dtype=float) * psi.dx(
            xs, t
        )
        per_panel = integrand.reshape(len(mids), len(nodes)) @ weights
        return float(np.dot(halves, per_panel))

    lo = max(1e-12, t_lo_psi)
    hi = min(t_max, t_hi_psi)
    total = 0.0
    if hi > lo:
        n_panels = max(6, int(np.ceil((hi - lo) / (psi.bt / 14.0))))
        edges = np.linspace(lo, hi, n_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (a + b)
            half = 0.5 * (b - a)
            ts = mid + half * nodes
            vals = np.array([space_integral(float(t)) for t in ts])
            total += half * float(np.dot(weights, vals))
    # initial data: u_l for x < 0, u_r for x > 0
    if t_lo_psi < 0.0 < t_hi_psi:
        w0 = float(psi.t_part(0.0))
        anti = psi.x_anti(np.array([0.0]))[0]
        full = psi.x_anti(np.array([x_hi_psi + 1.0]))[0]
        total += w0 * (fan.left_state * anti + fan.right_state * (full - anti))
    return total


def fan_max_residual(fan: WaveFan, t_max: float = 1.0, battery=None) -> float:
    if battery is None:
        speeds = fan_breakpoints(fan) or [0.0]
        lo = min(speeds) * t_max
        hi = max(speeds) * t_max
        pad = max(1.0, 0.3 * (hi - lo))
        battery = bump_battery(lo - pad, hi + pad, 0.0, t_max)
    return max(abs(fan_weak_residual(fan, psi, t_max)) for psi in battery)
