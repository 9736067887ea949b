"""Kruzhkov entropy bookkeeping: defect densities, rates, and ledgers.

For a single jump from u_minus (left) to u_plus (right) moving at the
chord speed sigma, the Kruzhkov defect measure at level a has the flat
space-time density

    k(a) = [f(u_plus ^ a) - f(u_minus ^ a)] - sigma [(u_plus ^ a) - (u_minus ^ a)]

(^ is min). Geometrically k(a) is the gap between the chord of f over the
jump interval and f itself, so it is single-signed in a: positive for
descending (entropic) jumps, negative for ascending (expansion) ones, and
identically zero outside [min(u_-, u_+), max(u_-, u_+)] by Rankine-Hugoniot.
Its integral in a is the per-unit-time dissipation rate

    D = (u_minus - u_plus) (f(u_minus) + f(u_plus)) / 2
        + F(u_plus) - F(u_minus),          F' = f,

which is positive exactly for entropic jumps. Total entropy production of
a tracked solution over a space-time window is the |D|-weighted time each
front spends inside the window; the same number is recovered through the
jump-set line integral of delta_density with the H^1 length factor
sqrt(1 + sigma^2), and through level-wise quadrature of |k|. The package
treats the kinetic normalization of the line density as canonical; the
alternative printed form with the opposite orientation of the flux
integral (delta_density_chord) is retained for the discrepancy audit
exposed by the delta-audit CLI command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ClawError, FluxRangeError
from .fluxes import ConvexFlux, chord_slope
from .quadrature import adaptive_simpson
from .riemann import Rarefaction, Shock, WaveFan

ArrayLike = float | np.ndarray


# ---------------------------------------------------------------------------
# jump-local densities and rates


def kinetic_density(
    flux: ConvexFlux, u_minus: float, u_plus: float, a: ArrayLike
) -> ArrayLike:
    """Defect density k(a) of the jump (u_minus, u_plus) at entropy level a.

    Vectorized in a. Compactly supported on [min(u_-,u_+), max(u_-,u_+)]
    and single-signed with the sign of u_minus - u_plus.
    """
    if u_minus == u_plus:
        out = np.zeros_like(np.asarray(a, dtype=float))
        return float(out) if np.ndim(a) == 0 else out
    sigma = chord_slope(flux, u_minus, u_plus)
    lo = min(u_minus, u_plus)
    hi = max(u_minus, u_plus)
    raw = np.asarray(a, dtype=float)
    # Levels at or beyond the jump interval carry no defect; force the
    # exact zero there instead of letting the formula cancel to rounding.
    arr = np.clip(raw, lo, hi)
    lm = np.minimum(u_minus, arr)
    lp = np.minimum(u_plus, arr)
    out = (np.asarray(flux.f(lp)) - np.asarray(flux.f(lm))) - sigma * (lp - lm)
    out = np.where((raw <= lo) | (raw >= hi), 0.0, out)
    return float(out) if np.ndim(a) == 0 else np.asarray(out, dtype=float)


def jump_ep_rate(flux: ConvexFlux, u_minus: float, u_plus: float) -> float:
    """Signed dissipation rate D of a single jump, in closed form via F.

    D > 0 iff u_minus > u_plus (entropic orientation); D = 0 for the
    degenerate pair. Equals the a-integral of kinetic_density.
    """
    if u_minus == u_plus:
        return 0.0
    F = flux.antiderivative_F
    fm = float(np.asarray(flux.f(u_minus)))
    fp = float(np.asarray(flux.f(u_plus)))
    return (u_minus - u_plus) * 0.5 * (fm + fp) + float(
        np.asarray(F(u_plus))
    ) - float(np.asarray(F(u_minus)))


def jump_ep_rate_kinetic(
    flux: ConvexFlux, u_minus: float, u_plus: float, tol: float = 1e-12
) -> float:
    """Signed rate recomputed by adaptive quadrature of kinetic_density.

    Independent of the antiderivative F; used to cross-check jump_ep_rate.
    """
    if u_minus == u_plus:
        return 0.0
    lo = min(u_minus, u_plus)
    hi = max(u_minus, u_plus)
    return adaptive_simpson(
        lambda a: kinetic_density(flux, u_minus, u_plus, a), lo, hi, tol=tol
    )


def jump_abs_ep_rate_kinetic(
    flux: ConvexFlux, u_minus: float, u_plus: float, tol: float = 1e-12
) -> float:
    """Quadrature of |kinetic_density|, the level-wise absolute rate."""
    if u_minus == u_plus:
        return 0.0
    lo = min(u_minus, u_plus)
    hi = max(u_minus, u_plus)
    return adaptive_simpson(
        lambda a: abs(kinetic_density(flux, u_minus, u_plus, a)), lo, hi, tol=tol
    )


def _h1_factor(flux: ConvexFlux, a: float, b: float) -> float:
    sigma = chord_slope(flux, a, b)
    return math.sqrt(1.0 + sigma * sigma)


def delta_density(flux: ConvexFlux, a: float, b: float) -> float:
    """Jump-set line density: |D| per unit H^1 length of the front.

    Kinetic normalization: integrating delta_density over the jump set
    with the length element sqrt(1 + sigma^2) dt reproduces total EP.
    Symmetric in (a, b).
    """
    if a == b:
        return 0.0
    return abs(jump_ep_rate(flux, a, b)) / _h1_factor(flux, a, b)


def delta_density_chord(flux: ConvexFlux, a: float, b: float) -> float:
    """Line density with the flux integral taken in chord orientation.

    Differs from delta_density whenever the integral term does not
    vanish: for Burgers data (1, 0) it gives 5/(6 sqrt 5) against the
    kinetic 1/(6 sqrt 5). Kept for the normalization audit; nothing
    downstream consumes it.
    """
    if a == b:
        return 0.0
    F = flux.antiderivative_F
    fa = float(np.asarray(flux.f(a)))
    fb = float(np.asarray(flux.f(b)))
    num = (a - b) * 0.5 * (fa + fb) - (float(np.asarray(F(b))) - float(np.asarray(F(a))))
    return abs(num) / _h1_factor(flux, a, b)


# ---------------------------------------------------------------------------
# entropy pairs and fan-level rate functionals


@dataclass(frozen=True)
class EntropyPair:
    """Convex entropy eta with flux xi, compatible via xi' = eta' f'."""

    name: str
    eta: Callable[[ArrayLike], ArrayLike]
    xi: Callable[[ArrayLike], ArrayLike]


def quadratic_pair(flux: ConvexFlux) -> EntropyPair:
    """eta(u) = u^2 / 2 with xi = G, the pair behind the rate functionals."""
    return EntropyPair(
        "quadratic",
        eta=lambda u: 0.5 * np.asarray(u, dtype=float) ** 2,
        xi=flux.antiderivative_G,
    )


def kruzhkov_pair(flux: ConvexFlux, a: float) -> EntropyPair:
    """One-sided Kruzhkov pair at level a: eta = (u - a)^+."""

    def eta(u: ArrayLike) -> ArrayLike:
        return np.maximum(np.asarray(u, dtype=float) - a, 0.0)

    def xi(u: ArrayLike) -> ArrayLike:
        arr = np.asarray(u, dtype=float)
        return np.where(arr > a, np.asarray(flux.f(arr)) - float(np.asarray(flux.f(a))), 0.0)

    return EntropyPair(f"kruzhkov[a={a}]", eta=eta, xi=xi)


def validate_pair(
    pair: EntropyPair, flux: ConvexFlux, n: int = 257, tol: float = 1e-5
) -> None:
    """Sampled compatibility audit xi' = eta' f' on the working band.

    Points where eta has a kink (one-sided slopes disagree, as for the
    Kruzhkov entropies at their level) are skipped.
    """
    r = flux.domain_radius
    h = 1e-7 * max(1.0, r)
    u = np.linspace(-r + 2 * h, r - 2 * h, n)
    eta_r = (np.asarray(pair.eta(u + h)) - np.asarray(pair.eta(u))) / h
    eta_l = (np.asarray(pair.eta(u)) - np.asarray(pair.eta(u - h))) / h
    smooth = np.abs(eta_r - eta_l) < 1e-3
    xi_c = (np.asarray(pair.xi(u + h)) - np.asarray(pair.xi(u - h))) / (2 * h)
    want = 0.5 * (eta_r + eta_l) * np.asarray(flux.df(u))
    err = np.abs(xi_c - want)[smooth]
    scale = max(1.0, float(np.max(np.abs(want))))
    if err.size and float(np.max(err)) > tol * scale:
        raise FluxRangeError(
            f"entropy pair {pair.name!r} incompatible with flux {flux.name!r}: "
            f"max sampled residual {float(np.max(err)):.3e}"
        )


def _as_pair(pair) -> EntropyPair:
    if isinstance(pair, EntropyPair):
        return pair
    eta, xi = pair
    return EntropyPair("anonymous", eta=eta, xi=xi)


def combined_entropy_P(fan: WaveFan, pair) -> float:
    """Jump functional P_v = sum over shocks of [xi] - omega [eta].

    Brackets are right minus left values at the shock speed omega.
    Rarefactions contribute nothing. For the quadratic pair this equals
    minus the sum of jump_ep_rate over the fan's shocks, so the entropic
    fan maximizes dissipation (most negative P) pointwise per jump.
    """
    p = _as_pair(pair)
    total = 0.0
    for w in fan.waves:
        if isinstance(w, Shock):
            d_eta = float(np.asarray(p.eta(w.u_plus))) - float(
                np.asarray(p.eta(w.u_minus))
            )
            d_xi = float(np.asarray(p.xi(w.u_plus))) - float(
                np.asarray(p.xi(w.u_minus))
            )
            total += d_xi - w.sigma * d_eta
    return total


def entropy_rate_Hdot(fan: WaveFan, pair) -> float:
    """Growth rate of the total entropy integral for the self-similar fan.

    Hdot = P + xi(u_l) - xi(u_r): the jump production plus the boundary
    flux imbalance of the far states. Ranks fans identically to P since
    the boundary term depends only on the shared data.
    """
    p = _as_pair(pair)
    return (
        combined_entropy_P(fan, p)
        + float(np.asarray(p.xi(fan.left_state)))
        - float(np.asarray(p.xi(fan.right_state)))
    )


def fan_ep_rate(fan: WaveFan) -> float:
    """Entropy production per unit time of a fan: sum of |D| over shocks."""
    return float(
        sum(
            abs(jump_ep_rate(fan.flux, w.u_minus, w.u_plus))
            for w in fan.waves
            if isinstance(w, Shock)
        )
    )


def fan_signed_ep_rate(fan: WaveFan) -> float:
    """Signed counterpart of fan_ep_rate (positive = entropic dissipation)."""
    return float(
        sum(
            jump_ep_rate(fan.flux, w.u_minus, w.u_plus)
            for w in fan.waves
            if isinstance(w, Shock)
        )
    )


# ---------------------------------------------------------------------------
# level sampling helpers


def chebyshev_levels(lo: float, hi: float, n: int = 33, margin: float = 1e-6):
    """n Chebyshev points inside [lo, hi] plus just-outside probes.

    Returns (inside, outside): the sign audit runs on `inside`, the
    compact-support audit on `outside` = lo - margin, hi + margin.
    """
    k = np.arange(1, n + 1)
    nodes = np.cos((2 * k - 1) * np.pi / (2 * n))
    inside = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
    outside = np.array([lo - margin, hi + margin])
    return np.sort(inside), outside


# ---------------------------------------------------------------------------
# pointwise admissibility checks


@dataclass(frozen=True)
class EConditionReport:
    holds: bool
    worst_excess: float
    worst_pair: tuple[float, float]
    slack: float


def _econd_core(
    xs: np.ndarray,
    us: np.ndarray,
    zero_pairs: Sequence[tuple[float, float, float]],
    t: float,
    c: float,
    slack: float,
) -> EConditionReport:
    if t <= 0.0:
        raise FluxRangeError(f"one-sided Lipschitz check needs t > 0, got {t}")
    worst = -np.inf
    worst_pair = (np.nan, np.nan)
    if xs.size >= 2:
        order = np.argsort(xs, kind="stable")
        x = xs[order]
        u = us[order]
        # excess(i, j) = u_j - u_i - (x_j - x_i) / (c t) for all i < j
        shifted = u - x / (c * t)
        running_min = np.minimum.accumulate(shifted)
        excess = shifted - running_min
        j = int(np.argmax(excess))
        if float(excess[j]) > worst:
            worst = float(excess[j])
            i = int(np.argmin(shifted[: j + 1]))
            worst_pair = (float(x[i]), float(x[j]))
    for x0, u_left, u_right in zero_pairs:
        e = u_right - u_left
        if e > worst:
            worst = e
            worst_pair = (float(x0), float(x0))
    if not np.isfinite(worst):
        worst = 0.0
        worst_pair = (0.0, 0.0)
    return EConditionReport(worst <= slack + 1e-15, worst, worst_pair, slack)


def check_e_condition_samples(
    xs: ArrayLike, us: ArrayLike, t: float, c: float, slack: float = 0.0
) -> EConditionReport:
    """One-sided Lipschitz condition u(y) - u(x) <= (y - x)/(c t) + slack.

    xs, us are point samples of the profile at time t; every ordered pair
    is checked (O(n log n) via the running-minimum reduction).
    """
    return _econd_core(
        np.asarray(xs, dtype=float), np.asarray(us, dtype=float), [], t, c, slack
    )


def check_e_condition_state(state, c: float, slack: float = 0.0) -> EConditionReport:
    """E-condition for a tracked piecewise-constant snapshot.

    Pairs are piece midpoints plus the zero-width pair across each front,
    so an ascending jump of height h fails any slack below h.
    """
    xs, us, zero_pairs = _state_econd_samples(state)
    return _econd_core(xs, us, zero_pairs, state.time, c, slack)


def _state_econd_samples(state):
    pos = np.asarray(state.positions, dtype=float)
    vals = np.asarray(state.states, dtype=float)
    if pos.size == 0:
        return np.array([0.0]), np.array([vals[0]]), []
    span = max(1.0, float(pos[-1] - pos[0]))
    pts = [pos[0] - 0.5 * span]
    sample_vals = [vals[0]]
    for i in range(len(pos) - 1):
        if pos[i + 1] > pos[i]:
            pts.append(0.5 * (pos[i] + pos[i + 1]))
            sample_vals.append(vals[i + 1])
    pts.append(pos[-1] + 0.5 * span)
    sample_vals.append(vals[-1])
    zero_pairs = [
        (float(pos[i]), float(vals[i]), float(vals[i + 1])) for i in range(len(pos))
    ]
    return np.asarray(pts), np.asarray(sample_vals), zero_pairs


def check_e_condition_fan(
    fan: WaveFan, t: float, c: float | None = None, slack: float = 0.0, n_samples: int = 33
) -> EConditionReport:
    """E-condition for a fan sampled at time t > 0."""
    if c is None:
        c = fan.flux.ddf_lower_bound
    xs: list[float] = []
    us: list[float] = []
    zero_pairs: list[tuple[float, float, float]] = []
    lo_speed = min([w.support[0] for w in fan.waves], default=0.0)
    hi_speed = max([w.support[1] for w in fan.waves], default=0.0)
    pad = max(1.0, hi_speed - lo_speed)
    xs += [(lo_speed - pad) * t, (hi_speed + pad) * t]
    us += [fan.left_state, fan.right_state]
    from .fluxes import inverse_derivative

    for w in fan.waves:
        if isinstance(w, Shock):
            zero_pairs.append((w.sigma * t, w.u_minus, w.u_plus))
        else:
            omegas = np.linspace(w.omega_lo, w.omega_hi, n_samples)
            xs += list(omegas * t)
            us += list(np.asarray(inverse_derivative(fan.flux, omegas), dtype=float))
    return _econd_core(np.asarray(xs), np.asarray(us), zero_pairs, t, c, slack)


@dataclass(frozen=True)
class FrontAdmissibility:
    index: int
    u_minus: float
    u_plus: float
    entropic: bool
    density_sign_consistent: bool
    compact_support_ok: bool


def check_entropy_inequality(state, flux: ConvexFlux, n_levels: int = 33):
    """Per-front admissibility report for a tracked snapshot.

    A front is entropic when it descends; the kinetic density sampled at
    Chebyshev levels must be single-signed accordingly and vanish just
    outside the state interval.
    """
    reports: list[FrontAdmissibility] = []
    pos = np.asarray(state.positions, dtype=float)
    vals = np.asarray(state.states, dtype=float)
    for i in range(len(pos)):
        um = float(vals[i])
        up = float(vals[i + 1])
        if um == up:
            reports.append(FrontAdmissibility(i, um, up, True, True, True))
            continue
        lo, hi = min(um, up), max(um, up)
        inside, outside = chebyshev_levels(lo, hi, n_levels)
        k_in = np.asarray(kinetic_density(flux, um, up, inside))
        k_out = np.asarray(kinetic_density(flux, um, up, outside))
        tol = 1e-12 * max(1.0, float(np.max(np.abs(k_in))) if k_in.size else 1.0)
        if um > up:
            sign_ok = bool(np.all(k_in >= -tol))
        else:
            sign_ok = bool(np.all(k_in <= tol))
        support_ok = bool(np.all(np.abs(k_out) <= 1e-9 * max(1.0, abs(um), abs(up))))
        reports.append(
            FrontAdmissibility(i, um, up, um > up, sign_ok, support_ok)
        )
    return reports


# ---------------------------------------------------------------------------
# windows and trajectory ledgers


@dataclass(frozen=True)
class Window:
    """Space-time rectangle [t_lo, t_hi] x [x_lo, x_hi]."""

    t_lo: float
    t_hi: float
    x_lo: float = -np.inf
    x_hi: float = np.inf

    def clip_front(
        self, t_a: float, t_b: float, x_a: float, sigma: float
    ) -> tuple[float, float]:
        """Sub-interval of [t_a, t_b] the front x(t) = x_a + sigma (t - t_a)
        spends inside the rectangle. Returns (lo, hi) with lo >= hi if empty."""
        lo = max(t_a, self.t_lo)
        hi = min(t_b, self.t_hi)
        for bound, side in ((self.x_lo, +1.0), (self.x_hi, -1.0)):
            if not np.isfinite(bound):
                continue
            # side * (x(t) - bound) >= 0
            alpha = side * sigma
            beta = side * (x_a - sigma * t_a - bound)
            if abs(alpha) < 1e-300:
                if beta < 0.0:
                    return (1.0, 0.0)
                continue
            root = -beta / alpha
            if alpha > 0.0:
                lo = max(lo, root)
            else:
                hi = min(hi, root)
        return (lo, hi)


@dataclass(frozen=True)
class LedgerRow:
    front_id: int
    t_start: float
    t_end: float
    u_minus: float
    u_plus: float
    sigma: float
    rate: float
    abs_rate: float
    delta: float


@dataclass
class EntropyLedger:
    window: object
    rows: list[LedgerRow] = field(default_factory=list)
    total_signed: float = 0.0
    total_abs: float = 0.0
    mode: str = "abs"

    @property
    def total(self) -> float:
        return self.total_abs if self.mode == "abs" else self.total_signed


def total_ep(
    traj,
    window: Window,
    mode: str = "abs",
    use_chord_delta: bool = False,
) -> EntropyLedger:
    """Entropy production ledger of a tracked trajectory over a window.

    Walks every front segment between events, clips its lifetime to the
    window (rectangle or trapezoid), and accumulates rate x duration. The
    ledger keeps one row per (front segment, window overlap), the signed
    and absolute totals, and the per-front line density Delta.
    """
    if mode not in ("abs", "signed"):
        raise FluxRangeError(f"ledger mode must be 'abs' or 'signed', got {mode!r}")
    flux = traj.flux
    ledger = EntropyLedger(window=window, mode=mode)
    density = delta_density_chord if use_chord_delta else delta_density
    for t_a, t_b, state in traj.segments():
        pos = np.asarray(state.positions, dtype=float)
        vals = np.asarray(state.states, dtype=float)
        speeds = np.asarray(state.speeds, dtype=float)
        ids = state.front_ids
        for i in range(len(pos)):
            um = float(vals[i])
            up = float(vals[i + 1])
            if um == up:
                continue
            lo, hi = window.clip_front(t_a, t_b, float(pos[i]), float(speeds[i]))
            if hi <= lo:
                continue
            rate = jump_ep_rate(flux, um, up)
            row = LedgerRow(
                front_id=int(ids[i]),
                t_start=lo,
                t_end=hi,
                u_minus=um,
                u_plus=up,
                sigma=float(speeds[i]),
                rate=rate,
                abs_rate=abs(rate),
                delta=density(flux, um, up),
            )
            ledger.rows.append(row)
            ledger.total_signed += rate * (hi - lo)
            ledger.total_abs += abs(rate) * (hi - lo)
    return ledger


def total_ep_kinetic(traj, window: Window, tol: float = 1e-12) -> float:
    """Absolute EP recomputed through level-space quadrature of |k(a)|.

    Fully independent of the closed-form rate: per segment the density is
    integrated by adaptive Simpson, then weighted by in-window duration.
    """
    flux = traj.flux
    total = 0.0
    for t_a, t_b, state in traj.segments():
        pos = np.asarray(state.positions, dtype=float)
        vals = np.asarray(state.states, dtype=float)
        speeds = np.asarray(state.speeds, dtype=float)
        for i in range(len(pos)):
            um = float(vals[i])
            up = float(vals[i + 1])
            if um == up:
                continue
            lo, hi = window.clip_front(t_a, t_b, float(pos[i]), float(speeds[i]))
            if hi <= lo:
                continue
            total += jump_abs_ep_rate_kinetic(flux, um, up, tol=tol) * (hi - lo)
    return total


def total_ep_delta_h1(traj, window: Window, use_chord_delta: bool = False) -> float:
    """Absolute EP through the jump-set route: Delta integrated in H^1 length.

    Each front segment contributes Delta(u_-, u_+) times its H^1 length
    inside the window, sqrt(1 + sigma^2) x duration.
    """
    flux = traj.flux
    density = delta_density_chord if use_chord_delta else delta_density
    total = 0.0
    for t_a, t_b, state in traj.segments():
        pos = np.asarray(state.positions, dtype=float)
        vals = np.asarray(state.states, dtype=float)
        speeds = np.asarray(state.speeds, dtype=float)
        for i in range(len(pos)):
            um = float(vals[i])
            up = float(vals[i + 1])
            if um == up:
                continue
            lo, hi = window.clip_front(t_a, t_b, float(pos[i]), float(speeds[i]))
            if hi <= lo:
                continue
            sigma = float(speeds[i])
            length = (hi - lo) * math.sqrt(1.0 + sigma * sigma)
            total += density(flux, um, up) * length
    return total
