"""Strictly convex flux functions and the scalar calculus built on them.

A ConvexFlux bundles the flux f, its derivative f', a positive lower bound
c on f'' over the working band [-R, R], and the two antiderivatives that
the entropy bookkeeping needs:

    F(u) = integral of f        from 0 to u
    G(u) = integral of s f'(s)  from 0 to u

F drives the closed-form jump dissipation rate; G is the entropy flux
paired with eta(u) = u^2 / 2. When closed forms are not supplied both fall
back to adaptive Simpson quadrature (tolerance 1e-10, interval cap 2**20),
which is accurate enough for every 1e-8 contract downstream but not for
the 1e-12 ones; the built-in catalog supplies closed forms.

The growth condition f -> infinity at infinity that guarantees rarefaction
coverage on the whole line is recorded here but not enforced: every
computation in this package lives on a bounded band where it is vacuous.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DegenerateChordError, FluxRangeError
from .quadrature import adaptive_simpson, bisect_then_polish, vector_bisect_newton

ArrayLike = float | np.ndarray


@dataclass(frozen=True)
class ConvexFlux:
    """Strictly convex flux on the band [-domain_radius, domain_radius].

    Fields
    ------
    name : identifier used by the CLI and serialization.
    f, df : vectorized flux and derivative.
    ddf_lower_bound : c > 0 with f'' >= c on the band.
    domain_radius : R, half-width of the admissible state band.
    antiderivative_F, antiderivative_G : vectorized F and G above.
    inv_df : closed-form inverse of df when available (else None; the
        generic inverse falls back to bracketed root finding).
    ddf : second derivative when available, used only to polish roots.
    """

    name: str
    f: Callable[[ArrayLike], ArrayLike]
    df: Callable[[ArrayLike], ArrayLike]
    ddf_lower_bound: float
    domain_radius: float
    antiderivative_F: Callable[[ArrayLike], ArrayLike]
    antiderivative_G: Callable[[ArrayLike], ArrayLike]
    inv_df: Callable[[ArrayLike], ArrayLike] | None = None
    ddf: Callable[[ArrayLike], ArrayLike] | None = None

    def with_radius(self, radius: float) -> "ConvexFlux":
        """Same flux on a different working band."""
        if radius <= 0.0:
            raise FluxRangeError(f"domain_radius must be positive, got {radius}")
        return replace(self, domain_radius=float(radius))


def _quadrature_antiderivative(fn: Callable, tol: float = 1e-10) -> Callable:
    def anti(u: ArrayLike) -> ArrayLike:
        if np.ndim(u) == 0:
            return adaptive_simpson(fn, 0.0, float(u), tol=tol)
        return np.array([adaptive_simpson(fn, 0.0, float(v), tol=tol) for v in np.ravel(u)]).reshape(np.shape(u))

    return anti


def make_convex_flux(
    name: str,
    f: Callable,
    df: Callable,
    ddf_lower_bound: float,
    domain_radius: float = 2.0,
    antiderivative_F: Callable | None = None,
    antiderivative_G: Callable | None = None,
    inv_df: Callable | None = None,
    ddf: Callable | None = None,
) -> ConvexFlux:
    """Build a ConvexFlux, filling missing antiderivatives by quadrature."""
    if ddf_lower_bound <= 0.0:
        raise FluxRangeError(
            f"strict convexity needs a positive ddf_lower_bound, got {ddf_lower_bound}"
        )
    if domain_radius <= 0.0:
        raise FluxRangeError(f"domain_radius must be positive, got {domain_radius}")
    if antiderivative_F is None:
        antiderivative_F = _quadrature_antiderivative(f)
    if antiderivative_G is None:
        antiderivative_G = _quadrature_antiderivative(lambda s: s * df(s))
    return ConvexFlux(
        name=name,
        f=f,
        df=df,
        ddf_lower_bound=float(ddf_lower_bound),
        domain_radius=float(domain_radius),
        antiderivative_F=antiderivative_F,
        antiderivative_G=antiderivative_G,
        inv_df=inv_df,
        ddf=ddf,
    )


def burgers_flux(domain_radius: float = 2.0) -> ConvexFlux:
    """f(u) = u^2 / 2. The closed-form workhorse: f'' = 1 everywhere."""
    return make_convex_flux(
        "burgers",
        f=lambda u: 0.5 * np.asarray(u, dtype=float) ** 2,
        df=lambda u: np.asarray(u, dtype=float),
        ddf_lower_bound=1.0,
        domain_radius=domain_radius,
        antiderivative_F=lambda u: np.asarray(u, dtype=float) ** 3 / 6.0,
        antiderivative_G=lambda u: np.asarray(u, dtype=float) ** 3 / 3.0,
        inv_df=lambda p: np.asarray(p, dtype=float),
        ddf=lambda u: np.ones_like(np.asarray(u, dtype=float)),
    )


def cosh_flux(domain_radius: float = 2.0) -> ConvexFlux:
    """f(u) = cosh(u) - 1, a transcendental flux with f'' >= 1 on any band."""
    return make_convex_flux(
        "cosh",
        f=lambda u: np.cosh(u) - 1.0,
        df=np.sinh,
        ddf_lower_bound=1.0,
        domain_radius=domain_radius,
        antiderivative_F=lambda u: np.sinh(u) - np.asarray(u, dtype=float),
        antiderivative_G=lambda u: np.asarray(u, dtype=float) * np.cosh(u) - np.sinh(u),
        inv_df=np.arcsinh,
        ddf=np.cosh,
    )


def poly4_flux(domain_radius: float = 2.0) -> ConvexFlux:
    """f(u) = u^2/2 + u^4/12, a quartic whose f' inverse has no closed form."""
    return make_convex_flux(
        "poly4",
        f=lambda u: 0.5 * np.asarray(u, dtype=float) ** 2
        + np.asarray(u, dtype=float) ** 4 / 12.0,
        df=lambda u: np.asarray(u, dtype=float) + np.asarray(u, dtype=float) ** 3 / 3.0,
        ddf_lower_bound=1.0,
        domain_radius=domain_radius,
        antiderivative_F=lambda u: np.asarray(u, dtype=float) ** 3 / 6.0
        + np.asarray(u, dtype=float) ** 5 / 60.0,
        antiderivative_G=lambda u: np.asarray(u, dtype=float) ** 3 / 3.0
        + np.asarray(u, dtype=float) ** 5 / 15.0,
        ddf=lambda u: 1.0 + np.asarray(u, dtype=float) ** 2,
    )


FLUX_CATALOG: dict[str, Callable[[float], ConvexFlux]] = {
    "burgers": burgers_flux,
    "cosh": cosh_flux,
    "poly4": poly4_flux,
}


def make_flux(name: str, domain_radius: float = 2.0) -> ConvexFlux:
    """Catalog lookup by name: burgers, cosh, or poly4."""
    try:
        factory = FLUX_CATALOG[name]
    except KeyError:
        raise FluxRangeError(
            f"unknown flux {name!r}; available: {sorted(FLUX_CATALOG)}"
        ) from None
    return factory(domain_radius)


def _check_band(flux: ConvexFlux, u: ArrayLike, what: str) -> None:
    r = flux.domain_radius
    arr = np.asarray(u, dtype=float)
    if np.any(np.abs(arr) > r * (1.0 + 1e-12) + 1e-12):
        bad = float(np.ravel(arr)[int(np.argmax(np.abs(np.ravel(arr))))])
        raise FluxRangeError(
            f"{what} {bad} outside the admissible band [{-r}, {r}] of flux {flux.name!r}"
        )


def inverse_derivative(flux: ConvexFlux, slope: ArrayLike) -> ArrayLike:
    """Solve f'(u) = slope for u on the working band.

    slope must lie in [f'(-R), f'(R)]; anything else raises FluxRangeError
    naming the admissible interval. Closed-form inverses are used when the
    flux provides one; otherwise bisection brackets the root to 1e-6 and a
    Newton (or secant) polish takes it to a 1e-12 residual in f'.
    """
    r = flux.domain_radius
    lo_slope = float(flux.df(-r))
    hi_slope = float(flux.df(r))
    arr = np.asarray(slope, dtype=float)
    pad = 1e-12 * max(1.0, abs(lo_slope), abs(hi_slope))
    if np.any(arr < lo_slope - pad) or np.any(arr > hi_slope + pad):
        bad = float(np.ravel(arr)[0])
        for v in np.ravel(arr):
            if v < lo_slope - pad or v > hi_slope + pad:
                bad = float(v)
                break
        raise FluxRangeError(
            f"slope {bad} outside admissible range [{lo_slope}, {hi_slope}] "
            f"for flux {flux.name!r} on [-{r}, {r}]"
        )
    arr = np.clip(arr, lo_slope, hi_slope)
    if flux.inv_df is not None:
        out = flux.inv_df(arr)
        return float(out) if np.ndim(slope) == 0 else np.asarray(out, dtype=float)
    if np.ndim(slope) == 0:
        target = float(arr)
        root = bisect_then_polish(
            lambda u: float(flux.df(u)) - target,
            -r,
            r,
            dg=(lambda u: float(flux.ddf(u))) if flux.ddf is not None else None,
            polish_tol=1e-12 * max(1.0, abs(target)),
        )
        return float(root)
    flat = np.ravel(arr)
    roots = vector_bisect_newton(
        lambda u: flux.df(u) - flat,
        np.full_like(flat, -r),
        np.full_like(flat, r),
        dg=flux.ddf,
    )
    return roots.reshape(np.shape(slope))


def convex_conjugate(flux: ConvexFlux, p: ArrayLike) -> ArrayLike:
    """Legendre transform f*(p) = sup_u [p u - f(u)], attained at f'(u) = p."""
    u_star = inverse_derivative(flux, p)
    out = np.asarray(p, dtype=float) * u_star - flux.f(u_star)
    return float(out) if np.ndim(p) == 0 else np.asarray(out, dtype=float)


def chord_slope(flux: ConvexFlux, a: float, b: float) -> float:
    """Rankine-Hugoniot speed (f(a) - f(b)) / (a - b) of the jump (a, b)."""
    if a == b:
        raise DegenerateChordError(f"chord of the degenerate pair ({a}, {a})")
    _check_band(flux, np.array([a, b]), "state")
    return float((flux.f(a) - flux.f(b)) / (a - b))


def validate_flux(flux: ConvexFlux, n: int = 4001, tol: float = 1e-7) -> None:
    """Sampled consistency audit on the working band.

    Checks f(0) = 0 normalization of the antiderivatives, monotonicity and
    the convexity lower bound for f' difference quotients, and agreement of
    F', G' with f and u f' through centered differences.
    """
    r = flux.domain_radius
    u = np.linspace(-r, r, n)
    fp = np.asarray(flux.df(u), dtype=float)
    du = u[1] - u[0]
    quot = np.diff(fp) / du
    if np.any(quot < flux.ddf_lower_bound - 1e-6):
        raise FluxRangeError(
            f"flux {flux.name!r}: f' difference quotients fall below c="
            f"{flux.ddf_lower_bound}"
        )
    h = 1e-5 * max(1.0, r)
    inner = u[(np.abs(u) <= r - 2 * h)]
    F = flux.antiderivative_F
    G = flux.antiderivative_G
    dF = (np.asarray(F(inner + h)) - np.asarray(F(inner - h))) / (2 * h)
    dG = (np.asarray(G(inner + h)) - np.asarray(G(inner - h))) / (2 * h)
    f_vals = np.asarray(flux.f(inner), dtype=float)
    g_vals = inner * np.asarray(flux.df(inner), dtype=float)
    scale = max(1.0, float(np.max(np.abs(f_vals))), float(np.max(np.abs(g_vals))))
    err_f = float(np.max(np.abs(dF - f_vals))) / scale
    err_g = float(np.max(np.abs(dG - g_vals))) / scale
    if err_f > tol or err_g > tol:
        raise FluxRangeError(
            f"flux {flux.name!r}: antiderivative audit failed "
            f"(F residual {err_f:.2e}, G residual {err_g:.2e})"
        )
    for anti, label in ((F, "F"), (G, "G")):
        at0 = float(np.asarray(anti(0.0)))
        if abs(at0) > 1e-12:
            raise FluxRangeError(f"flux {flux.name!r}: {label}(0) = {at0}, want 0")
