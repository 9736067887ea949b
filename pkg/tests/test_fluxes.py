"""Flux catalog: closed forms, inverses, conjugates, and their oracles."""

import numpy as np
import pytest

from clawlab import (
    FluxRangeError,
    DegenerateChordError,
    burgers_flux,
    chord_slope,
    convex_conjugate,
    cosh_flux,
    inverse_derivative,
    make_convex_flux,
    make_flux,
    poly4_flux,
    validate_flux,
)

ALL_FLUXES = [burgers_flux(2.0), cosh_flux(2.0), poly4_flux(2.0)]


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_catalog_self_consistency(flux):
    validate_flux(flux)


def test_make_flux_lookup():
    assert make_flux("burgers").name == "burgers"
    assert make_flux("cosh", 3.0).domain_radius == 3.0
    with pytest.raises(FluxRangeError):
        make_flux("squareroot")


def test_burgers_values():
    fl = burgers_flux()
    assert fl.f(2.0) == 2.0
    assert fl.df(-1.5) == -1.5
    assert fl.antiderivative_F(2.0) == pytest.approx(8.0 / 6.0, abs=1e-15)
    assert fl.antiderivative_G(2.0) == pytest.approx(8.0 / 3.0, abs=1e-15)
    assert inverse_derivative(fl, 0.7) == pytest.approx(0.7, abs=1e-15)
    assert convex_conjugate(fl, 0.8) == pytest.approx(0.32, abs=1e-14)


def test_cosh_inverse_derivative_closed_form():
    fl = cosh_flux()
    # f'(1) = sinh(1); inverting must land back on 1.
    assert inverse_derivative(fl, float(np.sinh(1.0))) == pytest.approx(1.0, abs=1e-12)
    assert inverse_derivative(fl, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_cosh_chord_value():
    fl = cosh_flux()
    assert chord_slope(fl, 1.0, 0.0) == pytest.approx(0.5430806348152437, abs=1e-15)
    assert chord_slope(fl, 1.0, 0.0) == pytest.approx(float(np.cosh(1.0) - 1.0))


def test_chord_degenerate_pair():
    with pytest.raises(DegenerateChordError):
        chord_slope(burgers_flux(), 0.3, 0.3)


def test_chord_band_enforcement():
    with pytest.raises(FluxRangeError):
        chord_slope(burgers_flux(2.0), 2.5, 0.0)


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_inverse_derivative_roundtrip(flux):
    rng = np.random.default_rng(11)
    u = rng.uniform(-flux.domain_radius, flux.domain_radius, size=64)
    slopes = np.asarray(flux.df(u), dtype=float)
    back = inverse_derivative(flux, slopes)
    assert np.max(np.abs(np.asarray(flux.df(back)) - slopes)) <= 1e-11
    assert np.max(np.abs(back - u)) <= 1e-9


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_inverse_derivative_brute_oracle(flux):
    # Independent oracle: plain interval halving on f', no polish, no closed form.
    r = flux.domain_radius
    for target_u in (-1.7, -0.4, 0.0, 0.9, 1.99):
        slope = float(flux.df(target_u))
        lo, hi = -r, r
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if float(flux.df(mid)) < slope:
                lo = mid
            else:
                hi = mid
        assert inverse_derivative(flux, slope) == pytest.approx(
            0.5 * (lo + hi), abs=1e-10
        )


def test_inverse_derivative_range_error_names_interval():
    fl = cosh_flux(1.0)
    with pytest.raises(FluxRangeError) as err:
        inverse_derivative(fl, 10.0)
    msg = str(err.value)
    assert "admissible" in msg and "cosh" in msg


def test_cosh_conjugate_closed_form():
    # f*(p) = p arcsinh(p) - (sqrt(1 + p^2) - 1) for f = cosh - 1.
    fl = cosh_flux(3.0)
    for p in (-2.0, -0.3, 0.0, 1.0, 2.5):
        want = p * np.arcsinh(p) - (np.sqrt(1.0 + p * p) - 1.0)
        assert convex_conjugate(fl, p) == pytest.approx(float(want), abs=1e-12)
    assert convex_conjugate(fl, 1.0) == pytest.approx(0.4671600246464479, abs=1e-13)


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_conjugate_grid_supremum_oracle(flux):
    # Independent oracle: brute supremum of p u - f(u) over a dense grid.
    r = flux.domain_radius
    u = np.linspace(-r, r, 400001)
    f_u = np.asarray(flux.f(u), dtype=float)
    for p in (-1.2, 0.0, 0.45, 1.8):
        brute = float(np.max(p * u - f_u))
        assert convex_conjugate(flux, p) == pytest.approx(brute, abs=1e-8)


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_fenchel_young_inequality(flux):
    rng = np.random.default_rng(7)
    r = flux.domain_radius
    u = rng.uniform(-r, r, size=40)
    p = np.asarray(flux.df(rng.uniform(-r, r, size=40)), dtype=float)
    fstar = np.array([convex_conjugate(flux, float(pi)) for pi in p])
    gap = np.asarray(flux.f(u), dtype=float) + fstar - np.outer(u, p).diagonal()
    assert np.all(gap >= -1e-10)
    # Equality exactly when p = f'(u).
    tight = np.asarray(flux.f(u)) + np.array(
        [convex_conjugate(flux, float(s)) for s in np.asarray(flux.df(u))]
    ) - u * np.asarray(flux.df(u))
    assert np.max(np.abs(tight)) <= 1e-10


@pytest.mark.parametrize("flux", ALL_FLUXES, ids=lambda fl: fl.name)
def test_chord_between_endpoint_slopes(flux):
    rng = np.random.default_rng(3)
    r = flux.domain_radius
    for _ in range(50):
        a, b = np.sort(rng.uniform(-r, r, size=2))
        if b - a < 1e-9:
            continue
        s = chord_slope(flux, a, b)
        assert float(flux.df(a)) < s < float(flux.df(b))


def test_quadrature_backed_antiderivatives_match_closed_forms():
    closed = cosh_flux(2.0)
    quad = make_convex_flux(
        "cosh-quadrature",
        f=closed.f,
        df=closed.df,
        ddf_lower_bound=1.0,
        domain_radius=2.0,
        ddf=closed.ddf,
    )
    for u in (-2.0, -0.8, 0.0, 0.3, 1.9):
        assert quad.antiderivative_F(u) == pytest.approx(
            float(closed.antiderivative_F(u)), abs=1e-9
        )
        assert quad.antiderivative_G(u) == pytest.approx(
            float(closed.antiderivative_G(u)), abs=1e-9
        )


def test_poly4_inverse_without_closed_form():
    fl = poly4_flux(2.0)
    assert fl.inv_df is None
    # f'(1.2) = 1.2 + 1.2^3 / 3 = 1.776
    u = inverse_derivative(fl, 1.776)
    assert u == pytest.approx(1.2, abs=1e-10)
    arr = inverse_derivative(fl, np.array([0.0, 1.776, -1.776]))
    assert np.allclose(arr, [0.0, 1.2, -1.2], atol=1e-9)


def test_with_radius_rescopes_band():
    fl = burgers_flux(1.0)
    with pytest.raises(FluxRangeError):
        inverse_derivative(fl, 1.5)
    wider = fl.with_radius(2.0)
    assert inverse_derivative(wider, 1.5) == pytest.approx(1.5)
