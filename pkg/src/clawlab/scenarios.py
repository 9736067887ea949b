"""Named initial-data fixtures shared by the command line and the tests.

Each fixture is step data with a default horizon sized so its advertised
structure (a merge, a persisting expansion front) happens strictly
inside the run. The working band of the flux is the convex hull of the
data values: characteristic and chord speeds never leave [f'(-R), f'(R)]
with R = max|u0|, which keeps oracle brackets tight and the grid oracle
free of dead CFL headroom.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .fluxes import ConvexFlux, make_flux
from .fronts import FrontState, state_from_data


@dataclass(frozen=True)
class Scenario:
    name: str
    xs: tuple[float, ...]
    us: tuple[float, ...]
    t_end: float
    description: str

    @property
    def flux_radius(self) -> float:
        return max(abs(u) for u in self.us)

    def make_flux(self, flux_name: str = "burgers") -> ConvexFlux:
        return make_flux(flux_name, domain_radius=self.flux_radius)

    def initial_state(self, flux: ConvexFlux) -> FrontState:
        return state_from_data(flux, list(self.xs), list(self.us))


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            name="single_shock",
            xs=(-1.0, 0.0),
            us=(0.0, 1.0, 0.0),
            t_end=1.0,
            description=(
                "compact bump: a fan opens on the left while the right "
                "edge travels as an entropic shock"
            ),
        ),
        Scenario(
            name="rarefaction_pair",
            xs=(-0.75, 0.0, 0.75),
            us=(0.0, -0.5, 0.5, 0.0),
            t_end=1.0,
            description=(
                "central fan between two inward-facing entropic shocks; "
                "no interaction before t=1"
            ),
        ),
        Scenario(
            name="two_shock_merge",
            xs=(0.0, 1.0),
            us=(2.0, 1.0, 0.0),
            t_end=2.0,
            description=(
                "two entropic shocks, speeds 1.5 and 0.5, merging at "
                "t=1, x=1.5 into a single speed-1 shock"
            ),
        ),
        Scenario(
            name="interior_expansion",
            xs=(-1.5, 0.0, 1.5),
            us=(0.0, -1.0, 1.0, 0.0),
            t_end=2.0,
            description=(
                "stationary ascending jump at the origin framed by "
                "outgoing entropic shocks; held as given it violates "
                "admissibility, resolved it opens a fan"
            ),
        ),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ConfigError(f"unknown scenario {name!r}; known: {known}") from None
