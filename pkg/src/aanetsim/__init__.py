"""Minimum-delay routing and scenario simulation for integrated ground/air/space networks."""

from .analysis import CdfSeries, SweepRecord, TravelReport, cdf, emit_csv, run_sweep, travel_analysis
from .config import ConfigError, RunConfig, load_config
from .geo import (
    EARTH_RADIUS_M,
    SPEED_OF_LIGHT,
    EcefPoint,
    GeodeticCoord,
    SphericalCoord,
    chord_distance,
    geodetic_to_ecef,
    is_visible,
    radio_horizon,
    spherical_to_ecef,
    visibility_range,
)
from .graph import Edge, WeightedDigraph, build_digraph, degree_distribution
from .link import (
    LinkBudget,
    LinkInfeasibleError,
    LinkParams,
    Node,
    NodeKind,
    RadioProfile,
    capacity,
    link_budget,
    link_delay,
    path_loss,
    propagation_delay,
    snr,
    transmission_delay,
)
from .routing import (
    Route,
    RouteValidation,
    SchemeResult,
    brute_force_shortest,
    crossover_file_size,
    scheme_ideal_relay_chain,
    scheme_satellite_only,
    shortest_path,
    validate_route,
)
from .scenario import (
    CorridorConfig,
    FlightDataError,
    Scenario,
    ScenarioFormatError,
    SyntheticConfig,
    TrajectoryPoint,
    generate_corridor,
    generate_synthetic,
    load_flight_csv,
    load_scenario,
    save_scenario,
    snapshot,
    write_flight_csv,
)

__version__ = "0.1.0"
