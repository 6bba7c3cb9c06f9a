"""Spherical-Earth geometry: coordinate frames, distances and line of sight.

Positions are carried internally as Earth-centered Earth-fixed (ECEF) points
in meters. The Earth is a sphere of radius 6371 km; link distances are 3-D
straight-line chords, which is the path a line-of-sight radio signal actually
travels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover - import only for annotations
    from .link import Node

EARTH_RADIUS_M = 6_371_000.0
SPEED_OF_LIGHT = 3.0e8  # m/s

# Empirical line-of-sight range coefficient: km of reach per sqrt(meter of height).
HORIZON_COEFF_KM = 3.57

# Sanity floor for altitudes/point norms (deepest land depressions are ~-430 m).
MIN_ALTITUDE_M = -500.0


@dataclass(frozen=True)
class SphericalCoord:
    """Point as (radius from Earth center, polar angle, azimuth), radians."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r < EARTH_RADIUS_M:
            raise ValueError(f"radius {self.r} m is below the Earth surface")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"polar angle {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"azimuth {self.phi} outside [0, 2*pi)")


@dataclass(frozen=True)
class GeodeticCoord:
    """Latitude/longitude in degrees, altitude in meters above mean sea level."""

    latitude: float
    longitude: float
    altitude: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} outside [-180, 180]")
        if self.altitude < MIN_ALTITUDE_M:
            raise ValueError(f"altitude {self.altitude} m below sanity bound")


@dataclass(frozen=True)
class EcefPoint:
    """Earth-centered Earth-fixed point, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm() < EARTH_RADIUS_M + MIN_ALTITUDE_M:
            raise ValueError("point lies inside the Earth")

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


def spherical_to_ecef(c: SphericalCoord) -> EcefPoint:
    """Convert (r, theta, phi) to ECEF with +z as the polar axis."""
    st = math.sin(c.theta)
    return EcefPoint(
        c.r * st * math.cos(c.phi),
        c.r * st * math.sin(c.phi),
        c.r * math.cos(c.theta),
    )


def geodetic_to_ecef(c: GeodeticCoord) -> EcefPoint:
    """Convert lat/lon/alt to ECEF on the spherical Earth (radius + altitude)."""
    r = EARTH_RADIUS_M + c.altitude
    lat = math.radians(c.latitude)
    lon = math.radians(c.longitude)
    return EcefPoint(
        r * math.cos(lat) * math.cos(lon),
        r * math.cos(lat) * math.sin(lon),
        r * math.sin(lat),
    )


def ecef_to_geodetic(p: EcefPoint) -> GeodeticCoord:
    """Inverse of :func:`geodetic_to_ecef` on the spherical Earth."""
    r = p.norm()
    lat = math.degrees(math.asin(max(-1.0, min(1.0, p.z / r))))
    lon = math.degrees(math.atan2(p.y, p.x))
    return GeodeticCoord(lat, lon, r - EARTH_RADIUS_M)


def chord_distance(a: EcefPoint, b: EcefPoint) -> float:
    """Straight-line 3-D distance in meters; symmetric, zero only for equal points."""
    dx = a.x - b.x
    dy = a.y - b.y
    dz = a.z - b.z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def radio_horizon(h1: float, h2: float) -> float:
    """Empirical maximum line-of-sight distance in meters.

    Args:
        h1, h2: antenna heights in meters above the surface.

    Returns:
        3.57 * (sqrt(h1) + sqrt(h2)) kilometers, expressed in meters.
    """
    if h1 < 0 or h2 < 0:
        raise ValueError("antenna heights must be non-negative")
    return HORIZON_COEFF_KM * (math.sqrt(h1) + math.sqrt(h2)) * 1000.0


def tangent_range(h: float) -> float:
    """Exact distance from a node at height h to its horizon tangent point."""
    if h < 0:
        raise ValueError("height must be non-negative")
    return math.sqrt(h * (2.0 * EARTH_RADIUS_M + h))


def visibility_range(h1: float, h2: float) -> float:
    """Maximum separation at which two nodes still see each other.

    The empirical 3.57-coefficient horizon is kept where it is the more
    generous bound (tropospheric heights), but it drops the quadratic height
    term and therefore collapses for spacecraft; the exact spherical tangency
    distance governs there.
    """
    return max(radio_horizon(h1, h2), tangent_range(h1) + tangent_range(h2))


def is_visible(a: "Node", b: "Node") -> bool:
    """True when the straight line between the two nodes clears the Earth."""
    return chord_distance(a.position, b.position) <= visibility_range(a.height, b.height)
