"""TOML run configuration.

Radio quantities cross this boundary in the units engineers quote them in
(dBm, dB, Hz, meters, seconds, bits) with the unit spelled out in the key
name; everything becomes SI linear internally. Unknown keys are rejected so
typos cannot silently fall back to defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .geo import GeodeticCoord
from .link import LinkParams, NodeKind, RadioProfile, db_to_linear, dbm_to_watts
from .scenario import AIRPORTS, SyntheticConfig


class ConfigError(Exception):
    """Configuration file is missing, unreadable or invalid."""


@dataclass(frozen=True)
class RunConfig:
    link: LinkParams
    profiles: dict[NodeKind, RadioProfile]
    synthetic: SyntheticConfig
    flight_csv: str | None
    bs_site: GeodeticCoord
    out_dir: str
    seed: int
    realizations: int


_LINK_KEYS = {
    "carrier_freq_hz": (True, (int, float)),
    "bandwidth_hz": (True, (int, float)),
    "noise_power_dbm": (True, (int, float)),
    "path_loss_exponent": (False, (int, float)),
    "snr_threshold_db": (True, (int, float)),
    "df_delay_s": (True, (int, float)),
    "file_size_bits": (True, (int, float)),
    "rate_mode": (False, str),
    "fixed_rate_bps": (False, (int, float)),
}

_PROFILE_KEYS = {
    "tx_power_dbm": (True, (int, float)),
    "antenna_gain_db": (True, (int, float)),
    "height_m": (True, (int, float)),
}

_SYNTHETIC_KEYS = {
    "n_intermediate": (True, int),
    "bs_theta_rad": (False, (int, float)),
    "bs_phi_rad": (False, (int, float)),
    "target_theta_rad": (True, (int, float)),
    "target_phi_rad": (True, (int, float)),
    "satellite_theta_rad": (True, (int, float)),
    "satellite_phi_rad": (True, (int, float)),
}

_DATA_KEYS = {
    "flight_csv": (False, str),
    "bs_site": (False, str),
    "bs_latitude_deg": (False, (int, float)),
    "bs_longitude_deg": (False, (int, float)),
}

_RUN_KEYS = {
    "seed": (True, int),
    "out_dir": (False, str),
    "realizations": (False, int),
}

_NODE_SECTIONS = ("ground_bs", "aircraft", "satellite")


def _check_table(table: dict, schema: dict, path: str) -> None:
    unknown = sorted(set(table) - set(schema))
    if unknown:
        raise ConfigError(f"unknown key(s) {', '.join(f'{path}.{k}' for k in unknown)}")
    for key, (required, types) in schema.items():
        if key not in table:
            if required:
                raise ConfigError(f"missing required key {path}.{key}")
            continue
        value = table[key]
        # bool is an int subclass; reject it for numeric fields explicitly.
        if isinstance(value, bool) or not isinstance(value, types):
            raise ConfigError(f"{path}.{key}: expected {types}, got {type(value).__name__}")


def _parse_profile(table: dict, path: str) -> RadioProfile:
    _check_table(table, _PROFILE_KEYS, path)
    gain = db_to_linear(float(table["antenna_gain_db"]))
    return RadioProfile(
        tx_power_w=dbm_to_watts(float(table["tx_power_dbm"])),
        tx_gain=gain,
        rx_gain=gain,
        height_m=float(table["height_m"]),
    )


def load_config(path: str) -> RunConfig:
    """Load and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc

    top_unknown = sorted(set(raw) - {"link", "nodes", "synthetic", "data", "run"})
    if top_unknown:
        raise ConfigError(f"unknown section(s): {', '.join(top_unknown)}")
    for section in ("link", "nodes", "synthetic", "run"):
        if section not in raw:
            raise ConfigError(f"missing required section [{section}]")

    link_tbl = raw["link"]
    _check_table(link_tbl, _LINK_KEYS, "link")
    try:
        link = LinkParams(
            carrier_freq_hz=float(link_tbl["carrier_freq_hz"]),
            bandwidth_hz=float(link_tbl["bandwidth_hz"]),
            noise_power_w=dbm_to_watts(float(link_tbl["noise_power_dbm"])),
            path_loss_exp=float(link_tbl.get("path_loss_exponent", 2.0)),
            snr_threshold=db_to_linear(float(link_tbl["snr_threshold_db"])),
            df_delay_s=float(link_tbl["df_delay_s"]),
            file_size_bits=float(link_tbl["file_size_bits"]),
            rate_mode=link_tbl.get("rate_mode", "shannon"),
            fixed_rate_bps=(
                float(link_tbl["fixed_rate_bps"]) if "fixed_rate_bps" in link_tbl else None
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"link: {exc}") from exc

    nodes_tbl = raw["nodes"]
    unknown_nodes = sorted(set(nodes_tbl) - set(_NODE_SECTIONS))
    if unknown_nodes:
        raise ConfigError(f"unknown key(s) {', '.join(f'nodes.{k}' for k in unknown_nodes)}")
    profiles: dict[NodeKind, RadioProfile] = {}
    for kind, section in (
        (NodeKind.GROUND_BS, "ground_bs"),
        (NodeKind.AIRCRAFT, "aircraft"),
        (NodeKind.SATELLITE, "satellite"),
    ):
        if section not in nodes_tbl:
            raise ConfigError(f"missing required section [nodes.{section}]")
        profiles[kind] = _parse_profile(nodes_tbl[section], f"nodes.{section}")

    run_tbl = raw["run"]
    _check_table(run_tbl, _RUN_KEYS, "run")
    seed = int(run_tbl["seed"])
    out_dir = run_tbl.get("out_dir", "out")
    realizations = int(run_tbl.get("realizations", 1000))
    if realizations < 1:
        raise ConfigError("run.realizations must be at least 1")

    syn_tbl = raw["synthetic"]
    _check_table(syn_tbl, _SYNTHETIC_KEYS, "synthetic")
    try:
        synthetic = SyntheticConfig(
            n_intermediate=int(syn_tbl["n_intermediate"]),
            link=link,
            bs_profile=profiles[NodeKind.GROUND_BS],
            aircraft_profile=profiles[NodeKind.AIRCRAFT],
            satellite_profile=profiles[NodeKind.SATELLITE],
            bs_angles=(
                float(syn_tbl.get("bs_theta_rad", 0.0)),
                float(syn_tbl.get("bs_phi_rad", 0.0)),
            ),
            target_angles=(
                float(syn_tbl["target_theta_rad"]),
                float(syn_tbl["target_phi_rad"]),
            ),
            sat_angles=(
                float(syn_tbl["satellite_theta_rad"]),
                float(syn_tbl["satellite_phi_rad"]),
            ),
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"synthetic: {exc}") from exc

    data_tbl = raw.get("data", {})
    _check_table(data_tbl, _DATA_KEYS, "data")
    site_name = data_tbl.get("bs_site", "LHR")
    if site_name not in AIRPORTS:
        raise ConfigError(f"data.bs_site: unknown site {site_name!r}, expected one of {sorted(AIRPORTS)}")
    site = AIRPORTS[site_name]
    if "bs_latitude_deg" in data_tbl or "bs_longitude_deg" in data_tbl:
        if not ("bs_latitude_deg" in data_tbl and "bs_longitude_deg" in data_tbl):
            raise ConfigError("data.bs_latitude_deg and data.bs_longitude_deg must be set together")
        try:
            site = GeodeticCoord(
                float(data_tbl["bs_latitude_deg"]), float(data_tbl["bs_longitude_deg"]), 0.0
            )
        except ValueError as exc:
            raise ConfigError(f"data: {exc}") from exc

    return RunConfig(
        link=link,
        profiles=profiles,
        synthetic=synthetic,
        flight_csv=data_tbl.get("flight_csv"),
        bs_site=site,
        out_dir=out_dir,
        seed=seed,
        realizations=realizations,
    )
