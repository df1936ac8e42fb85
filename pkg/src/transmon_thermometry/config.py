"""Run configuration: JSON schema, strict validation, canonical serialization.

The configuration is a single JSON object.  Unknown keys are rejected with
the offending path; every omitted key takes a documented default.  Units at
this boundary are experiment-friendly: GHz for omega/2pi, mK, us, ns, ueV,
MHz for rates and E_c/h, kilo-ohm for junction resistance.

Parsing records the fully resolved configuration (defaults filled in, user
units preserved); ``serialize`` emits exactly those values, so
parse -> serialize -> parse is the identity.  The resolved JSON is embedded
in every output header for auditability.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bath import BathSpec
from .constants import ghz_to_rad_per_s, mhz_to_joule, uev_to_joule
from .device import DeviceParams, preset, preset_names
from .errors import NoiseModel
from .estimators import KINDS
from .protocol import (
    PULSE_TIMINGS,
    READOUT_MODES,
    ProtocolConfig,
    PureStateResponses,
)
from .quasiparticle import JunctionParams, josephson_energy_from_qubit


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    device: DeviceParams
    protocol: ProtocolConfig
    noise: NoiseModel | None
    temperatures: np.ndarray
    extra_baths: tuple[BathSpec, ...]
    responses: PureStateResponses
    include_quasiparticle: bool
    ef_rate_factor: float
    error_column: int
    fisher_shots: int
    fisher_degeneracy: int
    t_meas: float
    fit_cutoff: float
    fit_estimator: str
    seed: int | None
    out_path: str | None
    out_format: str
    resolved: dict = field(repr=False, default_factory=dict)


_SCHEMA_KEYS = {
    "": {"device", "sweep", "baths", "protocol", "noise", "quasiparticle",
         "responses", "fisher", "fit", "seed", "output", "ef_rate_factor",
         "error_column"},
    "device": {"label", "omega_ge_ghz", "omega_ef_ghz", "ec_mhz", "gap_uev",
               "gamma1_base_mhz", "tau1_us", "rn_kohm", "zeta_inverse"},
    "sweep": {"start_mk", "stop_mk", "points"},
    "bath": {"temperature_mk", "rate_mhz"},
    "protocol": {"pi_pulse_ns", "readout_us", "efficiency_ge", "efficiency_ef",
                 "readout_mode", "pulse_timing"},
    "noise": {"sigma_v", "shots", "sigma_a", "sigma_b", "sigma_c"},
    "fisher": {"shots", "degeneracy", "t_meas_s"},
    "fit": {"cutoff_mk", "estimator"},
    "output": {"path", "format"},
}


def _check_keys(obj: dict, schema: str, path: str) -> None:
    allowed = _SCHEMA_KEYS[schema]
    for key in obj:
        if key not in allowed:
            raise ConfigError(
                f"unknown key {key!r} at {path or 'top level'};"
                f" allowed: {', '.join(sorted(allowed))}"
            )


def _section(obj: dict, key: str) -> dict:
    value = obj.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{key} must be an object")
    _check_keys(value, key, key)
    return value


def _number(obj: dict, key: str, path: str, default=None, low=None, high=None,
            integer: bool = False, required: bool = False):
    if key not in obj:
        if required:
            raise ConfigError(f"missing required key {path}.{key}")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{path}.{key} must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key} must be finite")
    if low is not None and value < low:
        raise ConfigError(f"{path}.{key} must be >= {low}, got {value}")
    if high is not None and value > high:
        raise ConfigError(f"{path}.{key} must be <= {high}, got {value}")
    return int(value) if integer else float(value)


def _choice(obj: dict, key: str, path: str, options, default: str) -> str:
    value = obj.get(key, default)
    if value not in options:
        raise ConfigError(f"{path}.{key} must be one of {', '.join(options)}")
    return value


def _parse_device(spec, resolved: dict) -> DeviceParams:
    if isinstance(spec, str):
        if spec not in preset_names():
            raise ConfigError(
                f"device: unknown preset {spec!r}; available: {', '.join(preset_names())}"
            )
        resolved["device"] = spec
        return preset(spec)
    if not isinstance(spec, dict):
        raise ConfigError("device must be a preset name or an object")
    _check_keys(spec, "device", "device")
    path = "device"
    f_ge = _number(spec, "omega_ge_ghz", path, low=1e-6, required=True)
    f_ef = _number(spec, "omega_ef_ghz", path, low=1e-6, required=True)
    ec_mhz = _number(spec, "ec_mhz", path, default=220.0, low=1e-6)
    gap_uev = _number(spec, "gap_uev", path, default=180.0, low=1e-6)
    rn_kohm = _number(spec, "rn_kohm", path, default=5.0, low=1e-9)
    zeta_inv = _number(spec, "zeta_inverse", path, default=1.0e4, low=1.0)
    label = spec.get("label", "custom")
    if not isinstance(label, str):
        raise ConfigError("device.label must be a string")
    if "gamma1_base_mhz" in spec and "tau1_us" in spec:
        raise ConfigError("device: give gamma1_base_mhz or tau1_us, not both")
    out = {"label": label, "omega_ge_ghz": f_ge, "omega_ef_ghz": f_ef,
           "ec_mhz": ec_mhz, "gap_uev": gap_uev, "rn_kohm": rn_kohm,
           "zeta_inverse": zeta_inv}
    if "tau1_us" in spec:
        tau1_us = _number(spec, "tau1_us", path, low=1e-9)
        gamma1 = 2.0 * math.pi / (tau1_us * 1e-6)
        out["tau1_us"] = tau1_us
    else:
        g_mhz = _number(spec, "gamma1_base_mhz", path, default=0.19, low=1e-12)
        gamma1 = ghz_to_rad_per_s(1e-3 * g_mhz)
        out["gamma1_base_mhz"] = g_mhz
    resolved["device"] = out
    omega_ge = ghz_to_rad_per_s(f_ge)
    ec = mhz_to_joule(ec_mhz)
    junction = JunctionParams(
        gap=uev_to_joule(gap_uev),
        charging_energy=ec,
        josephson_energy=josephson_energy_from_qubit(omega_ge, ec),
        normal_resistance=rn_kohm * 1e3,
        subgap_transparency_inverse=zeta_inv,
    )
    return DeviceParams(
        omega_ge=omega_ge,
        omega_ef=ghz_to_rad_per_s(f_ef),
        gamma1_base=gamma1,
        readout_window=2e-6,
        junction=junction,
        label=label,
    )


def parse_config(obj: dict) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    _check_keys(obj, "", "")
    resolved: dict = {}

    device = _parse_device(obj.get("device", "R4-I"), resolved)

    sweep_obj = _section(obj, "sweep")
    start = _number(sweep_obj, "start_mk", "sweep", default=20.0, low=0.01)
    stop = _number(sweep_obj, "stop_mk", "sweep", default=300.0, low=0.01)
    points = _number(sweep_obj, "points", "sweep", default=29, low=1, integer=True)
    if stop < start:
        raise ConfigError("sweep.stop_mk must be >= sweep.start_mk")
    resolved["sweep"] = {"start_mk": start, "stop_mk": stop, "points": points}
    temperatures = np.linspace(start, stop, points) * 1e-3

    baths: list[BathSpec] = []
    if "baths" in obj:
        if not isinstance(obj["baths"], list) or not obj["baths"]:
            raise ConfigError("baths must be a non-empty list when given")
        resolved_baths = []
        for i, bath_obj in enumerate(obj["baths"]):
            path = f"baths[{i}]"
            if not isinstance(bath_obj, dict):
                raise ConfigError(f"{path} must be an object")
            _check_keys(bath_obj, "bath", path)
            t_mk = _number(bath_obj, "temperature_mk", path, low=1e-3, required=True)
            r_mhz = _number(bath_obj, "rate_mhz", path, low=0.0, required=True)
            resolved_baths.append({"temperature_mk": t_mk, "rate_mhz": r_mhz})
            baths.append(BathSpec(temperature=1e-3 * t_mk,
                                  base_rate=ghz_to_rad_per_s(1e-3 * r_mhz)))
        resolved["baths"] = resolved_baths

    proto_obj = _section(obj, "protocol")
    pi_ns = _number(proto_obj, "pi_pulse_ns", "protocol", default=165.0, low=0.0)
    ro_us = _number(proto_obj, "readout_us", "protocol", default=2.0, low=0.0)
    eff_ge = _number(proto_obj, "efficiency_ge", "protocol", default=1.0,
                     low=0.0, high=1.0)
    eff_ef = _number(proto_obj, "efficiency_ef", "protocol", default=1.0,
                     low=0.0, high=1.0)
    readout_mode = _choice(proto_obj, "readout_mode", "protocol",
                           READOUT_MODES, "time_averaged")
    pulse_timing = _choice(proto_obj, "pulse_timing", "protocol",
                           PULSE_TIMINGS, "delay_before")
    resolved["protocol"] = {
        "pi_pulse_ns": pi_ns, "readout_us": ro_us,
        "efficiency_ge": eff_ge, "efficiency_ef": eff_ef,
        "readout_mode": readout_mode, "pulse_timing": pulse_timing,
    }
    protocol = ProtocolConfig(
        pi_pulse_duration=1e-9 * pi_ns,
        readout_duration=1e-6 * ro_us,
        efficiency_ge=eff_ge,
        efficiency_ef=eff_ef,
        readout_mode=readout_mode,
        pulse_timing=pulse_timing,
    )
    device = replace(device, readout_window=protocol.readout_duration)

    noise = None
    if "noise" in obj:
        noise_obj = _section(obj, "noise")
        sigma_v = _number(noise_obj, "sigma_v", "noise", default=0.0, low=0.0)
        shots = _number(noise_obj, "shots", "noise", default=1, low=1, integer=True)
        resolved["noise"] = {"sigma_v": sigma_v, "shots": shots}
        kwargs = {}
        for name in ("sigma_a", "sigma_b", "sigma_c"):
            if name in noise_obj:
                kwargs[name] = _number(noise_obj, name, "noise", low=0.0)
                resolved["noise"][name] = kwargs[name]
        noise = NoiseModel(sigma_voltage=sigma_v, shots=shots, **kwargs)

    qp = obj.get("quasiparticle", True)
    if not isinstance(qp, bool):
        raise ConfigError("quasiparticle must be true or false")
    resolved["quasiparticle"] = qp

    responses_obj = obj.get("responses", [0.0, 1.0, 2.0])
    if (not isinstance(responses_obj, list) or len(responses_obj) != 3
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in responses_obj)):
        raise ConfigError("responses must be a list of 3 numbers [phi_g, phi_e, phi_f]")
    resolved["responses"] = [float(v) for v in responses_obj]
    responses = PureStateResponses(*resolved["responses"])

    fisher_obj = _section(obj, "fisher")
    fisher_shots = _number(fisher_obj, "shots", "fisher", default=2 ** 17,
                           low=1, integer=True)
    fisher_degeneracy = _number(fisher_obj, "degeneracy", "fisher", default=10,
                                low=2, integer=True)
    t_meas = _number(fisher_obj, "t_meas_s", "fisher", default=29.0, low=1e-12)
    resolved["fisher"] = {"shots": fisher_shots, "degeneracy": fisher_degeneracy,
                          "t_meas_s": t_meas}

    fit_obj = _section(obj, "fit")
    cutoff_mk = _number(fit_obj, "cutoff_mk", "fit", default=170.0, low=1.0)
    fit_estimator = fit_obj.get("estimator", "A2")
    if fit_estimator not in KINDS:
        raise ConfigError(f"fit.estimator must be one of {', '.join(KINDS)}")
    resolved["fit"] = {"cutoff_mk": cutoff_mk, "estimator": fit_estimator}

    seed = _number(obj, "seed", "", default=None, low=0, integer=True)
    if seed is not None:
        resolved["seed"] = seed

    out_obj = _section(obj, "output")
    out_path = out_obj.get("path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError("output.path must be a string")
    out_format = _choice(out_obj, "format", "output", ("csv", "json"), "csv")
    resolved["output"] = ({"path": out_path, "format": out_format}
                          if out_path is not None else {"format": out_format})

    ef_rate_factor = _number(obj, "ef_rate_factor", "", default=2.0, low=0.0)
    error_column = _number(obj, "error_column", "", default=1, low=1, high=3,
                           integer=True)
    resolved["ef_rate_factor"] = ef_rate_factor
    resolved["error_column"] = error_column

    return RunConfig(
        device=device,
        protocol=protocol,
        noise=noise,
        temperatures=temperatures,
        extra_baths=tuple(baths),
        responses=responses,
        include_quasiparticle=qp,
        ef_rate_factor=ef_rate_factor,
        error_column=error_column,
        fisher_shots=fisher_shots,
        fisher_degeneracy=fisher_degeneracy,
        t_meas=t_meas,
        fit_cutoff=1e-3 * cutoff_mk,
        fit_estimator=fit_estimator,
        seed=seed,
        out_path=out_path,
        out_format=out_format,
        resolved=resolved,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from err
    return parse_config(obj)


def serialize(cfg: RunConfig) -> str:
    """Canonical one-line JSON of the resolved configuration."""
    return json.dumps(cfg.resolved, sort_keys=True)
