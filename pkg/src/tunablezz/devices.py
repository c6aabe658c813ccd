"""Device parameter files, bundled reference devices, and sweep configs.

Device files are JSON with ordinary-frequency units (GHz for mode
frequencies, anharmonicities and couplings; microseconds for coherence
times); loading converts to angular rad/s.  Unknown keys are rejected so
typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DeviceFileError
from .hilbert import DeviceParams, TWO_PI

#: Environment variable naming a directory searched for device files.
DEVICE_DIR_ENV = "TUNABLEZZ_DEVICE_DIR"

GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6

_FREQ_FIELDS = (
    "omega1_ghz",
    "omega2_ghz",
    "omega_plus_ghz",
    "omega_minus_max_ghz",
    "alpha1_ghz",
    "alpha2_ghz",
    "alpha_plus_ghz",
    "alpha_minus_ghz",
    "g1_plus_ghz",
    "g2_plus_ghz",
    "g1_minus_ghz",
    "g2_minus_ghz",
)
_TIME_FIELDS = ("t1_1_us", "t1_2_us", "t2_1_us", "t2_2_us")
_OPTIONAL_FIELDS = ("name", "flux_quantum")
REQUIRED_FIELDS = _FREQ_FIELDS + _TIME_FIELDS

BUNDLED_DEVICES = ("device_a", "device_b")


def _params_from_dict(data: dict, source: str, default_name: str) -> DeviceParams:
    unknown = sorted(set(data) - set(REQUIRED_FIELDS) - set(_OPTIONAL_FIELDS))
    if unknown:
        raise DeviceFileError(f"{source}: unknown keys {unknown}")
    missing = sorted(set(REQUIRED_FIELDS) - set(data))
    if missing:
        raise DeviceFileError(f"{source}: missing keys {missing}")
    for field in REQUIRED_FIELDS:
        if not isinstance(data[field], (int, float)) or isinstance(data[field], bool):
            raise DeviceFileError(f"{source}: field '{field}' must be a number")
    kwargs = {
        "name": data.get("name", default_name),
        "flux_quantum": data.get("flux_quantum", 1.0),
    }
    for field in _FREQ_FIELDS:
        kwargs[field[: -len("_ghz")]] = float(data[field]) * GHZ
    for field in _TIME_FIELDS:
        kwargs[field[: -len("_us")]] = float(data[field]) * 1e-6
    try:
        return DeviceParams(**kwargs)
    except ValueError as err:
        raise DeviceFileError(f"{source}: {err}") from err


def load_device(path: str | Path) -> DeviceParams:
    """Load and validate a device parameter file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as err:
        raise DeviceFileError(f"cannot read device file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise DeviceFileError(f"{path}: not valid JSON ({err})") from err
    if not isinstance(data, dict):
        raise DeviceFileError(f"{path}: device file must hold a JSON object")
    return _params_from_dict(data, str(path), path.stem)


def _bundled_text(name: str) -> str:
    return resources.files("tunablezz.data").joinpath(f"{name}.json").read_text()


def bundled_device(name: str) -> DeviceParams:
    """One of the reference devices shipped with the package."""
    if name not in BUNDLED_DEVICES:
        raise DeviceFileError(
            f"unknown bundled device {name!r}; available: {list(BUNDLED_DEVICES)}"
        )
    return _params_from_dict(json.loads(_bundled_text(name)), f"builtin:{name}", name)


def device_source_hash(spec: str) -> str:
    """SHA-256 of the device definition backing `spec` (name or path)."""
    if spec in BUNDLED_DEVICES and not os.path.exists(spec):
        payload = _bundled_text(spec).encode()
    else:
        payload = Path(spec).read_bytes()
    return hashlib.sha256(payload).hexdigest()


def resolve_device(spec: str, device_dir: str | None = None) -> tuple[DeviceParams, str]:
    """Resolve a CLI --device value to parameters and a source label.

    Lookup order: an existing path, then `<device_dir>/<spec>.json` (the
    directory defaulting to $TUNABLEZZ_DEVICE_DIR), then the bundled
    devices.
    """
    if os.path.exists(spec):
        return load_device(spec), spec
    directory = device_dir or os.environ.get(DEVICE_DIR_ENV)
    if directory:
        candidate = Path(directory) / f"{spec}.json"
        if candidate.exists():
            return load_device(candidate), str(candidate)
    if spec in BUNDLED_DEVICES:
        return bundled_device(spec), f"builtin:{spec}"
    raise DeviceFileError(
        f"cannot resolve device {spec!r}: not a file, not in "
        f"{directory or '$' + DEVICE_DIR_ENV}, and not a bundled device"
    )


@dataclass(frozen=True)
class SweepConfig:
    """A coupler-frequency sweep over a named parameter configuration."""

    config_id: str
    description: str
    params: DeviceParams
    omega_lo: float
    omega_hi: float

    def detuning_from_q2(self, omega_minus: float) -> float:
        return omega_minus - self.params.omega2


def _config_params(name, d12_mhz, g_coupler_mhz, alpha_coupler_mhz, bus=None) -> DeviceParams:
    omega2 = 5.0 * GHZ  # arbitrary absolute anchor; only detunings matter
    g_plus, dp2_mhz = bus if bus else (0.0, 1800.0)
    return DeviceParams(
        name=name,
        omega1=omega2 + d12_mhz * MHZ,
        omega2=omega2,
        omega_plus=omega2 + dp2_mhz * MHZ,
        omega_minus_max=8.0 * GHZ,
        alpha1=350 * MHZ,
        alpha2=350 * MHZ,
        alpha_plus=0.0,
        alpha_minus=alpha_coupler_mhz * MHZ,
        g1_plus=g_plus * MHZ,
        g2_plus=g_plus * MHZ,
        g1_minus=g_coupler_mhz * MHZ,
        g2_minus=g_coupler_mhz * MHZ,
        t1_1=10e-6,
        t1_2=10e-6,
        t2_1=10e-6,
        t2_2=10e-6,
    )


def interference_configs() -> dict[str, SweepConfig]:
    """Four benchmark layouts probing where the ZZ rate can cancel.

    All use 350 MHz qubit anharmonicities and a 750 MHz-anharmonicity
    swept coupler; the single-coupler layouts (a) and (c) leave the bus
    uncoupled.  Sweep windows are expressed through the coupler frequency
    and chosen to contain the interesting zero-crossing structure.
    """
    omega2 = 5.0 * GHZ
    configs = {
        "a": SweepConfig(
            config_id="a",
            description="qubits 1.5 GHz apart, one coupler swept between them",
            params=_config_params("config_a", 1500, 140, 750),
            omega_lo=omega2 + 0.35 * GHZ,
            omega_hi=omega2 + 1.15 * GHZ,
        ),
        "b": SweepConfig(
            config_id="b",
            description="straddling qubits, bus 1.8 GHz above, coupler swept below",
            params=_config_params("config_b", 250, 140, 750, bus=(160.0, 1800.0)),
            omega_lo=omega2 - 2.2 * GHZ,
            omega_hi=omega2 - 0.35 * GHZ,
        ),
        "c": SweepConfig(
            config_id="c",
            description="straddling qubits, one anharmonic coupler swept above",
            params=_config_params("config_c", 250, 120, 750),
            omega_lo=omega2 + 0.40 * GHZ,
            omega_hi=omega2 + 1.45 * GHZ,
        ),
        "d": SweepConfig(
            config_id="d",
            description="qubits out of straddling, bus above, coupler swept below",
            params=_config_params("config_d", 450, 140, 750, bus=(160.0, 1800.0)),
            omega_lo=omega2 - 2.2 * GHZ,
            omega_hi=omega2 - 0.35 * GHZ,
        ),
    }
    return configs


def equalized_coherence(params: DeviceParams) -> DeviceParams:
    """Copy of `params` with decoherence switched off (infinite times)."""
    return DeviceParams(
        **{
            **params.__dict__,
            "name": f"{params.name}_no_decoherence",
            "t1_1": math.inf,
            "t1_2": math.inf,
            "t2_1": math.inf,
            "t2_2": math.inf,
        }
    )
