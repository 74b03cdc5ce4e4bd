"""Run configuration: JSON parsing, validation, and serialization.

One JSON document describes one run.  Every lattice and modulation
invariant is enforced at parse time and violations carry the offending
field path, so a bad config never reaches the numerics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeSpec, ModulationSpec, ModulationTone

SCENARIOS = (
    "spectrum",
    "scan_kappa",
    "phase_diagram",
    "threshold",
    "propagate",
    "effective_coupling",
)

_TOP_KEYS = {
    "scenario", "lattice", "modulation", "scan", "threshold",
    "propagate", "average", "tol_im", "output",
}
_LATTICE_KEYS = {"n_sites", "tunnelings", "gammas", "boundary"}
_MODULATION_KEYS = {"l", "omega0", "tones"}
_TONE_KEYS = {"kappa", "beta", "phi"}
_RANGE_KEYS = {"min", "max", "points"}
_THRESHOLD_KEYS = {"gamma_max", "tol"}
_PROPAGATE_KEYS = {"initial_site", "initial_amplitudes", "z_end", "steps", "stride"}
_AVERAGE_KEYS = {"window_periods", "steps_per_period"}


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field."""


def _require_keys(obj: dict, allowed: set, context: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown field '{context}.{key}'" if context else f"unknown field '{key}'")


def _number(obj: dict, key: str, context: str, default=None):
    if key not in obj:
        if default is not None:
            return default
        raise ConfigError(f"missing field '{context}.{key}'")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{context}.{key}' must be a number")
    return float(value)


def _integer(obj: dict, key: str, context: str, default=None):
    if key not in obj:
        if default is not None:
            return default
        raise ConfigError(f"missing field '{context}.{key}'")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{context}.{key}' must be an integer")
    return value


@dataclass(frozen=True)
class ScanRange:
    """Inclusive sweep [min, max] sampled at evenly spaced points."""

    min: float
    max: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("scan range needs points >= 2")
        if not self.min < self.max:
            raise ConfigError("scan range needs min < max")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "points": self.points}


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    lattice: LatticeSpec
    modulation: ModulationSpec
    scan: dict = field(default_factory=dict)           # name -> ScanRange
    gamma_max: float | None = None
    threshold_tol: float | None = None
    initial_site: int | None = None
    initial_amplitudes: tuple[complex, ...] | None = None
    z_end: float | None = None
    steps: int | None = None
    stride: int = 1
    window_periods: int = 1
    steps_per_period: int = 4096
    tol_im: float | None = None
    output: str | None = None

    def to_dict(self) -> dict:
        """Schema-shaped dict; parse_config on its JSON dump reproduces the config."""
        tones = []
        for tone in self.modulation.tones:
            beta = (
                {"rational": [tone.beta_pq[0], tone.beta_pq[1]]}
                if tone.is_rational
                else {"irrational": tone.beta}
            )
            tones.append({"kappa": tone.kappa, "beta": beta, "phi": tone.phi})
        doc = {
            "scenario": self.scenario,
            "lattice": {
                "n_sites": self.lattice.n_sites,
                "tunnelings": list(self.lattice.tunnelings),
                "gammas": list(self.lattice.gammas),
                "boundary": self.lattice.boundary,
            },
            "modulation": {
                "l": self.modulation.l,
                "omega0": self.modulation.omega0,
                "tones": tones,
            },
        }
        if self.scan:
            doc["scan"] = {name: rng.to_dict() for name, rng in self.scan.items()}
        if self.scenario == "threshold":
            doc["threshold"] = {"gamma_max": self.gamma_max, "tol": self.threshold_tol}
        if self.scenario == "propagate":
            block = {"z_end": self.z_end, "steps": self.steps, "stride": self.stride}
            if self.initial_site is not None:
                block["initial_site"] = self.initial_site
            else:
                block["initial_amplitudes"] = [
                    [a.real, a.imag] for a in self.initial_amplitudes
                ]
            doc["propagate"] = block
        if self.scenario == "effective_coupling":
            doc["average"] = {
                "window_periods": self.window_periods,
                "steps_per_period": self.steps_per_period,
            }
        if self.tol_im is not None:
            doc["tol_im"] = self.tol_im
        if self.output is not None:
            doc["output"] = self.output
        return doc


def _parse_tone(obj, index: int) -> ModulationTone:
    context = f"modulation.tones[{index}]"
    if not isinstance(obj, dict):
        raise ConfigError(f"field '{context}' must be an object")
    _require_keys(obj, _TONE_KEYS, context)
    kappa = _number(obj, "kappa", context)
    phi = _number(obj, "phi", context, default=0.0)
    if "beta" not in obj:
        raise ConfigError(f"missing field '{context}.beta'")
    beta = obj["beta"]
    if not isinstance(beta, dict) or len(beta) != 1:
        raise ConfigError(
            f"field '{context}.beta' needs a rationality tag: "
            '{"rational": [p, q]} or {"irrational": value}'
        )
    tag, payload = next(iter(beta.items()))
    try:
        if tag == "rational":
            if (
                not isinstance(payload, list)
                or len(payload) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in payload)
            ):
                raise ConfigError(f"field '{context}.beta.rational' must be [p, q] integers")
            return ModulationTone.rational(kappa, payload[0], payload[1], phi)
        if tag == "irrational":
            if isinstance(payload, bool) or not isinstance(payload, (int, float)):
                raise ConfigError(f"field '{context}.beta.irrational' must be a number")
            return ModulationTone.irrational(kappa, float(payload), phi)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"field '{context}': {exc}") from exc
    raise ConfigError(
        f"field '{context}.beta' has unknown tag '{tag}' (use 'rational' or 'irrational')"
    )


def _parse_lattice(obj) -> LatticeSpec:
    if not isinstance(obj, dict):
        raise ConfigError("field 'lattice' must be an object")
    _require_keys(obj, _LATTICE_KEYS, "lattice")
    n = _integer(obj, "n_sites", "lattice")
    boundary = obj.get("boundary", "open")
    if boundary not in ("open", "periodic"):
        raise ConfigError("field 'lattice.boundary' must be 'open' or 'periodic'")
    n_bonds = n - 1 if boundary == "open" else n
    tunnelings = obj.get("tunnelings")
    if tunnelings is None:
        raise ConfigError("missing field 'lattice.tunnelings'")
    if isinstance(tunnelings, (int, float)) and not isinstance(tunnelings, bool):
        tunnelings = [float(tunnelings)] * n_bonds
    elif not isinstance(tunnelings, list):
        raise ConfigError("field 'lattice.tunnelings' must be a number or a list")
    gammas = obj.get("gammas")
    if gammas is None:
        raise ConfigError("missing field 'lattice.gammas'")
    if isinstance(gammas, dict):
        if set(gammas) != {"alternating"}:
            raise ConfigError(
                "field 'lattice.gammas' object form supports only {\"alternating\": value}"
            )
        g = gammas["alternating"]
        if isinstance(g, bool) or not isinstance(g, (int, float)):
            raise ConfigError("field 'lattice.gammas.alternating' must be a number")
        if n % 2:
            raise ConfigError("alternating gammas need an even site count to balance")
        gammas = [((-1) ** site) * float(g) for site in range(1, n + 1)]
    elif not isinstance(gammas, list):
        raise ConfigError("field 'lattice.gammas' must be a list or {\"alternating\": value}")
    try:
        return LatticeSpec(n, tuple(tunnelings), tuple(gammas), boundary)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"field 'lattice': {exc}") from exc


def _parse_modulation(obj) -> ModulationSpec:
    if not isinstance(obj, dict):
        raise ConfigError("field 'modulation' must be an object")
    _require_keys(obj, _MODULATION_KEYS, "modulation")
    l = _integer(obj, "l", "modulation")
    omega0 = _number(obj, "omega0", "modulation")
    tones_obj = obj.get("tones", [])
    if not isinstance(tones_obj, list):
        raise ConfigError("field 'modulation.tones' must be a list")
    tones = tuple(_parse_tone(t, i) for i, t in enumerate(tones_obj))
    try:
        return ModulationSpec(l, omega0, tones)
    except ValueError as exc:
        raise ConfigError(f"field 'modulation': {exc}") from exc


def _parse_range(obj, name: str) -> ScanRange:
    context = f"scan.{name}"
    if not isinstance(obj, dict):
        raise ConfigError(f"field '{context}' must be an object")
    _require_keys(obj, _RANGE_KEYS, context)
    return ScanRange(
        _number(obj, "min", context), _number(obj, "max", context), _integer(obj, "points", context)
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate one JSON run description."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys(doc, _TOP_KEYS, "")
    scenario = doc.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"field 'scenario' must be one of {SCENARIOS}, got {scenario!r}")
    if "lattice" not in doc:
        raise ConfigError("missing field 'lattice'")
    if "modulation" not in doc:
        raise ConfigError("missing field 'modulation'")
    lattice = _parse_lattice(doc["lattice"])
    modulation = _parse_modulation(doc["modulation"])

    scan: dict[str, ScanRange] = {}
    if "scan" in doc:
        if not isinstance(doc["scan"], dict):
            raise ConfigError("field 'scan' must be an object")
        for name, rng in doc["scan"].items():
            if name not in ("kappa", "gamma_sq"):
                raise ConfigError(f"unknown field 'scan.{name}'")
            scan[name] = _parse_range(rng, name)
    if scenario == "scan_kappa" and "kappa" not in scan:
        raise ConfigError("scenario 'scan_kappa' needs 'scan.kappa'")
    if scenario == "phase_diagram" and ("kappa" not in scan or "gamma_sq" not in scan):
        raise ConfigError("scenario 'phase_diagram' needs 'scan.kappa' and 'scan.gamma_sq'")
    if "kappa" in scan and scan["kappa"].min < 0:
        raise ConfigError("field 'scan.kappa.min' must be >= 0")
    if "gamma_sq" in scan and scan["gamma_sq"].min < 0:
        raise ConfigError("field 'scan.gamma_sq.min' must be >= 0")

    kwargs: dict = {}
    if scenario == "threshold":
        block = doc.get("threshold")
        if not isinstance(block, dict):
            raise ConfigError("scenario 'threshold' needs a 'threshold' object")
        _require_keys(block, _THRESHOLD_KEYS, "threshold")
        kwargs["gamma_max"] = _number(block, "gamma_max", "threshold")
        kwargs["threshold_tol"] = _number(block, "tol", "threshold")
        if kwargs["gamma_max"] <= 0 or kwargs["threshold_tol"] <= 0:
            raise ConfigError("threshold gamma_max and tol must be > 0")
    elif "threshold" in doc:
        raise ConfigError("field 'threshold' only applies to scenario 'threshold'")

    if scenario == "propagate":
        block = doc.get("propagate")
        if not isinstance(block, dict):
            raise ConfigError("scenario 'propagate' needs a 'propagate' object")
        _require_keys(block, _PROPAGATE_KEYS, "propagate")
        kwargs["z_end"] = _number(block, "z_end", "propagate")
        kwargs["steps"] = _integer(block, "steps", "propagate")
        kwargs["stride"] = _integer(block, "stride", "propagate", default=1)
        if kwargs["z_end"] <= 0 or kwargs["steps"] < 1 or kwargs["stride"] < 1:
            raise ConfigError("propagate z_end, steps, and stride must be positive")
        has_site = "initial_site" in block
        has_amps = "initial_amplitudes" in block
        if has_site == has_amps:
            raise ConfigError(
                "propagate needs exactly one of 'initial_site' or 'initial_amplitudes'"
            )
        if has_site:
            site = _integer(block, "initial_site", "propagate")
            if not 1 <= site <= lattice.n_sites:
                raise ConfigError(
                    f"field 'propagate.initial_site' must be in [1, {lattice.n_sites}]"
                )
            kwargs["initial_site"] = site
        else:
            amps = block["initial_amplitudes"]
            if (
                not isinstance(amps, list)
                or len(amps) != lattice.n_sites
                or not all(isinstance(a, list) and len(a) == 2 for a in amps)
            ):
                raise ConfigError(
                    "field 'propagate.initial_amplitudes' must be N pairs [re, im]"
                )
            kwargs["initial_amplitudes"] = tuple(complex(a[0], a[1]) for a in amps)
    elif "propagate" in doc:
        raise ConfigError("field 'propagate' only applies to scenario 'propagate'")

    if "average" in doc:
        block = doc["average"]
        if not isinstance(block, dict):
            raise ConfigError("field 'average' must be an object")
        _require_keys(block, _AVERAGE_KEYS, "average")
        kwargs["window_periods"] = _integer(block, "window_periods", "average", default=1)
        kwargs["steps_per_period"] = _integer(block, "steps_per_period", "average", default=4096)
        if kwargs["window_periods"] < 1 or kwargs["steps_per_period"] < 8:
            raise ConfigError("average window_periods and steps_per_period too small")

    if "tol_im" in doc:
        tol = _number(doc, "tol_im", "")
        if tol <= 0:
            raise ConfigError("field 'tol_im' must be > 0")
        kwargs["tol_im"] = tol
    if "output" in doc:
        if not isinstance(doc["output"], str) or not doc["output"]:
            raise ConfigError("field 'output' must be a nonempty string")
        kwargs["output"] = doc["output"]

    return RunConfig(scenario=scenario, lattice=lattice, modulation=modulation, scan=scan, **kwargs)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())
