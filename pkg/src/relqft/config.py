"""Scenario configuration for the verification runner.

A scenario is a small JSON document choosing the model scale, the system
and frame constructions for the generic batteries, the suites to run,
tolerance overrides, and the seed for every randomized draw.  Parsing is
strict: unknown keys are rejected with the line they appear on, so a typo
in a config never silently degrades a run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from relqft.lattice import LatticePoint, ModelParams
from relqft.tolerances import TOLERANCE_KEYS, defaults


class ConfigError(ValueError):
    """A scenario config that fails to parse or validate."""


_TOP_KEYS = {"schema", "model", "window", "system", "frames", "states",
             "suites", "tolerances", "seed"}
_MODEL_KEYS = {"N", "s"}
_SYSTEM_KEYS = {"kind", "momenta", "phi"}
_SYSTEM_KINDS = {"character-orbit"}
_PHI_KINDS = {"random", "identity"}
_STATE_KEYS = {"preparation", "vacuum"}
_STATE_VALUES = {"random", "maximally-mixed"}

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario parameters; see DEFAULT_CONFIG for the shape."""

    schema: int = SCHEMA_VERSION
    N: int = 5
    s: int = 2
    window: int = 2
    system_kind: str = "character-orbit"
    momenta: tuple = (LatticePoint(1, 0), LatticePoint(2, 0),
                      LatticePoint(4, 0), LatticePoint(3, 0))
    phi_kind: str = "random"
    frames: tuple = ("smeared-regular", "smeared-regular-strong",
                     "smeared-lorentz", "smeared-spacetime", "sharp-regular")
    states: dict = field(default_factory=lambda: {
        "preparation": "random", "vacuum": "maximally-mixed"})
    suites: tuple = ("all",)
    tolerances: dict = field(default_factory=dict)
    seed: int = 20260819

    def model(self) -> ModelParams:
        return ModelParams(self.N, self.s)

    def lifted_model(self) -> ModelParams:
        return ModelParams(self.N, self.s, causal_mode="lifted",
                           window=self.window)

    def tol(self, name: str) -> float:
        base = defaults()
        if name not in base:
            raise KeyError(f"unknown tolerance {name!r}")
        return float(self.tolerances.get(name, base[name]))

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "model": {"N": self.N, "s": self.s},
            "window": self.window,
            "system": {"kind": self.system_kind,
                       "momenta": [[p.u, p.v] for p in self.momenta],
                       "phi": self.phi_kind},
            "frames": list(self.frames),
            "states": dict(self.states),
            "suites": list(self.suites),
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
        }


DEFAULT_CONFIG = ScenarioConfig()


def _find_line(text: str, key: str) -> int:
    """Best-effort line number of a key token in the raw config text."""
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return 0


def _reject_unknown(section: dict, allowed: set, where: str, text: str,
                    path: str) -> None:
    for key in section:
        if key not in allowed:
            line = _find_line(text, key)
            raise ConfigError(
                f"{path}:{line}: unknown key {key!r} in {where} "
                f"(allowed: {', '.join(sorted(allowed))})")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def parse_config(text: str, path: str = "<config>") -> ScenarioConfig:
    """Parse and structurally validate a JSON scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), f"{path}:1: top level must be an object")
    _reject_unknown(doc, _TOP_KEYS, "the top level", text, path)

    cfg = DEFAULT_CONFIG
    kwargs: dict = {}

    schema = doc.get("schema", SCHEMA_VERSION)
    _require(schema == SCHEMA_VERSION,
             f"{path}:{_find_line(text, 'schema')}: unsupported schema "
             f"{schema!r} (this build reads schema {SCHEMA_VERSION})")
    kwargs["schema"] = schema

    model = doc.get("model", {})
    _require(isinstance(model, dict),
             f"{path}:{_find_line(text, 'model')}: model must be an object")
    _reject_unknown(model, _MODEL_KEYS, "model", text, path)
    kwargs["N"] = int(model.get("N", cfg.N))
    kwargs["s"] = int(model.get("s", cfg.s))

    kwargs["window"] = int(doc.get("window", cfg.window))

    system = doc.get("system", {})
    _require(isinstance(system, dict),
             f"{path}:{_find_line(text, 'system')}: system must be an object")
    _reject_unknown(system, _SYSTEM_KEYS, "system", text, path)
    kind = system.get("kind", cfg.system_kind)
    _require(kind in _SYSTEM_KINDS,
             f"{path}:{_find_line(text, 'kind')}: unknown system kind {kind!r}")
    kwargs["system_kind"] = kind
    momenta = system.get("momenta")
    if momenta is None:
        kwargs["momenta"] = cfg.momenta
    else:
        _require(isinstance(momenta, list) and momenta
                 and all(isinstance(p, list) and len(p) == 2 for p in momenta),
                 f"{path}:{_find_line(text, 'momenta')}: momenta must be a "
                 "non-empty list of [u, v] pairs")
        kwargs["momenta"] = tuple(LatticePoint(int(p[0]), int(p[1]))
                                  for p in momenta)
    phi = system.get("phi", cfg.phi_kind)
    _require(phi in _PHI_KINDS,
             f"{path}:{_find_line(text, 'phi')}: unknown phi spec {phi!r}")
    kwargs["phi_kind"] = phi

    frames = doc.get("frames", list(cfg.frames))
    _require(isinstance(frames, list) and all(isinstance(f, str) for f in frames),
             f"{path}:{_find_line(text, 'frames')}: frames must be a list of names")
    kwargs["frames"] = tuple(frames)

    states = doc.get("states", dict(cfg.states))
    _require(isinstance(states, dict),
             f"{path}:{_find_line(text, 'states')}: states must be an object")
    _reject_unknown(states, _STATE_KEYS, "states", text, path)
    for name, value in states.items():
        _require(value in _STATE_VALUES,
                 f"{path}:{_find_line(text, name)}: unknown state spec "
                 f"{value!r} for {name!r}")
    merged_states = dict(cfg.states)
    merged_states.update(states)
    kwargs["states"] = merged_states

    suites = doc.get("suites", list(cfg.suites))
    _require(isinstance(suites, list) and suites
             and all(isinstance(sn, str) for sn in suites),
             f"{path}:{_find_line(text, 'suites')}: suites must be a "
             "non-empty list of names")
    kwargs["suites"] = tuple(suites)

    tolerances = doc.get("tolerances", {})
    _require(isinstance(tolerances, dict),
             f"{path}:{_find_line(text, 'tolerances')}: tolerances must be "
             "an object")
    kwargs["tolerances"] = normalize_tolerances(tolerances, path=path, text=text)

    kwargs["seed"] = int(doc.get("seed", cfg.seed))

    out = ScenarioConfig(**kwargs)
    try:
        out.model()
        out.lifted_model()
    except ValueError as exc:
        raise ConfigError(f"{path}: invalid model parameters: {exc}") from exc
    return out


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path=path)


def normalize_tolerances(overrides: dict, path: str = "<tol>",
                         text: str = "") -> dict:
    """Validate tolerance overrides, accepting names with or without the
    tol_ prefix; values must be positive floats."""
    out = {}
    for key, value in overrides.items():
        name = key if key.startswith("tol_") else f"tol_{key}"
        if name not in TOLERANCE_KEYS:
            line = _find_line(text, key)
            raise ConfigError(
                f"{path}:{line}: unknown tolerance {key!r} "
                f"(allowed: {', '.join(TOLERANCE_KEYS)})")
        try:
            val = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                f"{path}: tolerance {key!r} is not a number: {value!r}") from exc
        if not val > 0:
            raise ConfigError(f"{path}: tolerance {key!r} must be positive")
        out[name] = val
    return out


def parse_tol_flags(pairs) -> dict:
    """Parse repeated KEY=VAL command-line overrides."""
    overrides = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigError(f"--tol expects KEY=VAL, got {pair!r}")
        key, _, value = pair.partition("=")
        overrides[key.strip()] = value.strip()
    return normalize_tolerances(overrides)


def with_overrides(cfg: ScenarioConfig, seed: int | None = None,
                   tolerances: dict | None = None) -> ScenarioConfig:
    """A copy of cfg with command-line overrides applied."""
    merged = dict(cfg.tolerances)
    merged.update(tolerances or {})
    return ScenarioConfig(
        schema=cfg.schema, N=cfg.N, s=cfg.s, window=cfg.window,
        system_kind=cfg.system_kind, momenta=cfg.momenta,
        phi_kind=cfg.phi_kind, frames=cfg.frames, states=dict(cfg.states),
        suites=cfg.suites, tolerances=merged,
        seed=cfg.seed if seed is None else int(seed))
