"""Run configuration: schema, file parsing, precedence, and validation.

Configs are flat UTF-8 ``key = value`` files with ``#`` comments.  The merge
precedence is defaults < config file < command-line flags, and unknown keys
are rejected with a line diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from math import sqrt

from .errors import ConfigError

COMMANDS = ("classical", "spectrum", "evolve", "tunnel", "instanton", "compare")

_METHODS = ("rk4", "split")
_POTENTIALS = ("harmonic", "cubic")
_CONVENTIONS = ("real_a", "scaled", "complex_zero")


def _to_float(text: str) -> float:
    return float(text)


def _to_int(text: str) -> int:
    value = int(text)
    return value


def _to_str(text: str) -> str:
    return text


def _to_sweep(text: str) -> tuple:
    body = text
    if "=" in body:
        name, body = body.split("=", 1)
        if name.strip() != "gamma":
            raise ValueError(f"sweep parameter must be gamma, got {name.strip()!r}")
    values = tuple(float(tok) for tok in body.split(",") if tok.strip() != "")
    if not values:
        raise ValueError("sweep must list at least one value")
    return values


# key -> (converter, default)
SCHEMA = {
    "omega": (_to_float, 1.0),
    "gamma": (_to_float, 0.1),
    "a": (_to_float, 1.0),
    "hbar": (_to_float, 1.0),
    "omega2": (_to_float, None),
    "c": (_to_float, None),
    "x_min": (_to_float, -12.0),
    "x_max": (_to_float, 12.0),
    "n": (_to_int, 800),
    "T": (_to_float, 40.0),
    "m": (_to_int, 2048),
    "method": (_to_str, "rk4"),
    "step": (_to_float, 1e-3),
    "horizon": (_to_float, 10.0),
    "x0": (_to_float, 1.0),
    "p0": (_to_float, 0.0),
    "potential": (_to_str, "harmonic"),
    "k": (_to_int, 6),
    "stride": (_to_int, 10),
    "tol": (_to_float, 1e-4),
    "convention": (_to_str, "complex_zero"),
    "sweep": (_to_sweep, None),
    "out": (_to_str, None),
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, validated parameters for one CLI invocation."""

    command: str
    omega: float
    gamma: float
    a: float
    hbar: float
    omega2: float | None
    c: float | None
    x_min: float
    x_max: float
    n: int
    T: float
    m: int
    method: str
    step: float
    horizon: float
    x0: float
    p0: float
    potential: str
    k: int
    stride: int
    tol: float
    convention: str
    sweep: tuple | None
    out: str | None

    def gammas(self) -> tuple:
        """Sweep entries, or the single configured gamma."""
        return self.sweep if self.sweep is not None else (self.gamma,)

    def provenance(self, version: str) -> str:
        """Deterministic config echo; excludes the output directory."""
        parts = [f"dissipaq {version}", f"command={self.command}"]
        for f in fields(self):
            if f.name in ("command", "out"):
                continue
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            parts.append(f"{f.name}={value!r}" if isinstance(value, str) else f"{f.name}={value}")
        return " ".join(parts)


def parse_config_file(path: str) -> dict:
    """Read a key = value config file; unknown keys and bad lines error out."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, text = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = text
    return values


def _convert(key: str, text: str):
    converter, _ = SCHEMA[key]
    try:
        return converter(text)
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key!r}: {text!r} ({exc})") from exc


def build_config(command: str, file_values: dict | None, flag_values: dict | None) -> RunConfig:
    """Merge defaults, config file, and flags (in rising precedence) and validate."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    resolved = {key: default for key, (_, default) in SCHEMA.items()}
    for source in (file_values or {}, flag_values or {}):
        for key, text in source.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown key {key!r}")
            resolved[key] = _convert(key, text) if isinstance(text, str) else text
    config = RunConfig(command=command, **resolved)
    validate(config)
    return config


def validate(config: RunConfig) -> None:
    """Check every module precondition reachable from this command."""
    c = config
    if c.omega <= 0.0:
        raise ConfigError("omega must be positive")
    if c.a <= 0.0:
        raise ConfigError("a must be positive")
    if c.hbar <= 0.0:
        raise ConfigError("hbar must be positive")
    if c.gamma < 0.0:
        raise ConfigError("gamma must be nonnegative")
    if c.omega2 is not None and c.omega2 <= 0.0:
        raise ConfigError("omega2 override must be positive")
    if not c.x_min < c.x_max:
        raise ConfigError("x_min must be strictly less than x_max")
    if c.n < 16:
        raise ConfigError("n must be at least 16")
    if c.T <= 0.0:
        raise ConfigError("T must be positive")
    if c.m < 64 or (c.m & (c.m - 1)) != 0:
        raise ConfigError("m must be a power of two, at least 64")
    if c.method not in _METHODS:
        raise ConfigError(f"method must be one of {_METHODS}")
    if c.potential not in _POTENTIALS:
        raise ConfigError(f"potential must be one of {_POTENTIALS}")
    if c.convention not in _CONVENTIONS:
        raise ConfigError(f"convention must be one of {_CONVENTIONS}")
    if c.step <= 0.0 or c.horizon <= 0.0:
        raise ConfigError("step and horizon must be positive")
    if c.k < 1:
        raise ConfigError("k must be at least 1")
    if c.k > c.n:
        raise ConfigError("k cannot exceed the grid size n")
    if c.stride < 1:
        raise ConfigError("stride must be at least 1")
    if c.tol <= 0.0:
        raise ConfigError("tol must be positive")

    for gamma in c.gammas():
        if gamma < 0.0:
            raise ConfigError("sweep gammas must be nonnegative")
        if c.command in ("spectrum", "evolve") and gamma >= c.omega:
            raise ConfigError(
                f"overdamped: gamma={gamma:.6g} >= omega={c.omega:.6g}"
            )
        if c.command in ("tunnel", "compare") and gamma >= c.omega / sqrt(2.0):
            raise ConfigError(
                f"gamma={gamma:.6g} >= omega/sqrt(2): outside the barrier's validity range"
            )
