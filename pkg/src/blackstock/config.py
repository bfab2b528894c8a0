"""Run configuration: JSON schema, validation and defaults.

A run is described by one JSON file.  Minimal example::

    {
      "medium": {"c": 1.0, "b": 1.0, "k": 1.0, "sigma": 1.0},
      "initial": {
        "psi0": {"kind": "single_mode", "mode": [1], "amplitude": 0.01},
        "psi1": {"kind": "single_mode", "mode": [1], "amplitude": 0.01}
      },
      "integrator": {"T": 20.0, "dt": 0.001}
    }

Defaults for omitted sections: a 1D box of length pi with 64 modes (32 per
axis in 3D), zero initial data, the second-order IMEX scheme sampling every
step, Lyapunov weights (0.1, 0.01, 0.05), seed 0.  Unknown keys anywhere are
rejected, and section-level validation reuses the component invariants (for
example ``b <= 0`` is rejected with the medium's own message).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .dynamics import MediumParams
from .energy import GammaWeights
from .fields import InitialDataSpec
from .grid import Grid
from .integrate import StepConfig

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]

DEFAULT_MODES = {1: 64, 2: 64, 3: 32}


class ConfigError(ValueError):
    """A configuration file failed to parse or validate."""


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration with all component objects constructed."""

    grid: Grid
    medium: MediumParams
    psi0: InitialDataSpec
    psi1: InitialDataSpec
    step: StepConfig
    T: float
    sample_every: int
    gammas: GammaWeights
    seed: int
    output_dir: str | None = None
    fit: dict = field(default_factory=dict)
    threshold: dict = field(default_factory=dict)
    study: dict = field(default_factory=dict)
    inequalities: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)


def _reject_unknown(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _require(section: dict, key: str, where: str) -> Any:
    if key not in section:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return section[key]


def _parse_grid(section: dict) -> Grid:
    _reject_unknown(section, {"dim", "extents", "modes"}, "grid")
    dim = int(section.get("dim", 0)) or None
    extents = section.get("extents")
    modes = section.get("modes")
    if dim is None:
        if extents is not None:
            dim = len(extents)
        elif modes is not None:
            dim = len(modes)
        else:
            dim = 1
    if extents is None:
        extents = [math.pi] * dim
    if modes is None:
        if dim not in DEFAULT_MODES:
            raise ConfigError("grid dim must be 1, 2 or 3")
        modes = [DEFAULT_MODES[dim]] * dim
    try:
        return Grid(extents=tuple(extents), modes=tuple(modes))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc


def _parse_medium(section: dict) -> MediumParams:
    _reject_unknown(section, {"c", "b", "k", "sigma"}, "medium")
    try:
        return MediumParams(
            c=float(section.get("c", 1.0)),
            b=float(section.get("b", 1.0)),
            k=float(section.get("k", 0.0)),
            sigma=float(section.get("sigma", 0.0)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid medium: {exc}") from exc


def _parse_initial_one(section: dict, where: str) -> InitialDataSpec:
    kind = _require(section, "kind", where)
    try:
        if kind == "zero":
            _reject_unknown(section, {"kind"}, where)
            return InitialDataSpec.zero()
        if kind == "single_mode":
            _reject_unknown(section, {"kind", "mode", "amplitude"}, where)
            return InitialDataSpec.single_mode(
                _require(section, "mode", where),
                float(_require(section, "amplitude", where)),
            )
        if kind == "multi_mode":
            _reject_unknown(section, {"kind", "terms"}, where)
            terms = [
                (term["mode"], float(term["amplitude"]))
                for term in _require(section, "terms", where)
            ]
            return InitialDataSpec.multi_mode(terms)
        if kind == "power_law":
            _reject_unknown(section, {"kind", "exponent", "amplitude"}, where)
            return InitialDataSpec.power_law(
                float(_require(section, "exponent", where)),
                float(_require(section, "amplitude", where)),
            )
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc
    raise ConfigError(f"unknown initial-data kind {kind!r} in {where}")


def _parse_integrator(section: dict) -> tuple[StepConfig, float, int]:
    allowed = {"scheme", "dt", "T", "sample_every", "picard_tol", "picard_max_iter"}
    _reject_unknown(section, allowed, "integrator")
    try:
        step = StepConfig(
            dt=float(section.get("dt", 1e-3)),
            scheme=str(section.get("scheme", "imex2")),
            picard_tol=float(section.get("picard_tol", 1e-10)),
            picard_max_iter=int(section.get("picard_max_iter", 50)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid integrator: {exc}") from exc
    T = float(section.get("T", 20.0))
    if T <= 0:
        raise ConfigError("invalid integrator: final time T must be positive")
    sample_every = int(section.get("sample_every", 1))
    if sample_every < 1:
        raise ConfigError("invalid integrator: sample_every must be at least 1")
    return step, T, sample_every


def _parse_gammas(section: dict) -> GammaWeights:
    _reject_unknown(section, {"gamma1", "gamma2", "gamma3"}, "gammas")
    try:
        return GammaWeights(
            gamma1=float(section.get("gamma1", 0.1)),
            gamma2=float(section.get("gamma2", 0.01)),
            gamma3=float(section.get("gamma3", 0.05)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid gammas: {exc}") from exc


_TOP_LEVEL_KEYS = {
    "grid",
    "medium",
    "initial",
    "integrator",
    "gammas",
    "seed",
    "output_dir",
    "fit",
    "threshold",
    "study",
    "inequalities",
    "sweep",
}


def parse_config(raw: dict) -> RunConfig:
    """Validate a parsed JSON object into a RunConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a JSON object")
    _reject_unknown(raw, _TOP_LEVEL_KEYS, "configuration")
    grid = _parse_grid(raw.get("grid", {}))
    medium = _parse_medium(raw.get("medium", {}))
    initial = raw.get("initial", {})
    _reject_unknown(initial, {"psi0", "psi1"}, "initial")
    psi0 = (
        _parse_initial_one(initial["psi0"], "initial.psi0")
        if "psi0" in initial
        else InitialDataSpec.zero()
    )
    psi1 = (
        _parse_initial_one(initial["psi1"], "initial.psi1")
        if "psi1" in initial
        else InitialDataSpec.zero()
    )
    step, T, sample_every = _parse_integrator(raw.get("integrator", {}))
    gammas = _parse_gammas(raw.get("gammas", {}))
    seed = int(raw.get("seed", 0))
    output_dir = raw.get("output_dir")
    # Mode indices must exist on the grid; realize once to surface errors now.
    try:
        psi0.realize(grid)
        psi1.realize(grid)
    except IndexError as exc:
        raise ConfigError(f"invalid initial data: {exc}") from exc
    return RunConfig(
        grid=grid,
        medium=medium,
        psi0=psi0,
        psi1=psi1,
        step=step,
        T=T,
        sample_every=sample_every,
        gammas=gammas,
        seed=seed,
        output_dir=output_dir,
        fit=dict(raw.get("fit", {})),
        threshold=dict(raw.get("threshold", {})),
        study=dict(raw.get("study", {})),
        inequalities=dict(raw.get("inequalities", {})),
        sweep=dict(raw.get("sweep", {})),
    )


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a JSON configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"configuration file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"JSON parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config(raw)
