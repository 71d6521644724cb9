"""Study configuration: JSON schema, validation, and catalog defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .atoms import TestFunction, gaussian
from .dispersion import Dispersion, LinearDispersion, QuadraticDispersion
from .errors import ConfigError

__all__ = ["StudyConfig", "load_config", "parse_config",
           "DEFAULT_KERNEL_SMEARS", "DEFAULT_WORD_SMEARS"]

# Smears used by kernel-check (first two) and corr-check (all four) when the
# config does not supply its own.  Broad in time so their frequency content
# stays inside the Taylor radius of the shell density, and mutually detuned so
# no graded term is killed by an accidental symmetry.
DEFAULT_WORD_SMEARS = (
    gaussian(width=2.5),
    gaussian(width=2.5, modulation=-0.4),
    gaussian(width=2.2, modulation=0.3),
    gaussian(width=2.0, modulation=0.2),
)
DEFAULT_KERNEL_SMEARS = DEFAULT_WORD_SMEARS[:2]


@dataclass
class StudyConfig:
    dispersion: Dispersion
    form_factor: TestFunction
    orders: tuple[int, ...]
    lambda_grid: tuple[float, ...]
    basis_size: int = 6
    particle_cap: int = 4
    sector_max: int = 3
    quad_abs: float = 1e-14
    quad_rel: float = 1e-11
    assert_rel: float = 1e-6
    seed: int = 0
    out_dir: str = "out"
    out_format: str = "csv"
    eps_supp: float = 1e-10
    smears: tuple[TestFunction, ...] = field(default=DEFAULT_WORD_SMEARS)
    rep_pairs: int = 50
    fault_injection: str | None = None


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _parse_dispersion(d: dict) -> Dispersion:
    _require(isinstance(d, dict) and "kind" in d, "dispersion needs a 'kind'")
    kind = d["kind"]
    dim = int(d.get("dimension", 1))
    try:
        if kind == "linear":
            return LinearDispersion(slope=float(d.get("slope", 1.0)),
                                    offset=float(d.get("offset", 0.0)),
                                    dimension=dim)
        if kind == "quadratic":
            return QuadraticDispersion(mass=float(d.get("mass", 1.0)),
                                       offset=float(d.get("offset", 0.0)),
                                       dimension=dim)
    except ValueError as exc:
        raise ConfigError(f"bad dispersion parameters: {exc}") from exc
    raise ConfigError(f"unknown dispersion kind {kind!r}")


def _parse_test_function(data, what: str) -> TestFunction:
    try:
        return TestFunction.from_json_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad {what}: {exc}") from exc


def parse_config(raw: dict) -> StudyConfig:
    _require(isinstance(raw, dict), "config root must be a JSON object")
    for key in ("dispersion", "form_factor", "orders", "lambda_grid"):
        _require(key in raw, f"config is missing {key!r}")

    dispersion = _parse_dispersion(raw["dispersion"])
    form_factor = _parse_test_function(raw["form_factor"], "form_factor")
    _require(form_factor.atoms != (), "form_factor must be nonempty")

    orders = tuple(int(n) for n in raw["orders"])
    _require(all(n >= 0 for n in orders), "orders must be nonnegative")

    grid = tuple(float(x) for x in raw["lambda_grid"])
    _require(len(grid) > 0, "lambda_grid must be nonempty")
    _require(all(x > 0 for x in grid), "lambda_grid entries must be positive")
    _require(all(a > b for a, b in zip(grid, grid[1:])),
             "lambda_grid must be strictly decreasing")

    trunc = raw.get("truncation", {})
    basis_size = int(trunc.get("basis_size", 6))
    particle_cap = int(trunc.get("particle_cap", 4))
    sector_max = int(trunc.get("sector_max", 3))
    _require(basis_size >= 2, "basis_size must be at least 2")
    _require(particle_cap >= 2, "particle_cap must be at least 2")
    _require(sector_max >= 0, "sector_max must be nonnegative")

    tols = raw.get("tolerances", {})
    quad_abs = float(tols.get("quad_abs", 1e-14))
    quad_rel = float(tols.get("quad_rel", 1e-11))
    assert_rel = float(tols.get("assert_rel", 1e-6))
    _require(quad_abs > 0 and quad_rel > 0 and assert_rel > 0,
             "tolerances must be positive")

    output = raw.get("output", {})
    out_format = output.get("format", "csv")
    _require(out_format in ("csv", "json"), "output format must be csv or json")

    smears = DEFAULT_WORD_SMEARS
    if "smears" in raw:
        _require(isinstance(raw["smears"], list) and raw["smears"],
                 "smears must be a nonempty list")
        smears = tuple(_parse_test_function(s, "smear") for s in raw["smears"])

    fault = raw.get("fault_injection")
    _require(fault in (None, "transpose_pairing"),
             f"unknown fault_injection {fault!r}")

    return StudyConfig(
        dispersion=dispersion,
        form_factor=form_factor,
        orders=orders,
        lambda_grid=grid,
        basis_size=basis_size,
        particle_cap=particle_cap,
        sector_max=sector_max,
        quad_abs=quad_abs,
        quad_rel=quad_rel,
        assert_rel=assert_rel,
        seed=int(raw.get("seed", 0)),
        out_dir=str(output.get("directory", "out")),
        out_format=out_format,
        eps_supp=float(raw.get("eps_supp", 1e-10)),
        smears=smears,
        rep_pairs=int(raw.get("rep_pairs", 50)),
        fault_injection=fault,
    )


def load_config(path: str | Path) -> StudyConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw)
