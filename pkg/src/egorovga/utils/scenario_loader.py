"""Parse scenario TOML files into a validated :class:`Scenario`.

A scenario names the checks to run and overrides any configuration section::

    name = "desk"
    mode = "fast"
    checks = ["embedding", "polynomials"]
    seed = 11

    [kernel]
    m = 2
    file = "kernel.json"        # optional, relative to the scenario file

    [domain]
    boxes = [[[-2.0, 2.0]]]

    [grid]
    rho_exponent_min = 8
    rho_exponent_max = 12

    [tolerances]
    association = 1e-7

    [distributions.shifted_delta]
    terms = [{kind = "point_mass", location = [0.5], coeff = 2.0}]
"""

import tomllib
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..algebra.dist import Distribution
from ..algebra.domain import Domain
from ..core.config import ConfigFactory, EgorovConfig, Mode
from ..core.exceptions import ConfigurationError, EgorovError, ScenarioError
from .logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)

OVERRIDE_SECTIONS = ("scalars", "kernel", "quadrature", "sampling", "grid", "tolerances", "regularity", "run")
SCENARIO_KEYS = {"name", "mode", "checks", "seed", "domain", "distributions", *OVERRIDE_SECTIONS}


@dataclass
class Scenario:
    name: str
    config: EgorovConfig
    checks: List[str]
    domain: Optional[Domain] = None
    distributions: Dict[str, Distribution] = field(default_factory=dict)
    kernel_file: Optional[Path] = None


class ScenarioLoader:
    """Builds scenarios from TOML text or files; every problem surfaces as ``ScenarioError``"""

    def __init__(self, known_checks):
        self.known_checks = tuple(known_checks)

    def load(self, path: Union[str, Path]) -> Scenario:
        path = Path(path)
        try:
            with path.open("rb") as file:
                data = tomllib.load(file)
        except FileNotFoundError as error:
            raise ScenarioError(f"Scenario file not found: {path}") from error
        except tomllib.TOMLDecodeError as error:
            raise ScenarioError(f"Cannot parse {path}: {error}") from error
        logger.info(f"Loaded scenario {path}")
        return self.from_dict(data, name=path.stem, base_dir=path.parent)

    def loads(self, text: str, name: str = "scenario") -> Scenario:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as error:
            raise ScenarioError(f"Cannot parse scenario: {error}") from error
        return self.from_dict(data, name=name)

    def from_dict(self, data: Dict[str, Any], name: str = "scenario", base_dir: Optional[Path] = None) -> Scenario:
        unknown = sorted(set(data) - SCENARIO_KEYS)
        if unknown:
            raise ScenarioError(f"Unknown scenario keys: {', '.join(unknown)}")

        config = self._build_config(data)
        checks = self._resolve_checks(data.get("checks", list(self.known_checks)))
        domain = self._build_domain(data.get("domain"))
        distributions = self._build_distributions(data.get("distributions", {}), domain)
        kernel_file = data.get("kernel", {}).get("file")
        if kernel_file is not None:
            kernel_file = Path(kernel_file)
            if base_dir is not None and not kernel_file.is_absolute():
                kernel_file = base_dir / kernel_file

        return Scenario(
            name=str(data.get("name", name)),
            config=config,
            checks=checks,
            domain=domain,
            distributions=distributions,
            kernel_file=kernel_file,
        )

    @staticmethod
    def _build_config(data: Dict[str, Any]) -> EgorovConfig:
        try:
            config = ConfigFactory.from_mode(Mode(str(data.get("mode", "default")).lower()))
        except ValueError as error:
            raise ScenarioError(f"Unknown mode: {data.get('mode')!r}") from error

        overrides = {}
        for section in OVERRIDE_SECTIONS:
            values = dict(data.get(section, {}))
            values.pop("file", None)
            if not values:
                continue
            if "offset_exponents" in values:
                values["offset_exponents"] = tuple(values["offset_exponents"])
            overrides[section] = values
        if "seed" in data:
            overrides.setdefault("sampling", {})["seed"] = int(data["seed"])

        try:
            config = config.with_overrides(**overrides)
        except ConfigurationError as error:
            raise ScenarioError(str(error)) from error
        ScenarioLoader._validate_tolerances(config)
        return config

    @staticmethod
    def _validate_tolerances(config: EgorovConfig):
        for tolerance in fields(config.tolerances):
            value = getattr(config.tolerances, tolerance.name)
            if not value > 0:
                raise ScenarioError(f"Tolerance '{tolerance.name}' must be positive, got {value}")
        if config.grid.rho_exponent_min > config.grid.rho_exponent_max:
            raise ScenarioError("grid.rho_exponent_min must not exceed grid.rho_exponent_max")

    def _resolve_checks(self, names) -> List[str]:
        if isinstance(names, str):
            names = [names]
        unknown = [name for name in names if name not in self.known_checks]
        if unknown:
            raise ScenarioError(
                f"Unknown checks: {', '.join(unknown)}; available: {', '.join(self.known_checks)}"
            )
        return list(names)

    @staticmethod
    def _build_domain(data) -> Optional[Domain]:
        if data is None:
            return None
        try:
            return Domain.from_dict(data)
        except (KeyError, TypeError, ValueError, EgorovError) as error:
            raise ScenarioError(f"Invalid domain: {error}") from error

    @staticmethod
    def _build_distributions(data: Dict[str, Any], domain: Optional[Domain]) -> Dict[str, Distribution]:
        domain = domain or Domain.interval(-2.0, 2.0)
        distributions = {}
        for name in sorted(data):
            try:
                distributions[name] = Distribution.from_dict(data[name], domain)
            except (KeyError, TypeError, ValueError, EgorovError) as error:
                raise ScenarioError(f"Invalid distribution '{name}': {error}") from error
        return distributions
