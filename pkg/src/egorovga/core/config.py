import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Tuple

from .exceptions import ConfigurationError

ENV_PREFIX = "EGOROV_GA_"


class Mode(Enum):
    DEFAULT = "default"
    FAST = "fast"
    STRICT = "strict"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ScalarConfig:
    truncation_order: int = 8


@dataclass(frozen=True)
class KernelConfig:
    m: int = 2
    quad_resolution: int = 128
    table_size: int = 4096
    max_m: int = 8
    max_condition: float = 1e13


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_per_axis: int = 128
    local_substitution: bool = True
    pairing_nodes: int = 48
    pairing_panels: int = 4


@dataclass(frozen=True)
class SamplingConfig:
    n_base: int = 4
    offset_exponents: Tuple[int, ...] = (1, 2)
    margin_fraction: float = 0.05
    window: float = 2.0
    seed: int = 7


@dataclass(frozen=True)
class GridConfig:
    rho_exponent_min: int = 8
    rho_exponent_max: int = 16
    rho_max: float = 0.5

    def rho_grid(self) -> List[float]:
        """Dyadic grid rho_j = 2^-j, coarse to fine."""
        return [2.0**-j for j in range(self.rho_exponent_min, self.rho_exponent_max + 1)]


@dataclass(frozen=True)
class ToleranceConfig:
    monad: float = 1e-9
    association: float = 1e-7
    fit_residual: float = 1e-6
    fit_floor: float = 1e-10


@dataclass(frozen=True)
class RegularityConfig:
    alpha_max: int = 6
    slope_threshold: float = 0.5
    rho_exponent_min: int = 3
    rho_exponent_max: int = 8

    def rho_grid(self) -> List[float]:
        return [2.0**-j for j in range(self.rho_exponent_min, self.rho_exponent_max + 1)]


@dataclass(frozen=True)
class RunConfig:
    threads: int = 1
    float_digits: int = 17


@dataclass(frozen=True)
class EgorovConfig:
    scalars: ScalarConfig = field(default_factory=ScalarConfig)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    regularity: RegularityConfig = field(default_factory=RegularityConfig)
    run: RunConfig = field(default_factory=RunConfig)

    def with_overrides(self, **sections) -> "EgorovConfig":
        """Return a copy with whole sections or single fields replaced.

        ``with_overrides(kernel={"m": 3})`` replaces one field of a section,
        ``with_overrides(kernel=KernelConfig(m=3))`` replaces the section.
        """
        updates = {}
        for section_name, value in sections.items():
            if not hasattr(self, section_name):
                raise ConfigurationError(f"Unknown configuration section: {section_name}")
            if isinstance(value, dict):
                current = getattr(self, section_name)
                try:
                    updates[section_name] = replace(current, **value)
                except TypeError as error:
                    raise ConfigurationError(
                        f"Invalid field for section '{section_name}': {error}"
                    ) from error
            else:
                updates[section_name] = value
        return replace(self, **updates)


class ConfigFactory:
    """Factory for creating configurations from modes and the environment"""

    @staticmethod
    def from_mode(mode: Mode) -> EgorovConfig:
        """Create configuration from a predefined mode"""
        config_creators = {
            Mode.FAST: ConfigFactory._create_fast_config,
            Mode.STRICT: ConfigFactory._create_strict_config,
            Mode.CUSTOM: ConfigFactory._create_custom_config,
        }

        creator = config_creators.get(mode, lambda: EgorovConfig())
        config = creator()
        return ConfigFactory._apply_thread_cap(config)

    @staticmethod
    def _get_environment_value(key: str, default, converter=str):
        """Get environment variable value with type conversion"""
        value = os.getenv(ENV_PREFIX + key)
        if value is None:
            return default
        try:
            return converter(value)
        except ValueError as error:
            raise ConfigurationError(
                f"Invalid value for {ENV_PREFIX + key}: {value!r}"
            ) from error

    @staticmethod
    def _get_environment_float(key: str, default: float) -> float:
        return ConfigFactory._get_environment_value(key, default, float)

    @staticmethod
    def _get_environment_int(key: str, default: int) -> int:
        return ConfigFactory._get_environment_value(key, default, int)

    @staticmethod
    def _get_environment_bool(key: str, default: bool) -> bool:
        value = os.getenv(ENV_PREFIX + key)
        if value is None:
            return default
        return value.lower() in ("true", "1", "yes", "on")

    @staticmethod
    def _get_environment_exponents(key: str, default: Tuple[int, ...]) -> Tuple[int, ...]:
        """Get offset exponents from environment variable (format: '1,2')"""
        value = os.getenv(ENV_PREFIX + key)
        if value is None:
            return default

        exponents = []
        for item in value.split(","):
            try:
                exponents.append(int(item.strip()))
            except ValueError:
                continue
        return tuple(exponents) if exponents else default

    @staticmethod
    def _apply_thread_cap(config: EgorovConfig) -> EgorovConfig:
        threads = ConfigFactory._get_environment_int("THREADS", config.run.threads)
        if threads < 1:
            raise ConfigurationError(f"{ENV_PREFIX}THREADS must be positive, got {threads}")
        return config.with_overrides(run={"threads": threads})

    @staticmethod
    def _create_custom_config() -> EgorovConfig:
        """Create configuration from environment variables with EGOROV_GA_ prefix"""
        return EgorovConfig(
            scalars=ScalarConfig(
                truncation_order=ConfigFactory._get_environment_int("TRUNCATION_ORDER", 8)
            ),
            kernel=ConfigFactory._create_kernel_config_from_env(),
            quadrature=ConfigFactory._create_quadrature_config_from_env(),
            sampling=ConfigFactory._create_sampling_config_from_env(),
            grid=ConfigFactory._create_grid_config_from_env(),
            tolerances=ConfigFactory._create_tolerance_config_from_env(),
            regularity=ConfigFactory._create_regularity_config_from_env(),
        )

    @staticmethod
    def _create_kernel_config_from_env() -> KernelConfig:
        return KernelConfig(
            m=ConfigFactory._get_environment_int("KERNEL_M", 2),
            quad_resolution=ConfigFactory._get_environment_int("KERNEL_QUAD_RESOLUTION", 128),
            table_size=ConfigFactory._get_environment_int("KERNEL_TABLE_SIZE", 4096),
        )

    @staticmethod
    def _create_quadrature_config_from_env() -> QuadratureConfig:
        return QuadratureConfig(
            nodes_per_axis=ConfigFactory._get_environment_int("QUAD_NODES_PER_AXIS", 128),
            local_substitution=ConfigFactory._get_environment_bool(
                "QUAD_LOCAL_SUBSTITUTION", True
            ),
            pairing_nodes=ConfigFactory._get_environment_int("QUAD_PAIRING_NODES", 48),
            pairing_panels=ConfigFactory._get_environment_int("QUAD_PAIRING_PANELS", 4),
        )

    @staticmethod
    def _create_sampling_config_from_env() -> SamplingConfig:
        return SamplingConfig(
            n_base=ConfigFactory._get_environment_int("SAMPLING_N_BASE", 4),
            offset_exponents=ConfigFactory._get_environment_exponents(
                "SAMPLING_OFFSET_EXPONENTS", (1, 2)
            ),
            margin_fraction=ConfigFactory._get_environment_float(
                "SAMPLING_MARGIN_FRACTION", 0.05
            ),
            window=ConfigFactory._get_environment_float("SAMPLING_WINDOW", 2.0),
            seed=ConfigFactory._get_environment_int("SEED", 7),
        )

    @staticmethod
    def _create_grid_config_from_env() -> GridConfig:
        return GridConfig(
            rho_exponent_min=ConfigFactory._get_environment_int("RHO_EXPONENT_MIN", 8),
            rho_exponent_max=ConfigFactory._get_environment_int("RHO_EXPONENT_MAX", 16),
            rho_max=ConfigFactory._get_environment_float("RHO_MAX", 0.5),
        )

    @staticmethod
    def _create_tolerance_config_from_env() -> ToleranceConfig:
        return ToleranceConfig(
            monad=ConfigFactory._get_environment_float("TOL_MONAD", 1e-9),
            association=ConfigFactory._get_environment_float("TOL_ASSOCIATION", 1e-7),
            fit_residual=ConfigFactory._get_environment_float("TOL_FIT_RESIDUAL", 1e-6),
            fit_floor=ConfigFactory._get_environment_float("TOL_FIT_FLOOR", 1e-10),
        )

    @staticmethod
    def _create_regularity_config_from_env() -> RegularityConfig:
        return RegularityConfig(
            alpha_max=ConfigFactory._get_environment_int("ALPHA_MAX", 6),
            slope_threshold=ConfigFactory._get_environment_float("SLOPE_THRESHOLD", 0.5),
        )

    @staticmethod
    def _create_fast_config() -> EgorovConfig:
        """Create a low-resolution configuration for quick desk checks"""
        return EgorovConfig(
            quadrature=QuadratureConfig(pairing_nodes=32, pairing_panels=2),
            sampling=SamplingConfig(n_base=2, offset_exponents=(1,)),
            grid=GridConfig(rho_exponent_min=8, rho_exponent_max=12),
            regularity=RegularityConfig(alpha_max=4),
        )

    @staticmethod
    def _create_strict_config() -> EgorovConfig:
        """Create a high-resolution configuration with tighter tolerances"""
        return EgorovConfig(
            kernel=KernelConfig(quad_resolution=192),
            quadrature=QuadratureConfig(nodes_per_axis=192, pairing_nodes=64, pairing_panels=6),
            sampling=SamplingConfig(n_base=8, offset_exponents=(1, 2, 3)),
            tolerances=ToleranceConfig(monad=1e-11, association=1e-8),
        )
