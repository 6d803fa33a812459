from typing import Optional, Sequence

from src.egorovga.algebra.dist import Distribution, iota_embed
from src.egorovga.algebra.domain import Domain, NearStandardPoint, sample_near_standard
from src.egorovga.algebra.functions import StandardFunction
from src.egorovga.algebra.genfun import GenFunc, equals_on_monad, sigma_embed
from src.egorovga.algebra.mollifier import Kernel
from src.egorovga.algebra.regular import RegularityReport, certify_member, refute_member
from src.egorovga.algebra.weak import AsymptoticFit, TestFunction, Verdict, associated, default_suite, pair
from src.egorovga.core.config import ConfigFactory, EgorovConfig, Mode
from src.egorovga.runners.scenario import kernel_for


class EgorovGA:
    """Main interface: one kernel and one domain with the configured numerics"""

    def __init__(
        self,
        config: EgorovConfig = None,
        mode: str = None,
        kernel: Optional[Kernel] = None,
        domain: Optional[Domain] = None,
    ):
        self.config = EgorovGA._initialize_config(config, mode)
        self.kernel = kernel or kernel_for(self.config)
        self.domain = domain or Domain.interval(-2.0, 2.0)

    @staticmethod
    def _initialize_config(config: EgorovConfig, mode: str) -> EgorovConfig:
        """Initialize configuration from provided config or mode"""
        if config is not None:
            return config
        elif mode is not None:
            return ConfigFactory.from_mode(Mode(mode))
        else:
            return ConfigFactory.from_mode(Mode.DEFAULT)

    def sigma(self, f: StandardFunction) -> GenFunc:
        """Embed a smooth standard function as a constant-in-rho generalized function"""
        return sigma_embed(f, self.domain)

    def iota(self, T: Distribution) -> GenFunc:
        """Embed a distribution through the cutoff and the delta kernel"""
        return iota_embed(T, self.kernel)

    def suite(self) -> list:
        return default_suite(self.domain.dim, self.domain, margin=max(self.config.grid.rho_grid()))

    def points(self) -> list:
        sampling = self.config.sampling
        return sample_near_standard(
            self.domain,
            sampling.n_base,
            sampling.offset_exponents,
            seed=sampling.seed,
            margin_fraction=sampling.margin_fraction,
            window=sampling.window,
        )

    def pair(self, f: GenFunc, phi: TestFunction) -> AsymptoticFit:
        return pair(f, phi, self.config.grid.rho_grid(), **self._pairing_options())

    def associated(self, f: GenFunc, g: GenFunc, phi_suite: Sequence[TestFunction] = None) -> Verdict:
        return associated(
            f,
            g,
            phi_suite if phi_suite is not None else self.suite(),
            self.config.grid.rho_grid(),
            self.config.tolerances.association,
            **self._pairing_options(),
        )

    def equals_on_monad(self, f: GenFunc, g: GenFunc, pts: Sequence[NearStandardPoint] = None) -> bool:
        return equals_on_monad(
            f,
            g,
            pts if pts is not None else self.points(),
            self.config.grid.rho_grid(),
            self.config.tolerances.monad,
            nodes_per_axis=self.config.quadrature.nodes_per_axis,
            local_substitution=self.config.quadrature.local_substitution,
            rho_max=self.config.grid.rho_max,
        )

    def certify(self, f: GenFunc) -> RegularityReport:
        return certify_member(f)

    def refute(self, f: GenFunc) -> RegularityReport:
        regularity = self.config.regularity
        return refute_member(
            f,
            alpha_max=regularity.alpha_max,
            rho_grid=regularity.rho_grid(),
            slope_threshold=regularity.slope_threshold,
            nodes_per_axis=self.config.quadrature.nodes_per_axis,
            rho_max=self.config.grid.rho_max,
            seed=self.config.sampling.seed,
        )

    def _pairing_options(self) -> dict:
        return {
            "nodes": self.config.quadrature.pairing_nodes,
            "panels": self.config.quadrature.pairing_panels,
            "nodes_per_axis": self.config.quadrature.nodes_per_axis,
            "residual_tol": self.config.tolerances.fit_residual,
            "floor": self.config.tolerances.fit_floor,
            "q": self.kernel.q,
        }


__all__ = [
    "EgorovGA",
    "ConfigFactory",
    "Mode",
]
