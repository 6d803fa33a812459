from .association import AssociationCheck
from .base import BaseCheck
from .composite import CompositeCheck
from .cutoff import CutoffCheck
from .derivatives import DerivativeCheck
from .embedding import EmbeddingCheck
from .polynomials import PolynomialCheck
from .powers import PowersCheck
from .pushforward import PushforwardCheck
from .regular import RegularCheck
from .scalars import ScalarFieldCheck
from .support import SupportCheck

CHECK_CLASSES = {
    "embedding": EmbeddingCheck,
    "polynomials": PolynomialCheck,
    "derivatives": DerivativeCheck,
    "support": SupportCheck,
    "association": AssociationCheck,
    "pushforward": PushforwardCheck,
    "regular": RegularCheck,
    "scalars": ScalarFieldCheck,
    "cutoff": CutoffCheck,
    "powers": PowersCheck,
}

__all__ = [
    "BaseCheck",
    "CompositeCheck",
    "CHECK_CLASSES",
    "AssociationCheck",
    "CutoffCheck",
    "DerivativeCheck",
    "EmbeddingCheck",
    "PolynomialCheck",
    "PowersCheck",
    "PushforwardCheck",
    "RegularCheck",
    "ScalarFieldCheck",
    "SupportCheck",
]
