"""Exact symbolic verification of quantum principal bundles: presented algebras, Hopf structures,
differential calculi, connections, associated bundles and quantum gauge transformations."""

__version__ = "0.1.0"

from .scalars import ScalarValue, parse_scalar  # noqa: E402
from .ncalg import AlgebraPresentation, GeneratorSpec, PresentedAlgebra, define_algebra  # noqa: E402
from .hopf import Character, Corepresentation, HopfStructure  # noqa: E402
from .fodc import Calculus, CalculusData  # noqa: E402
from .bundle import Bundle, Connection, RepData  # noqa: E402
from .assoc import AssociatedBundle, Intertwiner  # noqa: E402
from .gauge import GaugeTransformation, TranslationMap, char_to_gauge, gauge_act  # noqa: E402
from .examples import get_example  # noqa: E402

__all__ = [
    "AlgebraPresentation", "AssociatedBundle", "Bundle", "Calculus", "CalculusData", "Character",
    "Connection", "Corepresentation", "GaugeTransformation", "GeneratorSpec", "HopfStructure",
    "Intertwiner", "PresentedAlgebra", "RepData", "ScalarValue", "TranslationMap", "char_to_gauge",
    "define_algebra", "gauge_act", "get_example", "parse_scalar",
]
