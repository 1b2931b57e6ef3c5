"""CVA for European and American options under the Bates model.

Two estimators share a hybrid tree / finite-difference pricer:
exposure simulation with hybrid Monte Carlo (``htfd-htmc``) and a second,
coupled PIDE solve with a default-loss source term (``c-htfd``).
"""

from .model import (
    BatesParams,
    DefaultModel,
    Exercise,
    JumpLaw,
    NumericsConfig,
    OptionKind,
    OptionSpec,
    default_probability,
    published_base_case,
    payoff,
)
from .voltree import VolTree, build_tree
from .htfd import PriceSurface, build_jump_quadrature, build_y_grid, price_surface, read_price
from .htmc import ExposureProfile, PathBatch, expected_exposure, simulate_paths
from .cva import CvaResult, Method, cva_coupled_pide, cva_quadrature, run_method

__all__ = [
    "BatesParams", "DefaultModel", "Exercise", "JumpLaw", "NumericsConfig", "OptionKind",
    "OptionSpec", "default_probability", "published_base_case", "payoff", "VolTree", "build_tree",
    "PriceSurface", "build_jump_quadrature", "build_y_grid", "price_surface", "read_price",
    "ExposureProfile", "PathBatch", "expected_exposure", "simulate_paths", "CvaResult", "Method",
    "cva_coupled_pide", "cva_quadrature", "run_method",
]
