"""Burnside Induction.

Exact computations with Burnside rings, Mackey and Green functors, Dress
induction, Amitsur complexes and bifree bisets for small finite groups.
"""

__version__ = "0.1.0"

from .amitsur import amitsur_complex, homotopy_from_element, two_adic_pipeline
from .bisets import BifreeBiset, BisetMorphism, balanced_product, j_lower, j_upper, tau
from .bqgr import bqgr, ideal_I_M, image_of_unit_map
from .burnside import BurnsideElement, burnside_ring, table_of_marks
from .chains import ChainData, check_exactness, repair_filtered_truncated, repair_pseudo_complex
from .config import Limits, RunConfig, load_config
from .dress import generating_element, induction_coefficients, is_dress_generating, is_generating
from .exceptions import BurnsideError
from .groups import Group, Subgroup, group_from_spec
from .gsets import GMap, GSet, parse_gset_spec
from .mackey import GreenRingData, MackeyData, functor_by_name, validate_green, validate_mackey

__all__ = [
    "BifreeBiset",
    "BisetMorphism",
    "BurnsideElement",
    "BurnsideError",
    "ChainData",
    "GMap",
    "GSet",
    "GreenRingData",
    "Group",
    "Limits",
    "MackeyData",
    "RunConfig",
    "Subgroup",
    "amitsur_complex",
    "balanced_product",
    "bqgr",
    "burnside_ring",
    "check_exactness",
    "functor_by_name",
    "generating_element",
    "group_from_spec",
    "homotopy_from_element",
    "ideal_I_M",
    "image_of_unit_map",
    "induction_coefficients",
    "is_dress_generating",
    "is_generating",
    "j_lower",
    "j_upper",
    "load_config",
    "parse_gset_spec",
    "repair_filtered_truncated",
    "repair_pseudo_complex",
    "table_of_marks",
    "tau",
    "two_adic_pipeline",
    "validate_green",
    "validate_mackey",
]
