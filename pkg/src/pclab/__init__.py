"""Exact tools for the principal curve graph of a surface of finite type."""

from .curves import NormalCurve, random_curve
from .errors import PclabError
from .kernel import are_isotopic, embed_pair, geometric_intersection
from .mcg import MappingClass, apply, dilatation_estimate, thurston_veech
from .predicates import EdgeRule, adjacent, cg_distance_class, pc_distance_class, pc_upper_bound
from .regions import binds, stratum_signature, trace_regions
from .triangulation import SurfaceSpec, build_surface

__version__ = "0.1.0"
