"""Weightwise perfectly balanced Boolean functions and their weightwise nonlinearity."""

from .boolfn import BooleanFunction, anf, degree, is_wpb, restricted_weight, weight_slice
from .construction import ConstructionParams, build, build_detailed
from .family import FamilyAssignment, build_from_assignment, is_family_member, sample
from .gf2n import TraceSpec, build_context, eval_trace_form
from .nonlinearity import nl_k_naive, nl_k_reduced, nl_restricted, profile, upper_bound
from .orbits import Orbit, OrbitIndex, orbit_count, orbit_index, rotate

__version__ = "0.1.0"
