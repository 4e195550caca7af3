"""Quivers of sections, refined representations and point-count checks
for Geigle-Lenzing projective spaces and other multigraded Cox rings."""

from .errors import *  # noqa: F401,F403
from .lattice import (
    FgAbelianGroup, GroupElement, GroupHom, IntMatrix, SmithForm, Sublattice, dual_group_order,
    element_equal, kernel_lattice, smith_normal_form,
)
from .fields import GF, QQ
from .polyring import GradedPresentation, Poly
from .glps import CoxData, GLData, build_cox_data, leq, normalize, tilting_interval, validate_general_position
from .quiver import Quiver, build_quiver_of_sections, compute_relations, gamma_iso
from .refined import (
    RefinedRep, build_lattices, build_s_presentation, captures_cox_check, check_refined,
    de_ideal_generators, diagram_constraints, gauge_act, homogenize, is_theta_stable, specialize,
)
from .verify import compare_masses, fiber_check, refined_mass, stack_mass
from .pipeline import Pipeline, build_pipeline, gl_pipeline

__version__ = "0.1.0"
