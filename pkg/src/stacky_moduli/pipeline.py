"""End-to-end assembly: Cox data -> quiver -> lattices -> S, I_de, constraints.

Also holds the reference inputs used by the tests, demos and CLI.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .glps import CoxData, GLData, build_cox_data, tilting_interval
from .lattice import FgAbelianGroup, GroupElement
from .polyring import GradedPresentation, Poly
from .quiver import DEFAULT_PATH_BUDGET, PathAlgebra, Quiver, build_quiver_of_sections, compute_relations
from .refined import (
    QuiverLattices, RefinementConstraint, SPresentation, build_lattices, build_s_presentation,
    de_ideal_generators, diagram_constraints,
)


@dataclass
class Pipeline:
    cox: CoxData
    quiver: Quiver
    algebra: PathAlgebra
    lattices: QuiverLattices
    S: SPresentation
    de_ideal: list[Poly]
    constraints: list[RefinementConstraint]

    @property
    def vertices(self) -> tuple[GroupElement, ...]:
        return self.quiver.vertices

    @property
    def peirce(self):
        return self.algebra.peirce

    def default_theta(self) -> tuple[int, ...]:
        return (1,) * (len(self.vertices) - 1)


def build_pipeline(C: CoxData, vertices: Sequence | None = None,
                   path_budget: int = DEFAULT_PATH_BUDGET) -> Pipeline:
    if vertices is None:
        vertices = tilting_interval(C)
    Q = build_quiver_of_sections(C, vertices)
    PA = compute_relations(Q, C, path_budget)
    QL = build_lattices(Q, C)
    S = build_s_presentation(PA, QL, C)
    ide = de_ideal_generators(PA.peirce, QL, S)
    cons = diagram_constraints(Q, PA.peirce, QL)
    return Pipeline(C, Q, PA, QL, S, ide, cons)


def gl_pipeline(g: GLData, path_budget: int = DEFAULT_PATH_BUDGET) -> Pipeline:
    return build_pipeline(build_cox_data(g), None, path_budget)


def cox_from_parts(variables: Sequence[str], group: FgAbelianGroup, degrees: Sequence, relations: Sequence[Poly],
                   c_class=None, irrelevant_locus: str = "origin", field=None) -> CoxData:
    P = GradedPresentation(variables, degrees, relations, group) if field is None else \
        GradedPresentation(variables, degrees, relations, group, field)
    c = group.element(c_class) if c_class is not None and not isinstance(c_class, GroupElement) else c_class
    return CoxData(P, group, P.degrees, c, None, irrelevant_locus)


# -- reference inputs -------------------------------------------------------------------

def weighted_p12() -> GLData:
    """P(1,2): ``y1`` of degree 1, ``y2`` of degree 2."""
    return GLData(1, (1, 2), ((1, 0), (0, 1)), names=("y2", "y1"))


def projective_line() -> GLData:
    return GLData(1)


def weighted_line_23() -> GLData:
    return GLData(1, (2, 3), ((1, 0), (0, 1)))


def weighted_line_222() -> GLData:
    return GLData(1, (2, 2, 2), ((1, 0), (0, 1), (1, 1)))


def hirzebruch_f2() -> tuple[CoxData, list[tuple[int, int]]]:
    """Cox ring ``k[s, t, u, v]`` of F_2 graded by ``Z f + Z h`` and the
    collection ``O, O(f), O(h), O(f + h)``.
    """
    G = FgAbelianGroup.free(2)
    C = cox_from_parts(("s", "t", "u", "v"), G, [(1, 0), (1, 0), (-2, 1), (0, 1)], [],
                       irrelevant_locus="(s,t)(u,v)")
    return C, [(0, 0), (1, 0), (0, 1), (1, 1)]


GL_FIXTURES = {
    "p12": weighted_p12,
    "p1": projective_line,
    "w23": weighted_line_23,
    "w222": weighted_line_222,
}
