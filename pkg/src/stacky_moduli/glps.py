"""Cox data of Geigle-Lenzing projective spaces.

Input is a dimension ``d``, weights ``p_0..p_n`` and linear forms
``l_0..l_n`` in ``t_0..t_d``.  The ring is presented on the ``y`` variables
alone: the first ``d + 1`` forms become coordinates, so each remaining form
gives one relation ``y_j^{p_j} = sum_i a_ji y_i^{p_i}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .errors import GeneralPositionViolated, NonLinearForm
from .fields import QQ, rref
from .lattice import FgAbelianGroup, GroupElement
from .polyring import GradedPresentation, Poly


@dataclass(frozen=True)
class GLData:
    """``d``, weights and linear forms (coefficient vectors over ``t_0..t_d``)."""

    d: int
    weights: tuple[int, ...] = ()
    forms: tuple[tuple[Fraction, ...], ...] = ()
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        forms = tuple(_coerce_form(f, self.d) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "weights", tuple(int(p) for p in self.weights))
        if len(self.weights) != len(forms):
            raise ValueError(f"{len(self.weights)} weights for {len(forms)} forms")
        if any(p < 1 for p in self.weights):
            raise ValueError("weights must be positive integers")
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != len(forms) or len(set(names)) != len(names):
                raise ValueError("names must be distinct, one per form")
            object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.forms) - 1

    def variable_names(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"y{i}" for i in range(len(self.forms)))


def _coerce_form(f, d: int) -> tuple[Fraction, ...]:
    if isinstance(f, Poly):
        if f.nvars != d + 1:
            raise NonLinearForm(f"form in {f.nvars} variables, expected {d + 1}")
        coeffs = [Fraction(0)] * (d + 1)
        for m, c in f.terms.items():
            if sum(m) != 1:
                raise NonLinearForm(f"{f.format()} is not a linear form")
            coeffs[m.index(1)] = Fraction(c)
        return tuple(coeffs)
    coeffs = tuple(Fraction(x) for x in f)
    if len(coeffs) != d + 1:
        raise NonLinearForm(f"linear form needs {d + 1} coefficients, got {len(coeffs)}")
    return coeffs


def _rank(vectors) -> int:
    return len(rref(list(vectors), QQ, len(vectors[0]) if vectors else 0)[1]) if vectors else 0


def validate_general_position(g: GLData) -> tuple[bool, tuple[int, ...] | None]:
    """Check that every set of at most ``d + 1`` forms is independent.

    Returns ``(True, None)`` or ``(False, offending index subset)``; subsets
    are scanned by size, then lexicographically.
    """
    for k in range(1, min(g.d + 1, len(g.forms)) + 1):
        for subset in combinations(range(len(g.forms)), k):
            if _rank([g.forms[i] for i in subset]) < k:
                return False, subset
    return True, None


def normalize(g: GLData) -> GLData:
    """Adjoin weight-1 coordinate forms ``t_i`` until there are ``d + 1`` forms.

    The first coordinate that keeps the forms in general position is used;
    adjoined entries go after the user's.
    """
    ok, witness = validate_general_position(g)
    if not ok:
        raise GeneralPositionViolated(f"forms {witness} are linearly dependent")
    forms, weights = list(g.forms), list(g.weights)
    names = list(g.names) if g.names is not None else None
    while len(forms) < g.d + 1:
        for i in range(g.d + 1):
            e = tuple(Fraction(int(j == i)) for j in range(g.d + 1))
            trial = GLData(g.d, tuple(weights) + (1,), tuple(forms) + (e,))
            if validate_general_position(trial)[0]:
                forms.append(e)
                weights.append(1)
                if names is not None:
                    k = len(names)
                    while f"y{k}" in names:
                        k += 1
                    names.append(f"y{k}")
                break
        else:  # pragma: no cover - a basis vector always extends an independent set
            raise GeneralPositionViolated("cannot extend forms to d + 1 independent ones")
    if len(forms) == len(g.forms):
        return g
    return GLData(g.d, tuple(weights), tuple(forms), tuple(names) if names is not None else None)


@dataclass
class CoxData:
    """A Cox ring with its grading group and the class of the canonical degree.

    ``c_class`` and ``gl`` are only set for Geigle-Lenzing input; for such
    data the irrelevant locus is the origin.
    """

    presentation: GradedPresentation
    group: FgAbelianGroup
    generator_classes: tuple[GroupElement, ...]
    c_class: GroupElement | None = None
    gl: GLData | None = None
    irrelevant_locus: str = "origin"
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.presentation.variables

    def hilbert_value(self, d) -> int:
        return self.presentation.hilbert_value(d)


def build_cox_data(g: GLData) -> CoxData:
    g = normalize(g)
    n1, d = len(g.forms), g.d
    # generators y_0..y_n, c
    relators = []
    for i, p in enumerate(g.weights):
        col = [0] * (n1 + 1)
        col[i] = p
        col[n1] = -1
        relators.append(col)
    c_vec = [0] * n1 + [1]
    L = FgAbelianGroup(n1 + 1, relators, orient_by=[c_vec])
    degrees = [L.generator(i) for i in range(n1)]

    # l_j = sum_i a_ji l_i for j > d, in terms of the first d + 1 forms
    base = [list(g.forms[i]) for i in range(d + 1)]
    relations = []
    for j in range(d + 1, n1):
        # solve a * base = l_j: rref of [base^T | l_j]
        aug = [[base[i][k] for i in range(d + 1)] + [g.forms[j][k]] for k in range(d + 1)]
        R, piv = rref(aug, QQ, d + 2)
        if d + 1 in piv:
            raise GeneralPositionViolated("first d + 1 forms are not a basis")
        a = [Fraction(0)] * (d + 1)
        for row, c in zip(R, piv):
            a[c] = row[d + 1]
        terms = [(tuple(g.weights[j] if v == j else 0 for v in range(n1)), Fraction(1))]
        for i in range(d + 1):
            if a[i]:
                terms.append((tuple(g.weights[i] if v == i else 0 for v in range(n1)), -a[i]))
        relations.append(Poly(QQ, n1, terms))
    P = GradedPresentation(g.variable_names(), degrees, relations, L)
    return CoxData(P, L, tuple(degrees), L.element(c_vec), g)


def leq(C: CoxData, y, z) -> bool:
    """``y <= z`` iff the graded piece of degree ``z - y`` is nonzero."""
    return C.hilbert_value(_elt(C, z) - _elt(C, y)) > 0


def _elt(C: CoxData, x) -> GroupElement:
    return x if isinstance(x, GroupElement) else C.group.element(x)


def tilting_interval(C: CoxData) -> list[GroupElement]:
    """Classes ``t`` with ``0 <= t <= d c``, sorted by free part then torsion.

    Candidates are ``sum a_i y_i + m c`` with ``0 <= a_i < p_i`` and
    ``0 <= m <= d``; every effective class below ``d c`` has this form.
    """
    if C.gl is None or C.c_class is None:
        raise ValueError("tilting_interval needs Geigle-Lenzing data")
    g = C.gl
    top = C.c_class * g.d
    seen: dict = {}
    ranges = [range(p) for p in g.weights] + [range(g.d + 1)]
    for combo in product(*ranges):
        *a, m = combo
        t = C.c_class * m
        for ai, y in zip(a, C.generator_classes):
            t = t + y * ai
        if t.canonical in seen:
            continue
        if C.hilbert_value(t) > 0 and C.hilbert_value(top - t) > 0:
            seen[t.canonical] = t
    return sorted(seen.values(), key=GroupElement.sort_key)
