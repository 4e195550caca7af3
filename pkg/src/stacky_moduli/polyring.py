"""Sparse polynomials over exact fields and rings graded by abelian groups.

Ideal membership is only ever decided one graded piece at a time: the
degree-``d`` slice of the ideal is the span of ``monomial * relation`` for
all monomials of complementary degree, and everything else is Gaussian
elimination on monomial coordinates.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _enum
from .errors import BudgetExceeded, DimensionMismatch, FieldMismatch, NonHomogeneousRelation
from .fields import QQ, GF, format_rational, reduce_vector, rref
from .lattice import FgAbelianGroup, GroupElement

Monomial = tuple


def mono_mul(a: Sequence[int], b: Sequence[int]) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def term_key(m: Monomial):
    """Sort key putting exponent vectors in descending lexicographic order."""
    return tuple(-e for e in m)


class Poly:
    """Finite map from exponent tuples to nonzero coefficients in ``field``."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        acc: dict = {}
        for m, c in (terms.items() if isinstance(terms, dict) else (terms or ())):
            m = tuple(int(e) for e in m)
            if len(m) != nvars:
                raise DimensionMismatch(f"monomial {m} has {len(m)} exponents, expected {nvars}")
            acc[m] = field(acc.get(m, field.zero) + field(c))
        self.terms = {m: c for m, c in acc.items() if c != 0}

    @classmethod
    def monomial(cls, field, exps: Sequence[int], coef=1) -> Poly:
        return cls(field, len(exps), [(tuple(exps), coef)])

    @classmethod
    def constant(cls, field, nvars: int, c) -> Poly:
        return cls(field, nvars, [((0,) * nvars, c)])

    @classmethod
    def variable(cls, field, nvars: int, i: int) -> Poly:
        return cls.monomial(field, [int(j == i) for j in range(nvars)])

    def _same(self, other: Poly) -> None:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.nvars != self.nvars:
            raise DimensionMismatch("polynomials in different numbers of variables")

    def __add__(self, other: Poly) -> Poly:
        self._same(other)
        return Poly(self.field, self.nvars, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> Poly:
        return Poly(self.field, self.nvars, [(m, -c) for m, c in self.terms.items()])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return Poly(self.field, self.nvars, [(m, c * self.field(other)) for m, c in self.terms.items()])
        self._same(other)
        return Poly(
            self.field,
            self.nvars,
            [(mono_mul(a, b), x * y) for a, x in self.terms.items() for b, y in other.terms.items()],
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.sorted_terms()))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.sorted_terms()]

    def change_field(self, field) -> Poly:
        return Poly(field, self.nvars, [(m, field(c)) for m, c in self.terms.items()])

    def evaluate(self, point: Sequence, field=None):
        """Exact value at ``point``; ``field`` declares the field the point lives in."""
        if field is not None and field != self.field:
            raise FieldMismatch(f"point over {field}, polynomial over {self.field}")
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        F = self.field
        x = [F(v) for v in point]
        total = F.zero
        for m, c in self.terms.items():
            t = c
            for v, e in zip(x, m):
                if e:
                    t = t * v**e
            total = F(total + t)
        return total

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mon = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            parts.append((str(c), mon))
        out = ""
        for coef, mon in parts:
            neg = coef.startswith("-")
            coef = coef.lstrip("-")
            body = mon if (coef == "1" and mon) else (f"{coef}*{mon}" if mon else coef)
            out += (" - " if neg else " + ") + body if out else ("-" if neg else "") + body
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    def to_json(self) -> list:
        return [[list(m), format_rational(c) if not self.field.characteristic else int(c)] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, nvars: int, field=QQ) -> Poly:
        return cls(field, nvars, [(tuple(m), field(c)) for m, c in data])


def evaluate(f: Poly, point, field=None):
    return f.evaluate(point, field)


def positive_weight(group: FgAbelianGroup, degrees: Sequence[GroupElement], box: int = 4):
    """An integer functional on the generators, vanishing on relators, that is
    at least 1 on every degree; None when no such functional is found.
    """
    if not degrees or group.rank == 0:
        return None
    U = group.smith.U.entries
    free_rows = [U[i] for i in range(group.smith.rank, group.n_generators)]

    def values(w):
        return [sum(a * b for a, b in zip(w, d.coords)) for d in degrees]

    r = len(free_rows)
    candidates = []
    for B in range(1, box + 1):
        for c in product(range(-B, B + 1), repeat=r):
            if max(abs(x) for x in c) != B and B > 1:
                continue
            candidates.append(c)
    for c in candidates:
        w = tuple(sum(ci * row[k] for ci, row in zip(c, free_rows)) for k in range(group.n_generators))
        if min(values(w)) >= 1:
            return w
    return None


class GradedPresentation:
    """``field[x_0..x_{n-1}] / (relations)`` graded by ``group``.

    ``weight`` is an integer functional on the grading group that is
    positive on every variable degree; it bounds exponents when
    enumerating a graded piece.  Without one, callers must pass
    ``exponent_cap`` explicitly.
    """

    def __init__(self, variables: Sequence[str], degrees, relations: Iterable[Poly], group: FgAbelianGroup,
                 field=QQ, weight: Sequence[int] | None = None):
        self.variables = tuple(variables)
        self.group = group
        self.degrees = tuple(d if isinstance(d, GroupElement) else group.element(d) for d in degrees)
        if len(self.degrees) != len(self.variables):
            raise DimensionMismatch("one degree per variable is required")
        self.field = field
        self.relations = tuple(r for r in relations if not r.is_zero())
        for r in self.relations:
            if r.nvars != self.nvars:
                raise DimensionMismatch("relation in the wrong number of variables")
            if r.field != field:
                raise FieldMismatch(f"relation over {r.field}, ring over {field}")
            self.relation_degree(r)
        if weight is None:
            weight = positive_weight(group, self.degrees)
        self.weight = tuple(weight) if weight is not None else None
        if self.weight is not None:
            for rel in group.relators:
                if sum(a * b for a, b in zip(self.weight, rel)):
                    raise ValueError("weight does not vanish on the relators")
            if any(self.weight_of(d) < 1 for d in self.degrees):
                raise ValueError("weight must be positive on every variable degree")
        self._slices: dict = {}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def weight_of(self, d) -> int:
        coords = d.coords if isinstance(d, GroupElement) else d
        return sum(a * b for a, b in zip(self.weight, coords))

    def var(self, name_or_index) -> Poly:
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return Poly.variable(self.field, self.nvars, i)

    def poly(self, terms) -> Poly:
        return Poly(self.field, self.nvars, terms)

    def monomial_degree(self, m: Sequence[int]) -> GroupElement:
        if len(m) != self.nvars:
            raise DimensionMismatch(f"monomial with {len(m)} exponents in a ring with {self.nvars} variables")
        coords = [0] * self.group.n_generators
        for e, d in zip(m, self.degrees):
            if e:
                for k, x in enumerate(d.coords):
                    coords[k] += e * x
        return self.group.element(coords)

    def relation_degree(self, f: Poly) -> GroupElement:
        degs = [self.monomial_degree(m) for m in f.monomials()]
        if any(d != degs[0] for d in degs[1:]):
            raise NonHomogeneousRelation(f"{f.format(self.variables)} is not homogeneous")
        return degs[0]

    def _as_degree(self, d) -> GroupElement:
        return d if isinstance(d, GroupElement) else self.group.element(d)

    def exponent_caps(self, d, exponent_cap: int | None = None) -> tuple[int, ...]:
        """Per-variable exponent bounds used when enumerating degree ``d``."""
        d = self._as_degree(d)
        if self.weight is None:
            if exponent_cap is None:
                raise ValueError("no positive grading functional; pass exponent_cap explicitly")
            return (exponent_cap,) * self.nvars
        W = self.weight_of(d)
        if W < 0:
            return (-1,) * self.nvars
        caps = tuple(W // self.weight_of(v) for v in self.degrees)
        if exponent_cap is not None:
            caps = tuple(min(c, exponent_cap) for c in caps)
        return caps

    def monomials_of_degree(self, d, exponent_cap: int | None = None) -> list[Monomial]:
        """All exponent vectors of degree ``d`` within the caps, in descending lex order."""
        d = self._as_degree(d)
        caps = self.exponent_caps(d, exponent_cap)
        if any(c < 0 for c in caps):
            return []
        weighted = self.weight is not None
        W = self.weight_of(d) if weighted else None
        wv = [self.weight_of(v) for v in self.degrees] if weighted else None
        n = self.nvars
        out: list[Monomial] = []
        target = d.coords

        def rec(i, partial, rest):
            if i == n:
                if (not weighted or rest == 0) and self.monomial_degree(partial) == self.group.element(target):
                    out.append(tuple(partial))
                return
            top = caps[i] if not weighted else min(caps[i], rest // wv[i])
            for e in range(top, -1, -1):
                partial.append(e)
                rec(i + 1, partial, rest - e * wv[i] if weighted else None)
                partial.pop()

        rec(0, [], W)
        return out

    def _slice(self, d):
        d = self._as_degree(d)
        key = d.canonical
        if key in self._slices:
            return self._slices[key]
        monos = self.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for f in self.relations:
            fd = self.relation_degree(f)
            for m in self.monomials_of_degree(d - fd):
                row = [self.field.zero] * len(monos)
                for fm, c in f.terms.items():
                    row[index[mono_mul(m, fm)]] = c
                rows.append(row)
        R, pivots = rref(rows, self.field, len(monos))
        basis = [m for i, m in enumerate(monos) if i not in set(pivots)]
        sl = _Slice(monos, index, R, pivots, basis)
        self._slices[key] = sl
        return sl

    def ideal_slice(self, d):
        """RREF rows spanning the degree-``d`` part of the relation ideal."""
        sl = self._slice(d)
        return sl.monomials, sl.rows

    def graded_component_basis(self, d) -> list[Monomial]:
        return list(self._slice(d).basis)

    def hilbert_value(self, d) -> int:
        return len(self._slice(d).basis)

    def normal_form(self, f, d) -> list:
        """Coordinates of ``f`` (a Poly or a monomial) in the monomial basis of ``R_d``."""
        sl = self._slice(d)
        v = [self.field.zero] * len(sl.monomials)
        items = f.terms.items() if isinstance(f, Poly) else [(tuple(f), self.field.one)]
        for m, c in items:
            if m not in sl.index:
                raise ValueError(f"monomial {m} is not of degree {d}")
            v[sl.index[m]] += c
        w = reduce_vector(v, sl.rows, sl.pivots, self.field)
        return [w[sl.index[m]] for m in sl.basis]

    def is_in_ideal(self, f: Poly) -> bool:
        if f.is_zero():
            return True
        return not any(self.normal_form(f, self.relation_degree(f)))

    def with_relations(self, extra: Iterable[Poly]) -> GradedPresentation:
        return GradedPresentation(self.variables, self.degrees, list(self.relations) + list(extra),
                                  self.group, self.field, self.weight)

    # -- points over prime fields ------------------------------------------------

    def count_points(self, q: int, budget: int | None = None, start: int = 0, stop: int | None = None,
                     nonzero_only: bool = False) -> int:
        return sum(len(b) for b in self._point_batches(q, budget, start, stop, nonzero_only))

    def enumerate_points(self, q: int, budget: int | None = None, start: int = 0, stop: int | None = None) -> list[tuple]:
        """All points of ``F_q^n`` on which every relation vanishes.

        Assignments are indexed in lexicographic order (first variable most
        significant); ``[start, stop)`` selects a sub-range of that index.
        """
        pts = []
        for batch in self._point_batches(q, budget, start, stop):
            pts.extend(tuple(int(x) for x in row) for row in batch)
        return pts

    def _point_batches(self, q, budget, start, stop, nonzero_only=False):
        GF(q)
        total = q**self.nvars
        _enum.check_budget(total, budget)
        stop = total if stop is None else min(stop, total)
        comp = [_enum.CompiledPoly(f, q) for f in self.relations]
        table = _enum.power_table(q, max([c.max_exp for c in comp], default=0))
        for a, b in _enum.chunks(start, stop):
            X = _enum.digits(a, b, q, self.nvars)
            keep = np.ones(len(X), dtype=bool)
            for c in comp:
                keep &= c(X, table) == 0
            if nonzero_only:
                keep &= X.any(axis=1)
            yield X[keep]

    def __repr__(self) -> str:
        return f"GradedPresentation({list(self.variables)}, {len(self.relations)} relations, {self.group})"


class _Slice:
    __slots__ = ("monomials", "index", "rows", "pivots", "basis")

    def __init__(self, monomials, index, rows, pivots, basis):
        self.monomials, self.index, self.rows, self.pivots, self.basis = monomials, index, rows, pivots, basis


def monomial_degree(P: GradedPresentation, m) -> GroupElement:
    return P.monomial_degree(m)


def monomials_of_degree(P: GradedPresentation, d, exponent_cap: int | None = None) -> list[Monomial]:
    return P.monomials_of_degree(d, exponent_cap)


def graded_component_basis(P: GradedPresentation, d) -> list[Monomial]:
    return P.graded_component_basis(d)


def hilbert_value(P: GradedPresentation, d) -> int:
    return P.hilbert_value(d)


def enumerate_points(P: GradedPresentation, q: int, budget: int | None = None, start: int = 0,
                     stop: int | None = None) -> list[tuple]:
    return P.enumerate_points(q, budget, start, stop)


__all__ = [
    "Poly", "GradedPresentation", "positive_weight", "monomial_degree", "monomials_of_degree",
    "graded_component_basis", "hilbert_value", "enumerate_points", "evaluate", "term_key",
    "mono_mul", "mono_divides", "BudgetExceeded",
]
