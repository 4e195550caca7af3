"""Refined representations of a quiver of sections with dimension vector 1.

A refined representation is a point ``m`` of ``A^{Q_1}`` together with a
character ``g`` of the lattice ``Lambda_r = ker(f*: Lambda_Q -> Pic)``.
Characters are stored by their values on the chosen Hermite basis ``B_r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotPicHomogeneous
from .fields import QQ, rref, reduce_vector
from .glps import CoxData
from .lattice import FgAbelianGroup, GroupElement, GroupHom, Sublattice, kernel_lattice
from .polyring import GradedPresentation, Poly, mono_mul
from .quiver import PathAlgebra, PeirceBasis, Quiver, gamma_iso


@dataclass
class QuiverLattices:
    quiver: Quiver
    LQ: FgAbelianGroup
    f_star: GroupHom
    lambda_r: Sublattice
    surjective: bool

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return self.lambda_r.basis

    def chi(self, i: int) -> tuple[int, ...]:
        n = self.n_vertices - 1
        return tuple(int(k == i - 1) for k in range(n))

    def kappa(self, i: int, j: int, k: int, l: int) -> tuple[int, ...]:
        """``(chi_i + chi_l) - (chi_j + chi_k)`` in vertex coordinates."""
        ci, cj, ck, cl = (self.chi(x) for x in (i, j, k, l))
        return tuple(a + d - b - c for a, b, c, d in zip(ci, cj, ck, cl))

    def in_lambda_r(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.lambda_r

    def r_coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.lambda_r.coordinates(tuple(v))
        if c is None:
            raise ValueError(f"{tuple(v)} is not in the relation lattice")
        return c

    def arrow_degree(self, a) -> tuple[int, ...]:
        return tuple(h - t for h, t in zip(self.chi(a.head), self.chi(a.tail)))


def build_lattices(Q: Quiver, C: CoxData) -> QuiverLattices:
    n = len(Q.vertices) - 1
    LQ = FgAbelianGroup.free(n)
    cols = [v.coords for v in Q.vertices[1:]]
    M = [[c[r] for c in cols] for r in range(C.group.n_generators)]
    f = GroupHom(LQ, C.group, M if n else [[] for _ in range(C.group.n_generators)])
    return QuiverLattices(Q, LQ, f, kernel_lattice(f), f.is_surjective())


# -- the coordinate ring S ------------------------------------------------------

@dataclass
class SPresentation:
    """``S = k[a_0..a_{Q_1 - 1}] / I`` with two gradings.

    ``graded`` carries the vertex-lattice grading, ``pic`` the grading
    pushed forward along ``f*``; relations are the path relations with a
    path read as the product of its arrow variables.
    """

    graded: GradedPresentation
    pic: GradedPresentation
    quiver: Quiver
    algebra: PathAlgebra
    lattices: QuiverLattices

    @property
    def variables(self) -> tuple[str, ...]:
        return self.graded.variables

    @property
    def relations(self) -> tuple[Poly, ...]:
        return self.graded.relations

    @property
    def field(self):
        return self.graded.field

    def path_monomial(self, path: Sequence[int]) -> tuple[int, ...]:
        m = [0] * len(self.quiver.arrows)
        for a in path:
            m[a] += 1
        return tuple(m)

    def path_poly(self, path: Sequence[int], coef=1) -> Poly:
        return Poly.monomial(self.field, self.path_monomial(path), coef)

    def label_image(self, m: Sequence[int]) -> tuple[int, ...]:
        """The Cox monomial ``h(m)`` of an S-monomial."""
        out = (0,) * len(self.quiver.variables)
        for a, e in zip(self.quiver.arrows, m):
            for _ in range(e):
                out = mono_mul(out, a.label)
        return out


def build_s_presentation(PA: PathAlgebra, QL: QuiverLattices, C: CoxData | None = None) -> SPresentation:
    Q = PA.quiver
    F = PA.field or QQ
    names = tuple(f"a{a.id}" for a in Q.arrows)
    nv = len(Q.arrows)
    rels = []
    for r in PA.relations:
        terms: dict = {}
        for p, c in r.coefficients.items():
            m = [0] * nv
            for a in p:
                m[a] += 1
            m = tuple(m)
            terms[m] = terms.get(m, F.zero) + c
        rels.append(Poly(F, nv, terms))
    degrees = [QL.arrow_degree(a) for a in Q.arrows]
    L = QL.f_star.target
    wL = C.presentation.weight if C is not None else None
    if wL is not None:
        vw = [sum(a * b for a, b in zip(wL, v.coords)) for v in Q.vertices]
        weight = tuple(vw[1:])
        pic_weight = wL
    else:
        weight = pic_weight = None
    graded = GradedPresentation(names, degrees, rels, QL.LQ, F, weight)
    pic_degrees = [QL.f_star(d) for d in degrees]
    pic = GradedPresentation(names, pic_degrees, rels, L, F, pic_weight)
    return SPresentation(graded, pic, Q, PA, QL)


# -- the de-indexing ideal --------------------------------------------------------

def matched_classes(PB: PeirceBasis, QL: QuiverLattices) -> list[list[tuple[int, int]]]:
    """Vertex pairs ``(i, j)``, ``i != j``, with a nonzero Peirce component,
    grouped by ``deg j - deg i``; each class is sorted, classes by first member.
    """
    Q = QL.quiver
    groups: dict = {}
    for (i, j) in PB.pairs():
        if i == j or not PB[i, j]:
            continue
        lam = Q.vertices[j] - Q.vertices[i]
        groups.setdefault(lam.canonical, []).append((i, j))
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def de_ideal_generators(PB: PeirceBasis, QL: QuiverLattices, S: SPresentation | None = None) -> list[Poly]:
    """One ``y - gamma(y)`` per basis path of each class representative and
    each other member of its class.
    """
    nv = len(QL.quiver.arrows)
    F = S.field if S is not None else QQ

    def mono(p):
        m = [0] * nv
        for a in p:
            m[a] += 1
        return tuple(m)

    out = []
    for cls in matched_classes(PB, QL):
        rep = cls[0]
        for other in cls[1:]:
            g = gamma_iso(PB, QL, *rep, *other)
            for p, _ in PB[rep]:
                f = Poly(F, nv, [(mono(p), F.one)]) - Poly(F, nv, [(mono(g[p]), F.one)])
                if not f.is_zero():
                    out.append(f)
    return out


# -- captures the Cox ring -----------------------------------------------------------

@dataclass
class CapturesReport:
    verdict: bool
    unreached: list[dict] = field(default_factory=list)
    hilbert: list[dict] = field(default_factory=list)
    degrees_checked: int = 0

    @property
    def mismatches(self) -> list[dict]:
        return [h for h in self.hilbert if h["lhs"] != h["rhs"]]


def default_test_degrees(C: CoxData, QL: QuiverLattices, bound: int | None = None) -> list[GroupElement]:
    """Effective Pic classes up to weight ``bound`` plus every Cox-generator and
    Peirce degree; ``bound`` defaults to ``max(6, 2 * max generator weight)``.
    """
    P = C.presentation
    Q = QL.quiver
    seen: dict = {}

    def add(d):
        seen.setdefault(d.canonical, d)

    for d in C.generator_classes:
        add(d)
    for vi in Q.vertices:
        for vj in Q.vertices:
            if P.hilbert_value(vj - vi) > 0:
                add(vj - vi)
    if P.weight is not None:
        wmax = max(P.weight_of(d) for d in P.degrees) if P.degrees else 1
        B = max(6, 2 * wmax) if bound is None else bound
        frontier = [(0,) * P.nvars]
        visited = set(frontier)
        while frontier:
            nxt = []
            for m in frontier:
                add(P.monomial_degree(m))
                for v in range(P.nvars):
                    m2 = tuple(e + (k == v) for k, e in enumerate(m))
                    if m2 not in visited and P.weight_of(P.monomial_degree(m2)) <= B:
                        visited.add(m2)
                        nxt.append(m2)
            frontier = nxt
    return sorted(seen.values(), key=lambda d: (P.weight_of(d) if P.weight else 0, d.sort_key()))


def captures_cox_check(C: CoxData, S: SPresentation, Ide: Sequence[Poly],
                       test_degrees: Sequence | None = None) -> CapturesReport:
    """(a) each Cox generator is in the image of ``h`` in its degree, and
    (b) ``dim (S/I_de)_lam = dim R_lam`` for every tested Pic degree.

    The verdict only certifies the degrees supplied.
    """
    P = C.presentation
    QL = S.lattices
    L = C.group
    degs = list(test_degrees) if test_degrees is not None else default_test_degrees(C, QL)
    degs = [_to_pic(d, QL, L) for d in degs]
    rep = CapturesReport(True)

    for v, (name, d) in enumerate(zip(P.variables, P.degrees)):
        target = [0] * P.nvars
        target[v] = 1
        target = tuple(target)
        dim = P.hilbert_value(d)
        if dim == 0:
            continue
        images = [P.normal_form(S.label_image(m), d) for m in S.pic.monomials_of_degree(d)]
        R, piv = rref(images, P.field, dim)
        left = reduce_vector(P.normal_form(target, d), R, piv, P.field)
        if any(left):
            rep.verdict = False
            rep.unreached.append({"generator": name, "index": v, "degree": d,
                                  "reason": f"Cox generator of degree {list(d.canonical)} unreached"})

    quotient = S.pic.with_relations(Ide)
    for d in degs:
        lhs, rhs = quotient.hilbert_value(d), P.hilbert_value(d)
        rep.hilbert.append({"degree": d, "lhs": lhs, "rhs": rhs})
        if lhs != rhs:
            rep.verdict = False
    rep.degrees_checked = len(degs)
    return rep


def _to_pic(d, QL: QuiverLattices, L: FgAbelianGroup) -> GroupElement:
    if isinstance(d, GroupElement):
        return QL.f_star(d) if d.group is QL.LQ else d
    d = tuple(d)
    if len(d) == QL.LQ.n_generators and len(d) != L.n_generators:
        return QL.f_star(d)
    return L.element(d)


# -- diagram constraints ----------------------------------------------------------------

@dataclass(frozen=True)
class RefinementConstraint:
    """``m[image_path] = g(kappa) * m[path]`` for ``path: i -> j`` and ``image_path: k -> l``."""

    path: tuple[int, ...]
    source: tuple[int, int]
    target: tuple[int, int]
    kappa: tuple[int, ...]
    kappa_r: tuple[int, ...]
    image_path: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.source == self.target


def diagram_constraints(Q: Quiver, PB: PeirceBasis, QL: QuiverLattices) -> list[RefinementConstraint]:
    """Constraints for every basis path of positive length and every pair
    ``(k, l)`` matched with its endpoints, the trivial ``(k, l) = (i, j)``
    included.
    """
    out = []
    for cls in matched_classes(PB, QL):
        for src in cls:
            for dst in cls:
                g = gamma_iso(PB, QL, *src, *dst)
                kappa = QL.kappa(*src, *dst)
                kr = QL.r_coordinates(kappa)
                for p, _ in PB[src]:
                    out.append(RefinementConstraint(p, src, dst, kappa, kr, g[p]))
    return out


# -- refined representations -------------------------------------------------------------

@dataclass(frozen=True)
class RefinedRep:
    field: object
    m: tuple
    g: tuple

    def __post_init__(self):
        F = self.field
        object.__setattr__(self, "m", tuple(F(x) for x in self.m))
        object.__setattr__(self, "g", tuple(F(x) for x in self.g))
        if any(x == 0 for x in self.g):
            raise ValueError("character values must be units")

    def character(self, kappa_r: Sequence[int]):
        """``g`` extended multiplicatively to ``Lambda_r`` (coordinates in ``B_r``)."""
        F = self.field
        out = F.one
        for gb, c in zip(self.g, kappa_r):
            if c:
                base = gb if c > 0 else F.inv(gb)
                for _ in range(abs(c)):
                    out = F(out * base)
        return out

    def path_value(self, path: Sequence[int]):
        F = self.field
        out = F.one
        for a in path:
            out = F(out * self.m[a])
        return out


def check_refined(rep: RefinedRep, S: SPresentation, constraints: Sequence[RefinementConstraint]) -> bool:
    if len(rep.m) != len(S.quiver.arrows):
        raise ValueError(f"{len(rep.m)} arrow values for {len(S.quiver.arrows)} arrows")
    if len(rep.g) != S.lattices.lambda_r.rank:
        raise ValueError(f"{len(rep.g)} character values for a rank {S.lattices.lambda_r.rank} lattice")
    F = rep.field
    for f in S.relations:
        if f.change_field(F).evaluate(rep.m, F) != 0:
            return False
    for c in constraints:
        lhs = rep.path_value(c.image_path)
        rhs = F(rep.character(c.kappa_r) * rep.path_value(c.path))
        if lhs != rhs:
            return False
    return True


def _normalized_gauge(t: Sequence, n: int, F) -> list:
    t = [F(x) for x in t]
    if len(t) == n - 1:
        t = [F.one] + t
    if len(t) != n:
        raise ValueError(f"gauge tuple of length {len(t)} for {n} vertices")
    if any(x == 0 for x in t):
        raise ValueError("gauge entries must be nonzero")
    inv0 = F.inv(t[0])
    return [F(x * inv0) for x in t]


def gauge_act(t: Sequence, rep: RefinedRep, Q: Quiver, QL: QuiverLattices) -> RefinedRep:
    """``m_a -> t_h t_t^{-1} m_a`` and ``g(kappa) -> t^kappa g(kappa)``.

    ``t`` may list all vertices (it is rescaled so ``t_0 = 1``) or only the
    vertices other than 0.
    """
    F = rep.field
    t = _normalized_gauge(t, len(Q.vertices), F)
    m = [F(t[a.head] * F.inv(t[a.tail]) * x) for a, x in zip(Q.arrows, rep.m)]

    def power(kappa):
        out = F.one
        for ti, c in zip(t[1:], kappa):
            base = ti if c >= 0 else F.inv(ti)
            for _ in range(abs(c)):
                out = F(out * base)
        return out

    g = [F(power(b) * gb) for b, gb in zip(QL.basis, rep.g)]
    return RefinedRep(F, tuple(m), tuple(g))


# -- homogenization -------------------------------------------------------------------------

def homogenize(s: Poly, QL: QuiverLattices) -> list[tuple[tuple[int, ...], object, tuple[int, ...]]]:
    """``s^h = sum s_i (x) kappa_i``, with the first term in lex order carrying
    ``kappa = 0``; ``kappa_i`` are vertex coordinates of elements of ``Lambda_r``.
    """
    if s.is_zero():
        return []
    Q = QL.quiver
    degs = []
    terms = s.sorted_terms()
    for m, c in terms:
        d = [0] * QL.LQ.n_generators
        for a, e in zip(Q.arrows, m):
            for k, x in enumerate(QL.arrow_degree(a)):
                d[k] += e * x
        degs.append(tuple(d))
    pic = [QL.f_star(d) for d in degs]
    if any(p != pic[0] for p in pic[1:]):
        raise NotPicHomogeneous(f"terms of {s} have different Pic degrees")
    out = []
    for (m, c), d in zip(terms, degs):
        kappa = tuple(a - b for a, b in zip(degs[0], d))
        out.append((m, c, kappa))
    return out


def specialize(sh, g, QL: QuiverLattices, field=None) -> Poly:
    """Replace each ``s_i (x) kappa_i`` by ``g(kappa_i) s_i``.

    ``g`` is a RefinedRep (its character is used) or a sequence of values
    on ``B_r``.
    """
    if isinstance(g, RefinedRep):
        rep = g
    else:
        if field is None:
            raise ValueError("pass the field when specializing at raw character values")
        rep = RefinedRep(field, (), tuple(g))
    F = rep.field
    nv = len(QL.quiver.arrows)
    terms: dict = {}
    for m, c, kappa in sh:
        val = F(F(c) * rep.character(QL.r_coordinates(kappa)))
        terms[m] = F(terms.get(m, F.zero) + val)
    return Poly(F, nv, terms)


# -- stability --------------------------------------------------------------------------------

def implied_theta(theta: Sequence[int], n: int) -> tuple[int, ...]:
    """Full ``theta`` over all vertices from its values on vertices ``1..n-1``."""
    theta = tuple(int(x) for x in theta)
    if len(theta) == n:
        if sum(theta):
            raise ValueError("theta over all vertices must sum to zero")
        return theta
    if len(theta) != n - 1:
        raise ValueError(f"theta of length {len(theta)} for {n} vertices")
    return (-sum(theta),) + theta


def tested_subsets(QL: QuiverLattices, restricted: bool = True) -> list[int]:
    """Bitmasks of proper nonempty vertex subsets that stability tests;
    in restricted mode only those orthogonal to every ``B_r`` vector.
    """
    n = QL.n_vertices
    out = []
    for mask in range(1, (1 << n) - 1):
        if restricted:
            ok = all(sum(b[i - 1] for i in range(1, n) if mask >> i & 1) == 0 for b in QL.basis)
            if not ok:
                continue
        out.append(mask)
    return out


def theta_of(mask: int, theta_full: Sequence[int]) -> int:
    return sum(t for i, t in enumerate(theta_full) if mask >> i & 1)


def closed_under(mask: int, support: int, Q: Quiver) -> bool:
    for a in Q.arrows:
        if support >> a.id & 1 and mask >> a.tail & 1 and not mask >> a.head & 1:
            return False
    return True


def stable_for_support(support: int, Q: Quiver, subsets: Sequence[int], theta_full: Sequence[int],
                       strict: bool = True) -> bool:
    for mask in subsets:
        if closed_under(mask, support, Q):
            v = theta_of(mask, theta_full)
            if v < 0 or (strict and v == 0):
                return False
    return True


def support_of(rep: RefinedRep) -> int:
    return sum(1 << a for a, x in enumerate(rep.m) if x != 0)


def is_theta_stable(rep: RefinedRep, Q: Quiver, QL: QuiverLattices, theta: Sequence[int],
                    restricted: bool = True, strict: bool = True) -> bool:
    full = implied_theta(theta, len(Q.vertices))
    return stable_for_support(support_of(rep), Q, tested_subsets(QL, restricted), full, strict)


def is_theta_semistable(rep: RefinedRep, Q: Quiver, QL: QuiverLattices, theta: Sequence[int],
                        restricted: bool = True) -> bool:
    return is_theta_stable(rep, Q, QL, theta, restricted, strict=False)


def generic_violations(QL: QuiverLattices, theta: Sequence[int], restricted: bool = True) -> list[int]:
    """Tested subsets with ``theta(S) = 0``."""
    full = implied_theta(theta, QL.n_vertices)
    return [m for m in tested_subsets(QL, restricted) if theta_of(m, full) == 0]


def mask_vertices(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


__all__ = [
    "QuiverLattices", "build_lattices", "SPresentation", "build_s_presentation", "de_ideal_generators",
    "captures_cox_check", "CapturesReport", "default_test_degrees", "RefinementConstraint",
    "diagram_constraints", "RefinedRep", "check_refined", "gauge_act", "homogenize", "specialize",
    "is_theta_stable", "is_theta_semistable", "tested_subsets", "generic_violations", "implied_theta",
    "matched_classes",
]
