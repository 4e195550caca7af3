"""Groupoid masses over F_q of the Cox-ring stack and of the refined moduli.

Stack side: ``[(Spec R minus 0) / L^dual]`` is rewritten as a quotient of
``Y x^{L^dual} T`` by the split torus ``T = G_m^N``.  Its F_q-points are the
nonzero solutions of the twisted relations ``f^s`` for each character ``s``
of ``K = ker(Z^N -> L)``, so every point and stabilizer is counted exactly,
torsion in ``L`` included.

Refined side: pairs ``(m, g)`` in ``F_q^{Q_1} x Hom(Lambda_r, F_q^x)``
satisfying the S-relations and diagram constraints, that are theta-stable,
divided by the order of the gauge torus ``(F_q^x)^{|Q_0| - 1}``.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import _enum
from .errors import BadResidue, NonGenericTheta
from .fields import GF, is_prime
from .glps import CoxData
from .lattice import FgAbelianGroup, GroupHom, dual_group_order, kernel_lattice
from .polyring import Poly
from .refined import (
    QuiverLattices, RefinementConstraint, SPresentation, implied_theta, stable_for_support,
    tested_subsets, generic_violations, mask_vertices,
)


@dataclass
class MassReport:
    q: int
    stack_mass: Fraction | None
    refined_mass: Fraction
    stable_point_count: int
    gauge_order: int
    match: bool | None
    timing: float
    naive_stack_mass: Fraction | None = None
    refined_profile: dict = field(default_factory=dict)
    stack_profile: dict = field(default_factory=dict)
    candidates: int = 0
    theta: tuple = ()
    restricted: bool = True

    @property
    def profiles_match(self) -> bool | None:
        if not self.stack_profile:
            return None
        return self.stack_profile == self.refined_profile


def check_residue(group: FgAbelianGroup, q: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q = {q} must be prime")
    e = group.exponent
    if (q - 1) % e:
        raise BadResidue(f"q = {q} is not 1 mod {e}, the exponent of the torsion")


def _profile(counts: dict, order_of, group_order: int) -> dict:
    """Isomorphism classes per stabilizer order: ``N_s * s / |G|``."""
    acc: Counter = Counter()
    for mask, n in counts.items():
        acc[order_of(mask)] += n
    return {s: Fraction(n * s, group_order) for s, n in sorted(acc.items())}


def _run(worker, setup, start: int, stop: int, workers: int) -> Counter:
    """Add up per-mask counts over ``[start, stop)``, split into fixed chunks."""
    pieces = list(_enum.chunks(start, stop))
    total: Counter = Counter()
    if workers and workers > 1 and len(pieces) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for c in ex.map(worker, [setup] * len(pieces), [a for a, _ in pieces], [b for _, b in pieces]):
                total.update(c)
    else:
        for a, b in pieces:
            total.update(worker(setup, a, b))
    return total


def _mask_counts(X: np.ndarray, keep: np.ndarray) -> Counter:
    if not keep.any():
        return Counter()
    weights = (1 << np.arange(X.shape[1], dtype=np.int64))
    masks = ((X[keep] != 0).astype(np.int64) * weights).sum(axis=1)
    vals, cnt = np.unique(masks, return_counts=True)
    return Counter({int(v): int(c) for v, c in zip(vals, cnt)})


# -- stack side ------------------------------------------------------------------------

@dataclass
class _StackSetup:
    q: int
    N: int
    rank_k: int
    relations: list  # per relation: list of (exps, coef, k-exponent vector)
    max_exp: int


def _stack_setup(C: CoxData, q: int):
    P = C.presentation
    N = P.nvars
    L = C.group
    M = [[d.coords[r] for d in P.degrees] for r in range(L.n_generators)]
    deg = GroupHom(FgAbelianGroup.free(N), L, M)
    if not deg.is_surjective():
        raise ValueError("generator degrees must generate the grading group")
    K = kernel_lattice(deg)
    F = GF(q)
    rels = []
    max_exp = 0
    for f in P.relations:
        terms = f.sorted_terms()
        m0 = terms[0][0]
        out = []
        for m, c in terms:
            k = K.coordinates(tuple(a - b for a, b in zip(m0, m)))
            if k is None:  # pragma: no cover - homogeneity guarantees membership
                raise ValueError("relation is not homogeneous")
            out.append((tuple(m), F(c), tuple(x % (q - 1) for x in k)))
            max_exp = max(max_exp, max(m))
        rels.append(out)
    return _StackSetup(q, N, K.rank, rels, max(max_exp, q - 2)), K


def _stack_worker(st: _StackSetup, start: int, stop: int) -> Counter:
    q, N = st.q, st.N
    table = _enum.power_table(q, st.max_exp)
    block = q**N
    idx = np.arange(start, stop, dtype=np.int64)
    si, xi = idx // block, idx % block
    X = _enum.digits_of(xi, q, N)
    Sv = _enum.digits_of(si, q - 1, st.rank_k) + 1
    keep = X.any(axis=1)
    for rel in st.relations:
        total = np.zeros(len(idx), dtype=np.int64)
        for m, c, kexp in rel:
            term = np.full(len(idx), c, dtype=np.int64)
            for b, e in enumerate(kexp):
                if e:
                    term = term * table[Sv[:, b], e] % q
            for v, e in enumerate(m):
                if e:
                    term = term * table[X[:, v], e] % q
            total = (total + term) % q
        keep &= total == 0
    return _mask_counts(X, keep)


@dataclass
class StackCount:
    q: int
    mass: Fraction
    naive_mass: Fraction
    profile: dict
    point_count: int
    torus_order: int
    candidates: int


def stack_count(C: CoxData, q: int, budget: int | None = None, workers: int = 1,
                start: int = 0, stop: int | None = None) -> StackCount:
    check_residue(C.group, q)
    if C.irrelevant_locus != "origin":
        raise ValueError(f"point counts need the origin as irrelevant locus, not {C.irrelevant_locus}")
    st, K = _stack_setup(C, q)
    total = (q - 1) ** st.rank_k * q**st.N
    _enum.check_budget(total, budget)
    stop = total if stop is None else min(stop, total)
    counts = _run(_stack_worker, st, start, stop, workers)
    torus = (q - 1) ** st.N
    points = sum(counts.values())
    mass = Fraction(points, torus)

    cache: dict = {}

    def order(mask):
        if mask not in cache:
            gens = list(K.basis) + [tuple(int(k == v) for k in range(st.N)) for v in range(st.N) if mask >> v & 1]
            cache[mask] = dual_group_order(FgAbelianGroup(st.N, gens), q)
        return cache[mask]

    profile = _profile(counts, order, torus)
    naive = Fraction(C.presentation.count_points(q, budget, nonzero_only=True), dual_group_order(C.group, q))
    return StackCount(q, mass, naive, profile, points, torus, total)


def stack_mass(C: CoxData, q: int, budget: int | None = None, workers: int = 1) -> Fraction:
    """Groupoid mass of ``[(Spec R minus 0) / L^dual]`` over ``F_q``."""
    return stack_count(C, q, budget, workers).mass


def naive_stack_mass(C: CoxData, q: int, budget: int | None = None) -> Fraction:
    """``|(Spec R minus 0)(F_q)| / |Hom(L, F_q^x)|``; equals the mass when L is free."""
    check_residue(C.group, q)
    return Fraction(C.presentation.count_points(q, budget, nonzero_only=True), dual_group_order(C.group, q))


# -- refined side ----------------------------------------------------------------------

@dataclass
class _RefinedSetup:
    q: int
    n_arrows: int
    rank: int
    relations: list  # CompiledPoly
    constraints: list  # (path arrows, image arrows, exponent vector mod q-1)
    max_exp: int


def _refined_setup(S: SPresentation, constraints: Sequence[RefinementConstraint], q: int) -> _RefinedSetup:
    comp = [_enum.CompiledPoly(f, q) for f in S.relations]
    cons = []
    seen = set()
    for c in constraints:
        if c.trivial:
            continue
        key = (tuple(sorted(c.path)), tuple(sorted(c.image_path)), c.kappa_r)
        if key in seen:
            continue
        seen.add(key)
        cons.append((tuple(c.path), tuple(c.image_path), tuple(x % (q - 1) for x in c.kappa_r)))
    max_exp = max([cp.max_exp for cp in comp] + [q - 2, 1])
    return _RefinedSetup(q, len(S.quiver.arrows), S.lattices.lambda_r.rank, comp, cons, max_exp)


def _refined_rows(st: _RefinedSetup, start: int, stop: int):
    q, nA, r = st.q, st.n_arrows, st.rank
    table = _enum.power_table(q, st.max_exp)
    block = q**nA
    idx = np.arange(start, stop, dtype=np.int64)
    gi, mi = idx // block, idx % block
    M = _enum.digits_of(mi, q, nA)
    G = _enum.digits_of(gi, q - 1, r) + 1
    keep = np.ones(len(idx), dtype=bool)
    for cp in st.relations:
        keep &= cp(M, table) == 0
    for path, image, exps in st.constraints:
        lhs = np.ones(len(idx), dtype=np.int64)
        for a in image:
            lhs = lhs * M[:, a] % q
        rhs = np.ones(len(idx), dtype=np.int64)
        for b, e in enumerate(exps):
            if e:
                rhs = rhs * table[G[:, b], e] % q
        for a in path:
            rhs = rhs * M[:, a] % q
        keep &= lhs == rhs
    return M, G, keep


def _refined_worker(st: _RefinedSetup, start: int, stop: int) -> Counter:
    M, _, keep = _refined_rows(st, start, stop)
    return _mask_counts(M, keep)


def refined_stabilizer_order(QL: QuiverLattices, support: int, q: int) -> int:
    """Order of the stabilizer in the gauge torus of a point with arrow support ``support``."""
    n = QL.n_vertices - 1
    gens = [tuple(h - t for h, t in zip(QL.chi(a.head), QL.chi(a.tail)))
            for a in QL.quiver.arrows if support >> a.id & 1]
    gens += list(QL.basis)
    return dual_group_order(FgAbelianGroup(n, [g for g in gens if any(g)]), q)


def refined_mass(S: SPresentation, constraints: Sequence[RefinementConstraint], QL: QuiverLattices,
                 theta: Sequence[int], q: int, restricted: bool = True, budget: int | None = None,
                 workers: int = 1, start: int = 0, stop: int | None = None) -> MassReport:
    """Mass of the theta-stable refined representations over ``F_q``.

    ``[start, stop)`` restricts the candidate index (g digits most
    significant, then arrow values); partial ranges give partial counts.
    """
    t0 = time.perf_counter()
    check_residue(QL.f_star.target, q)
    full = implied_theta(theta, QL.n_vertices)
    bad = generic_violations(QL, full, restricted)
    if bad:
        raise NonGenericTheta(f"theta vanishes on tested vertex subset(s) {[mask_vertices(b) for b in bad]}")
    st = _refined_setup(S, constraints, q)
    total = (q - 1) ** st.rank * q**st.n_arrows
    _enum.check_budget(total, budget)
    stop = total if stop is None else min(stop, total)
    counts = _run(_refined_worker, st, start, stop, workers)

    subsets = tested_subsets(QL, restricted)
    Q = QL.quiver
    stable = {m: n for m, n in counts.items() if stable_for_support(m, Q, subsets, full)}
    gauge = (q - 1) ** (QL.n_vertices - 1)
    count = sum(stable.values())
    cache: dict = {}

    def order(mask):
        if mask not in cache:
            cache[mask] = refined_stabilizer_order(QL, mask, q)
        return cache[mask]

    profile = _profile(stable, order, gauge)
    return MassReport(q, None, Fraction(count, gauge), count, gauge, None, time.perf_counter() - t0,
                      refined_profile=profile, candidates=total, theta=tuple(full[1:]), restricted=restricted)


def compare_masses(C: CoxData, S: SPresentation, constraints: Sequence[RefinementConstraint],
                   QL: QuiverLattices, qs: Sequence[int], theta: Sequence[int], restricted: bool = True,
                   budget: int | None = None, workers: int = 1) -> list[MassReport]:
    out = []
    for q in qs:
        t0 = time.perf_counter()
        rep = refined_mass(S, constraints, QL, theta, q, restricted, budget, workers)
        sc = stack_count(C, q, budget, workers)
        rep.stack_mass = sc.mass
        rep.naive_stack_mass = sc.naive_mass
        rep.stack_profile = sc.profile
        rep.match = sc.mass == rep.refined_mass
        rep.timing = time.perf_counter() - t0
        out.append(rep)
    return out


# -- fibre over the trivial character ----------------------------------------------------

def refined_points_trivial_g(S: SPresentation, constraints: Sequence[RefinementConstraint], q: int,
                             budget: int | None = None) -> set[tuple[int, ...]]:
    """Arrow values ``m`` with ``(m, g = 1)`` a refined representation."""
    st = _refined_setup(S, constraints, q)
    total = q**st.n_arrows
    _enum.check_budget(total, budget)
    out: set = set()
    for a, b in _enum.chunks(0, total):  # g index 0 means g = 1
        M, _, keep = _refined_rows(st, a, b)
        out.update(tuple(int(x) for x in row) for row in M[keep])
    return out


def fiber_check(S: SPresentation, Ide: Sequence[Poly], constraints: Sequence[RefinementConstraint], q: int,
                budget: int | None = None) -> bool:
    """``{m : (m, 1) refined}`` equals the F_q-points of ``S / I_de``."""
    check_residue(S.lattices.f_star.target, q)
    lhs = refined_points_trivial_g(S, constraints, q, budget)
    rhs = set(S.pic.with_relations(Ide).enumerate_points(q, budget))
    return lhs == rhs


# -- theta search ------------------------------------------------------------------------------

def theta_grid(n_free: int, radius: int):
    """Integer vectors in ``[-radius, radius]^n_free``, by max-norm then lexicographically."""
    pts = list(product(range(-radius, radius + 1), repeat=n_free))
    return sorted(pts, key=lambda t: (max((abs(x) for x in t), default=0), t))


def search_theta(C: CoxData, S: SPresentation, constraints, QL: QuiverLattices, q: int, radius: int = 2,
                 restricted: bool = True, budget: int | None = None):
    """First generic theta in the grid whose refined mass equals the stack mass.

    Returns ``(theta or None, tried)`` where ``tried`` lists ``(theta, outcome)``.
    """
    target = stack_mass(C, q, budget)
    tried = []
    for th in theta_grid(QL.n_vertices - 1, radius):
        if generic_violations(QL, th, restricted):
            tried.append((th, "non-generic"))
            continue
        rep = refined_mass(S, constraints, QL, th, q, restricted, budget)
        if rep.refined_mass == target:
            tried.append((th, "match"))
            return th, tried
        tried.append((th, f"mass {rep.refined_mass}"))
    return None, tried
