"""Quiver of sections of a collection of line bundles, and its relations.

Vertices are degree classes; an arrow ``i -> j`` is a monomial section of
degree ``deg j - deg i`` that does not factor through another vertex.
Relations and Peirce bases are computed pair by pair by mapping each path
to the product of its labels in the Cox ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import BasisMismatch, NotInLambdaR, PathExplosion
from .fields import nullspace, reduce_vector, rref
from .glps import CoxData
from .lattice import GroupElement
from .polyring import mono_mul, term_key

DEFAULT_PATH_BUDGET = 10**5


@dataclass(frozen=True)
class Arrow:
    id: int
    tail: int
    head: int
    label: tuple[int, ...]


def label_key(m: Sequence[int]):
    """Arrow label preference: single variables first, then by degree, then lex."""
    return (sum(m) != 1, sum(m), term_key(tuple(m)))


@dataclass
class Quiver:
    vertices: tuple[GroupElement, ...]
    arrows: tuple[Arrow, ...]
    variables: tuple[str, ...]

    def degree(self, i: int) -> GroupElement:
        return self.vertices[i]

    def arrows_from(self, i: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == i]

    def label_name(self, a: Arrow | int) -> str:
        a = self.arrows[a] if isinstance(a, int) else a
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(self.variables, a.label) if e) or "1"

    def path_monomial(self, path: Sequence[int]) -> tuple[int, ...]:
        m = (0,) * len(self.variables)
        for a in path:
            m = mono_mul(m, self.arrows[a].label)
        return m

    def paths(self, i: int, j: int, budget: int = DEFAULT_PATH_BUDGET) -> list[tuple[int, ...]]:
        """All paths ``i -> j`` as arrow-id tuples, sorted lexicographically."""
        if i == j:
            return [()]
        out: list[tuple[int, ...]] = []
        out_arrows = {v: self.arrows_from(v) for v in range(len(self.vertices))}

        def walk(v, acc):
            for a in out_arrows[v]:
                nxt = acc + (a.id,)
                if a.head == j:
                    out.append(nxt)
                    if len(out) > budget:
                        raise PathExplosion(f"more than {budget} paths from {i} to {j}")
                else:
                    walk(a.head, nxt)

        walk(i, ())
        return sorted(out)


def build_quiver_of_sections(C: CoxData, vertices: Sequence) -> Quiver:
    """Arrows ``i -> j`` form a monomial basis of the cokernel of
    ``sum_k R_{k-i} (x) R_{j-k} -> R_{j-i}`` over intermediate vertices ``k``.
    """
    P = C.presentation
    verts = [v if isinstance(v, GroupElement) else C.group.element(v) for v in vertices]
    zero = C.group.zero()
    if not any(v == zero for v in verts):
        raise ValueError("the vertex set must contain the class 0")
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if verts[a] == verts[b]:
                raise ValueError(f"vertices {a} and {b} have the same class")
    z = next(i for i, v in enumerate(verts) if v == zero)
    verts = [verts[z]] + verts[:z] + verts[z + 1:]

    found = []
    for i, vi in enumerate(verts):
        for j, vj in enumerate(verts):
            if i == j:
                continue
            lam = vj - vi
            dim = P.hilbert_value(lam)
            if dim == 0:
                continue
            rows = []
            for k, vk in enumerate(verts):
                if k in (i, j):
                    continue
                mu1, mu2 = vk - vi, vj - vk
                if P.hilbert_value(mu1) == 0 or P.hilbert_value(mu2) == 0:
                    continue
                for m1 in P.graded_component_basis(mu1):
                    for m2 in P.graded_component_basis(mu2):
                        rows.append(P.normal_form(mono_mul(m1, m2), lam))
            R, piv = rref(rows, P.field, dim)
            rank = len(piv)
            for m in sorted(P.monomials_of_degree(lam), key=label_key):
                if rank == dim:
                    break
                v = reduce_vector(P.normal_form(m, lam), R, piv, P.field)
                if any(v):
                    R, piv = rref(R + [v], P.field, dim)
                    rank = len(piv)
                    found.append((i, j, m))
    found.sort(key=lambda t: (t[0], t[1], label_key(t[2])))
    arrows = tuple(Arrow(n, i, j, tuple(m)) for n, (i, j, m) in enumerate(found))
    return Quiver(tuple(verts), arrows, P.variables)


@dataclass
class Relation:
    tail: int
    head: int
    coefficients: dict  # path -> scalar

    def format(self, Q: Quiver) -> str:
        parts = []
        for p, c in self.coefficients.items():
            word = "".join(f"[{a}]" for a in p)
            parts.append(f"{c}*{word}")
        return " + ".join(parts)


class PeirceBasis:
    """For each vertex pair, basis paths of ``e_i A e_j`` with their Cox monomials."""

    def __init__(self, entries: dict):
        self._entries = entries

    def __getitem__(self, ij) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return self._entries.get(tuple(ij), [])

    def pairs(self):
        return sorted(self._entries)

    def dimension(self, i: int, j: int) -> int:
        return len(self[i, j])


@dataclass
class PathAlgebra:
    quiver: Quiver
    relations: list[Relation]
    peirce: PeirceBasis
    field: object = field(default=None, repr=False)


def compute_relations(Q: Quiver, C: CoxData, path_budget: int = DEFAULT_PATH_BUDGET) -> PathAlgebra:
    """Relations pair by pair: the kernel of ``paths(i, j) -> R_{deg j - deg i}``.

    Each pair's relations are the reduced echelon basis of that kernel,
    with paths in lexicographic arrow-id order.  Peirce basis paths are
    picked greedily with paths ordered by their monomial first, so matched
    pairs pick the same monomials.
    """
    P = C.presentation
    F = P.field
    relations: list[Relation] = []
    peirce: dict = {}
    n = len(Q.vertices)
    for i in range(n):
        for j in range(n):
            if i == j:
                peirce[(i, j)] = [((), (0,) * P.nvars)]
                continue
            lam = Q.vertices[j] - Q.vertices[i]
            dim = P.hilbert_value(lam)
            if dim == 0:
                continue
            paths = Q.paths(i, j, path_budget)
            if not paths:
                peirce[(i, j)] = []
                continue
            monos = [Q.path_monomial(p) for p in paths]
            vecs = [P.normal_form(m, lam) for m in monos]
            A = [[vecs[p][r] for p in range(len(paths))] for r in range(dim)]
            for row in nullspace(A, len(paths), F):
                coeffs = {paths[p]: c for p, c in enumerate(row) if c != 0}
                relations.append(Relation(i, j, coeffs))
            order = sorted(range(len(paths)), key=lambda p: (term_key(monos[p]), paths[p]))
            chosen, R, piv = [], [], []
            for p in order:
                v = reduce_vector(vecs[p], R, piv, F)
                if any(v):
                    R, piv = rref(R + [v], F, dim)
                    chosen.append((paths[p], monos[p]))
                    if len(chosen) == dim:
                        break
            peirce[(i, j)] = chosen
    return PathAlgebra(Q, relations, PeirceBasis(peirce), F)


def gamma_iso(PB: PeirceBasis, lattices, i: int, j: int, k: int, l: int) -> dict:
    """Bijection ``e_i A e_j -> e_k A e_l`` matching basis paths by monomial.

    ``lattices`` must provide ``kappa(i, j, k, l)`` and ``in_lambda_r(v)``.
    """
    kappa = lattices.kappa(i, j, k, l)
    if not lattices.in_lambda_r(kappa):
        raise NotInLambdaR(f"kappa({i},{j};{k},{l}) = {kappa} is not in the relation lattice")
    src, dst = PB[i, j], PB[k, l]
    by_mono = {m: p for p, m in dst}
    if len(src) != len(dst) or any(m not in by_mono for _, m in src):
        raise BasisMismatch(f"Peirce components ({i},{j}) and ({k},{l}) have different monomial bases")
    return {p: by_mono[m] for p, m in src}
