"""Integer matrices and finitely generated abelian groups.

All arithmetic uses Python integers, so nothing here can overflow.  Groups
are presented as ``Z^n / span(relators)``; equality of elements, canonical
coordinates and character counts all go through a cached Smith form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, IllDefinedHom, NonFreeSource


class IntMatrix:
    """Dense integer matrix with explicit shape (zero rows/cols allowed)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], rows: int | None = None, cols: int | None = None):
        ent = tuple(tuple(int(x) for x in row) for row in entries)
        if rows is None:
            rows = len(ent)
        if cols is None:
            if not ent:
                raise DimensionMismatch("cols must be given for a matrix without rows")
            cols = len(ent[0])
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise DimensionMismatch(f"entries do not form a {rows}x{cols} matrix")
        self.rows, self.cols, self.entries = rows, cols, ent

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.columns(), self.cols, self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.entries],
            self.rows,
            other.cols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.entries]}, rows={self.rows}, cols={self.cols})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


def smith_normal_form(M) -> SmithForm:
    """Return ``U, D, V`` with ``U @ M @ V == D`` and ``d_1 | d_2 | ...``.

    Pivots are chosen by minimal absolute value, ties broken by the lowest
    (row, column) index, so the transforms are reproducible.  Only the
    nonzero diagonal entries are reported as invariant factors.
    """
    M = _as_matrix(M)
    m, n = M.shape
    A = [list(r) for r in M.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    def min_entry(t, cells):
        best = None
        for i, j in cells:
            a = A[i][j]
            if a and (best is None or abs(a) < best[0]):
                best = (abs(a), i, j)
        return best

    factors = []
    for t in range(min(m, n)):
        best = min_entry(t, ((i, j) for i in range(t, m) for j in range(t, n)))
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, m):
                add_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, n):
                add_col(j, t, -(A[t][j] // A[t][t]))
            rest = min_entry(t, [(i, t) for i in range(t + 1, m)] + [(t, j) for j in range(t + 1, n)])
            if rest is not None:
                if rest[0] < abs(A[t][t]):
                    _, i, j = rest
                    if j == t:
                        swap_rows(t, i)
                    else:
                        swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        factors.append(A[t][t])
    return SmithForm(IntMatrix(U, m, m), IntMatrix(A, m, n), IntMatrix(V, n, n), tuple(factors))


def hermite_rows(vectors: Iterable[Sequence[int]], length: int) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice generated by ``vectors``.

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``; zero rows are dropped, so the result is a basis.
    """
    rows = [list(v) for v in vectors if any(v)]
    for v in rows:
        if len(v) != length:
            raise DimensionMismatch(f"vector of length {len(v)}, expected {length}")
    out: list[list[int]] = []
    col = 0
    while rows and col < length:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            for r in live[1:]:
                q = r[col] // p[col]
                for k in range(length):
                    r[k] -= q * p[k]
            live = [r for r in live if r[col]]
        pivot = live[0]
        if pivot[col] < 0:
            pivot[:] = [-x for x in pivot]
        rows = [r for r in rows if r is not pivot and any(r)]
        for prev in out:
            q = prev[col] // pivot[col]
            if q:
                prev[:] = [a - q * b for a, b in zip(prev, pivot)]
        out.append(pivot)
        col += 1
    return [tuple(r) for r in out]


def integer_kernel(A: IntMatrix) -> list[tuple[int, ...]]:
    """A basis (Hermite form) of ``{x in Z^n : A x = 0}``."""
    snf = smith_normal_form(A)
    r = snf.rank
    cols = snf.V.columns()[r:]
    return hermite_rows(cols, A.cols)


class FgAbelianGroup:
    """``Z^n`` modulo the span of the relator columns.

    ``orient_by`` is an optional list of coordinate vectors; for each free
    coordinate the first vector with a nonzero value there is made positive.
    That only changes the sign convention of canonical coordinates.
    """

    def __init__(self, n_generators: int, relators: Sequence[Sequence[int]] = (), orient_by=None):
        self.n_generators = int(n_generators)
        rel = [tuple(int(x) for x in c) for c in relators]
        for c in rel:
            if len(c) != self.n_generators:
                raise DimensionMismatch(f"relator of length {len(c)} for {self.n_generators} generators")
        self.relators = tuple(rel)
        self.orient_by = tuple(tuple(int(x) for x in v) for v in orient_by) if orient_by else None
        self.relation_matrix = IntMatrix.from_columns(rel, self.n_generators)
        snf = smith_normal_form(self.relation_matrix)
        U = [list(r) for r in snf.U.entries]
        if orient_by is not None:
            for i in range(snf.rank, self.n_generators):
                for v in orient_by:
                    val = sum(a * b for a, b in zip(U[i], v))
                    if val:
                        if val < 0:
                            U[i] = [-a for a in U[i]]
                        break
        self._U = tuple(tuple(r) for r in U)
        self.smith = SmithForm(IntMatrix(U, self.n_generators, self.n_generators), snf.D, snf.V, snf.invariant_factors)

    @classmethod
    def free(cls, n: int) -> FgAbelianGroup:
        return cls(n, ())

    @property
    def rank(self) -> int:
        return self.n_generators - self.smith.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.smith.invariant_factors if d > 1)

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def exponent(self) -> int:
        e = 1
        for d in self.torsion:
            e = e * d // gcd(e, d)
        return e

    def invariants(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def _check(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.n_generators:
            raise DimensionMismatch(f"{len(coords)} coordinates for a group on {self.n_generators} generators")
        return tuple(int(x) for x in coords)

    def reduced(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Smith coordinates ``U x`` (before reduction modulo invariants)."""
        x = self._check(coords)
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self._U)

    def free_part(self, coords) -> tuple[int, ...]:
        return self.reduced(coords)[self.smith.rank:]

    def torsion_part(self, coords) -> tuple[int, ...]:
        y = self.reduced(coords)
        return tuple(y[i] % d for i, d in enumerate(self.smith.invariant_factors) if d > 1)

    def canonical(self, coords) -> tuple[int, ...]:
        """Free coordinates followed by torsion residues; equal iff elements are equal."""
        return self.free_part(coords) + self.torsion_part(coords)

    def is_zero(self, coords) -> bool:
        y = self.reduced(coords)
        r = self.smith.rank
        return all(y[i] % d == 0 for i, d in enumerate(self.smith.invariant_factors)) and not any(y[r:])

    def element(self, coords) -> GroupElement:
        return GroupElement(self, self._check(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.n_generators)

    def generator(self, i: int) -> GroupElement:
        return self.element([int(j == i) for j in range(self.n_generators)])

    def __repr__(self) -> str:
        return f"FgAbelianGroup(rank={self.rank}, torsion={list(self.torsion)})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: FgAbelianGroup
    coords: tuple[int, ...]

    def _other(self, other) -> tuple[int, ...]:
        if isinstance(other, GroupElement):
            if other.group is not self.group:
                raise DimensionMismatch("elements of different groups")
            return other.coords
        return self.group._check(other)

    def __add__(self, other) -> GroupElement:
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, self._other(other))))

    def __sub__(self, other) -> GroupElement:
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, self._other(other))))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement) or other.group is not self.group:
            return NotImplemented
        return self.group.is_zero(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __hash__(self) -> int:
        return hash(self.canonical)

    @property
    def canonical(self) -> tuple[int, ...]:
        return self.group.canonical(self.coords)

    @property
    def free_part(self) -> tuple[int, ...]:
        return self.group.free_part(self.coords)

    @property
    def torsion_part(self) -> tuple[int, ...]:
        return self.group.torsion_part(self.coords)

    def sort_key(self) -> tuple:
        return (self.free_part, self.torsion_part)

    def __repr__(self) -> str:
        return f"GroupElement({list(self.canonical)})"


def element_equal(g1, g2, G: FgAbelianGroup) -> bool:
    """True iff ``g1 - g2`` lies in the relation lattice of ``G``."""
    a = g1.coords if isinstance(g1, GroupElement) else G._check(g1)
    b = g2.coords if isinstance(g2, GroupElement) else G._check(g2)
    G._check(a), G._check(b)
    return G.is_zero(tuple(x - y for x, y in zip(a, b)))


def dual_group_order(G: FgAbelianGroup, q: int) -> int:
    """``|Hom(G, F_q^x)|`` for the cyclic group ``F_q^x`` of order ``q - 1``."""
    if q < 2:
        raise ValueError("q must be at least 2")
    n = (q - 1) ** G.rank
    for d in G.torsion:
        n *= gcd(d, q - 1)
    return n


class GroupHom:
    """Homomorphism given by a ``target_gens x source_gens`` integer matrix."""

    def __init__(self, source: FgAbelianGroup, target: FgAbelianGroup, matrix):
        M = _as_matrix(matrix) if not isinstance(matrix, IntMatrix) else matrix
        if M.shape != (target.n_generators, source.n_generators):
            raise DimensionMismatch(
                f"matrix shape {M.shape} does not match {target.n_generators}x{source.n_generators}"
            )
        for rel in source.relators:
            if not target.is_zero(M.apply(rel)):
                raise IllDefinedHom(f"relator {rel} is not sent into the target relations")
        self.source, self.target, self.matrix = source, target, M

    def __call__(self, x) -> GroupElement:
        coords = x.coords if isinstance(x, GroupElement) else self.source._check(x)
        return self.target.element(self.matrix.apply(coords))

    def is_surjective(self) -> bool:
        cok = FgAbelianGroup(self.target.n_generators, list(self.target.relators) + self.matrix.columns())
        return cok.rank == 0 and not cok.torsion


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of ``Z^ambient_rank``; ``basis`` holds Hermite-form basis vectors."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]
    _pivots: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pivots = []
        for b in self.basis:
            if len(b) != self.ambient_rank:
                raise DimensionMismatch("basis vector length differs from ambient rank")
            pivots.append(next(i for i, x in enumerate(b) if x))
        object.__setattr__(self, "_pivots", tuple(pivots))

    @classmethod
    def spanned_by(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, tuple(hermite_rows(vectors, ambient_rank)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def matrix(self) -> IntMatrix:
        """Basis vectors as columns."""
        return IntMatrix.from_columns(self.basis, self.ambient_rank)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``v`` in the basis, or None if ``v`` is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a rank-{self.ambient_rank} ambient")
        w = [int(x) for x in v]
        coeffs = []
        for b, p in zip(self.basis, self._pivots):
            if any(w[:p]):
                return None
            c, r = divmod(w[p], b[p])
            if r:
                return None
            coeffs.append(c)
            if c:
                w = [x - c * y for x, y in zip(w, b)]
        return tuple(coeffs) if not any(w) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def combine(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.ambient_rank
        for c, b in zip(coeffs, self.basis):
            for i, x in enumerate(b):
                out[i] += c * x
        return tuple(out)


def kernel_lattice(h: GroupHom) -> Sublattice:
    """Basis of ``ker h`` for a homomorphism out of a free group.

    Torsion in the target is taken into account: ``v`` is in the kernel
    when ``h(v)`` lies in the target's relation lattice.
    """
    if h.source.relators and any(any(c) for c in h.source.relators):
        raise NonFreeSource("kernel_lattice needs a free source group")
    n = h.source.n_generators
    T = h.target
    # (v, w) with M v - R w = 0
    rows = [list(h.matrix.entries[i]) + [-c[i] for c in T.relators] for i in range(T.n_generators)]
    A = IntMatrix(rows, T.n_generators, n + len(T.relators))
    gens = [v[:n] for v in integer_kernel(A)]
    return Sublattice.spanned_by(gens, n)
