"""Exact scalar fields and dense Gaussian elimination over them.

Scalars are plain Python values: ``Fraction`` for the rationals and ``int``
residues for prime fields.  Containers (polynomials, representations) carry
the field they live over, which is how mismatches are detected.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class RationalField:
    characteristic = 0
    name = "QQ"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return parse_rational(x)
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(x)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


class PrimeField:
    name = "GF"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldMismatch(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(x, -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rref(rows, field=QQ, ncols: int | None = None):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``.

    ``rows`` are sequences of field scalars; the input is not modified.
    """
    A = [[field(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        if inv != 1:
            A[r] = [_mul(field, x, inv) for x in A[r]]
        # rows are typically sparse: only touch the pivot row's support
        nz = [(k, b) for k, b in enumerate(A[r]) if b != 0]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                row = A[i]
                for k, b in nz:
                    row[k] = _sub(field, row[k], _mul(field, f, b))
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def _mul(field, a, b):
    return a * b % field.p if field.characteristic else a * b


def _sub(field, a, b):
    return (a - b) % field.p if field.characteristic else a - b


def reduce_vector(v, rows, pivots, field=QQ):
    """Reduce ``v`` modulo the row space of an RREF matrix."""
    w = [field(x) for x in v]
    for row, c in zip(rows, pivots):
        f = w[c]
        if f != 0:
            w = [_sub(field, a, _mul(field, f, b)) for a, b in zip(w, row)]
    return w


def nullspace(rows, ncols: int, field=QQ):
    """Basis of ``{x : A x = 0}`` in reduced echelon form."""
    R, pivots = rref(rows, field, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, c in zip(R, pivots):
            x[c] = -row[f] if not field.characteristic else (-row[f]) % field.p
        basis.append(x)
    return rref(basis, field, ncols)[0] if basis else []
