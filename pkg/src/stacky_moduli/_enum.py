"""Vectorised helpers for brute-force enumeration over prime fields.

Candidate spaces are indexed by integers ``0 <= idx < total``; every
enumeration in the package accepts a ``[start, stop)`` range so callers can
split the work into disjoint pieces and add the results.
"""
from __future__ import annotations

import os

import numpy as np

from .errors import BudgetExceeded
from .fields import GF

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 18


def default_budget() -> int:
    env = os.environ.get("STACKY_MODULI_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def check_budget(total: int, budget: int | None) -> None:
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget of {budget}")


def digits(start: int, stop: int, base: int, n: int) -> np.ndarray:
    """Base-``base`` digits of ``start..stop-1``, most significant first."""
    return digits_of(np.arange(start, stop, dtype=np.int64), base, n)


def digits_of(idx: np.ndarray, base: int, n: int) -> np.ndarray:
    idx = idx.copy()
    out = np.empty((len(idx), n), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out[:, k] = idx % base
        idx //= base
    return out


def chunks(start: int, stop: int, size: int = CHUNK):
    for a in range(start, stop, size):
        yield a, min(stop, a + size)


def power_table(q: int, max_exp: int) -> np.ndarray:
    """``table[x, e] = x**e mod q``."""
    t = np.ones((q, max_exp + 1), dtype=np.int64)
    x = np.arange(q, dtype=np.int64)
    for e in range(1, max_exp + 1):
        t[:, e] = t[:, e - 1] * x % q
    return t


class CompiledPoly:
    """A polynomial reduced mod ``q`` in array form, for evaluation on point batches."""

    def __init__(self, poly, q: int):
        F = GF(q)
        terms = [(m, F(c)) for m, c in poly.terms.items()]
        terms = [(m, c) for m, c in terms if c]
        self.q = q
        self.coefs = np.array([c for _, c in terms], dtype=np.int64)
        self.exps = np.array([m for m, _ in terms], dtype=np.int64).reshape(len(terms), poly.nvars)
        self.max_exp = int(self.exps.max()) if self.exps.size else 0

    def __call__(self, X: np.ndarray, table: np.ndarray) -> np.ndarray:
        q = self.q
        total = np.zeros(len(X), dtype=np.int64)
        for c, e in zip(self.coefs, self.exps):
            term = np.full(len(X), c, dtype=np.int64)
            for v in np.nonzero(e)[0]:
                term = term * table[X[:, v], e[v]] % q
            total = (total + term) % q
        return total
