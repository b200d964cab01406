"""Characteristic functions on the dual group and their inversion.

``char_fn`` uses the pairing directly (``mu^(y) = sum_x (x, y) mu{x}``) and
``inverse_char`` uses its conjugate, normalised by ``1/|X|``.  Both are plain
O(|X|^2) matrix products.

For measures with exact rational weights the transform is also kept exactly:
each value lies in the cyclotomic field Q(zeta_M), M the group exponent, and
is stored as an integer coefficient vector in the power basis
``1, zeta, ..., zeta^(phi(M)-1)`` over a common denominator.  That
representation is unique, so zero tests and equalities are exact.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy

from .groups import Group
from .measures import DEFAULT_TOL, Measure, max_abs, product_dtype


@lru_cache(maxsize=None)
def cyclotomic_basis(M: int) -> tuple[int, np.ndarray, np.ndarray]:
    """``(phi, R, T)`` for Q(zeta_M).

    ``R[k]`` are the power-basis coordinates of ``zeta^k`` (0 <= k < 2M) and
    ``T[i, j]`` those of ``zeta^(i+j)`` (0 <= i, j < phi).
    """
    t = sympy.Symbol("t")
    coeffs = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(M, t), t).all_coeffs()][::-1]
    phi = len(coeffs) - 1
    R = np.zeros((2 * M, phi), dtype=np.int64)
    cur = np.zeros(phi + 1, dtype=np.int64)
    cur[0] = 1
    for k in range(2 * M):
        R[k] = cur[:phi]
        cur = np.roll(cur, 1)
        cur[0] = 0
        top = cur[phi]
        if top:
            cur -= top * np.array(coeffs, dtype=np.int64)
    T = np.stack([R[i: i + phi] for i in range(phi)])
    return phi, R, T


def cyclotomic_mul(a: np.ndarray, b: np.ndarray, M: int) -> np.ndarray:
    """Product of power-basis vectors of shape ``(..., phi)``."""
    phi, _, T = cyclotomic_basis(M)
    tmax = max_abs(T)
    dt = product_dtype(max_abs(a) * max_abs(b), tmax, phi * phi)
    outer = (a.astype(dt)[..., :, None] * b.astype(dt)[..., None, :]).reshape(*a.shape[:-1], phi * phi)
    return outer @ T.reshape(phi * phi, phi).astype(dt)


class CyclotomicTable:
    """Exact values ``coeffs[y] / denominator`` in Q(zeta_M), one per dual element."""

    __slots__ = ("conductor", "coeffs", "denominator")

    def __init__(self, conductor: int, coeffs: np.ndarray, denominator: int):
        self.conductor = conductor
        self.coeffs = coeffs
        self.denominator = denominator

    @classmethod
    def from_measure(cls, mu: Measure) -> "CyclotomicTable":
        if not mu.is_exact:
            raise ValueError("exact transform needs an exactly backed measure")
        g = mu.group
        M = g.exponent
        _, R, _ = cyclotomic_basis(M)
        n = len(g)
        E = g.pairing_exponents  # E[x, y]
        counts = np.zeros((n, M), dtype=mu.numerators.dtype)
        ys = np.broadcast_to(np.arange(n)[None, :], (n, n))
        np.add.at(counts, (ys.reshape(-1), E.reshape(-1)), np.repeat(mu.numerators, n))
        dt = product_dtype(max_abs(counts), max_abs(R), M)
        coeffs = counts.astype(dt) @ R[:M].astype(dt)
        return cls(M, coeffs, mu.denominator)

    def is_zero(self) -> np.ndarray:
        return ~np.any(self.coeffs != 0, axis=1)

    def to_complex(self) -> np.ndarray:
        phi = self.coeffs.shape[1]
        powers = np.exp(2j * np.pi * np.arange(phi) / self.conductor)
        return (self.coeffs.astype(float) @ powers) / self.denominator


class CharFn:
    """A complex function on the dual group, optionally with exact values."""

    __slots__ = ("group", "values", "exact")

    def __init__(self, group: Group, values, exact: CyclotomicTable | None = None):
        self.group = group
        self.values = np.asarray(values, dtype=complex).reshape(-1)
        self.exact = exact
        if self.values.shape != (len(group),):
            raise ValueError(f"expected {len(group)} values for the dual of {group}")

    def __call__(self, y) -> complex:
        return complex(self.values[self.group.index(y)])

    def __repr__(self) -> str:
        return f"CharFn(dual of {self.group}{', exact' if self.exact is not None else ''})"


def char_fn(mu: Measure) -> CharFn:
    """Characteristic function ``mu^(y) = sum_x (x, y) mu{x}``."""
    g = mu.group
    values = g.pairing_table.T @ mu.weights
    exact = CyclotomicTable.from_measure(mu) if mu.is_exact else None
    return CharFn(g, values, exact)


def inverse_char(g: Group, f: CharFn) -> Measure:
    """The unique complex measure whose characteristic function is ``f``."""
    if f.group != g:
        raise ValueError("transform is not defined on the dual of this group")
    return Measure(g, np.conj(g.pairing_table) @ f.values / len(g))


def support_set(f: CharFn, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Boolean mask of ``{y : f(y) != 0}``; exact when ``f`` carries exact values."""
    if f.exact is not None:
        return ~f.exact.is_zero()
    return np.abs(f.values) > tol


def is_real_measure(delta: Measure, tol: float = DEFAULT_TOL) -> bool:
    """True when every weight has imaginary part at most ``tol`` in size."""
    return delta.is_real(tol)
