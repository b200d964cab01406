"""Probability, signed and complex measures on a finite Abelian group.

A :class:`Measure` is a weight table indexed like its group.  Two backings are
supported:

* float backing: ``weights`` is a complex128 array;
* exact backing: real rational weights held as integer ``numerators`` over a
  common positive ``denominator`` (``weights`` is still filled in as the
  float view).

Operations between two exact measures stay exact; mixing with a float
measure falls back to floats.  Use :meth:`Measure.to_float` to drop the exact
backing explicitly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .groups import Element, Group, Homomorphism, Subgroup, product_group

DEFAULT_TOL = 1e-9
_INT64_SAFE = 2**62


def int_array(values) -> np.ndarray:
    """Integer array: int64 when every entry is comfortably in range, else Python ints."""
    arr = np.asarray(values, dtype=object)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    if max(abs(int(v)) for v in arr.flat) < _INT64_SAFE:
        return arr.astype(np.int64)
    return np.vectorize(int, otypes=[object])(arr)


def max_abs(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


def product_dtype(bound_a: int, bound_b: int, terms: int = 1):
    """dtype that holds sums of ``terms`` products without overflow."""
    return np.int64 if bound_a * bound_b * max(terms, 1) < _INT64_SAFE else object


class GroupMismatchError(ValueError):
    """Two measures live on different groups."""


class Measure:
    """A complex measure on a finite group."""

    __slots__ = ("group", "weights", "numerators", "denominator")

    def __init__(self, group: Group, weights, *, _exact: tuple[np.ndarray, int] | None = None):
        self.group = group
        if _exact is not None:
            num, den = _exact
            self.numerators = num
            self.denominator = den
            if num.dtype == object:
                self.weights = np.array([complex(int(n) / den) for n in num], dtype=complex)
            else:
                self.weights = num.astype(float) / den + 0j
        else:
            w = np.asarray(weights, dtype=complex).reshape(-1)
            self.numerators = None
            self.denominator = None
            self.weights = w
        if self.weights.shape != (len(group),):
            raise ValueError(f"expected {len(group)} weights for {group}, got {self.weights.shape}")

    # constructors ----------------------------------------------------------

    @classmethod
    def exact(cls, group: Group, numerators: Iterable[int], denominator: int) -> "Measure":
        num = int_array(list(numerators))
        den = int(denominator)
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = reduce(math.gcd, (int(v) for v in num.flat), den)
        if g > 1:
            num = num // g
            den //= g
        return cls(group, None, _exact=(num, den))

    @classmethod
    def from_fractions(cls, group: Group, values: Sequence) -> "Measure":
        fr = [Fraction(v) for v in values]
        den = reduce(math.lcm, (f.denominator for f in fr), 1)
        return cls.exact(group, [f.numerator * (den // f.denominator) for f in fr], den)

    def to_float(self) -> "Measure":
        return Measure(self.group, self.weights.copy())

    # inspection -------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.numerators is not None

    def fractions(self) -> list[Fraction]:
        if not self.is_exact:
            raise ValueError("measure has no exact backing")
        return [Fraction(int(n), self.denominator) for n in self.numerators]

    def __getitem__(self, x: Element) -> complex:
        return complex(self.weights[self.group.index(x)])

    def __repr__(self) -> str:
        backing = "exact" if self.is_exact else "float"
        return f"Measure({self.group}, {self.kind()}, {backing})"

    @property
    def total_mass(self):
        if self.is_exact:
            return Fraction(int(self.numerators.sum()), self.denominator)
        return complex(self.weights.sum())

    def is_real(self, tol: float = DEFAULT_TOL) -> bool:
        return self.is_exact or bool(np.abs(self.weights.imag).max() <= tol)

    def is_probability(self, tol: float = DEFAULT_TOL) -> bool:
        if self.is_exact:
            return bool((self.numerators >= 0).all()) and int(self.numerators.sum()) == self.denominator
        w = self.weights
        return self.is_real(tol) and bool(w.real.min() >= -tol) and abs(w.sum() - 1) <= tol

    def kind(self, tol: float = DEFAULT_TOL) -> str:
        if self.is_probability(tol):
            return "probability"
        return "signed" if self.is_real(tol) else "complex"

    def support(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Boolean mask of ``{x : mu{x} != 0}`` (exact test under exact backing)."""
        if self.is_exact:
            return np.asarray(self.numerators != 0, dtype=bool)
        return np.abs(self.weights) > tol

    def distance(self, other: "Measure") -> float:
        """Sup-norm distance between weight tables."""
        _same_group(self, other)
        if self.is_exact and other.is_exact:
            a = self.numerators * other.denominator
            b = other.numerators * self.denominator
            return float(Fraction(max_abs(a - b), self.denominator * other.denominator))
        return float(np.abs(self.weights - other.weights).max())

    def allclose(self, other: "Measure", tol: float = DEFAULT_TOL) -> bool:
        _same_group(self, other)
        if self.is_exact and other.is_exact:
            return bool(np.all(self.numerators * other.denominator == other.numerators * self.denominator))
        return self.distance(other) <= tol


def _same_group(mu: Measure, nu: Measure) -> None:
    if mu.group != nu.group:
        raise GroupMismatchError(f"{mu.group} != {nu.group}")


def point_mass(g: Group, x: Element) -> Measure:
    """``E_x``, the unit mass at ``x``."""
    num = np.zeros(len(g), dtype=np.int64)
    num[g.index(x)] = 1
    return Measure.exact(g, num, 1)


def haar(g: Group, k: Subgroup) -> Measure:
    """``m_K``: the uniform probability on the subgroup ``k``."""
    if k.parent != g:
        raise GroupMismatchError("subgroup belongs to a different group")
    return Measure.exact(g, k.mask.astype(np.int64), len(k))


def uniform(g: Group) -> Measure:
    return Measure.exact(g, np.ones(len(g), dtype=np.int64), len(g))


def convolve(mu: Measure, nu: Measure) -> Measure:
    """``(mu * nu){z} = sum_x mu{x} nu{z - x}``."""
    _same_group(mu, nu)
    g = mu.group
    sub = g.sub_table  # sub[z, x] = z - x
    if mu.is_exact and nu.is_exact:
        dt = product_dtype(max_abs(mu.numerators), max_abs(nu.numerators), len(g))
        a = mu.numerators.astype(dt)
        b = nu.numerators.astype(dt)
        out = (b[sub] * a[None, :]).sum(axis=1)
        return Measure.exact(g, out, mu.denominator * nu.denominator)
    return Measure(g, (nu.weights[sub] * mu.weights[None, :]).sum(axis=1))


def convolve_all(*measures: Measure) -> Measure:
    return reduce(convolve, measures)


def shift(mu: Measure, x: Element) -> Measure:
    """``mu * E_x``."""
    return convolve(mu, point_mass(mu.group, x))


def reflect(mu: Measure) -> Measure:
    """Law of ``-xi`` when ``mu`` is the law of ``xi``."""
    inv = mu.group.neg_index
    if mu.is_exact:
        return Measure.exact(mu.group, mu.numerators[inv], mu.denominator)
    return Measure(mu.group, mu.weights[inv])


def pushforward(h: Homomorphism, mu: Measure) -> Measure:
    """Image measure ``h(mu)`` on ``h.target``."""
    if mu.group != h.source:
        raise GroupMismatchError("measure is not on the source of the homomorphism")
    n = len(h.target)
    if mu.is_exact:
        out = np.zeros(n, dtype=mu.numerators.dtype)
        np.add.at(out, h.table, mu.numerators)
        return Measure.exact(h.target, out, mu.denominator)
    out = np.zeros(n, dtype=complex)
    np.add.at(out, h.table, mu.weights)
    return Measure(h.target, out)


class JointMeasure(Measure):
    """A measure on ``X x X`` remembering the factor ``X``."""

    __slots__ = ("factor",)

    def __init__(self, factor: Group, weights, *, _exact=None):
        super().__init__(product_group(factor, factor), weights, _exact=_exact)
        self.factor = factor

    def table(self) -> np.ndarray:
        """Weights as an ``(|X|, |X|)`` array (exact numerators when available)."""
        n = len(self.factor)
        src = self.numerators if self.is_exact else self.weights
        return src.reshape(n, n)

    def marginals(self) -> tuple[Measure, Measure]:
        t = self.table()
        if self.is_exact:
            return (Measure.exact(self.factor, t.sum(axis=1), self.denominator),
                    Measure.exact(self.factor, t.sum(axis=0), self.denominator))
        return Measure(self.factor, t.sum(axis=1)), Measure(self.factor, t.sum(axis=0))


def sum_diff_joint(mu1: Measure, mu2: Measure) -> JointMeasure:
    """Exact law of ``(xi_1 + xi_2, xi_1 - xi_2)`` for independent ``xi_k ~ mu_k``."""
    _same_group(mu1, mu2)
    g = mu1.group
    n = len(g)
    flat = (g.add_table * n + g.sub_table).reshape(-1)
    if mu1.is_exact and mu2.is_exact:
        dt = product_dtype(max_abs(mu1.numerators), max_abs(mu2.numerators), n)
        w = np.outer(mu1.numerators.astype(dt), mu2.numerators.astype(dt)).reshape(-1)
        out = np.zeros(n * n, dtype=dt)
        np.add.at(out, flat, w)
        return JointMeasure(g, None, _exact=(out, mu1.denominator * mu2.denominator))
    out = np.zeros(n * n, dtype=complex)
    np.add.at(out, flat, np.outer(mu1.weights, mu2.weights).reshape(-1))
    return JointMeasure(g, out)


def is_independent(j: JointMeasure, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``j`` equals the product of its marginals (exactly, under exact backing)."""
    t = j.table()
    if j.is_exact:
        r, c = t.sum(axis=1), t.sum(axis=0)
        den = j.denominator
        dt = product_dtype(max(max_abs(t), max_abs(r)), max(den, max_abs(c)))
        rhs = np.outer(r.astype(dt), c.astype(dt))
        return bool(np.all(t.astype(dt) * den == rhs))
    r, c = t.sum(axis=1), t.sum(axis=0)
    return bool(np.abs(t - np.outer(r, c)).max() <= tol)
