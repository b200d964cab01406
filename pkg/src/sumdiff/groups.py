"""Finite Abelian groups Z(m_1) x ... x Z(m_r), their subgroups and quotients.

Elements are residue tuples.  Internally every element also has an integer
index (row-major: ``idx = sum_j e_j * prod_{i>j} m_i``) and most tables are
numpy arrays over those indices.  The character group is identified with the
group itself through the pairing ``(x, y) = exp(2 pi i sum_j x_j y_j / m_j)``,
so a subgroup of the dual is just another :class:`Subgroup` of the same
:class:`Group`.

All arithmetic here is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

Element = tuple[int, ...]


class InvalidElementError(ValueError):
    """A coordinate tuple that does not describe an element of the group."""


@dataclass(frozen=True)
class Group:
    """The group Z(m_1) x ... x Z(m_r).

    >>> g = Group((4, 3))
    >>> len(g), g.index((2, 1)), g.element(7)
    (12, 7, (2, 1))
    """

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(m) for m in self.orders)
        if any(m < 1 for m in orders):
            raise ValueError(f"cyclic orders must be positive, got {orders}")
        object.__setattr__(self, "orders", orders)

    def __len__(self) -> int:
        return math.prod(self.orders)

    def __repr__(self) -> str:
        if not self.orders:
            return "Group(trivial)"
        return "Group(" + " x ".join(f"Z({m})" for m in self.orders) + ")"

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.orders[j + 1]
        return s

    @cached_property
    def coords(self) -> np.ndarray:
        """``(|X|, r)`` array of all elements in index order."""
        n = len(self)
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        idx = np.arange(n, dtype=np.int64)
        return np.stack([(idx // self.strides[j]) % self.orders[j] for j in range(self.rank)], axis=1)

    def validate(self, x: Iterable[int]) -> Element:
        x = tuple(int(e) for e in x)
        if len(x) != self.rank:
            raise InvalidElementError(f"{x} has {len(x)} coordinates, {self} needs {self.rank}")
        for e, m in zip(x, self.orders):
            if not 0 <= e < m:
                raise InvalidElementError(f"coordinate {e} out of range for Z({m}) in {x}")
        return x

    def index(self, x: Iterable[int]) -> int:
        x = self.validate(x)
        return int(sum(e * int(s) for e, s in zip(x, self.strides)))

    def element(self, i: int) -> Element:
        if not 0 <= i < len(self):
            raise InvalidElementError(f"index {i} out of range for {self}")
        return tuple(int(c) for c in self.coords[i])

    def elements(self) -> Iterator[Element]:
        for row in self.coords:
            yield tuple(int(c) for c in row)

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        """Indices of a ``(..., r)`` coordinate array, reducing mod the orders first."""
        coords = np.asarray(coords, dtype=np.int64) % np.asarray(self.orders, dtype=np.int64)
        return coords @ self.strides if self.rank else np.zeros(coords.shape[:-1], dtype=np.int64)

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(self.validate(x), self.validate(y), self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % m for a, m in zip(self.validate(x), self.orders))

    def mul(self, n: int, x: Element) -> Element:
        return tuple((n * a) % m for a, m in zip(self.validate(x), self.orders))

    def element_order(self, x: Element) -> int:
        x = self.validate(x)
        return reduce(math.lcm, (m // math.gcd(a, m) for a, m in zip(x, self.orders)), 1)

    # index tables ---------------------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self.index_array(c[:, None, :] + c[None, :, :])

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[a, b]`` is the index of ``a - b``."""
        c = self.coords
        return self.index_array(c[:, None, :] - c[None, :, :])

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self.index_array(-self.coords)

    def mul_index(self, n: int) -> np.ndarray:
        return self.index_array(n * self.coords)

    @cached_property
    def pairing_exponents(self) -> np.ndarray:
        """``E[x, y]`` with ``(x, y) = exp(2 pi i E[x, y] / exponent)``."""
        scale = np.array([self.exponent // m for m in self.orders], dtype=np.int64)
        c = self.coords
        return ((c * scale) @ c.T) % self.exponent

    @cached_property
    def pairing_table(self) -> np.ndarray:
        roots = np.exp(2j * np.pi * np.arange(self.exponent) / self.exponent)
        return roots[self.pairing_exponents]

    @property
    def dual(self) -> "Group":
        """The character group, in the self-dual representation."""
        return self


def pairing(g: Group, x: Element, y: Element) -> complex:
    """Value of the character ``y`` at the point ``x``."""
    x, y = g.validate(x), g.validate(y)
    frac = sum(a * b * (g.exponent // m) for a, b, m in zip(x, y, g.orders)) % g.exponent
    return complex(np.exp(2j * np.pi * frac / g.exponent))


def product_group(*groups: Group) -> Group:
    return Group(tuple(m for g in groups for m in g.orders))


# subgroups ----------------------------------------------------------------


def _closure(g: Group, gens: Sequence[int]) -> np.ndarray:
    mask = np.zeros(len(g), dtype=bool)
    mask[0] = True
    members = np.array([0], dtype=np.int64)
    for s in gens:
        if mask[s]:
            continue
        # adjoin s: members + k*s for all k
        step = members
        while True:
            step = g.add_table[step, s]
            new = step[~mask[step]]
            if new.size == 0:
                break
            mask[new] = True
        members = np.flatnonzero(mask)
    return np.flatnonzero(mask)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` stored as its sorted member indices."""

    parent: Group
    indices: np.ndarray
    generators: tuple[Element, ...] = field(default=())

    @classmethod
    def from_mask(cls, g: Group, mask: np.ndarray, check: bool = True) -> "Subgroup":
        idx = np.flatnonzero(mask)
        if check:
            if idx.size == 0 or idx[0] != 0:
                raise ValueError("a subgroup must contain 0")
            m = np.asarray(mask, dtype=bool)
            if not m[g.sub_table[np.ix_(idx, idx)]].all():
                raise ValueError("member set is not closed under subtraction")
        gens = _greedy_generators(g, idx)
        return cls(g, idx, gens)

    @classmethod
    def whole(cls, g: Group) -> "Subgroup":
        return cls.from_mask(g, np.ones(len(g), dtype=bool), check=False)

    @classmethod
    def trivial(cls, g: Group) -> "Subgroup":
        m = np.zeros(len(g), dtype=bool)
        m[0] = True
        return cls(g, np.flatnonzero(m), ())

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(len(self.parent), dtype=bool)
        m[self.indices] = True
        return m

    def __len__(self) -> int:
        return int(self.indices.size)

    def __contains__(self, x) -> bool:
        i = x if isinstance(x, (int, np.integer)) else self.parent.index(x)
        return bool(self.mask[i])

    def __iter__(self) -> Iterator[Element]:
        return self.elements()

    def elements(self) -> Iterator[Element]:
        for i in self.indices:
            yield self.parent.element(int(i))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash((self.parent, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Subgroup(order {len(self)} of {self.parent}, generators={list(self.generators)})"

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.indices].all())


def _greedy_generators(g: Group, idx: np.ndarray) -> tuple[Element, ...]:
    # largest element orders first; keeps the list short in practice
    orders = [g.element_order(g.element(int(i))) for i in idx]
    ranked = sorted((-o, int(i)) for o, i in zip(orders, idx) if o > 1)
    span = np.zeros(len(g), dtype=bool)
    span[0] = True
    gens: list[int] = []
    for _, i in ranked:
        if not span[i]:
            gens.append(i)
            span[_closure(g, gens)] = True
        if span[idx].all():
            break
    return tuple(g.element(i) for i in gens)


def subgroup_from_generators(g: Group, gens: Iterable[Iterable[int]]) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    mask = np.zeros(len(g), dtype=bool)
    mask[_closure(g, [g.index(x) for x in gens])] = True
    return Subgroup.from_mask(g, mask, check=False)


def torsion_subgroup(g: Group, n: int) -> Subgroup:
    """``X_(n) = {x : n x = 0}``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Subgroup.from_mask(g, g.mul_index(n) == 0, check=False)


def power_subgroup(g: Group, n: int) -> Subgroup:
    """``X^(n) = {n x : x in X}``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    mask = np.zeros(len(g), dtype=bool)
    mask[g.mul_index(n)] = True
    return Subgroup.from_mask(g, mask, check=False)


def annihilator(g: Group, s: Subgroup) -> Subgroup:
    """``A(Y, S) = {y : (x, y) = 1 for all x in S}``, a subgroup of the dual."""
    gens = [g.index(x) for x in s.generators] if s.generators else s.indices
    mask = (g.pairing_exponents[gens] == 0).all(axis=0)
    return Subgroup.from_mask(g, mask, check=False)


def is_corwin(g: Group | Subgroup) -> bool:
    """True when doubling is onto, i.e. ``X^(2) = X``."""
    if isinstance(g, Subgroup):
        doubled = np.unique(g.parent.mul_index(2)[g.indices])
        return doubled.size == len(g)
    return len(power_subgroup(g, 2)) == len(g)


def coset_labels(g: Group, s: Subgroup) -> tuple[np.ndarray, list[Element]]:
    """Label every element by its coset of ``s``.

    Returns ``(labels, reps)`` where ``reps`` are the lexicographically smallest
    coset members in increasing order and ``labels[i]`` indexes into ``reps``.
    """
    rep_idx = g.add_table[:, s.indices].min(axis=1)
    uniq, labels = np.unique(rep_idx, return_inverse=True)
    return labels.reshape(-1), [g.element(int(i)) for i in uniq]


def cosets(g: Group, s: Subgroup) -> list[Element]:
    """Canonical coset representatives of ``g`` mod ``s``; the representative of ``s`` is 0 and comes first."""
    return coset_labels(g, s)[1]


# homomorphisms and quotients ------------------------------------------------


class Homomorphism:
    """A group homomorphism stored as a total index table."""

    def __init__(self, source: Group, target: Group, table: np.ndarray, check: bool = True):
        self.source = source
        self.target = target
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (len(source),):
            raise ValueError("map table must list one image per source element")
        if check:
            lhs = self.table[source.add_table]
            rhs = target.add_table[self.table[:, None], self.table[None, :]]
            if not np.array_equal(lhs, rhs):
                a, b = np.argwhere(lhs != rhs)[0]
                raise ValueError(
                    f"map is not additive at {source.element(int(a))}, {source.element(int(b))}"
                )

    @classmethod
    def from_generator_images(cls, source: Group, target: Group, images: Sequence[Element]) -> "Homomorphism":
        """Map determined by the images of the standard basis vectors of ``source``."""
        if len(images) != source.rank:
            raise ValueError("need one image per cyclic factor of the source")
        imgs = np.array([target.validate(y) for y in images], dtype=np.int64).reshape(source.rank, target.rank)
        for m, y in zip(source.orders, imgs):
            if target.index_array(m * y) != 0:
                raise ValueError(f"image {tuple(y)} is not killed by {m}")
        table = target.index_array(source.coords @ imgs)
        return cls(source, target, table, check=False)

    @property
    def images(self) -> list[Element]:
        basis = np.eye(self.source.rank, dtype=np.int64)
        return [self.target.element(int(self.table[self.source.index_array(e)])) for e in basis]

    def __call__(self, x: Element) -> Element:
        return self.target.element(int(self.table[self.source.index(x)]))

    def kernel(self) -> Subgroup:
        return Subgroup.from_mask(self.source, self.table == 0, check=False)

    def image(self) -> Subgroup:
        mask = np.zeros(len(self.target), dtype=bool)
        mask[self.table] = True
        return Subgroup.from_mask(self.target, mask, check=False)

    def is_surjective(self) -> bool:
        return len(self.image()) == len(self.target)

    def dual(self) -> "Homomorphism":
        """The adjoint map between character groups, ``target^ -> source^``.

        Characterised by ``(x, f^(y)) = (f(x), y)``.
        """
        src, tgt = self.source, self.target
        basis_imgs = np.array(self.images, dtype=np.int64).reshape(src.rank, tgt.rank)
        L = tgt.exponent
        scale = np.array([L // d for d in tgt.orders], dtype=np.int64)
        # phase of (f(e_i), y) is sum_j c_ij y_j / d_j = S_i(y) / L
        S = tgt.coords @ (basis_imgs * scale).T
        m = np.array(src.orders, dtype=np.int64)
        num = S * m
        if np.any(num % L):
            raise ArithmeticError("dual map is not integral; inconsistent homomorphism")
        return Homomorphism(tgt, src, src.index_array(num // L), check=False)

    def __repr__(self) -> str:
        return f"Homomorphism({self.source} -> {self.target}, images={self.images})"


def identity(g: Group) -> Homomorphism:
    return Homomorphism(g, g, np.arange(len(g)), check=False)


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(U, D, V)`` with ``U @ a @ V == D`` and ``D`` in Smith normal form.

    ``U`` and ``V`` are unimodular; the diagonal of ``D`` is non-negative and each
    entry divides the next.
    """
    A = [[int(v) for v in row] for row in a]
    r = len(A)
    c = len(A[0]) if r else 0
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, c) if A[i][j]]
            if not nz:
                return U, A, V
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean &= A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def quotient(g: Group, s: Subgroup) -> tuple[Group, Homomorphism]:
    """The factor group ``g / s`` as a product of cyclic groups, with its projection.

    The presentation comes from the Smith normal form of the relation matrix
    ``[diag(m_1..m_r) | generators of s]``.  Quotienting by the trivial
    subgroup returns ``g`` itself with the identity map.
    """
    if len(s) == 1:
        return g, identity(g)
    if len(s) == len(g):
        q = Group(())
        return q, Homomorphism(g, q, np.zeros(len(g), dtype=np.int64), check=False)
    r = g.rank
    rel = [[g.orders[i] if i == j else 0 for j in range(r)] + [x[i] for x in s.generators] for i in range(r)]
    U, D, _ = smith_normal_form(rel)
    keep = [i for i in range(r) if D[i][i] != 1]
    orders = tuple(D[i][i] for i in keep)
    q = Group(orders)
    rows = np.array([[u % D[i][i] for u in U[i]] for i in keep], dtype=np.int64).reshape(len(keep), r)
    table = q.index_array(g.coords @ rows.T)
    proj = Homomorphism(g, q, table, check=False)
    if not np.array_equal(proj.table == 0, s.mask):
        raise ArithmeticError("quotient projection kernel differs from the subgroup")
    return q, proj
