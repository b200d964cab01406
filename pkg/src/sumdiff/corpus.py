"""Seeded generators of test pairs.

Random probability pairs with rational weights mix dense tables, sparse
tables, shifted Haar measures and small mixtures, so that a sweep sees both
pairs with independent sum and difference and pairs without.  Constructed
signed families come from multiplying transforms that each preserve the
identity: even sign tables, coset-constant amplitudes ``exp(-+p)``,
characters, and indicators of subgroups closed under halving.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from .fourier import CharFn, inverse_char
from .groups import Group, Subgroup, annihilator, coset_labels, power_subgroup
from .measures import Measure

PairKind = str


@lru_cache(maxsize=None)
def all_subgroups(g: Group) -> tuple[Subgroup, ...]:
    """Every subgroup of ``g``, smallest first.

    Grows subgroups one generator at a time: ``S + <x>`` for every known ``S``
    and every element ``x``.
    """
    n = len(g)
    add = g.add_table
    cyclic = []
    for x in range(n):
        orbit = [0]
        while (nxt := add[orbit[-1], x]) != 0:
            orbit.append(int(nxt))
        cyclic.append(np.array(orbit))
    trivial = np.zeros(n, dtype=bool)
    trivial[0] = True
    seen = {trivial.tobytes(): trivial}
    queue = [trivial]
    while queue:
        mask = queue.pop()
        idx = np.flatnonzero(mask)
        for x in range(n):
            if mask[x]:
                continue
            grown = np.zeros(n, dtype=bool)
            grown[add[np.ix_(idx, cyclic[x])].reshape(-1)] = True
            key = grown.tobytes()
            if key not in seen:
                seen[key] = grown
                queue.append(grown)
    subs = [Subgroup.from_mask(g, m, check=False) for m in seen.values()]
    return tuple(sorted(subs, key=lambda s: (len(s), s.indices.tolist())))


def _haar_shift_nums(g: Group, k: Subgroup, x: int) -> np.ndarray:
    nums = np.zeros(len(g), dtype=np.int64)
    nums[g.add_table[k.indices, x]] = 1
    return nums


def random_probability(g: Group, rng: np.random.Generator, kind: str | None = None) -> Measure:
    n = len(g)
    kind = kind or rng.choice(["dense", "sparse", "haar", "haar_mix"], p=[0.3, 0.25, 0.3, 0.15])
    if kind == "dense":
        nums = rng.integers(0, 5, n)
        if nums.sum() == 0:
            nums[rng.integers(n)] = 1
        return Measure.exact(g, nums, int(nums.sum()))
    if kind == "sparse":
        nums = np.zeros(n, dtype=np.int64)
        idx = rng.choice(n, size=min(n, int(rng.integers(1, 4))), replace=False)
        nums[idx] = rng.integers(1, 4, idx.size)
        return Measure.exact(g, nums, int(nums.sum()))
    subs = all_subgroups(g)
    if kind == "haar":
        k = subs[rng.integers(len(subs))]
        return Measure.exact(g, _haar_shift_nums(g, k, int(rng.integers(n))), len(k))
    if kind == "haar_mix":
        k1, k2 = subs[rng.integers(len(subs))], subs[rng.integers(len(subs))]
        a, b = (int(v) for v in rng.integers(1, 4, 2))
        nums = a * len(k2) * _haar_shift_nums(g, k1, int(rng.integers(n))) + b * len(k1) * _haar_shift_nums(
            g, k2, int(rng.integers(n))
        )
        return Measure.exact(g, nums, int(nums.sum()))
    raise ValueError(f"unknown kind {kind!r}")


def random_pair(g: Group, rng: np.random.Generator) -> tuple[Measure, Measure, PairKind]:
    """One pair; roughly a third share a Haar factor, a tenth are identical."""
    r = rng.random()
    n = len(g)
    if r < 0.35:
        subs = all_subgroups(g)
        k = subs[rng.integers(len(subs))]
        x1, x2 = (int(v) for v in rng.integers(n, size=2))
        return (Measure.exact(g, _haar_shift_nums(g, k, x1), len(k)),
                Measure.exact(g, _haar_shift_nums(g, k, x2), len(k)), "haar_pair")
    if r < 0.45:
        mu = random_probability(g, rng)
        return mu, mu, "identical"
    return random_probability(g, rng), random_probability(g, rng), "random"


def probability_corpus(g: Group, count: int, seed: int = 0) -> Iterator[tuple[Measure, Measure, PairKind]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_pair(g, rng)


# ---------------------------------------------------------------------------
# constructed signed families


@lru_cache(maxsize=None)
def z4_square_sign_pairs() -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """All pairs of sign tables on ``Z(4)^2`` that are even, equal 1 on the
    doubled subgroup, and satisfy the sum/difference identity."""
    g = Group((4, 4))
    Y2 = power_subgroup(g, 2).mask
    neg = g.neg_index
    free = [y for y in range(len(g)) if not Y2[y] and y < neg[y]]
    tables = []
    for bits in itertools.product((1, -1), repeat=len(free)):
        s = np.ones(len(g), dtype=np.int64)
        for y, b in zip(free, bits):
            s[y] = s[neg[y]] = b
        tables.append(s)
    u = np.repeat(np.arange(len(g)), len(g))
    v = np.tile(np.arange(len(g)), len(g))
    add, sub = g.add_table[u, v], g.sub_table[u, v]
    pairs = []
    for s1 in tables:
        for s2 in tables:
            if np.array_equal(s1[add] * s2[sub], s1[u] * s2[u] * s1[v] * s2[neg[v]]):
                pairs.append((s1, s2))
    return tuple(pairs)


def signed_transform_pair(
    g: Group,
    signs: tuple[np.ndarray, np.ndarray] | None = None,
    p: dict[int, float] | None = None,
    shifts: tuple[int, int] = (0, 0),
    k: Subgroup | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Transforms ``f_k = s_k * exp(-+p) * (x_k, .) * 1_N`` on the dual of ``g``.

    ``signs`` are tables on ``Z(4)^2`` read through the first two coordinates
    (``g`` must then start with two factors of order 4); ``p`` maps coset
    labels of the doubled subgroup to reals (label 0 must map to 0);
    ``shifts`` are element indices; ``k`` is an odd-order subgroup whose
    annihilator ``N`` carries the transforms.
    """
    n = len(g)
    f1 = np.ones(n, dtype=complex)
    f2 = np.ones(n, dtype=complex)
    if signs is not None:
        if g.orders[:2] != (4, 4):
            raise ValueError("sign tables need a group starting with Z(4) x Z(4)")
        c = g.coords
        idx = c[:, 0] * 4 + c[:, 1]
        f1 *= signs[0][idx]
        f2 *= signs[1][idx]
    if p:
        labels, _ = coset_labels(g, power_subgroup(g, 2))
        amp = np.zeros(labels.max() + 1)
        for lab, val in p.items():
            amp[lab] = val
        if amp[0] != 0:
            raise ValueError("the amplitude on the doubled subgroup itself must be 0")
        f1 *= np.exp(-amp[labels])
        f2 *= np.exp(amp[labels])
    P = g.pairing_table
    f1 *= P[shifts[0]]
    f2 *= P[shifts[1]]
    if k is not None:
        if len(k) % 2 == 0:
            raise ValueError("the Haar factor must have odd order")
        ind = annihilator(g, k).mask
        f1 *= ind
        f2 *= ind
    return f1, f2


def signed_pair(g: Group, **kwargs) -> tuple[Measure, Measure]:
    """The real measures with transforms :func:`signed_transform_pair`."""
    out = []
    for f in signed_transform_pair(g, **kwargs):
        mu = inverse_char(g, CharFn(g, f))
        out.append(Measure(g, mu.weights.real))
    return out[0], out[1]


def random_signed_pair(g: Group, rng: np.random.Generator, identical: bool = False) -> tuple[Measure, Measure]:
    """A random member of the constructed family on ``Z(4)^2 x ...``.

    With ``identical=True`` the pair has ``mu_1 = mu_2`` (so ``p = 0`` and
    ``s_1 = s_2``).
    """
    pairs = z4_square_sign_pairs()
    if identical:
        same = [s for s in pairs if np.array_equal(s[0], s[1])]
        s = same[rng.integers(len(same))]
    else:
        s = pairs[rng.integers(len(pairs))]
    labels, reps = coset_labels(g, power_subgroup(g, 2))
    p = None if identical else {lab: float(rng.normal(scale=0.5)) for lab in range(1, len(reps))}
    n = len(g)
    x = int(rng.integers(n))
    shifts = (x, x) if identical else (x, int(rng.integers(n)))
    odd = [k for k in all_subgroups(g) if len(k) % 2 == 1]
    k = odd[rng.integers(len(odd))]
    return signed_pair(g, signs=s, p=p, shifts=shifts, k=k)


def cyclic_case1_pair(m: int, q: float, shifts: tuple[int, int] = (0, 0)) -> tuple[Measure, Measure]:
    """The finite analogue on ``Z(4m)``, ``m`` odd: transforms supported on ``mZ``,
    with ``exp(+-q)`` on its odd part."""
    if m % 2 == 0:
        raise ValueError("m must be odd")
    g = Group((4 * m,))
    y = np.arange(4 * m)
    on = y % m == 0
    odd = y % 2 == 1
    out = []
    for sign, x in ((1, shifts[0]), (-1, shifts[1])):
        f = np.where(on, np.exp(sign * q * odd), 0.0) * g.pairing_table[x]
        out.append(Measure(g, inverse_char(g, CharFn(g, f)).weights.real))
    return out[0], out[1]
