"""Independence of sum and difference: checks and the structural decomposition.

For independent ``xi_1 ~ mu_1`` and ``xi_2 ~ mu_2`` the sum and difference are
independent exactly when the characteristic functions satisfy

    f1(u + v) f2(u - v) = f1(u) f2(u) f1(v) f2(-v)   for all u, v.

:func:`check_eq3` tests that identity (exactly for rational inputs) and
:func:`oracle_equivalence` confirms it against the brute-force joint law.

:func:`decompose` turns a pair satisfying the identity into the factorisation

    p(mu_k) = gamma * pi_k * m_V * E_{x_k}

on ``X/G``: ``G`` annihilates the union ``H`` of the ``Y^(2)``-cosets that meet
``N = {f1 != 0} & {f2 != 0}``, ``V = A(X/G, N)``, ``pi_k = delta_k * eps_k``
is a real signed measure on ``(X/G)_(4)`` and, on a finite group, the Gaussian
factor ``gamma`` is the unit mass at zero.  Each stage verifies the
intermediate identities it relies on and raises :class:`DecompositionError`
(with a stage label and a witness) when one fails.

Inputs to :func:`decompose` may be signed measures of total mass one, not only
probability measures; the sign-table examples on ``Z(4)^2`` need this.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .fourier import CharFn, char_fn, cyclotomic_mul, inverse_char, support_set
from .groups import (
    Element,
    Group,
    Homomorphism,
    Subgroup,
    annihilator,
    coset_labels,
    is_corwin,
    power_subgroup,
    quotient,
    torsion_subgroup,
)
from .measures import (
    DEFAULT_TOL,
    Measure,
    convolve,
    convolve_all,
    haar,
    is_independent,
    max_abs,
    point_mass,
    product_dtype,
    pushforward,
    shift,
    sum_diff_joint,
)

RESIDUAL_TOL = 1e-8


class DecompositionError(RuntimeError):
    """A verification step failed; ``stage`` names the pipeline stage."""

    def __init__(self, stage: str, message: str, witness=None):
        super().__init__(f"[{stage}] {message}" + (f" (witness: {witness})" if witness is not None else ""))
        self.stage = stage
        self.witness = witness


class NotKacBernsteinError(DecompositionError):
    """The pair does not satisfy the sum/difference identity."""


class InconsistencyError(RuntimeError):
    """The transform check and the joint-law oracle disagree (a bug, not a data condition)."""


class TheoremViolation(RuntimeError):
    """A consequence guaranteed by the theory failed to hold (a bug)."""


# ---------------------------------------------------------------------------
# the functional equation


@dataclass
class Eq3Result:
    holds: bool
    witness: tuple[Element, Element] | None
    max_residual: float
    exact: bool

    def __bool__(self) -> bool:
        return self.holds


def _pair_indices(g: Group, rows: np.ndarray):
    n = len(g)
    u = np.repeat(rows, n)
    v = np.tile(np.arange(n), rows.size)
    return u, v, g.add_table[u, v], g.sub_table[u, v], g.neg_index[v]


def check_eq3(f1: CharFn, f2: CharFn, tol: float = DEFAULT_TOL) -> Eq3Result:
    """Test ``f1(u+v) f2(u-v) == f1(u) f2(u) f1(v) f2(-v)`` for every ``u, v``.

    When both functions carry exact cyclotomic values the comparison is exact
    and ``tol`` is ignored; ``max_residual`` is always the float residual.
    """
    g = f1.group
    if f2.group != g:
        raise ValueError("transforms live on different dual groups")
    n = len(g)
    exact = f1.exact is not None and f2.exact is not None
    a, b = f1.values, f2.values
    chunk = max(1, 2_000_000 // (n * (f1.exact.coeffs.shape[1] if exact else 1)))
    worst = 0.0
    witness = None
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        u, v, s, d, nv = _pair_indices(g, rows)
        res = np.abs(a[s] * b[d] - a[u] * b[u] * a[v] * b[nv])
        worst = max(worst, float(res.max()))
        if exact:
            A, B, M = f1.exact.coeffs, f2.exact.coeffs, f1.exact.conductor
            lhs = cyclotomic_mul(A[s], B[d], M)
            rhs = cyclotomic_mul(cyclotomic_mul(A[u], B[u], M), cyclotomic_mul(A[v], B[nv], M), M)
            scale = f1.exact.denominator * f2.exact.denominator
            dt = product_dtype(max_abs(lhs), scale)
            bad = np.any(lhs.astype(dt) * scale != rhs.astype(dt), axis=1)
        else:
            bad = res > tol
        if witness is None and bad.any():
            i = int(np.argmax(bad))
            witness = (g.element(int(u[i])), g.element(int(v[i])))
    return Eq3Result(witness is None, witness, worst, exact)


def oracle_equivalence(mu1: Measure, mu2: Measure, tol: float = DEFAULT_TOL, allow_signed: bool = False) -> Eq3Result:
    """Run the transform check and the joint-law oracle; they must agree.

    Raises :class:`InconsistencyError` when they do not.  The joint law of
    ``(x + y, x - y)`` under ``mu1 x mu2`` factors exactly when the identity
    holds for any measures of total mass one, so ``allow_signed=True`` accepts
    real signed inputs too.
    """
    for mu in (mu1, mu2):
        if allow_signed:
            if not mu.is_real(tol) or abs(complex(mu.total_mass) - 1) > tol:
                raise ValueError("the independence oracle needs real measures of total mass 1")
        elif not mu.is_probability(tol):
            raise ValueError("the independence oracle needs probability measures")
    eq = check_eq3(char_fn(mu1), char_fn(mu2), tol)
    indep = is_independent(sum_diff_joint(mu1, mu2), tol)
    if eq.holds != indep:
        raise InconsistencyError(
            f"functional equation says {eq.holds}, joint law says {indep} (witness {eq.witness})"
        )
    return eq


# ---------------------------------------------------------------------------
# structure: N, H, G, V


@dataclass
class KbStructure:
    group: Group
    N1: np.ndarray
    N2: np.ndarray
    N: Subgroup
    N_doubled: Subgroup
    H: Subgroup
    G: Subgroup
    quotient: Group
    projection: Homomorphism
    dual_embedding: Homomorphism
    V: Subgroup
    coset_reps: list[Element]
    coset_label: np.ndarray
    meets_N: list[bool]
    n_reps: list[Element | None]
    zero_pattern: list[str | None]

    def quotient_dual_mask(self, mask: np.ndarray) -> np.ndarray:
        """Pull a mask on ``Y`` back to the dual of ``X/G`` (which is ``H``)."""
        return mask[self.dual_embedding.table]


def compute_structure(f1: CharFn, f2: CharFn, tol: float = DEFAULT_TOL) -> KbStructure:
    """Support subgroups and the coset bookkeeping for a pair satisfying the identity."""
    stage = "structure"
    g = f1.group
    N1, N2 = support_set(f1, tol), support_set(f2, tol)
    mask = N1 & N2
    try:
        N = Subgroup.from_mask(g, mask)
    except ValueError as exc:
        raise DecompositionError(stage, f"N is not a subgroup: {exc}") from None
    dbl = g.mul_index(2)
    half = mask[dbl] & ~mask
    if half.any():
        raise DecompositionError(stage, "2y in N but y not in N", g.element(int(np.argmax(half))))
    nd_mask = np.zeros(len(g), dtype=bool)
    nd_mask[dbl[N.indices]] = True
    N_doubled = Subgroup.from_mask(g, nd_mask, check=False)
    Y2 = power_subgroup(g, 2)
    if not np.array_equal(mask & Y2.mask, nd_mask):
        raise DecompositionError(stage, "N intersected with Y^(2) differs from N^(2)")

    labels, reps = coset_labels(g, Y2)
    meets = np.bincount(labels[N.indices], minlength=len(reps)) > 0
    H = Subgroup.from_mask(g, meets[labels])
    G = annihilator(g, H)
    if not G.issubset(torsion_subgroup(g, 2)):
        raise DecompositionError(stage, "G is not inside X_(2)")

    zero_pattern: list[str | None] = []
    n_reps: list[Element | None] = []
    for c in range(len(reps)):
        members = labels == c
        if meets[c]:
            if not np.array_equal(N1 & members, N2 & members):
                raise DecompositionError(stage, "supports of f1, f2 differ on a coset meeting N", reps[c])
            n_reps.append(g.element(int(np.flatnonzero(mask & members)[0])))
            zero_pattern.append(None)
            continue
        n_reps.append(None)
        z1, z2 = not N1[members].any(), not N2[members].any()
        if not (z1 or z2):
            raise DecompositionError(stage, "neither transform vanishes on a coset disjoint from H", reps[c])
        zero_pattern.append("both" if z1 and z2 else ("mu1" if z1 else "mu2"))

    Q, proj = quotient(g, G)
    iota = proj.dual()
    if not np.array_equal(np.sort(iota.table), H.indices):
        raise DecompositionError(stage, "dual of X/G does not embed onto H")
    NQ = Subgroup.from_mask(Q, mask[iota.table], check=False)
    V = annihilator(Q, NQ)
    if not is_corwin(V):
        raise DecompositionError(stage, "V = A(X/G, N) is not a Corwin group")
    return KbStructure(
        group=g, N1=N1, N2=N2, N=N, N_doubled=N_doubled, H=H, G=G,
        quotient=Q, projection=proj, dual_embedding=iota, V=V,
        coset_reps=reps, coset_label=labels, meets_N=[bool(m) for m in meets],
        n_reps=n_reps, zero_pattern=zero_pattern,
    )


def check_modulus_relation(f1: CharFn, f2: CharFn, s: KbStructure, tol: float = DEFAULT_TOL) -> bool:
    """``|f1(a)| |f2(b)| == |f1(b)| |f2(a)|`` for ``a, b`` in a common ``Y^(2)``-coset."""
    m1, m2 = np.abs(f1.values), np.abs(f2.values)
    for c in range(len(s.coset_reps)):
        idx = np.flatnonzero(s.coset_label == c)
        lhs = np.outer(m1[idx], m2[idx])
        if np.abs(lhs - lhs.T).max() > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# amplitude


@dataclass
class AmplitudeResult:
    reps: list[Element]
    p1: list[float]
    p2: list[float]
    epsilon1: Measure
    epsilon2: Measure
    max_imag: float = 0.0


def _real_measure(mu: Measure, stage: str, tol: float, what: str) -> tuple[Measure, float]:
    imag = float(np.abs(mu.weights.imag).max())
    if imag > tol:
        raise DecompositionError(stage, f"{what} is not real (max imaginary part {imag:.3g})")
    return Measure(mu.group, mu.weights.real), imag


def _support_inside(mu: Measure, sub: Subgroup, tol: float) -> bool:
    return not (mu.support(tol) & ~sub.mask).any()


def extract_amplitude(f1: CharFn, f2: CharFn, s: KbStructure, tol: float = DEFAULT_TOL) -> AmplitudeResult:
    """Coset constants of ``-ln|f_k|`` on ``N`` and the measures ``eps_k``.

    On a finite group the quadratic part vanishes, so ``-ln|f_k|`` must be
    constant on every coset ``y_j + N^(2)``; the constants satisfy
    ``p_{1,j} = -p_{2,j}``.  ``eps_k`` has transform ``|f_k|`` spread
    constantly over each ``Y^(2)``-coset of ``H``.
    """
    stage = "amplitude"
    g = s.group
    a1, a2 = np.abs(f1.values), np.abs(f2.values)
    level1 = np.zeros(len(s.coset_reps))
    level2 = np.zeros(len(s.coset_reps))
    reps, p1, p2 = [], [], []
    for c, rep in enumerate(s.n_reps):
        if rep is None:
            continue
        idx = np.flatnonzero((s.coset_label == c) & s.N.mask)
        for a, level in ((a1, level1), (a2, level2)):
            vals = a[idx]
            if vals.max() - vals.min() > tol * max(1.0, vals.max()):
                bad = g.element(int(idx[np.argmax(np.abs(vals - vals[0]))]))
                raise DecompositionError(stage, "|f_k| is not constant on a coset of N^(2)", bad)
            level[c] = vals[0]
        prod = level1[c] * level2[c]
        if abs(prod - 1) > tol * max(1.0, prod):
            raise DecompositionError(stage, "p_{1,j} != -p_{2,j}", rep)
        reps.append(rep)
        p1.append(float(-np.log(level1[c])))
        p2.append(float(-np.log(level2[c])))
    if abs(p1[0]) > tol or abs(p2[0]) > tol:
        raise DecompositionError(stage, "p_0 != 0; transforms are not normalised")

    Q = s.quotient
    lab = s.coset_label[s.dual_embedding.table]
    eps, imag = [], 0.0
    for level, name in ((level1, "eps_1"), (level2, "eps_2")):
        mu, im = _real_measure(inverse_char(Q, CharFn(Q, level[lab])), stage, tol, name)
        eps.append(mu)
        imag = max(imag, im)
    y2q = Subgroup.from_mask(Q, s.quotient_dual_mask(power_subgroup(g, 2).mask), check=False)
    carrier = annihilator(Q, y2q)
    for e in eps:
        if not _support_inside(e, carrier, tol):
            raise DecompositionError(stage, "eps_k is not carried by A(X/G, Y^(2))")
    return AmplitudeResult(reps, p1, p2, eps[0], eps[1], imag)


# ---------------------------------------------------------------------------
# phase


@dataclass
class PhaseResult:
    x1: Element
    x2: Element
    l_prime1: np.ndarray  # +-1 on N, 0 elsewhere
    l_prime2: np.ndarray
    extended1: np.ndarray  # +-1 on H, 0 elsewhere
    extended2: np.ndarray
    delta1: Measure
    delta2: Measure
    extension: str
    max_imag: float = 0.0


def _lifts(s: KbStructure) -> np.ndarray:
    """Smallest preimage in X of every element of X/G."""
    table = s.projection.table
    lift = np.full(len(s.quotient), -1, dtype=np.int64)
    for x in range(table.size - 1, -1, -1):
        lift[table[x]] = x
    return lift


def _match_character(l: np.ndarray, s: KbStructure, lift: np.ndarray, tol: float) -> int:
    """Index in X/G of a point whose character agrees with ``l`` on ``N^(2)``.

    Among all such points, prefer those agreeing with ``l`` on as much of ``N``
    as possible, then the lexicographically smallest.
    """
    g = s.group
    nidx = s.N.indices
    P = g.pairing_table[np.ix_(lift, nidx)]
    match = np.abs(P - l[None, :]) <= tol
    on_half = match[:, s.N_doubled.mask[nidx]].all(axis=1)
    if not on_half.any():
        raise DecompositionError("phase", "l_k restricted to N^(2) matches no character of X/G")
    score = np.where(on_half, match.sum(axis=1), -1)
    return int(np.argmax(score))


def extract_phase(
    f1: CharFn, f2: CharFn, s: KbStructure, tol: float = DEFAULT_TOL, extension: str = "minimal"
) -> PhaseResult:
    """Phases ``l_k = f_k/|f_k|`` on ``N``, shifts ``x_k`` and the signed measures ``delta_k``.

    ``extension`` chooses how ``l'_k`` is carried from ``N`` to ``H``:

    ``"minimal"``
        ``l'_k`` on ``N + Y^(4)`` (it is ``N^(4)``-invariant), 1 on the other
        ``Y^(4)``-cosets of ``H``;
    ``"coset"``
        constant on ``Y^(2)``-cosets; requires ``l'_k`` to be
        ``N^(2)``-invariant and puts ``delta_k`` on ``(X/G)_(2)``.
    """
    stage = "phase"
    if extension not in ("minimal", "coset"):
        raise ValueError(f"unknown extension rule {extension!r}")
    g = s.group
    n = len(g)
    nidx = s.N.indices
    dbl = g.mul_index(2)
    add = g.add_table
    lift = _lifts(s)
    Y2 = power_subgroup(g, 2)
    Y4 = power_subgroup(g, 4)
    N4 = g.mul_index(4)[nidx]

    shifts, primes = [], []
    for f in (f1, f2):
        l = np.zeros(n, dtype=complex)
        l[nidx] = f.values[nidx] / np.abs(f.values[nidx])
        if np.abs(l[dbl[nidx]] - l[nidx] ** 2).max() > tol:
            raise DecompositionError(stage, "l_k(2u) != l_k(u)^2 on N")
        sq = l ** 2
        lhs = sq[add[np.ix_(nidx, nidx)]]
        if np.abs(lhs - np.outer(sq[nidx], sq[nidx])).max() > tol:
            raise DecompositionError(stage, "l_k^2 is not a character of N")
        q = _match_character(l[nidx], s, lift, tol)
        shifts.append(q)
        lp = np.conj(g.pairing_table[lift[q]]) * l
        signs = np.sign(lp.real[nidx])
        if np.abs(lp[nidx] - signs).max() > tol:
            raise DecompositionError(stage, "l'_k takes values other than +-1 on N")
        lp_int = np.zeros(n, dtype=np.int64)
        lp_int[nidx] = signs.astype(np.int64)
        if not np.array_equal(lp_int[g.neg_index[nidx]], lp_int[nidx]):
            raise DecompositionError(stage, "l'_k(-y) != l'_k(y) on N")
        if not (lp_int[dbl[nidx]] == 1).all():
            raise DecompositionError(stage, "l'_k(2y) != 1 on N")
        inv4 = lp_int[add[np.ix_(nidx, N4)]] != lp_int[nidx][:, None]
        if inv4.any():
            raise DecompositionError(stage, "l'_k is not N^(4)-invariant", g.element(int(nidx[np.argwhere(inv4)[0, 0]])))
        primes.append(lp_int)

    # coupling: l'_1 l'_2 is constant on every coset y_j + N^(2)
    prod = primes[0] * primes[1]
    for c, rep in enumerate(s.n_reps):
        if rep is not None:
            vals = prod[(s.coset_label == c) & s.N.mask]
            if not (vals == vals[0]).all():
                raise DecompositionError(stage, "l'_1 = +-l'_2 fails on a coset of N^(2)", rep)

    if extension == "minimal":
        lab, _ = coset_labels(g, Y4)
    else:
        lab = s.coset_label
    extended = []
    for k, lp in enumerate(primes):
        value = np.ones(lab.max() + 1, dtype=np.int64)
        seen = np.zeros(lab.max() + 1, dtype=bool)
        for y in nidx:
            c = lab[y]
            if seen[c] and value[c] != lp[y]:
                rule = "N^(4)" if extension == "minimal" else "N^(2)"
                raise DecompositionError(stage, f"l'_{k + 1} is not {rule}-invariant; cannot extend", g.element(int(y)))
            value[c] = lp[y]
            seen[c] = True
        ext = np.where(s.H.mask, value[lab], 0)
        extended.append(ext)

    Q = s.quotient
    iota = s.dual_embedding.table
    carrier_dual = Y4 if extension == "minimal" else Y2
    F = annihilator(Q, Subgroup.from_mask(Q, carrier_dual.mask[iota], check=False))
    if not F.issubset(torsion_subgroup(Q, 4)):
        raise DecompositionError(stage, "A(X/G, Y^(4)) is not inside (X/G)_(4)")
    deltas, imag = [], 0.0
    for k, ext in enumerate(extended):
        d, im = _real_measure(inverse_char(Q, CharFn(Q, ext[iota].astype(complex))), stage, tol, f"delta_{k + 1}")
        if not _support_inside(d, F, tol):
            raise DecompositionError(stage, f"delta_{k + 1} is not supported in F")
        deltas.append(d)
        imag = max(imag, im)
    return PhaseResult(
        x1=Q.element(shifts[0]), x2=Q.element(shifts[1]),
        l_prime1=primes[0], l_prime2=primes[1],
        extended1=extended[0], extended2=extended[1],
        delta1=deltas[0], delta2=deltas[1], extension=extension, max_imag=imag,
    )


# ---------------------------------------------------------------------------
# the full decomposition


@dataclass
class DecompositionReport:
    structure: KbStructure
    p_table: list[dict]
    x_shift: tuple[Element, Element]
    delta: tuple[Measure, Measure]
    epsilon: tuple[Measure, Measure]
    pi: tuple[Measure, Measure]
    gamma_phi: np.ndarray
    residual: float
    residuals: tuple[float, float]
    tolerance: float = RESIDUAL_TOL
    extension: str = "minimal"
    imag_discarded: float = 0.0
    eq3: Eq3Result | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance and all(self.invariants().values())

    def invariants(self, tol: float = DEFAULT_TOL) -> dict[str, bool]:
        s = self.structure
        Q = s.quotient
        Q4 = torsion_subgroup(Q, 4)
        return {
            "G_in_X2": s.G.issubset(torsion_subgroup(s.group, 2)),
            "V_corwin": is_corwin(s.V),
            "pi_in_quotient_4_torsion": all(_support_inside(p, Q4, tol) for p in self.pi),
            "pi_real": all(p.is_real(tol) for p in self.pi) and self.imag_discarded <= 1e-12,
            "epsilon_product_identity": convolve(*self.epsilon).distance(point_mass(Q, Q.zero)) <= tol,
            "p1_equals_minus_p2": all(abs(r["p1"] + r["p2"]) <= tol for r in self.p_table),
            "p0_zero": abs(self.p_table[0]["p1"]) <= tol,
            "phi_zero": bool(np.all(self.gamma_phi == 0)),
            "residual_within_tolerance": self.residual <= self.tolerance,
        }

    def to_dict(self) -> dict:
        s = self.structure
        g, Q = s.group, s.quotient

        def members(sub: Subgroup):
            return [list(e) for e in sub.elements()]

        def weights(mu: Measure):
            return [float(w) for w in mu.weights.real]

        return {
            "group": {"cyclic_orders": list(g.orders)},
            "quotient": {"cyclic_orders": list(Q.orders), "projection_images": [list(e) for e in s.projection.images]},
            "structure": {
                "N": members(s.N),
                "N1": [list(g.element(int(i))) for i in np.flatnonzero(s.N1)],
                "N2": [list(g.element(int(i))) for i in np.flatnonzero(s.N2)],
                "H": members(s.H),
                "G": members(s.G),
                "V": members(s.V),
                "coset_reps": [list(r) for r in s.coset_reps],
                "zero_pattern": s.zero_pattern,
            },
            "p_table": [{"rep": list(r["rep"]), "p1": r["p1"], "p2": r["p2"]} for r in self.p_table],
            "x_shift": [list(x) for x in self.x_shift],
            "delta": [weights(m) for m in self.delta],
            "epsilon": [weights(m) for m in self.epsilon],
            "pi": [weights(m) for m in self.pi],
            "gamma_phi": [float(v) for v in self.gamma_phi],
            "residual": self.residual,
            "residuals": list(self.residuals),
            "extension": self.extension,
            "imag_discarded": self.imag_discarded,
            "invariants": self.invariants(),
        }


def _check_inputs(mu1: Measure, mu2: Measure, tol: float) -> None:
    if mu1.group != mu2.group:
        raise ValueError("measures live on different groups")
    for k, mu in enumerate((mu1, mu2), 1):
        if not mu.is_real(tol):
            raise ValueError(f"mu_{k} is not a real (signed) measure")
        if abs(complex(mu.total_mass) - 1) > tol:
            raise ValueError(f"mu_{k} does not have total mass 1")


def decompose(
    mu1: Measure,
    mu2: Measure,
    tol: float = DEFAULT_TOL,
    residual_tol: float = RESIDUAL_TOL,
    extension: str = "minimal",
) -> DecompositionReport:
    """Factor ``p(mu_k) = gamma * pi_k * m_V * E_{x_k}`` and verify it.

    Raises :class:`NotKacBernsteinError` when the pair fails the identity and
    :class:`DecompositionError` when any intermediate check fails.  The report
    carries the reconstruction residual; see :attr:`DecompositionReport.ok`.
    """
    _check_inputs(mu1, mu2, tol)
    f1, f2 = char_fn(mu1), char_fn(mu2)
    eq = check_eq3(f1, f2, tol)
    if not eq:
        raise NotKacBernsteinError("eq3", "sum and difference are not independent", eq.witness)
    oracle_equivalence(mu1, mu2, tol, allow_signed=True)

    s = compute_structure(f1, f2, tol)
    if not check_modulus_relation(f1, f2, s, tol):
        raise DecompositionError("modulus", "|f1(a)||f2(b)| != |f1(b)||f2(a)| within a coset")
    amp = extract_amplitude(f1, f2, s, tol)
    ph = extract_phase(f1, f2, s, tol, extension)

    Q = s.quotient
    gamma = point_mass(Q, Q.zero)
    m_V = haar(Q, s.V)
    pis = (convolve(ph.delta1, amp.epsilon1), convolve(ph.delta2, amp.epsilon2))
    residuals = []
    for mu, pi, x in ((mu1, pis[0], ph.x1), (mu2, pis[1], ph.x2)):
        model = convolve_all(gamma, pi, shift(m_V, x))
        residuals.append(pushforward(s.projection, mu).distance(model))
    p_table = [{"rep": r, "p1": a, "p2": b} for r, a, b in zip(amp.reps, amp.p1, amp.p2)]
    return DecompositionReport(
        structure=s,
        p_table=p_table,
        x_shift=(ph.x1, ph.x2),
        delta=(ph.delta1, ph.delta2),
        epsilon=(amp.epsilon1, amp.epsilon2),
        pi=pis,
        gamma_phi=np.zeros(len(s.N)),
        residual=max(residuals),
        residuals=(residuals[0], residuals[1]),
        tolerance=residual_tol,
        extension=extension,
        imag_discarded=max(amp.max_imag, ph.max_imag),
        eq3=eq,
    )


# ---------------------------------------------------------------------------
# special cases


@dataclass
class TheoremBWitness:
    K: Subgroup
    x1: Element
    x2: Element
    shift: Element


def theorem_b_check(mu1: Measure, mu2: Measure, tol: float = DEFAULT_TOL, allow_even: bool = False) -> TheoremBWitness:
    """On a group without elements of order 2, a pair with independent sum and
    difference is ``mu_k = m_K * E_{x_k}`` with ``mu_1 = mu_2 * E_x``.

    Returns the witnesses.  ``allow_even=True`` runs the same check on groups of
    even order, where it also holds for probability measures.
    """
    g = mu1.group
    if len(g) % 2 == 0 and not allow_even:
        raise ValueError(f"{g} has elements of order 2")
    for mu in (mu1, mu2):
        if not mu.is_probability(tol):
            raise ValueError("expected probability measures")
    f1, f2 = char_fn(mu1), char_fn(mu2)
    eq = check_eq3(f1, f2, tol)
    if not eq:
        raise ValueError(f"not a pair with independent sum and difference (witness {eq.witness})")
    mask = support_set(f1, tol) & support_set(f2, tol)
    K = annihilator(g, Subgroup.from_mask(g, mask, check=False))
    m_K = haar(g, K)
    xs = []
    for k, mu in enumerate((mu1, mu2), 1):
        x = g.element(int(np.argmax(mu.support(tol))))
        if not mu.allclose(shift(m_K, x), tol):
            raise TheoremViolation(f"mu_{k} is not m_K * E_x for K = A(X, N)")
        xs.append(x)
    d = g.add(xs[0], g.neg(xs[1]))
    if not mu1.allclose(shift(mu2, d), tol):
        raise TheoremViolation("mu_1 is not a shift of mu_2")
    return TheoremBWitness(K, xs[0], xs[1], d)


def remark3_check(mu: Measure, tol: float = DEFAULT_TOL) -> bool:
    """For an identically distributed pair: ``pi`` lives on the 2-torsion and ``pi * pi = E_0``."""
    rep = decompose(mu, mu, tol, extension="coset")
    Q = rep.structure.quotient
    pi = rep.pi[0]
    on_2 = _support_inside(pi, torsion_subgroup(Q, 2), tol)
    square = convolve(pi, pi).distance(point_mass(Q, Q.zero))
    return bool(on_2 and square <= tol and rep.residual <= rep.tolerance)


# ---------------------------------------------------------------------------
# finite-group facts about the quadratic equation and the difference equation


def gaussian_phi_enumerate(dual: Group, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, ...]:
    """All nonnegative solutions of ``phi(u+v) + phi(u-v) = 2[phi(u) + phi(v)]``.

    The equation is linear in the value table; on a finite group its solution
    space is ``{0}``, which is what this returns.  A nontrivial solution space
    would be a cone rather than a finite set and raises.
    """
    n = len(dual)
    u = np.repeat(np.arange(n), n)
    v = np.tile(np.arange(n), n)
    rows = np.arange(n * n)
    A = np.zeros((n * n, n))
    np.add.at(A, (rows, dual.add_table[u, v]), 1.0)
    np.add.at(A, (rows, dual.sub_table[u, v]), 1.0)
    np.add.at(A, (rows, u), -2.0)
    np.add.at(A, (rows, v), -2.0)
    basis = scipy.linalg.null_space(A, rcond=tol)
    if basis.shape[1]:
        raise ValueError(f"solution space has dimension {basis.shape[1]}")
    return (np.zeros(n),)


@dataclass
class Lemma4Result:
    holds: bool
    phi: np.ndarray | None = None
    r_table: dict[Element, float] | None = None
    failed: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def lemma4_check(psi, g: Group, domain: Subgroup | None = None, tol: float = DEFAULT_TOL) -> Lemma4Result:
    """Split ``psi`` with ``Delta_h^2 Delta_{2k} psi = 0`` into ``phi + r_alpha``.

    ``psi`` is a real table over the elements of ``g``; only its values on
    ``domain`` (default: all of ``g``) are used.  On a finite group ``phi`` is
    zero and ``psi`` is constant on each coset of ``domain^(2)``, with value
    ``r_alpha``.  Violated preconditions come back with a witness.
    """
    psi = np.asarray(psi, dtype=float)
    D = domain if domain is not None else Subgroup.whole(g)
    d = D.indices
    add = g.add_table
    if abs(psi[0]) > tol:
        return Lemma4Result(False, failed="psi(0) = 0", witness=(g.zero,))
    asym = np.abs(psi[g.neg_index[d]] - psi[d]) > tol
    if asym.any():
        return Lemma4Result(False, failed="psi(-y) = psi(y)", witness=(g.element(int(d[np.argmax(asym)])),))
    two = g.mul_index(2)
    for h in d:
        h1, h2 = h, two[h]
        k2 = two[d]
        y = d
        # rows: k, columns: y
        yk = add[np.ix_(k2, y)]
        val = (psi[add[h2][yk]] - psi[add[h2][y]][None, :]
               - 2 * psi[add[h1][yk]] + 2 * psi[add[h1][y]][None, :]
               + psi[yk] - psi[y][None, :])
        bad = np.abs(val) > tol
        if bad.any():
            ki, yi = np.argwhere(bad)[0]
            return Lemma4Result(
                False, failed="Delta_h^2 Delta_2k psi = 0",
                witness=(g.element(int(h)), g.element(int(d[ki])), g.element(int(d[yi]))),
            )
    dd = np.zeros(len(g), dtype=bool)
    dd[two[d]] = True
    labels, _ = coset_labels(g, Subgroup.from_mask(g, dd, check=False))
    r_table: dict[Element, float] = {}
    for c in np.unique(labels[d]):
        members = d[labels[d] == c]
        vals = psi[members]
        if vals.max() - vals.min() > tol:
            raise TheoremViolation("psi is not constant on a coset of the doubled domain")
        r_table[g.element(int(members[0]))] = float(vals[0])
    return Lemma4Result(True, phi=np.zeros(len(g)), r_table=r_table)
