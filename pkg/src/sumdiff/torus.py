"""Sum/difference independence on the circle and the 2-torus, numerically.

The transforms here live on ``Z`` or ``Z^2`` and are truncated to a window
``|n| <= nmax``; densities are synthesized on a sampling grid.  Every positivity
verdict is reported together with an analytic bound on the discarded tail.

Three constructions are covered:

* the one-parameter family on ``T`` with ``V = Z(m)``: Gaussian factor
  ``exp(-sigma n^2)``, phases ``exp(i n t_k)`` and an extra ``exp(+-q)`` on
  ``mZ \\ 2mZ``, zero off ``mZ``;
* a pair on ``T^2`` whose phase tables are sign patterns on ``Z^2 / 4Z^2``, so
  that the signed factors live on the 4-torsion but not on the 2-torsion;
* the degenerate case where ``mu_1`` is Haar measure and ``mu_2`` only has to
  kill every nonzero even frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fourier import CharFn, char_fn, inverse_char
from .groups import Group, torsion_subgroup
from .measures import Measure

EQ3_TOL = 1e-12


class GateRefused(RuntimeError):
    """The summability gate failed, so positivity of the densities is not guaranteed."""

    def __init__(self, gate_sum: float, tail_bound: float):
        super().__init__(f"gate sum {gate_sum:.17g} + tail bound {tail_bound:.3g} is not below 1")
        self.gate_sum = gate_sum
        self.tail_bound = tail_bound


@dataclass
class TorusReport:
    gate_sum: float | None
    tail_bound: float
    eq3_max_residual: float
    min_density: float
    pi_tables: list | None
    verdicts: dict[str, bool]
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "gate_sum": self.gate_sum,
            "tail_bound": self.tail_bound,
            "eq3_max_residual": self.eq3_max_residual,
            "min_density": self.min_density,
            "pi_tables": self.pi_tables,
            "verdicts": dict(self.verdicts),
            "details": self.details,
        }


def gaussian_tail_1d(sigma: float, nmax: int) -> float:
    """Upper bound for ``sum_{n > nmax} exp(-sigma n^2)`` (geometric comparison)."""
    if sigma <= 0:
        return math.inf
    a = nmax + 1
    return math.exp(-sigma * a * a) / (1 - math.exp(-sigma * a))


def gaussian_sum_1d_bound(sigma: float) -> float:
    """Upper bound for ``sum_{n in Z} exp(-sigma n^2)``."""
    r = math.exp(-sigma)
    return 1 + 2 * r / (1 - r)


def _eq3_on_window(f1: np.ndarray, f2: np.ndarray, nmax: int, half: int):
    """Max residual of the identity over ``|u|, |v| <= half`` for tables indexed by ``n + nmax``."""
    r = np.arange(-half, half + 1)
    u, v = np.meshgrid(r, r, indexing="ij")
    lhs = f1[u + v + nmax] * f2[u - v + nmax]
    rhs = f1[u + nmax] * f2[u + nmax] * f1[v + nmax] * f2[-v + nmax]
    res = np.abs(lhs - rhs)
    i = np.unravel_index(np.argmax(res), res.shape)
    return float(res[i]), (int(u[i]), int(v[i]))


# ---------------------------------------------------------------------------
# the family on T with V = Z(m)


@dataclass(frozen=True)
class Case1Params:
    sigma: float = 0.5
    m: int = 3
    q: float = 0.7
    t1: float = 0.0
    t2: float = 0.0
    nmax: int = 64

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError("m must be a positive odd integer")
        if self.nmax < 2 * self.m:
            raise ValueError("nmax must be at least 2m")


def case1_branches(p: Case1Params) -> np.ndarray:
    """0 on ``2mZ``, 1 on ``mZ \\ 2mZ``, 2 off ``mZ``, for ``n = -nmax..nmax``."""
    n = np.arange(-p.nmax, p.nmax + 1)
    return np.where(n % (2 * p.m) == 0, 0, np.where(n % p.m == 0, 1, 2))


def case1_log_tables(p: Case1Params):
    """``(log|f_k|, arg f_k)`` for both transforms; ``-inf`` marks zeros."""
    n = np.arange(-p.nmax, p.nmax + 1).astype(float)
    b = case1_branches(p)
    out = []
    for t, sign in ((p.t1, 1.0), (p.t2, -1.0)):
        mag = -p.sigma * n ** 2 + np.where(b == 1, sign * p.q, 0.0)
        mag = np.where(b == 2, -np.inf, mag)
        out.append((mag, n * t))
    return out


def case1_charfns(p: Case1Params) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(n, f1, f2)`` on the window ``-nmax..nmax``."""
    n = np.arange(-p.nmax, p.nmax + 1)
    tabs = [np.where(np.isinf(mag), 0, np.exp(mag + 1j * ph)) for mag, ph in case1_log_tables(p)]
    return n, tabs[0], tabs[1]


def _case1_log_eq3(p: Case1Params, half: int) -> float:
    """The identity compared in log form, so that underflow cannot hide a mismatch.

    Returns the largest discrepancy in log-modulus (relative once it exceeds
    1) or (wrapped) phase; ``inf``
    if the two sides disagree about vanishing.
    """
    (m1, a1), (m2, a2) = case1_log_tables(p)
    N = p.nmax
    r = np.arange(-half, half + 1)
    u, v = np.meshgrid(r, r, indexing="ij")
    lm = m1[u + v + N] + m2[u - v + N]
    rm = m1[u + N] + m2[u + N] + m1[v + N] + m2[-v + N]
    zl, zr = np.isinf(lm), np.isinf(rm)
    if (zl != zr).any():
        return math.inf
    live = ~zl
    if not live.any():
        return 0.0
    la = a1[u + v + N] + a2[u - v + N]
    ra = a1[u + N] + a2[u + N] + a1[v + N] + a2[-v + N]
    dphase = np.angle(np.exp(1j * (la[live] - ra[live])))
    # log-moduli grow like sigma * window^2; measure their mismatch relative to that
    dmag = np.abs(lm[live] - rm[live]) / np.maximum(1.0, np.abs(rm[live]))
    return float(max(dmag.max(), np.abs(dphase).max()))


def case1_positivity(p: Case1Params, grid: int = 1024):
    """Synthesize both densities on a grid of ``T``.

    Returns ``(ok, min_density, argmin_point, tail_bound)``; ``ok`` requires the
    grid minimum to exceed the truncation bound.  With ``sigma = 0`` the
    measures are atomic (on the ``2m``-th roots of unity) and their atoms are
    checked directly instead.
    """
    if p.sigma == 0:
        # mu_k = eps_k * m_V * E_{t_k}: atoms of eps_k at 0 and pi, each spread over V
        w1 = ((1 + math.exp(p.q)) / 2, (1 - math.exp(p.q)) / 2)
        w2 = ((1 + math.exp(-p.q)) / 2, (1 - math.exp(-p.q)) / 2)
        lo = min(min(w1), min(w2)) / p.m
        return lo >= 0, lo, None, 0.0
    n, f1, f2 = case1_charfns(p)
    t = 2 * np.pi * np.arange(grid) / grid
    E = np.exp(-1j * np.outer(t, n))
    tail = 2 * math.exp(abs(p.q)) * gaussian_tail_1d(p.sigma, p.nmax)
    lo, at = math.inf, None
    for f in (f1, f2):
        rho = (E @ f).real
        j = int(np.argmin(rho))
        if rho[j] < lo:
            lo, at = float(rho[j]), float(t[j])
    return lo - tail > 0, lo, at, tail


def case1_verify(p: Case1Params, window: int = 32, grid: int = 1024) -> TorusReport:
    if p.nmax < 2 * window:
        raise ValueError("nmax must be at least twice the check window")
    n, f1, f2 = case1_charfns(p)
    resid, worst = _eq3_on_window(f1, f2, p.nmax, window)
    log_resid = _case1_log_eq3(p, window)
    b = case1_branches(p)
    (m1, _), (m2, _) = case1_log_tables(p)
    gauss = -p.sigma * n.astype(float) ** 2
    on = b != 2
    # log-moduli reach sigma * nmax^2, so compare relative to that scale
    scale = 1e-12 * np.maximum(1.0, np.abs(gauss))

    def split(mag, sign):
        d = np.abs(mag - gauss - sign * p.q * (b == 1))
        return bool((d[on] <= scale[on]).all())

    pattern = bool(
        np.array_equal(np.isinf(m1), ~on)
        and np.array_equal(np.isinf(m2), ~on)
        and split(m1, 1)
        and split(m2, -1)
    )
    pos, lo, at, tail = case1_positivity(p, grid)
    verdicts = {
        "eq3": resid <= EQ3_TOL,
        "eq3_log_form": log_resid <= EQ3_TOL,
        "normalised": bool(f1[p.nmax] == 1 and f2[p.nmax] == 1),
        "zero_pattern": pattern,
        "positive": bool(pos),
    }
    return TorusReport(
        gate_sum=None,
        tail_bound=tail,
        eq3_max_residual=resid,
        min_density=lo,
        pi_tables=None,
        verdicts=verdicts,
        details={
            "params": {"sigma": p.sigma, "m": p.m, "q": p.q, "t1": p.t1, "t2": p.t2, "nmax": p.nmax},
            "window": window,
            "grid": grid,
            "eq3_worst_pair": list(worst),
            "eq3_max_log_residual": log_resid,
            "min_density_point": at,
        },
    )


# ---------------------------------------------------------------------------
# the sign-table pair on T^2

_PLUS = {
    1: [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)],
    2: [(1, 0), (3, 0), (0, 1), (0, 3), (1, 3), (3, 1)],
}
_MINUS = {
    1: [(1, 2), (3, 2), (2, 1), (2, 3), (1, 3), (3, 1)],
    2: [(1, 2), (3, 2), (2, 1), (2, 3), (1, 1), (3, 3)],
}


def remark2_sign_table(k: int) -> np.ndarray:
    """The 4x4 table ``l_k(m mod 4, n mod 4)``: +1 on the even lattice and the listed cosets."""
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    t = np.zeros((4, 4), dtype=np.int64)
    t[::2, ::2] = 1
    for a, b in _PLUS[k]:
        t[a, b] = 1
    for a, b in _MINUS[k]:
        t[a, b] = -1
    assert (t != 0).all()
    return t


@dataclass(frozen=True)
class Remark2Config:
    sigma: float = 2.0
    nmax: int = 16
    grid: int = 256

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.nmax < 4:
            raise ValueError("window must be at least 4")


def remark2_gate(c: Remark2Config) -> tuple[float, float, bool]:
    """``(sum over the window minus the origin, bound on the rest, passes)``."""
    r = np.arange(-c.nmax, c.nmax + 1)
    g1 = np.exp(-c.sigma * r.astype(float) ** 2)
    total = float(np.outer(g1, g1).sum() - 1.0)
    tail = 4 * gaussian_tail_1d(c.sigma, c.nmax) * gaussian_sum_1d_bound(c.sigma)
    return total, tail, total + tail < 1


def remark2_tables(c: Remark2Config) -> tuple[np.ndarray, np.ndarray]:
    """Sign tables on the window, indexed ``[m + nmax, n + nmax]``."""
    r = np.arange(-c.nmax, c.nmax + 1) % 4
    return tuple(remark2_sign_table(k)[np.ix_(r, r)] for k in (1, 2))


def remark2_charfns(c: Remark2Config) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(gamma_hat, f1, f2)`` with ``f_k = gamma_hat * l_k`` on the window."""
    r = np.arange(-c.nmax, c.nmax + 1).astype(float)
    gamma = np.exp(-c.sigma * (r[:, None] ** 2 + r[None, :] ** 2))
    l1, l2 = remark2_tables(c)
    return gamma, gamma * l1, gamma * l2


def remark2_pi(k: int) -> Measure:
    """The signed measure on ``Z(4)^2`` whose transform is the folded sign table."""
    g = Group((4, 4))
    d = inverse_char(g, CharFn(g, remark2_sign_table(k).reshape(-1).astype(complex)))
    return d


def _eq3_2d(f1: np.ndarray, f2: np.ndarray, nmax: int, half: int):
    r = np.arange(-half, half + 1)
    pts = np.stack(np.meshgrid(r, r, indexing="ij"), -1).reshape(-1, 2)

    def at(f, p):
        return f[p[..., 0] + nmax, p[..., 1] + nmax]

    u, v = pts[:, None, :], pts[None, :, :]
    lhs = at(f1, u + v) * at(f2, u - v)
    rhs = at(f1, u) * at(f2, u) * at(f1, v) * at(f2, -v)
    return lhs, rhs


def remark2_verify(c: Remark2Config) -> TorusReport:
    """All four checks for the sign-table pair; raises :class:`GateRefused` if the gate fails."""
    gate_sum, tail, ok = remark2_gate(c)
    if not ok:
        raise GateRefused(gate_sum, tail)
    gamma, f1, f2 = remark2_charfns(c)
    l1, l2 = remark2_tables(c)
    half = c.nmax // 2

    lhs, rhs = _eq3_2d(f1, f2, c.nmax, half)
    eq3_resid = float(np.abs(lhs - rhs).max())
    sl, sr = _eq3_2d(l1, l2, c.nmax, half)
    signs_ok = bool(np.array_equal(sl, sr))

    r = np.arange(-c.nmax, c.nmax + 1)
    t = 2 * np.pi * np.arange(c.grid) / c.grid
    E = np.exp(-1j * np.outer(t, r))
    mins, imag = [], 0.0
    for f in (f1, f2):
        rho = E @ f @ E.T
        imag = max(imag, float(np.abs(rho.imag).max()))
        mins.append(float(rho.real.min()))
    min_density = min(mins)

    g4 = Group((4, 4))
    x2 = torsion_subgroup(g4, 2).mask
    pis, pi_imag, negative, outside, roundtrip = [], 0.0, [], [], 0.0
    for k, l in ((1, l1), (2, l2)):
        pi = remark2_pi(k)
        pi_imag = max(pi_imag, float(np.abs(pi.weights.imag).max()))
        w = pi.weights.real
        pis.append(w.reshape(4, 4).tolist())
        negative.append(bool((w < -1e-12).any()))
        outside.append(bool((np.abs(w[~x2]) > 1e-12).any()))
        # mu_hat = gamma_hat * pi_hat with pi_hat read off the folded measure
        ph = char_fn(Measure(g4, w)).values.reshape(4, 4)
        rr = r % 4
        roundtrip = max(roundtrip, float(np.abs(gamma * ph[np.ix_(rr, rr)] - (f1 if k == 1 else f2)).max()))

    verdicts = {
        "gate": True,
        "eq3": eq3_resid <= EQ3_TOL,
        "sign_identity": signs_ok,
        "positive": min_density - tail > 0,
        "positivity_bound": min_density >= 1 - gate_sum - tail - 1e-12,
        "pi_real": pi_imag <= EQ3_TOL,
        "pi_has_negative_weight": all(negative),
        "pi_not_on_2_torsion": all(outside),
        "gaussian_factorisation": roundtrip <= EQ3_TOL,
    }
    return TorusReport(
        gate_sum=gate_sum,
        tail_bound=tail,
        eq3_max_residual=eq3_resid,
        min_density=min_density,
        pi_tables=pis,
        verdicts=verdicts,
        details={
            "params": {"sigma": c.sigma, "nmax": c.nmax, "grid": c.grid},
            "eq3_window": half,
            "min_density_per_measure": mins,
            "density_max_imag": imag,
            "pi_max_imag": pi_imag,
            "factorisation_residual": roundtrip,
        },
    )


# ---------------------------------------------------------------------------
# mu_1 = m_T and 2 xi_2 uniform


@dataclass
class Case2Result:
    holds: bool
    eq3_holds: bool
    witness: tuple[int, int] | None
    eq3_max_residual: float
    doubled_law_max_error: float

    def __bool__(self) -> bool:
        return self.holds


def case2_degeneration_check(
    grid: int = 256, mu2: dict[int, complex] | None = None, nmax: int = 16, tol: float = EQ3_TOL
) -> Case2Result:
    """``mu_1 = m_T`` paired with the measure whose nonzero Fourier coefficients are ``mu2``.

    ``mu2`` maps positive frequencies to coefficients (the negative ones follow
    by conjugation; the coefficient at 0 is 1).  The pair passes when the
    identity holds on the window and ``2 xi_2`` is uniform on the grid, which
    both come down to ``mu2`` having no nonzero even frequency.
    """
    coeffs = np.zeros(2 * nmax + 1, dtype=complex)
    coeffs[nmax] = 1
    for n, c in (mu2 or {}).items():
        if not 0 < n <= nmax:
            raise ValueError("frequencies must lie in 1..nmax")
        coeffs[nmax + n] = c
        coeffs[nmax - n] = np.conj(c)
    haar_t = np.zeros_like(coeffs)
    haar_t[nmax] = 1
    half = nmax // 2
    resid, worst = _eq3_on_window(haar_t, coeffs, nmax, half)
    eq3 = resid <= tol
    # law of 2 xi_2 has coefficients mu2_hat(2n)
    n = np.arange(-half, half + 1)
    doubled = coeffs[2 * n + nmax]
    t = 2 * np.pi * np.arange(grid) / grid
    density = (np.exp(-1j * np.outer(t, n)) @ doubled).real
    law_err = float(np.abs(density - 1).max())
    return Case2Result(
        holds=bool(eq3 and law_err <= tol),
        eq3_holds=bool(eq3),
        witness=None if eq3 else worst,
        eq3_max_residual=resid,
        doubled_law_max_error=law_err,
    )
