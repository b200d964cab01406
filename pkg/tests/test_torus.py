import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumdiff.groups import Group, torsion_subgroup
from sumdiff.torus import (
    Case1Params,
    GateRefused,
    Remark2Config,
    case1_charfns,
    case1_positivity,
    case1_verify,
    case2_degeneration_check,
    gaussian_sum_1d_bound,
    gaussian_tail_1d,
    remark2_charfns,
    remark2_gate,
    remark2_pi,
    remark2_sign_table,
    remark2_tables,
    remark2_verify,
)


def at(n, table, k):
    return table[int(np.flatnonzero(n == k)[0])]


# -- tail bounds -------------------------------------------------------------------


@pytest.mark.parametrize("sigma", [0.05, 0.5, 2.0])
def test_tail_bound_dominates_direct_sum(sigma):
    for nmax in (2, 8, 16):
        n = np.arange(nmax + 1, nmax + 4000)
        assert np.exp(-sigma * n.astype(float) ** 2).sum() <= gaussian_tail_1d(sigma, nmax)
    n = np.arange(-4000, 4001).astype(float)
    assert np.exp(-sigma * n ** 2).sum() <= gaussian_sum_1d_bound(sigma) + 1e-12


# -- the family on T -----------------------------------------------------------------


def test_case1_values():
    p = Case1Params(sigma=0.5, m=3, q=0.7)
    n, f1, f2 = case1_charfns(p)
    assert at(n, f1, 0) == 1 and at(n, f2, 0) == 1
    assert at(n, f1, 3) == pytest.approx(math.exp(-4.5 + 0.7), rel=1e-14)
    assert at(n, f2, 3) == pytest.approx(math.exp(-4.5 - 0.7), rel=1e-14)
    assert at(n, f1, 6) == pytest.approx(math.exp(-18), rel=1e-14)
    for k in (1, 2, -1, -2, 4, 5):
        assert at(n, f1, k) == 0 and at(n, f2, k) == 0


def test_case1_phases_and_hermitian_symmetry():
    p = Case1Params(sigma=0.5, m=3, q=0.7, t1=0.4, t2=-1.3)
    n, f1, f2 = case1_charfns(p)
    assert at(n, f1, 3) == pytest.approx(math.exp(-3.8) * complex(math.cos(1.2), math.sin(1.2)))
    for f in (f1, f2):
        assert np.allclose(f[::-1], np.conj(f), atol=0)


@pytest.mark.parametrize("t1,t2", [(0, 0), (0.3, -2.1), (math.pi, 1.0), (5.5, 0.01)])
def test_case1_verify_passes(t1, t2):
    r = case1_verify(Case1Params(sigma=0.5, m=3, q=0.7, t1=t1, t2=t2))
    assert r.ok, r.verdicts
    assert r.eq3_max_residual <= 1e-12


@pytest.mark.parametrize("m", [1, 3, 5, 7])
def test_case1_identity_holds_for_all_odd_m(m):
    r = case1_verify(Case1Params(sigma=0.3, m=m, q=-0.4, t1=1.0, t2=2.0, nmax=64))
    assert r.verdicts["eq3"] and r.verdicts["eq3_log_form"] and r.verdicts["zero_pattern"]


def test_case1_identity_fails_when_q_signs_agree():
    # the same +q on both transforms breaks the identity
    p = Case1Params(sigma=0.5, m=3, q=0.7)
    n, f1, _ = case1_charfns(p)
    N = p.nmax
    u, v = 3, 3
    lhs = f1[N + u + v] * f1[N + u - v]
    rhs = f1[N + u] ** 2 * f1[N + v] * f1[N - v]
    assert math.log(abs(rhs)) - math.log(abs(lhs)) == pytest.approx(4 * 0.7)


def test_case1_positivity_examples():
    ok, lo, _, tail = case1_positivity(Case1Params(sigma=0.5, m=3, q=0.7))
    assert ok and lo > tail
    assert case1_positivity(Case1Params(sigma=5.0, m=3, q=0.7))[0]
    ok, lo, point, _ = case1_positivity(Case1Params(sigma=0.01, m=3, q=5.0, nmax=128))
    assert not ok and lo < 0 and point is not None


def test_case1_positivity_atomic_limit():
    assert not case1_positivity(Case1Params(sigma=0.0, m=3, q=0.7))[0]
    ok, lo, _, _ = case1_positivity(Case1Params(sigma=0.0, m=1, q=0.0))
    assert ok and lo == 0


def test_case1_density_matches_grid_integration():
    # the synthesized density integrates to 1 and its Fourier coefficients come back
    p = Case1Params(sigma=0.5, m=3, q=0.7, t1=0.5)
    n, f1, _ = case1_charfns(p)
    grid = 512
    t = 2 * np.pi * np.arange(grid) / grid
    rho = (np.exp(-1j * np.outer(t, n)) @ f1).real
    coeff = np.exp(1j * np.outer(n, t)) @ rho / grid
    assert np.allclose(coeff, f1, atol=1e-12)


def test_case1_params_validation():
    with pytest.raises(ValueError):
        Case1Params(m=2)
    with pytest.raises(ValueError):
        Case1Params(sigma=-1)
    with pytest.raises(ValueError):
        Case1Params(m=5, nmax=8)


@given(
    st.floats(0.2, 3), st.sampled_from([1, 3, 5]), st.floats(-1.5, 1.5), st.floats(-4, 4), st.floats(-4, 4)
)
def test_case1_window_monotone(sigma, m, q, t1, t2):
    small = case1_verify(Case1Params(sigma, m, q, t1, t2, nmax=64), window=16, grid=256)
    big = case1_verify(Case1Params(sigma, m, q, t1, t2, nmax=96), window=24, grid=256)
    assert small.verdicts == big.verdicts


# -- the sign-table pair on T^2 ----------------------------------------------------


def test_remark2_sign_table_entries():
    l1, l2 = remark2_sign_table(1), remark2_sign_table(2)
    assert l1[1, 0] == 1 and l1[1, 2] == -1 and l1[1, 1] == 1 and l2[1, 1] == -1
    for l in (l1, l2):
        assert (l[::2, ::2] == 1).all()
        assert set(np.unique(l)) == {-1, 1}
        # even functions
        assert np.array_equal(l, l[np.ix_(-np.arange(4) % 4, -np.arange(4) % 4)])


def test_remark2_tables_are_periodic():
    c = Remark2Config(nmax=12)
    for l in remark2_tables(c):
        assert np.array_equal(l[4:, :], l[:-4, :])
        assert np.array_equal(l[:, 4:], l[:, :-4])
        assert l[12, 12] == 1


def test_remark2_gaussian_factor_exact():
    c = Remark2Config(sigma=2.0, nmax=8)
    gamma, f1, f2 = remark2_charfns(c)
    l1, l2 = remark2_tables(c)
    r = np.arange(-8, 9)
    assert np.array_equal(gamma, np.exp(-2.0 * (r[:, None] ** 2 + r[None, :] ** 2)))
    assert np.array_equal(f1, gamma * l1) and np.array_equal(f2, gamma * l2)


def test_remark2_gate_values():
    s, tail, ok = remark2_gate(Remark2Config(sigma=2.0))
    assert ok and s == pytest.approx(0.61631, abs=1e-5) and tail < 1e-100
    s, tail, ok = remark2_gate(Remark2Config(sigma=0.05))
    assert not ok and s > 1


@pytest.mark.parametrize("sigma", [0.7, 1.0, 2.0])
def test_remark2_gate_against_large_window(sigma):
    s, tail, _ = remark2_gate(Remark2Config(sigma=sigma, nmax=16))
    r = np.arange(-200, 201).astype(float)
    g = np.exp(-sigma * r ** 2)
    full = np.outer(g, g).sum() - 1
    assert s - 1e-12 <= full <= s + tail + 1e-12


def test_remark2_gate_refused():
    with pytest.raises(GateRefused) as err:
        remark2_verify(Remark2Config(sigma=0.05))
    assert err.value.gate_sum > 1


def test_remark2_verify_passes():
    r = remark2_verify(Remark2Config())
    assert r.ok, r.verdicts
    assert r.min_density > 0 and r.eq3_max_residual <= 1e-12


def test_remark2_pi_matches_fft():
    g = Group((4, 4))
    x2 = torsion_subgroup(g, 2).mask.reshape(4, 4)
    for k in (1, 2):
        l = remark2_sign_table(k).astype(float)
        oracle = np.fft.fft2(l) / 16
        pi = remark2_pi(k).weights.reshape(4, 4)
        assert np.abs(pi - oracle).max() < 1e-15
        assert np.abs(pi.imag).max() < 1e-15
        assert set(np.round(pi.real, 12).ravel()) <= {-0.25, 0.0, 0.25, 0.5, 0.75, 1.0}
        assert (pi.real < 0).any()
        assert (np.abs(pi.real[~x2]) > 1e-12).any()
        assert pi.real.sum() == pytest.approx(1)


def test_remark2_verdicts_stable_under_window_growth():
    a = remark2_verify(Remark2Config(sigma=2.0, nmax=16, grid=64))
    b = remark2_verify(Remark2Config(sigma=2.0, nmax=24, grid=64))
    assert a.verdicts == b.verdicts
    assert a.min_density == pytest.approx(b.min_density, abs=1e-12)


def test_remark2_positivity_follows_from_gate():
    for sigma in (1.8, 2.5, 3.0):
        c = Remark2Config(sigma=sigma, grid=64)
        s, tail, ok = remark2_gate(c)
        assert ok
        assert remark2_verify(c).min_density >= 1 - s - tail - 1e-12


# -- Haar degeneration ----------------------------------------------------------------


def test_case2_examples():
    assert case2_degeneration_check()
    assert case2_degeneration_check(mu2={3: 0.2})
    assert case2_degeneration_check(mu2={1: 0.25j, 5: 0.1})
    res = case2_degeneration_check(mu2={1: 0.1, 2: 0.3})
    assert not res and not res.eq3_holds
    u, v = res.witness
    # the reported pair genuinely violates the identity: with f1 = 1_{0},
    # lhs = [u+v=0] f2(u-v), rhs = [u=0][v=0]
    f2 = {0: 1, 2: 0.3, -2: 0.3, 1: 0.1, -1: 0.1}
    lhs = (u + v == 0) * f2.get(u - v, 0)
    rhs = (u == 0) * (v == 0)
    assert lhs != rhs
    assert res.doubled_law_max_error > 0.1


def test_case2_frequency_range():
    with pytest.raises(ValueError):
        case2_degeneration_check(mu2={0: 1})
