import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosecount.asymptotics import (
    AsymptoticResult,
    comparison_rows,
    estimate,
    f_polynomial,
    hardy_ramanujan,
    knopp_statistic,
    main_asymptotic,
    main_constants,
    meinardus_general,
    proof_constants,
    residual_exponent,
    saddle_polynomial,
    solve_saddle,
    surface_asymptotic_n2,
    surface_y,
    upper_bound_log,
    weyl_average_statistic,
)
from bosecount.errors import DomainError, SolverError
from bosecount.exact import count_states, cumulative
from bosecount.spectrum import SpectrumModel, ZetaProfile, zeta_profile

ZETA3 = 1.2020569031595942
PP = zeta_profile(SpectrumModel.partitions())
S2P = zeta_profile(SpectrumModel.sphere(2))
S3P = zeta_profile(SpectrumModel.sphere(3))


@pytest.fixture(scope="module")
def p_table():
    return count_states(SpectrumModel.partitions(), 10_000)


@pytest.fixture(scope="module")
def s2_table():
    return count_states(SpectrumModel.sphere(2), 4000)


# --- saddle ------------------------------------------------------------------


def test_saddle_polynomial_examples():
    assert saddle_polynomial(PP, 7.0) == pytest.approx([-math.pi**2 / 6, 0.0, 7.0])
    c = saddle_polynomial(S2P, 5.0)
    assert c == pytest.approx([-4 * ZETA3, math.pi**2 / 6, 0.0, 5.0])
    for prof in (PP, S2P, S3P):
        c = saddle_polynomial(prof, 3.0)
        assert c[0] == pytest.approx(-prof.n * prof.K[0])
        assert c[0] < 0
        assert len(c) == prof.n + 2


def test_partitions_closed_form():
    sd = solve_saddle(PP, 100)
    assert sd.x_E == pytest.approx(math.pi / (10 * math.sqrt(6)), rel=1e-14)
    for E in [1, 10, 123, 1e4, 1e7]:
        assert solve_saddle(PP, E).x_E * math.sqrt(E / PP.K[0]) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("prof", [PP, S2P, S3P, zeta_profile(SpectrumModel.sphere(5))])
def test_saddle_invariants(prof):
    prev = math.inf
    for E in [5, 50, 500, 5e3, 5e4, 5e5]:
        sd = solve_saddle(prof, E)
        coeffs = saddle_polynomial(prof, E)
        p = sum(c * sd.x_E**k for k, c in enumerate(coeffs))
        dp = sum(k * c * sd.x_E ** (k - 1) for k, c in enumerate(coeffs) if k)
        assert abs(p) <= 1e-12 * E * sd.x_E ** (prof.n + 1)
        assert dp > 0
        assert sd.m_E == pytest.approx(E * sd.x_E)
        assert sd.x_E < prev
        prev = sd.x_E
        psi = sum(prof.K[j] * sd.x_E ** -(prof.n - j) for j in range(prof.n))
        assert sd.exponent == pytest.approx(E * sd.x_E + psi, rel=1e-10)
        assert sd.exponent == pytest.approx(sd.x_E ** -prof.n * f_polynomial(prof, sd.x_E), rel=1e-12)
        assert abs(residual_exponent(prof, sd)) <= 1e-10 * sd.exponent


@pytest.mark.parametrize("prof", [PP, S2P, S3P])
def test_eta_ratio(prof):
    n = prof.n
    for E in [1e3, 1e4, 1e5]:
        sd = solve_saddle(prof, E)
        assert sd.eta > 0
        assert abs(sd.eta / sd.m_E - (n + 1)) <= 5 * sd.m_E ** (-1 / n)


def test_zero_e_trend_sphere2():
    gaps = [abs(solve_saddle(S2P, E).x_E / (2 * S2P.K[0] / E) ** (1 / 3) - 1) for E in (1e3, 1e4, 1e5, 1e6)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_f_polynomial_examples():
    assert f_polynomial(PP, 0.3) == pytest.approx(math.pi**2 / 3)
    assert f_polynomial(S2P, 0.2) == pytest.approx(6 * ZETA3 - math.pi**2 / 3 * 0.2)


@settings(max_examples=60, deadline=None)
@given(
    a0=st.floats(0.05, 5.0),
    a1=st.floats(-3.0, 3.0),
    logE=st.floats(1.0, 7.0),
)
def test_saddle_random_profiles(a0, a1, logE):
    prof = ZetaProfile.from_residues(2, [a0, a1], 0.1, 0.0)
    E = 10**logE
    try:
        sd = solve_saddle(prof, E)
    except SolverError:
        # only allowed below the uniqueness threshold, where p_E has several roots
        coeffs = saddle_polynomial(prof, E)
        assert coeffs[1] < 0
        return
    coeffs = saddle_polynomial(prof, E)
    assert abs(sum(c * sd.x_E**k for k, c in enumerate(coeffs))) <= 1e-12 * E * sd.x_E**3


def test_solver_reports_non_unique_root():
    # K0 > 0, K1 < 0, K2 > 0: p_E has three positive zeros at small E
    prof = ZetaProfile.from_residues(3, [0.001, -5.0, 4.0], 0.0, 0.0)
    roots = np.roots(saddle_polynomial(prof, 0.1)[::-1])
    assert sum(1 for r in roots if abs(r.imag) < 1e-12 and r.real > 0) == 3
    with pytest.raises(SolverError, match="non-unique"):
        solve_saddle(prof, 0.1)


def test_solver_root_dominated_by_lower_terms():
    # the zero sits where E x^4 is negligible; convergence is judged by backward error
    prof = ZetaProfile.from_residues(3, [0.001, -5.0, 4.0], 0.0, 0.0)
    for E in (1.0, 5.0):
        sd = solve_saddle(prof, E)
        roots = [r.real for r in np.roots(saddle_polynomial(prof, E)[::-1]) if abs(r.imag) < 1e-12 and r.real > 0]
        assert roots and sd.x_E == pytest.approx(min(roots), rel=1e-10)


# --- main formulas -----------------------------------------------------------


@pytest.mark.parametrize("E", [10, 100, 1000, 10_000])
def test_main1_is_hardy_ramanujan(E):
    a = main_asymptotic(PP, E)
    b = hardy_ramanujan(E)
    assert a.kappa == pytest.approx(-1.0, abs=1e-14)
    assert a.C == pytest.approx(1 / (4 * math.sqrt(3)), rel=1e-12)
    assert a.exponent == pytest.approx(math.pi * math.sqrt(2 * E / 3), rel=1e-13)
    assert abs(a.estimate_log - b.estimate_log) <= 1e-10 * abs(b.estimate_log)


def test_hardy_ramanujan_examples():
    assert math.exp(hardy_ramanujan(100).estimate_log) == pytest.approx(1.9930e8, rel=1e-4)
    for E in [10, 100, 1000]:
        assert hardy_ramanujan(4 * E).exponent == pytest.approx(2 * hardy_ramanujan(E).exponent, rel=1e-14)
    with pytest.raises(DomainError):
        hardy_ramanujan(0)


def test_estimate_log_identity():
    for prof, fn in [(PP, main_asymptotic), (S2P, main_asymptotic), (S2P, surface_asymptotic_n2)]:
        r = fn(prof, 777)
        assert r.estimate_log == pytest.approx(math.log(r.C) + r.kappa * math.log(777) + r.exponent, rel=1e-14)


def test_main_constants_sphere2():
    C, kappa = main_constants(S2P)
    assert kappa == pytest.approx((1 / 3 - 2) / 3)
    want = math.exp(S2P.Zprime0) / math.sqrt(6 * math.pi) * (2 * S2P.K[0]) ** ((1 - 2 / 3) / 6)
    assert C == pytest.approx(want, rel=1e-13)


def test_surface_formula_examples():
    assert surface_y(S2P, 250) == pytest.approx((4 * ZETA3 / 250) ** (1 / 3), rel=1e-13)
    r = surface_asymptotic_n2(S2P, 1000)
    y = surface_y(S2P, 1000)
    const = -((math.pi**2 / 6) ** 2) / (24 * ZETA3)
    assert r.exponent == pytest.approx(6 * ZETA3 / y**2 - math.pi**2 / 6 / y + const, rel=1e-13)
    with pytest.raises(DomainError):
        surface_asymptotic_n2(PP, 100)


def test_surface_scale_matches_saddle_leading_order():
    for E in [1e3, 1e5, 1e7]:
        ratio = solve_saddle(S2P, E).x_E / surface_y(S2P, E)
        assert ratio == pytest.approx(1.0, abs=3 * E ** (-1 / 3))


def test_main1_main2_agree_asymptotically():
    # the two forms differ at O(E^{-1/3}); the log difference must shrink
    diffs = [abs(main_asymptotic(S2P, E).estimate_log - surface_asymptotic_n2(S2P, E).estimate_log) for E in (1e2, 1e3, 1e4, 1e5, 1e6)]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    # each decade divides the gap by roughly 10^(1/3)
    for a, b in zip(diffs[1:], diffs[2:]):
        assert b / a == pytest.approx(10 ** (-1 / 3), rel=0.15)


def test_ratio_convergence_partitions(p_table):
    r = [p_table[E] / math.exp(main_asymptotic(PP, E).estimate_log) for E in (100, 400, 1600, 6400)]
    gaps = [abs(x - 1) for x in r]
    assert gaps[0] <= 0.06
    assert gaps[1] <= 0.03
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    # measured at E = 100: the estimate is about 4.6% above the exact count
    assert 1 / r[0] == pytest.approx(1.046, abs=1e-3)


def test_ratio_convergence_sphere2(s2_table):
    for fn in (main_asymptotic, surface_asymptotic_n2):
        gaps = [abs(math.exp(math.log(s2_table[E]) - fn(S2P, E).estimate_log) - 1) for E in (500, 1000, 2000, 4000)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_meinardus_matches_hardy_ramanujan():
    for E in [10, 100, 1000, 10_000]:
        r = meinardus_general(1.0, 1.0, -0.5, -0.5 * math.log(2 * math.pi), 0.5, 0.25, E)
        assert r.kappa == pytest.approx(-1.0)
        assert r.estimate_log == pytest.approx(hardy_ramanujan(E).estimate_log, rel=1e-12)
        assert r.estimate_log == pytest.approx(main_asymptotic(PP, E).estimate_log, rel=1e-12)


def test_meinardus_kappa1():
    r = meinardus_general(1.0, 1.0, -0.5, 0.0, 0.5, 0.25, 100)
    assert r.kappa1 == pytest.approx(1 / 8)
    assert r.warnings == ()
    bad = meinardus_general(1.0, 1.0, -0.5, 0.0, 0.05, 0.4, 100)
    assert bad.kappa1 <= 0
    assert bad.warnings
    with pytest.raises(DomainError):
        meinardus_general(0.0, 1.0, 0.0, 0.0, 0.5, 0.25, 10)
    with pytest.raises(DomainError):
        meinardus_general(1.0, 1.0, 0.0, 0.0, 1.5, 0.25, 10)


def test_asymptotic_result_validation():
    with pytest.raises(ValueError):
        AsymptoticResult(1.0, 0.0, 1.0, 0.0, 0.0, "main7")
    with pytest.raises(ArithmeticError):
        AsymptoticResult(1.0, math.inf, 1.0, 0.0, 0.0, "main1")


def test_proof_constants():
    assert proof_constants(1) == pytest.approx((0.25, 0.25, 5 / 16))
    assert proof_constants(2) == pytest.approx((0.25, 0.25, 5 / 8))
    for n in range(1, 9):
        mu, delta, c0 = proof_constants(n)
        assert 0 < c0 < 1
        assert 0 < delta < min(0.5, 4 / n)
        assert mu == pytest.approx(min(0.5 - delta, c0 / n - delta / 4)) or n >= 3
    with pytest.raises(DomainError):
        proof_constants(2, mu=0.6)


# --- upper bound, Knopp, Weyl -------------------------------------------------


def test_upper_bound_partitions():
    for E in [10, 100, 1000]:
        sd = solve_saddle(PP, E)
        assert 2 * PP.K[0] / sd.x_E == pytest.approx(math.pi * math.sqrt(2 * E / 3), rel=1e-14)
    slopes = [
        (upper_bound_log(PP, 4 * E) - upper_bound_log(PP, E)) / (PP.Bn * ((4 * E) ** 0.5 - E**0.5))
        for E in (1e2, 1e3, 1e4)
    ]
    gaps = [abs(s - 1) for s in slopes]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_upper_bound_dominates(p_table):
    diffs = [math.log(p_table[E]) - upper_bound_log(PP, E) for E in range(1, 10_001, 7)]
    assert max(diffs) < 0


def test_knopp_partitions(p_table):
    stats = dict(knopp_statistic(p_table, PP))
    assert stats[10_000] == pytest.approx(2.454, abs=2e-3)
    gaps = [PP.Bn - stats[E] for E in (100, 1000, 10_000)]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 0.12


def test_weyl_partitions(p_table):
    cum = cumulative(p_table)
    weyl = dict(weyl_average_statistic(cum, PP))
    knopp = dict(knopp_statistic(p_table, PP))
    assert all(weyl[E] >= knopp[E] for E in knopp)
    assert abs(PP.Bn - weyl[10_000]) <= 0.15


def test_weyl_sphere2(s2_table):
    weyl = dict(weyl_average_statistic(cumulative(s2_table), S2P))
    assert abs(S2P.Bn - weyl[2000]) < abs(S2P.Bn - weyl[500])


def test_knopp_skips_unreachable_energies():
    m = SpectrumModel.custom([(2, 1)], n=1)
    stats = knopp_statistic(count_states(m, 10), PP)
    assert [E for E, _ in stats] == [2, 4, 6, 8, 10]


def test_comparison_rows(p_table):
    rows = comparison_rows(p_table, PP, [100, 400], ["main1", "hardy_ramanujan"])
    assert [(r[0], r[4]) for r in rows] == [(100, "main1"), (100, "hardy_ramanujan"), (400, "main1"), (400, "hardy_ramanujan")]
    for E, ln_exact, ln_est, ratio, _ in rows:
        assert ln_exact == pytest.approx(math.log(p_table[E]))
        assert ratio == pytest.approx(math.exp(ln_exact - ln_est))
    with pytest.raises(ValueError):
        estimate(PP, 100, "upper_bound")
