import json
import math
from fractions import Fraction

import mpmath as mp
import pytest

from bosecount.errors import ParseError, ProfileUnavailable, SpectrumError
from bosecount.specfun import riemann_zeta
from bosecount.spectrum import (
    SpectrumModel,
    ZetaProfile,
    eigenvalues_up_to,
    load_custom_spectrum,
    load_profile,
    parse_model,
    sphere_multiplicity,
    zeta_profile,
)

ZETA3 = 1.2020569031595942


def harmonic_dim(n, k):
    # dimension of degree-k spherical harmonics on S^n, factorial form
    if k == 0:
        return 1
    return (2 * k + n - 1) * math.factorial(k + n - 2) // (math.factorial(k) * math.factorial(n - 1))


def test_eigenvalues_examples():
    assert eigenvalues_up_to(SpectrumModel.partitions(), 4) == [(1, 1), (2, 1), (3, 1), (4, 1)]
    assert eigenvalues_up_to(SpectrumModel.sphere(2), 3) == [(1, 1), (2, 3), (3, 5)]
    assert eigenvalues_up_to(SpectrumModel.sphere(3), 4) == [(2, 1), (3, 4), (4, 9)]


def test_custom_truncation_and_empty():
    m = SpectrumModel.custom([(3, 2), (7, 1)], n=1)
    assert eigenvalues_up_to(m, 2) == []
    assert eigenvalues_up_to(m, 5) == [(3, 2)]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_sphere_cumulative_dimension(n):
    model = SpectrumModel.sphere(n)
    for lam_max in range(1, 51):
        got = sum(m for _, m in eigenvalues_up_to(model, lam_max))
        want = sum(harmonic_dim(n, k) for k in range(0, lam_max - n + 2))
        assert got == want


def test_sphere_two_is_odd_multiplicities():
    assert [sphere_multiplicity(2, k) for k in range(6)] == [1, 3, 5, 7, 9, 11]


def test_model_validation():
    with pytest.raises(SpectrumError, match="λ must be ≥ 1"):
        SpectrumModel.custom([(0, 1)], n=1)
    with pytest.raises(SpectrumError, match="duplicate eigenvalue 2"):
        SpectrumModel.custom([(2, 3), (2, 1)], n=1)
    with pytest.raises(SpectrumError):
        SpectrumModel.custom([(3, 1), (2, 1)], n=1)
    with pytest.raises(SpectrumError):
        SpectrumModel.custom([(1, 0)], n=1)
    with pytest.raises(SpectrumError):
        SpectrumModel.sphere(1)


def test_partitions_profile():
    p = zeta_profile(SpectrumModel.partitions())
    assert p.n == 1
    assert p.A == (1.0,)
    assert p.K[0] == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert p.Z0 == pytest.approx(-0.5, abs=1e-15)
    assert p.detP == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)
    assert p.Bn == pytest.approx(math.pi * math.sqrt(2 / 3), rel=1e-13)


def test_sphere2_profile():
    p = zeta_profile(SpectrumModel.sphere(2))
    assert p.A == pytest.approx((2.0, -1.0))
    assert p.K[0] == pytest.approx(2 * ZETA3, rel=1e-12)
    assert p.K[0] == pytest.approx(2 * riemann_zeta(3).value, rel=1e-12)
    assert p.K[1] == pytest.approx(-math.pi**2 / 6, rel=1e-13)
    assert p.Z0 == pytest.approx(1 / 3, abs=1e-13)
    assert p.volSigma == pytest.approx(8 * math.pi**2, rel=1e-14)
    # 2 zeta'(-1) + log(2 pi)/2
    want = 2 * float(mp.zeta(-1, 1, 1)) + 0.5 * math.log(2 * math.pi)
    assert p.Zprime0 == pytest.approx(want, abs=1e-13)
    assert p.Bn == pytest.approx(3 * (ZETA3 / 2) ** (1 / 3), rel=1e-13)


def _mp_sphere_zeta(n, s, der=0):
    # fit the multiplicity as a polynomial in lambda by Lagrange interpolation
    pts = [(k + n - 1, harmonic_dim(n, k)) for k in range(n + 1)]
    coeffs = [Fraction(0)] * (n)
    for i, (xi, yi) in enumerate(pts[:n]):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts[:n]):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d, b in enumerate(basis):
            coeffs[d] += yi * b / denom
    with mp.workdps(40):
        return float(
            mp.fsum(mp.mpf(c.numerator) / c.denominator * mp.zeta(s - d, n - 1, der) for d, c in enumerate(coeffs))
        )


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sphere_profile_against_mpmath(n):
    p = zeta_profile(SpectrumModel.sphere(n))
    assert p.Z0 == pytest.approx(_mp_sphere_zeta(n, 0), abs=1e-12)
    assert p.Zprime0 == pytest.approx(_mp_sphere_zeta(n, 0, 1), abs=1e-12)
    # residue at s = n - j from a numerical Laurent fit is overkill; check A_0 = 2/(n-1)!
    assert p.A[0] == pytest.approx(2 / math.factorial(n - 1), rel=1e-14)


@pytest.mark.parametrize("model", [SpectrumModel.partitions()] + [SpectrumModel.sphere(n) for n in (2, 3, 4, 5)])
def test_profile_invariants(model):
    p = zeta_profile(model)
    n = p.n
    for j in range(n):
        assert p.K[j] == pytest.approx(p.A[j] * riemann_zeta(n - j + 1).value * math.gamma(n - j), rel=1e-14)
    assert p.K[0] > 0
    assert p.bn_from_volume() == pytest.approx(p.Bn, rel=1e-12)
    assert p.detP * math.exp(p.Zprime0) == pytest.approx(1.0, rel=1e-12)


def test_custom_has_no_profile():
    with pytest.raises(ProfileUnavailable, match="profile"):
        zeta_profile(SpectrumModel.custom([(1, 2)], n=1))


def test_profile_rejects_nonpositive_k0():
    with pytest.raises(SpectrumError):
        ZetaProfile.from_residues(1, [-1.0], 0.0, 0.0)


def test_load_custom_spectrum(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# n=1\n1 2\n# a comment\n2 1\n", encoding="utf-8")
    m = load_custom_spectrum(f)
    assert m.pairs == ((1, 2), (2, 1))
    assert m.n == 1
    assert m.horizon is None


def test_load_custom_spectrum_horizon(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# n=2\n# horizon=10\n1 1\n4 3\n", encoding="utf-8")
    m = load_custom_spectrum(f)
    assert m.horizon == 10
    assert m.valid_up_to == 10


@pytest.mark.parametrize(
    "body, message",
    [
        ("# n=1\n0 1\n", "line 2: λ must be ≥ 1"),
        ("# n=1\n2 3\n2 1\n", "line 3: duplicate eigenvalue 2"),
        ("# n=1\n1.5 1\n", "line 2"),
        ("# n=1\n1 -2\n", "line 2"),
        ("# n=1\n1 2 3\n", "line 2"),
        ("1 2\n", "line 1"),
    ],
)
def test_load_custom_spectrum_errors(tmp_path, body, message):
    f = tmp_path / "bad.txt"
    f.write_text(body, encoding="utf-8")
    with pytest.raises(ParseError, match=message):
        load_custom_spectrum(f)


def test_load_profile(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"n": 1, "A": [1.0], "Z0": -0.5, "Zprime0": -0.5 * math.log(2 * math.pi)}))
    p = load_profile(f)
    ref = zeta_profile(SpectrumModel.partitions())
    assert p.K == pytest.approx(ref.K)
    assert p.Bn == pytest.approx(ref.Bn)
    f.write_text("{}")
    with pytest.raises(ParseError):
        load_profile(f)


def test_parse_model(tmp_path):
    assert parse_model("partitions") == SpectrumModel.partitions()
    assert parse_model("sphere:3") == SpectrumModel.sphere(3)
    f = tmp_path / "c.txt"
    f.write_text("# n=1\n1 2\n")
    assert parse_model(f"custom:{f}").pairs == ((1, 2),)
    for bad in ["torus", "sphere:", "sphere:x", "custom:"]:
        with pytest.raises(SpectrumError):
            parse_model(bad)
