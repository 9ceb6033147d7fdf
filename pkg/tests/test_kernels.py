import numpy as np
import pytest
from scipy import integrate

from runup import DomainError, combined_kernel, kernel_k0, kernel_k2, kernel_k2_ds
from runup.kernels import elliptic_ke

# reference values from 40-digit quadrature of the defining integrals
K0_1_05 = 2.1565156474996432
K2_1_05 = 1.2110560275684595
K2DS_1_05 = 0.63030641328745581
COMBINED_1_05 = -0.28517472496028832


def kn_oracle(x, s, n):
    """Defining integral split at the midpoint with sqrt substitutions at both ends."""
    m = 0.5 * (s + x)
    left = integrate.quad(
        lambda u: 2 * (s + u * u) ** n / np.sqrt((2 * s + u * u) * (x * x - (s + u * u) ** 2)),
        0.0, np.sqrt(m - s), epsabs=0.0, epsrel=1e-13, limit=200,
    )[0]
    right = integrate.quad(
        lambda u: 2 * (x - u * u) ** n / np.sqrt(((x - u * u) ** 2 - s * s) * (2 * x - u * u)),
        0.0, np.sqrt(x - m), epsabs=0.0, epsrel=1e-13, limit=200,
    )[0]
    return left + right


def test_closed_forms_against_oracle_grid():
    xs = np.logspace(-2, 2, 20)
    fracs = np.logspace(-4, np.log10(0.999), 20)
    worst = 0.0
    for x in xs:
        for f in fracs:
            s = f * x
            for n, fn in ((0, kernel_k0), (2, kernel_k2)):
                ref = kn_oracle(x, s, n)
                worst = max(worst, abs(float(fn(x, s)) - ref) / ref)
    assert worst <= 1e-8


def test_frozen_values():
    assert kernel_k0(1.0, 0.5) == pytest.approx(K0_1_05, rel=1e-13)
    assert kernel_k2(1.0, 0.5) == pytest.approx(K2_1_05, rel=1e-13)
    assert kernel_k2_ds(1.0, 0.5) == pytest.approx(K2DS_1_05, rel=1e-12)
    assert combined_kernel(1.0, 0.5) == pytest.approx(COMBINED_1_05, rel=1e-12)


def test_oracle_reproduces_frozen_values():
    assert kn_oracle(1.0, 0.5, 0) == pytest.approx(K0_1_05, rel=1e-11)
    assert kn_oracle(1.0, 0.5, 2) == pytest.approx(K2_1_05, rel=1e-11)


def test_k2_ds_against_richardson_difference():
    def central(h):
        return (kn_oracle(1.0, 0.5 + h, 2) - kn_oracle(1.0, 0.5 - h, 2)) / (2 * h)

    h = 1e-5
    rich = (4 * central(h / 2) - central(h)) / 3
    assert kernel_k2_ds(1.0, 0.5) == pytest.approx(rich, rel=1e-6)


def test_limits_near_diagonal():
    assert abs(kernel_k0(1.0, 0.9999) - np.pi / 2) < 1e-3
    assert abs(kernel_k2(1.0, 0.9999) - np.pi / 2) < 1e-3
    assert kernel_k2_ds(1.0, 1 - 1e-12) == pytest.approx(np.pi / 4, rel=1e-6)


@pytest.mark.parametrize("lam", [2.0, 0.3, 17.0])
def test_scaling_laws(lam):
    x = np.array([0.3, 1.0, 2.5, 7.0])
    s = x * np.array([0.01, 0.4, 0.9, 0.999])
    assert np.allclose(kernel_k0(lam * x, lam * s), kernel_k0(x, s) / lam, rtol=1e-10, atol=0)
    assert np.allclose(kernel_k2(lam * x, lam * s), lam * kernel_k2(x, s), rtol=1e-10, atol=0)
    assert np.allclose(kernel_k2_ds(lam * x, lam * s), kernel_k2_ds(x, s), rtol=1e-10, atol=0)
    # the s K0 term is scale invariant too, hence so is the combined kernel
    assert np.allclose(combined_kernel(lam * x, lam * s), combined_kernel(x, s), rtol=1e-10)


def test_combined_kernel_definition():
    x = np.array([1.0, 2.0, 3.0])
    s = np.array([0.2, 1.5, 0.1])
    expected = (2 / np.pi) * (kernel_k2_ds(x, s) - s * kernel_k0(x, s))
    assert np.array_equal(combined_kernel(x, s), expected)


def test_positivity():
    x = np.linspace(0.1, 5, 50)[:, None]
    s = x * np.linspace(0.0, 0.99, 40)[None, :]
    assert np.all(kernel_k0(x, s) > 0)
    assert np.all(kernel_k2(x, s) > 0)


def test_singular_and_domain_errors():
    assert np.isinf(kernel_k0(1.0, 0.0))
    assert kernel_k2(1.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        kernel_k0(1.0, 1.0)
    with pytest.raises(DomainError):
        kernel_k0(1.0, -0.1)
    with pytest.raises(DomainError):
        kernel_k2_ds(1.0, 0.0)
    with pytest.raises(DomainError):
        combined_kernel(0.0, 0.0)


def test_agm_matches_scipy():
    from scipy.special import ellipe, ellipk, ellipkm1

    kp = np.array([1e-8, 1e-3, 0.1, 0.5, 0.9, 0.999999])
    K, KmE = elliptic_ke(kp)
    m = 1 - kp**2
    assert np.allclose(K, ellipkm1(kp**2), rtol=1e-14)
    assert np.allclose(K - KmE, ellipe(m), rtol=1e-13)
    assert np.allclose(KmE[2:], ellipk(m[2:]) - ellipe(m[2:]), rtol=1e-12)
