import numpy as np
import pytest
from scipy import special

from runup import HodographInitialData, SampledFunction
from runup.direct import poisson_boundary, trace_velocity
from runup.errors import ConfigError, DataError, StabilityError
from runup.wave_reference import WaveConfig, evolve, extract_boundary
import runup.wave_reference as wr


def hodo(sigma, psi, phi=None):
    phi_f = None if phi is None else SampledFunction(sigma, phi)
    return HodographInitialData(SampledFunction(sigma, psi, name="psi0"), phi_f)


def test_constant_state_for_1000_steps():
    sigma = np.linspace(0, 5, 2001)
    cfg = WaveConfig(5.0, 1000 * 0.5 * sigma[1], 2001)
    f = evolve(hodo(sigma, np.full_like(sigma, 0.3)), cfg)
    assert f.tau.size == 1001
    assert np.abs(f.psi - 0.3).max() <= 1e-14
    assert np.abs(f.phi).max() <= 1e-14
    tr = extract_boundary(f)
    assert np.allclose(tr.Psi, 0.3, atol=1e-14) and np.allclose(tr.V, 0.0, atol=1e-14)


def _bessel_errors(n, w=2.0, smax=10.0, tmax=3.0):
    sigma = np.linspace(0, smax, 4001)
    f = evolve(hodo(sigma, special.j0(w * sigma)), WaveConfig(smax, tmax, n))
    keep = f.sigma <= 5.0
    s = f.sigma[keep]
    T, S = np.meshgrid(f.tau, s, indexing="ij")
    psi_ex = special.j0(w * S) * np.cos(w * T)
    j1_over_s = np.where(S > 0, special.j1(w * S) / np.maximum(S, 1e-300), w / 2)
    phi_ex = j1_over_s * np.sin(w * T)
    return (np.abs(f.psi[:, keep] - psi_ex).max(), np.abs(f.phi[:, keep] - phi_ex).max(),
            np.abs(f.psi[:, 0] - np.cos(w * f.tau)).max(),
            np.abs(f.phi[:, 0] - (w / 2) * np.sin(w * f.tau)).max())


def test_bessel_mode_second_order():
    coarse = _bessel_errors(401)
    fine = _bessel_errors(801)
    for c, f in zip(coarse, fine):
        assert c / f == pytest.approx(4.0, rel=0.15)
    assert fine[0] < 1e-3 and fine[1] < 1e-3


@pytest.fixture(scope="module")
def gaussian_case():
    sigma = np.linspace(0, 5, 2001)
    return hodo(sigma, 0.01 * np.exp(-4 * (sigma**2 - 1) ** 2))


def test_gaussian_boundary_matches_poisson(gaussian_case):
    tau = np.linspace(0, 2.5, 1024)
    direct = trace_velocity(poisson_boundary(gaussian_case, tau))
    diffs = []
    for n in (501, 1001, 2001):
        fd = extract_boundary(evolve(gaussian_case, WaveConfig(5.0, 2.5, n)))
        V = np.interp(fd.tau, direct.tau, direct.V)
        Psi = np.interp(fd.tau, direct.tau, direct.Psi)
        diffs.append((np.abs(V - fd.V).max(), np.abs(Psi - fd.Psi).max()))
    assert diffs[1][0] <= 1e-2 and diffs[1][1] <= 1e-2
    for (v0, p0), (v1, p1) in zip(diffs, diffs[1:]):
        assert v1 < v0 / 3 and p1 < p0 / 3


def test_field_velocity_is_minus_half_psi_slope(gaussian_case):
    f = evolve(gaussian_case, WaveConfig(5.0, 2.5, 2001))
    tr = extract_boundary(f)
    V_from_psi = -0.5 * SampledFunction(tr.tau, tr.Psi).derivative(tr.tau)
    assert np.abs(V_from_psi[2:-2] - tr.V[2:-2]).max() <= 1e-4


def test_store_every():
    sigma = np.linspace(0, 5, 201)
    f = evolve(hodo(sigma, np.exp(-sigma**2)), WaveConfig(5.0, 1.0, 201, store_every=5))
    assert f.psi.shape == (f.tau.size, 201)
    assert f.tau[-1] == pytest.approx(1.0)


def test_config_errors():
    sigma = np.linspace(0, 5, 201)
    h = hodo(sigma, np.exp(-sigma**2))
    with pytest.raises(ConfigError):
        evolve(h, WaveConfig(5.0, 1.0, 201, cfl=0.8))
    with pytest.raises(ConfigError):
        evolve(h, WaveConfig(6.0, 1.0, 201))
    with pytest.raises(DataError):
        evolve(hodo(sigma, 0 * sigma, 0 * sigma + 1.0), WaveConfig(5.0, 1.0, 201))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_stability_error(monkeypatch):
    sigma = np.linspace(0, 5, 201)
    h = hodo(sigma, np.exp(-sigma**2))
    real = wr._laplacian

    def blowup(psi, ds, inv_s):
        out = real(psi, ds, inv_s)
        out[5] = np.inf
        return out

    monkeypatch.setattr(wr, "_laplacian", blowup)
    with pytest.raises(StabilityError):
        evolve(h, WaveConfig(5.0, 1.0, 201))


def test_field_csv(tmp_path):
    sigma = np.linspace(0, 1, 11)
    f = evolve(hodo(sigma, np.exp(-sigma**2)), WaveConfig(1.0, 0.2, 11))
    p = tmp_path / "field.csv"
    f.to_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "# schema: runup-field/1"
    assert lines[2] == "sigma,tau,psi,phi"
    assert len(lines) == 3 + f.tau.size * f.sigma.size
    from runup.io import read_table

    t = read_table(p, "field")
    assert np.allclose(t["psi"].reshape(f.psi.shape), f.psi)
