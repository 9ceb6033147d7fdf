import logging

import numpy as np
import pytest
from scipy import special

from runup import (
    BreakingError,
    DataError,
    DirectConfig,
    DomainError,
    InversionConfig,
    PhysicalInitialData,
    SampledFunction,
    ShorelineRecord,
    ShorelineTrace,
    abel_forward,
    differentiate_record,
    direct_solution,
    invert_record,
    recover_initial,
    trace_to_record,
)
from runup.inversion import local_polyfit

from conftest import gaussian


def rel_linf(initial, truth_fn, amp):
    xs = initial.eta0.grid
    return np.abs(initial.eta0.values - truth_fn(xs)).max() / amp


class TestDifferentiate:
    t = np.linspace(0, 5, 101)

    def test_linear_exact(self):
        v = differentiate_record(self.t, 0.3 * self.t)
        assert np.allclose(v, 0.3, atol=1e-12, rtol=0)

    def test_quadratic_exact(self):
        v = differentiate_record(self.t, self.t**2, InversionConfig(smooth_degree=2))
        assert np.allclose(v, 2 * self.t, atol=1e-10, rtol=0)

    def test_cubic_exact_on_irregular_grid(self):
        rng = np.random.default_rng(1)
        t = np.sort(rng.uniform(0, 3, 60))
        val, der = local_polyfit(t, t**3 - t, window=7, degree=3)
        assert np.allclose(val, t**3 - t, atol=1e-10)
        assert np.allclose(der, 3 * t**2 - 1, atol=1e-8)

    def test_noisy_shoreline_example(self):
        rng = np.random.default_rng(20240611)
        t = np.arange(0.0, 10.0 + 1e-9, 0.01)
        x0 = -np.cos(t) + np.sin(t) ** 2 / 8
        v_exact = np.sin(t) + np.sin(t) * np.cos(t) / 4
        noisy = x0 + rng.uniform(-1e-4, 1e-4, t.size)
        v = differentiate_record(t, noisy)
        assert np.sqrt(np.mean((v - v_exact) ** 2)) <= 5e-3

    def test_too_few_samples(self):
        with pytest.raises(DataError):
            differentiate_record(self.t[:5], self.t[:5])

    def test_config_validation(self):
        with pytest.raises(DataError):
            InversionConfig(smooth_window=10)
        with pytest.raises(DataError):
            InversionConfig(smooth_window=3, smooth_degree=3)
        with pytest.raises(DataError):
            InversionConfig(smooth_degree=4)
        with pytest.raises(DataError):
            InversionConfig(n_tau=32)


def test_zero_record_gives_zero_profile():
    t = np.linspace(0, 4, 200)
    d = recover_initial(ShorelineRecord(t, 0 * t))
    assert np.all(d.eta0.values == 0)
    assert d.eta0.domain == pytest.approx((0.0, (t[-1] / 2) ** 2))


def test_analytic_cosine_record():
    a = 0.01
    tau = np.linspace(0, 3, 2001)
    rec = trace_to_record(ShorelineTrace(tau, a * np.cos(2 * tau), a * np.sin(2 * tau)))
    res = invert_record(rec, InversionConfig(smooth_window=None))
    psi0 = res.hodograph.psi0
    # step 2 is exactly (2/pi) A of the resampled trace
    expect = (2 / np.pi) * abel_forward(res.trace.psi_function(), psi0.grid).values
    assert np.array_equal(psi0.values, expect)
    assert np.abs(psi0.values - a * special.j0(2 * psi0.grid)).max() <= 1e-3 * a


@pytest.fixture(scope="module")
def gaussian_record(request):
    x = np.linspace(-0.05, 6.0, 4001)
    d = PhysicalInitialData(SampledFunction(x, gaussian(x), name="eta0"))
    return direct_solution(d, DirectConfig()).record


def test_round_trip(gaussian_record):
    res = invert_record(gaussian_record)
    assert rel_linf(res.initial, gaussian, 0.01) <= 1e-2
    assert res.diagnostics["velocity_source"] == "record"
    assert res.diagnostics["trace_reproduction_max"] <= 1e-8


def test_round_trip_without_velocity(gaussian_record):
    rec = ShorelineRecord(gaussian_record.t, gaussian_record.x0)
    res = invert_record(rec)
    assert res.diagnostics["velocity_source"] == "differentiated"
    assert rel_linf(res.initial, gaussian, 0.01) <= 1e-2


def test_idempotent_conditioning(gaussian_record):
    off = recover_initial(gaussian_record, InversionConfig(smooth_window=None))
    minimal = recover_initial(gaussian_record, InversionConfig(smooth_window=3))
    assert np.abs(off.eta0.values - minimal.eta0.values).max() <= 1e-6


def test_amplitude_linearity():
    x = np.linspace(-0.05, 6.0, 4001)
    out = []
    for a in (0.01, 0.005):
        d = PhysicalInitialData(SampledFunction(x, gaussian(x, a=a)))
        rec = direct_solution(d).record
        grid = np.linspace(0.0, 5.0, 400)
        out.append(recover_initial(rec, InversionConfig(x_grid=grid)).eta0.values)
    assert np.abs(out[1] - 0.5 * out[0]).max() <= 0.01 * np.abs(0.5 * out[0]).max()


def test_coverage_is_data_determined(gaussian_record):
    res = invert_record(gaussian_record)
    psi0 = res.hodograph.psi0
    tmax = res.sigma_max
    lo, hi = res.covered_x
    assert lo == -psi0.values[0]
    assert hi == pytest.approx(tmax**2 - psi0.values[-1], rel=1e-14)
    assert res.initial.eta0.domain == (lo, hi)
    with pytest.raises(DomainError, match="determine eta0 only on"):
        recover_initial(gaussian_record, InversionConfig(x_grid=np.linspace(0, hi + 0.1, 10)))


def test_truncated_event_is_reported(gaussian_record):
    n = gaussian_record.t.size // 3
    rec = ShorelineRecord(gaussian_record.t[:n], gaussian_record.x0[:n], gaussian_record.v0[:n])
    res = invert_record(rec)
    assert res.diagnostics["tail_ratio"] > 0.1
    assert res.covered_x[1] < 1.0


def test_velocity_mismatch_warning(gaussian_record, caplog):
    rec = ShorelineRecord(gaussian_record.t, gaussian_record.x0, 1.5 * gaussian_record.v0)
    with caplog.at_level(logging.WARNING):
        res = invert_record(rec)
    assert res.diagnostics["velocity_mismatch_rms"] > 0.05
    assert "disagrees" in caplog.text


def test_record_must_start_at_rest():
    t = np.linspace(0.5, 4, 100)
    with pytest.raises(DataError, match="quiescent"):
        recover_initial(ShorelineRecord(t, 0 * t))


def test_breaking_record_rejected():
    t = np.linspace(0, 4, 400)
    v = 0.6 * np.sin(3 * t)
    with pytest.raises(BreakingError):
        recover_initial(ShorelineRecord(t, 0 * t, v))
