import time

import numpy as np

from runup.abel import DEFAULT_QUADRATURE
from runup.selftest import Check, _check, gaussian_profile, kernel_oracle, run_selftest
from runup.kernels import kernel_k0, kernel_k2, kernel_k2_ds


def test_all_checks_pass():
    checks = run_selftest()
    assert len(checks) == 10
    assert all(isinstance(c, Check) for c in checks)
    failed = [c.name for c in checks if not c.passed]
    assert not failed
    names = {c.name for c in checks}
    assert {"abel.analytic_anchors", "kernels.oracle", "waveeq.constant_state"} <= names


def test_negative_control_fails_abel_checks():
    checks = {c.name: c for c in run_selftest(DEFAULT_QUADRATURE.perturbed(0.05))}
    for name in ("abel.analytic_anchors", "abel.roundtrip_gauss",
                 "abel.bessel_anchor", "inversion.roundtrip_gaussian"):
        assert not checks[name].passed, name
    assert checks["kernels.oracle"].passed
    assert checks["direct.zero_profile"].passed


def test_kernel_oracle_matches_frozen_values():
    assert abs(kernel_oracle(1.0, 0.5, "k0") - 2.1565156474996432) <= 1e-13
    assert abs(kernel_oracle(1.0, 0.5, "k2") - 1.2110560275684595) <= 1e-13
    assert abs(kernel_oracle(1.0, 0.5, "k2_ds") - 0.63030641328745581) <= 1e-13
    for which, fn in (("k0", kernel_k0), ("k2", kernel_k2), ("k2_ds", kernel_k2_ds)):
        assert abs(fn(2.0, 0.3) - kernel_oracle(2.0, 0.3, which)) <= 1e-12


def test_gaussian_profile_brackets_shoreline():
    p = gaussian_profile()
    x = p.eta0.grid
    assert x[0] < 0 < x[-1]
    assert p.eta0.values.max() <= 0.01


def test_check_nan_fails():
    assert not _check("x", float("nan"), 1.0, time.perf_counter()).passed
