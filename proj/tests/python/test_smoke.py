"""Smoke tests for the qlni extension module."""

import math

import pytest

import qlni


def test_wavelength_frequency_conversion():
    pump = qlni.Wavelength.from_nm(780.3)
    omega = qlni.wavelength_to_omega(pump)
    assert omega == pytest.approx(2 * math.pi * 299792458.0 / 780.3e-9, rel=1e-14)
    # degeneracy: twice the pump wavelength carries exactly half the frequency
    assert qlni.wavelength_to_omega(qlni.Wavelength.from_nm(1560.6)) == omega / 2


def test_idler_and_detuning():
    pump = qlni.Wavelength.from_nm(780.3)
    idler = qlni.idler_wavelength(pump, qlni.Wavelength.from_nm(1535.0))
    assert idler.nm == pytest.approx(1587.0683715383593, rel=1e-12)
    d_s = qlni.detuning_from_degeneracy(qlni.Wavelength.from_nm(1535.0), pump)
    d_i = qlni.detuning_from_degeneracy(idler, pump)
    assert d_s + d_i == pytest.approx(0.0, abs=1e-9 * abs(d_s))


def test_dispersion_conversion():
    lam0 = qlni.Wavelength.from_nm(1560.6)
    beta2 = qlni.beta2_from_d(-82.08, lam0)
    assert beta2 == pytest.approx(1.061255567527276e-25, rel=1e-12)
    assert qlni.d_from_beta2(beta2, lam0) == pytest.approx(-82.08, rel=1e-12)


def test_super_resolution_fringes():
    for n in (1, 2, 3, 4):
        spec = qlni.ConversionSpec(qlni.ConversionKind.HarmonicN, n, 0.5)
        assert qlni.fringe_period(spec) == pytest.approx(2 * math.pi / n, rel=1e-6)
    spec = qlni.ConversionSpec(qlni.ConversionKind.HarmonicN, 2, 0.9)
    assert qlni.scan_visibility(spec) == pytest.approx(0.6, abs=1e-9)


def test_synthesize_fit_round_trip():
    cfg = qlni.ScenarioConfig.defaults()
    cfg.sweep.n_samples = 2000
    model = cfg.synthesis_model()
    trace = qlni.synthesize(model)
    assert len(trace) == 2000

    guess = qlni.initial_guess(trace, model.fiber.reference, model.dfg, model.sfg)
    result = qlni.fit(trace, model.fiber.reference, guess)
    assert result.converged
    cd = qlni.extract_cd(result, model.fiber.length_m, model.fiber.reference)
    assert cd.d_ps_nm_km == pytest.approx(-82.08, rel=1e-9)


def test_monte_carlo_deterministic():
    cfg = qlni.ScenarioConfig.defaults()
    cfg.sweep.n_samples = 2000
    model = cfg.synthesis_model()
    noise = qlni.NoiseConfig(additive_sigma=0.01)
    a = qlni.monte_carlo(model, noise, 12, 7, threads=2)
    b = qlni.monte_carlo(model, noise, 12, 7, threads=1)
    assert a.valid and b.valid
    assert a.cd_values == b.cd_values
    assert a.mean == pytest.approx(a.truth_d_ps_nm_km, abs=5 * max(a.sem, 1e-9))


def test_flat_trace_raises():
    cfg = qlni.ScenarioConfig.defaults()
    cfg.sweep.n_samples = 2000
    cfg.fiber.beta2 = 0.0
    model = cfg.synthesis_model()
    trace = qlni.synthesize(model)
    with pytest.raises(qlni.Error):
        qlni.initial_guess(trace, model.fiber.reference, model.dfg, model.sfg)


def test_property_suite():
    checks = qlni.run_property_suite()
    assert all(c.pass_ for c in checks)
    faulty = qlni.run_property_suite(1.01)
    assert not all(c.pass_ for c in faulty)
