"""Tests for readout SNR and the QND-degradation rates."""

import math

import pytest
from pydantic import ValidationError

from src.dispersive import analytic_coefficients, second_order_coefficients
from src.metrics import (
    NormalizationError,
    OneOverFNoise,
    SnrConfig,
    SpectrumError,
    WhiteNoise,
    cavity_pull,
    dressed_decay_rates,
    dressed_dephasing_rates,
    dressed_detunings,
    gamma_1_from_t1,
    lowering_amplitudes,
    photon_number,
    pointer_separation,
    purcell_rates,
    rates_vs_power,
    snr_curve,
)
from src.model import MlsSpec, ModelError, SystemSpec, build_transmon_spec
from src.response import SolverOptions

# two-level mixing at n = 0: Δ = -1000 MHz, g = 100 MHz
SPLIT = math.sqrt(1000.0**2 + 4 * 100.0**2)
SIN2_THETA = 0.5 * (1 - 1000.0 / SPLIT)
SIN2_2THETA = 4 * 100.0**2 / SPLIT**2


def shifted(spec: SystemSpec, offset: float) -> SystemSpec:
    mls = MlsSpec(level_freqs=tuple(w + offset for w in spec.mls.level_freqs), couplings=spec.mls.couplings)
    return SystemSpec(mls=mls, omega_r=spec.omega_r, kappa=spec.kappa)


class TestSnr:
    def test_gamma_1_from_t1(self):
        assert gamma_1_from_t1(1.0) == pytest.approx(1 / (2 * math.pi))
        with pytest.raises(ModelError):
            gamma_1_from_t1(0.0)

    def test_cavity_pull(self, transmon2):
        coeffs = analytic_coefficients(transmon2)
        assert cavity_pull(coeffs, 0.0) == coeffs.chi_prime
        assert cavity_pull(coeffs, 10.0) == pytest.approx(-19.8 + 0.2 * 10)
        with pytest.raises(ModelError):
            cavity_pull(coeffs, -1.0)

    def test_optimal_linewidth_identity(self, transmon2):
        coeffs = second_order_coefficients(transmon2)
        gamma_1 = gamma_1_from_t1(1.0)
        cfg = SnrConfig(eta=0.7, gamma_1=gamma_1, kappa_over_2chi=0.5)
        for point in snr_curve(coeffs, cfg, [0.5, 3.0, 20.0]):
            expected = 2 * 0.7 * point.n_bar * abs(coeffs.chi_prime) / gamma_1
            assert point.snr == pytest.approx(expected, rel=1e-12)

    def test_empty_cavity_has_no_signal(self, transmon2):
        cfg = SnrConfig(gamma_1=1.0)
        point = snr_curve(analytic_coefficients(transmon2), cfg, [0.0])[0]
        assert point.alpha_sep_sq == 0.0
        assert point.snr == 0.0

    def test_pointer_separation(self):
        assert pointer_separation(2.0, 2.0, 5.0) == pytest.approx(10.0)
        assert pointer_separation(0.0, 0.0, 5.0) == 0.0

    def test_vanishing_pull_is_rejected(self, transmon2):
        coeffs = second_order_coefficients(transmon2).model_copy(update={"chi_prime": 0.0})
        with pytest.raises(ModelError):
            snr_curve(coeffs, SnrConfig(gamma_1=1.0), [1.0])

    def test_config_bounds(self):
        with pytest.raises(ValidationError):
            SnrConfig(eta=1.5, gamma_1=1.0)
        with pytest.raises(ValidationError):
            SnrConfig(gamma_1=0.0)


class TestNoise:
    def test_one_over_f(self):
        assert OneOverFNoise().ratio(1000.0) == pytest.approx(1e-9)
        assert OneOverFNoise().ratio(-2e-6) == pytest.approx(0.5)

    def test_one_over_f_undefined_at_zero(self):
        with pytest.raises(SpectrumError):
            OneOverFNoise().ratio(0.0)

    def test_white(self):
        assert WhiteNoise(level=3.0).ratio(0.0) == 3.0
        assert WhiteNoise().ratio(1e6) == 1.0


class TestPurcell:
    def test_weak_drive_limit(self, transmon2):
        rates = purcell_rates(transmon2, 0)
        assert rates.rate == pytest.approx(SIN2_THETA, rel=1e-9)
        assert rates.rate == pytest.approx(0.01, rel=0.05)
        assert rates.leakage == 0.0

    def test_multilevel_zero_photons_matches_two_level(self, transmon2, transmon6):
        assert purcell_rates(transmon6, 0).rate == pytest.approx(purcell_rates(transmon2, 0).rate, rel=1e-12)

    def test_uncoupled(self, linear_cavity):
        rates = purcell_rates(linear_cavity, 5)
        assert rates.rate == 0.0
        assert rates.leakage == 0.0

    def test_suppressed_at_large_photon_number(self, transmon2):
        values = [purcell_rates(transmon2, n).rate for n in (100, 1000, 10000)]
        assert values[0] > values[1] > values[2]

    @pytest.mark.parametrize("n", [0, 3, 50])
    def test_amplitudes_sum_to_photon_number(self, transmon6, n):
        amplitudes = lowering_amplitudes(transmon6, n)
        assert float((amplitudes**2).sum()) == pytest.approx(photon_number(transmon6, n), rel=1e-9)

    def test_photon_number_of_dressed_state(self, transmon2):
        # bar(0,1) holds the photon only through its |1,0⟩ admixture
        assert photon_number(transmon2, 0) == pytest.approx(SIN2_THETA, rel=1e-9)

    def test_needs_integer_photons(self, transmon6):
        with pytest.raises(ModelError):
            purcell_rates(transmon6, 2.5)
        with pytest.raises(ModelError):
            purcell_rates(transmon6, -1)


class TestDressedDecay:
    def test_bare_limit(self):
        spec = SystemSpec(mls=MlsSpec(level_freqs=(0.0, 6000.0, 11750.0), couplings=(1e-3, 1.4e-3)), omega_r=7000)
        rates = dressed_decay_rates(spec, 0)
        assert rates.rate == pytest.approx(1.0, rel=1e-9)
        assert rates.leakage == 0.0

    def test_needs_coupling_normalisation(self, linear_cavity):
        with pytest.raises(NormalizationError):
            dressed_decay_rates(linear_cavity, 0)

    def test_leakage_appears_with_photons(self, transmon6):
        assert dressed_decay_rates(transmon6, 0).leakage == 0.0
        assert dressed_decay_rates(transmon6, 20).leakage > 0.0


class TestDressedDephasing:
    def test_white_noise_two_level_value(self, transmon6):
        rates = dressed_dephasing_rates(transmon6, 0, noise=WhiteNoise())
        # default transmon table: eps_0/eps_1 = 1/100
        assert rates.rate == pytest.approx(0.99**2 * SIN2_2THETA / 4, rel=1e-9)
        assert rates.leakage == 0.0

    def test_one_over_f_weights_by_dressed_detuning(self, transmon6):
        white = dressed_dephasing_rates(transmon6, 0, noise=WhiteNoise())
        pink = dressed_dephasing_rates(transmon6, 0)
        assert pink.rate == pytest.approx(white.rate * 1e-6 / SPLIT, rel=1e-9)

    def test_dressed_detunings(self, transmon6):
        det = dressed_detunings(transmon6, 0)
        assert det[1] == 0.0
        assert abs(det[0]) == pytest.approx(SPLIT, rel=1e-12)

    def test_uncoupled_ladder_has_no_dephasing(self, linear_cavity):
        rates = dressed_dephasing_rates(linear_cavity, 4, dispersions=(0.1, 1.0, 10.0))
        assert rates.rate == 0.0
        assert rates.leakage == 0.0

    def test_short_dispersion_table(self, transmon6):
        with pytest.raises(ModelError):
            dressed_dephasing_rates(transmon6, 5, dispersions=(0.1, 1.0, 10.0))


class TestGauge:
    @pytest.mark.parametrize("n", [0, 4, 30])
    def test_common_level_shift_leaves_rates_unchanged(self, transmon6, n):
        moved = shifted(transmon6, 500.0)
        for fn in (purcell_rates, dressed_decay_rates, dressed_dephasing_rates):
            before, after = fn(transmon6, n), fn(moved, n)
            assert after.rate == pytest.approx(before.rate, rel=1e-6, abs=1e-15)
            assert after.leakage == pytest.approx(before.leakage, rel=1e-6, abs=1e-15)


class TestRatesVsPower:
    def test_weak_drive_rows(self, transmon6, solver):
        table = rates_vs_power(transmon6, 7000, [-20.0, -10.0, 0.0], options=solver)
        assert [row.power_db for row in table.rows] == [-20.0, -10.0, 0.0]
        assert table.column("n_photons") == [0, 0, 0]
        assert table.all_converged
        expected = purcell_rates(transmon6, 0).rate
        assert table.column("gamma_kappa") == pytest.approx([expected] * 3)

    def test_photon_number_grows_along_the_sweep(self, transmon6, solver):
        table = rates_vs_power(transmon6, 7000, [0.0, 10.0, 20.0, 30.0], options=solver)
        photons = table.column("n_photons")
        assert photons == sorted(photons)
        assert photons[-1] > 0


@pytest.fixture(scope="module")
def default_sweep_rates():
    """Rates along the default -20..60 dB up-sweep of the six-level transmon."""
    spec = SystemSpec(mls=build_transmon_spec(6000, 5750, 100, 6), omega_r=7000)
    options = SolverOptions(damping=0.5, max_iterations=100_000, tolerance=1e-10, max_halvings=4)
    powers = [-20.0 + 0.5 * k for k in range(161)]
    return rates_vs_power(spec, 7000, powers, options=options)


class TestDefaultSweep:
    def test_sweep_converges_to_a_large_photon_number(self, default_sweep_rates):
        assert default_sweep_rates.all_converged
        assert default_sweep_rates.rows[-1].n_photons > 1e5

    def test_purcell_rate_never_increases(self, default_sweep_rates):
        rates = default_sweep_rates.column("gamma_kappa")
        assert rates[0] == pytest.approx(SIN2_THETA, rel=1e-3)
        for before, after in zip(rates, rates[1:]):
            assert after <= before * (1 + 1e-9)

    def test_total_decay_exceeds_bare_decay_at_high_power(self, default_sweep_rates):
        last = default_sweep_rates.rows[-1]
        assert last.gamma_1d < 1.0
        assert last.gamma_1d + last.gamma_1d_leak > 1.0

    def test_dephasing_ranges(self, default_sweep_rates):
        assert 0.1 <= max(default_sweep_rates.column("gamma_d")) <= 1e4
        assert 1.0 <= max(default_sweep_rates.column("gamma_d_leak")) <= 1e5
        last = default_sweep_rates.rows[-1]
        assert last.gamma_d_leak > last.gamma_d
