"""Configuration validation and channel/symbol/noise generation."""

import numpy as np
import pytest

from quantmimo import (ConfigError, Modulation, alphabet, gen_channel,
                       gen_noise, gen_symbols, make_config, propagate)
from quantmimo.errors import DimensionError


def cfg_for(**kw):
    base = dict(users=4, tx_antennas_per_user=1, rx_antennas=16, bits=3,
                snr_db=10.0)
    base.update(kw)
    return make_config(**base)


class TestConfig:
    def test_large_system_noise_variance(self):
        cfg = cfg_for(users=16, tx_antennas_per_user=2, rx_antennas=64,
                      bits=3, snr_db=10.0, symbol_energy=1.0)
        assert cfg.streams == 32
        assert cfg.noise_variance == pytest.approx(0.1)

    def test_zero_db_equal_powers(self):
        cfg = cfg_for(users=1, rx_antennas=1, snr_db=0.0)
        assert cfg.noise_variance == pytest.approx(1.0)

    def test_underdetermined_rejected(self):
        with pytest.raises(ConfigError):
            cfg_for(users=4, tx_antennas_per_user=2, rx_antennas=4)

    @pytest.mark.parametrize("kw", [
        dict(users=0), dict(rx_antennas=-1), dict(bits=0), dict(bits=17),
        dict(symbol_energy=0.0), dict(packet_len=0), dict(seed=-1),
        dict(modulation="8psk"),
    ])
    def test_invalid_params_rejected(self, kw):
        with pytest.raises(ConfigError):
            cfg_for(**kw)

    def test_modulation_coercion(self):
        assert cfg_for(modulation="qpsk").modulation is Modulation.QPSK
        assert cfg_for().bits_per_symbol == 1
        assert cfg_for(modulation="qpsk").bits_per_symbol == 2


class TestChannel:
    def test_shape_and_reproducibility(self):
        cfg = cfg_for(users=1, tx_antennas_per_user=1, rx_antennas=2)
        H1 = gen_channel(cfg, np.random.default_rng(7))
        H2 = gen_channel(cfg, np.random.default_rng(7))
        assert H1.shape == (2, 1)
        assert np.iscomplexobj(H1)
        np.testing.assert_array_equal(H1, H2)

    def test_entry_statistics(self):
        cfg = cfg_for(users=16, tx_antennas_per_user=2, rx_antennas=64)
        rng = np.random.default_rng(0)
        draws = np.stack([gen_channel(cfg, rng) for _ in range(500)])
        n = draws.size
        # complex mean has std 1/sqrt(n) per real dimension
        assert abs(draws.mean()) < 3.0 / np.sqrt(n)
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(1.0, rel=0.02)


class TestSymbols:
    def test_bpsk_alphabet(self):
        cfg = cfg_for(users=2, rx_antennas=4)
        x = gen_symbols(cfg, np.random.default_rng(0), 1000)
        assert set(np.unique(x)) <= {-1.0 + 0j, 1.0 + 0j}

    def test_qpsk_scaled_alphabet(self):
        pts = alphabet(Modulation.QPSK, symbol_energy=2.0)
        expected = {-1 - 1j, -1 + 1j, 1 - 1j, 1 + 1j}
        assert set(np.round(pts, 12)) == expected

    def test_symbol_covariance(self):
        cfg = cfg_for(users=4, rx_antennas=8, modulation="qpsk",
                      symbol_energy=1.5)
        x = gen_symbols(cfg, np.random.default_rng(1), 250_000)
        R = x @ x.conj().T / x.shape[1]
        np.testing.assert_allclose(R, 1.5 * np.eye(4), atol=0.015 * 1.5)


class TestPropagate:
    def test_identity_channel_noise_free(self):
        cfg = cfg_for(users=2, rx_antennas=2, snr_db=np.inf)
        H = np.eye(2, dtype=complex)
        x = gen_symbols(cfg, np.random.default_rng(2), 10)
        np.testing.assert_allclose(propagate(H, x, cfg, np.random.default_rng(3)), x)

    def test_pure_noise_covariance(self):
        cfg = cfg_for(users=2, rx_antennas=4, snr_db=0.0)
        H = np.zeros((4, 2), dtype=complex)
        x = gen_symbols(cfg, np.random.default_rng(4), 250_000)
        y = propagate(H, x, cfg, np.random.default_rng(5))
        R = y @ y.conj().T / y.shape[1]
        np.testing.assert_allclose(R, np.eye(4), atol=0.01)

    def test_received_covariance_matches_model(self):
        cfg = cfg_for(users=2, rx_antennas=4, snr_db=10.0)
        rng = np.random.default_rng(6)
        H = gen_channel(cfg, rng)
        x = gen_symbols(cfg, rng, 1_000_000)
        y = propagate(H, x, cfg, rng)
        R_hat = y @ y.conj().T / y.shape[1]
        R = H @ H.conj().T + cfg.noise_variance * np.eye(4)
        assert np.linalg.norm(R_hat - R) / np.linalg.norm(R) < 0.02

    def test_dimension_mismatch(self):
        cfg = cfg_for(users=2, rx_antennas=4)
        with pytest.raises(DimensionError):
            propagate(np.zeros((3, 2)), np.zeros(2), cfg, np.random.default_rng(0))
        with pytest.raises(DimensionError):
            gen_channel_bad = np.zeros((4, 2))
            propagate(gen_channel_bad, np.zeros(3), cfg, np.random.default_rng(0))
