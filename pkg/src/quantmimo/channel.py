"""Channel, symbol and noise generation for the flat-fading uplink y = Hx + n."""

import numpy as np

from .config import Modulation, SystemConfig
from .errors import DimensionError


def alphabet(modulation: Modulation, symbol_energy: float = 1.0) -> np.ndarray:
    """Constellation points scaled so E|x|^2 = symbol_energy."""
    if modulation is Modulation.BPSK:
        return np.sqrt(symbol_energy) * np.array([-1.0, 1.0], dtype=complex)
    a = np.sqrt(symbol_energy / 2.0)
    return a * np.array([-1 - 1j, -1 + 1j, 1 - 1j, 1 + 1j])


def gen_channel(cfg: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw H with i.i.d. CN(0, 1) entries, shape (N_R, K*N_T)."""
    shape = (cfg.rx_antennas, cfg.streams)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def gen_symbols(cfg: SystemConfig, rng: np.random.Generator,
                n_symbols: int | None = None) -> np.ndarray:
    """
    Uniform i.i.d. draws from the modulation alphabet, scaled so that
    E[x x^H] = symbol_energy * I.

    Returns a length-K*N_T vector, or a (K*N_T, n_symbols) block when
    n_symbols is given.
    """
    points = alphabet(cfg.modulation, cfg.symbol_energy)
    shape = (cfg.streams,) if n_symbols is None else (cfg.streams, n_symbols)
    return points[rng.integers(0, len(points), size=shape)]


def gen_noise(cfg: SystemConfig, rng: np.random.Generator,
              n_symbols: int | None = None) -> np.ndarray:
    """CN(0, sigma_n^2 I) receiver noise."""
    shape = (cfg.rx_antennas,) if n_symbols is None else (cfg.rx_antennas, n_symbols)
    scale = np.sqrt(cfg.noise_variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def propagate(H: np.ndarray, x: np.ndarray, cfg: SystemConfig,
              rng: np.random.Generator) -> np.ndarray:
    """Received signal y = Hx + n with n ~ CN(0, sigma_n^2 I)."""
    if H.shape != (cfg.rx_antennas, cfg.streams):
        raise DimensionError(f"channel shape {H.shape} does not match config "
                             f"({cfg.rx_antennas}, {cfg.streams})")
    if x.shape[0] != cfg.streams:
        raise DimensionError(f"symbol vector length {x.shape[0]} != {cfg.streams}")
    n_symbols = None if x.ndim == 1 else x.shape[1]
    return H @ x + gen_noise(cfg, rng, n_symbols)
