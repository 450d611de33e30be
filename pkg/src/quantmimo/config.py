"""Scenario configuration for the quantized MU-MIMO uplink."""

from dataclasses import dataclass, field
from enum import Enum

from .errors import ConfigError


class Modulation(str, Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"


@dataclass(frozen=True)
class SystemConfig:
    """
    All parameters of one simulation scenario.

    SNR convention: snr_db = 10*log10(symbol_energy / noise_variance),
    i.e. per-transmit-antenna symbol energy over per-receive-antenna
    noise variance.
    """
    users: int                 # K
    tx_antennas_per_user: int  # N_T
    rx_antennas: int           # N_R
    bits: int                  # ADC resolution b (per real dimension)
    snr_db: float
    symbol_energy: float = 1.0   # sigma_x^2 per transmit antenna
    packet_len: int = 100        # symbols per antenna per packet
    n_packets: int = 10000
    seed: int = 0
    modulation: Modulation = Modulation.BPSK

    @property
    def streams(self) -> int:
        """Total number of spatial streams K*N_T."""
        return self.users * self.tx_antennas_per_user

    @property
    def noise_variance(self) -> float:
        """sigma_n^2 derived from snr_db under the declared SNR convention."""
        return self.symbol_energy * 10.0 ** (-self.snr_db / 10.0)

    @property
    def bits_per_symbol(self) -> int:
        return 1 if self.modulation is Modulation.BPSK else 2


def make_config(**raw) -> SystemConfig:
    """Validate raw key/value parameters and build a SystemConfig."""
    if "modulation" in raw and not isinstance(raw["modulation"], Modulation):
        try:
            raw["modulation"] = Modulation(str(raw["modulation"]).lower())
        except ValueError:
            raise ConfigError(f"unsupported modulation {raw['modulation']!r}")
    cfg = SystemConfig(**raw)

    for name in ("users", "tx_antennas_per_user", "rx_antennas",
                 "packet_len", "n_packets"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name} must be a positive integer, got {getattr(cfg, name)}")
    if not 1 <= cfg.bits <= 16:
        raise ConfigError(f"bits must be in [1, 16], got {cfg.bits}")
    if cfg.symbol_energy <= 0:
        raise ConfigError(f"symbol_energy must be > 0, got {cfg.symbol_energy}")
    if cfg.seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    if cfg.rx_antennas < cfg.streams:
        raise ConfigError(
            f"rx_antennas ({cfg.rx_antennas}) must be >= users * tx_antennas_per_user "
            f"({cfg.streams}) for overdetermined detection")
    return cfg
