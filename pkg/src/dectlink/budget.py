"""Link-budget arithmetic and reachable-distance solving.

Ties a transmit-side power budget to a path-loss model and a set of
reliability thresholds, answering two questions: what RX power / SNR do we
predict at a given distance, and how far can the link stretch before a
threshold is violated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .propagation import PathLossModel

ENVIRONMENTS = ("indoor", "outdoor")

# Thermal noise density at 290 K, dBm/Hz.
THERMAL_NOISE_DBM_HZ = -174.0


class ThresholdUnreachable(Exception):
    """No positive distance satisfies the requested threshold."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power plus per-side correction terms and receiver noise profile.

    Corrections fold antenna gain and cable loss into one signed dB term per
    side (gain minus loss); the default +1 dB per side models a small
    monopole with negligible feed loss.
    """

    p_tx_dbm: float = 0.0
    side_correction_tx_db: float = 1.0
    side_correction_rx_db: float = 1.0
    bandwidth_hz: float = 1.728e6
    noise_figure_db: float = 10.0

    def __post_init__(self) -> None:
        _require_finite("p_tx_dbm", self.p_tx_dbm)
        _require_finite("side_correction_tx_db", self.side_correction_tx_db)
        _require_finite("side_correction_rx_db", self.side_correction_rx_db)
        bw = float(self.bandwidth_hz)
        if not math.isfinite(bw) or bw <= 0.0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz!r}")
        _require_finite("noise_figure_db", self.noise_figure_db)

    @property
    def total_correction_db(self) -> float:
        return self.side_correction_tx_db + self.side_correction_rx_db


@dataclass(frozen=True)
class ReliabilityThresholds:
    """Floors a link must clear to count as reliable.

    Success rate is compared strictly: sr must exceed min_success_rate, so a
    link sitting exactly on the floor does not qualify.
    """

    min_success_rate: float = 90.0
    rssi_floor_indoor_dbm: float = -90.0
    rssi_floor_outdoor_dbm: float = -95.0
    snr_floor_indoor_db: float = 11.5
    snr_floor_outdoor_db: float = 13.5

    def __post_init__(self) -> None:
        sr = float(self.min_success_rate)
        if not math.isfinite(sr) or not 0.0 <= sr <= 100.0:
            raise ValueError(f"min_success_rate must be in [0, 100], got {self.min_success_rate!r}")
        for name in (
            "rssi_floor_indoor_dbm",
            "rssi_floor_outdoor_dbm",
            "snr_floor_indoor_db",
            "snr_floor_outdoor_db",
        ):
            _require_finite(name, getattr(self, name))

    def rssi_floor_dbm(self, environment: str) -> float:
        _check_environment(environment)
        return self.rssi_floor_indoor_dbm if environment == "indoor" else self.rssi_floor_outdoor_dbm

    def snr_floor_db(self, environment: str) -> float:
        _check_environment(environment)
        return self.snr_floor_indoor_db if environment == "indoor" else self.snr_floor_outdoor_db


def _check_environment(environment: str) -> None:
    if environment not in ENVIRONMENTS:
        raise ValueError(f"environment must be one of {ENVIRONMENTS}, got {environment!r}")


def is_reliable(success_rate_pct: float, thresholds: ReliabilityThresholds) -> bool:
    """True iff the success rate strictly exceeds the configured minimum."""
    sr = _require_finite("success_rate_pct", success_rate_pct)
    if not 0.0 <= sr <= 100.0:
        raise ValueError(f"success_rate_pct must be in [0, 100], got {success_rate_pct!r}")
    return sr > thresholds.min_success_rate


def empirical_pl(p_tx_dbm: float, p_rx_dbm: float, budget: LinkBudget) -> float:
    """Measured path loss from TX and RX powers plus both side corrections."""
    _require_finite("p_tx_dbm", p_tx_dbm)
    _require_finite("p_rx_dbm", p_rx_dbm)
    return p_tx_dbm - p_rx_dbm + budget.total_correction_db


def noise_floor_dbm(budget: LinkBudget) -> float:
    """Receiver noise floor: -174 + 10 log10(BW) + NF, in dBm."""
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(budget.bandwidth_hz) + budget.noise_figure_db


def predict_rx_power_dbm(budget: LinkBudget, model: PathLossModel, d_m: float) -> float:
    """Predicted RX power at d_m: p_tx + corrections - model path loss."""
    return budget.p_tx_dbm + budget.total_correction_db - model.path_loss(d_m)


def predict_snr_db(budget: LinkBudget, model: PathLossModel, d_m: float) -> float:
    """Predicted SNR at d_m: predicted RX power minus the noise floor."""
    return predict_rx_power_dbm(budget, model, d_m) - noise_floor_dbm(budget)


# Solver bracket in meters; generous on both ends so any plausible radio
# link lands inside it.
_SOLVE_D_MIN_M = 0.1
_SOLVE_D_MAX_M = 1.0e6
_SOLVE_LOG_TOL = 1.0e-6


def distance_for_path_loss(model: PathLossModel, target_pl_db: float) -> float:
    """Largest distance (m) where model path loss stays <= target_pl_db.

    All supported models are strictly increasing in distance, so this is
    the unique crossing point, found by bisection on log10(distance).
    Raises ThresholdUnreachable when even the minimum bracket distance
    already exceeds the target.
    """
    target_pl_db = _require_finite("target_pl_db", target_pl_db)

    lo = _SOLVE_D_MIN_M
    if model.path_loss(lo) > target_pl_db:
        raise ThresholdUnreachable(
            f"path loss at {lo} m already {model.path_loss(lo):.2f} dB, "
            f"above the allowed {target_pl_db:.2f} dB"
        )

    # Expand geometrically until the target is bracketed or the cap is hit.
    hi = lo
    while hi < _SOLVE_D_MAX_M and model.path_loss(hi) <= target_pl_db:
        hi = min(hi * 10.0, _SOLVE_D_MAX_M)
    if model.path_loss(hi) <= target_pl_db:
        return hi

    log_lo = math.log10(lo)
    log_hi = math.log10(hi)
    while log_hi - log_lo > _SOLVE_LOG_TOL:
        log_mid = 0.5 * (log_lo + log_hi)
        if model.path_loss(10.0**log_mid) <= target_pl_db:
            log_lo = log_mid
        else:
            log_hi = log_mid
    return 10.0**log_lo


def allowed_path_loss_db(
    budget: LinkBudget,
    thresholds: ReliabilityThresholds,
    environment: str,
    criterion: str = "rssi",
) -> float:
    """Largest tolerable path loss before the given criterion's floor is hit.

    criterion "rssi" budgets against the environment's RSSI floor, "snr"
    against the SNR floor sitting on top of the receiver noise floor.
    """
    _check_environment(environment)
    if criterion == "rssi":
        floor = thresholds.rssi_floor_dbm(environment)
        return budget.p_tx_dbm + budget.total_correction_db - floor
    if criterion == "snr":
        floor = thresholds.snr_floor_db(environment)
        return budget.p_tx_dbm + budget.total_correction_db - (noise_floor_dbm(budget) + floor)
    raise ValueError(f"criterion must be 'rssi' or 'snr', got {criterion!r}")


def max_link_distance(
    budget: LinkBudget,
    model: PathLossModel,
    thresholds: ReliabilityThresholds,
    environment: str,
    criterion: str = "rssi",
) -> float:
    """Max distance (m) keeping predicted RX power / SNR at or above its floor.

    Raises ThresholdUnreachable when no distance qualifies.
    """
    return distance_for_path_loss(
        model, allowed_path_loss_db(budget, thresholds, environment, criterion)
    )
