"""dectlink: link-budget and link-distance planning for DECT-2020 NR class radios."""

from .budget import (
    LinkBudget,
    ReliabilityThresholds,
    ThresholdUnreachable,
    allowed_path_loss_db,
    distance_for_path_loss,
    empirical_pl,
    is_reliable,
    max_link_distance,
    noise_floor_dbm,
    predict_rx_power_dbm,
    predict_snr_db,
)
from .campaign import (
    CampaignRecord,
    LocationCapture,
    MeasurementSample,
    load_capture,
    max_reliable_distance,
    mean_power_db,
    sample_std_db,
    success_rate_pcc,
    success_rate_pdc,
    summarize,
)
from .config import CONFIG_ENV_VAR, RunConfig, load_config
from .fitting import (
    FitResult,
    LogDistanceModel,
    fit_general,
    fit_log_distance,
    fit_log_distance_iterative,
    log_distance_curve,
)
from .propagation import (
    MODEL_KINDS,
    AntennaGeometry,
    Distance,
    Frequency,
    HataEnvironment,
    PathLossModel,
    ValidityFlag,
    cost231_hata,
    evaluate_sweep,
    fspl,
    okumura_hata,
    pl_inf_los,
    pl_inh_los,
    two_ray,
    two_ray_crossover_m,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaGeometry",
    "CampaignRecord",
    "CONFIG_ENV_VAR",
    "Distance",
    "FitResult",
    "Frequency",
    "HataEnvironment",
    "LinkBudget",
    "LocationCapture",
    "LogDistanceModel",
    "MeasurementSample",
    "MODEL_KINDS",
    "PathLossModel",
    "ReliabilityThresholds",
    "RunConfig",
    "ThresholdUnreachable",
    "ValidityFlag",
    "allowed_path_loss_db",
    "cost231_hata",
    "distance_for_path_loss",
    "empirical_pl",
    "evaluate_sweep",
    "fit_general",
    "fit_log_distance",
    "fit_log_distance_iterative",
    "fspl",
    "is_reliable",
    "load_capture",
    "load_config",
    "log_distance_curve",
    "max_link_distance",
    "max_reliable_distance",
    "mean_power_db",
    "noise_floor_dbm",
    "okumura_hata",
    "pl_inf_los",
    "pl_inh_los",
    "predict_rx_power_dbm",
    "predict_snr_db",
    "sample_std_db",
    "success_rate_pcc",
    "success_rate_pdc",
    "summarize",
    "two_ray",
    "two_ray_crossover_m",
]
