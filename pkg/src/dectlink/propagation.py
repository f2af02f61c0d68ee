"""Path-loss models for DECT-2020 NR class link planning.

Implements the classic free-space, 3GPP indoor (InH-LOS / InF-LOS),
two-ray ground-reflection, Okumura-Hata and COST-231 Hata models behind a
single SI-unit surface: distances in meters, frequencies in Hz. Each model
converts internally to its native units (GHz, MHz, km) so callers never
have to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

SPEED_OF_LIGHT = 299_792_458.0  # m/s

MODEL_KINDS = (
    "fspl",
    "inh-los",
    "inf-los",
    "two-ray",
    "okumura-hata",
    "cost231-hata",
)

CITY_SIZES = ("small-medium", "large")
AREA_CLASSES = ("urban", "suburban-open")

# Canonical applicability ranges; evaluation outside them succeeds but is
# flagged (see PathLossModel.flags).
OKUMURA_HATA_FREQ_RANGE_MHZ = (150.0, 1500.0)
COST231_FREQ_RANGE_MHZ = (500.0, 2000.0)
HATA_TX_HEIGHT_RANGE_M = (30.0, 200.0)
HATA_DISTANCE_RANGE_KM = (1.0, 20.0)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class Frequency:
    """Carrier frequency stored canonically in Hz."""

    hz: float

    def __post_init__(self) -> None:
        _require_positive("frequency", self.hz)

    @classmethod
    def from_mhz(cls, mhz: float) -> "Frequency":
        return cls(float(mhz) * 1e6)

    @classmethod
    def from_ghz(cls, ghz: float) -> "Frequency":
        return cls(float(ghz) * 1e9)

    @property
    def mhz(self) -> float:
        return self.hz / 1e6

    @property
    def ghz(self) -> float:
        return self.hz / 1e9


@dataclass(frozen=True)
class Distance:
    """Link distance stored canonically in meters."""

    m: float

    def __post_init__(self) -> None:
        _require_positive("distance", self.m)

    @classmethod
    def from_km(cls, km: float) -> "Distance":
        return cls(float(km) * 1e3)

    @property
    def km(self) -> float:
        return self.m / 1e3


@dataclass(frozen=True)
class AntennaGeometry:
    """TX/RX antenna heights and combined linear antenna gain.

    The gain is dimensionless (linear, not dB); 1.0 means unity combined
    TX-RX gain.
    """

    h_tx_m: float
    h_rx_m: float
    combined_gain: float = 1.0

    def __post_init__(self) -> None:
        _require_positive("h_tx_m", self.h_tx_m)
        _require_positive("h_rx_m", self.h_rx_m)
        _require_positive("combined_gain", self.combined_gain)


@dataclass(frozen=True)
class HataEnvironment:
    """Environment selectors for the Hata model family.

    city_size picks the mobile-antenna height correction formula,
    area_class picks the COST-231 area term (3 dB urban, 0 dB
    suburban/open).
    """

    city_size: str = "small-medium"
    area_class: str = "urban"

    def __post_init__(self) -> None:
        if self.city_size not in CITY_SIZES:
            raise ValueError(f"city_size must be one of {CITY_SIZES}, got {self.city_size!r}")
        if self.area_class not in AREA_CLASSES:
            raise ValueError(f"area_class must be one of {AREA_CLASSES}, got {self.area_class!r}")

    @property
    def area_correction_db(self) -> float:
        return 3.0 if self.area_class == "urban" else 0.0

    def mobile_height_correction_db(self, f_mhz: float, h_rx_m: float) -> float:
        """Standard Hata mobile antenna height correction.

        Small/medium city: 0.8 + (1.1 log10 f - 0.7) h - 1.56 log10 f.
        Large city (f >= 400 MHz): 3.2 (log10(11.75 h))^2 - 4.97.
        """
        if self.city_size == "large":
            return 3.2 * math.log10(11.75 * h_rx_m) ** 2 - 4.97
        logf = math.log10(f_mhz)
        return 0.8 + (1.1 * logf - 0.7) * h_rx_m - 1.56 * logf


@dataclass(frozen=True)
class ValidityFlag:
    """Structured note that an evaluation sits outside a model's stated domain."""

    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


def fspl(d_m: float, f_hz: float) -> float:
    """Free-space path loss in dB.

    20 log10(d) + 20 log10(f) + 20 log10(4 pi / c), d in m, f in Hz.
    """
    d_m = _require_positive("distance", d_m)
    f_hz = _require_positive("frequency", f_hz)
    return (
        20.0 * math.log10(d_m)
        + 20.0 * math.log10(f_hz)
        + 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT)
    )


def pl_inh_los(d_m: float, f_hz: float) -> float:
    """3GPP indoor-hotspot LOS path loss in dB: 32.4 + 17.3 log10(d) + 20 log10(f_GHz)."""
    d_m = _require_positive("distance", d_m)
    f_hz = _require_positive("frequency", f_hz)
    return 32.4 + 17.3 * math.log10(d_m) + 20.0 * math.log10(f_hz / 1e9)


def pl_inf_los(d_m: float, f_hz: float) -> float:
    """3GPP indoor-factory LOS path loss in dB: 31.84 + 21.5 log10(d) + 19 log10(f_GHz)."""
    d_m = _require_positive("distance", d_m)
    f_hz = _require_positive("frequency", f_hz)
    return 31.84 + 21.50 * math.log10(d_m) + 19.0 * math.log10(f_hz / 1e9)


def two_ray(d_m: float, geometry: AntennaGeometry) -> float:
    """Two-ray ground-reflection path loss (asymptotic far-field form) in dB.

    40 log10(d) - 10 log10(G h_tx^2 h_rx^2). Only physically meaningful
    beyond the crossover distance 4 pi h_tx h_rx / lambda; use
    two_ray_crossover_m / PathLossModel.flags to detect near-field use.
    """
    d_m = _require_positive("distance", d_m)
    g = geometry
    return 40.0 * math.log10(d_m) - 10.0 * math.log10(
        g.combined_gain * g.h_tx_m**2 * g.h_rx_m**2
    )


def two_ray_crossover_m(geometry: AntennaGeometry, f_hz: float) -> float:
    """Distance below which the asymptotic two-ray form is invalid."""
    wavelength_m = SPEED_OF_LIGHT / _require_positive("frequency", f_hz)
    return 4.0 * math.pi * geometry.h_tx_m * geometry.h_rx_m / wavelength_m


def okumura_hata(
    d_m: float,
    f_hz: float,
    geometry: AntennaGeometry,
    environment: HataEnvironment,
) -> float:
    """Okumura-Hata urban path loss in dB (f in MHz, d in km internally).

    69.55 + 26.16 log10(f) - 13.82 log10(h_b) - C_h
    + [44.9 - 6.55 log10(h_b)] log10(d_km)
    with C_h the mobile height correction selected by environment.city_size.
    """
    d_m = _require_positive("distance", d_m)
    f_mhz = _require_positive("frequency", f_hz) / 1e6
    h_b = geometry.h_tx_m
    c_h = environment.mobile_height_correction_db(f_mhz, geometry.h_rx_m)
    return (
        69.55
        + 26.16 * math.log10(f_mhz)
        - 13.82 * math.log10(h_b)
        - c_h
        + (44.9 - 6.55 * math.log10(h_b)) * math.log10(d_m / 1e3)
    )


def cost231_hata(
    d_m: float,
    f_hz: float,
    geometry: AntennaGeometry,
    environment: HataEnvironment,
) -> float:
    """COST-231 Hata path loss in dB (f in MHz, d in km internally).

    46.3 + 33.9 log10(f) - 13.82 log10(h_b) - a(h_m)
    + [44.9 - 6.55 log10(h_b)] log10(d_km) + C_m
    with C_m = 3 dB urban, 0 dB suburban/open.
    """
    d_m = _require_positive("distance", d_m)
    f_mhz = _require_positive("frequency", f_hz) / 1e6
    h_b = geometry.h_tx_m
    a_hm = environment.mobile_height_correction_db(f_mhz, geometry.h_rx_m)
    return (
        46.3
        + 33.9 * math.log10(f_mhz)
        - 13.82 * math.log10(h_b)
        - a_hm
        + (44.9 - 6.55 * math.log10(h_b)) * math.log10(d_m / 1e3)
        + environment.area_correction_db
    )


_GEOMETRY_KINDS = ("two-ray", "okumura-hata", "cost231-hata")
_HATA_KINDS = ("okumura-hata", "cost231-hata")


@dataclass(frozen=True)
class PathLossModel:
    """One parameterized path-loss model, evaluable at any positive distance.

    Values are immutable after construction; evaluation is a pure function
    of (model, distance), safe for concurrent use.
    """

    kind: str
    frequency: Frequency
    geometry: AntennaGeometry | None = None
    environment: HataEnvironment | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.kind in _GEOMETRY_KINDS and self.geometry is None:
            raise ValueError(f"model {self.kind!r} requires antenna geometry (TX/RX heights)")
        if self.kind in _HATA_KINDS and self.environment is None:
            raise ValueError(f"model {self.kind!r} requires a Hata environment")

    def path_loss(self, d_m: float) -> float:
        """Path loss in dB at distance d_m (meters)."""
        if self.kind == "fspl":
            return fspl(d_m, self.frequency.hz)
        if self.kind == "inh-los":
            return pl_inh_los(d_m, self.frequency.hz)
        if self.kind == "inf-los":
            return pl_inf_los(d_m, self.frequency.hz)
        if self.kind == "two-ray":
            return two_ray(d_m, self.geometry)
        if self.kind == "okumura-hata":
            return okumura_hata(d_m, self.frequency.hz, self.geometry, self.environment)
        return cost231_hata(d_m, self.frequency.hz, self.geometry, self.environment)

    def flags(self, d_m: float) -> tuple[ValidityFlag, ...]:
        """Out-of-domain notes for evaluating this model at d_m; empty if none."""
        d_m = _require_positive("distance", d_m)
        found: list[ValidityFlag] = []
        if self.kind == "two-ray":
            crossover = two_ray_crossover_m(self.geometry, self.frequency.hz)
            if d_m < crossover:
                found.append(
                    ValidityFlag(
                        "near-field",
                        f"distance {d_m:.2f} m below two-ray crossover {crossover:.2f} m",
                    )
                )
        elif self.kind in _HATA_KINDS:
            lo_f, hi_f = (
                OKUMURA_HATA_FREQ_RANGE_MHZ
                if self.kind == "okumura-hata"
                else COST231_FREQ_RANGE_MHZ
            )
            f_mhz = self.frequency.mhz
            if not lo_f <= f_mhz <= hi_f:
                found.append(
                    ValidityFlag(
                        "frequency-out-of-range",
                        f"{f_mhz:.3f} MHz outside {lo_f:.0f}-{hi_f:.0f} MHz",
                    )
                )
            lo_h, hi_h = HATA_TX_HEIGHT_RANGE_M
            if not lo_h <= self.geometry.h_tx_m <= hi_h:
                found.append(
                    ValidityFlag(
                        "tx-height-out-of-range",
                        f"h_tx {self.geometry.h_tx_m:.2f} m outside {lo_h:.0f}-{hi_h:.0f} m",
                    )
                )
            lo_d, hi_d = HATA_DISTANCE_RANGE_KM
            if not lo_d <= d_m / 1e3 <= hi_d:
                found.append(
                    ValidityFlag(
                        "distance-out-of-range",
                        f"{d_m / 1e3:.3f} km outside {lo_d:.0f}-{hi_d:.0f} km",
                    )
                )
        return tuple(found)


def evaluate_sweep(
    model: PathLossModel,
    d_start_m: float,
    d_end_m: float,
    points: int,
    spacing: str = "log",
) -> list[tuple[float, float]]:
    """Evaluate a model over a distance grid; returns (distance_m, pl_db) pairs.

    spacing is "linear" or "log"; endpoints are hit exactly.
    """
    d_start_m = _require_positive("d_start", d_start_m)
    d_end_m = _require_positive("d_end", d_end_m)
    if d_start_m >= d_end_m:
        raise ValueError(f"d_start ({d_start_m}) must be below d_end ({d_end_m})")
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    if spacing not in ("linear", "log"):
        raise ValueError(f"spacing must be 'linear' or 'log', got {spacing!r}")

    distances = []
    for i in range(points):
        if i == 0:
            d = d_start_m
        elif i == points - 1:
            d = d_end_m
        elif spacing == "linear":
            d = d_start_m + (d_end_m - d_start_m) * i / (points - 1)
        else:
            d = 10.0 ** (
                math.log10(d_start_m)
                + (math.log10(d_end_m) - math.log10(d_start_m)) * i / (points - 1)
            )
        distances.append(d)
    return [(d, model.path_loss(d)) for d in distances]


def sweep_distances(pairs: Iterable[tuple[float, float]]) -> list[float]:
    """Distance column of an evaluate_sweep result."""
    return [d for d, _ in pairs]
