"""Measurement-campaign ingestion and per-location link statistics.

A capture is one location's request/response log: one row per request with
the control-channel (PCC) and data-channel (PDC) RSSI, SNR, and CRC flags,
plus a sidecar of location metadata. Summaries average received power in
the linear domain (never raw dB) and judge reliability from CRC success
rates against a strict threshold.
"""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .budget import LinkBudget, ReliabilityThresholds, empirical_pl, is_reliable

CAPTURE_HEADER = ("seq", "pcc_rssi_dbm", "pdc_rssi_dbm", "snr_db", "pcc_crc_ok", "pdc_crc_ok")

META_KEYS = ("location_id", "distance_m", "environment", "p_tx_dbm", "request_count")

_ENVIRONMENT_RE = re.compile(r"^(los|nlos)-(indoor|outdoor)$")

# Anything hotter than this is assumed to be a logging glitch, not a signal.
_SUSPICIOUS_RSSI_DBM = 10.0


def mean_power_db(values_db: Sequence[float]) -> float:
    """Mean of dB power values taken in the linear domain, returned in dB.

    10 log10(mean(10^(x/10))). The naive dB-domain mean understates this
    whenever the samples differ (Jensen's inequality).
    """
    if len(values_db) == 0:
        raise ValueError("mean_power_db needs at least one value")
    for v in values_db:
        if not math.isfinite(v):
            raise ValueError(f"mean_power_db got a non-finite value: {v!r}")
    linear = math.fsum(10.0 ** (v / 10.0) for v in values_db)
    return 10.0 * math.log10(linear / len(values_db))


def sample_std_db(values_db: Sequence[float]) -> float:
    """Sample standard deviation (ddof=1) in the dB domain; 0.0 below two samples."""
    n = len(values_db)
    if n < 2:
        return 0.0
    mean = math.fsum(values_db) / n
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values_db) / (n - 1))


@dataclass(frozen=True)
class MeasurementSample:
    """One request's reception outcome; RSSI/SNR are None when nothing was heard."""

    seq: int
    pcc_rssi_dbm: float | None
    pdc_rssi_dbm: float | None
    snr_db: float | None
    pcc_crc_ok: bool
    pdc_crc_ok: bool


@dataclass(frozen=True)
class LocationCapture:
    """A full capture at one location: samples plus sidecar metadata.

    request_count is the number of requests sent, which may exceed the
    number of logged rows when lost requests produce no row at all; success
    rates always use request_count as the denominator.
    """

    location_id: str
    distance_m: float
    environment: str
    p_tx_dbm: float
    request_count: int
    samples: tuple[MeasurementSample, ...]

    def __post_init__(self) -> None:
        if not self.location_id:
            raise ValueError("location_id must be non-empty")
        if not math.isfinite(self.distance_m) or self.distance_m <= 0.0:
            raise ValueError(f"distance_m must be positive, got {self.distance_m!r}")
        if not _ENVIRONMENT_RE.match(self.environment):
            raise ValueError(
                "environment must look like 'los-indoor' or 'nlos-outdoor', "
                f"got {self.environment!r}"
            )
        if not math.isfinite(self.p_tx_dbm):
            raise ValueError(f"p_tx_dbm must be finite, got {self.p_tx_dbm!r}")
        if self.request_count <= 0:
            raise ValueError(f"request_count must be positive, got {self.request_count!r}")
        pcc_ok = sum(1 for s in self.samples if s.pcc_crc_ok)
        pdc_ok = sum(1 for s in self.samples if s.pdc_crc_ok)
        if max(pcc_ok, pdc_ok) > self.request_count:
            raise ValueError(
                f"request_count {self.request_count} is below the number of "
                f"CRC-ok rows ({max(pcc_ok, pdc_ok)})"
            )
        for s in self.samples:
            for rssi in (s.pcc_rssi_dbm, s.pdc_rssi_dbm):
                if rssi is not None and rssi > _SUSPICIOUS_RSSI_DBM:
                    warnings.warn(
                        f"sample seq={s.seq} reports RSSI {rssi:.1f} dBm, above "
                        f"{_SUSPICIOUS_RSSI_DBM:.0f} dBm; check the capture",
                        stacklevel=2,
                    )

    @property
    def propagation(self) -> str:
        return self.environment.split("-")[0]

    @property
    def setting(self) -> str:
        return self.environment.split("-")[1]


def success_rate_pcc(capture: LocationCapture) -> float:
    """Control-channel CRC success rate in percent, over all requests sent."""
    ok = sum(1 for s in capture.samples if s.pcc_crc_ok)
    return 100.0 * ok / capture.request_count


def success_rate_pdc(capture: LocationCapture) -> float:
    """Data-channel CRC success rate in percent, over all requests sent."""
    ok = sum(1 for s in capture.samples if s.pdc_crc_ok)
    return 100.0 * ok / capture.request_count


@dataclass(frozen=True)
class CampaignRecord:
    """Per-location summary derived from one capture.

    Power statistics use the linear-domain mean; std/min/max are over the
    control-channel RSSI samples in dB. Fields are None when no sample of
    the relevant kind was received.
    """

    location_id: str
    distance_m: float
    setting: str
    propagation: str
    p_tx_dbm: float
    request_count: int
    sr_pcc_pct: float
    sr_pdc_pct: float
    mean_pcc_rssi_dbm: float | None
    mean_pdc_rssi_dbm: float | None
    std_pcc_rssi_db: float
    min_pcc_rssi_dbm: float | None
    max_pcc_rssi_dbm: float | None
    mean_snr_db: float | None
    empirical_pl_pcc_db: float | None
    empirical_pl_pdc_db: float | None
    reliable: bool


def summarize(
    capture: LocationCapture,
    budget: LinkBudget,
    thresholds: ReliabilityThresholds = ReliabilityThresholds(),
) -> CampaignRecord:
    """Collapse a capture into one CampaignRecord.

    Empirical path loss uses the capture's own TX power (not the budget's)
    so captures at different power settings summarize correctly against one
    shared correction budget.
    """
    pcc_rssi = [s.pcc_rssi_dbm for s in capture.samples if s.pcc_rssi_dbm is not None]
    pdc_rssi = [s.pdc_rssi_dbm for s in capture.samples if s.pdc_rssi_dbm is not None]
    snr = [s.snr_db for s in capture.samples if s.snr_db is not None]

    mean_pcc = mean_power_db(pcc_rssi) if pcc_rssi else None
    mean_pdc = mean_power_db(pdc_rssi) if pdc_rssi else None
    mean_snr = mean_power_db(snr) if snr else None

    sr_pcc = success_rate_pcc(capture)
    sr_pdc = success_rate_pdc(capture)

    return CampaignRecord(
        location_id=capture.location_id,
        distance_m=capture.distance_m,
        setting=capture.setting,
        propagation=capture.propagation,
        p_tx_dbm=capture.p_tx_dbm,
        request_count=capture.request_count,
        sr_pcc_pct=sr_pcc,
        sr_pdc_pct=sr_pdc,
        mean_pcc_rssi_dbm=mean_pcc,
        mean_pdc_rssi_dbm=mean_pdc,
        std_pcc_rssi_db=sample_std_db(pcc_rssi),
        min_pcc_rssi_dbm=min(pcc_rssi) if pcc_rssi else None,
        max_pcc_rssi_dbm=max(pcc_rssi) if pcc_rssi else None,
        mean_snr_db=mean_snr,
        empirical_pl_pcc_db=(
            empirical_pl(capture.p_tx_dbm, mean_pcc, budget) if mean_pcc is not None else None
        ),
        empirical_pl_pdc_db=(
            empirical_pl(capture.p_tx_dbm, mean_pdc, budget) if mean_pdc is not None else None
        ),
        reliable=is_reliable(sr_pcc, thresholds) and is_reliable(sr_pdc, thresholds),
    )


def max_reliable_distance(
    records: Iterable[CampaignRecord],
    thresholds: ReliabilityThresholds = ReliabilityThresholds(),
) -> CampaignRecord:
    """The farthest record whose PCC and PDC success rates both clear the floor.

    Raises ValueError when no record qualifies.
    """
    best: CampaignRecord | None = None
    for record in records:
        if not (
            is_reliable(record.sr_pcc_pct, thresholds)
            and is_reliable(record.sr_pdc_pct, thresholds)
        ):
            continue
        if best is None or record.distance_m > best.distance_m:
            best = record
    if best is None:
        raise ValueError("no record meets the reliability threshold on both channels")
    return best


def _parse_optional_float(text: str, line_no: int, column: str) -> float | None:
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"line {line_no}: column {column!r} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"line {line_no}: column {column!r} must be finite, got {text!r}")
    return value


def _parse_flag(text: str, line_no: int, column: str) -> bool:
    if text == "0":
        return False
    if text == "1":
        return True
    raise ValueError(f"line {line_no}: column {column!r} must be 0 or 1, got {text!r}")


def read_capture_csv(path: str | Path) -> tuple[MeasurementSample, ...]:
    """Parse a capture CSV into samples; raises ValueError with line numbers.

    Expected header: seq,pcc_rssi_dbm,pdc_rssi_dbm,snr_db,pcc_crc_ok,pdc_crc_ok.
    Leading '#' comment lines are skipped. Empty RSSI cells mean nothing was
    received on that channel, which is only consistent with a 0 CRC flag.
    """
    path = Path(path)
    samples: list[MeasurementSample] = []
    seen_seq: set[int] = set()
    with path.open(newline="") as fh:
        header_seen = False
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            if not row or (row[0].startswith("#") and len(row) == 1):
                continue
            if not header_seen:
                if tuple(cell.strip() for cell in row) != CAPTURE_HEADER:
                    raise ValueError(
                        f"line {line_no}: bad header {row!r}; expected "
                        f"{','.join(CAPTURE_HEADER)}"
                    )
                header_seen = True
                continue
            if len(row) != len(CAPTURE_HEADER):
                raise ValueError(
                    f"line {line_no}: expected {len(CAPTURE_HEADER)} columns, got {len(row)}"
                )
            cells = [cell.strip() for cell in row]
            try:
                seq = int(cells[0])
            except ValueError:
                raise ValueError(f"line {line_no}: column 'seq' is not an integer: {cells[0]!r}") from None
            if seq < 0:
                raise ValueError(f"line {line_no}: column 'seq' must be >= 0, got {seq}")
            if seq in seen_seq:
                raise ValueError(f"line {line_no}: duplicate seq {seq}")
            seen_seq.add(seq)

            pcc_rssi = _parse_optional_float(cells[1], line_no, "pcc_rssi_dbm")
            pdc_rssi = _parse_optional_float(cells[2], line_no, "pdc_rssi_dbm")
            snr = _parse_optional_float(cells[3], line_no, "snr_db")
            pcc_ok = _parse_flag(cells[4], line_no, "pcc_crc_ok")
            pdc_ok = _parse_flag(cells[5], line_no, "pdc_crc_ok")

            if pcc_ok and pcc_rssi is None:
                raise ValueError(
                    f"line {line_no}: pcc_crc_ok=1 but pcc_rssi_dbm is empty"
                )
            if pdc_ok and pdc_rssi is None:
                raise ValueError(
                    f"line {line_no}: pdc_crc_ok=1 but pdc_rssi_dbm is empty"
                )
            samples.append(
                MeasurementSample(
                    seq=seq,
                    pcc_rssi_dbm=pcc_rssi,
                    pdc_rssi_dbm=pdc_rssi,
                    snr_db=snr,
                    pcc_crc_ok=pcc_ok,
                    pdc_crc_ok=pdc_ok,
                )
            )
    if not header_seen:
        raise ValueError(f"{path}: no header row found")
    return tuple(samples)


def read_capture_meta(path: str | Path) -> dict[str, str]:
    """Parse a key=value sidecar; raises ValueError on unknown or missing keys."""
    path = Path(path)
    values: dict[str, str] = {}
    with path.open() as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path.name} line {line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in META_KEYS:
                raise ValueError(
                    f"{path.name} line {line_no}: unknown key {key!r}; "
                    f"expected one of {', '.join(META_KEYS)}"
                )
            if key in values:
                raise ValueError(f"{path.name} line {line_no}: duplicate key {key!r}")
            values[key] = value.strip()
    missing = [k for k in META_KEYS if k not in values]
    if missing:
        raise ValueError(f"{path.name}: missing keys: {', '.join(missing)}")
    return values


def load_capture(csv_path: str | Path, meta_path: str | Path | None = None) -> LocationCapture:
    """Load a capture CSV plus its sidecar (foo.csv pairs with foo.meta by default)."""
    csv_path = Path(csv_path)
    if meta_path is None:
        meta_path = csv_path.with_suffix(".meta")
    meta = read_capture_meta(meta_path)
    samples = read_capture_csv(csv_path)
    try:
        distance_m = float(meta["distance_m"])
        p_tx_dbm = float(meta["p_tx_dbm"])
        request_count = int(meta["request_count"])
    except ValueError as exc:
        raise ValueError(f"{Path(meta_path).name}: {exc}") from None
    return LocationCapture(
        location_id=meta["location_id"],
        distance_m=distance_m,
        environment=meta["environment"],
        p_tx_dbm=p_tx_dbm,
        request_count=request_count,
        samples=samples,
    )
