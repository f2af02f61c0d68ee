"""Bundled reference data from a DECT-2020 NR measurement campaign.

Four small CSVs ship with the package: per-site maximum reliable distances
(indoor and outdoor), a published path-loss comparison for the longest
outdoor links, and the radio configuration the campaign used. Loaders
return typed rows; the comparison table keeps its published values
verbatim, inconsistencies included, so analysis code can decide what to
trust.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

FIXTURE_FILES = (
    "indoor_locations.csv",
    "outdoor_locations.csv",
    "pathloss_comparison.csv",
    "system_parameters.csv",
)


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture; raises ValueError for unknown names."""
    if name not in FIXTURE_FILES:
        raise ValueError(f"unknown fixture {name!r}; expected one of {FIXTURE_FILES}")
    return Path(str(resources.files("dectlink").joinpath("data", name)))


def _rows(name: str) -> list[dict[str, str]]:
    with fixture_path(name).open(newline="", encoding="utf-8") as fh:
        filtered = (line for line in fh if not line.startswith("#"))
        return list(csv.DictReader(filtered))


@dataclass(frozen=True)
class ReferenceLocation:
    """One measured site: how far the link reached and the TX power it took."""

    site: str
    setting: str
    propagation: str
    surroundings: str
    distance_m: float
    p_tx_dbm: float


@dataclass(frozen=True)
class PathLossComparisonRow:
    """Published per-site path loss next to four model predictions.

    Model columns are None where the campaign reported nothing. Values are
    as published; they do not always agree with the models evaluated at the
    stated distance.
    """

    scenario: str
    distance_m: float
    height_diff_m: float
    emp_pcc_db: float
    emp_pdc_db: float
    fspl_db: float | None
    two_ray_db: float | None
    okumura_hata_db: float | None
    cost231_db: float | None


def _locations(name: str, setting: str) -> tuple[ReferenceLocation, ...]:
    out = []
    for row in _rows(name):
        out.append(
            ReferenceLocation(
                site=row["site"],
                setting=setting,
                propagation=row["propagation"],
                surroundings=row["surroundings"],
                distance_m=float(row["distance_m"]),
                p_tx_dbm=float(row["p_tx_dbm"]),
            )
        )
    return tuple(out)


def load_indoor_locations() -> tuple[ReferenceLocation, ...]:
    """Indoor sites: max reliable distance and minimum TX power per site."""
    return _locations("indoor_locations.csv", "indoor")


def load_outdoor_locations() -> tuple[ReferenceLocation, ...]:
    """Outdoor sites: max reliable distance and minimum TX power per site."""
    return _locations("outdoor_locations.csv", "outdoor")


def load_pathloss_comparison() -> tuple[PathLossComparisonRow, ...]:
    """The published long-range path-loss comparison, verbatim."""
    out = []
    for row in _rows("pathloss_comparison.csv"):

        def opt(key: str) -> float | None:
            return float(row[key]) if row[key] != "" else None

        parsed = PathLossComparisonRow(
            scenario=row["scenario"],
            distance_m=float(row["distance_m"]),
            height_diff_m=float(row["height_diff_m"]),
            emp_pcc_db=float(row["emp_pcc_db"]),
            emp_pdc_db=float(row["emp_pdc_db"]),
            fspl_db=opt("fspl_db"),
            two_ray_db=opt("two_ray_db"),
            okumura_hata_db=opt("okumura_hata_db"),
            cost231_db=opt("cost231_db"),
        )
        if not math.isfinite(parsed.distance_m) or parsed.distance_m <= 0:
            raise ValueError(f"fixture row {parsed.scenario!r} has bad distance")
        out.append(parsed)
    return tuple(out)


def load_system_parameters() -> dict[str, str]:
    """Campaign radio configuration as raw strings keyed by parameter name."""
    return {row["key"]: row["value"] for row in _rows("system_parameters.csv")}
