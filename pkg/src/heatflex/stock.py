"""Dwelling-stock ingestion: categories, records, CSV round-trip and outlier clipping.

The stock table has one row per (LSOA, dwelling category) with a dwelling
count, average annual heat demands before/after energy efficiency measures
(kWh/year per dwelling) and average floor area (m2 per dwelling).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DataValidationError,
    DomainError,
    DuplicateRecordError,
    ParseError,
    SchemaError,
)


class DwellingForm(Enum):
    DETACHED = "detached"
    SEMI_DETACHED = "semi_detached"
    TERRACED = "terraced"
    FLAT = "flat"


class HeatingSystem(Enum):
    GAS_BOILER = "gas_boiler"
    RESISTANCE_HEATER = "resistance_heater"
    BIOMASS_BOILER = "biomass_boiler"
    OIL_BOILER = "oil_boiler"


_FORM_ALIASES = {
    "detached": DwellingForm.DETACHED,
    "semi_detached": DwellingForm.SEMI_DETACHED,
    "semi-detached": DwellingForm.SEMI_DETACHED,
    "semidetached": DwellingForm.SEMI_DETACHED,
    "terraced": DwellingForm.TERRACED,
    "flat": DwellingForm.FLAT,
}

_HEATING_ALIASES = {
    "gas_boiler": HeatingSystem.GAS_BOILER,
    "gas boiler": HeatingSystem.GAS_BOILER,
    "gas": HeatingSystem.GAS_BOILER,
    "resistance_heater": HeatingSystem.RESISTANCE_HEATER,
    "resistance heater": HeatingSystem.RESISTANCE_HEATER,
    "resistance": HeatingSystem.RESISTANCE_HEATER,
    "biomass_boiler": HeatingSystem.BIOMASS_BOILER,
    "biomass boiler": HeatingSystem.BIOMASS_BOILER,
    "biomass": HeatingSystem.BIOMASS_BOILER,
    "oil_boiler": HeatingSystem.OIL_BOILER,
    "oil boiler": HeatingSystem.OIL_BOILER,
    "oil": HeatingSystem.OIL_BOILER,
}


@dataclass(frozen=True, order=True)
class DwellingCategory:
    """One of the 16 combinations of dwelling form and incumbent heating system."""

    form: DwellingForm
    heating: HeatingSystem

    @staticmethod
    def all() -> tuple["DwellingCategory", ...]:
        return tuple(
            DwellingCategory(f, h) for f in DwellingForm for h in HeatingSystem
        )

    @staticmethod
    def parse(form: str, heating: str) -> "DwellingCategory":
        f = _FORM_ALIASES.get(form.strip().lower())
        h = _HEATING_ALIASES.get(heating.strip().lower())
        if f is None:
            raise ParseError(f"unknown dwelling form {form!r}")
        if h is None:
            raise ParseError(f"unknown heating system {heating!r}")
        return DwellingCategory(f, h)

    def label(self) -> str:
        return f"{self.form.value}/{self.heating.value}"


@dataclass(frozen=True)
class DwellingRecord:
    """One (LSOA, category) row of the stock dataset.

    Heat demands are kWh/year per dwelling; floor area is m2 per dwelling.
    Rows with count == 0 are legal placeholders and carry no physics.
    """

    lsoa_id: str
    category: DwellingCategory
    count: int
    annual_heat_demand_before: float
    annual_heat_demand_after: float
    floor_area: float

    def __post_init__(self) -> None:
        if self.count < 0:
            raise DataValidationError(f"{self.lsoa_id}: negative dwelling count {self.count}")
        if self.count > 0:
            if self.annual_heat_demand_before <= 0:
                raise DataValidationError(
                    f"{self.lsoa_id}/{self.category.label()}: heat demand (before) must be > 0"
                )
            if self.annual_heat_demand_after <= 0:
                raise DataValidationError(
                    f"{self.lsoa_id}/{self.category.label()}: heat demand (after) must be > 0"
                )
            if self.annual_heat_demand_after > self.annual_heat_demand_before:
                raise DataValidationError(
                    f"{self.lsoa_id}/{self.category.label()}: heat demand after efficiency "
                    f"measures exceeds the demand before them"
                )
            if self.floor_area <= 0:
                raise DataValidationError(
                    f"{self.lsoa_id}/{self.category.label()}: floor area must be > 0"
                )

    @property
    def skippable(self) -> bool:
        """True for zero-population rows, which downstream stages ignore."""
        return self.count == 0


# Logical field -> default CSV column name. A schema mapping passed to
# load_stock/write_stock overrides individual entries.
DEFAULT_STOCK_SCHEMA: dict[str, str] = {
    "lsoa_id": "lsoa_id",
    "form": "form",
    "heating": "heating",
    "count": "count",
    "annual_heat_demand_before": "heat_demand_before_kwh",
    "annual_heat_demand_after": "heat_demand_after_kwh",
    "floor_area": "floor_area_m2",
}


def _resolve_schema(schema: Mapping[str, str] | None) -> dict[str, str]:
    resolved = dict(DEFAULT_STOCK_SCHEMA)
    if schema:
        unknown = set(schema) - set(DEFAULT_STOCK_SCHEMA)
        if unknown:
            raise SchemaError(f"unknown schema field(s): {', '.join(sorted(unknown))}")
        resolved.update(schema)
    return resolved


def load_stock(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    delimiter: str = ",",
) -> list[DwellingRecord]:
    """Parse a delimited stock table into DwellingRecords, preserving row order.

    Raises SchemaError for missing columns, ParseError (with the 1-based data
    row number) for bad cells and DuplicateRecordError for repeated
    (lsoa_id, category) keys.
    """
    cols = _resolve_schema(schema)
    records: list[DwellingRecord] = []
    seen: set[tuple[str, DwellingCategory]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        header = reader.fieldnames or []
        missing = [c for c in cols.values() if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s): {', '.join(missing)}")
        for row_no, row in enumerate(reader, start=1):
            try:
                category = DwellingCategory.parse(row[cols["form"]], row[cols["heating"]])
                record = DwellingRecord(
                    lsoa_id=row[cols["lsoa_id"]].strip(),
                    category=category,
                    count=_parse_int(row[cols["count"]]),
                    annual_heat_demand_before=_parse_float(row[cols["annual_heat_demand_before"]]),
                    annual_heat_demand_after=_parse_float(row[cols["annual_heat_demand_after"]]),
                    floor_area=_parse_float(row[cols["floor_area"]]),
                )
            except (ParseError, ValueError) as exc:
                raise ParseError(f"{path}: row {row_no}: {exc}") from exc
            key = (record.lsoa_id, record.category)
            if key in seen:
                raise DuplicateRecordError(
                    f"{path}: row {row_no}: duplicate record for "
                    f"({record.lsoa_id}, {record.category.label()})"
                )
            seen.add(key)
            records.append(record)
    return records


def _parse_float(cell: str) -> float:
    try:
        return float(cell)
    except (TypeError, ValueError):
        raise ParseError(f"expected a number, got {cell!r}") from None


def _parse_int(cell: str) -> int:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        raise ParseError(f"expected an integer, got {cell!r}") from None
    if value != int(value):
        raise ParseError(f"expected an integer, got {cell!r}")
    return int(value)


def write_stock(
    records: Iterable[DwellingRecord],
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    delimiter: str = ",",
) -> None:
    """Write records in the load_stock format (load . write is an identity)."""
    cols = _resolve_schema(schema)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(
            [cols[f] for f in (
                "lsoa_id", "form", "heating", "count",
                "annual_heat_demand_before", "annual_heat_demand_after", "floor_area",
            )]
        )
        for r in records:
            writer.writerow([
                r.lsoa_id,
                r.category.form.value,
                r.category.heating.value,
                r.count,
                repr(r.annual_heat_demand_before),
                repr(r.annual_heat_demand_after),
                repr(r.floor_area),
            ])


_CLIPPED_FIELDS = ("annual_heat_demand_before", "annual_heat_demand_after", "floor_area")


def winsorize_stock(
    records: Sequence[DwellingRecord],
    lower_pct: float = 0.01,
    upper_pct: float = 0.99,
) -> list[DwellingRecord]:
    """Clip outliers per dwelling category across all LSOAs.

    For each category and each of the heat-demand/floor-area fields, values
    beyond the lower/upper percentile (linear interpolation between order
    statistics, one record = one sample) are replaced by the percentile value.
    Counts and record order are unchanged. Zero-count rows neither contribute
    to the percentile estimate nor get clipped. Categories with fewer than two
    contributing records pass through with a warning.
    """
    if not 0 <= lower_pct < upper_pct <= 1:
        raise DomainError(
            f"invalid percentile bounds ({lower_pct}, {upper_pct}); need 0 <= lo < hi <= 1"
        )

    by_category: dict[DwellingCategory, list[int]] = {}
    for i, record in enumerate(records):
        if not record.skippable:
            by_category.setdefault(record.category, []).append(i)

    out = list(records)
    for category, idxs in by_category.items():
        if len(idxs) < 2:
            warnings.warn(
                f"category {category.label()}: {len(idxs)} record(s), outlier clipping skipped",
                stacklevel=2,
            )
            continue
        bounds = {}
        for field in _CLIPPED_FIELDS:
            values = np.array([getattr(records[i], field) for i in idxs], dtype=float)
            lo, hi = np.percentile(values, [lower_pct * 100, upper_pct * 100])
            bounds[field] = (float(lo), float(hi))
        for i in idxs:
            clipped = {
                field: min(max(getattr(records[i], field), lo), hi)
                for field, (lo, hi) in bounds.items()
            }
            if any(clipped[f] != getattr(records[i], f) for f in _CLIPPED_FIELDS):
                out[i] = replace(records[i], **clipped)
    return out
