"""Per-dwelling thermal physics derived from the stock table.

Three quantities per (LSOA, category) record:

  heat loss coefficient  [kW/C]  = annual heat demand / heating degree hours
  thermal capacitance    [kJ/K]  = floor area * specific thermal capacity
  heat pump size         [kW_th] = (indoor design temp - outdoor design temp) * heat loss

Heating degree days are published per region in C*days; the heat-loss
formula consumes degree hours, hence the fixed *24 conversion. Units here
stay in kW and kJ; the transient core converts to W and J at its boundary.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import DomainError, MissingParamsError
from .regions import RegionTable
from .stock import DwellingCategory, DwellingRecord

HOURS_PER_DAY = 24.0  # degree days -> degree hours

DEFAULT_INDOOR_DESIGN_TEMP = 21.0  # C


class CapacityLevel(Enum):
    """Specific thermal capacity level, kJ/m2/K."""

    MEDIUM = 250.0
    MEDIUM_PLUS_10 = 275.0
    MEDIUM_MINUS_10 = 225.0

    @property
    def specific_capacity(self) -> float:
        return self.value

    @staticmethod
    def parse(token: str) -> "CapacityLevel":
        try:
            return _CAPACITY_TOKENS[token.strip().lower()]
        except KeyError:
            raise DomainError(f"unknown capacity level {token!r}") from None

    @property
    def token(self) -> str:
        return {self.MEDIUM: "medium",
                self.MEDIUM_PLUS_10: "medium+10",
                self.MEDIUM_MINUS_10: "medium-10"}[self]


_CAPACITY_TOKENS = {
    "medium": CapacityLevel.MEDIUM,
    "medium+10": CapacityLevel.MEDIUM_PLUS_10,
    "medium-10": CapacityLevel.MEDIUM_MINUS_10,
}


class StockVariant(Enum):
    BEFORE_EE = "before"  # heat demand before energy efficiency measures
    AFTER_EE = "after"  # reduced demand, heat pumps resized accordingly


@dataclass(frozen=True)
class ThermalParams:
    heat_loss: float  # kW/C
    capacitance: float  # kJ/K
    hp_size_thermal: float  # kW thermal output at design conditions
    design_temp: float  # C, regional outdoor design temperature
    indoor_design_temp: float = DEFAULT_INDOOR_DESIGN_TEMP  # C


def heat_loss_coefficient(annual_heat_demand: float, hdd: float) -> float:
    """Heat loss in kW/C from annual demand (kWh/year) and degree days (C*days)."""
    if annual_heat_demand <= 0:
        raise DomainError(f"annual heat demand must be > 0, got {annual_heat_demand}")
    if hdd <= 0:
        raise DomainError(f"heating degree days must be > 0, got {hdd}")
    return annual_heat_demand / (hdd * HOURS_PER_DAY)


def thermal_capacity(floor_area: float, level: CapacityLevel) -> float:
    """Thermal capacitance in kJ/K from floor area (m2) and capacity level."""
    if floor_area <= 0:
        raise DomainError(f"floor area must be > 0, got {floor_area}")
    return floor_area * level.specific_capacity


def size_heat_pump(
    heat_loss: float,
    design_temp: float,
    indoor_design_temp: float = DEFAULT_INDOOR_DESIGN_TEMP,
) -> float:
    """Heat pump thermal size in kW: holds the indoor design temp at the design outdoor temp."""
    if indoor_design_temp <= design_temp:
        raise DomainError(
            f"indoor design temperature {indoor_design_temp} C must exceed the "
            f"outdoor design temperature {design_temp} C"
        )
    if heat_loss <= 0:
        raise DomainError(f"heat loss must be > 0, got {heat_loss}")
    return (indoor_design_temp - design_temp) * heat_loss


ParamsMap = dict[tuple[str, DwellingCategory], ThermalParams]


def derive_all(
    records: Sequence[DwellingRecord],
    regions: RegionTable,
    level: CapacityLevel = CapacityLevel.MEDIUM,
    variant: StockVariant = StockVariant.BEFORE_EE,
    indoor_design_temp: float = DEFAULT_INDOOR_DESIGN_TEMP,
) -> ParamsMap:
    """Derive ThermalParams for every record with count > 0.

    The stock variant selects which annual heat demand drives the heat loss;
    under AFTER_EE the heat pump is resized from the reduced heat loss while
    the capacitance (floor area based) is unchanged.
    """
    regions.validate_lsoas(r.lsoa_id for r in records if not r.skippable)
    out: ParamsMap = {}
    for record in records:
        if record.skippable:
            continue
        info = regions.info_for_lsoa(record.lsoa_id)
        demand = (
            record.annual_heat_demand_before
            if variant is StockVariant.BEFORE_EE
            else record.annual_heat_demand_after
        )
        try:
            ql = heat_loss_coefficient(demand, info.heating_degree_days)
            cap = thermal_capacity(record.floor_area, level)
            size = size_heat_pump(ql, info.design_temp, indoor_design_temp)
        except DomainError as exc:
            raise DomainError(
                f"({record.lsoa_id}, {record.category.label()}): {exc}"
            ) from exc
        out[(record.lsoa_id, record.category)] = ThermalParams(
            heat_loss=ql,
            capacitance=cap,
            hp_size_thermal=size,
            design_temp=info.design_temp,
            indoor_design_temp=indoor_design_temp,
        )
    return out


def total_installed_thermal_kw(
    records: Sequence[DwellingRecord], params: ParamsMap
) -> float:
    """National installed heat pump capacity, kW thermal = sum(count * size)."""
    total = 0.0
    for record in records:
        if record.skippable:
            continue
        key = (record.lsoa_id, record.category)
        if key not in params:
            raise MissingParamsError(f"no derived parameters for {key}")
        total += record.count * params[key].hp_size_thermal
    return total


def write_params_csv(
    records: Sequence[DwellingRecord],
    params: ParamsMap,
    path: str | Path,
) -> None:
    """Export derived parameters, one row per record with count > 0."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["lsoa_id", "form", "heating", "count", "ql_kw_per_c", "c_kj_per_k", "hp_kw"]
        )
        for record in records:
            if record.skippable:
                continue
            key = (record.lsoa_id, record.category)
            if key not in params:
                raise MissingParamsError(f"no derived parameters for {key}")
            p = params[key]
            writer.writerow([
                record.lsoa_id,
                record.category.form.value,
                record.category.heating.value,
                record.count,
                repr(p.heat_loss),
                repr(p.capacitance),
                repr(p.hp_size_thermal),
            ])
