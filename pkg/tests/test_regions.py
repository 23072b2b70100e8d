"""Regional climate table: packaged defaults, lookup validation."""

import pytest

from heatflex import (
    DanglingRegionError,
    DataValidationError,
    SchemaError,
    UnresolvedLsoaError,
    load_region_table,
)

# The ten regions of England and Wales: heating degree days (base 15.5 C)
# and outdoor design temperature, transcribed independently of the shipped
# data file so a regression in either is caught.
EXPECTED_REGIONS = {
    "East": (1873.6, -3.0),
    "East Midlands": (2055.7, -3.0),
    "London": (1773.5, -2.0),
    "North East": (2216.8, -5.0),
    "North West": (2359.8, -5.0),
    "South East": (1815.7, -1.0),
    "South West": (1740.6, -2.0),
    "Wales": (2058.9, -3.0),
    "West Midlands": (2055.7, -3.0),
    "Yorkshire and The Humber": (2216.8, -5.0),
}


def test_default_table_matches_published_values(default_regions):
    assert set(default_regions.regions) == set(EXPECTED_REGIONS)
    for name, (hdd, design) in EXPECTED_REGIONS.items():
        info = default_regions.regions[name]
        assert info.heating_degree_days == hdd
        assert info.design_temp == design


def test_named_queries(default_regions):
    wales = default_regions.info_for_region("Wales")
    assert (wales.heating_degree_days, wales.design_temp) == (2058.9, -3.0)
    nw = default_regions.info_for_region("North West")
    assert (nw.heating_degree_days, nw.design_temp) == (2359.8, -5.0)


def test_lookup_resolution(tmp_path):
    lookup = tmp_path / "lookup.csv"
    lookup.write_text(
        "lsoa_id,region,local_authority\n"
        "E01000001,Wales,Cardiff\n"
        "E01000002,London,Camden\n",
        encoding="utf-8",
    )
    table = load_region_table(lsoa_lookup_path=lookup)
    assert table.region_of("E01000001") == "Wales"
    assert table.local_authority_of("E01000002") == "Camden"
    assert table.info_for_lsoa("E01000001").design_temp == -3.0
    table.validate_lsoas(["E01000001", "E01000002"])


def test_dangling_region_rejected(tmp_path):
    lookup = tmp_path / "lookup.csv"
    lookup.write_text(
        "lsoa_id,region,local_authority\nS01000001,Scotland,Glasgow\n",
        encoding="utf-8",
    )
    with pytest.raises(DanglingRegionError, match="Scotland"):
        load_region_table(lsoa_lookup_path=lookup)


def test_unresolved_lsoas_listed(default_regions):
    with pytest.raises(UnresolvedLsoaError) as excinfo:
        default_regions.validate_lsoas(["E01xxxxxx", "E01yyyyyy"])
    assert excinfo.value.lsoa_ids == ("E01xxxxxx", "E01yyyyyy")
    assert "E01xxxxxx" in str(excinfo.value)


def test_conflicting_lookup_rows_rejected(tmp_path):
    lookup = tmp_path / "lookup.csv"
    lookup.write_text(
        "lsoa_id,region,local_authority\n"
        "E01000001,Wales,Cardiff\n"
        "E01000001,London,Camden\n",
        encoding="utf-8",
    )
    with pytest.raises(DataValidationError, match="conflicting"):
        load_region_table(lsoa_lookup_path=lookup)


def test_regions_file_validation(tmp_path):
    bad_hdd = tmp_path / "r1.csv"
    bad_hdd.write_text("region,hdd,design_temp_c\nNowhere,0,-3\n", encoding="utf-8")
    with pytest.raises(DataValidationError):
        load_region_table(bad_hdd)

    bad_design = tmp_path / "r2.csv"
    bad_design.write_text("region,hdd,design_temp_c\nNowhere,2000,25\n", encoding="utf-8")
    with pytest.raises(DataValidationError):
        load_region_table(bad_design)

    missing_col = tmp_path / "r3.csv"
    missing_col.write_text("region,hdd\nNowhere,2000\n", encoding="utf-8")
    with pytest.raises(SchemaError, match="design_temp_c"):
        load_region_table(missing_col)
