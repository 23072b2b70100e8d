"""Stock ingestion: CSV round trip, validation errors, winsorization."""

import pytest

from heatflex import (
    DataValidationError,
    DomainError,
    DuplicateRecordError,
    DwellingCategory,
    DwellingForm,
    DwellingRecord,
    HeatingSystem,
    ParseError,
    SchemaError,
    load_stock,
    winsorize_stock,
    write_stock,
)

from conftest import GAS_DETACHED, GAS_FLAT, make_record, percentile_by_hand

HEADER = "lsoa_id,form,heating,count,heat_demand_before_kwh,heat_demand_after_kwh,floor_area_m2\n"


def write_csv(path, rows, header=HEADER):
    path.write_text(header + "".join(rows), encoding="utf-8")
    return path


def test_sixteen_categories_exist():
    cats = DwellingCategory.all()
    assert len(cats) == 16
    assert len(set(cats)) == 16
    # enumerate by hand: 4 forms x 4 heating systems
    expected = {
        (form, heating)
        for form in DwellingForm
        for heating in HeatingSystem
    }
    assert {(c.form, c.heating) for c in cats} == expected


def test_load_stock_preserves_order(tmp_path):
    path = write_csv(tmp_path / "s.csv", [
        "E01000001,detached,gas_boiler,5,12000,9000,110\n",
        "E01000001,flat,resistance_heater,3,7000,5000,50\n",
        "E01000002,terraced,oil_boiler,0,0,0,0\n",
    ])
    records = load_stock(path)
    assert len(records) == 3
    assert [r.lsoa_id for r in records] == ["E01000001", "E01000001", "E01000002"]
    assert records[0].category == GAS_DETACHED
    assert records[1].annual_heat_demand_after == 5000
    assert records[2].skippable and not records[0].skippable


def test_load_stock_all_sixteen_categories(tmp_path):
    rows = [
        f"E01000001,{c.form.value},{c.heating.value},1,10000,8000,90\n"
        for c in DwellingCategory.all()
    ]
    records = load_stock(write_csv(tmp_path / "s.csv", rows))
    assert len(records) == 16
    assert len({r.category for r in records}) == 16


def test_load_stock_missing_column(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text(
        "lsoa_id,form,heating,count,heat_demand_before_kwh,heat_demand_after_kwh\n"
        "E01000001,detached,gas_boiler,5,12000,9000\n",
        encoding="utf-8",
    )
    with pytest.raises(SchemaError, match="floor_area_m2"):
        load_stock(path)


def test_load_stock_non_numeric_cell_names_row(tmp_path):
    path = write_csv(tmp_path / "s.csv", [
        "E01000001,detached,gas_boiler,5,12000,9000,110\n",
        "E01000002,flat,gas_boiler,5,oops,9000,110\n",
    ])
    with pytest.raises(ParseError, match="row 2"):
        load_stock(path)


def test_load_stock_duplicate_key(tmp_path):
    path = write_csv(tmp_path / "s.csv", [
        "E01000001,detached,gas_boiler,5,12000,9000,110\n",
        "E01000001,detached,gas_boiler,7,11000,9000,100\n",
    ])
    with pytest.raises(DuplicateRecordError):
        load_stock(path)


def test_load_stock_custom_schema(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text(
        "area,type,fuel,n,q_before,q_after,tfa\n"
        "E01000001,detached,gas_boiler,5,12000,9000,110\n",
        encoding="utf-8",
    )
    records = load_stock(path, schema={
        "lsoa_id": "area", "form": "type", "heating": "fuel", "count": "n",
        "annual_heat_demand_before": "q_before",
        "annual_heat_demand_after": "q_after",
        "floor_area": "tfa",
    })
    assert records[0].floor_area == 110


def test_record_invariants():
    with pytest.raises(DataValidationError):
        make_record(count=-1)
    with pytest.raises(DataValidationError):
        make_record(before=0.0)
    with pytest.raises(DataValidationError):
        make_record(before=5000.0, after=6000.0)
    with pytest.raises(DataValidationError):
        make_record(floor_area=0.0)
    # zero-count rows may carry zero values
    zero = DwellingRecord("E01000001", GAS_DETACHED, 0, 0.0, 0.0, 0.0)
    assert zero.skippable


def test_round_trip_identity(tmp_path):
    records = [
        make_record(count=5, before=12345.678, after=9876.543, floor_area=101.25),
        make_record(category=GAS_FLAT, count=0, before=0.0, after=0.0, floor_area=0.0),
        make_record(lsoa_id="W01000009", count=2, before=8000.125, after=7000.0625,
                    floor_area=64.5),
    ]
    path = tmp_path / "out.csv"
    write_stock(records, path)
    assert load_stock(path) == records


# ---------------------------------------------------------------------------
# winsorization
# ---------------------------------------------------------------------------

def stock_with_demands(demands, category=GAS_DETACHED):
    return [
        make_record(lsoa_id=f"E01{i:06d}", category=category, count=1,
                    before=d, after=d / 2, floor_area=80.0)
        for i, d in enumerate(demands, start=1)
    ]


def test_winsorize_clamps_to_hand_computed_percentiles():
    demands = [float(i) for i in range(1, 101)]
    out = winsorize_stock(stock_with_demands(demands), 0.01, 0.99)

    lo = percentile_by_hand(demands, 0.01)
    hi = percentile_by_hand(demands, 0.99)
    expected = [min(max(d, lo), hi) for d in demands]
    assert [r.annual_heat_demand_before for r in out] == pytest.approx(expected)
    # endpoints moved, interior untouched
    assert out[0].annual_heat_demand_before == pytest.approx(1.99)
    assert out[-1].annual_heat_demand_before == pytest.approx(99.01)
    assert [r.annual_heat_demand_before for r in out[1:-1]] == demands[1:-1]
    # clipped-field extrema equal the computed bounds whenever clipping occurred
    assert min(r.annual_heat_demand_before for r in out) == pytest.approx(lo)
    assert max(r.annual_heat_demand_before for r in out) == pytest.approx(hi)


def test_winsorize_identical_values_noop():
    records = stock_with_demands([5000.0] * 20)
    assert winsorize_stock(records) == records


def test_winsorize_single_record_warns():
    records = stock_with_demands([5000.0])
    with pytest.warns(UserWarning, match="clipping skipped"):
        out = winsorize_stock(records)
    assert out == records


def test_winsorize_preserves_counts_order_and_length():
    demands = [float(i * 37 % 101 + 1) for i in range(60)]
    records = stock_with_demands(demands)
    out = winsorize_stock(records)
    assert len(out) == len(records)
    assert [r.count for r in out] == [r.count for r in records]
    assert [r.lsoa_id for r in out] == [r.lsoa_id for r in records]


def test_winsorize_idempotent_at_order_statistic_positions():
    # 101 records put the 1st/99th percentiles exactly on order statistics,
    # where repeated clipping is a fixed point.
    demands = [float(i) for i in range(1, 102)]
    once = winsorize_stock(stock_with_demands(demands), 0.01, 0.99)
    twice = winsorize_stock(once, 0.01, 0.99)
    assert twice == once
    assert max(r.annual_heat_demand_before for r in once) == 100.0
    assert min(r.annual_heat_demand_before for r in once) == 2.0


def test_winsorize_groups_per_category():
    # the flat group is tight, the detached group has an outlier; only the
    # detached group should move
    detached = stock_with_demands([1000.0] * 50 + [50000.0], category=GAS_DETACHED)
    flats = stock_with_demands([4000.0] * 30, category=GAS_FLAT)
    out = winsorize_stock(detached + flats)
    assert all(r.annual_heat_demand_before == 4000.0 for r in out if r.category == GAS_FLAT)
    assert max(r.annual_heat_demand_before for r in out if r.category == GAS_DETACHED) < 50000.0


def test_winsorize_skips_zero_count_rows():
    records = stock_with_demands([float(i) for i in range(1, 101)])
    ghost = DwellingRecord("E01999999", GAS_DETACHED, 0, 1e9, 1e9, 1e9)
    out = winsorize_stock(records + [ghost])
    # the ghost neither moves the bounds nor gets clipped
    assert out[-1] == ghost
    assert out[:-1] == winsorize_stock(records)


def test_winsorize_bad_bounds():
    records = stock_with_demands([1.0, 2.0])
    with pytest.raises(DomainError):
        winsorize_stock(records, 0.5, 0.5)
    with pytest.raises(DomainError):
        winsorize_stock(records, -0.1, 0.9)
