"""Transient core: magnitudes, durations, COP lookup, discrete cross-check."""

import math

import pytest

from heatflex import (
    ComfortBand,
    ConfigError,
    CopCurve,
    Direction,
    DomainError,
    RcDwelling,
    cop_at,
    evaluate,
    flexibility_magnitude,
    initial_heat_output,
    service_duration,
    service_duration_discrete,
    steady_state_temp,
)

BAND = ComfortBand()
CURVE = CopCurve.default()

# R = 0.005 C/W (200 W/C losses), C = 2.5e7 J/C, 4.8 kW heat pump: the
# worked dwelling used across this module. tau = 125000 s.
DWELLING = RcDwelling(resistance=0.005, capacitance=2.5e7, hp_max_thermal=4800.0)


def test_initial_heat_output_hand_values():
    assert initial_heat_output(DWELLING, 19.0, 5.0) == pytest.approx(2800.0)
    assert initial_heat_output(DWELLING, 12.0, 12.0) == 0.0
    # colder than design: clamped to installed capacity, raw value recoverable
    assert initial_heat_output(DWELLING, 21.0, -10.0) == 4800.0
    assert initial_heat_output(DWELLING, 21.0, -10.0, clamp=False) == pytest.approx(6200.0)
    # warmer outside than inside: no negative output
    assert initial_heat_output(DWELLING, 19.0, 25.0) == 0.0
    assert initial_heat_output(DWELLING, 19.0, 25.0, clamp=False) < 0


def test_cop_table_and_interpolation():
    assert cop_at(CURVE, -5.0) == 2.0
    assert cop_at(CURVE, 0.0) == 2.3
    assert cop_at(CURVE, 5.0) == 2.4
    assert cop_at(CURVE, 10.0) == 2.6
    assert cop_at(CURVE, 2.5) == pytest.approx(2.35)
    # clamped beyond the table
    assert cop_at(CURVE, -12.0) == 2.0
    assert cop_at(CURVE, 30.0) == 2.6


def test_cop_curve_validation():
    with pytest.raises(ConfigError):
        CopCurve(points=())
    with pytest.raises(ConfigError):
        CopCurve(points=((0.0, 2.0), (0.0, 2.1)))
    with pytest.raises(ConfigError):
        CopCurve(points=((0.0, 0.9),))


def test_flexibility_magnitudes():
    # IQ = 2800 W at indoor 19 / outdoor 5; COP 2.4
    pos = flexibility_magnitude(DWELLING, 19.0, 5.0, CURVE, Direction.POSITIVE)
    neg = flexibility_magnitude(DWELLING, 19.0, 5.0, CURVE, Direction.NEGATIVE)
    assert pos == pytest.approx((4800 - 2800) / 2.4)
    assert pos == pytest.approx(833.333, abs=1e-3)
    assert neg == pytest.approx(-2800 / 2.4)
    assert neg == pytest.approx(-1166.667, abs=1e-3)


def test_positive_magnitude_zero_at_design_load():
    # at the design point the heat pump is already flat out
    assert flexibility_magnitude(DWELLING, 21.0, -3.0, CURVE, Direction.POSITIVE) == 0.0


def test_steady_state():
    assert steady_state_temp(DWELLING, 5.0, 0.0) == 5.0
    # heat pump sized for 21 C at a -3 C design temperature
    assert steady_state_temp(DWELLING, -3.0, 4800.0) == pytest.approx(21.0)
    assert steady_state_temp(DWELLING, 10.0, 4800.0) == pytest.approx(34.0)


def test_negative_duration_closed_form():
    d = service_duration(DWELLING, 19.0, 5.0, 0.0, BAND, Direction.NEGATIVE)
    assert d.is_finite
    # tau * ln((19-5)/(18-5)) = 125000 * ln(14/13)
    assert d.seconds == pytest.approx(125000 * math.log(14 / 13), rel=1e-12)
    assert d.seconds == pytest.approx(9263.5, abs=0.1)


def test_positive_duration_unbounded_at_design_sizing():
    # steady state 21 C never reaches the 24 C limit
    d = service_duration(DWELLING, 19.0, -3.0, 4800.0, BAND, Direction.POSITIVE)
    assert d.is_unbounded


def test_zero_duration_cases():
    assert service_duration(DWELLING, 17.5, 5.0, 0.0, BAND, Direction.NEGATIVE).is_zero
    assert service_duration(DWELLING, 18.0, 5.0, 0.0, BAND, Direction.NEGATIVE).is_zero
    assert service_duration(DWELLING, 24.0, 5.0, 4800.0, BAND, Direction.POSITIVE).is_zero
    assert service_duration(DWELLING, 25.0, 5.0, 4800.0, BAND, Direction.POSITIVE).is_zero


def test_zero_gradient_identities():
    # start at the limit with ambient at the limit: no service
    assert service_duration(DWELLING, 18.0, 18.0, 0.0, BAND, Direction.NEGATIVE).is_zero
    # ambient above the lower limit keeps the dwelling warm forever
    assert service_duration(DWELLING, 20.0, 20.0, 0.0, BAND, Direction.NEGATIVE).is_unbounded


def test_implausible_indoor_rejected():
    with pytest.raises(DomainError):
        service_duration(DWELLING, -60.0, 5.0, 0.0, BAND, Direction.NEGATIVE)
    with pytest.raises(DomainError):
        service_duration(DWELLING, 80.0, 5.0, 0.0, BAND, Direction.NEGATIVE)


def test_discrete_recurrence_fixed_point_is_steady_state():
    rc = DWELLING.resistance * DWELLING.capacitance
    for outdoor, power in [(5.0, 0.0), (-3.0, 4800.0), (10.0, 2400.0)]:
        a = outdoor / rc + power / DWELLING.capacitance
        b = 1.0 - 1.0 / rc
        assert a / (1.0 - b) == pytest.approx(
            steady_state_temp(DWELLING, outdoor, power), rel=1e-9
        )


def test_discrete_duration_close_to_closed_form():
    closed = service_duration(DWELLING, 19.0, 5.0, 0.0, BAND, Direction.NEGATIVE)
    stepped = service_duration_discrete(DWELLING, 19.0, 5.0, 0.0, BAND.low)
    assert stepped == pytest.approx(closed.seconds, rel=5e-3)


def test_discrete_duration_guards():
    tiny = RcDwelling(resistance=0.001, capacitance=500.0, hp_max_thermal=100.0)
    with pytest.raises(DomainError):
        service_duration_discrete(tiny, 19.0, 5.0, 0.0, 18.0)
    with pytest.raises(DomainError):
        # unreachable limit has no finite step count
        service_duration_discrete(DWELLING, 19.0, 20.0, 0.0, 18.0)


def test_evaluate_composes_magnitude_and_duration():
    outcome = evaluate(DWELLING, 19.0, 5.0, CURVE, BAND, Direction.NEGATIVE)
    assert outcome.magnitude_electric == pytest.approx(-1166.667, abs=1e-3)
    assert outcome.duration.is_finite
    assert outcome.duration.seconds == pytest.approx(9263.5, abs=0.1)


def test_evaluate_forces_zero_magnitude_below_threshold():
    outcome = evaluate(DWELLING, 17.0, 5.0, CURVE, BAND, Direction.NEGATIVE)
    assert outcome.duration.is_zero
    assert outcome.magnitude_electric == 0.0


def test_evaluate_unbounded_when_limit_unreachable():
    # start at the steady state under full output
    t_ss = steady_state_temp(DWELLING, -3.0, 4800.0)
    outcome = evaluate(DWELLING, t_ss, -3.0, CURVE, BAND, Direction.POSITIVE)
    assert outcome.duration.is_unbounded
    assert outcome.magnitude_electric == pytest.approx(
        flexibility_magnitude(DWELLING, t_ss, -3.0, CURVE, Direction.POSITIVE)
    )


def test_dwelling_validation():
    with pytest.raises(DomainError):
        RcDwelling(resistance=0.0, capacitance=1e7, hp_max_thermal=4800.0)
    with pytest.raises(DomainError):
        RcDwelling(resistance=0.005, capacitance=-1.0, hp_max_thermal=4800.0)
