"""Weather providers: the deterministic mock and provider selection."""

import re

import pytest

from agriqa.weather import (FailingWeatherProvider, HttpWeatherProvider,
                            MockWeatherProvider, WeatherError, make_provider)

FORECAST_RE = re.compile(
    r"^Forecast for .+: [a-z ]+, high \d+C, low -?\d+C\.$")


def test_mock_is_deterministic():
    m = MockWeatherProvider()
    assert m.forecast("punjab", "ludhiana") == m.forecast("punjab", "ludhiana")
    # keying ignores case and padding
    assert m.forecast("Punjab", " Ludhiana ") \
        .endswith(m.forecast("punjab", "ludhiana").split(":")[1])


def test_mock_varies_by_district():
    m = MockWeatherProvider()
    assert m.forecast("punjab", "ludhiana") != m.forecast("punjab", "amritsar")


def test_mock_format_and_temperature_order():
    m = MockWeatherProvider()
    for state, district in [("punjab", "ludhiana"), ("kerala", "idukki"),
                            (None, None), ("", "pune")]:
        text = m.forecast(state, district)
        assert FORECAST_RE.match(text), text
        high, low = (int(x) for x in re.findall(r"(-?\d+)C", text))
        assert high > low


def test_mock_names_the_place():
    m = MockWeatherProvider()
    assert "ludhiana, punjab" in m.forecast("punjab", "ludhiana")
    assert "your area" in m.forecast(None, None)


def test_failing_provider_raises():
    with pytest.raises(WeatherError):
        FailingWeatherProvider().forecast("punjab", "ludhiana")


def test_make_provider_selection():
    assert isinstance(make_provider(None), MockWeatherProvider)
    assert isinstance(make_provider(""), MockWeatherProvider)
    assert isinstance(make_provider("mock"), MockWeatherProvider)
    assert isinstance(make_provider("http://127.0.0.1:9/forecast"),
                      HttpWeatherProvider)
