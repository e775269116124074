"""Weather lookup behind a small provider interface.

The service only needs "short forecast text or failure"; tests use the
deterministic mock, deployments point ``weather_url`` at a real endpoint.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import httpx


class WeatherError(Exception):
    pass


class WeatherProvider(Protocol):
    def forecast(self, state: str | None, district: str | None) -> str:
        """Return a short forecast; raise WeatherError on failure."""
        ...


_CONDITIONS = [
    "clear skies",
    "partly cloudy",
    "scattered showers",
    "light rain",
    "thunderstorms likely",
    "hazy sunshine",
    "overcast",
    "heavy rain warning",
]


class MockWeatherProvider:
    """Deterministic forecasts keyed on (state, district); no network."""

    def forecast(self, state: str | None, district: str | None) -> str:
        key = f"{(state or '').strip().lower()}|{(district or '').strip().lower()}"
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        condition = _CONDITIONS[digest[0] % len(_CONDITIONS)]
        high = 22 + digest[1] % 16
        low = high - 6 - digest[2] % 5
        place = ", ".join(p for p in (district, state) if p) or "your area"
        return f"Forecast for {place}: {condition}, high {high}C, low {low}C."


class HttpWeatherProvider:
    """GET ``url?state=...&district=...`` expecting a plain-text forecast body."""

    def __init__(self, url: str, timeout: float = 5.0):
        self.url = url
        self.timeout = timeout

    def forecast(self, state: str | None, district: str | None) -> str:
        params = {}
        if state:
            params["state"] = state
        if district:
            params["district"] = district
        try:
            response = httpx.get(self.url, params=params, timeout=self.timeout)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise WeatherError(f"weather provider failed: {exc}") from exc
        text = response.text.strip()
        if not text:
            raise WeatherError("weather provider returned an empty body")
        return text


class FailingWeatherProvider:
    """Always raises; exercises the escalate-on-provider-failure path."""

    def forecast(self, state: str | None, district: str | None) -> str:
        raise WeatherError("provider unavailable")


def make_provider(weather_url: str | None) -> WeatherProvider:
    if weather_url is None or weather_url in ("", "mock"):
        return MockWeatherProvider()
    return HttpWeatherProvider(weather_url)
