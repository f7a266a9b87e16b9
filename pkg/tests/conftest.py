from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone

import pytest

from dtconsult import ClientProfile, SessionStore, load_default_catalog
from dtconsult.catalog import default_catalog_path


@pytest.fixture(scope="session")
def catalog():
    return load_default_catalog()


@pytest.fixture(scope="session")
def raw_catalog_doc():
    # independent oracle: the raw JSON document, bypassing the catalog module
    return json.loads(default_catalog_path().read_text(encoding="utf-8"))


class TickingClock:
    """Deterministic clock: starts at a fixed instant, advances 250ms per call."""

    def __init__(self):
        self.moment = datetime(2025, 3, 1, 9, 30, 0, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        current = self.moment
        self.moment += timedelta(milliseconds=250)
        return current


@pytest.fixture
def frozen_clock():
    return TickingClock()


@pytest.fixture
def store(tmp_path, frozen_clock):
    return SessionStore(tmp_path / "sessions", clock=frozen_clock)


@pytest.fixture
def profile():
    return ClientProfile(
        company_name="Detay Metal",
        client_name="Ada Aksoy",
        industry_type="metal fabrication",
        industry_size="35 employees",
        job_title="Operations Manager",
    )
