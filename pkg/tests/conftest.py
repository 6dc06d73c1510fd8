import pytest

from dlps import bundled_benchmark


@pytest.fixture(autouse=True)
def _no_data_dir_override(monkeypatch):
    # keep tests pinned to the packaged data even if the shell sets an override
    monkeypatch.delenv("DLPS_DATA_DIR", raising=False)


@pytest.fixture()
def benchmark():
    return bundled_benchmark()
