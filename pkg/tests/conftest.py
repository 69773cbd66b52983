import pytest

from Shimura.helper.modal import SuiteConfig


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: point counts, searches and model reconstructions")


@pytest.fixture
def suite_config(tmp_path) -> SuiteConfig:
    return SuiteConfig(out=str(tmp_path), workers=1)
