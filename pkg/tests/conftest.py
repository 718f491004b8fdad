import dataclasses

import pytest

from amrsim.config import default_config


@pytest.fixture
def base_config():
    return default_config()


@pytest.fixture
def two_abx_config():
    cfg = default_config()
    abx = cfg.environment.antibiotics[0]
    second = dataclasses.replace(abx, name="abx_b", balloon=dataclasses.replace(abx.balloon))
    cfg.environment.antibiotics = [abx, second]
    return cfg
