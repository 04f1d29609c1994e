import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]


@pytest.fixture
def data_dir():
    return pathlib.Path(os.environ.get("LINKDEL_TEST_DATA", ROOT / "data"))


@pytest.fixture
def cli():
    path = os.environ.get("LINKDEL_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("LINKDEL_CLI not set")
    return path
