import os
import sys
from pathlib import Path

import pytest

# Allow the test modules to import shared helpers without packaging them.
sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption(
        "--full-data",
        action="store",
        default=os.environ.get("GRIDPLAN_FULL_DATA"),
        metavar="DIR",
        help="Path to the full published input dataset; enables the "
        "full-scale reproduction check (needs an external solver). "
        "Can also be set via the GRIDPLAN_FULL_DATA environment variable.",
    )


@pytest.fixture
def full_data_dir(request):
    return request.config.getoption("--full-data")
