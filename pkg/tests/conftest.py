import numpy as np
import pytest

import ducktools.lazyimporter as lazyimporter


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run long regressions against published values",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session", autouse=True)
def false_defaults():
    # Tests ignore the environment variables that can set these to True
    process_state = lazyimporter.EAGER_PROCESS
    import_state = lazyimporter.EAGER_IMPORT

    lazyimporter.EAGER_PROCESS = False
    lazyimporter.EAGER_IMPORT = False

    yield

    lazyimporter.EAGER_PROCESS = process_state
    lazyimporter.EAGER_IMPORT = import_state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
