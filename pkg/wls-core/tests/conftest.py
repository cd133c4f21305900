import logging
from collections.abc import Iterator

import pytest


@pytest.fixture(autouse=True)
def _reset_package_loggers() -> Iterator[None]:
    """CLI runs install their own handler; hand the loggers back to pytest afterwards."""
    yield
    for name in ("wls", "wls_cli"):
        logger = logging.getLogger(name)
        logger.handlers = []
        logger.propagate = True
        logger.setLevel(logging.NOTSET)
