"""
Shared fixtures
"""

import logging
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pytest
from click.testing import CliRunner

from dcorgraph.config import get_settings
from dcorgraph.utils.logging_setup import ROOT_LOGGER


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per path; tests change the working directory"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def write_csv(tmp_path: Path) -> Callable[..., Path]:
    """Write rows of text cells to a CSV file in tmp_path"""

    def _write(name: str, rows: Sequence[Sequence[object]], header: Optional[Sequence[str]] = None) -> Path:
        lines = []
        if header is not None:
            lines.append(",".join(header))
        lines.extend(",".join(str(cell) for cell in row) for row in rows)
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch) -> Path:
    """Run in an empty directory so no config.yaml is picked up"""
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture(autouse=True)
def reset_logging():
    """CLI runs attach handlers bound to CliRunner's streams"""
    yield
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)
