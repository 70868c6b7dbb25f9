#!/usr/bin/env python
"""Fixtures for the command tests."""

from typing import Callable

import pytest

from scenic_rating.scenic_cli import ScenicCLI


@pytest.fixture
def cli() -> Callable[..., int]:
    """Run the command line with the given arguments and return the exit code."""

    def run(*argv) -> int:
        return ScenicCLI().run([str(a) for a in argv])

    return run


@pytest.fixture
def fast_flags():
    """Pipeline flags that keep end-to-end runs small."""
    return ["--k-folds", "3", "--iterations", "2", "--n-trees", "5", "--threads", "1"]
