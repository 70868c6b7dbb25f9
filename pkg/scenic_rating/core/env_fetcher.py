#!/usr/bin/env python
"""
This module provides the EnvFetcher class, which is responsible for fetching scenic-rating settings from environment
variables.

EnvFetcher is the single place in the package that reads the process environment. Commands and the logging setup ask
it for values and supply their own defaults; under pytest it serves values from an in-class table so tests never depend
on the developer's shell.

Key variables include:
- SCENIC_LOG_LEVEL: Log level name for the scenic-rating logger.
- SCENIC_LOG_FILE: Optional path of a log file.
- SCENIC_LOG_FORMAT: One of simple, detailed or debug.
- SCENIC_LOG_STAGES: Optional comma-separated logging stages to show below warning level.
- SCENIC_THREADS: Default worker count for parallel training and cross-validation.
- SCENIC_CONFIG: Optional default pipeline configuration file.
- CLI_NAME: Program name shown in help output.

Methods:
- get(var_name, default): Fetches the value of a variable, raising an error if it is unset and has no default.
- get_int(var_name, default): Fetches an integer-valued variable.
"""

import os
import sys
from typing import Dict, Optional

from scenic_rating.exceptions.exceptions import ConfigError, MissingConfigVariable


class EnvFetcher:
    """
    Class to fetch scenic-rating environment variables.

    Attributes:
    - vars (Dict[str, str]): Values served while running under pytest.

    Methods:
    - get(var_name, default): Fetches the value of the specified environment variable.
    - get_int(var_name, default): Fetches the value and converts it to an integer.
    """

    vars: Dict[str, str] = {
        "SCENIC_LOG_LEVEL": "WARNING",
        "SCENIC_LOG_FILE": "",
        "SCENIC_LOG_FORMAT": "simple",
        "SCENIC_LOG_STAGES": "",
        "SCENIC_THREADS": "1",
        "SCENIC_CONFIG": "",
        "CLI_NAME": "scenic-rating",
    }

    optional_vars = ["SCENIC_LOG_FILE", "SCENIC_LOG_STAGES", "SCENIC_CONFIG", "CLI_NAME"]

    @staticmethod
    def get(var_name: str, default: Optional[str] = None) -> str:
        """
        Fetches the value of the environment variable.

        Arguments:
        - var_name (str): The name of the environment variable to retrieve the value for.
        - default (Optional[str]): Default value to return if environment variable is not set.
        """

        value: Optional[str] = os.getenv(var_name) if "pytest" not in sys.modules else EnvFetcher.vars.get(var_name)

        if value is None and default is not None:
            return default

        if var_name in EnvFetcher.optional_vars and value in (None, ""):
            return ""

        if not value:
            if default is not None:
                return default
            raise MissingConfigVariable(f"Missing required environment variable: {var_name}")
        return value.strip()

    @staticmethod
    def get_int(var_name: str, default: int) -> int:
        """
        Fetches an integer-valued environment variable.

        Arguments:
        - var_name (str): The name of the environment variable.
        - default (int): Value used when the variable is unset.

        Exceptions:
        - ConfigError: Raised if the value is not an integer.
        """
        raw = EnvFetcher.get(var_name, default=str(default))
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"{var_name} must be an integer, got {raw!r}") from e
