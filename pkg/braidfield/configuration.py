# Copyright 2025-2026 AstroLab Software
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Utility to load the configuration file"""

import dataclasses
import os
from typing import Optional

import yaml

from braidfield.exceptions import ConfigError

DEFAULTS = {
    "TOL": 1e-9,
    "GRID": 4096,
    "SAMPLES": 512,
    "LAMBDA": None,
    "SEED": 0,
    "REPEAT": 1,
    "THREADS": 1,
    "LOG_LEVEL": "INFO",
    "INTEGERIZE_BOUND": 12,
}


def extract_configuration(filename):
    """Extract user defined configuration

    Parameters
    ----------
    filename: str
        Full path to the `config.yml` file.

    Returns
    -------
    out: dict
        Dictionary with user defined values, completed
        with defaults for missing keys. A missing file
        gives the defaults.
    """
    config = dict(DEFAULTS)
    if filename is not None and os.path.exists(filename):
        with open(filename) as f:
            user = yaml.load(f, yaml.Loader) or {}
        if not isinstance(user, dict):
            raise ConfigError(f"{filename} does not hold a mapping")
        config.update({k.upper(): v for k, v in user.items()})

    if "BRAIDFIELD_THREADS" in os.environ:
        config["THREADS"] = os.environ["BRAIDFIELD_THREADS"]

    return config


@dataclasses.dataclass(frozen=True)
class Config:
    """Numerical settings shared by every command

    Examples
    --------
    >>> Config().samples
    512
    >>> Config(tol=0.1)
    Traceback (most recent call last):
    ...
    braidfield.exceptions.ConfigError: tol must lie in (0, 1e-3], got 0.1
    """

    tol: float = 1e-9
    grid: int = 4096
    samples: int = 512
    lam: Optional[float] = None
    seed: int = 0
    repeat: int = 1
    threads: int = 1
    log_level: str = "INFO"
    integerize_bound: int = 12

    def __post_init__(self):
        if not 0 < self.tol <= 1e-3:
            raise ConfigError(f"tol must lie in (0, 1e-3], got {self.tol}")
        if self.samples < 64:
            raise ConfigError(f"samples must be at least 64, got {self.samples}")
        if self.repeat < 1:
            raise ConfigError(f"repeat must be positive, got {self.repeat}")
        if self.grid < 16:
            raise ConfigError(f"grid must be at least 16, got {self.grid}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")
        if self.lam is not None and not 0 < self.lam <= 1:
            raise ConfigError(f"lambda must lie in (0, 1], got {self.lam}")

    @classmethod
    def from_mapping(cls, config: dict, **overrides) -> "Config":
        """Build from `extract_configuration` output, CLI values first

        `None` overrides are ignored so unset flags fall back to the file.
        """
        values = {
            "tol": config["TOL"],
            "grid": config["GRID"],
            "samples": config["SAMPLES"],
            "lam": config["LAMBDA"],
            "seed": config["SEED"],
            "repeat": config["REPEAT"],
            "threads": config["THREADS"],
            "log_level": config["LOG_LEVEL"],
            "integerize_bound": config["INTEGERIZE_BOUND"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(
                tol=float(values["tol"]),
                grid=int(values["grid"]),
                samples=int(values["samples"]),
                lam=None if values["lam"] is None else float(values["lam"]),
                seed=int(values["seed"]),
                repeat=int(values["repeat"]),
                threads=int(values["threads"]),
                log_level=str(values["log_level"]).upper(),
                integerize_bound=int(values["integerize_bound"]),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid configuration value: {e}") from e
