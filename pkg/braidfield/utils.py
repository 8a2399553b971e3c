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
import logging
from logging import Logger

import numpy as np

TWO_PI = 2.0 * np.pi


def get_braidfield_logger(name: str = "braidfield", log_level: str = "INFO") -> Logger:
    """Initialise python logger.

    Parameters
    ----------
    name : str
        Name of the application to be logged. Typically __name__ of a
        function or module.
    log_level : str
        Minimum level of log wanted: DEBUG, INFO, WARNING, ERROR, CRITICAL

    Returns
    -------
    logger : logging.Logger
        Python Logger

    Examples
    --------
    >>> log = get_braidfield_logger(__name__, "INFO")
    >>> log.info("Hi!")
    """
    # Format of the log message to be printed
    FORMAT = "%(asctime)-15s "
    FORMAT += "-braidfield- "
    FORMAT += "%(message)s"

    # Date format
    DATEFORMAT = "%y/%m/%d %H:%M:%S"

    logging.basicConfig(format=FORMAT, datefmt=DATEFORMAT)
    logger = logging.getLogger(name)

    # Set the minimum log level
    logger.setLevel(log_level)

    return logger


def angular_distance(a, b):
    """Distance between angles on the circle, in [0, pi]

    Examples
    --------
    >>> round(float(angular_distance(0.1, 2 * np.pi - 0.1)), 12)
    0.2
    """
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def min_pairwise_distance(points):
    """Smallest distance between distinct entries along the last axis

    Parameters
    ----------
    points: np.ndarray
        Complex array of shape (..., n)

    Returns
    -------
    out: np.ndarray
        Array of shape (...), `inf` when n < 2

    Examples
    --------
    >>> float(min_pairwise_distance(np.array([0, 1j, 3])))
    1.0
    """
    points = np.asarray(points)
    n = points.shape[-1]
    if n < 2:
        return np.full(points.shape[:-1], np.inf)
    diff = np.abs(points[..., :, None] - points[..., None, :])
    diff[..., np.arange(n), np.arange(n)] = np.inf
    return diff.min(axis=(-2, -1))
