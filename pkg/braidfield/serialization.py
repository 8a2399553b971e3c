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
"""JSON and CSV interchange"""

import json
import math
import sys

import pandas as pd

from braidfield.exceptions import InputError, MalformedPolynomial
from braidfield.semiholo import SemiholoPoly


def _finite(data):
    """Non-finite floats become null, JSON has no spelling for them"""
    if isinstance(data, float):
        return data if math.isfinite(data) else None
    if isinstance(data, dict):
        return {key: _finite(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_finite(value) for value in data]
    return data


def to_json_text(data) -> str:
    """Deterministic text: insertion-ordered keys, indent 2, shortest float repr

    Examples
    --------
    >>> print(to_json_text({"b": 0.1, "a": float("inf")}), end="")
    {
      "b": 0.1,
      "a": null
    }
    """
    return json.dumps(_finite(data), indent=2) + "\n"


def write_json(data, path=None):
    """Write to `path`, or to stdout when `path` is None"""
    text = to_json_text(data)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def read_json(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MalformedPolynomial(f"{path} is not valid JSON: {e}") from e


def load_polynomial(path) -> SemiholoPoly:
    return SemiholoPoly.from_json(read_json(path))


def write_csv(df: pd.DataFrame, path=None):
    if path is None:
        df.to_csv(sys.stdout, index=False)
    else:
        df.to_csv(path, index=False)
