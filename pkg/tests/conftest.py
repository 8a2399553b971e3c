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
import numpy as np
import pytest
from hypothesis import settings

from braidfield.braid import parse_braid_word
from braidfield.configuration import Config, extract_configuration

settings.register_profile("braidfield", deadline=None, max_examples=50, derandomize=True)
settings.load_profile("braidfield")

# (word, strands) of the closures checked end to end
CORPUS = [
    ("1", 2),
    ("1 1", 2),
    ("1 1 1", 2),
    ("1 -2 1 -2", 3),
    ("2 -1 2 1 1 1", 3),
    ("1 -2 1 -2 -2 -2", 3),
]

# x-values of the single component of 2 -1 2 1 1 1, walked in closure order
FIVE_TWO_VALUES = [1, 1, 0, -1, -1, -1, -1, 0, 1, 1, 0, 1, 0, -1, -1, 0, 1, 0]


@pytest.fixture
def five_two():
    return parse_braid_word("2 -1 2 1 1 1")


@pytest.fixture(scope="session")
def config():
    return Config.from_mapping(extract_configuration(None))


@pytest.fixture
def rng(config):
    return np.random.default_rng(config.seed)
