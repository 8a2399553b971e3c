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
from pathlib import Path

import pytest

from braidfield.configuration import DEFAULTS, Config, extract_configuration
from braidfield.exceptions import ConfigError


def test_missing_file_gives_the_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv("BRAIDFIELD_THREADS", raising=False)
    assert extract_configuration(str(tmp_path / "missing.yml")) == DEFAULTS
    assert extract_configuration(None) == DEFAULTS


def test_yaml_values_override_the_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv("BRAIDFIELD_THREADS", raising=False)
    path = tmp_path / "config.yml"
    path.write_text("samples: 1024\nLAMBDA: 0.25\n")
    config = extract_configuration(str(path))
    assert config["SAMPLES"] == 1024
    assert config["LAMBDA"] == 0.25
    assert config["GRID"] == DEFAULTS["GRID"]


def test_environment_sets_the_threads(monkeypatch):
    monkeypatch.setenv("BRAIDFIELD_THREADS", "4")
    assert Config.from_mapping(extract_configuration(None)).threads == 4


def test_flags_take_precedence(monkeypatch):
    monkeypatch.delenv("BRAIDFIELD_THREADS", raising=False)
    config = Config.from_mapping(DEFAULTS, samples=256, tol=None, lam=0.5)
    assert config.samples == 256
    assert config.tol == DEFAULTS["TOL"]
    assert config.lam == 0.5


def test_not_a_mapping(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        extract_configuration(str(path))


@pytest.mark.parametrize(
    "overrides",
    [
        {"tol": 0.01},
        {"samples": 10},
        {"repeat": 0},
        {"grid": 8},
        {"threads": 0},
        {"lam": 1.5},
        {"samples": "many"},
    ],
)
def test_invalid_values(overrides):
    with pytest.raises(ConfigError):
        Config.from_mapping(DEFAULTS, **overrides)


def test_repository_configuration():
    path = Path(__file__).parents[1] / "config.yml"
    config = Config.from_mapping(extract_configuration(str(path)))
    assert config.grid == 4096
    assert config.lam is None
