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

from braidfield.braid import components, parse_braid_word
from braidfield.diagram import diagram_data, f_data_points, strand_positions
from braidfield.utils import TWO_PI

from conftest import FIVE_TWO_VALUES


def test_five_two_data_points(five_two):
    points = f_data_points(five_two, components(five_two).cycles[0])
    assert [x for _, x in points] == FIVE_TWO_VALUES
    np.testing.assert_allclose([t for t, _ in points], TWO_PI * np.arange(18) / 18)


def test_positions_are_symmetric(five_two):
    table = strand_positions(five_two)
    assert table.shape == (6, 3)
    for row in table:
        assert sorted(row.tolist()) == [-1.0, 0.0, 1.0]


def test_single_crossing():
    data = diagram_data(parse_braid_word("1"))
    assert data.points[0] == [(0.0, 0.5), (np.pi, -0.5)]
    assert data.crossing_abscissas == pytest.approx((np.pi,))


def test_trivial_braid_is_constant():
    b = parse_braid_word("", strands=2)
    data = diagram_data(b)
    assert data.values(0).tolist() == [0.5]
    assert data.values(1).tolist() == [-0.5]
    assert data.crossing_abscissas == ()


def test_sign_variants_share_the_data(five_two):
    mirror = parse_braid_word("2 1 -2 -1 -1 -1")
    assert diagram_data(five_two).points == diagram_data(mirror).points


def test_to_pandas():
    df = diagram_data(parse_braid_word("1 1")).to_pandas()
    assert list(df.columns) == ["component", "k", "t", "x"]
    assert len(df) == 4
    assert sorted(df["component"].unique().tolist()) == [0, 1]
