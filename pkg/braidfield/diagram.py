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
"""Braid diagram sampling and the data points of the F interpolants"""

import dataclasses
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from braidfield.braid import BraidWord, Components, Cycle, components, strand_orders
from braidfield.utils import TWO_PI


def position_value(position, strands: int):
    """x-coordinate of a 1-based diagram position

    Strands are equidistant and symmetric around x = 0.

    Examples
    --------
    >>> [position_value(p, 3) for p in (1, 2, 3)]
    [1.0, 0.0, -1.0]
    """
    return (strands + 1) / 2.0 - position


def strand_positions(b: BraidWord) -> np.ndarray:
    """x-value of every strand at every braid-level sample

    Parameters
    ----------
    b: BraidWord

    Returns
    -------
    out: np.ndarray
        Array of shape (max(ℓ, 1), s); entry [k, p] is the x-value of the
        strand starting at position p (0-based) during the k-th sample,
        i.e. after k letters. The empty word gives one constant row.

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word
    >>> strand_positions(parse_braid_word("1"))
    array([[ 0.5, -0.5]])
    >>> strand_positions(parse_braid_word("1 1")).tolist()
    [[0.5, -0.5], [-0.5, 0.5]]
    """
    orders = list(strand_orders(b))[: max(b.length, 1)]
    table = np.empty((len(orders), b.strands))
    for k, order in enumerate(orders):
        for position, strand in enumerate(order):
            table[k, strand] = position_value(position + 1, b.strands)
    return table


def f_data_points(
    b: BraidWord, cycle: Cycle, table: np.ndarray = None
) -> List[Tuple[float, float]]:
    """Equally spaced data points (t, x) of the F interpolant of one component

    The component's strands are walked in pi_B order, each contributing
    its ℓ samples, so node k sits at 2 pi k / (s_C ℓ).

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word
    >>> b = parse_braid_word("2 -1 2 1 1 1")
    >>> points = f_data_points(b, components(b).cycles[0])
    >>> [int(x) for _, x in points]
    [1, 1, 0, -1, -1, -1, -1, 0, 1, 1, 0, 1, 0, -1, -1, 0, 1, 0]
    >>> round(points[1][0], 6)
    0.349066
    """
    if table is None:
        table = strand_positions(b)
    samples = table.shape[0]
    count = cycle.length * samples
    values = np.concatenate([table[:, strand] for strand in cycle.strands])
    nodes = TWO_PI * np.arange(count) / count
    return [(float(t), float(x)) for t, x in zip(nodes, values)]


@dataclasses.dataclass(frozen=True)
class DiagramData:
    """Per-component F data and the letter abscissas of the diagram"""

    points: Dict[int, List[Tuple[float, float]]]
    crossing_abscissas: Tuple[float, ...]

    def values(self, component: int) -> np.ndarray:
        return np.array([x for _, x in self.points[component]])

    def to_pandas(self) -> pd.DataFrame:
        """Flat table used by `--dump-fdata`"""
        rows = [
            {"component": c, "k": k, "t": t, "x": x}
            for c, points in self.points.items()
            for k, (t, x) in enumerate(points)
        ]
        return pd.DataFrame(rows, columns=["component", "k", "t", "x"])


def diagram_data(b: BraidWord, comps: Components = None) -> DiagramData:
    """Sample the diagram of `b` once for all components

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word
    >>> data = diagram_data(parse_braid_word("1 1"))
    >>> sorted(data.points), len(data.points[0])
    ([0, 1], 2)
    >>> [round(t, 6) for t in data.crossing_abscissas]
    [1.570796, 4.712389]
    """
    if comps is None:
        comps = components(b)
    table = strand_positions(b)
    points = {cycle.label: f_data_points(b, cycle, table) for cycle in comps.cycles}
    ell = b.length
    abscissas = tuple(TWO_PI * (2 * k - 1) / (2 * ell) for k in range(1, ell + 1))
    return DiagramData(points, abscissas)

