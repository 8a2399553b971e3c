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
"""Crossings of the interpolated diagram and the data points of G"""

import dataclasses
import itertools
import logging
from typing import Dict, List, Mapping, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from braidfield.braid import BraidWord, Components, PositionChart, StrandLabel
from braidfield.exceptions import BoundaryCrossing, DegenerateCrossing
from braidfield.interp import TrigPoly
from braidfield.utils import TWO_PI

_LOG = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
BOUNDARY_TOL = 1e-9
TOUCH_TOL = 1e-9
MERGE_TOL = 1e-10


@dataclasses.dataclass(frozen=True, order=True)
class Crossing:
    """Solution t0 of X_first(t0) = X_second(t0), in braid time [0, 2 pi)"""

    t0: float
    first: StrandLabel
    second: StrandLabel
    interval: int
    transverse: bool = True

    @property
    def labels(self) -> Tuple[StrandLabel, StrandLabel]:
        return self.first, self.second

    @property
    def multiplicity(self) -> int:
        """Tangential touches count as two crossings"""
        return 1 if self.transverse else 2

    def phase(self, label: StrandLabel, comps: Components) -> float:
        """Abscissa (t0 + 2 pi j) / s_C of the crossing on the interpolant of `label`"""
        s_c = comps.cycles[label.component].length
        return (self.t0 + TWO_PI * label.index) / s_c


def strand_curve(F: TrigPoly, index: int, s_c: int):
    """t -> F((t + 2 pi j) / s_C), the x-coordinate of strand j"""

    def curve(t):
        return F((np.asarray(t) + TWO_PI * index) / s_c)

    return curve


def _interval(t0: float, length: int) -> Tuple[int, float]:
    """1-based interval containing t0 and the distance to its boundary"""
    width = TWO_PI / length
    k = min(int(np.floor(t0 / width)), length - 1)
    distance = min(t0 - k * width, (k + 1) * width - t0)
    return k + 1, distance


def _scan_pair(fa, fb, grid: np.ndarray, d: np.ndarray = None) -> List[Tuple[float, bool]]:
    """Roots of fa - fb on [0, 2 pi): sign changes plus tangential touches"""

    def diff(t):
        return fa(t) - fb(t)

    if d is None:
        d = diff(grid)
    found = []
    for i in np.flatnonzero(d[:-1] * d[1:] <= 0):
        if d[i] == 0:
            t0 = grid[i]
        elif d[i + 1] == 0:
            continue
        else:
            t0 = brentq(diff, grid[i], grid[i + 1], xtol=ROOT_XTOL)
        found.append((float(t0), True))

    a = np.abs(d)
    minima = np.flatnonzero((a[1:-1] <= a[:-2]) & (a[1:-1] < a[2:])) + 1
    for i in minima:
        if d[i - 1] * d[i] <= 0 or d[i] * d[i + 1] <= 0:
            continue
        res = minimize_scalar(
            lambda t: abs(diff(t)),
            bounds=(grid[i - 1], grid[i + 1]),
            method="bounded",
            options={"xatol": ROOT_XTOL},
        )
        if res.fun < TOUCH_TOL:
            found.append((float(res.x), False))

    # the period end is t = 0 again
    wrapped = sorted(
        (0.0 if t0 > TWO_PI - MERGE_TOL else t0, transverse) for t0, transverse in found
    )
    merged = []
    for t0, transverse in wrapped:
        if 0 <= t0 < TWO_PI and not (merged and t0 - merged[-1][0] < MERGE_TOL):
            merged.append((t0, transverse))
    return merged


def find_crossings(
    F: Mapping[int, TrigPoly],
    comps: Components,
    length: int,
    grid: int = 4096,
) -> List[Crossing]:
    """All crossings between pairs of interpolated strands

    Parameters
    ----------
    F: dict
        Component label -> x interpolant F_C
    comps: Components
        Components of the braid
    length: int
        Word length ℓ, fixing the letter intervals
    grid: int
        Scan samples per strand; the grid holds grid * s points

    Returns
    -------
    out: list of Crossing
        Sorted by (t0, labels)

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word, components
    >>> comps = components(parse_braid_word("1"))
    >>> [round(c.t0, 9) for c in find_crossings({0: TrigPoly.cosine(1)}, comps, 1, 64)]
    [3.141592654]
    """
    if length == 0:
        return []

    labels = comps.labels()
    s = len(labels)
    curves = {
        label: strand_curve(F[label.component], label.index, comps.cycles[label.component].length)
        for label in labels
    }
    samples = grid * s
    base = np.linspace(0.0, TWO_PI, samples + 1)
    sampled = {label: curve(base) for label, curve in curves.items()}

    crossings = []
    for first, second in itertools.combinations(labels, 2):
        roots = _scan_pair(
            curves[first], curves[second], base, sampled[first] - sampled[second]
        )
        for t0, transverse in roots:
            k, distance = _interval(t0, length)
            if distance < BOUNDARY_TOL:
                raise BoundaryCrossing(
                    f"Strands {first} and {second} cross at t = {t0:.12f}, "
                    f"on the boundary of interval {k}"
                )
            crossings.append(Crossing(t0, first, second, k, transverse))

    return sorted(crossings)


def check_parity(crossings: List[Crossing], chart: PositionChart) -> List[str]:
    """Pairs whose crossing parity within an interval contradicts the word

    Only the pair of letter k may cross an odd number of times in interval k.

    Returns
    -------
    out: list of str
        Human readable violations, empty when the diagram is sound.
    """
    counts: Dict[Tuple[int, frozenset], int] = {}
    for c in crossings:
        key = (c.interval, frozenset(c.labels))
        counts[key] = counts.get(key, 0) + c.multiplicity

    violations = []
    for k, (over, under) in enumerate(chart.crossings, start=1):
        if counts.get((k, frozenset((over, under))), 0) % 2 != 1:
            violations.append(f"letter {k}: pair {over}-{under} crosses an even number of times")
    for (k, pair), n in counts.items():
        over, under = chart.crossings[k - 1]
        if pair != frozenset((over, under)) and n % 2:
            first, second = sorted(pair)
            violations.append(f"interval {k}: spurious pair {first}-{second} crosses {n} times")
    return violations


@dataclasses.dataclass(frozen=True)
class SignAssignment:
    """Per interval, the heights w_k given to the strands taking part in a crossing"""

    values: Tuple[Dict[StrandLabel, float], ...]

    def __getitem__(self, k: int) -> Dict[StrandLabel, float]:
        """Heights in interval k (1-based)"""
        return self.values[k - 1]


def _spread(i: int) -> float:
    """+2, -2, +3, -3, ..."""
    return float((2 + i // 2) * (1 if i % 2 == 0 else -1))


def assign_signs(
    b: BraidWord, crossings: List[Crossing], chart: PositionChart
) -> SignAssignment:
    """Heights making letter k the only effective crossing of interval k

    The strands of letter k get +1 (over) and -1 (under); any other
    strand met by a crossing of the interval gets its own value from
    +2, -2, +3, ... in label order.

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word, position_chart
    >>> b = parse_braid_word("1")
    >>> chart = position_chart(b)
    >>> c = Crossing(np.pi, *chart.charts[0], interval=1)
    >>> signs = assign_signs(b, [c], chart)
    >>> sorted(signs[1].values())
    [-1.0, 1.0]
    """
    values = []
    for k, (over, under) in enumerate(chart.crossings, start=1):
        heights = {over: 1.0, under: -1.0}
        others = sorted(
            {label for c in crossings if c.interval == k for label in c.labels}
            - {over, under}
        )
        for i, label in enumerate(others):
            heights[label] = _spread(i)
        values.append(heights)
    assert len(values) == b.length
    return SignAssignment(tuple(values))


def g_data_points(
    crossings: List[Crossing], signs: SignAssignment, comps: Components
) -> Dict[int, List[Tuple[float, float]]]:
    """Data points ((t0 + 2 pi j) / s_C, w_k(C, j)) of every G_C

    Returns
    -------
    out: dict
        Component label -> points sorted by abscissa. Components without
        crossings get an empty list.

    Raises
    ------
    DegenerateCrossing
        When one abscissa receives two different heights.
    """
    points: Dict[int, List[Tuple[float, float]]] = {c.label: [] for c in comps.cycles}
    for crossing in crossings:
        for label in crossing.labels:
            t_prime = crossing.phase(label, comps)
            y = signs[crossing.interval][label]
            points[label.component].append((t_prime, y))

    merged = {}
    for component, raw in points.items():
        kept: List[Tuple[float, float]] = []
        for t_prime, y in sorted(raw):
            if kept and abs(t_prime - kept[-1][0]) < MERGE_TOL:
                if y != kept[-1][1]:
                    raise DegenerateCrossing(
                        f"Component {component}: abscissa {t_prime:.12f} gets heights "
                        f"{kept[-1][1]} and {y}; rerun with a perturbed grid"
                    )
                continue
            kept.append((t_prime, y))
        if kept and TWO_PI - kept[-1][0] + kept[0][0] < MERGE_TOL:
            if kept[-1][1] != kept[0][1]:
                raise DegenerateCrossing(f"Component {component}: conflicting heights at t = 0")
            kept.pop()
        merged[component] = kept
    return merged


def data_point_bound(comps: Components, length: int, component: int) -> int:
    """Upper bound on the number of G data points of one component"""
    s_max = max(c.length for c in comps.cycles)
    s_c = comps.cycles[component].length
    return length * s_max**2 * (comps.count - 1) + (s_c + 1) * (s_c * length - 1)


def crossings_to_pandas(crossings: List[Crossing]) -> pd.DataFrame:
    """Table used by `--dump-crossings`"""
    rows = [
        {
            "t0": c.t0,
            "C": c.first.component,
            "j": c.first.index,
            "C'": c.second.component,
            "m": c.second.index,
            "interval": c.interval,
            "transverse": c.transverse,
        }
        for c in crossings
    ]
    return pd.DataFrame(rows, columns=["t0", "C", "j", "C'", "m", "interval", "transverse"])
