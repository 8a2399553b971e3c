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
"""Braid words: parsing, permutation, components, charts and homogeneity"""

import dataclasses
import re
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from braidfield.exceptions import (
    IndexOutOfRange,
    MalformedWord,
    TrivialNeedsStrands,
)

LETTER_PATTERN = re.compile(r"^[a-zA-Z\s]+$")


class Letter(NamedTuple):
    """Artin generator sigma_index raised to sign"""

    index: int
    sign: int


class StrandLabel(NamedTuple):
    """Strand `index` of link component `component`"""

    component: int
    index: int

    def __str__(self):
        return f"({self.component},{self.index})"


@dataclasses.dataclass(frozen=True)
class BraidWord:
    """Sequence of signed Artin generators on `strands` strands

    Parameters
    ----------
    strands: int
        Number of strands s >= 1
    letters: tuple
        Letters (index, sign) with 1 <= index <= s - 1
    trivial: bool
        Must be set for the empty word

    Examples
    --------
    >>> b = BraidWord(3, ((2, 1), (1, -1)))
    >>> b.length, b.tokens
    (2, (2, -1))
    >>> BraidWord(2, ())
    Traceback (most recent call last):
    ...
    braidfield.exceptions.TrivialNeedsStrands: An empty braid word must be flagged as trivial
    """

    strands: int
    letters: Tuple[Letter, ...] = ()
    trivial: bool = False

    def __post_init__(self):
        if self.strands < 1:
            raise IndexOutOfRange(f"A braid needs at least one strand, got {self.strands}")
        letters = tuple(Letter(int(i), int(s)) for i, s in self.letters)
        for letter in letters:
            if not 1 <= letter.index <= self.strands - 1:
                raise IndexOutOfRange(
                    f"Generator index {letter.index} outside [1, {self.strands - 1}]"
                )
            if letter.sign not in (-1, 1):
                raise MalformedWord(f"Letter sign must be +1 or -1, got {letter.sign}")
        if not letters and not self.trivial:
            raise TrivialNeedsStrands("An empty braid word must be flagged as trivial")
        object.__setattr__(self, "letters", letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def tokens(self) -> Tuple[int, ...]:
        return tuple(letter.sign * letter.index for letter in self.letters)

    def __str__(self):
        return " ".join(str(t) for t in self.tokens)

    def power(self, r: int) -> "BraidWord":
        """Word of B^r"""
        assert r >= 1, f"power must be positive, got {r}"
        return BraidWord(self.strands, self.letters * r, trivial=self.trivial)

    def rotated(self, k: int) -> "BraidWord":
        """Cyclic rotation by k letters (same closure)"""
        if not self.letters:
            return self
        k = k % self.length
        return BraidWord(self.strands, self.letters[k:] + self.letters[:k])

    def to_json(self) -> dict:
        return {"strands": self.strands, "word": list(self.tokens)}

    @classmethod
    def from_json(cls, data: dict) -> "BraidWord":
        try:
            strands = int(data["strands"])
            word = [int(t) for t in data["word"]]
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedWord(f"Invalid braid JSON: {e}") from e
        return parse_braid_word(" ".join(str(t) for t in word), strands=strands)


def _letter_tokens(text: str) -> List[int]:
    """Compact letter form: a = sigma_1, A = sigma_1^-1, b = sigma_2, ..."""
    tokens = []
    for char in text:
        if char.isspace():
            continue
        value = ord(char.lower()) - ord("a") + 1
        tokens.append(value if char.islower() else -value)
    return tokens


def parse_braid_word(text: str, strands: Optional[int] = None) -> BraidWord:
    """Parse a braid word from whitespace-separated signed integers

    Parameters
    ----------
    text: str
        Tokens such as "2 -1 2 1 1 1", or the letter form "bAbaaa"
    strands: int, optional
        Number of strands. Inferred as max |token| + 1 if not given.

    Returns
    -------
    out: BraidWord

    Examples
    --------
    >>> b = parse_braid_word("2 -1 2 1 1 1")
    >>> b.strands, b.length
    (3, 6)
    >>> b.letters[1]
    Letter(index=1, sign=-1)
    >>> parse_braid_word("bAbaaa") == b
    True
    >>> parse_braid_word("", strands=1).trivial
    True
    >>> parse_braid_word("3 -1", strands=3)
    Traceback (most recent call last):
    ...
    braidfield.exceptions.IndexOutOfRange: Generator index 3 outside [1, 2]
    """
    text = text.strip()
    if text and LETTER_PATTERN.match(text):
        values = _letter_tokens(text)
    else:
        values = []
        for token in text.replace(",", " ").split():
            try:
                value = int(token)
            except ValueError as e:
                raise MalformedWord(f"Token {token!r} is not an integer") from e
            if value == 0:
                raise MalformedWord("Token 0 does not name a generator")
            values.append(value)

    if strands is None:
        if not values:
            raise TrivialNeedsStrands("The empty word needs an explicit strand count")
        strands = max(abs(v) for v in values) + 1

    letters = tuple(Letter(abs(v), 1 if v > 0 else -1) for v in values)
    return BraidWord(int(strands), letters, trivial=not letters)


def strand_orders(b: BraidWord) -> Iterator[Tuple[int, ...]]:
    """Yield, before and after each letter, which strand sits at each position

    Strands are named by their starting position (0-based). ℓ + 1 tuples
    are produced.

    Examples
    --------
    >>> list(strand_orders(parse_braid_word("1 1")))
    [(0, 1), (1, 0), (0, 1)]
    """
    order = list(range(b.strands))
    yield tuple(order)
    for letter in b.letters:
        i = letter.index - 1
        order[i], order[i + 1] = order[i + 1], order[i]
        yield tuple(order)


def permutation(b: BraidWord) -> Tuple[int, ...]:
    """pi_B: starting position -> end position, 0-based

    Examples
    --------
    >>> permutation(parse_braid_word("2 -1 2 1 1 1"))
    (2, 0, 1)
    """
    *_, final = strand_orders(b)
    perm = [0] * b.strands
    for position, strand in enumerate(final):
        perm[strand] = position
    return tuple(perm)


@dataclasses.dataclass(frozen=True)
class Cycle:
    """Cycle of pi_B: strands listed in the order pi_B visits them"""

    label: int
    strands: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.strands)


@dataclasses.dataclass(frozen=True)
class Components:
    permutation: Tuple[int, ...]
    cycles: Tuple[Cycle, ...]

    @property
    def count(self) -> int:
        return len(self.cycles)

    def label_of(self, strand: int) -> StrandLabel:
        """Label (C, j) of the strand starting at position `strand`"""
        for cycle in self.cycles:
            if strand in cycle.strands:
                return StrandLabel(cycle.label, cycle.strands.index(strand))
        raise KeyError(strand)

    def start_of(self, label: StrandLabel) -> int:
        """Starting position of the strand labelled (C, j)"""
        return self.cycles[label.component].strands[label.index]

    def labels(self) -> List[StrandLabel]:
        return [
            StrandLabel(cycle.label, j) for cycle in self.cycles for j in range(cycle.length)
        ]


def components(b: BraidWord) -> Components:
    """Disjoint cycles of pi_B, i.e. the components of the closure

    Cycles are enumerated from the smallest unvisited strand, and
    within a cycle strands follow pi_B.

    Examples
    --------
    >>> comps = components(parse_braid_word("2 -1 2 1 1 1"))
    >>> comps.count, comps.cycles[0].strands
    (1, (0, 2, 1))
    >>> [c.strands for c in components(parse_braid_word("1 1")).cycles]
    [(0,), (1,)]
    >>> components(parse_braid_word("", strands=2)).count
    2
    """
    perm = permutation(b)
    seen = set()
    cycles = []
    for start in range(b.strands):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        cycles.append(Cycle(len(cycles), tuple(cycle)))
    return Components(perm, tuple(cycles))


@dataclasses.dataclass(frozen=True)
class PositionChart:
    """Strand labels per position, before each letter and after the last one

    `charts[k - 1]` is the arrangement entering interval k, so consecutive
    charts differ by the transposition of letter k; `crossings[k - 1]` is
    the (over, under) pair of letter k.
    """

    charts: Tuple[Tuple[StrandLabel, ...], ...]
    crossings: Tuple[Tuple[StrandLabel, StrandLabel], ...]

    def interval(self, k: int) -> Tuple[StrandLabel, ...]:
        """Arrangement entering interval k (1-based)"""
        return self.charts[k - 1]

    @property
    def exit_chart(self) -> Tuple[StrandLabel, ...]:
        return self.charts[-1]


def position_chart(b: BraidWord) -> PositionChart:
    """Position to strand-label charts and over/under pairs per letter

    sigma_i sends the strand in position i over the one in position i + 1.

    Examples
    --------
    >>> chart = position_chart(parse_braid_word("1"))
    >>> chart.crossings[0]
    (StrandLabel(component=0, index=0), StrandLabel(component=0, index=1))
    >>> position_chart(parse_braid_word("-1")).crossings[0][0]
    StrandLabel(component=0, index=1)
    >>> len(position_chart(parse_braid_word("", strands=2)).charts)
    1
    """
    comps = components(b)
    label = [comps.label_of(p) for p in range(b.strands)]
    orders = list(strand_orders(b))
    charts = tuple(tuple(label[strand] for strand in order) for order in orders)

    crossings = []
    for k, letter in enumerate(b.letters):
        upper = charts[k][letter.index - 1]
        lower = charts[k][letter.index]
        crossings.append((upper, lower) if letter.sign > 0 else (lower, upper))

    return PositionChart(charts, tuple(crossings))


def beta(b: BraidWord) -> int:
    """Cyclic sign alternations per generator plus unused generators

    Examples
    --------
    >>> beta(parse_braid_word("1 -2 1 -2"))
    0
    >>> beta(parse_braid_word("2 -1 2 1 1 1"))
    2
    >>> beta(parse_braid_word("", strands=2))
    1
    """
    letters = b.letters
    ell = len(letters)
    changes = 0
    for j, letter in enumerate(letters):
        for step in range(1, ell + 1):
            following = letters[(j + step) % ell]
            if following.index == letter.index:
                changes += following.sign != letter.sign
                break
    used = {letter.index for letter in letters}
    missing = sum(1 for i in range(1, b.strands) if i not in used)
    return changes + missing


def is_strictly_homogeneous(b: BraidWord) -> bool:
    """
    Examples
    --------
    >>> is_strictly_homogeneous(parse_braid_word("1 -2 1 -2"))
    True
    >>> is_strictly_homogeneous(parse_braid_word("1 -1"))
    False
    """
    return beta(b) == 0


def exponent_sum(b: BraidWord) -> int:
    return sum(letter.sign for letter in b.letters)


def signed_pair_counts(b: BraidWord) -> Dict[Tuple[int, int], int]:
    """Signed crossing count per pair of strands, keyed by starting positions

    Pairs whose crossings cancel are omitted.

    Examples
    --------
    >>> signed_pair_counts(parse_braid_word("1 1"))
    {(0, 1): 2}
    >>> signed_pair_counts(parse_braid_word("1 -1"))
    {}
    """
    counts: Dict[Tuple[int, int], int] = {}
    for order, letter in zip(strand_orders(b), b.letters):
        p, q = order[letter.index - 1], order[letter.index]
        key = (min(p, q), max(p, q))
        counts[key] = counts.get(key, 0) + letter.sign
    return {k: v for k, v in sorted(counts.items()) if v != 0}


def same_diagram(first: BraidWord, second: BraidWord) -> bool:
    """Whether two words differ at most by the signs of their letters

    Such words share their position data, hence their F interpolants.

    Examples
    --------
    >>> same_diagram(parse_braid_word("2 -1 2 1 1 1"), parse_braid_word("2 1 -2 -1 -1 -1"))
    True
    """
    return first.strands == second.strands and [
        letter.index for letter in first.letters
    ] == [letter.index for letter in second.letters]
