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
"""Fourier parametrisations of braids and their semiholomorphic polynomials"""

import dataclasses
import functools
import logging
import operator
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy.signal import convolve2d

from braidfield.braid import (
    BraidWord,
    Components,
    PositionChart,
    components,
    parse_braid_word,
    position_chart,
)
from braidfield.crossings import (
    Crossing,
    SignAssignment,
    assign_signs,
    check_parity,
    find_crossings,
    g_data_points,
)
from braidfield.diagram import DiagramData, diagram_data
from braidfield.exceptions import (
    CancellationFailure,
    DegenerateCrossing,
    MalformedPolynomial,
)
from braidfield.interp import TrigPoly, dft_interpolate, lagrange_trig_interpolate
from braidfield.utils import TWO_PI

_LOG = logging.getLogger(__name__)

Monomial = Tuple[int, int, int]


@dataclasses.dataclass(frozen=True, eq=False)
class ComponentCurve:
    """Interpolants (F_C, G_C) of one component with s_C strands"""

    F: TrigPoly
    G: TrigPoly
    strands: int

    def values(self, t, a: float, b: float) -> np.ndarray:
        """a F_C((t + 2 pi j) / s_C) + i b G_C((t + 2 pi j) / s_C), j along the last axis"""
        t = np.asarray(t, dtype=float)
        tau = (t[..., None] + TWO_PI * np.arange(self.strands)) / self.strands
        return a * self.F(tau) + 1j * b * self.G(tau)


@dataclasses.dataclass(frozen=True, eq=False)
class FourierBraid:
    """Parametrisation u = a F_C((t + 2 pi j) / s_C) + i b G_C(...) of a closed braid

    Parameters
    ----------
    curves: tuple of ComponentCurve
        One entry per component, in component label order
    lam: float
        Common amplitude; a = lam * a1 and b = lam * b1
    a1, b1: float
        Relative amplitudes, positive
    repeats: int
        Braid-time multiplier: strand values are read at repeats * t
    braid: BraidWord, optional
        Word the parametrisation was built from
    """

    curves: Tuple[ComponentCurve, ...]
    lam: float = 1.0
    a1: float = 1.0
    b1: float = 1.0
    repeats: int = 1
    braid: Optional[BraidWord] = None

    def __post_init__(self):
        assert len(self.curves) > 0, "a braid needs at least one component"
        assert self.a1 > 0 and self.b1 > 0, "amplitudes a1, b1 must be positive"
        assert self.lam > 0, f"lambda must be positive, got {self.lam}"
        assert self.repeats >= 1, f"repeats must be positive, got {self.repeats}"

    @property
    def strands(self) -> int:
        return sum(curve.strands for curve in self.curves)

    @property
    def a(self) -> float:
        return self.lam * self.a1

    @property
    def b(self) -> float:
        return self.lam * self.b1

    def strand_values(self, t) -> np.ndarray:
        """u-values of every strand, components concatenated along the last axis"""
        t = self.repeats * np.asarray(t, dtype=float)
        return np.concatenate([curve.values(t, self.a, self.b) for curve in self.curves], axis=-1)

    def direct_product(self, u, t) -> np.ndarray:
        """prod over strands of (u - strand value), evaluated without expansion"""
        u = np.asarray(u, dtype=complex)
        roots = self.strand_values(t)
        return np.prod(u[..., None] - roots, axis=-1)

    def with_lambda(self, lam: float) -> "FourierBraid":
        return dataclasses.replace(self, lam=lam)

    def repeat(self, r: int) -> "FourierBraid":
        """Parametrisation of the r-fold repeated braid, t -> r t"""
        assert r >= 1, f"repeat count must be positive, got {r}"
        braid = self.braid.power(r) if self.braid is not None else None
        return dataclasses.replace(self, repeats=self.repeats * r, braid=braid)


@dataclasses.dataclass(frozen=True, eq=False)
class FractionalLaurent:
    """Polynomial in u with Laurent coefficients in q = e^{it / s_C}

    `coeffs[k, i]` multiplies u^k q^{i - offset}.
    """

    coeffs: np.ndarray
    offset: int
    denominator: int

    def terms(self) -> Dict[Tuple[int, int], complex]:
        """(u-power, numerator over `denominator`) -> coefficient, nonzero entries only"""
        rows, cols = np.nonzero(self.coeffs)
        return {
            (int(k), int(i) - self.offset): complex(self.coeffs[k, i]) for k, i in zip(rows, cols)
        }

    def fractional_residual(self) -> float:
        """Largest coefficient of a non-integral power of e^{it}, relative"""
        scale = np.abs(self.coeffs).max(initial=0.0)
        if scale == 0:
            return 0.0
        exponents = np.arange(self.coeffs.shape[1]) - self.offset
        fractional = np.mod(exponents, self.denominator) != 0
        return float(np.abs(self.coeffs[:, fractional]).max(initial=0.0) / scale)


@dataclasses.dataclass(frozen=True, eq=False)
class LaurentUV:
    """Polynomial in u with Laurent coefficients in e^{it}; `coeffs[k, i]` multiplies u^k e^{i(i - offset)t}"""

    coeffs: np.ndarray
    offset: int

    def __mul__(self, other: "LaurentUV") -> "LaurentUV":
        return LaurentUV(convolve2d(self.coeffs, other.coeffs), self.offset + other.offset)


def _padded(p: TrigPoly, degree: int) -> np.ndarray:
    out = np.zeros(2 * degree + 1, dtype=complex)
    n = p.degree
    out[degree - n : degree + n + 1] = p.coeffs
    return out


def expand_component(F: TrigPoly, G: TrigPoly, s_c: int, a: float, b: float) -> FractionalLaurent:
    """Expand prod_j (u - a F((t + 2 pi j)/s_C) - i b G((t + 2 pi j)/s_C))

    Each root is a Laurent polynomial in q = e^{it/s_C} whose coefficient of
    q^m carries the phase e^{2 pi i m j / s_C}. The product is built one
    linear factor at a time on a dense (u-power, q-power) grid.

    Examples
    --------
    >>> p = expand_component(TrigPoly.cosine(1), TrigPoly.sine(1), 2, 1.0, 1.0)
    >>> {key: round(c.real, 12) for key, c in sorted(p.terms().items()) if abs(c) > 1e-12}
    {(0, 2): -1.0, (2, 0): 1.0}
    >>> expand_component(TrigPoly.constant(0.5), TrigPoly.zero(), 1, 2.0, 1.0).terms()
    {(0, 0): (-1+0j), (1, 0): (1+0j)}
    """
    assert s_c >= 1, f"a component has at least one strand, got {s_c}"
    degree = max(F.degree, G.degree)
    h = a * _padded(F, degree) + 1j * b * _padded(G, degree)
    m = np.arange(-degree, degree + 1)

    poly = np.ones((1, 1), dtype=complex)
    for j in range(s_c):
        root = h * np.exp(2j * np.pi * np.mod(m * j, s_c) / s_c)
        rows, width = poly.shape
        grown = np.zeros((rows + 1, width + 2 * degree), dtype=complex)
        grown[1:, degree : degree + width] += poly
        grown[:-1, :] -= convolve2d(poly, root[None, :])
        poly = grown
    return FractionalLaurent(poly, s_c * degree, s_c)


def assert_cancellation(p: FractionalLaurent, tol: float = 1e-9) -> LaurentUV:
    """Drop the fractional powers of e^{it}, which must vanish

    Raises
    ------
    CancellationFailure
        When a fractional coefficient exceeds `tol` times the largest one.

    Examples
    --------
    >>> p = expand_component(TrigPoly.cosine(1), TrigPoly.sine(1), 2, 1.0, 1.0)
    >>> q = assert_cancellation(p)
    >>> q.offset, q.coeffs.shape
    (1, (3, 3))
    """
    s_c = p.denominator
    scale = np.abs(p.coeffs).max(initial=0.0)
    exponents = np.arange(p.coeffs.shape[1]) - p.offset
    fractional = np.mod(exponents, s_c) != 0
    bad = np.abs(p.coeffs) * fractional[None, :] >= tol * scale
    if scale > 0 and bad.any():
        k, i = (int(x) for x in np.argwhere(bad)[0])
        value = p.coeffs[k, i]
        raise CancellationFailure(
            f"Coefficient {value:.3e} of u^{k} e^(i {exponents[i]}/{s_c} t) did not cancel",
            exponent=(k, int(exponents[i])),
        )
    assert p.offset % s_c == 0, "offset of a component expansion is a multiple of s_C"
    return LaurentUV(p.coeffs[:, ::s_c].copy(), p.offset // s_c)


class SemiholoPoly:
    """Polynomial sum c u^k v^n conj(v)^m in u and v

    Parameters
    ----------
    terms: dict
        (k, n, m) -> complex coefficient
    strands: int, optional
        Number of strands s; defaults to the u-degree, which it must equal
    lam: float
        Amplitude the polynomial was assembled with
    braid: BraidWord, optional
        Provenance

    Examples
    --------
    >>> f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -0.25}, lam=0.5)
    >>> f.degree, f.is_harmonic()
    (2, True)
    >>> complex(f(1.0, 4.0))
    0j
    """

    def __init__(
        self,
        terms: Mapping[Monomial, complex],
        strands: Optional[int] = None,
        lam: float = 1.0,
        braid: Optional[BraidWord] = None,
    ):
        cleaned: Dict[Monomial, complex] = {}
        for key, c in terms.items():
            k, n, m = (int(x) for x in key)
            assert min(k, n, m) >= 0, f"negative exponent in monomial {key}"
            cleaned[(k, n, m)] = cleaned.get((k, n, m), 0j) + complex(c)
        cleaned = {key: c for key, c in cleaned.items() if c != 0}

        u_degree = max((k for k, _, _ in cleaned), default=0)
        if strands is None:
            strands = u_degree
        if strands < 1 or u_degree != strands:
            raise MalformedPolynomial(
                f"u-degree {u_degree} does not match the number of strands {strands}"
            )
        self.terms = dict(sorted(cleaned.items(), key=lambda item: monomial_order(item[0])))
        self.strands = int(strands)
        self.lam = float(lam)
        self.braid = braid

        self._k = np.array([k for k, _, _ in self.terms], dtype=int)
        self._n = np.array([n for _, n, _ in self.terms], dtype=int)
        self._m = np.array([m for _, _, m in self.terms], dtype=int)
        self._c = np.array(list(self.terms.values()), dtype=complex)

    @property
    def degree(self) -> int:
        return int((self._k + self._n + self._m).max(initial=0))

    @property
    def scale(self) -> float:
        """Largest coefficient modulus"""
        return float(np.abs(self._c).max(initial=0.0))

    def is_harmonic(self) -> bool:
        return not bool(np.any((self._n > 0) & (self._m > 0)))

    def u_coefficients(self, v) -> np.ndarray:
        """Coefficients in u at fixed v, highest degree first, along the last axis"""
        v = np.asarray(v, dtype=complex)
        vbar = np.conj(v)
        out = np.zeros(v.shape + (self.strands + 1,), dtype=complex)
        for k, n, m, c in zip(self._k, self._n, self._m, self._c):
            out[..., self.strands - k] += c * v**n * vbar**m
        return out

    def radial_coefficients(self, r, t) -> np.ndarray:
        """Coefficients in u of the r-derivative at v = r e^{it}, highest degree first"""
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        shape = np.broadcast(r, t).shape
        out = np.zeros(shape + (self.strands + 1,), dtype=complex)
        for k, n, m, c in zip(self._k, self._n, self._m, self._c):
            power = n + m
            if power == 0:
                continue
            out[..., self.strands - k] += c * power * r ** (power - 1) * np.exp(1j * (n - m) * t)
        return out

    def __call__(self, u, v):
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        vbar = np.conj(v)
        total = np.zeros(np.broadcast(u, v).shape, dtype=complex)
        for k, n, m, c in zip(self._k, self._n, self._m, self._c):
            total = total + c * u**k * v**n * vbar**m
        return total

    def rescale(self, lam: float) -> "SemiholoPoly":
        """Polynomial of the same parametrisation at amplitude `lam`

        Examples
        --------
        >>> f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -1.0})
        >>> f.rescale(0.5).terms[(0, 1, 0)]
        (-0.25+0j)
        """
        assert lam > 0, f"lambda must be positive, got {lam}"
        ratio = lam / self.lam
        terms = {
            (k, n, m): c * ratio ** (self.strands - k) for (k, n, m), c in self.terms.items()
        }
        return SemiholoPoly(terms, self.strands, lam, self.braid)

    def repeat(self, r: int) -> "SemiholoPoly":
        """Exponents of v and conj(v) multiplied by r"""
        assert r >= 1, f"repeat count must be positive, got {r}"
        terms = {(k, n * r, m * r): c for (k, n, m), c in self.terms.items()}
        braid = self.braid.power(r) if self.braid is not None else None
        return SemiholoPoly(terms, self.strands, self.lam, braid)

    def pruned(self, tol: float = 1e-9) -> "SemiholoPoly":
        """Real and imaginary parts below `tol` relative to the largest coefficient set to 0"""
        threshold = tol * self.scale
        terms = {}
        for key, c in self.terms.items():
            re = c.real if abs(c.real) >= threshold else 0.0
            im = c.imag if abs(c.imag) >= threshold else 0.0
            terms[key] = complex(re, im)
        return SemiholoPoly(terms, self.strands, self.lam, self.braid)

    def to_json(self) -> dict:
        out = {
            "strands": self.strands,
            "lambda": self.lam,
            "monomials": [
                {"u": k, "v": n, "vbar": m, "re": c.real, "im": c.imag}
                for (k, n, m), c in self.terms.items()
            ],
        }
        if self.braid is not None:
            out["braid"] = self.braid.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SemiholoPoly":
        try:
            terms = {
                (int(e["u"]), int(e["v"]), int(e["vbar"])): complex(
                    float(e["re"]), float(e["im"])
                )
                for e in data["monomials"]
            }
            braid = BraidWord.from_json(data["braid"]) if data.get("braid") else None
            return cls(terms, int(data["strands"]), float(data.get("lambda", 1.0)), braid)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedPolynomial(f"Invalid polynomial description: {e}") from e

    def __repr__(self):
        return f"SemiholoPoly(strands={self.strands}, degree={self.degree}, terms={len(self.terms)})"


def monomial_order(key: Monomial) -> Tuple[int, int, int]:
    """Serialization order: u-power descending, then v-power, then conj(v)-power"""
    k, n, m = key
    return (-k, n, m)


def assemble(fb: FourierBraid, tol: float = 1e-9, threads: int = 1) -> SemiholoPoly:
    """Expand the whole parametrisation into f(u, v, conj(v))

    Components are expanded concurrently; their product and the
    substitution e^{int} -> v^n, e^{-int} -> conj(v)^n are sequential.

    Examples
    --------
    >>> hopf = FourierBraid((
    ...     ComponentCurve(TrigPoly.cosine(1), TrigPoly.sine(1), 1),
    ...     ComponentCurve(TrigPoly.cosine(1, -1.0), TrigPoly.sine(1, -1.0), 1),
    ... ), lam=0.5)
    >>> sorted(assemble(hopf).terms.items())
    [((0, 2, 0), (-0.25+0j)), ((2, 0, 0), (1+0j))]
    """

    def expand(curve: ComponentCurve) -> LaurentUV:
        expanded = expand_component(curve.F, curve.G, curve.strands, fb.a, fb.b)
        return assert_cancellation(expanded, tol)

    if threads > 1 and len(fb.curves) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(expand, fb.curves))
    else:
        parts = [expand(curve) for curve in fb.curves]

    product = functools.reduce(operator.mul, parts)
    coeffs = product.coeffs.copy()
    threshold = tol * np.abs(coeffs).max(initial=0.0)
    coeffs.real[np.abs(coeffs.real) < threshold] = 0.0
    coeffs.imag[np.abs(coeffs.imag) < threshold] = 0.0

    terms: Dict[Monomial, complex] = {}
    for k, i in zip(*np.nonzero(coeffs)):
        n = (int(i) - product.offset) * fb.repeats
        key = (int(k), n, 0) if n >= 0 else (int(k), 0, -n)
        terms[key] = complex(coeffs[k, i])
    f = SemiholoPoly(terms, fb.strands, fb.lam, fb.braid)
    _LOG.debug(f"Assembled {f!r}")
    return f


def rescale(f: SemiholoPoly, lam: float) -> SemiholoPoly:
    return f.rescale(lam)


def repeat(x, r: int):
    """r repeats of a SemiholoPoly or a FourierBraid"""
    return x.repeat(r)


def degree(f: SemiholoPoly) -> int:
    return f.degree


def is_harmonic(f: SemiholoPoly) -> bool:
    return f.is_harmonic()


def degree_bounds(b: BraidWord) -> Tuple[float, int]:
    """Lower bound c1 on the F degree and upper bound c2 on deg f

    Examples
    --------
    >>> degree_bounds(parse_braid_word("2 -1 2 1 1 1"))
    (2.4, 33)
    """
    comps = components(b)
    chart = position_chart(b)
    sizes = [c.length for c in comps.cycles]
    s_max = max(sizes)
    ell = b.length
    c2 = max(
        (s_max * ell - 1) // 2,
        (ell * s_max**2 * comps.count + s_max * (ell - 1) - 2) // 2,
        b.strands,
    )

    counts: Dict[Tuple[int, int], int] = {}
    for over, under in chart.crossings:
        key = tuple(sorted((over.component, under.component)))
        counts[key] = counts.get(key, 0) + 1

    c1 = 0.0
    for (first, second), k in counts.items():
        if first != second:
            c1 = max(c1, k / (2 * max(sizes[first], sizes[second])))
    largest = sizes.index(s_max)
    own = counts.get((largest, largest), 0)
    if own:
        c1 = max(c1, 2 * own / (2 * s_max - 1))
    return c1, int(c2)


@dataclasses.dataclass(frozen=True, eq=False)
class Construction:
    """Every intermediate product of the braid to parametrisation pipeline"""

    braid: BraidWord
    components: Components
    chart: PositionChart
    diagram: DiagramData
    F: Dict[int, TrigPoly]
    crossings: List[Crossing]
    signs: SignAssignment
    g_points: Dict[int, List[Tuple[float, float]]]
    G: Dict[int, TrigPoly]
    fourier: FourierBraid


def construct(
    b: BraidWord,
    grid: int = 4096,
    tol: float = 1e-9,
    lam: float = 1.0,
    a1: float = 1.0,
    b1: float = 1.0,
) -> Construction:
    """Interpolate the diagram of `b`, locate its crossings and interpolate the heights

    Raises
    ------
    DegenerateCrossing
        When the interpolated diagram does not cross as the word says.
    """
    comps = components(b)
    chart = position_chart(b)
    data = diagram_data(b, comps)
    F = {c.label: dft_interpolate(data.values(c.label), tol) for c in comps.cycles}
    _LOG.info(f"F degrees {[F[c.label].degree for c in comps.cycles]} for {len(comps.cycles)} component(s)")

    crossings = find_crossings(F, comps, b.length, grid)
    violations = check_parity(crossings, chart)
    if violations:
        raise DegenerateCrossing(
            "Interpolated diagram disagrees with the word: " + "; ".join(violations)
        )
    _LOG.info(f"{len(crossings)} crossing(s) of the interpolated diagram")

    signs = assign_signs(b, crossings, chart)
    g_points = g_data_points(crossings, signs, comps)
    G = {label: lagrange_trig_interpolate(points, tol=tol) for label, points in g_points.items()}

    curves = tuple(ComponentCurve(F[c.label], G[c.label], c.length) for c in comps.cycles)
    fourier = FourierBraid(curves, lam=lam, a1=a1, b1=b1, braid=b)
    return Construction(b, comps, chart, data, F, crossings, signs, g_points, G, fourier)


def lemniscate_braid(
    strands: int, twist: int = 1, repeat: int = 1, a1: float = 1.0, b1: float = 1.0
) -> FourierBraid:
    """Single component with F = cos t and G = sin(twist t)

    Examples
    --------
    >>> f = assemble(lemniscate_braid(2, repeat=3))
    >>> sorted((key, round(c.real, 12)) for key, c in f.terms.items())
    [((0, 3, 0), -1.0), ((2, 0, 0), 1.0)]
    """
    curve = ComponentCurve(TrigPoly.cosine(1), TrigPoly.sine(twist), strands)
    # the two-strand torus braids are the only family whose crossings avoid t = 0
    braid = parse_braid_word(" ".join(["1"] * repeat)) if strands == 2 and twist == 1 else None
    return FourierBraid((curve,), a1=a1, b1=b1, repeats=repeat, braid=braid)


def spiral_braid(strands: int, G: TrigPoly, a1: float = 1.0, b1: float = 1.0) -> FourierBraid:
    """Single component with F = cos t and an arbitrary height G"""
    curve = ComponentCurve(TrigPoly.cosine(1), G, strands)
    return FourierBraid((curve,), a1=a1, b1=b1)
