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
"""Trigonometric polynomials and their interpolation on the circle"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from braidfield.exceptions import (
    DuplicateNode,
    EmptyData,
    SingularAlpha,
    SymmetryViolation,
)
from braidfield.utils import TWO_PI, angular_distance

_LOG = logging.getLogger(__name__)

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
NODE_SEPARATION = 1e-10
ALPHA_CLEARANCE = 1e-6
INTERPOLATION_TOL = 1e-9
ROUNDOFF_TOL = 1e-13


class TrigPoly:
    """Real trigonometric polynomial sum_k c_k e^{ikt}, k = -N..N

    Parameters
    ----------
    coeffs: array-like
        Complex coefficients c_{-N}, ..., c_N (odd length)

    Examples
    --------
    >>> p = TrigPoly.cosine(1)
    >>> p.degree, float(p(np.pi))
    (1, -1.0)
    >>> TrigPoly.zero()(1.234)
    0.0
    """

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        assert coeffs.ndim == 1 and coeffs.size % 2 == 1, (
            "TrigPoly needs an odd number of coefficients"
        )
        self.coeffs = coeffs

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls([0.0])

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls([value])

    @classmethod
    def cosine(cls, k: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * cos(kt)"""
        coeffs = np.zeros(2 * k + 1, dtype=complex)
        coeffs[0] += amplitude / 2
        coeffs[-1] += amplitude / 2
        return cls(coeffs)

    @classmethod
    def sine(cls, k: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * sin(kt)"""
        coeffs = np.zeros(2 * k + 1, dtype=complex)
        coeffs[0] = 0.5j * amplitude
        coeffs[-1] = -0.5j * amplitude
        return cls(coeffs)

    @classmethod
    def from_real(cls, cos: Sequence[float], sin: Sequence[float] = ()) -> "TrigPoly":
        """From a_0 + sum a_k cos(kt) + b_k sin(kt)

        `cos[0]` is the constant term, `sin[k - 1]` multiplies sin(kt).

        Examples
        --------
        >>> p = TrigPoly.from_real([1.0, 0.0, 2.0], [3.0])
        >>> bool(abs(p(0.3) - (1 + 2 * np.cos(0.6) + 3 * np.sin(0.3))) < 1e-12)
        True
        """
        n = max(len(cos) - 1, len(sin))
        coeffs = np.zeros(2 * n + 1, dtype=complex)
        coeffs[n] = cos[0] if len(cos) else 0.0
        for k in range(1, n + 1):
            a = cos[k] if k < len(cos) else 0.0
            b = sin[k - 1] if k - 1 < len(sin) else 0.0
            coeffs[n + k] = (a - 1j * b) / 2
            coeffs[n - k] = (a + 1j * b) / 2
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coefficient(self, k: int) -> complex:
        """c_k, zero outside the stored range"""
        n = self.degree
        return complex(self.coeffs[n + k]) if abs(k) <= n else 0j

    def real_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        """(a, b) with p(t) = a_0 + sum_k a_k cos(kt) + b_k sin(kt); b_0 = 0

        Examples
        --------
        >>> a, b = TrigPoly.sine(2, 3.0).real_coefficients()
        >>> a.tolist(), b.tolist()
        ([0.0, 0.0, 0.0], [0.0, 0.0, 3.0])
        """
        n = self.degree
        positive = self.coeffs[n:]
        a = 2 * positive.real
        a[0] = positive[0].real
        b = 0.0 - 2 * positive.imag
        b[0] = 0.0
        return a, b

    def evaluate_complex(self, t) -> np.ndarray:
        """sum_k c_k e^{ikt} without discarding the imaginary part"""
        t = np.asarray(t, dtype=float)
        n = self.degree
        z = np.exp(1j * t)
        # Horner in z, then shift by z^{-N}
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc * z ** (-n)

    def __call__(self, t, tol: float = 1e-9):
        return evaluate(self, t, tol)

    def derivative(self) -> "TrigPoly":
        n = self.degree
        return TrigPoly(self.coeffs * 1j * np.arange(-n, n + 1))

    def dilate(self, r: int) -> "TrigPoly":
        """t -> r t

        Examples
        --------
        >>> TrigPoly.cosine(1).dilate(3).degree
        3
        """
        assert r >= 1, f"dilation factor must be positive, got {r}"
        n = self.degree
        coeffs = np.zeros(2 * n * r + 1, dtype=complex)
        coeffs[:: r] = self.coeffs
        return TrigPoly(coeffs)

    def symmetrized(self) -> "TrigPoly":
        """c_k <- (c_k + conj(c_{-k})) / 2, the real part of the interpolant"""
        return TrigPoly((self.coeffs + np.conj(self.coeffs[::-1])) / 2)

    def pruned(self, tol: float = 1e-9) -> "TrigPoly":
        """Zero parts below `tol` relative to the largest coefficient, trim the degree

        Examples
        --------
        >>> TrigPoly([1e-15, 0, 2.0, 0, 1e-15]).pruned().degree
        0
        """
        coeffs = self.coeffs.copy()
        scale = np.abs(coeffs).max(initial=0.0)
        if scale == 0:
            return TrigPoly.zero()
        threshold = tol * scale
        coeffs.real[np.abs(coeffs.real) < threshold] = 0.0
        coeffs.imag[np.abs(coeffs.imag) < threshold] = 0.0
        while coeffs.size > 1 and coeffs[0] == 0 and coeffs[-1] == 0:
            coeffs = coeffs[1:-1]
        return TrigPoly(coeffs)

    def max_abs(self) -> float:
        """Upper bound of |p| on the real line"""
        return float(np.abs(self.coeffs).sum())

    def to_json(self) -> dict:
        n = self.degree
        return {
            "degree": n,
            "coeffs": [
                {"k": k, "re": float(c.real), "im": float(c.imag)}
                for k, c in zip(range(-n, n + 1), self.coeffs)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrigPoly":
        n = int(data["degree"])
        coeffs = np.zeros(2 * n + 1, dtype=complex)
        for entry in data["coeffs"]:
            coeffs[n + int(entry["k"])] = complex(entry["re"], entry["im"])
        return cls(coeffs)

    def __neg__(self):
        return TrigPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return TrigPoly(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        a, b = self.real_coefficients()
        terms = [f"{a[0]:.6g}"]
        for k in range(1, self.degree + 1):
            if a[k]:
                terms.append(f"{a[k]:+.6g} cos({k}t)")
            if b[k]:
                terms.append(f"{b[k]:+.6g} sin({k}t)")
        return f"TrigPoly({' '.join(terms)})"


def evaluate(p: TrigPoly, t, tol: float = 1e-9):
    """Real value of `p` at `t`

    Raises
    ------
    SymmetryViolation
        When the imaginary part exceeds `tol` relative to the coefficient scale.

    Examples
    --------
    >>> float(evaluate(TrigPoly.cosine(1), np.pi))
    -1.0
    >>> evaluate(TrigPoly([1j]), 0.0)
    Traceback (most recent call last):
    ...
    braidfield.exceptions.SymmetryViolation: Imaginary residual 1 exceeds tolerance
    """
    value = p.evaluate_complex(t)
    residual = float(np.max(np.abs(value.imag), initial=0.0))
    if residual > tol * max(1.0, p.max_abs()):
        raise SymmetryViolation(f"Imaginary residual {residual:.3g} exceeds tolerance")
    real = value.real
    return float(real) if np.ndim(real) == 0 else real


def to_circle_poly(p: TrigPoly) -> Polynomial:
    """Polynomial q of degree 2N with q(e^{it}) = e^{iNt} p(t)

    Examples
    --------
    >>> to_circle_poly(TrigPoly.cosine(1)).coef.real.tolist()
    [0.5, 0.0, 0.5]
    """
    return Polynomial(p.coeffs.copy())


def dft_interpolate(values: Sequence[float], tol: float = 1e-9) -> TrigPoly:
    """Trigonometric interpolant of samples at 2 pi k / n, k = 0..n-1

    For an even count the Nyquist harmonic is the pure cosine
    D_{n/2} cos(n t / 2).

    Parameters
    ----------
    values: list of float
        Samples at the uniform nodes, first node at 0
    tol: float
        Relative pruning threshold

    Returns
    -------
    out: TrigPoly

    Examples
    --------
    >>> dft_interpolate([2.0, 2.0, 2.0]).coeffs.real.tolist()
    [2.0]
    >>> p = dft_interpolate(np.cos(2 * np.pi * np.arange(6) / 6))
    >>> p.degree, round(p.coefficient(1).real, 12)
    (1, 0.5)
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        raise EmptyData("No data points to interpolate")

    spectrum = np.fft.fft(values) / n
    half = n // 2
    if n % 2:
        coeffs = np.concatenate([np.conj(spectrum[1 : half + 1][::-1]), spectrum[: half + 1]])
    else:
        nyquist = spectrum[half].real / 2
        coeffs = np.concatenate(
            [[nyquist], np.conj(spectrum[1:half][::-1]), spectrum[:half], [nyquist]]
        )
    return _pruned_interpolant(
        TrigPoly(coeffs).symmetrized(), TWO_PI * np.arange(n) / n, values, tol
    )


def _pruned_interpolant(p: TrigPoly, nodes, values: np.ndarray, tol: float) -> TrigPoly:
    """`p` pruned at `tol`, unless pruning moves it off the data by INTERPOLATION_TOL"""
    pruned = p.pruned(tol)
    bound = INTERPOLATION_TOL * max(1.0, float(np.abs(values).max(initial=0.0)))
    if np.abs(pruned.evaluate_complex(nodes).real - values).max(initial=0.0) < bound:
        return pruned
    _LOG.debug(f"Pruning at {tol:g} leaves the data, only round-off is pruned")
    return p.pruned(ROUNDOFF_TOL)


def _check_nodes(nodes: np.ndarray):
    order = np.argsort(np.mod(nodes, TWO_PI))
    wrapped = np.mod(nodes[order], TWO_PI)
    gaps = np.diff(np.concatenate([wrapped, wrapped[:1] + TWO_PI]))
    if nodes.size > 1 and gaps.min() < NODE_SEPARATION:
        i = int(np.argmin(gaps))
        raise DuplicateNode(
            f"Nodes {wrapped[i]:.12g} and {wrapped[(i + 1) % nodes.size]:.12g} coincide"
        )


def _default_alpha(nodes: np.ndarray) -> float:
    """0, or the first golden-angle multiple clear of every node"""
    alpha = 0.0
    j = 0
    while np.min(angular_distance(nodes, alpha)) < ALPHA_CLEARANCE:
        j += 1
        alpha = float(np.mod(j * GOLDEN_ANGLE, TWO_PI))
        _LOG.debug(f"alpha retried at {alpha:.6f}")
    return alpha


def lagrange_trig_interpolate(
    points: Iterable[Tuple[float, float]],
    alphas: Optional[Sequence[float]] = None,
    tol: float = 1e-9,
) -> TrigPoly:
    """Trigonometric interpolant of degree floor(N / 2) through N arbitrary nodes

    Lagrange interpolation is carried out on the unit circle z = e^{it}:
    the nodal products are expanded into monomial coefficients, then
    shifted by z^{-K}. With an even number of nodes one extra linear
    factor (z - e^{i alpha_k}) / (z_k - e^{i alpha_k}) brings every basis
    polynomial to degree 2K.

    Parameters
    ----------
    points: list of (t, y)
        Nodes, pairwise distinct modulo 2 pi, with real values
    alphas: list of float, optional
        Free angles of the even case, one per node. Default 0, moved along
        golden-angle multiples when a node sits on it.
    tol: float
        Relative pruning threshold

    Returns
    -------
    out: TrigPoly
        Symmetrized interpolant

    Examples
    --------
    >>> lagrange_trig_interpolate([(0.7, 3.0)]).coeffs.real.tolist()
    [3.0]
    >>> nodes = [0.3, 2.0, 4.4]
    >>> p = lagrange_trig_interpolate([(t, np.sin(t)) for t in nodes])
    >>> bool(abs(p(1.234) - np.sin(1.234)) < 1e-12)
    True
    """
    points = list(points)
    if not points:
        return TrigPoly.zero()

    nodes = np.array([t for t, _ in points], dtype=float)
    values = np.array([y for _, y in points], dtype=float)
    _check_nodes(nodes)

    count = nodes.size
    half = count // 2
    z = np.exp(1j * nodes)

    if count % 2 == 0:
        if alphas is None:
            alphas = np.full(count, _default_alpha(nodes))
        alphas = np.asarray(alphas, dtype=float)
        for alpha in alphas:
            if np.min(angular_distance(nodes, alpha)) < NODE_SEPARATION:
                raise SingularAlpha(f"alpha = {alpha:.12g} coincides with a node")
        extra = np.exp(1j * alphas)

    # nodal polynomial prod_m (z - z_m), low degree first
    nodal = np.array([1.0 + 0j])
    for zm in z:
        nodal = P.polymul(nodal, [-zm, 1.0])

    total = np.zeros(2 * half + 1, dtype=complex)
    for k in range(count):
        basis, remainder = P.polydiv(nodal, [-z[k], 1.0])
        denominator = np.prod(z[k] - np.delete(z, k))
        weight = values[k] * z[k] ** half / denominator
        if count % 2 == 0:
            basis = P.polymul(basis, [-extra[k], 1.0])
            weight = weight / (z[k] - extra[k])
        total[: basis.size] += weight * basis

    return _pruned_interpolant(TrigPoly(total).symmetrized(), nodes, values, tol)
