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
"""Stereographic projection of f to a polynomial map on R^3"""

import functools
import logging
from typing import Tuple

import numpy as np
from numpy.polynomial.polynomial import polyval3d
from scipy.signal import convolve

from braidfield.braid import BraidWord, components
from braidfield.exceptions import IntegerizeFailure, MalformedPolynomial
from braidfield.semiholo import SemiholoPoly

_LOG = logging.getLogger(__name__)

POLE_RADIUS = 1e6


class RealPoly3:
    """Polynomial sum c x^i y^j z^k with complex coefficients

    Parameters
    ----------
    coeffs: array-like
        Dense array, `coeffs[i, j, k]` multiplies x^i y^j z^k

    Examples
    --------
    >>> p = stereographic_project(SemiholoPoly({(1, 0, 0): 1.0}))
    >>> p.degree, complex(p(0.0, 0.0, 2.0))
    (2, (3+4j))
    """

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        assert coeffs.ndim == 3, "RealPoly3 needs a 3-dimensional coefficient array"
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        nonzero = np.argwhere(self.coeffs != 0)
        return int(nonzero.sum(axis=1).max()) if nonzero.size else 0

    @property
    def scale(self) -> float:
        return float(np.abs(self.coeffs).max(initial=0.0))

    def __call__(self, x, y, z):
        return polyval3d(np.asarray(x, float), np.asarray(y, float), np.asarray(z, float), self.coeffs)

    def pruned(self, tol: float = 1e-12) -> "RealPoly3":
        coeffs = self.coeffs.copy()
        threshold = tol * self.scale
        coeffs.real[np.abs(coeffs.real) < threshold] = 0.0
        coeffs.imag[np.abs(coeffs.imag) < threshold] = 0.0
        return RealPoly3(coeffs)

    def monomials(self):
        """(i, j, k, coefficient) of the nonzero terms, highest x-power first"""
        keys = sorted(
            (tuple(int(e) for e in key) for key in np.argwhere(self.coeffs != 0)),
            key=lambda key: (-key[0], key[1], key[2]),
        )
        return [(i, j, k, complex(self.coeffs[i, j, k])) for i, j, k in keys]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "monomials": [
                {"x": i, "y": j, "z": k, "re": c.real, "im": c.imag}
                for i, j, k, c in self.monomials()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RealPoly3":
        try:
            entries = [
                (int(e["x"]), int(e["y"]), int(e["z"]), complex(float(e["re"]), float(e["im"])))
                for e in data["monomials"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedPolynomial(f"Invalid polynomial description: {e}") from e
        size = 1 + max((max(i, j, k) for i, j, k, _ in entries), default=0)
        coeffs = np.zeros((size, size, size), dtype=complex)
        for i, j, k, c in entries:
            coeffs[i, j, k] += c
        return cls(coeffs)

    def to_text(self) -> str:
        """Human readable dump, one monomial per term"""
        terms = []
        for i, j, k, c in self.monomials():
            powers = "".join(
                f"*{name}^{e}" if e > 1 else f"*{name}"
                for name, e in (("x", i), ("y", j), ("z", k))
                if e
            )
            terms.append(f"({c.real:.17g}{c.imag:+.17g}j){powers}")
        return " + ".join(terms) if terms else "0"


def _pad(a: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=complex)
    out[: a.shape[0], : a.shape[1], : a.shape[2]] = a
    return out


def _building_blocks():
    """Numerators of u, v, conj(v) and the common denominator x^2 + y^2 + z^2 + 1"""
    u = np.zeros((3, 3, 3), dtype=complex)
    u[2, 0, 0] = u[0, 2, 0] = u[0, 0, 2] = 1.0
    u[0, 0, 0] = -1.0
    u[0, 0, 1] = 2j
    v = np.zeros((2, 2, 1), dtype=complex)
    v[1, 0, 0] = 2.0
    v[0, 1, 0] = 2j
    vbar = np.conj(v)
    rho = u.copy()
    rho[0, 0, 0] = 1.0
    rho[0, 0, 1] = 0.0
    return u, v, vbar, rho


def _product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return convolve(a, b, method="direct")


def stereographic_project(f: SemiholoPoly) -> RealPoly3:
    """f(u(x, y, z), v(x, y, z)) (x^2 + y^2 + z^2 + 1)^deg f as a polynomial

    Every monomial u^a v^b conj(v)^c becomes U^a V^b conj(V)^c rho^(d - a - b - c)
    with U, V the numerators of the projection and rho its denominator.
    """
    d = f.degree
    u, v, vbar, rho = _building_blocks()
    one = np.ones((1, 1, 1), dtype=complex)

    @functools.lru_cache(maxsize=None)
    def power(name: str, e: int) -> np.ndarray:
        if e == 0:
            return one
        base = {"u": u, "v": v, "vbar": vbar, "rho": rho}[name]
        return _product(power(name, e - 1), base)

    shape = (2 * d + 1,) * 3
    total = np.zeros(shape, dtype=complex)
    for (a, b, c), coefficient in f.terms.items():
        term = _product(_product(power("u", a), power("v", b)), power("vbar", c))
        term = _product(term, power("rho", d - a - b - c))
        total += coefficient * _pad(term, shape)
    return RealPoly3(total).pruned()


def split_real_imag(p: RealPoly3) -> Tuple[RealPoly3, RealPoly3]:
    """(F1, F2) with real coefficients and F1 + i F2 = p

    Examples
    --------
    >>> F1, F2 = split_real_imag(stereographic_project(SemiholoPoly({(1, 0, 0): 1.0})))
    >>> [(i, j, k, c.real) for i, j, k, c in F2.monomials()]
    [(0, 0, 1, 2.0)]
    """
    return RealPoly3(p.coeffs.real.astype(complex)), RealPoly3(p.coeffs.imag.astype(complex))


def inverse_stereographic(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Points (u, v) of the 3-sphere to R^3

    Returns
    -------
    xyz: np.ndarray
        Shape (N, 3)
    kept: np.ndarray
        Boolean mask of the points projected within `POLE_RADIUS`
    """
    u, v = points[:, 0], points[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        denominator = 1.0 - u.real
        xyz = np.stack([v.real, v.imag, u.imag], axis=-1) / denominator[:, None]
    kept = np.all(np.isfinite(xyz), axis=-1) & (np.linalg.norm(xyz, axis=-1) <= POLE_RADIUS)
    if not kept.all():
        _LOG.warning(f"{int((~kept).sum())} point(s) close to the pole left out")
    return xyz[kept], kept


def nodal_residual(p: RealPoly3, xyz: np.ndarray) -> float:
    """max |p| at the points, relative to the coefficient scale"""
    if xyz.size == 0:
        return 0.0
    return float(np.abs(p(xyz[:, 0], xyz[:, 1], xyz[:, 2])).max() / max(p.scale, 1e-300))


def _sample_difference(p: RealPoly3, q: RealPoly3, scale: int, xyz) -> float:
    if xyz is None or xyz.size == 0:
        return 0.0
    x, y, z = xyz.T
    return float(np.abs(q(x, y, z) / scale - p(x, y, z)).max())


def _scale_ladder(bound: int):
    for exponent in range(bound + 1):
        for mantissa in (1, 2, 5):
            scale = mantissa * 10**exponent
            if scale > 10**bound:
                return
            yield scale


def integerize(
    p: RealPoly3, margin: float, bound: int = 12, xyz: np.ndarray = None
) -> Tuple[RealPoly3, int]:
    """Gaussian-integer coefficients within 0.1 * margin of p

    The smallest scale S from 1, 2, 5, 10, 20, ... up to 10^bound is kept
    for which sum |round(S c) - S c| / S stays below 0.1 * margin, where
    `margin` is the transversality margin of the verified polynomial.
    With projected nodal samples `xyz`, round(S p) / S must also stay
    within 0.1 * margin of p on them.

    Returns
    -------
    out: RealPoly3
        round(S p), which has the zero set of the perturbed p
    scale: int
        S

    Raises
    ------
    IntegerizeFailure
        When no scale up to 10^bound is fine enough.

    Examples
    --------
    >>> q, scale = integerize(RealPoly3([[[0.5, 1.5]]]), margin=1e-3)
    >>> scale, q.coeffs.real.tolist()
    (2, [[[1.0, 3.0]]])
    """
    threshold = 0.1 * margin
    for scale in _scale_ladder(bound):
        scaled = p.coeffs * scale
        rounded = np.round(scaled.real) + 1j * np.round(scaled.imag)
        error = float(np.abs(rounded - scaled).sum() / scale)
        if error < threshold and _sample_difference(p, RealPoly3(rounded), scale, xyz) < threshold:
            _LOG.info(f"Integerized with scale {scale}, perturbation {error:.3g}")
            return RealPoly3(rounded), scale
    raise IntegerizeFailure(
        f"No scale up to 1e{bound} brings the perturbation below {threshold:.3g}"
    )


def reverify(p: RealPoly3, q: RealPoly3, scale: int, xyz: np.ndarray, margin: float) -> float:
    """Largest |q / S - p| on the projected nodal samples

    Raises
    ------
    IntegerizeFailure
        When the difference reaches 0.1 * margin.
    """
    difference = _sample_difference(p, q, scale, xyz)
    if difference >= 0.1 * margin:
        raise IntegerizeFailure(
            f"Integerized polynomial moves by {difference:.3g} on the nodal set"
        )
    return difference


def gauss_linking_number(first: np.ndarray, second: np.ndarray) -> float:
    """Gauss double integral of two closed curves sampled as (N, 3) arrays

    Periodic trapezoidal rule: tangents are central differences at the
    samples themselves, the last sample closing the curve.

    Examples
    --------
    >>> t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    >>> ring = np.stack([np.cos(t), np.sin(t), 0 * t], axis=-1)
    >>> chain = np.stack([1 + np.cos(t), 0 * t, np.sin(t)], axis=-1)
    >>> round(abs(gauss_linking_number(ring, chain)), 2)
    1.0
    """
    da = 0.5 * (np.roll(first, -1, axis=0) - np.roll(first, 1, axis=0))
    db = 0.5 * (np.roll(second, -1, axis=0) - np.roll(second, 1, axis=0))
    r = first[:, None, :] - second[None, :, :]
    cross = np.cross(da[:, None, :], db[None, :, :])
    integrand = (r * cross).sum(axis=-1) / np.linalg.norm(r, axis=-1) ** 3
    return float(integrand.sum() / (4 * np.pi))


def degree_bound(b: BraidWord) -> int:
    """Bound on the degrees of the real and imaginary parts of the projection

    Examples
    --------
    >>> from braidfield.braid import parse_braid_word
    >>> degree_bound(parse_braid_word("2 -1 2 1 1 1"))
    66
    """
    comps = components(b)
    s_max = max(c.length for c in comps.cycles)
    ell = b.length
    return max(
        2 * ((s_max * ell - 1) // 2),
        2 * ((ell * s_max**2 * comps.count + s_max * (ell - 1) - 2) // 2),
        2 * b.strands,
    )
