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
"""Numerical certification of the nodal set of f on the 3-sphere"""

import dataclasses
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment

from braidfield.braid import BraidWord, exponent_sum, permutation, signed_pair_counts
from braidfield.configuration import Config
from braidfield.exceptions import (
    DeltaSearchFailure,
    IncreaseSamples,
    RootSolverFailure,
    VerificationFailure,
)
from braidfield.rootfinding import continue_roots, horner, match_roots, robust_roots
from braidfield.semiholo import FourierBraid, SemiholoPoly
from braidfield.utils import TWO_PI, min_pairwise_distance

_LOG = logging.getLogger(__name__)

COLLISION_TOL = 1e-9
MAX_HALVINGS = 8
RADIAL_POINTS = 65
BISECTION_STEPS = 60
FD_STEP = 1e-6
TRANSVERSALITY_TOL = 1e-8
MIN_LAMBDA = 1e-8
DEDUPE_TOL = 1e-6
RESIDUAL_GATE = 1e-9
SPHERE_TOL = 1e-12


def roots_at(f: SemiholoPoly, v) -> np.ndarray:
    """Roots in u of f(u, v, conj(v)) at a single v

    Examples
    --------
    >>> f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -0.25})
    >>> sorted(roots_at(f, 1.0).real.round(12).tolist())
    [-0.5, 0.5]
    """
    return robust_roots(f.u_coefficients(complex(v)))[0]


@dataclasses.dataclass(frozen=True, eq=False)
class RootTrack:
    """Roots of f(., r e^{it}) followed continuously over one turn

    `roots[i, j]` is strand j at `t[i]`; `t[0] = 0` and `t[-1] = 2 pi`.
    Column j at t = 0 is the strand starting at position j, positions
    being ordered by decreasing real part.
    """

    t: np.ndarray
    roots: np.ndarray
    permutation: Tuple[int, ...]
    r: float = 1.0

    @property
    def strands(self) -> int:
        return self.roots.shape[1]

    def min_separation(self) -> float:
        return float(np.min(min_pairwise_distance(self.roots)))


def _coefficients(f: SemiholoPoly, r, t) -> np.ndarray:
    return f.u_coefficients(np.asarray(r) * np.exp(1j * np.asarray(t)))


def _advance(f: SemiholoPoly, r: float, previous: np.ndarray, t0: float, t1: float, depth=0):
    current = continue_roots(_coefficients(f, r, t1), previous)[0]
    separation = float(min_pairwise_distance(previous))
    motion = float(np.abs(current - previous).max())
    if depth < MAX_HALVINGS and separation > COLLISION_TOL and motion > separation / 3:
        mid = 0.5 * (t0 + t1)
        halfway = _advance(f, r, previous, t0, mid, depth + 1)
        return _advance(f, r, halfway, mid, t1, depth + 1)
    return current


def _closing_permutation(start: np.ndarray, end: np.ndarray) -> Tuple[int, ...]:
    """p -> q when the strand leaving column p arrives where column q started"""
    cost = np.abs(end[:, None] - start[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(start.size, dtype=int)
    perm[rows] = cols
    return tuple(int(q) for q in perm)


def track_roots(f: SemiholoPoly, samples: int = 512, r: float = 1.0) -> RootTrack:
    """Follow the roots of f(., r e^{it}) for t from 0 to 2 pi

    Consecutive samples are matched by nearest neighbour; a step is halved
    while the roots move by more than a third of their separation.

    Examples
    --------
    >>> f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -1.0})
    >>> track = track_roots(f, 64)
    >>> track.permutation, track.roots[0].real.round(12).tolist()
    ((1, 0), [1.0, -1.0])
    """
    t = np.linspace(0.0, TWO_PI, samples + 1)
    start = robust_roots(_coefficients(f, r, 0.0))[0]
    start = start[np.lexsort((-start.imag, -start.real))]

    roots = np.empty((samples + 1, f.strands), dtype=complex)
    roots[0] = start
    for i in range(samples):
        roots[i + 1] = _advance(f, r, roots[i], t[i], t[i + 1])
    return RootTrack(t, roots, _closing_permutation(roots[0], roots[-1]), r)


@dataclasses.dataclass(frozen=True)
class ReconstructedBraid:
    """Braid data read off a family of strands"""

    permutation: Tuple[int, ...]
    exponent_sum: int
    pair_counts: Dict[Tuple[int, int], int]

    def compare(self, b: BraidWord) -> Tuple[bool, bool, bool]:
        """(permutation, exponent sum, pair counts) agreement with a word"""
        return (
            self.permutation == permutation(b),
            self.exponent_sum == exponent_sum(b),
            self.pair_counts == signed_pair_counts(b),
        )


def reconstruct_from_track(
    t: np.ndarray, strands: np.ndarray, perm: Tuple[int, ...]
) -> ReconstructedBraid:
    """Crossings of the projection Re(u) with signs from Im(u)

    Parameters
    ----------
    t: np.ndarray
        Sample times, shape (n,), covering a full turn
    strands: np.ndarray
        Shape (n, s); the last row closes the loop
    perm: tuple
        Closure permutation, start position to end position

    Raises
    ------
    IncreaseSamples
        When two strands come closer than the collision tolerance.
    """
    if np.min(min_pairwise_distance(strands)) < COLLISION_TOL:
        raise IncreaseSamples("Two strands collide; rerun with more samples")

    s = strands.shape[1]
    counts: Dict[Tuple[int, int], int] = {}
    total = 0
    for p in range(s):
        for q in range(p + 1, s):
            diff = strands[:, p] - strands[:, q]
            d = diff.real
            for i in np.flatnonzero((d[:-1] > 0) != (d[1:] > 0)):
                w = d[i] / (d[i] - d[i + 1])
                height = (1 - w) * diff.imag[i] + w * diff.imag[i + 1]
                # the strand on the larger-Re side before the crossing goes over for +1
                sign = 1 if (height > 0) == (d[i] > 0) else -1
                counts[(p, q)] = counts.get((p, q), 0) + sign
                total += sign
    pair_counts = {k: v for k, v in sorted(counts.items()) if v != 0}
    return ReconstructedBraid(tuple(perm), total, pair_counts)


def reconstruct_braid(f: SemiholoPoly, samples: int = 512) -> ReconstructedBraid:
    """Braid traced by the roots of f on the circle v = e^{it}

    Examples
    --------
    >>> f = SemiholoPoly({(2, 0, 0): 1.0, (0, 2, 0): -0.25})
    >>> reconstruct_braid(f, 64)
    ReconstructedBraid(permutation=(0, 1), exponent_sum=2, pair_counts={(0, 1): 2})
    """
    track = track_roots(f, samples)
    return reconstruct_from_track(track.t, track.roots, track.permutation)


@dataclasses.dataclass(frozen=True, eq=False)
class NodalSet:
    """Points (u, v) of the zero set of f_lambda on the 3-sphere, per strand

    `u[i, j]` and `r[i, j]` belong to strand j at angle `t[i]`; v = r e^{it}.
    `permutation` closes the strands: j continues as strand permutation[j].
    """

    lam: float
    t: np.ndarray
    r: np.ndarray
    u: np.ndarray
    permutation: Tuple[int, ...] = ()

    @property
    def v(self) -> np.ndarray:
        return self.r * np.exp(1j * self.t)[:, None]

    def points(self) -> np.ndarray:
        """Shape (n * s, 2) complex array of (u, v)"""
        return np.stack([self.u.ravel(), self.v.ravel()], axis=-1)

    def to_pandas(self) -> pd.DataFrame:
        """Flat table used by `trace --out`"""
        n, s = self.u.shape
        u = self.u.ravel()
        v = self.v.ravel()
        return pd.DataFrame(
            {
                "strand": np.tile(np.arange(s), n),
                "t": np.repeat(self.t, s),
                "r": self.r.ravel(),
                "u_re": u.real,
                "u_im": u.imag,
                "v_re": v.real,
                "v_im": v.imag,
            }
        )


class RadialScan:
    """Roots of f_1(., r e^{it}) on an r-grid from 1 down to 0, batched over t

    Parameters
    ----------
    f1: SemiholoPoly
        Polynomial at amplitude 1
    track: RootTrack
        Track of f1 on r = 1; its columns fix the strand identities
    points: int
        Size of the r-grid
    """

    def __init__(self, f1: SemiholoPoly, track: RootTrack, points: int = RADIAL_POINTS):
        self.f1 = f1
        self.track = track
        self.t = track.t[:-1]
        self.r = np.linspace(1.0, 0.0, points)

        roots = np.empty((points, self.t.size, f1.strands), dtype=complex)
        roots[0] = track.roots[:-1]
        for i in range(1, points):
            roots[i] = continue_roots(_coefficients(f1, self.r[i], self.t), roots[i - 1])
        self.roots = roots

    def phi(self, lam: float) -> np.ndarray:
        """lam^2 |u_1|^2 + r^2 - 1 on the grid, r increasing along axis 0"""
        return (lam**2 * np.abs(self.roots) ** 2 + self.r[:, None, None] ** 2 - 1)[::-1]

    def brackets(self, lam: float):
        """Index of the unique sign change of phi per (t, strand), or None

        Returns
        -------
        out: np.ndarray or None
            Shape (n, s) grid indices i with phi(r_i) < 0 <= phi(r_{i+1}),
            r increasing; None when some radial function does not have
            exactly one sign change.
        """
        positive = self.phi(lam) >= 0
        rises = positive[1:] & ~positive[:-1]
        if positive[0].any() or np.any(rises.sum(axis=0) != 1):
            return None
        return rises.argmax(axis=0)

    def _nearest_roots(self, r: np.ndarray, guess: np.ndarray, estimate: np.ndarray):
        n, s = r.shape
        t = np.broadcast_to(self.t[:, None], r.shape)
        coeffs = _coefficients(self.f1, r, t).reshape(n * s, s + 1)
        found = robust_roots(coeffs, guess=guess.reshape(n * s, s))
        pick = np.abs(found - estimate.reshape(n * s, 1)).argmin(axis=-1)
        chosen = found[np.arange(n * s), pick]
        return chosen.reshape(n, s), found.reshape(n, s, s)

    def nodal_set(self, lam: float) -> Optional[NodalSet]:
        """Bisect every radial function to its zero; None when the radial gate fails"""
        index = self.brackets(lam)
        if index is None:
            return None
        n, s = index.shape
        r_up = self.r[::-1]
        roots_up = self.roots[::-1]
        lo = r_up[index]
        hi = r_up[index + 1]
        guess = roots_up[index, np.arange(n)[:, None], :]
        estimate = roots_up[index, np.arange(n)[:, None], np.arange(s)[None, :]]

        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            estimate, guess = self._nearest_roots(mid, guess, estimate)
            above = lam**2 * np.abs(estimate) ** 2 + mid**2 - 1 >= 0
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)

        u1, guess = self._nearest_roots(hi, guess, estimate)

        # phi must increase through its zero
        up, _ = self._nearest_roots(np.minimum(hi + FD_STEP, 1.0), guess, u1)
        down, _ = self._nearest_roots(np.maximum(hi - FD_STEP, 0.0), guess, u1)
        rise = (lam**2 * np.abs(up) ** 2 + np.minimum(hi + FD_STEP, 1.0) ** 2) - (
            lam**2 * np.abs(down) ** 2 + np.maximum(hi - FD_STEP, 0.0) ** 2
        )
        if np.any(rise <= 0):
            return None
        return NodalSet(lam, self.t, hi, lam * u1, self.track.permutation)


def sample_nodal_set(f: SemiholoPoly, lam: float, samples: int = 512) -> NodalSet:
    """Intersection of the strands of f_lam with the unit 3-sphere

    Raises
    ------
    VerificationFailure
        When some radial function has no unique increasing zero.

    Examples
    --------
    >>> f = SemiholoPoly({(1, 0, 0): 1.0})
    >>> nodal = sample_nodal_set(f, 0.5, 64)
    >>> float(np.abs(nodal.u).max()), float(nodal.r.min())
    (0.0, 1.0)
    """
    f1 = f.rescale(1.0)
    scan = RadialScan(f1, track_roots(f1, samples))
    nodal = scan.nodal_set(lam)
    if nodal is None:
        raise VerificationFailure(f"No unique intersection with the 3-sphere at lambda = {lam:g}")
    residual, sphere = nodal_errors(f1.rescale(lam), nodal)
    if residual >= RESIDUAL_GATE or sphere >= SPHERE_TOL:
        raise VerificationFailure(
            f"Nodal samples at lambda = {lam:g} are off the zero set ({residual:.3g}) "
            f"or off the 3-sphere ({sphere:.3g})"
        )
    return nodal


def nodal_errors(f: SemiholoPoly, nodal: NodalSet) -> Tuple[float, float]:
    """Largest |f| relative to the coefficient scale, and largest | |(u, v)| - 1 |

    Examples
    --------
    >>> f = SemiholoPoly({(1, 0, 0): 1.0})
    >>> nodal_errors(f, sample_nodal_set(f, 0.5, 64))
    (0.0, 0.0)
    """
    points = nodal.points()
    residual = float(np.abs(f(points[:, 0], points[:, 1])).max() / max(1.0, f.scale))
    sphere = float(np.abs(np.sqrt(np.abs(points[:, 0]) ** 2 + np.abs(points[:, 1]) ** 2) - 1).max())
    return residual, sphere


@dataclasses.dataclass(frozen=True)
class Transversality:
    derivative: float
    singular: float
    passed: bool

    @property
    def margin(self) -> float:
        return min(self.derivative, self.singular)


def _tangent_frame(x: np.ndarray) -> np.ndarray:
    """Three orthonormal tangent vectors of the 3-sphere at each point, shape (N, 3, 4)"""
    a, b, c, d = x.T
    return np.stack(
        [
            np.stack([-b, a, -d, c], axis=-1),
            np.stack([-c, d, a, -b], axis=-1),
            np.stack([-d, -c, b, a], axis=-1),
        ],
        axis=1,
    )


def transversality_check(f: SemiholoPoly, nodal: NodalSet) -> Transversality:
    """Regularity of 0 for f restricted to the 3-sphere at the nodal samples

    `f` is the polynomial at the amplitude of `nodal`. The margins are the
    smallest |df/du| and the smallest singular value of the real 2x3
    differential of f along the sphere, by central differences.
    """
    points = nodal.points()
    u, v = points[:, 0], points[:, 1]
    scale = max(1.0, f.scale)

    coeffs = f.u_coefficients(v)
    _, du = horner(coeffs, u[:, None])
    derivative = float(np.abs(du).min())

    x = np.stack([u.real, u.imag, v.real, v.imag], axis=-1)
    frame = _tangent_frame(x)
    shifted = x[:, None, :] + FD_STEP * frame
    back = x[:, None, :] - FD_STEP * frame
    forward_values = f(shifted[..., 0] + 1j * shifted[..., 1], shifted[..., 2] + 1j * shifted[..., 3])
    backward_values = f(back[..., 0] + 1j * back[..., 1], back[..., 2] + 1j * back[..., 3])
    columns = (forward_values - backward_values) / (2 * FD_STEP)
    jacobian = np.stack([columns.real, columns.imag], axis=1)
    singular = float(np.linalg.svd(jacobian, compute_uv=False)[:, -1].min())

    threshold = TRANSVERSALITY_TOL * scale
    return Transversality(derivative, singular, derivative > threshold and singular > threshold)


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    """Outcome of every gate at one amplitude; `failed_stage` is None on success"""

    lam: float
    failed_stage: Optional[str] = None
    contained: Optional[bool] = None
    unique_intersection: Optional[bool] = None
    transversality_margin: Optional[float] = None
    max_residual: Optional[float] = None
    max_sphere_error: Optional[float] = None
    permutation_match: Optional[bool] = None
    exponent_sum_match: Optional[bool] = None
    pair_counts_match: Optional[bool] = None
    pair_counts: Dict[str, int] = dataclasses.field(default_factory=dict)
    phase_critical: Optional[int] = None
    conservative_lambda: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.failed_stage is None

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["passed"] = self.passed
        return out


def _check_lambda(
    f1: SemiholoPoly,
    lam: float,
    braid: Optional[BraidWord],
    track: RootTrack,
    scan: RadialScan,
) -> VerificationReport:
    """Gates in order: containment, radial, transversality, reconstruction"""
    contained = bool(lam * np.abs(track.roots).max() < 1)
    if not contained:
        return VerificationReport(lam, "containment", contained=False)

    try:
        nodal = scan.nodal_set(lam)
    except RootSolverFailure as e:
        _LOG.warning(f"lambda = {lam:g}: {e}")
        nodal = None
    if nodal is None:
        return VerificationReport(lam, "radial", contained=True, unique_intersection=False)

    f_lam = f1.rescale(lam)
    residual, sphere = nodal_errors(f_lam, nodal)
    if residual >= RESIDUAL_GATE or sphere >= SPHERE_TOL:
        _LOG.warning(f"lambda = {lam:g}: nodal residual {residual:.3g}, off-sphere {sphere:.3g}")
        return VerificationReport(
            lam,
            "radial",
            contained=True,
            unique_intersection=True,
            max_residual=residual,
            max_sphere_error=sphere,
        )

    regular = transversality_check(f_lam, nodal)
    common = dict(
        contained=True,
        unique_intersection=True,
        transversality_margin=regular.margin,
        max_residual=residual,
        max_sphere_error=sphere,
    )
    if not regular.passed:
        return VerificationReport(lam, "transversality", **common)

    closing = np.vstack([nodal.u, nodal.u[:1, list(track.permutation)]])
    t = np.append(nodal.t, TWO_PI)
    try:
        rebuilt = reconstruct_from_track(t, closing, track.permutation)
    except IncreaseSamples as e:
        _LOG.warning(f"lambda = {lam:g}: {e}")
        return VerificationReport(lam, "reconstruction", **common)

    pair_counts = {f"{p}-{q}": n for (p, q), n in rebuilt.pair_counts.items()}
    if braid is None:
        return VerificationReport(lam, None, pair_counts=pair_counts, **common)

    perm_ok, sum_ok, pairs_ok = rebuilt.compare(braid)
    failed = None if perm_ok and sum_ok and pairs_ok else "reconstruction"
    return VerificationReport(
        lam,
        failed,
        permutation_match=perm_ok,
        exponent_sum_match=sum_ok,
        pair_counts_match=pairs_ok,
        pair_counts=pair_counts,
        **common,
    )


def find_lambda(
    f: SemiholoPoly,
    braid: Optional[BraidWord] = None,
    samples: int = 512,
    start: float = 1.0,
    min_lam: float = MIN_LAMBDA,
) -> Tuple[float, VerificationReport]:
    """Largest amplitude start / 2^k passing every gate

    Raises
    ------
    VerificationFailure
        When no amplitude above `min_lam` passes; carries the last report.
    """
    f1 = f.rescale(1.0)
    if braid is None:
        braid = f.braid
    try:
        track = track_roots(f1, samples)
        scan = RadialScan(f1, track)
    except RootSolverFailure as e:
        raise VerificationFailure(
            f"Roots of f could not be followed: {e}", report=VerificationReport(start, "radial")
        ) from e

    lam = start
    report = None
    while lam >= min_lam:
        report = _check_lambda(f1, lam, braid, track, scan)
        if report.passed:
            _LOG.info(f"lambda = {lam:g} passes every gate")
            return lam, report
        _LOG.debug(f"lambda = {lam:g} fails at {report.failed_stage}")
        lam /= 2

    raise VerificationFailure(
        f"No lambda above {min_lam:g} passes; last failure at {report.failed_stage}",
        report=report,
    )


def accepted_lambda(
    f: SemiholoPoly, braid: Optional[BraidWord] = None, config: Config = None
) -> Tuple[float, VerificationReport]:
    """Amplitude search of the configuration

    A configured lambda is checked alone, without halving; otherwise the
    search starts from 1.
    """
    if config is None:
        config = Config()
    if config.lam is not None:
        return find_lambda(f, braid, config.samples, start=config.lam, min_lam=config.lam)
    return find_lambda(f, braid, config.samples)


def _radial_derivative(f1: SemiholoPoly, r, t, roots: np.ndarray) -> np.ndarray:
    """du/dr = -f_r / f_u along every root"""
    batch = roots.reshape(-1, roots.shape[-1])
    coeffs = _coefficients(f1, r, t).reshape(batch.shape[0], -1)
    radial = f1.radial_coefficients(r, t).reshape(batch.shape[0], -1)
    _, fu = horner(coeffs, batch)
    fr, _ = horner(radial, batch)
    return (-fr / fu).reshape(roots.shape)


def conservative_lambda(f: SemiholoPoly, samples: int = 256, points: int = 33) -> float:
    """Sufficient amplitude min(eps1, eps2) from root separation and motion bounds

    Raises
    ------
    DeltaSearchFailure
        When roots collide on the annulus searched for delta.

    Examples
    --------
    >>> conservative_lambda(SemiholoPoly({(1, 0, 0): 1.0}))
    inf
    """
    if f.strands == 1:
        return float("inf")
    f1 = f.rescale(1.0)
    track = track_roots(f1, samples)
    separation = track.min_separation()
    if separation < COLLISION_TOL:
        raise DeltaSearchFailure("Roots collide on the unit circle")

    t = track.t[:-1]
    start = track.roots[:-1]
    speed = float(np.abs(_radial_derivative(f1, 1.0, t, start)).max())
    delta = min(0.5, separation / (4 * speed)) if speed > 0 else 0.5

    for _ in range(30):
        radii = np.linspace(1.0, 1.0 - delta, points)
        roots = np.empty((points,) + start.shape, dtype=complex)
        roots[0] = start
        for i in range(1, points):
            roots[i] = continue_roots(_coefficients(f1, radii[i], t), roots[i - 1])
        if np.min(min_pairwise_distance(roots)) < COLLISION_TOL:
            raise DeltaSearchFailure(f"Roots collide for r in [{1 - delta:.6f}, 1]")
        du = np.stack([_radial_derivative(f1, r, t, roots[i]) for i, r in enumerate(radii)])
        if np.abs(du).max() * delta < separation / 2:
            break
        delta /= 2
    else:
        raise DeltaSearchFailure("No annulus keeps the roots apart")

    d1 = float(np.abs(du.real).max())
    d2 = float(np.abs(du.imag).max())
    coeffs = np.stack([_coefficients(f1, r, t) for r in radii])
    bound = max(1.0, float(np.abs(coeffs[..., 1:]).sum(axis=-1).max()))
    eps1 = np.sqrt((1 - delta) / (bound * (d1 + d2))) if d1 + d2 > 0 else float("inf")
    eps2 = delta / bound
    _LOG.debug(f"delta = {delta:.4g}, U = {bound:.4g}, eps1 = {eps1:.4g}, eps2 = {eps2:.4g}")
    return float(min(eps1, eps2))


@dataclasses.dataclass(frozen=True)
class PhaseCriticalPoints:
    """Points where d g / du = 0 and the t-derivative of arg g vanishes

    `complete` is False when some samples were skipped; `count` is then a
    lower bound.
    """

    count: int
    points: List[Tuple[complex, float]]
    complete: bool = True


def _monic_from_roots(roots: np.ndarray) -> np.ndarray:
    """Coefficients of prod_j (u - roots_j), highest first, batched"""
    coeffs = np.ones(roots.shape[:-1] + (1,), dtype=complex)
    for j in range(roots.shape[-1]):
        zero = np.zeros(roots.shape[:-1] + (1,), dtype=complex)
        shifted = np.concatenate([zero, coeffs], axis=-1) * roots[..., j, None]
        coeffs = np.concatenate([coeffs, zero], axis=-1) - shifted
    return coeffs


def _phase_speed(fb: FourierBraid, c: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Im(d_t g / g) at u = c, i.e. the t-derivative of arg g"""
    x = fb.strand_values(t)
    dx = (fb.strand_values(t + FD_STEP) - fb.strand_values(t - FD_STEP)) / (2 * FD_STEP)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = -(dx[..., None, :] / (c[..., :, None] - x[..., None, :])).sum(axis=-1)
    return ratio.imag


def _critical_points(fb: FourierBraid, t, guess=None) -> np.ndarray:
    s = fb.strands
    coeffs = _monic_from_roots(fb.strand_values(np.atleast_1d(t)))
    derivative = coeffs[..., :-1] * np.arange(s, 0, -1)
    return robust_roots(derivative, guess=guess)


def _refine_phase_zero(fb: FourierBraid, lo: float, hi: float, c_lo: np.ndarray, branch: int):
    """Bisect the sign change of the phase speed of one critical branch"""
    s_lo = _phase_speed(fb, c_lo, np.array([lo]))[0, branch]
    point = c_lo[0, branch]
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        c_mid = match_roots(c_lo, _critical_points(fb, mid, guess=c_lo))
        value = _phase_speed(fb, c_mid, np.array([mid]))[0, branch]
        point = c_mid[0, branch]
        if np.sign(value) == np.sign(s_lo):
            lo, c_lo = mid, c_mid
        else:
            hi = mid
    return complex(point), float(np.mod(0.5 * (lo + hi), TWO_PI))


def phase_critical_scan(fb: FourierBraid, grid: int = 1024) -> PhaseCriticalPoints:
    """Count the phase-critical points of the parametrisation

    The critical points of g(., t) are followed along an offset periodic
    t-grid; sign changes of the t-derivative of arg g along a branch are
    refined by bisection and deduplicated.

    Examples
    --------
    >>> from braidfield.semiholo import lemniscate_braid
    >>> phase_critical_scan(lemniscate_braid(2).with_lambda(0.5), 128).count
    0
    """
    if fb.strands == 1:
        return PhaseCriticalPoints(0, [])

    t = (np.arange(grid + 1) + 0.5) * TWO_PI / grid
    crit = np.empty((grid + 1, fb.strands - 1), dtype=complex)
    complete = True
    crit[0] = _critical_points(fb, t[0])[0]
    for i in range(grid):
        try:
            current = _critical_points(fb, t[i + 1], guess=crit[i : i + 1])
            crit[i + 1] = match_roots(crit[i : i + 1], current)[0]
        except RootSolverFailure:
            _LOG.warning(f"Critical points at t = {t[i + 1]:.6f} not found, sample skipped")
            complete = False
            crit[i + 1] = crit[i]

    speed = _phase_speed(fb, crit, t)
    found: List[Tuple[complex, float]] = []
    for i, branch in zip(*np.nonzero(np.sign(speed[:-1]) * np.sign(speed[1:]) < 0)):
        try:
            point, t_star = _refine_phase_zero(fb, t[i], t[i + 1], crit[i : i + 1], branch)
        except RootSolverFailure:
            _LOG.warning(f"Phase-critical point near t = {t[i]:.6f} not refined, skipped")
            complete = False
            continue
        duplicate = any(
            abs(point - c) < DEDUPE_TOL and abs(t_star - s) < DEDUPE_TOL for c, s in found
        )
        if not duplicate:
            found.append((complex(point), t_star))

    if not complete:
        _LOG.warning(f"Phase-critical count {len(found)} is a lower bound")
    return PhaseCriticalPoints(len(found), found, complete)


def verify_polynomial(
    f: SemiholoPoly,
    braid: Optional[BraidWord] = None,
    fourier: Optional[FourierBraid] = None,
    config: Config = None,
) -> VerificationReport:
    """Full verification: amplitude search, conservative bound, phase-critical scan

    Raises
    ------
    VerificationFailure
        When no amplitude passes; the report is attached.
    """
    if config is None:
        config = Config()
    lam, report = accepted_lambda(f, braid, config)

    try:
        bound = conservative_lambda(f)
    except (DeltaSearchFailure, RootSolverFailure) as e:
        _LOG.warning(f"Conservative lambda unavailable: {e}")
        bound = None
    if bound is not None and lam < bound:
        _LOG.warning(f"Accepted lambda {lam:g} below the conservative bound {bound:g}")
    elif bound is not None:
        _LOG.info(f"Accepted lambda {lam:g}, conservative bound {bound:g}")

    phase = None
    if fourier is not None:
        try:
            phase = phase_critical_scan(fourier.with_lambda(lam), config.grid // 4).count
        except RootSolverFailure as e:
            _LOG.warning(f"Phase-critical scan unavailable: {e}")
    return dataclasses.replace(report, conservative_lambda=bound, phase_critical=phase)
