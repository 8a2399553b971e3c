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
"""Simultaneous root finding for batches of univariate polynomials"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from braidfield.exceptions import RootSolverFailure
from braidfield.utils import min_pairwise_distance

RESIDUAL_TOL = 1e-11
WARM_START_NUDGE = 1e-7


def horner(coeffs: np.ndarray, z: np.ndarray):
    """Values and derivatives of batched polynomials

    Parameters
    ----------
    coeffs: np.ndarray
        Shape (batch, n + 1), highest degree first
    z: np.ndarray
        Shape (batch, m)

    Returns
    -------
    p, dp: np.ndarray
        Shape (batch, m)
    """
    p = np.zeros(z.shape, dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for j in range(coeffs.shape[-1]):
        dp = dp * z + p
        p = p * z + coeffs[:, j, None]
    return p, dp


def _initial_guess(monic: np.ndarray) -> np.ndarray:
    """Points on a circle of Cauchy radius, slightly rotated"""
    n = monic.shape[-1] - 1
    radius = 1.0 + np.abs(monic[:, 1:]).max(axis=-1, initial=0.0)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius[:, None] * 0.5 * np.exp(1j * angles)[None, :]


def residual_scale(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """sum_k |a_k| |z|^k, the natural size of p(z)"""
    return np.abs(horner(np.abs(coeffs).astype(complex), np.abs(z).astype(complex))[0])


def aberth(
    coeffs,
    guess=None,
    tol: float = 1e-14,
    max_iter: int = 500,
) -> np.ndarray:
    """All roots of each polynomial of a batch, by Aberth-Ehrlich iteration

    Each iteration updates every root with the Newton correction deflated
    by the other current approximations; a final Newton step polishes
    simple roots.

    Parameters
    ----------
    coeffs: array-like
        Shape (n + 1,) or (batch, n + 1), highest degree first, nonzero
        leading coefficient
    guess: array-like, optional
        Warm start of shape (batch, n)
    tol: float
        Relative step size at which the iteration stops
    max_iter: int
        Iterations before giving up

    Returns
    -------
    roots: np.ndarray
        Shape (n,) or (batch, n)

    Raises
    ------
    RootSolverFailure
        When some polynomial neither converges nor reaches a small residual.

    Examples
    --------
    >>> sorted(np.round(aberth([1.0, 0.0, -4.0]).real, 12).tolist())
    [-2.0, 2.0]
    >>> aberth([2.0, -3.0]).real.tolist()
    [1.5]
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    single = coeffs.ndim == 1
    coeffs = np.atleast_2d(coeffs)
    assert np.all(coeffs[:, 0] != 0), "leading coefficient must not vanish"
    monic = coeffs / coeffs[:, :1]
    n = monic.shape[-1] - 1
    if n == 0:
        roots = np.zeros((monic.shape[0], 0), dtype=complex)
        return roots[0] if single else roots
    if n == 1:
        roots = -monic[:, 1:2]
        return roots[0] if single else roots

    if guess is None:
        z = _initial_guess(monic)
    else:
        z = np.array(np.atleast_2d(guess), dtype=complex)
        # separate coincident starts
        jitter = 1e-8 * (1 + np.abs(z)) * np.exp(1j * (np.arange(n) + 1.0))
        close = min_pairwise_distance(z) < 1e-12
        z[close] += jitter[close]

    active = np.ones(z.shape[0], dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(max_iter):
            za = z[active]
            p, dp = horner(monic[active], za)
            ratio = np.where(dp != 0, p / dp, p)
            diff = za[:, :, None] - za[:, None, :]
            inv = np.where(diff != 0, 1.0 / diff, 0.0)
            repulsion = inv.sum(axis=-1)
            denominator = 1.0 - ratio * repulsion
            step = np.where(denominator != 0, ratio / denominator, ratio)
            step = np.where(np.isfinite(step), step, 0.0)
            za = za - step
            z[active] = za
            done = np.all(np.abs(step) <= tol * (1.0 + np.abs(za)), axis=-1)
            idx = np.flatnonzero(active)
            active[idx[done]] = False
            if not active.any():
                break

        # Newton polish, kept only where it lowers the residual
        p, dp = horner(monic, z)
        polished = z - np.where(np.abs(dp) > 0, p / dp, 0.0)
        p_new, _ = horner(monic, polished)
        better = np.isfinite(polished) & (np.abs(p_new) < np.abs(p))
        z = np.where(better, polished, z)

    if active.any():
        p, _ = horner(monic[active], z[active])
        scale = residual_scale(monic[active], z[active])
        if np.any(np.abs(p) > RESIDUAL_TOL * np.maximum(scale, 1.0)):
            raise RootSolverFailure(
                f"Aberth iteration did not converge for {int(active.sum())} polynomial(s)"
            )

    return z[0] if single else z


def match_roots(previous: np.ndarray, current: np.ndarray) -> np.ndarray:
    """Reorder `current` so that column j continues column j of `previous`

    Nearest neighbours are used when they define a bijection, an optimal
    assignment otherwise.

    Examples
    --------
    >>> match_roots(np.array([[1.0, -1.0]]), np.array([[-0.9, 1.1]])).real.tolist()
    [[1.1, -0.9]]
    """
    previous = np.atleast_2d(previous)
    current = np.atleast_2d(current)
    n = previous.shape[-1]
    cost = np.abs(previous[:, :, None] - current[:, None, :])
    nearest = cost.argmin(axis=-1)
    ordered = np.take_along_axis(current, nearest, axis=-1)
    bijective = np.sort(nearest, axis=-1) == np.arange(n)
    for row in np.flatnonzero(~bijective.all(axis=-1)):
        _, cols = linear_sum_assignment(cost[row])
        ordered[row] = current[row, cols]
    return ordered


def companion_roots(coeffs) -> np.ndarray:
    """Eigenvalues of the companion matrices of a batch, highest degree first

    Examples
    --------
    >>> sorted(companion_roots([[1.0, 0.0, -4.0]]).real.round(12).ravel().tolist())
    [-2.0, 2.0]
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    monic = coeffs[:, 1:] / coeffs[:, :1]
    batch, n = monic.shape
    if n == 0:
        return np.zeros((batch, 0), dtype=complex)
    companion = np.zeros((batch, n, n), dtype=complex)
    companion[:, 0, :] = -monic
    companion[:, np.arange(1, n), np.arange(n - 1)] = 1.0
    return np.linalg.eigvals(companion)


def robust_roots(coeffs, guess=None) -> np.ndarray:
    """Roots of a batch: warm-started Aberth, then cold Aberth, then eigenvalues

    Warm starts are moved off the real axis: from real starts the iterates
    of a real polynomial stay real and miss complex-conjugate pairs.

    Raises
    ------
    RootSolverFailure
        When even the companion eigenvalues are not finite.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if guess is not None:
        guess = np.array(np.atleast_2d(guess), dtype=complex)
        n = guess.shape[-1]
        guess += WARM_START_NUDGE * (1.0 + np.abs(guess)) * np.exp(1j * (np.arange(n) + 1.0))
        try:
            return aberth(coeffs, guess=guess)
        except RootSolverFailure:
            pass
    try:
        return aberth(coeffs)
    except RootSolverFailure:
        roots = companion_roots(coeffs)
    if not np.all(np.isfinite(roots)):
        raise RootSolverFailure("Companion eigenvalues are not finite")
    return roots


def continue_roots(coeffs, previous) -> np.ndarray:
    """Roots of `coeffs` ordered so that column j continues column j of `previous`

    Examples
    --------
    >>> continue_roots([1.0, 0.0, -1.0], [[-0.9, 1.1]]).real.round(12).tolist()
    [[-1.0, 1.0]]
    """
    previous = np.atleast_2d(previous)
    return match_roots(previous, robust_roots(coeffs, previous))
