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

from braidfield.braid import parse_braid_word
from braidfield.exceptions import IntegerizeFailure, MalformedPolynomial
from braidfield.project import (
    RealPoly3,
    degree_bound,
    gauss_linking_number,
    integerize,
    inverse_stereographic,
    nodal_residual,
    reverify,
    split_real_imag,
    stereographic_project,
)
from braidfield.semiholo import SemiholoPoly, assemble, construct
from braidfield.verify import find_lambda, sample_nodal_set, transversality_check

from conftest import CORPUS

HOPF = SemiholoPoly({(2, 0, 0): 1.0, (0, 2, 0): -1.0})


def test_projection_agrees_pointwise(rng):
    f = SemiholoPoly({(2, 0, 0): 1.0, (1, 1, 0): 0.5, (0, 0, 2): -0.25j, (0, 1, 0): 0.3})
    p = stereographic_project(f)
    assert p.degree <= 2 * f.degree
    x, y, z = rng.uniform(-2, 2, (3, 100))
    rho = x**2 + y**2 + z**2 + 1
    u = (rho - 2 + 2j * z) / rho
    v = 2 * (x + 1j * y) / rho
    expected = f(u, v) * rho**f.degree
    np.testing.assert_allclose(p(x, y, z), expected, rtol=1e-10, atol=1e-10 * rho.max() ** 2)


def test_inverse_projection_round_trip(rng):
    xyz = rng.uniform(-3, 3, (20, 3))
    rho = (xyz**2).sum(axis=1) + 1
    u = (rho - 2 + 2j * xyz[:, 2]) / rho
    v = 2 * (xyz[:, 0] + 1j * xyz[:, 1]) / rho
    back, kept = inverse_stereographic(np.stack([u, v], axis=-1))
    assert kept.all()
    np.testing.assert_allclose(back, xyz, atol=1e-12)


def test_pole_is_left_out():
    points = np.array([[1.0 + 0j, 0j], [-1.0 + 0j, 0j]])
    xyz, kept = inverse_stereographic(points)
    assert kept.tolist() == [False, True]
    assert xyz.tolist() == [[0.0, 0.0, 0.0]]


def test_split_real_imag():
    p = stereographic_project(HOPF.rescale(0.5))
    F1, F2 = split_real_imag(p)
    assert not F1.coeffs.imag.any() and not F2.coeffs.imag.any()
    np.testing.assert_allclose(F1.coeffs + 1j * F2.coeffs, p.coeffs)


def test_hopf_link():
    nodal = sample_nodal_set(HOPF, 0.5, 256)
    curves = [
        inverse_stereographic(np.stack([nodal.u[:, j], nodal.v[:, j]], axis=-1))[0]
        for j in range(2)
    ]
    assert abs(gauss_linking_number(*curves)) == pytest.approx(1.0, abs=0.05)

    p = stereographic_project(HOPF.rescale(0.5))
    xyz, _ = inverse_stereographic(nodal.points())
    assert nodal_residual(p, xyz) < 1e-8


def test_unlinked_circles():
    t = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    first = np.stack([np.cos(t), np.sin(t), 0 * t], axis=-1)
    second = first + np.array([5.0, 0.0, 0.0])
    assert abs(gauss_linking_number(first, second)) < 1e-3


def test_integerize_and_reverify():
    p = stereographic_project(SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -0.25}))
    q, scale = integerize(p, margin=1.0)
    assert scale == 2
    assert np.array_equal(q.coeffs, np.round(2 * p.coeffs))
    xyz = np.array([[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]])
    assert reverify(p, q, scale, xyz, margin=1.0) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(IntegerizeFailure):
        reverify(p, RealPoly3(q.coeffs + 1.0), scale, xyz, margin=1.0)


def test_integerize_gives_up():
    with pytest.raises(IntegerizeFailure) as excinfo:
        integerize(RealPoly3([[[1 / 3]]]), margin=1e-20, bound=2)
    assert excinfo.value.stage == "projection"


def test_json_and_text():
    p = RealPoly3([[[0.0]], [[2.0 - 1.0j]]])
    assert p.degree == 1
    assert p.to_text() == "(2-1j)*x"
    assert RealPoly3.from_json(p.to_json()).monomials() == p.monomials()
    with pytest.raises(MalformedPolynomial):
        RealPoly3.from_json({"monomials": [{"x": 1}]})


def test_degree_bound():
    assert degree_bound(parse_braid_word("2 -1 2 1 1 1")) == 66
    assert degree_bound(parse_braid_word("1")) == 4


def test_trapezoidal_linking_of_a_coarse_chain():
    t = np.linspace(0, 2 * np.pi, 24, endpoint=False)
    ring = np.stack([np.cos(t), np.sin(t), 0 * t], axis=-1)
    chain = np.stack([1 + np.cos(t), 0 * t, np.sin(t)], axis=-1)
    assert abs(gauss_linking_number(ring, chain)) == pytest.approx(1.0, abs=0.05)
    assert gauss_linking_number(ring, chain) == pytest.approx(gauss_linking_number(chain, ring))


@pytest.fixture(scope="module")
def verified():
    """word -> (braid, f at its amplitude, projected nodal samples, transversality margin)"""
    cache = {}

    def get(word, strands):
        if word not in cache:
            b = parse_braid_word(word, strands)
            f = assemble(construct(b).fourier)
            lam, _ = find_lambda(f, b)
            nodal = sample_nodal_set(f, lam, 512)
            f_lam = f.rescale(lam)
            xyz, _ = inverse_stereographic(nodal.points())
            cache[word] = (b, f_lam, xyz, transversality_check(f_lam, nodal).margin)
        return cache[word]

    return get


@pytest.mark.slow
@pytest.mark.parametrize("word, strands", CORPUS)
def test_projection_vanishes_on_the_closure(verified, word, strands):
    b, f_lam, xyz, _ = verified(word, strands)
    p = stereographic_project(f_lam)
    assert p.degree <= degree_bound(b)
    rho = (xyz**2).sum(axis=1) + 1
    for part in split_real_imag(p):
        # F(x) / rho^n is the real or imaginary part of f on the 3-sphere
        values = part(xyz[:, 0], xyz[:, 1], xyz[:, 2]) / rho**f_lam.degree
        assert np.abs(values).max() < 1e-8 * f_lam.scale


@pytest.mark.slow
@pytest.mark.parametrize("word, strands", [("1 1", 2), ("2 -1 2 1 1 1", 3)])
def test_integerized_projection_reverifies(verified, word, strands):
    _, f_lam, xyz, margin = verified(word, strands)
    p = stereographic_project(f_lam)
    q, scale = integerize(p, margin, 12, xyz)
    assert np.array_equal(q.coeffs.real, np.round(q.coeffs.real))
    assert np.array_equal(q.coeffs.imag, np.round(q.coeffs.imag))
    assert reverify(p, q, scale, xyz, margin) < 0.1 * margin
