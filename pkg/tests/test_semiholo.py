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
from hypothesis import given
from hypothesis import strategies as st

from braidfield.braid import parse_braid_word
from braidfield.exceptions import CancellationFailure, MalformedPolynomial
from braidfield.interp import TrigPoly
from braidfield.semiholo import (
    ComponentCurve,
    FourierBraid,
    FractionalLaurent,
    SemiholoPoly,
    assemble,
    assert_cancellation,
    construct,
    degree_bounds,
    expand_component,
    lemniscate_braid,
    spiral_braid,
)

from conftest import CORPUS


def rounded(f, digits=12):
    """Terms of f with coefficients rounded, zeros dropped"""
    out = {}
    for key, c in f.terms.items():
        c = complex(round(c.real, digits), round(c.imag, digits))
        if c != 0:
            out[key] = c
    return out


@st.composite
def trig_polys(draw, max_degree=4):
    n = draw(st.integers(0, max_degree))
    cos = draw(st.lists(st.floats(-1, 1), min_size=n + 1, max_size=n + 1))
    sin = draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n))
    return TrigPoly.from_real(cos, sin)


@pytest.mark.parametrize("lam", [1.0, 0.5, 0.3])
def test_torus_closed_forms(lam):
    f = assemble(lemniscate_braid(2).with_lambda(lam))
    assert rounded(f) == {(2, 0, 0): 1.0, (0, 1, 0): complex(round(-(lam**2), 12))}
    g = assemble(lemniscate_braid(2, repeat=2).with_lambda(lam))
    assert rounded(g) == {(2, 0, 0): 1.0, (0, 2, 0): complex(round(-(lam**2), 12))}


def test_constructed_single_letter():
    construction = construct(parse_braid_word("1"))
    a, _ = construction.F[0].real_coefficients()
    assert a.tolist() == pytest.approx([0.0, 0.5])
    _, b = construction.G[0].real_coefficients()
    assert b.tolist() == pytest.approx([0.0, 1.0])
    f = assemble(construction.fourier)
    assert f.strands == 2 and f.degree == 2 and f.is_harmonic()
    assert rounded(f) == {
        (2, 0, 0): 1.0,
        (0, 0, 0): 0.375,
        (0, 1, 0): -0.5625,
        (0, 0, 1): -0.0625,
    }
    assert list(f.terms) == [(2, 0, 0), (0, 0, 0), (0, 0, 1), (0, 1, 0)]


@given(
    st.integers(1, 5),
    trig_polys(),
    trig_polys(),
    st.floats(0.1, 2.0),
    st.floats(0.1, 2.0),
)
def test_fractional_powers_cancel(s_c, F, G, a, b):
    expanded = expand_component(F, G, s_c, a, b)
    assert expanded.fractional_residual() < 1e-10
    assert_cancellation(expanded, tol=1e-10)


@given(st.integers(1, 4), trig_polys(3), trig_polys(3), st.integers(0, 2**32 - 1))
def test_expansion_matches_the_direct_product(s_c, F, G, seed):
    rng = np.random.default_rng(seed)
    fb = FourierBraid((ComponentCurve(F, G, s_c), ComponentCurve(G, F, 1)), lam=0.7)
    f = assemble(fb, tol=1e-11)
    u = rng.uniform(-1.5, 1.5, 50) + 1j * rng.uniform(-1.5, 1.5, 50)
    t = rng.uniform(0, 2 * np.pi, 50)
    expected = fb.direct_product(u, t)
    size = sum(abs(c) * np.abs(u) ** k for (k, _, _), c in f.terms.items())
    np.testing.assert_allclose(f(u, np.exp(1j * t)), expected, rtol=1e-9, atol=1e-7 * size.max())


def test_cancellation_failure():
    broken = FractionalLaurent(np.array([[1.0, 0.5]], dtype=complex), offset=0, denominator=2)
    with pytest.raises(CancellationFailure) as excinfo:
        assert_cancellation(broken)
    assert excinfo.value.exponent == (0, 1)
    assert excinfo.value.stage == "expansion"


def test_repeat_paths_agree():
    fb = lemniscate_braid(3)
    direct = assemble(fb.repeat(2))
    substituted = assemble(fb).repeat(2)
    assert rounded(direct) == rounded(substituted)
    assert fb.repeat(2).repeats == 2


def test_repeat_keeps_the_braid():
    fb = lemniscate_braid(2, repeat=3)
    assert str(fb.braid) == "1 1 1"
    assert str(fb.repeat(2).braid) == "1 1 1 1 1 1"
    assert lemniscate_braid(3).braid is None


def test_rescale_matches_a_new_amplitude():
    fb = spiral_braid(3, TrigPoly.from_real([0.0, 0.3], [1.0, 0.2]))
    rescaled = assemble(fb).rescale(0.4)
    direct = assemble(fb.with_lambda(0.4))
    assert rescaled.lam == direct.lam == 0.4
    for key in set(rescaled.terms) | set(direct.terms):
        expected = direct.terms.get(key, 0j)
        assert rescaled.terms.get(key, 0j) == pytest.approx(expected, abs=1e-12)


def test_harmonic_and_degree():
    f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 1): 1.0})
    assert not f.is_harmonic()
    assert f.degree == 2
    assert SemiholoPoly({(1, 0, 3): 2.0}).degree == 4


def test_malformed_polynomials():
    with pytest.raises(MalformedPolynomial):
        SemiholoPoly({(1, 0, 0): 1.0}, strands=2)
    with pytest.raises(MalformedPolynomial):
        SemiholoPoly({(0, 1, 0): 1.0})
    with pytest.raises(MalformedPolynomial):
        SemiholoPoly.from_json({"strands": 1, "monomials": [{"u": 1}]})


def test_json_keeps_the_provenance():
    f = assemble(lemniscate_braid(2, repeat=3).with_lambda(0.5))
    data = f.to_json()
    assert data["strands"] == 2 and data["lambda"] == 0.5
    assert data["braid"] == {"strands": 2, "word": [1, 1, 1]}
    assert [(e["u"], e["v"], e["vbar"]) for e in data["monomials"]] == list(f.terms)
    back = SemiholoPoly.from_json(data)
    assert back.terms == f.terms and back.braid == f.braid


def test_u_coefficients_and_evaluation(rng):
    f = SemiholoPoly({(2, 0, 0): 1.0, (1, 1, 0): 0.5j, (0, 0, 2): -0.25})
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    u = rng.normal(size=5) + 1j * rng.normal(size=5)
    coeffs = f.u_coefficients(v)
    assert coeffs.shape == (5, 3)
    by_coefficients = np.array([np.polyval(c, x) for c, x in zip(coeffs, u)])
    np.testing.assert_allclose(by_coefficients, f(u, v), rtol=1e-12)


def test_threads_give_the_same_polynomial():
    fb = construct(parse_braid_word("1 1")).fourier
    assert rounded(assemble(fb, threads=2)) == rounded(assemble(fb))


def test_degree_bounds():
    assert degree_bounds(parse_braid_word("2 -1 2 1 1 1")) == (2.4, 33)
    c1, c2 = degree_bounds(parse_braid_word("1"))
    assert c1 == pytest.approx(2 / 3)
    assert c2 == 2


@pytest.mark.slow
@pytest.mark.parametrize("word, strands", CORPUS)
def test_corpus_degree_and_harmonicity(word, strands):
    b = parse_braid_word(word, strands)
    f = assemble(construct(b).fourier)
    c1, c2 = degree_bounds(b)
    assert f.is_harmonic()
    assert f.strands == b.strands
    assert max(b.strands, c1) <= f.degree <= max(b.strands, c2)
