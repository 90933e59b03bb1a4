import cmath
import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from heckeplane.errors import DomainError
from heckeplane.gaussian import (GaussAtom, Poly2, TestFunction, gauss_base, gauss_moment,
                                 moment_batch, moment_closed_form, quadrature_oracle)

finite = st.floats(-1.0, 1.0, allow_nan=False)
zpars = st.builds(complex, st.floats(-1.0, 1.0), st.floats(0.4, 2.0))


def _mp_moment(a, b, zeta, w1, w2):
    """Independent oracle: expand in Cartesian monomials, integrate each factor by quadrature."""
    x, y = sp.symbols("x y", real=True)
    poly = sp.Poly(sp.expand((x + sp.I * y) ** a * (x - sp.I * y) ** b), x, y)

    def one_d(k, w):
        return mpmath.quad(lambda t: t ** k * mpmath.expjpi(zeta * t * t + 2 * w * t), [-mpmath.inf, 0, mpmath.inf])

    with mpmath.workdps(30):
        return complex(sum(complex(c) * one_d(i, w1) * one_d(j, w2) for (i, j), c in poly.terms()))


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (0, 3)])
def test_moment_against_quadrature_oracle(a, b):
    zeta, w = 0.5 + 1j, (0.2, -0.1)
    got = gauss_moment(Poly2.xi(a) * Poly2.xibar(b), zeta, w)
    want = _mp_moment(a, b, zeta, *w)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_moment_against_quadrature():
    p = Poly2.from_cartesian({(2, 0): 1.0, (1, 1): -0.5j, (0, 3): 0.25})
    atom = GaussAtom(1.0, p, 0.3 + 1.1j, (0.2, -0.4))
    val, err = quadrature_oracle(atom, 7.0, 800)
    assert err < 1e-10
    assert abs(gauss_moment(p, atom.zpar, atom.wave) - val) < 1e-9


def test_symbolic_closed_form_matches_numeric():
    z = sp.Symbol("z")
    expr = moment_closed_form([(1, 1, 1)], z, 0, 0, I=sp.I, exp=sp.exp, pi=sp.pi)
    # int |x|^2 exp(i pi z |x|^2) = -1/(pi z^2)
    assert sp.simplify(expr + 1 / (sp.pi * z ** 2)) == 0


def test_gauss_base():
    assert abs(gauss_base(1j) - 1.0) < 1e-15
    with pytest.raises(DomainError):
        gauss_base(1.0)


def test_rotation_eigenvalues():
    # 2 i pi A xi^k = k xi^k on radial Gaussians
    for k in range(4):
        h = TestFunction.gaussian(poly=Poly2.xi(k) * 1.0)
        hb = TestFunction.gaussian(poly=Poly2.xibar(k) * 1.0)
        pt = (0.3, -0.7)
        assert abs(h.map(lambda a: a.rotation())(*pt) - k * h(*pt)) < 1e-12
        assert abs(hb.map(lambda a: a.rotation())(*pt) + k * hb(*pt)) < 1e-12


@given(zpars, finite, finite)
def test_fourier_twice_is_reflection(z, w1, w2):
    h = TestFunction.gaussian(zpar=z, poly=Poly2.from_cartesian({(1, 0): 1.0, (1, 2): 0.5}), wave=(w1, w2))
    ff = h.fourier().fourier()
    for pt in [(0.1, 0.2), (-0.5, 0.3)]:
        want = h(-pt[0], -pt[1])
        assert abs(ff(*pt) - want) <= 1e-9 * max(1.0, abs(want))


@given(zpars, finite, finite)
def test_plancherel_pairing(z, w1, w2):
    # int f g = int F f (x) F g (-x)
    f = TestFunction.gaussian(zpar=z, poly=Poly2.xi(1) * 1.0, wave=(w1, w2))
    g = TestFunction.gaussian(zpar=1j, poly=Poly2.xibar(2) * 1.0)
    lhs = sum(a.coeff * b.coeff * gauss_moment(a.poly * b.poly, a.zpar + b.zpar,
                                               (a.wave[0] + b.wave[0], a.wave[1] + b.wave[1]))
              for a in f.atoms for b in g.atoms)
    Ff, Fg = f.fourier(), g.fourier().reflect()
    rhs = sum(a.coeff * b.coeff * gauss_moment(a.poly * b.poly, a.zpar + b.zpar,
                                               (a.wave[0] + b.wave[0], a.wave[1] + b.wave[1]))
              for a in Ff.atoms for b in Fg.atoms)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_poly_product_evaluates_pointwise(a, b, c, d):
    p = Poly2.xi(a) * Poly2.xibar(b) + Poly2.x1()
    q = Poly2.xi(c) * 0.5 - Poly2.xibar(d)
    x1, x2 = 0.37, -1.2
    assert abs((p * q)(x1, x2) - p(x1, x2) * q(x1, x2)) < 1e-10


def test_cartesian_roundtrip():
    c = {(2, 1): 1.5, (0, 3): -2.0, (1, 0): 0.5j}
    p = Poly2.from_cartesian(c)
    back = Poly2.from_cartesian(p.to_cartesian())
    assert p.allclose(back)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_moment_batch_matches_scalar(backend):
    rng = np.random.default_rng(1)
    p = Poly2.from_cartesian({(0, 0): 1.0, (2, 1): 0.3, (1, 3): -1j})
    z = rng.uniform(-1, 1, 50) + 1j * rng.uniform(0.5, 2, 50)
    w1, w2 = rng.normal(size=50), rng.normal(size=50)
    coef = rng.normal(size=50) + 0j
    got = moment_batch(p, coef, z, w1, w2, backend=backend)
    want = np.array([c * gauss_moment(p, zz, (a, b)) for c, zz, a, b in zip(coef, z, w1, w2)])
    assert np.max(np.abs(got - want) / np.maximum(1, np.abs(want))) < 1e-12


def test_backends_agree():
    p = Poly2.xi(3) * Poly2.xibar(1)
    z = np.linspace(0.1, 1, 20) + 1j
    a = moment_batch(p, 1.0, z, 0.1, 0.2, backend="numpy")
    b = moment_batch(p, 1.0, z, 0.1, 0.2, backend="numba")
    assert np.allclose(a, b, rtol=1e-13, atol=0)


def test_cmath_consistency_of_base():
    z = 0.5 + 0.5j
    assert abs(gauss_base(z, (0.3, 0.0)) - cmath.exp(-1j * math.pi * 0.09 / z) / (-1j * z)) < 1e-15
