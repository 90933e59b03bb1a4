import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckeplane import distributions as md
from heckeplane.errors import DomainError
from heckeplane.gaussian import Poly2, TestFunction
from heckeplane.plane_rep import GroupElement, ana_apply, random_test_function, theta

coprime = st.tuples(st.integers(-15, 15), st.integers(-15, 15)).filter(
    lambda t: t != (0, 0) and math.gcd(*t) == 1)


@given(coprime)
def test_coset_matrix_is_unimodular(ac):
    a, c = ac
    b, d = md.coset_matrix(a, c)
    assert b * (-c) - (-a) * d == 1


def test_coset_matrix_rejects():
    with pytest.raises(DomainError):
        md.coset_matrix(2, 4)


@given(coprime)
def test_mod_inverse(ac):
    a, c = ac
    if abs(a) > 1:
        assert (c * md.mod_inverse(c, a)) % abs(a) == 1


def test_coprime_pairs_count_and_order():
    A, C = md.coprime_pairs(10)
    brute = {(a, c) for a in range(-10, 11) for c in range(-10, 11) if math.gcd(a, c) == 1}
    assert set(zip(A.tolist(), C.tolist())) == brute and len(A) == len(brute)
    norms = np.maximum(np.abs(A), np.abs(C))
    assert np.all(np.diff(norms) >= 0)


@given(coprime, st.integers(1, 3))
def test_i_atom_equals_generator_composition(ac, M):
    a, c = ac
    b, d = md.coset_matrix(a, c)
    got = md.ana_apply_dist(GroupElement(b, -a, d, -c), md.psi(M))
    h = random_test_function(np.random.default_rng(abs(a) * 100 + abs(c)), n_atoms=1)
    x, y = md.pair(got, h), md.pair(md.i_atom(a, c, M), h)
    assert abs(x - y) <= 1e-10 * max(1.0, abs(x))


@given(coprime, st.integers(-3, 3))
def test_i_atom_independent_of_representative(ac, k):
    # (b, d) -> (b + k a, d + k c) multiplies by an upper unipotent on the right,
    # which fixes psi_M up to a chirp that is trivial on sqrt(2M) e1
    a, c = ac
    b, d = md.coset_matrix(a, c)
    g = GroupElement(b + k * a, -a, d + k * c, -c)
    h = TestFunction.gaussian(poly=Poly2.xi(1) * 1.0, wave=(0.1, 0.2))
    x = md.pair(md.ana_apply_dist(g, md.psi(2)), h)
    y = md.pair(md.i_atom(a, c, 2), h)
    assert abs(x - y) <= 1e-10 * max(1.0, abs(x))


@given(coprime)
def test_pairing_is_transpose_of_ana(ac):
    # <I, h> = <(-i F) I, i F^-1 h>, with the Fourier-side closed form of I
    a, c = ac
    if c == 0:
        return
    h = random_test_function(np.random.default_rng(abs(a) + 7 * abs(c)), n_atoms=1, max_degree=2)
    lhs = md.pair(md.i_atom(a, c, 1), h)
    rhs = md.pair(md.i_atom_fourier(a, c, 1), h.fourier().reflect().scale(1j))
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_theta_of_psi():
    z = 0.3 + 0.7j
    for m in (0, 11):
        assert abs(md.theta_dist(m, md.psi(1), z) - md.theta_psi(m, 1, z)) < 1e-12 * abs(md.theta_psi(m, 1, z))


def test_invariance_checked_on_construction():
    with pytest.raises(DomainError):
        md.ModDist((md.Dirac(1.0, (1.0, 0.0)),), inv_level=1)
    md.ModDist((md.Dirac(1.0, (math.sqrt(2.0), 0.0)),), inv_level=1)


def test_dirac_dilation():
    D = md.ModDist((md.Dirac(1.0, (1.0, 0.5)),))
    out = md.dilate_dist(D, 2.0, 1, 1)
    (d,) = out.atoms
    assert d.coeff == 1.0 and d.point == (0.5, 0.25)
    h = TestFunction.gaussian(poly=Poly2.x2() * 1.0, wave=(0.2, 0.0))
    # transpose: <q^(s + 2ipiA) D, h> = <D, q^(s - 2ipiA) h>
    from heckeplane.plane_rep import anat_power
    assert abs(md.pair(out, h) - md.pair(D, anat_power(2.0, 1, -1, h))) < 1e-14


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("M", [1, 2, 3, 4, 6])
def test_planar_hecke_on_psi(p, M):
    T = md.tp_plane(p, 11, md.psi(M))
    pts = sorted(round(d.norm2 / 2, 9) for d in T.diracs())
    want = [M * p] + ([M // p] if M % p == 0 else [])
    assert pts == sorted(want)
    assert T.inv_level == 1


@pytest.mark.parametrize("p,m", [(2, 11), (3, 13), (5, 11)])
def test_transfer_matches_q_side(p, m):
    # T_p theta_m psi_M: p^m f(pz) + (1/p) sum_s f((z+s)/p) on exp(2 i pi M z)
    z = 0.2 + 0.6j
    for M in (1, p, 2 * p):
        f = lambda w: md.theta_psi(m, M, w)
        qside = p ** m * f(p * z) + sum(f((z + s) / p) for s in range(p)) / p
        plane = md.theta_dist(m, md.tp_plane(p, m, md.psi(M)), z)
        if M % p:
            assert abs(plane - p ** m * f(p * z)) <= 1e-12 * abs(plane)
        else:
            assert abs(plane - qside) <= 1e-9 * abs(plane)


def test_tp_needs_level_one_and_prime():
    with pytest.raises(DomainError):
        md.tp_plane(4, 11, md.psi(1))
    with pytest.raises(DomainError):
        md.tp_plane(2, 11, md.ModDist((md.Dirac(1.0, (1.0, 0.0)),)))


def test_sigma_domain_and_level():
    D = md.psi(3)
    out = md.sigma_apply(3, 1, 0, D)
    assert out.inv_level == Fraction(1, 3)
    with pytest.raises(DomainError):
        md.sigma_apply(2, 1, 0, md.ModDist((md.Dirac(1.0, (1.0, 0.0)),), inv_level=2))
    flagged = md.sigma_apply(2, 1, 0, md.ModDist((md.Dirac(1.0, (1.0, 0.0)),)))
    assert flagged.flags


@given(st.sampled_from([2, 3]), st.integers(0, 3), st.floats(0.1, 20.0))
def test_chirp_average_matches_direct_mean(p, r, norm2):
    n = p ** r
    direct = np.mean(np.exp(1j * np.pi * np.arange(n) * norm2 / n))
    assert abs(md.chirp_average_scalar(p, r, 0, norm2) - direct) < 1e-9


def test_two_operator_forms_agree_on_level_one():
    for M in (1, 2, 4):
        a = md.t_tilde(2, md.psi(M))
        b = md.t_tilde_alt(2, md.psi(M))
        h = TestFunction.gaussian(zpar=0.3 + 1j, wave=(0.1, 0.0))
        assert abs(md.pair(a, h) - md.pair(b, h)) < 1e-12


@pytest.mark.parametrize("route", ["B2", "D2"])
def test_identity_routes_agree_for_j1(route):
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, c = 3, -7
        h = random_test_function(rng, n_atoms=1, max_degree=2)
        main = md.pairing_iac(a, c, 1, 1.5, 1, h)
        other = md.pairing_iac(a, c, 1, 1.5, 1, h, route=route)
        assert abs(main - other) <= 1e-9 * max(1.0, abs(main))


def test_unavailable_routes_return_none():
    h = TestFunction.gaussian()
    assert md.pairing_iac(0, 1, 1, 1.0, 1, h, route="B2") is None
    assert md.pairing_iac(1, 0, 1, 1.0, 1, h, route="D2") is None


def test_averaging_identity():
    rng = np.random.default_rng(5)
    h = random_test_function(rng, n_atoms=1)
    for r in range(1, 4):
        assert md.averaging_check(2, 5, 2, r, 0.7, 1, h) < 1e-9


@pytest.mark.parametrize("shift", [-2, 1, 3])
def test_poincare_summand_representative_independent(shift):
    z = 0.1 + 0.9j
    for a, c in [(1, 0), (2, 3), (-5, 7), (0, 1)]:
        x = md.poincare_summand(11, 1, a, c, z)
        y = md.poincare_summand(11, 1, a, c, z, shift=shift)
        assert abs(x - y) <= 1e-12 * max(abs(x), 1e-300)


def test_poincare_routes_and_backends_agree():
    z = np.array([0.1 + 1.0j, -0.3 + 0.8j])
    nb = md.poincare_eval(11, 1, z, 30, backend="numba")
    npy = md.poincare_eval(11, 1, z, 30, backend="numpy")
    assert np.allclose(nb, npy, rtol=1e-12, atol=0)
    d = md.poincare_eval_dist(11, 1, complex(z[0]), 30)
    assert abs(d - nb[0]) <= 1e-9 * abs(d)


def test_poincare_coefficient_ratios():
    est = md.poincare_coefficients(11, 1, 1.0, 60, 32)
    assert abs(est.coeffs[2] / est.coeffs[1] + 24) / 24 < 1e-3
    with pytest.raises(DomainError):
        md.poincare_coefficients(11, 1, 1.0, 10, 48)


def test_theta_of_ana_on_psi_is_automorphic_action():
    # theta_m(I_{a,c}) = D_{m+1}(coset) theta_m psi_M
    a, c, m, z = 2, 5, 11, 0.15 + 0.7j
    x = md.theta_dist(m, md.i_atom(a, c, 1), z)
    y = md.poincare_summand(m, 1, a, c, z)
    assert abs(x - y) <= 1e-10 * abs(y)
    assert cmath.isfinite(x)
