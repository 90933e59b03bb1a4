import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckeplane import distributions as md
from heckeplane.errors import DomainError, RewriteError
from heckeplane.gaussian import TestFunction
from heckeplane.hecke_words import (HeckeWord, NormalForm, Rpow, Sigma, SigmaSup, Tau, alpha_csv, alpha_table,
                                    apply_normal_form, check_alpha_row, expand_brute, expand_t_power, rewrite,
                                    t_tilde_words)


def test_small_alpha_values():
    # R R + R R^-1 s1 + R^-1 s1 R + R^-1 s1 R^-1 s1 = R^2 + s1 + I + R^-2 s2
    nf = expand_t_power(2)
    assert nf.terms == {(2, 0): 1, (0, 0): 1, (0, 1): 1, (-2, 2): 1}
    assert str(expand_t_power(1)) == "R^1 + R^-1s1"


@pytest.mark.parametrize("k", range(0, 9))
def test_recursion_equals_brute_force(k):
    assert expand_brute(k) == expand_t_power(k)


@pytest.mark.parametrize("k", [0, 5, 12, 24])
def test_row_properties(k):
    row = alpha_table(k)[k]
    assert check_alpha_row(k, row) == (True, True)
    assert sum(map(sum, row)) == 2 ** k


def test_csv_row():
    text = alpha_csv(alpha_table(2))
    assert text.splitlines()[0] == "k,ell,r,alpha"
    assert "2,1,0,1" in text.splitlines()


def test_rewrite_rules():
    assert rewrite(HeckeWord((Sigma(2), Rpow(1)))).terms == {(1, 1): 1}
    assert rewrite(HeckeWord((Sigma(1), Rpow(1)))).terms == {(1, 0): 1}
    assert rewrite(HeckeWord((Sigma(1), Rpow(-1), Sigma(1)))).terms == {(-1, 2): 1}
    assert rewrite(HeckeWord((Sigma(3), Sigma(1)))).terms == {(0, 3): 1}


def test_tau_absorption():
    assert rewrite(HeckeWord((Tau(Fraction(1, 2)), Sigma(1))), p=2).terms == {(0, 1): 1}
    w = HeckeWord((Tau(Fraction(1)), Rpow(-1), Sigma(1)))
    assert rewrite(w, p=2).terms == {(-1, 1): 1}
    with pytest.raises(RewriteError):
        rewrite(HeckeWord((Tau(Fraction(1, 4)), Sigma(1))), p=2)
    with pytest.raises(RewriteError):
        rewrite(HeckeWord((Tau(Fraction(1, 2)),)))


def test_domain_levels():
    levels, flags = HeckeWord((SigmaSup(1, 1), Rpow(-1))).levels()
    assert levels == [0, 1, 0] and not flags
    with pytest.raises(DomainError):
        HeckeWord((Sigma(1), Rpow(-1))).levels()
    _, flags = HeckeWord((SigmaSup(1, 1),)).levels()
    assert flags


@given(st.lists(st.booleans(), max_size=12))
def test_any_t_tilde_word_is_a_single_monomial(choice):
    syms = []
    for c in choice:
        syms += [Rpow(1)] if c else [Rpow(-1), Sigma(1)]
    nf = rewrite(HeckeWord(syms))
    assert nf.mass() == 1
    (e, r), = nf.terms
    assert e == sum(1 if c else -1 for c in choice) and 0 <= r <= len(choice)


def test_words_enumeration():
    assert len(list(t_tilde_words(5))) == 32


def _pairing_profile(D, hs):
    return [md.pair(D, h) for h in hs]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_normal_form_acts_like_the_power(p, k):
    """The rewritten expansion and k literal applications of R + R^-1 sigma_1 agree on psi_M."""
    hs = [TestFunction.gaussian(zpar=z, wave=(w, 0.0)) for z, w in [(1j, 0.0), (0.3 + 0.6j, 0.2), (2j, -0.4)]]
    nf = expand_t_power(k)
    for M in (1, p, p * p + 1):
        D = md.psi(M)
        lit = D
        for _ in range(k):
            lit = md.t_tilde(p, lit)
        fast = apply_normal_form(nf, p, D)
        for x, y in zip(_pairing_profile(lit, hs), _pairing_profile(fast, hs)):
            assert abs(x - y) <= 1e-10 * max(1.0, abs(x))


def test_normal_form_equality_and_coefficients():
    nf = expand_t_power(3)
    c = nf.coefficients()
    assert sum(map(sum, c.values())) == 8
    with pytest.raises(ValueError):
        NormalForm({(0, 0): 1}).coefficients()
    assert math.comb(3, 1) == sum(c[1])
