import numpy as np
import pytest

from heckeplane import distributions as md
from heckeplane.errors import DomainError
from heckeplane.gaussian import Poly2, TestFunction
from heckeplane.scans import (bound_scan, growth_scan, growth_terms, iac_pairings, ratio_profile, tail_slope,
                              weight_factor)


def test_tail_slope_recovers_power_law():
    n = np.arange(10, 200)
    s, se = tail_slope(n, 3.0 * n ** 1.5)
    assert abs(s - 1.5) < 1e-12 and se < 1e-10


def test_weight_factor_reduces_at_j0():
    assert np.allclose(weight_factor([3], [4], 2.0, 0), [0.2])


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_vectorised_pairings_match_direct(backend):
    h = TestFunction.gaussian(zpar=0.2 + 1j, poly=Poly2.x1() * 1.0, wave=(0.1, 0.0))
    A, C = md.coprime_pairs(6)
    got = iac_pairings(6, 2, h, chirp=0.25, backend=backend)
    for k in range(0, len(A), 7):
        D = md.i_atom(int(A[k]), int(C[k]), 2)
        want = md.pair(D, h.chirp(0.25))
        assert abs(got[k] - want) <= 1e-12 * max(1.0, abs(want))


def test_gaussian_ratio_is_bounded_at_j0():
    rep = bound_scan(0, 1, 80, qs=(1.0,), family={"gaussian": TestFunction.gaussian()})
    assert rep.passed


def test_radial_function_is_killed_by_rotation():
    n, r = ratio_profile(2, 1, 20, 1.0, TestFunction.gaussian())
    assert not np.any(r)


def test_growth_terms_mass():
    for N in range(4):
        assert sum(a for _, _, a in growth_terms(2, N)) == 4 ** N


def test_growth_guard():
    with pytest.raises(DomainError):
        growth_scan(2, 11, 1, 3, [0, 6], TestFunction.gaussian(), 200)
    with pytest.raises(DomainError):
        growth_scan(1, 11, 1, 3, [0], TestFunction.gaussian(), 5)
