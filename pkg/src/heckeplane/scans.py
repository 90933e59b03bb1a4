"""
Lattice scans over coprime pairs: weighted bound ratios and the 2N-power growth test.
"""

import math
from functools import lru_cache

import numpy as np

from .distributions import chirpwave_pairings, coprime_pairs, mod_inverse
from .errors import DomainError
from .gaussian import Poly2, TestFunction
from .hecke_words import alpha_table
from .plane_rep import anat_power, rising_poly_apply
from .report import VerificationReport

MAX_GROWTH_TERMS = 5_000_000


@lru_cache(maxsize=16)
def _phase_table(B, M):
    """Unit phases exp(2 i pi M cbar / a) for every pair with a != 0."""
    A, C = coprime_pairs(B)
    ph = np.ones(len(A), dtype=np.complex128)
    for i, (a, c) in enumerate(zip(A, C)):
        if a != 0:
            ph[i] = np.exp(2j * np.pi * M * mod_inverse(int(c), int(a)) / a)
    return ph


def iac_pairings(B, M, g, chirp=0.0, backend=None):
    """<tau[chirp] I_{a,c}, g> for every coprime pair with max-norm <= B, in coprime_pairs order."""
    A, C = coprime_pairs(B)
    out = np.empty(len(A), dtype=np.complex128)
    nz = A != 0
    a = A[nz].astype(float)
    c = C[nz].astype(float)
    r = math.sqrt(2 * M)
    coef = _phase_table(B, M)[nz] / a
    out[nz] = chirpwave_pairings(coef, c / a + chirp, r / a, np.zeros_like(a), g, backend=backend)
    for i in np.flatnonzero(~nz):
        eps = -int(C[i])
        x0 = eps * r
        out[i] = -1j * eps * np.exp(1j * np.pi * chirp * x0 * x0) * complex(g(x0, 0.0))
    return out


def weight_factor(A, C, q, j):
    """(a^2 + c^2)^(-1/2) (1 + a^2/q^2 + q^2 c^2)^(-j/2)."""
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    return (A * A + C * C) ** -0.5 * (1.0 + A * A / (q * q) + q * q * C * C) ** (-j / 2.0)


def tail_slope(norms, values):
    """Least-squares slope of log(values) against log(norms), with its standard error."""
    x = np.log(np.asarray(norms, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    n = len(x)
    if n < 3:
        return 0.0, math.inf
    X = np.vstack([x, np.ones(n)]).T
    coef, res, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    s2 = float(resid @ resid) / (n - 2)
    se = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
    return float(coef[0]), se


def test_family():
    """Fixed test functions for the scans: Gaussian, chirped Gaussian, polynomial times Gaussian."""
    poly = Poly2.from_cartesian({(1, 0): 1.0, (0, 2): 0.5, (2, 1): -0.25})
    return {
        "gaussian": TestFunction.gaussian(),
        "chirped": TestFunction.gaussian(zpar=0.5 + 1j),
        "poly": TestFunction.gaussian(poly=poly, wave=(0.2, -0.1)),
    }


test_family.__test__ = False


def ratio_profile(j, M, B, q, h, dilation=(1, -1), backend=None):
    """Max over pairs of each max-norm n of |pairing| / weight; returns (norms, ratios)."""
    s, sigma = dilation
    g = anat_power(q, s, sigma, rising_poly_apply(j, h))
    A, C = coprime_pairs(B)
    vals = np.abs(iac_pairings(B, M, g, backend=backend))
    ratio = vals / weight_factor(A, C, q, j)
    norm = np.maximum(np.abs(A), np.abs(C))
    out = np.zeros(B + 1)
    np.maximum.at(out, norm, ratio)
    return np.arange(1, B + 1), out[1:]


SLOPE_FLOOR = 0.05


def bound_scan(j, M, B, qs=(0.25, 1.0, 4.0), family=None, dilation=(1, -1), tail=0.5, backend=None):
    """Finite ratios and no increasing trend over the tail [tail * B, B] of the max-norm axis.

    A tail passes when its log-log slope is at most max(2 stderr, SLOPE_FLOOR).  The floor
    absorbs the O(n^-2) approach of a bounded ratio to its limit; a genuine power-law
    growth shows up with a slope near a positive integer.  The slope over the tail ending
    at B/2 is reported too, so saturation and growth can be told apart.
    """
    family = family or test_family()
    rep = VerificationReport("bound-scan", {"j": j, "M": M, "B": B, "qs": list(qs), "tail": tail,
                                            "dilation": list(dilation), "slope_floor": SLOPE_FLOOR})
    for name, h in family.items():
        for q in qs:
            norms, ratios = ratio_profile(j, M, B, q, h, dilation, backend)
            key = f"j{j}.{name}.q{q:g}"
            if not np.any(ratios):
                rep.add(key, {"max_ratio": 0.0}, "finite", True, "pairings vanish identically")
                continue
            finite = bool(np.all(np.isfinite(ratios)))
            slope, se = _tail_fit(norms, ratios, int(tail * B), B)
            half, _ = _tail_fit(norms, ratios, int(tail * B / 2), B // 2)
            rep.add(key, {"max_ratio": float(ratios.max()), "tail_slope": slope, "stderr": se,
                          "tail_slope_half": half},
                    "finite and slope <= max(2*stderr, floor)", finite and slope <= max(2.0 * se, SLOPE_FLOOR))
    return rep


def _tail_fit(norms, ratios, lo, hi):
    sel = (norms >= max(lo, 1)) & (norms <= hi) & (ratios > 0)
    return tail_slope(norms[sel], ratios[sel])


def growth_terms(p, N):
    """(q, r, alpha) for the normal form of T~^(2N), with q = p^(ell - N)."""
    row = alpha_table(2 * N)[2 * N]
    out = []
    for ell, entries in enumerate(row):
        for r, a in enumerate(entries):
            if a:
                out.append((float(p) ** (ell - N), r, a))
    return out


def s_series_pairing(p, r, q, j, M, B, h, backend=None):
    """<q^(1 + 2 i pi A^nat) sigma_r S_M^(j), h>, truncated at max-norm B.

    Transposing: = sum over pairs of <I_{a,c}, S(p^r, .) Q P_j(2 i pi A) h>, Q = q^(1 - 2 i pi A^nat),
    and S(p^r, .) is the chirp average, so each term is an average of p^r shifted pairings.
    """
    g = anat_power(q, 1, -1, rising_poly_apply(j, h))
    n = p ** r
    total = np.zeros(len(coprime_pairs(B)[0]), dtype=np.complex128)
    for s in range(n):
        total += iac_pairings(B, M, g, chirp=s / n, backend=backend)
    return np.sum(total) / n


def growth_scan(p, m, M, j, Ns, h, B, eps=(0.1, 0.5), backend=None):
    """|<(p^(-m/2) T_p^plane)^(2N) S_M^(j), h>| against 2^(2N) (2p)^(N eps)."""
    if j < 0 or p < 2:
        raise DomainError("need j >= 0 and a prime p")
    rep = VerificationReport("growth-scan", {"p": p, "m": m, "M": M, "j": j, "Ns": list(Ns), "B": B,
                                             "eps": list(eps)})
    npairs = len(coprime_pairs(B)[0])
    measured = {}
    for N in Ns:
        terms = growth_terms(p, N)
        cost = npairs * sum(p ** r for _, r, _ in terms)
        if cost > MAX_GROWTH_TERMS:
            raise DomainError(f"growth scan would evaluate {cost} pairings (limit {MAX_GROWTH_TERMS})")
        mass = sum(a for _, _, a in terms)
        rep.add(f"N{N}.mass", mass, 2 ** (2 * N), mass == 2 ** (2 * N))
        val = sum(a * s_series_pairing(p, r, q, j, M, B, h, backend) for q, r, a in terms)
        measured[N] = abs(val)
    for e in eps:
        norm = {N: measured[N] / (2 ** (2 * N) * (2 * p) ** (N * e)) for N in Ns}
        for N in Ns:
            rep.add(f"eps{e:g}.N{N}.normalised", norm[N], "", True)
        for N0, N1 in zip(Ns, Ns[1:]):
            rep.add(f"eps{e:g}.N{N1}.vs.N{N0}", norm[N1] / norm[N0] if norm[N0] else math.inf,
                    "<= 2", norm[N1] <= 2.0 * norm[N0])
    return rep


__all__ = [
    "iac_pairings", "weight_factor", "tail_slope", "test_family", "ratio_profile", "bound_scan",
    "growth_terms", "s_series_pairing", "growth_scan",
]
