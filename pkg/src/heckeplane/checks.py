"""
Verification drivers.  Each returns a VerificationReport; the CLI and the
acceptance tests call the same functions so the two cannot drift apart.
"""

import math
import time

import mpmath
import numpy as np

from . import distributions as md
from .gaussian import Poly2
from .hecke_words import alpha_table, check_alpha_row, expand_brute, expand_t_power
from .plane_rep import (GroupElement, infinitesimal, intertwine_residual, random_group_element,
                        random_test_function)
from .qforms import DEFAULT_TRUNC, eigen_relation, eigenforms, primes_upto, ramanujan_check
from .report import VerificationReport
from .scans import bound_scan, growth_scan, test_family

DEFAULT_TOLS = {
    "intertwine": 1e-9,
    "closed_form": 1e-10,
    "transfer": 1e-8,
    "identity": 1e-9,
    "averaging": 1e-9,
    "poincare": 1e-3,
    "growth": 2.0,
}


def _rel(x, y):
    den = max(abs(x), abs(y))
    return 0.0 if den == 0 else abs(x - y) / den


def _timed(fn):
    def run(*args, **kw):
        t = time.perf_counter()
        rep = fn(*args, **kw)
        rep.wall_time = time.perf_counter() - t
        return rep
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def check_alpha(K=24, brute_k=10):
    rep = VerificationReport("alpha-table", {"K": K, "brute_k": brute_k})
    table = alpha_table(K)
    for k, row in enumerate(table):
        sums, support = check_alpha_row(k, row)
        mass = sum(sum(e) for e in row)
        rep.add(f"k{k}.rowsums", sums, "sum_r alpha = C(k,l)", sums)
        rep.add(f"k{k}.support", support, "2l-k-r <= 0", support)
        rep.add(f"k{k}.mass", mass, 2 ** k, mass == 2 ** k)
    for k in range(brute_k + 1):
        ok = expand_brute(k) == expand_t_power(k)
        rep.add(f"k{k}.brute", ok, "recursion == rewriting", ok)
    return rep


@_timed
def check_intertwine(trials=200, ms=(11, 13), seed=0, tol=DEFAULT_TOLS["intertwine"]):
    """theta_m(Ana(g) h) = D_{m+1}(g) theta_m h on seeded random data."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("verify-intertwine", {"trials": trials, "ms": list(ms)}, seed=seed)
    worst = {m: 0.0 for m in ms}
    for t in range(trials):
        m = ms[t % len(ms)]
        g = random_group_element(rng)
        h = random_test_function(rng, n_atoms=2)
        # add components that theta_m actually sees
        h = h + h.mul_poly(Poly2.xibar(m))
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2.0))
        worst[m] = max(worst[m], intertwine_residual(m, g, h, z))
    for m in ms:
        rep.add(f"m{m}.max_residual", worst[m], tol, worst[m] < tol)
    return rep


@_timed
def check_closed_form(bound=20, Ms=(1, 2, 3), tol=DEFAULT_TOLS["closed_form"]):
    """Generator composition against the closed forms, including the a = 0 cases."""
    rep = VerificationReport("verify-lemma22", {"bound": bound, "Ms": list(Ms)})
    worst_chirp = worst_dirac = 0.0
    exact_params = True
    for a in range(-bound, bound + 1):
        for c in range(-bound, bound + 1):
            if (a, c) == (0, 0) or math.gcd(a, c) != 1:
                continue
            b, d = md.coset_matrix(a, c)
            g = GroupElement(b, -a, d, -c)
            for M in Ms:
                got = md.ana_apply_dist(g, md.psi(M)).atoms
                want = md.i_atom(a, c, M).atoms
                if len(got) != 1 or type(got[0]) is not type(want[0]):
                    exact_params = False
                    continue
                x, y = got[0], want[0]
                if isinstance(y, md.Dirac):
                    r = abs(x.coeff - y.coeff) + max(abs(x.point[0] - y.point[0]), abs(x.point[1] - y.point[1]))
                    worst_dirac = max(worst_dirac, r)
                else:
                    worst_chirp = max(worst_chirp, abs(x.coeff * x.poly.c[0, 0] - y.coeff))
                    exact_params &= (x.poly.degree == 0 and _close(x.beta, y.beta)
                                     and _close(x.wave[0], y.wave[0]) and x.wave[1] == 0)
    rep.add("chirp.coeff_residual", worst_chirp, tol, worst_chirp < tol)
    rep.add("dirac.residual", worst_dirac, tol, worst_dirac < tol, "a = 0, c = -eps, eps = +-1")
    rep.add("phase_parameters", exact_params, "equal", exact_params)
    return rep


def _close(x, y):
    # phase parameters are ratios of small integers; equal up to one rounding
    return abs(x - y) <= 4 * np.finfo(float).eps * max(1.0, abs(x), abs(y))


def _q_side_tp(coeffs, p, m, z, dps=60):
    """p^m f(pz) + (1/p) sum_{s mod p} f((z + s)/p) for f = theta_m(sum_M c_M psi_M), in mpmath.

    f(w) = sum_M c_M (-i) (2M)^(m/2) exp(2 i pi M w) has integer frequencies, so the
    s-sum cancels to zero when p does not divide M; double precision would leave
    cancellation noise there, so the definition is evaluated with ``dps`` digits.
    """
    with mpmath.workdps(dps):
        zz = mpmath.mpc(z.real, z.imag)

        def f(w):
            return sum(mpmath.mpc(c.real, c.imag) * (-1j) * mpmath.mpf(2 * M) ** (mpmath.mpf(m) / 2)
                       * mpmath.expjpi(2 * M * w) for M, c in coeffs.items())

        val = p ** m * f(p * zz) + sum(f((zz + s) / p) for s in range(p)) / p
        return complex(val)


@_timed
def check_transfer(ps=(2, 3), ms=(11, 13), Mmax=6, nz=10, seed=0, tol=DEFAULT_TOLS["transfer"]):
    """T_p theta_m D = theta_m T_p^plane D for combinations of psi_M."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("verify-transfer", {"ps": list(ps), "ms": list(ms), "Mmax": Mmax, "nz": nz},
                             seed=seed)
    zs = rng.uniform(-0.5, 0.5, nz) + 1j * rng.uniform(0.3, 1.2, nz)
    cases = [(f"psi{M}", {M: 1 + 0j}) for M in range(1, Mmax + 1)]
    cases.append(("combo", {M: complex(rng.normal(), rng.normal()) for M in range(1, Mmax + 1)}))
    for p in ps:
        for m in ms:
            for name, coeffs in cases:
                D = md.ModDist((), 1)
                for M, c in coeffs.items():
                    D = D + md.psi(M).scale(c)
                T = md.tp_plane(p, m, D)
                worst = max(_rel(_q_side_tp(coeffs, p, m, z), md.theta_dist(m, T, z)) for z in zs)
                rep.add(f"p{p}.m{m}.{name}", worst, tol, worst < tol)
    return rep


def _coprime_draw(rng, lo=1, hi=12):
    while True:
        a, c = (int(v) * int(s) for v, s in zip(rng.integers(lo, hi + 1, 2), rng.choice([-1, 1], 2)))
        if math.gcd(a, c) == 1:
            return a, c


@_timed
def check_insertion_identity(js=(1, 2, 3), draws=50, M=1, seed=0, tol=DEFAULT_TOLS["identity"]):
    """Main route against the B2 route (and the Fourier-side D2 route) for P_j insertions."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("verify-identity-223", {"js": list(js), "draws": draws, "M": M}, seed=seed)
    for j in js:
        wb = wd = 0.0
        for _ in range(draws):
            a, c = _coprime_draw(rng)
            q = float(2.0 ** rng.uniform(-2, 2))
            h = random_test_function(rng, n_atoms=1, max_degree=2)
            main = md.pairing_iac(a, c, M, q, j, h)
            wb = max(wb, _rel(main, md.pairing_iac(a, c, M, q, j, h, route="B2")))
            wd = max(wd, _rel(main, md.pairing_iac(a, c, M, q, j, h, route="D2")))
        rep.add(f"j{j}.B2", wb, tol, wb < tol)
        rep.add(f"j{j}.D2", wd, tol, wd < tol)
    # the commutator the identity relies on, on random atoms
    worst_claim = worst_true = 0.0
    for _ in range(10):
        h = random_test_function(rng, n_atoms=1)
        x2h = h.mul_poly(Poly2.x2())
        comm = infinitesimal("A", x2h) - infinitesimal("A", h).mul_poly(Poly2.x2())
        for pt in rng.normal(size=(4, 2)):
            worst_claim = max(worst_claim, _rel(comm(*pt), x2h(*pt)))
            worst_true = max(worst_true, _rel(comm(*pt), -1j * h.mul_poly(Poly2.x1())(*pt)))
    rep.add("commutator.[2ipiA,x2]=x2", worst_claim, tol, worst_claim < tol)
    rep.add("commutator.[2ipiA,x2]=-i*x1", worst_true, tol, worst_true < tol)
    return rep


@_timed
def check_averaging(ps=(2, 3), rmax=3, configs=20, M=1, seed=0, tol=DEFAULT_TOLS["averaging"]):
    rng = np.random.default_rng(seed)
    rep = VerificationReport("averaging-check", {"ps": list(ps), "rmax": rmax, "configs": configs, "M": M},
                             seed=seed)
    for p in ps:
        for r in range(rmax + 1):
            worst = 0.0
            for _ in range(configs):
                a, c = _coprime_draw(rng, 1, 9)
                q = float(2.0 ** rng.uniform(-2, 2))
                h = random_test_function(rng, n_atoms=1, max_degree=2)
                worst = max(worst, md.averaging_check(a, c, p, r, q, M, h))
            rep.add(f"p{p}.r{r}", worst, tol, worst < tol)
    return rep


@_timed
def check_bound_scans(B=200, qs=(0.25, 1.0, 4.0), js=(0, 3), M=1):
    rep = VerificationReport("bound-scan", {"B": B, "qs": list(qs), "js": list(js), "M": M})
    for j in js:
        rep.extend(bound_scan(j, M, B, qs))
    return rep


@_timed
def check_poincare(m=11, M=1, y=1.0, B=200, K=64, tol=DEFAULT_TOLS["poincare"]):
    """Fourier coefficient ratios of the truncated Poincare series against the eigenform."""
    rep = VerificationReport("poincare-coeffs", {"m": m, "M": M, "y": y, "B": B, "K": K})
    f = eigenforms(m + 1, 8)[0].series
    est = md.poincare_coefficients(m, M, y, B, K)
    b = est.coeffs
    rep.add("b0", abs(b[0]), tol * abs(b[1]), abs(b[0]) < tol * abs(b[1]), "cusp form")
    for n in (2, 3):
        want = float(f[n]) / float(f[1])
        got = b[n] / b[1]
        err = abs(got - want) / abs(want)
        rep.add(f"b{n}/b1", {"estimate": complex(got), "exact": want, "rel_err": err}, tol, err < tol,
                f"truncation {est.truncation[n]:.2e}, aliasing {est.aliasing:.2e}")
    return rep


@_timed
def check_growth(p=2, m=11, M=1, j=3, Ns=(0, 1, 2, 3), B=40, eps=(0.5,)):
    rep = VerificationReport("growth-scan", {"p": p, "m": m, "M": M, "j": j, "Ns": list(Ns), "B": B,
                                             "eps": list(eps)})
    for name, h in test_family().items():
        rep.extend(growth_scan(p, m, M, j, Ns, h, B, eps), prefix=f"{name}.")
    return rep


@_timed
def check_ramanujan(weights=(12, 16, 18, 20, 22, 26), pmax=97, hecke_pmax=20, N=None):
    rep = VerificationReport("ramanujan", {"weights": list(weights), "pmax": pmax, "hecke_pmax": hecke_pmax})
    for w in weights:
        rep.extend(ramanujan_check(w, pmax, N))
        for idx, f in enumerate(eigenforms(w, N or DEFAULT_TRUNC)):
            for p in primes_upto(hecke_pmax):
                ok = eigen_relation(f.series, p, w)
                rep.add(f"w{w}.f{idx}.T{p}", ok, "T_p f = b_p f", ok)
    return rep


__all__ = [
    "DEFAULT_TOLS", "check_alpha", "check_intertwine", "check_closed_form", "check_transfer",
    "check_insertion_identity", "check_averaging", "check_bound_scans", "check_poincare", "check_growth",
    "check_ramanujan",
]
