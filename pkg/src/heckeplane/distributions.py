"""
Arithmetic distributions in the plane and the planar Hecke operator.

Two closed-form species of distribution atoms are enough for everything
here: Dirac masses and chirped plane waves (optionally times a polynomial).
Distributions act on test functions by the bilinear pairing
<D, h> = int D(x) h(x) dx, and operators on distributions use the
function-style formulas, e.g. (R T)(x) = p^-1 T(x / sqrt(p)), so that a
Dirac mass rescales as delta_{x0}(x / lam) = lam^2 delta_{lam x0}.
"""

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, UnsupportedTransform
from .gaussian import PhaseAtom, Poly2, gauss_moment, moment_batch
from .plane_rep import (Diagonal, GroupElement, Inversion, LowerUnipotent, anat_power, decompose,
                        rising_poly_apply)

INV_TOL = 1e-9


@dataclass(frozen=True)
class Dirac:
    coeff: complex
    point: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "point", (float(self.point[0]), float(self.point[1])))

    @property
    def norm2(self):
        return self.point[0] ** 2 + self.point[1] ** 2

    def scale(self, s):
        return replace(self, coeff=self.coeff * s)


@dataclass(frozen=True)
class ChirpWave(PhaseAtom):
    """coeff * poly(x) * exp(i pi beta |x|^2 + 2 pi i <wave, x>) with beta real."""

    note: str = ""

    def __post_init__(self):
        super().__post_init__()
        if self.zpar.imag != 0:
            raise DomainError("ChirpWave needs a real chirp parameter")

    @property
    def beta(self):
        return self.zpar.real


@dataclass(frozen=True)
class ModDist:
    """Finite sum of Dirac/ChirpWave atoms.

    ``inv_level`` is either None or a Fraction lam meaning the distribution
    is invariant under multiplication by exp(i pi lam |x|^2); it is checked
    on construction.  ``flags`` records convention-dependent steps.
    """

    atoms: tuple = ()
    inv_level: object = None
    flags: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.inv_level is not None:
            lam = Fraction(self.inv_level)
            object.__setattr__(self, "inv_level", lam)
            for a in self.atoms:
                if not isinstance(a, Dirac):
                    raise DomainError("only Dirac combinations carry an invariance level")
                t = float(lam) * a.norm2 / 2.0
                if abs(t - round(t)) > INV_TOL * max(1.0, abs(t)):
                    raise DomainError(f"atom at {a.point} is not invariant under tau[{lam}]")

    def __add__(self, other):
        lvl = None
        if self.inv_level is not None and other.inv_level is not None:
            lvl = max(self.inv_level, other.inv_level) if _divides(self.inv_level, other.inv_level) or \
                _divides(other.inv_level, self.inv_level) else None
        return ModDist(self.atoms + other.atoms, lvl, self.flags + other.flags)

    def scale(self, s):
        return replace(self, atoms=tuple(a.scale(s) for a in self.atoms))

    def diracs(self):
        return [a for a in self.atoms if isinstance(a, Dirac)]


def _divides(small, big):
    """True when invariance under tau[small] implies invariance under tau[big]."""
    q = Fraction(big) / Fraction(small)
    return q.denominator == 1


def _check_prime(p):
    if p < 2 or any(p % k == 0 for k in range(2, int(math.isqrt(p)) + 1)):
        raise DomainError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# the basic distributions

def psi(M):
    """psi_M = -i delta(x1 - sqrt(2M)) delta(x2)."""
    if M < 1:
        raise DomainError("M must be a positive integer")
    return ModDist((Dirac(-1j, (math.sqrt(2 * M), 0.0)),), inv_level=1)


def phi(M):
    """phi_M(x) = exp(2 i pi x1 sqrt(2M))."""
    if M < 1:
        raise DomainError("M must be a positive integer")
    return ModDist((ChirpWave(1.0, Poly2.one(), 0.0, (math.sqrt(2 * M), 0.0), note="phi"),))


def coset_matrix(a, c):
    """g = (b -a; d -c) in SL(2, Z) completing the coprime pair (a, c)."""
    a, c = int(a), int(c)
    if (a, c) == (0, 0) or math.gcd(a, c) != 1:
        raise DomainError(f"({a}, {c}) is not a coprime pair")
    # find b, d with a d - b c = 1
    g, x, y = _egcd(a, c)          # a x + c y = g = +-1
    d, b = x * g, -y * g
    return b, d


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inverse(c, a):
    """cbar in [0, |a|) with c cbar = 1 mod a; 0 when |a| = 1."""
    a = abs(int(a))
    if a == 1:
        return 0
    return pow(int(c) % a, -1, a)


def i_atom(a, c, M):
    """I_{a,c} = Ana((b -a; d -c)) psi_M in closed form."""
    a, c = int(a), int(c)
    if (a, c) == (0, 0) or math.gcd(a, c) != 1:
        raise DomainError(f"({a}, {c}) is not a coprime pair")
    r = math.sqrt(2 * M)
    if a == 0:
        eps = -c
        return ModDist((Dirac(-1j * eps, (eps * r, 0.0)),), inv_level=1)
    cbar = mod_inverse(c, a)
    coeff = cmath.exp(2j * math.pi * M * cbar / a) / a
    return ModDist((ChirpWave(coeff, Poly2.one(), c / a, (r / a, 0.0), note=f"I[{a},{c}]"),))


def i_atom_real(a, c, M):
    """I_{a,c} without its unimodular constant; a != 0 and c any real number."""
    if a == 0:
        raise DomainError("the unnormalised atom needs a != 0")
    r = math.sqrt(2 * M)
    return ModDist((ChirpWave(1.0 / a, Poly2.one(), c / a, (r / a, 0.0), note=f"Io[{a},{c}]"),))


def i_atom_fourier(a, c, M):
    """(-i F) I_{a,c} = c^-1 exp(-2 i pi M abar / c) exp(2 i pi sqrt(2M) x1 / c) exp(-i pi a |x|^2 / c)."""
    a, c = int(a), int(c)
    if c == 0:
        raise DomainError("closed form needs c != 0")
    if math.gcd(a, c) != 1:
        raise DomainError(f"({a}, {c}) is not a coprime pair")
    abar = mod_inverse(a, c)
    coeff = cmath.exp(-2j * math.pi * M * abar / c) / c
    r = math.sqrt(2 * M)
    return ModDist((ChirpWave(coeff, Poly2.one(), -a / c, (r / c, 0.0), note=f"FI[{a},{c}]"),))


# ---------------------------------------------------------------------------
# Ana on distributions

def _gen_dist_atom(s, atom):
    if isinstance(s, LowerUnipotent):
        if isinstance(atom, Dirac):
            return [atom.scale(cmath.exp(1j * math.pi * s.c * atom.norm2))]
        return [atom.chirp(s.c)]
    if isinstance(s, Diagonal):
        a = s.a
        if isinstance(atom, Dirac):
            # a^-1 delta_{x0}(x / a) = a delta_{a x0}
            return [Dirac(atom.coeff * a, (atom.point[0] * a, atom.point[1] * a))]
        return [atom.dilate(a).scale(1.0 / a)]
    if isinstance(s, Inversion):
        if isinstance(atom, Dirac):
            x0 = atom.point
            return [ChirpWave(-1j * atom.coeff, Poly2.one(), 0.0, (-x0[0], -x0[1]))]
        if atom.beta != 0:
            c, p, z, w = atom.fourier_parts()
            return [ChirpWave(-1j * c, p, z.real, w, note=atom.note)]
        if atom.poly.degree == 0 and atom.wave[0].imag == 0 and atom.wave[1].imag == 0:
            return [Dirac(-1j * atom.coeff * atom.poly.c[0, 0], (atom.wave[0].real, atom.wave[1].real))]
        raise UnsupportedTransform("Fourier transform of a polynomial plane wave is a derivative of a Dirac")
    raise TypeError(f"unknown generator {s!r}")


def ana_apply_dist(g, D):
    """Ana(g) applied to a ModDist atom by atom, generator by generator."""
    word = decompose(g)
    atoms = list(D.atoms)
    for s in reversed(word):
        atoms = [b for a in atoms for b in _gen_dist_atom(s, a)]
    lvl = D.inv_level if all(isinstance(s, LowerUnipotent) for s in word) else None
    return ModDist(atoms, lvl, D.flags)


# ---------------------------------------------------------------------------
# pairings

def pair(D, h):
    """Bilinear pairing <D, h>."""
    total = 0j
    for a in D.atoms:
        if isinstance(a, Dirac):
            total += a.coeff * complex(h(a.point[0], a.point[1]))
            continue
        for t in h.atoms:
            total += a.coeff * t.coeff * gauss_moment(a.poly * t.poly, a.zpar + t.zpar,
                                                     (a.wave[0] + t.wave[0], a.wave[1] + t.wave[1]))
    return total


def chirpwave_pairings(coeffs, betas, w1, w2, h, backend=None):
    """Per-atom pairings of unit-polynomial chirp waves against h, vectorised."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    out = np.zeros(coeffs.shape, dtype=np.complex128)
    for t in h.atoms:
        out += moment_batch(t.poly, coeffs * t.coeff, np.asarray(betas) + t.zpar,
                            np.asarray(w1) + t.wave[0], np.asarray(w2) + t.wave[1], backend=backend)
    return out


def theta_dist(m, D, z):
    """theta_m of a distribution: <D, (x1 + i x2)^m exp(i pi z |x|^2)>."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"theta needs Im z > 0, got {z!r}")
    total = 0j
    for a in D.atoms:
        if isinstance(a, Dirac):
            x1, x2 = a.point
            total += a.coeff * complex(x1, x2) ** m * cmath.exp(1j * math.pi * z * a.norm2)
        else:
            total += a.coeff * gauss_moment(a.poly.mul_xi(m), a.zpar + z, a.wave)
    return total


# ---------------------------------------------------------------------------
# dilations, chirp averages and the planar Hecke operator

def dilate_dist(D, q, s, sigma):
    """q^(s + sigma 2 i pi A^natural) acting on a distribution.

    Fixed by <result, h> = <D, q^(s - sigma 2 i pi A^natural) h>; for a Dirac at
    x0 this gives coefficient factor q^(s - sigma) and new point q^-sigma x0.
    """
    if not q > 0:
        raise DomainError("dilation base must be positive")
    out = []
    for a in D.atoms:
        if isinstance(a, Dirac):
            lam = q ** (-sigma)
            out.append(Dirac(a.coeff * q ** (s - sigma), (a.point[0] * lam, a.point[1] * lam)))
        else:
            out.append(a.dilate(q ** (-sigma)).scale(q ** (s + sigma)))
    return ModDist(out, None, D.flags)


def r_power(p, e, D):
    """R^e with R = p^(-1/2 - i pi A^natural); maps Inv(p^j) to Inv(p^(j-e))."""
    res = dilate_dist(D, p ** (-e / 2.0), 1, 1)
    lvl = None if D.inv_level is None else D.inv_level / Fraction(p) ** e
    return ModDist(res.atoms, lvl, D.flags)


def chirp_average_scalar(p, r, ell, norm2):
    """(1/p^r) sum_{s mod p^r} exp(i pi s p^(ell - r) |x|^2) at a point with |x|^2 = norm2.

    The phase step t = p^(ell - r) |x|^2 / 2 is snapped: t integral gives 1, and
    p^r t integral (t not) gives 0, so arithmetic zeros come out exactly.
    """
    n = p ** r
    t = float(Fraction(p) ** (ell - r)) * norm2 / 2.0
    if _near_int(t):
        return 1.0 + 0j
    if _near_int(n * t):
        return 0j
    s = np.arange(n)
    return complex(np.mean(np.exp(2j * np.pi * s * t)))


def _near_int(t):
    return abs(t - round(t)) <= INV_TOL * max(1.0, abs(t))


def S(pr, norm2):
    """The multiplier S(p^r, x) = (1/p^r) sum_{0 <= s < p^r} exp(i pi s |x|^2 / p^r)."""
    s = np.arange(pr)
    return np.mean(np.exp(1j * np.pi * np.multiply.outer(np.asarray(norm2, dtype=float), s) / pr), axis=-1)


def sigma_apply(p, r, ell, D):
    """sigma_r^(ell) = (1/p^r) sum_{s mod p^r} tau[s p^(ell - r)]; ell = 0 gives sigma_r."""
    flags = D.flags
    if D.inv_level is None:
        flags = flags + (f"sigma[{r},{ell}] applied without an invariance level",)
    elif not _divides(D.inv_level, Fraction(p) ** ell):
        raise DomainError(f"sigma_{r}^({ell}) needs Inv(p^{ell}); distribution is in Inv({D.inv_level})")
    out = []
    for a in D.atoms:
        if isinstance(a, Dirac):
            sc = chirp_average_scalar(p, r, ell, a.norm2)
            if sc != 0:
                out.append(a.scale(sc))
        else:
            n = p ** r
            for s in range(n):
                beta = float(Fraction(s) * Fraction(p) ** (ell - r))
                out.append(a.chirp(beta).scale(1.0 / n))
    lvl = None
    if D.inv_level is not None:
        lvl = min(D.inv_level, Fraction(p) ** (ell - r))
    return ModDist(out, lvl, flags)


def tp_plane(p, m, D):
    """T_p^plane = p^(m/2) (R + R^-1 sigma_1) on Inv(1)."""
    _check_prime(p)
    if D.inv_level is None or not _divides(D.inv_level, 1):
        raise DomainError("T_p^plane is defined on Inv(1) only")
    t = r_power(p, 1, D) + r_power(p, -1, sigma_apply(p, 1, 0, D))
    t = t.scale(p ** (m / 2.0))
    return ModDist(_merge_diracs(t.atoms), Fraction(1), t.flags)


def t_tilde(p, D):
    """p^(-m/2) T_p^plane = R + R^-1 sigma_1."""
    t = r_power(p, 1, D) + r_power(p, -1, sigma_apply(p, 1, 0, D))
    return ModDist(_merge_diracs(t.atoms), t.inv_level, t.flags)


def t_tilde_alt(p, D):
    """R + sigma_1^(1) R^-1, the other printed operator form."""
    t = r_power(p, 1, D) + sigma_apply(p, 1, 1, r_power(p, -1, D))
    return ModDist(_merge_diracs(t.atoms), t.inv_level, t.flags)


def _merge_diracs(atoms):
    """Combine Dirac masses at coincident points; drop zero masses."""
    out = {}
    rest = []
    for a in atoms:
        if isinstance(a, Dirac):
            key = (round(a.point[0], 12), round(a.point[1], 12))
            if key in out:
                out[key] = Dirac(out[key].coeff + a.coeff, out[key].point)
            else:
                out[key] = a
        else:
            rest.append(a)
    return tuple(d for d in out.values() if d.coeff != 0) + tuple(rest)


# ---------------------------------------------------------------------------
# pairings with P_j(2 i pi A) insertions

def pairing_iac(a, c, M, q, j, h, route="main", dilation=(1, -1)):
    """<I_{a,c}, q^(s + sigma 2 i pi A^natural) X h> for X = P_j(2 i pi A) or an equivalent.

    route "main": X = P_j(2 i pi A)
    route "B2":   X = B_2^j,  B_2 = 2 pi sqrt(2M) (q / a) x2          (needs a != 0)
    route "D2":   X = D_2^j,  D_2 = 2 pi sqrt(2M) / (c q) (-1/(2 i pi)) d/dx2, evaluated on the
                  Fourier side against (-i F) I_{a,c}                  (needs c != 0)
    Unavailable routes return None.
    """
    s, sigma = dilation
    if route == "main":
        g = anat_power(q, s, sigma, rising_poly_apply(j, h))
        return pair(i_atom(a, c, M), g)
    if route == "B2":
        if a == 0:
            return None
        b2 = Poly2.x2() * (2 * math.pi * math.sqrt(2 * M) * q / a)
        g = h
        for _ in range(j):
            g = g.mul_poly(b2)
        return pair(i_atom(a, c, M), anat_power(q, s, sigma, g))
    if route == "D2":
        if c == 0:
            return None
        k = 2 * math.pi * math.sqrt(2 * M) / (c * q) * (-1.0 / (2j * math.pi))
        g = h
        for _ in range(j):
            g = g.map(lambda t: t.d_x2().scale(k))
        g = anat_power(q, s, sigma, g)
        # (-i F)^-1 u = i F^-1 u = i (F u)(-x)
        g_hat = g.fourier().reflect().scale(1j)
        return pair(i_atom_fourier(a, c, M), g_hat)
    raise ValueError(f"unknown route {route!r}")


def averaging_check(a, c, p, r, q, M, h):
    """Relative residual of <Io_{a,c}, sigma_r q^(1 - 2 i pi A^nat) h> against the chirp-shift average."""
    if a == 0:
        raise DomainError("averaging identity needs a != 0")
    n = p ** r
    qh = anat_power(q, 1, -1, h)
    if r == 0:
        return 0.0
    # left: sigma_r q^(1 - 2 i pi A^nat) h = q^(1 - 2 i pi A^nat) htilde, htilde(x) = S(p^r, q x) h(x)
    parts = [h.chirp(s * q * q / n).scale(1.0 / n) for s in range(n)]
    htilde = parts[0]
    for t in parts[1:]:
        htilde = htilde + t
    left = pair(i_atom_real(a, c, M), anat_power(q, 1, -1, htilde))
    right = sum(pair(i_atom_real(a, c + s * a / n, M), qh) for s in range(n)) / n
    den = max(abs(left), abs(right))
    return 0.0 if den == 0 else abs(left - right) / den


# ---------------------------------------------------------------------------
# coprime lattice and Poincare series

@lru_cache(maxsize=16)
def coprime_pairs(B):
    """All coprime (a, c) with max(|a|, |c|) <= B, sorted by (max-norm, a, c)."""
    r = np.arange(-B, B + 1)
    A, C = np.meshgrid(r, r, indexing="ij")
    A = A.ravel()
    C = C.ravel()
    keep = np.gcd(A, C) == 1
    A, C = A[keep], C[keep]
    order = np.lexsort((C, A, np.maximum(np.abs(A), np.abs(C))))
    return A[order].copy(), C[order].copy()


@lru_cache(maxsize=16)
def coset_table(B):
    """Arrays (a, b, c, d) of coset representatives (b -a; d -c) for all pairs up to B."""
    A, C = coprime_pairs(B)
    bd = [coset_matrix(int(a), int(c)) for a, c in zip(A, C)]
    Bs = np.array([x[0] for x in bd], dtype=np.int64)
    Ds = np.array([x[1] for x in bd], dtype=np.int64)
    return A, Bs, C, Ds


def theta_psi(m, M, z):
    """theta_m psi_M (z) = -i (2M)^(m/2) exp(2 i pi M z)."""
    return -1j * (2 * M) ** (m / 2.0) * np.exp(2j * np.pi * M * np.asarray(z))


def poincare_summand(m, M, a, c, z, shift=0):
    """D_{m+1}((b -a; d -c)) theta_m psi_M at z, with the Bezout completion shifted by ``shift``."""
    b, d = coset_matrix(a, c)
    b, d = b + shift * a, d + shift * c
    den = -a * z - c
    return den ** (-(m + 1)) * theta_psi(m, M, (b * z + d) / den)


def poincare_eval(m, M, z, B, backend=None):
    """Truncated Poincare series theta_m(T_M)(z), cosets with max-norm <= B; z may be an array."""
    A, Bs, C, Ds = coset_table(int(B))
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(zz.imag <= 0):
        raise DomainError("Poincare series needs Im z > 0")
    vals = _kernels.poincare_sums(A, Bs, C, Ds, zz, m + 1, M, backend=backend)
    vals = -1j * (2 * M) ** (m / 2.0) * vals
    return vals if np.ndim(z) else complex(vals[0])


def poincare_eval_dist(m, M, z, B):
    """The same truncated sum as sum over cosets of theta_dist(m, I_{a,c}, z)."""
    A, C = coprime_pairs(int(B))
    return sum(theta_dist(m, i_atom(int(a), int(c), M), z) for a, c in zip(A, C))


@dataclass
class FourierEstimate:
    coeffs: np.ndarray          # b_0 .. b_{K-1}
    truncation: np.ndarray      # |b_n(B) - b_n(B/2)|
    aliasing: float             # Nyquist-bin magnitude, a proxy for folded high modes
    params: dict = field(default_factory=dict)


def poincare_coefficients(m, M, y, B, K, backend=None):
    """All Fourier coefficients b_0..b_{K-1} of the truncated Poincare series at height y."""
    if K < 32 or K & (K - 1):
        raise DomainError("K must be a power of two >= 32")
    x = np.arange(K) / K
    z = x + 1j * y

    def est(cut):
        vals = poincare_eval(m, M, z, cut, backend=backend)
        c = np.fft.fft(vals) / K
        return c * np.exp(2 * np.pi * np.arange(K) * y)

    full = est(B)
    half = est(max(B // 2, 1))
    alias = abs(np.fft.fft(poincare_eval(m, M, z, B, backend=backend))[K // 2] / K)
    return FourierEstimate(full, np.abs(full - half), float(alias),
                           dict(m=m, M=M, y=y, B=B, K=K))


def poincare_fourier(m, M, y, n, B, K, backend=None):
    """Trapezoidal estimate of the n-th Fourier coefficient of the truncated Poincare series."""
    est = poincare_coefficients(m, M, y, B, K, backend=backend)
    return complex(est.coeffs[n])


__all__ = [
    "Dirac", "ChirpWave", "ModDist", "psi", "phi", "coset_matrix", "mod_inverse", "i_atom",
    "i_atom_real", "i_atom_fourier", "ana_apply_dist", "pair", "chirpwave_pairings", "theta_dist",
    "dilate_dist", "r_power", "chirp_average_scalar", "S", "sigma_apply", "tp_plane", "t_tilde",
    "t_tilde_alt", "pairing_iac", "averaging_check", "coprime_pairs", "coset_table", "theta_psi",
    "poincare_summand", "poincare_eval", "poincare_eval_dist", "poincare_coefficients",
    "poincare_fourier", "FourierEstimate", "GroupElement",
]
