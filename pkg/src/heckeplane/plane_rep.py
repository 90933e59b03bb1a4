"""
The planar representation Ana of SL(2, R) on Gaussian atoms.

Generators act by

    Ana((1 0; c 1)) h = h(x) exp(i pi c |x|^2)
    Ana((0 1; -1 0)) h = -i F h
    Ana((a 0; 0 1/a)) h = a^-1 h(x / a)

and theta_m h(z) = int (x1 + i x2)^m exp(i pi z |x|^2) h(x) dx intertwines
Ana with the half-plane action

    (D_{m+1}(g) f)(z) = (b z + d)^(-m-1) f((a z + c) / (b z + d)).

The Mobius convention above (numerator a z + c) is deliberate and differs
from the textbook (a z + b) / (c z + d); every identity downstream uses it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gaussian import GaussAtom, Poly2, TestFunction, gauss_moment

DET_TOL = 1e-12


@dataclass(frozen=True)
class GroupElement:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c - 1.0) > DET_TOL * max(1.0, abs(self.a * self.d)):
            raise DomainError(f"not in SL(2,R): det = {self.a * self.d - self.b * self.c!r}")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def lower(cls, c):
        return cls(1.0, 0.0, c, 1.0)

    @classmethod
    def inversion(cls):
        return cls(0.0, 1.0, -1.0, 0.0)

    @classmethod
    def diagonal(cls, a):
        return cls(a, 0.0, 0.0, 1.0 / a)

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def __matmul__(self, other):
        m = self.matrix() @ other.matrix()
        return GroupElement(*m.ravel())

    def inverse(self):
        return GroupElement(self.d, -self.b, -self.c, self.a)


# Generator tags; a word is a list of them, leftmost applied last.
@dataclass(frozen=True)
class LowerUnipotent:
    c: float

    def matrix(self):
        return GroupElement.lower(self.c)


@dataclass(frozen=True)
class Inversion:
    def matrix(self):
        return GroupElement.inversion()


@dataclass(frozen=True)
class Diagonal:
    a: float

    def matrix(self):
        return GroupElement.diagonal(self.a)


def word_matrix(word):
    g = GroupElement.identity()
    for s in word:
        g = g @ s.matrix()
    return g


def decompose(g):
    """Factor g into at most four generators (product equal to g, left to right).

    b = 0:  g = L(c/a) Diag(a)
    b != 0: g = L(d/b) Diag(b) J L(a/b)
    Trivial factors are dropped, so the identity gives the empty word.
    """
    if not isinstance(g, GroupElement):
        g = GroupElement(*g)
    if g.b == 0:
        word = [LowerUnipotent(g.c / g.a), Diagonal(g.a)]
    else:
        word = [LowerUnipotent(g.d / g.b), Diagonal(g.b), Inversion(), LowerUnipotent(g.a / g.b)]
    return [s for s in word if not _trivial(s)]


def _trivial(s):
    if isinstance(s, LowerUnipotent):
        return s.c == 0
    if isinstance(s, Diagonal):
        return s.a == 1
    return False


def fourier(h):
    """(F h)(x) = int h(y) exp(-2 i pi <x, y>) dy, atom by atom in closed form."""
    return h.fourier()


def apply_generator(s, h):
    if isinstance(s, LowerUnipotent):
        return h.chirp(s.c)
    if isinstance(s, Diagonal):
        return h.dilate(s.a).scale(1.0 / s.a)
    if isinstance(s, Inversion):
        return fourier(h).scale(-1j)
    raise TypeError(f"unknown generator {s!r}")


def ana_apply(g, h):
    for s in reversed(decompose(g)):
        h = apply_generator(s, h)
    return h


def theta(m, h, z):
    """(theta_m h)(z) = int (x1 + i x2)^m exp(i pi z |x|^2) h(x) dx."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"theta needs Im z > 0, got {z!r}")
    total = 0j
    for a in h.atoms:
        total += a.coeff * gauss_moment(a.poly.mul_xi(m), a.zpar + z, a.wave)
    return total


def infinitesimal(kind, h):
    """Apply 2 i pi A (kind 'A') or 2 i pi A^natural (kind 'Anat') to h."""
    if kind == "A":
        return h.map(lambda a: a.rotation())
    if kind == "Anat":
        return h.map(lambda a: a.euler())
    raise ValueError(f"kind must be 'A' or 'Anat', not {kind!r}")


def rising_poly_apply(j, h, sign=1):
    """P_j(sign * 2 i pi A) h with P_j(X) = prod_{0 <= l < j} (X + l)."""
    for ell in range(j):
        h = infinitesimal("A", h).scale(sign) + h.scale(ell)
    return h


def anat_power(q, s, sigma, h):
    """q^(s + sigma * 2 i pi A^natural) h = q^(s + sigma) h(q^sigma x)."""
    if not q > 0:
        raise DomainError(f"dilation base must be positive, got {q!r}")
    if q == 1 and s == 0:
        return h
    return h.dilate(float(q) ** (-sigma)).scale(float(q) ** (s + sigma))


def d_action(mplus1, g, F, z):
    """(b z + d)^(-mplus1) F((a z + c) / (b z + d))."""
    if not isinstance(g, GroupElement):
        g = GroupElement(*g)
    z = complex(z)
    den = g.b * z + g.d
    if den == 0:
        raise DomainError("pole of the automorphy factor")
    return den ** (-int(mplus1)) * F((g.a * z + g.c) / den)


def intertwine_residual(m, g, h, z):
    """|theta_m(Ana(g) h)(z) - D_{m+1}(g) theta_m h (z)| / (1 + |theta_m h(z)|)."""
    lhs = theta(m, ana_apply(g, h), z)
    rhs = d_action(m + 1, g, lambda w: theta(m, h, w), z)
    return abs(lhs - rhs) / (1.0 + abs(theta(m, h, z)))


def random_group_element(rng, scale=2.0):
    """Random element of SL(2, R) with entries of order ``scale``."""
    while True:
        a, b, c = rng.uniform(-scale, scale, size=3)
        if abs(a) > 0.1:
            return GroupElement(a, b, c, (1.0 + b * c) / a)


def random_atom(rng, max_degree=3, im_range=(0.3, 2.0), wave_scale=1.0):
    """A random Gaussian atom with a polynomial factor of bounded degree."""
    deg = int(rng.integers(0, max_degree + 1))
    c = np.zeros((deg + 1, deg + 1), dtype=np.complex128)
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            c[a, b] = rng.normal() + 1j * rng.normal()
    zpar = rng.uniform(-1.0, 1.0) + 1j * rng.uniform(*im_range)
    wave = tuple(rng.uniform(-wave_scale, wave_scale, size=2))
    return GaussAtom(complex(rng.normal(), rng.normal()), Poly2(c), zpar, wave)


def random_test_function(rng, n_atoms=2, **kw):
    return TestFunction([random_atom(rng, **kw) for _ in range(n_atoms)])


def radial_gaussian():
    return TestFunction.gaussian()


__all__ = [
    "GroupElement", "LowerUnipotent", "Inversion", "Diagonal", "decompose", "word_matrix",
    "ana_apply", "fourier", "theta", "infinitesimal", "rising_poly_apply", "anat_power",
    "d_action", "intertwine_residual", "random_group_element", "random_atom",
    "random_test_function",
]
