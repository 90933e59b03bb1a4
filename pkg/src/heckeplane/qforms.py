"""
Exact q-expansions of level-one modular forms and the Ramanujan bound check.

All coefficient arithmetic is in Python integers / Fractions.  The weight 24
eigenforms have coefficients in Q(sqrt(144169)); they are carried by the
small ``QuadraticNumber`` class so that the bound b_p^2 <= 4 p^(k-1) is still
decided without floating point.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, TruncationError
from .report import VerificationReport

DEFAULT_TRUNC = 512
SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 24, 26)


@dataclass(frozen=True)
class QSeries:
    """b_0 + b_1 q + ... + b_N q^N, exact, with a weight tag."""

    weight: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_norm(c) for c in self.coeffs))

    @property
    def trunc(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        if n > self.trunc:
            raise TruncationError(f"coefficient {n} beyond truncation {self.trunc}")
        return self.coeffs[n]

    def __add__(self, other):
        if self.weight != other.weight:
            raise DomainError("adding forms of different weight")
        n = min(len(self.coeffs), len(other.coeffs))
        return QSeries(self.weight, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return QSeries(self.weight, [s * c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs[:n], other.coeffs[:n]
        out = []
        for k in range(n):
            out.append(sum(a[i] * b[k - i] for i in range(k + 1) if a[i] and b[k - i]))
        return QSeries(self.weight + other.weight, out)

    __rmul__ = scale

    def truncate(self, N):
        if N > self.trunc:
            raise TruncationError(f"cannot extend truncation {self.trunc} to {N}")
        return QSeries(self.weight, self.coeffs[:N + 1])

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def to_json(self):
        return json.dumps({"weight": self.weight, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["weight"], [Fraction(c) for c in d["coeffs"]])


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    if isinstance(c, QuadraticNumber):
        return c
    if isinstance(c, (int, Fraction)):
        return c
    raise TypeError(f"inexact coefficient {c!r}")


def sigma_k(n, k):
    s = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
    return s


def eisenstein(k, N=DEFAULT_TRUNC):
    """E_4 = 1 + 240 sum sigma_3(n) q^n,  E_6 = 1 - 504 sum sigma_5(n) q^n."""
    if N < 1:
        raise DomainError("truncation must be >= 1")
    if k == 4:
        c = 240
    elif k == 6:
        c = -504
    else:
        raise DomainError(f"only E4 and E6 are provided, not E{k}")
    return QSeries(k, [1] + [c * sigma_k(n, k - 1) for n in range(1, N + 1)])


def delta(N=DEFAULT_TRUNC):
    e4 = eisenstein(4, N)
    e6 = eisenstein(6, N)
    d = (e4 * e4 * e4 - e6 * e6).scale(Fraction(1, 1728))
    return d


def cusp_dimension(weight):
    if weight % 2 or weight < 0:
        return 0
    if weight == 2:
        return 0
    d = weight // 12 - (1 if weight % 12 == 2 else 0)
    return max(d, 0)


def cusp_basis(weight, N=DEFAULT_TRUNC):
    """Delta * E4^a E6^b with 4a + 6b = weight - 12; empty when there are no cusp forms."""
    if weight % 2 or weight < 12:
        raise DomainError(f"weight must be even and >= 12, got {weight}")
    rest = weight - 12
    d = delta(N)
    e4 = eisenstein(4, N)
    e6 = eisenstein(6, N)
    out = []
    for a in range(rest // 4 + 1):
        if (rest - 4 * a) % 6 == 0:
            b = (rest - 4 * a) // 6
            f = d
            for _ in range(a):
                f = f * e4
            for _ in range(b):
                f = f * e6
            out.append(f)
    return out


def is_prime(n):
    return n >= 2 and all(n % k for k in range(2, math.isqrt(n) + 1))


def primes_upto(n):
    return [p for p in range(2, n + 1) if is_prime(p)]


def hecke_q(p, weight, f):
    """b_n(T_p f) = b_{np} + p^(weight - 1) b_{n/p}; output truncation trunc(f) // p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    N = f.trunc // p
    if N < 1:
        raise TruncationError(f"truncation {f.trunc} too short for T_{p}")
    pk = p ** (weight - 1)
    out = []
    for n in range(N + 1):
        v = f.coeffs[n * p]
        if n % p == 0:
            v = v + pk * f.coeffs[n // p]
        out.append(v)
    return QSeries(f.weight, out)


# ---------------------------------------------------------------------------
# real quadratic numbers x + y sqrt(D)

@dataclass(frozen=True)
class QuadraticNumber:
    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def _lift(self, o):
        if isinstance(o, QuadraticNumber):
            if o.D != self.D:
                raise ValueError("different quadratic fields")
            return o
        return QuadraticNumber(Fraction(o), 0, self.D)

    def __add__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.x, -self.y, self.D)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D)

    __rmul__ = __mul__

    def conj(self):
        return QuadraticNumber(self.x, -self.y, self.D)

    def norm(self):
        return self.x * self.x - self.D * self.y * self.y

    def __truediv__(self, o):
        o = self._lift(o)
        n = o.norm()
        return self * o.conj() * QuadraticNumber(1 / n, 0, self.D)

    def sign(self):
        """Exact sign of x + y sqrt(D)."""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sx == sy or sy == 0:
            return sx if sx else sy
        if sx == 0:
            return sy
        # opposite signs: compare x^2 with D y^2
        c = self.x * self.x - self.D * self.y * self.y
        return sx if c > 0 else (sy if c < 0 else 0)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, QuadraticNumber)):
            o = self._lift(o)
            return self.x == o.x and self.y == o.y
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.D))

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(self.D)

    def __str__(self):
        return f"{self.x}+{self.y}*sqrt({self.D})"


def _squarefree_split(n):
    """n = s^2 * D with D squarefree; returns (s, D)."""
    s, D = 1, n
    k = 2
    while k * k <= D:
        while D % (k * k) == 0:
            D //= k * k
            s *= k
        k += 1
    return s, D


@dataclass
class Eigenform:
    weight: int
    series: QSeries
    t2_charpoly: tuple = None     # (1, b, c) for X^2 + b X + c in the two-dimensional case

    def eigenvalue(self, p):
        return self.series[p]


@lru_cache(maxsize=32)
def eigenforms(weight, N=DEFAULT_TRUNC):
    """Normalised Hecke eigenforms of the given weight (dimension 1 or 2)."""
    basis = cusp_basis(weight, N)
    if len(basis) == 0:
        return ()
    if len(basis) == 1:
        f = basis[0]
        return (Eigenform(weight, f.scale(Fraction(1) / Fraction(f[1]))),)
    if len(basis) > 2:
        raise NotImplementedError("cusp spaces of dimension > 2 are not supported")
    f, g = basis
    # basis change to coefficients (b1, b2): u = q + O(q^3), v = q^2 + O(q^3)
    u, v = _echelon(f, g)
    t = [hecke_q(2, weight, u), hecke_q(2, weight, v)]
    # T2 u = t[0][1] u + t[0][2] v, etc.; matrix columns are images
    m = [[Fraction(t[0][1]), Fraction(t[1][1])], [Fraction(t[0][2]), Fraction(t[1][2])]]
    tr = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    disc = tr * tr - 4 * det
    if disc <= 0 or disc.denominator != 1:
        raise NotImplementedError("expected an integral positive discriminant")
    s, D = _squarefree_split(int(disc))
    out = []
    for sgn in (1, -1):
        lam = QuadraticNumber(tr / 2, Fraction(sgn * s, 2), D)
        # eigenvector (x, y) with x = 1 normalisation on b1: (m00 - lam) x + m01 y = 0
        if m[0][1] != 0:
            y = (lam - m[0][0]) / QuadraticNumber(m[0][1], 0, D)
        else:
            y = QuadraticNumber(0, 0, D)
        coeffs = [QuadraticNumber(a, 0, D) + y * b for a, b in zip(u.coeffs, v.coeffs)]
        out.append(Eigenform(weight, QSeries(weight, coeffs), (1, -tr, det)))
    return tuple(out)


def _echelon(f, g):
    """Row-reduce two forms to u = q + 0 q^2 + ..., v = 0 q + q^2 + ..."""
    a = [[Fraction(f[1]), Fraction(f[2])], [Fraction(g[1]), Fraction(g[2])]]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if det == 0:
        raise DomainError("basis is degenerate in the first two coefficients")
    inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
    u = f.scale(inv[0][0]) + g.scale(inv[0][1])
    v = f.scale(inv[1][0]) + g.scale(inv[1][1])
    return u, v


def eigenform(weight, N=DEFAULT_TRUNC, index=0):
    forms = eigenforms(weight, N)
    if not forms:
        raise DomainError(f"no cusp forms of weight {weight}")
    return forms[index]


def _sq_leq(b, bound):
    """b^2 <= bound exactly, b rational or quadratic."""
    if isinstance(b, QuadraticNumber):
        return (QuadraticNumber(bound, 0, b.D) - b * b).sign() >= 0
    return b * b <= bound


def ramanujan_check(weight, pmax, N=None):
    """b_p^2 <= 4 p^(weight - 1) for all primes p <= pmax, for every normalised eigenform."""
    rep = VerificationReport("ramanujan", {"weight": weight, "pmax": pmax})
    ps = primes_upto(pmax)
    if not ps:
        return rep
    N = max(N or DEFAULT_TRUNC, pmax)
    for idx, f in enumerate(eigenforms(weight, N)):
        for p in ps:
            b = f.series[p]
            bound = 4 * p ** (weight - 1)
            val = str(b) if isinstance(b, QuadraticNumber) else b
            rep.add(f"w{weight}.f{idx}.p{p}", {"b_p": val, "bound_sq": bound}, "b_p^2 <= 4p^(k-1)",
                    _sq_leq(b, bound))
    return rep


def eigen_relation(f, p, weight):
    """True when T_p f = b_p f on every coefficient the truncation supports."""
    t = hecke_q(p, weight, f)
    bp = f[p]
    return all(t[n] == bp * f[n] for n in range(t.trunc + 1))


__all__ = [
    "QSeries", "eisenstein", "delta", "cusp_dimension", "cusp_basis", "hecke_q", "QuadraticNumber",
    "Eigenform", "eigenforms", "eigenform", "ramanujan_check", "eigen_relation", "primes_upto",
    "is_prime", "sigma_k", "SUPPORTED_WEIGHTS", "DEFAULT_TRUNC",
]
