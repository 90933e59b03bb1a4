"""
Words in R^e, sigma_r, sigma_r^(l) and tau[beta], and their normal form.

A word is a tuple of symbols applied right to left, like a product of
operators: the last symbol acts first.  On Inv(1) every valid word reduces
to a single monomial R^e sigma_r.  The reduction tracks two integers: the
accumulated R-power E and the chirp-average level rho, and uses

    tau[beta] R^E = R^E tau[p^E beta]
    sigma_r R^e  ~ R^e sigma_{r-e}           (e > 0; sigma_{<=0} = I)
    sigma_r R^-1 sigma_1 ~ R^-1 sigma_{r+1}
    R^-l sigma_r ~ sigma_r^(l) R^-l
    sigma_r sigma_s = sigma_max(r, s)

all of which follow from averaging chirps over nested subgroups of Q/Z.

Domain levels: Inv(p^j) is tracked by the integer j.  R^e sends level j to
j - e; sigma_r^(l) needs level <= l (level l exactly is the strict reading,
a finer level is allowed by inclusion but flagged), and leaves level
min(j, l - r).
"""

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DomainError, RewriteError


@dataclass(frozen=True)
class Rpow:
    e: int

    def __post_init__(self):
        if self.e == 0:
            raise ValueError("R^0 is not a symbol; drop it")

    def __str__(self):
        return f"R^{self.e}" if self.e != 1 else "R"


@dataclass(frozen=True)
class SigmaSup:
    r: int
    ell: int = 0

    def __post_init__(self):
        if self.r < 0 or self.ell < 0:
            raise ValueError("sigma indices are nonnegative")

    def __str__(self):
        return f"s{self.r}^({self.ell})"


@dataclass(frozen=True)
class Sigma(SigmaSup):
    """sigma_r, the ell = 0 case."""

    def __init__(self, r):
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "ell", 0)
        self.__post_init__()

    def __str__(self):
        return f"s{self.r}"


@dataclass(frozen=True)
class Tau:
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))

    def __str__(self):
        return f"t[{self.beta}]"


@dataclass(frozen=True)
class HeckeWord:
    symbols: tuple
    domain_in: int = 0

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __mul__(self, other):
        return HeckeWord(self.symbols + other.symbols, other.domain_in)

    def __str__(self):
        return " ".join(str(s) for s in self.symbols) or "I"

    def levels(self):
        """Walk the word right to left; return (levels, flags).

        levels[i] is the Inv level reached after applying symbols[i:].
        """
        j = self.domain_in
        out = [None] * (len(self.symbols) + 1)
        out[len(self.symbols)] = j
        flags = []
        for pos in range(len(self.symbols) - 1, -1, -1):
            s = self.symbols[pos]
            if isinstance(s, Rpow):
                j = j - s.e
            elif isinstance(s, SigmaSup):
                if j > s.ell:
                    raise DomainError(f"symbol {pos} ({s}) needs Inv(p^{s.ell}) but acts on Inv(p^{j})")
                if j < s.ell:
                    flags.append(f"symbol {pos} ({s}) acts on Inv(p^{j}), valid by inclusion")
                j = min(j, s.ell - s.r)
            elif isinstance(s, Tau):
                pass
            else:
                raise TypeError(f"unknown symbol {s!r}")
            out[pos] = j
        return out, flags


@dataclass
class NormalForm:
    """sum over (e, r) of coeff * R^e sigma_r; ``k`` set when it came from T~^k."""

    terms: dict = field(default_factory=dict)
    k: int = None
    flags: list = field(default_factory=list)

    def add(self, e, r, coeff=1):
        key = (e, r)
        self.terms[key] = self.terms.get(key, 0) + coeff
        if self.terms[key] == 0:
            del self.terms[key]

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.terms == other.terms

    def alpha(self, ell, r):
        return self.terms.get((self.k - 2 * ell, r), 0)

    def coefficients(self):
        """ell -> [alpha^(0), ..., alpha^(ell)] (needs k)."""
        if self.k is None:
            raise ValueError("coefficients() needs the power k")
        return {ell: [self.alpha(ell, r) for r in range(ell + 1)] for ell in range(self.k + 1)}

    def mass(self):
        return sum(self.terms.values())

    def __str__(self):
        parts = []
        for (e, r), c in sorted(self.terms.items(), reverse=True):
            mono = "".join([f"R^{e}" if e else "", f"s{r}" if r else ""]) or "I"
            parts.append(mono if c == 1 else f"{c} {mono}")
        return " + ".join(parts) or "0"


def rewrite(word, p=None):
    """Reduce a word acting on Inv(1) to its monomial R^e sigma_r.

    ``p`` is only needed when the word contains tau symbols.
    """
    if word.domain_in != 0:
        raise DomainError("rewrite works on words acting on Inv(1)")
    _, flags = word.levels()
    E, rho = 0, 0
    for pos in range(len(word.symbols) - 1, -1, -1):
        s = word.symbols[pos]
        if isinstance(s, Rpow):
            E += s.e
        elif isinstance(s, SigmaSup):
            # sigma_r^(l) R^E sigma_rho = R^E * average over tau[s p^(E + l - r)] * sigma_rho
            rho = max(rho, s.r - s.ell - E, 0)
        elif isinstance(s, Tau):
            # tau[beta] R^E sigma_rho = R^E tau[p^E beta] sigma_rho; absorbed iff p^E beta in p^-rho Z
            if p is None:
                raise RewriteError(f"symbol {pos} ({s}) needs the prime p")
            if not tau_absorbed(p, s.beta, E, rho):
                raise RewriteError(f"symbol {pos} ({s}) leaves a chirp outside the normal form")
    nf = NormalForm(flags=flags)
    nf.add(E, rho)
    return nf


def tau_absorbed(p, beta, E, rho):
    """p^(E + rho) beta is an integer."""
    x = Fraction(beta) * Fraction(p) ** (E + rho)
    return x.denominator == 1


def t_tilde_words(k):
    """The 2^k words of (R + R^-1 sigma_1)^k, fully distributed."""
    a = (Rpow(1),)
    b = (Rpow(-1), Sigma(1))
    for choice in product((a, b), repeat=k):
        yield HeckeWord(sum(choice, ()))


def expand_brute(k):
    nf = NormalForm(k=k)
    for w in t_tilde_words(k):
        for (e, r), c in rewrite(w).terms.items():
            nf.add(e, r, c)
    return nf


def alpha_table(K):
    """alpha[k][ell][r] for 0 <= r <= ell <= k <= K, exact integers, by the recursion."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    table = [[[1]]]
    for k in range(K):
        prev = table[k]

        def get(ell, r):
            if 0 <= ell <= k and 0 <= r <= ell:
                return prev[ell][r]
            return 0

        row = []
        for ell in range(k + 2):
            entries = [get(ell, 0) + get(ell, 1)]
            for r in range(1, ell + 1):
                entries.append(get(ell, r + 1) + get(ell - 1, r - 1))
            row.append(entries)
        table.append(row)
    return table


def expand_t_power(k):
    """T~^k = (R + R^-1 sigma_1)^k = sum_ell R^(k - 2 ell) sum_r alpha_{k,ell}^(r) sigma_r."""
    row = alpha_table(k)[k]
    nf = NormalForm(k=k)
    for ell, entries in enumerate(row):
        for r, a in enumerate(entries):
            if a:
                nf.add(k - 2 * ell, r, a)
    return nf


def check_alpha_row(k, row):
    """Row sums equal C(k, ell) and the support condition 2 ell - k - r <= 0."""
    sums = all(sum(entries) == math.comb(k, ell) for ell, entries in enumerate(row))
    support = all(a == 0 or 2 * ell - k - r <= 0 for ell, entries in enumerate(row)
                  for r, a in enumerate(entries))
    return sums, support


def alpha_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "ell", "r", "alpha"])
    for k, row in enumerate(table):
        for ell, entries in enumerate(row):
            for r, a in enumerate(entries):
                w.writerow([k, ell, r, a])
    return buf.getvalue()


def apply_normal_form(nf, p, D):
    """Act with a normal form on a distribution, term by term (sigma first, then R)."""
    from .distributions import ModDist, r_power, sigma_apply
    out = ModDist((), None)
    first = True
    for (e, r), c in sorted(nf.terms.items()):
        t = sigma_apply(p, r, 0, D) if r else D
        if e:
            t = r_power(p, e, t)
        t = t.scale(c)
        out = t if first else out + t
        first = False
    return out


__all__ = [
    "Rpow", "Sigma", "SigmaSup", "Tau", "HeckeWord", "NormalForm", "rewrite", "tau_absorbed",
    "t_tilde_words", "expand_brute", "alpha_table", "expand_t_power", "check_alpha_row",
    "alpha_csv", "apply_normal_form",
]
