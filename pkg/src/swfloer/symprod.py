"""Cohomology of symmetric products of a surface.

The d-th symmetric product of a genus-g surface has cohomology ring
generated (over the odd part) by two even classes: eta, the class of the
divisor of configurations through a fixed point, and theta, pulled back
from the Jacobian.  This module computes:

  - Betti numbers, from the Macdonald generating function
    (1+zt)^(2g) / ((1-z)(1-zt^2)), coefficient of z^d;
  - the relation polynomials R_k in Q[eta, theta] whose multiples cut the
    ring out of the free module over the primitive exterior algebra;
  - sector normal forms: the canonical representative of a polynomial
    modulo (R_k, theta R_{k+1}, theta^(g-k+1)) on the monomial basis
    {eta^a theta^b : 2a + b <= d - k};
  - an independent full-ring oracle built from the sphere-invariant
    pairing at its top level, for cross-checking the presentation.

Polynomials in eta and theta are BiPoly values; the text form writes
eta as `e` and theta as `t`, for example "e - 1/3*t".
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Tuple

from .errors import DomainError, VerificationFailure
from .extalg import render_frac
from .qlinalg import QMatrix, rref
from .swpair import PairingQuotient, SphereParams

ZERO = Fraction(0)
ONE = Fraction(1)


class BiPoly:
    """Polynomial in eta and theta with rational coefficients.

    Terms map (a, b) = (eta exponent, theta exponent) to a nonzero
    coefficient.  The cohomological degree of eta^a theta^b is 2a + 2b;
    its weight is a + b.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Tuple[int, int], Fraction]):
        clean: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), c in terms.items():
            if a < 0 or b < 0:
                raise DomainError(f"negative exponent in ({a},{b})")
            c = Fraction(c)
            if c:
                clean[(a, b)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly({})

    @staticmethod
    def unit() -> "BiPoly":
        return BiPoly({(0, 0): ONE})

    @staticmethod
    def eta(a: int = 1) -> "BiPoly":
        return BiPoly({(a, 0): ONE})

    @staticmethod
    def theta(b: int = 1) -> "BiPoly":
        return BiPoly({(0, b): ONE})

    @staticmethod
    def monomial(a: int, b: int, coeff: Fraction = ONE) -> "BiPoly":
        return BiPoly({(a, b): Fraction(coeff)})

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "BiPoly":
        c = Fraction(c)
        return BiPoly({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out: Dict[Tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, ZERO) + c1 * c2
        return BiPoly(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"BiPoly({render_bipoly(self)})"

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), ZERO)

    def weights(self) -> List[int]:
        return sorted({a + b for (a, b) in self.terms})

    def weight_component(self, m: int) -> "BiPoly":
        return BiPoly({k: c for k, c in self.terms.items() if k[0] + k[1] == m})

    def sorted_terms(self) -> List[Tuple[Tuple[int, int], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (t[0][0] + t[0][1], -t[0][0]))


# -- text form -------------------------------------------------------------

_BP_FACTOR_RE = re.compile(r"(e|t)(?:\^(\d+))?$|1$")
_BP_RAT_RE = re.compile(r"-?\d+(?:/\d+)?$")


def render_bipoly(p: BiPoly) -> str:
    """Canonical text: terms by weight then eta exponent descending."""
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for (a, b), c in p.sorted_terms():
        factors = []
        if a:
            factors.append("e" if a == 1 else f"e^{a}")
        if b:
            factors.append("t" if b == 1 else f"t^{b}")
        body = "*".join(factors) if factors else "1"
        mag = abs(c)
        if mag != 1 or not factors:
            body = f"{render_frac(mag)}*{body}" if factors else render_frac(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_bipoly(text: str) -> BiPoly:
    """Parse the render_bipoly grammar: sums of rational multiples of
    products of `e^a` and `t^b`."""
    s = text.strip()
    if not s:
        raise DomainError("empty polynomial text")
    if s == "0":
        return BiPoly.zero()
    s = s.replace("-", "+-")
    if s.startswith("+-"):
        s = s[1:]
    total = BiPoly.zero()
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise DomainError(f"dangling sign in {text!r}")
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:].strip()
        coeff = ONE
        a = b = 0
        saw_factor = False
        for factor in chunk.split("*"):
            factor = factor.strip()
            if _BP_RAT_RE.match(factor):
                coeff *= Fraction(factor)
                saw_factor = True
                continue
            m = _BP_FACTOR_RE.match(factor)
            if not m:
                raise DomainError(f"bad factor {factor!r} in {text!r}")
            saw_factor = True
            if factor == "1":
                continue
            exp = int(m.group(2)) if m.group(2) else 1
            if m.group(1) == "e":
                a += exp
            else:
                b += exp
        if not saw_factor:
            raise DomainError(f"empty term in {text!r}")
        if neg:
            coeff = -coeff
        total = total + BiPoly.monomial(a, b, coeff)
    return total


# -- Betti numbers ---------------------------------------------------------

def betti(g: int, d: int) -> List[int]:
    """Betti numbers b_0..b_2d of the d-th symmetric product, as the
    coefficient of z^d in (1+zt)^(2g) / ((1-z)(1-zt^2))."""
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    if d < 0 or d > g - 1:
        raise DomainError(f"d must satisfy 0 <= d <= g-1, got d={d}, g={g}")
    out = []
    for i in range(2 * d + 1):
        total = 0
        for v in range(max(0, i - d), i // 2 + 1):
            total += comb(2 * g, i - 2 * v)
        out.append(total)
    return out


def betti_total(g: int, d: int) -> int:
    return sum(betti(g, d))


# -- relation polynomials --------------------------------------------------

def alpha_of(d: int, k: int) -> int:
    """Half the codimension step: [(d-k)/2] + 1."""
    return (d - k) // 2 + 1


def relation_R(g: int, d: int, k: int) -> BiPoly:
    """The k-th relation polynomial.

    R_k = sum_{i=0}^{alpha} C(d-k-alpha+1, i)/C(g-k, i) (-1)^i/i! *
    eta^(alpha-i) theta^i with alpha = [(d-k)/2] + 1, and R_{d+1} = 1.
    """
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    if d < 0 or d > g - 1:
        raise DomainError(f"d must satisfy 0 <= d <= g-1, got d={d}")
    if k < 0 or k > d + 1:
        raise DomainError(f"k must satisfy 0 <= k <= d+1, got k={k}")
    if k == d + 1:
        return BiPoly.unit()
    a = alpha_of(d, k)
    terms: Dict[Tuple[int, int], Fraction] = {}
    fact = 1
    for i in range(a + 1):
        if i:
            fact *= i
        num = comb(d - k - a + 1, i)
        if num == 0:
            continue
        c = Fraction(num, comb(g - k, i) * fact) * (-1) ** i
        terms[(a - i, i)] = c
    return BiPoly(terms)


# -- sector reduction ------------------------------------------------------

def _sector_basis(d: int, k: int) -> List[Tuple[int, int]]:
    out = []
    for m in range(d - k + 1):
        for a in range(min(m, d - k - m), -1, -1):
            out.append((a, m - a))
    return out


class _SectorReducer:
    """Row-reduction data for one primitive sector.

    The ideal is generated by R_k, theta R_{k+1}, and theta^(g-k+1); its
    weight-m piece is spanned by monomial multiples of the generators.
    Columns are ordered with non-basis monomials first, so reduction
    succeeds exactly when every pivot lands outside the claimed basis.
    """

    def __init__(self, g: int, d: int, k: int):
        self.g = g
        self.d = d
        self.k = k
        self.basis = set(_sector_basis(d, k))
        self.generators = [
            relation_R(g, d, k),
            BiPoly.theta(1) * relation_R(g, d, k + 1),
            BiPoly.theta(g - k + 1),
        ]
        self._by_weight: Dict[int, Tuple[List[Tuple[int, int]], QMatrix, Tuple[int, ...]]] = {}

    def _weight_data(self, m: int):
        if m in self._by_weight:
            return self._by_weight[m]
        cols = sorted(((a, m - a) for a in range(m + 1)),
                      key=lambda ab: (ab in self.basis, -ab[0]))
        index = {ab: j for j, ab in enumerate(cols)}
        rows = []
        for gen in self.generators:
            wts = gen.weights()
            if not wts:
                continue
            w = wts[0]
            if w > m:
                continue
            for i in range(m - w + 1):
                shifted = gen * BiPoly.monomial(i, m - w - i)
                row = [ZERO] * len(cols)
                for ab, c in shifted.terms.items():
                    row[index[ab]] = c
                rows.append(row)
        reduced, pivots, rank = rref(QMatrix(rows, ncols=len(cols)))
        n_basis = sum(1 for ab in cols if ab in self.basis)
        if rank != len(cols) - n_basis or any(cols[p] in self.basis for p in pivots):
            raise VerificationFailure(
                f"sector (g,d,k)=({self.g},{self.d},{self.k}) weight {m}: "
                f"relations do not complement the claimed basis")
        data = (cols, reduced, pivots)
        self._by_weight[m] = data
        return data

    def reduce(self, p: BiPoly) -> BiPoly:
        out = BiPoly.zero()
        for m in p.weights():
            cols, reduced, pivots = self._weight_data(m)
            comp = p.weight_component(m)
            vec = [comp.coefficient(a, b) for (a, b) in cols]
            for i, piv in enumerate(pivots):
                c = vec[piv]
                if c:
                    for j in range(len(cols)):
                        rij = reduced[(i, j)]
                        if rij:
                            vec[j] -= c * rij
            out = out + BiPoly({cols[j]: vec[j] for j in range(len(cols)) if vec[j]})
        return out


class SymProdPresentation:
    """The presentation of H*(s^d Sigma) over the primitive sectors.

    Sector k carries the quotient of Q[eta, theta] by
    (R_k, theta R_{k+1}, theta^(g-k+1)) on the basis
    {eta^a theta^b : 2a + b <= d - k}; the full ring is the sum over k
    of these sectors tensored with the degree-k primitive subspace.
    Construction verifies the weighted sector sizes add up to the total
    Betti number.
    """

    def __init__(self, g: int, d: int):
        if g < 2:
            raise DomainError(f"genus must be >= 2, got {g}")
        if d < 0 or d > g - 1:
            raise DomainError(f"d must satisfy 0 <= d <= g-1, got d={d}")
        self.g = g
        self.d = d
        self._reducers: Dict[int, _SectorReducer] = {}
        total = 0
        for k in range(d + 1):
            prim = comb(2 * g, k) - (comb(2 * g, k - 2) if k >= 2 else 0)
            total += prim * len(_sector_basis(d, k))
        if total != betti_total(g, d):
            raise VerificationFailure(
                f"sector dimension sum {total} != Betti total "
                f"{betti_total(g, d)} at (g,d)=({g},{d})")

    def sector_basis(self, k: int) -> List[Tuple[int, int]]:
        self._check_k(k)
        return _sector_basis(self.d, k)

    def generators(self, k: int) -> Tuple[BiPoly, BiPoly]:
        self._check_k(k)
        return (relation_R(self.g, self.d, k),
                BiPoly.theta(1) * relation_R(self.g, self.d, k + 1))

    def normal_form(self, k: int, p: BiPoly) -> BiPoly:
        self._check_k(k)
        if k not in self._reducers:
            self._reducers[k] = _SectorReducer(self.g, self.d, k)
        return self._reducers[k].reduce(p)

    def _check_k(self, k: int) -> None:
        if k < 0 or k > self.d:
            raise DomainError(f"k must satisfy 0 <= k <= d, got k={k}")


@lru_cache(maxsize=None)
def presentation(g: int, d: int) -> SymProdPresentation:
    return SymProdPresentation(g, d)


def sector_normal_form(g: int, d: int, k: int, p: BiPoly) -> BiPoly:
    """Canonical representative of p modulo the sector-k ideal."""
    return presentation(g, d).normal_form(k, p)


# -- independent ring oracle -----------------------------------------------

@lru_cache(maxsize=None)
def ring_oracle(g: int, d: int) -> PairingQuotient:
    """The full ring from the fundamental-class pairing.

    Realizes H*(s^d Sigma) as the degree <= 2d monomial algebra modulo
    the radical of the level -1 sphere-invariant pairing at r = g-1-d.
    Unavailable at d = g-1, where that pairing would need r = 0; only
    the presentation route exists there.
    """
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    if d < 0 or d > g - 2:
        raise DomainError(
            f"oracle needs 0 <= d <= g-2 (got d={d}, g={g}); "
            f"at d = g-1 only the presentation route exists")
    return PairingQuotient(SphereParams(g, g - 1 - d), n_filter=-1)
