"""The model algebra A = Q[x] (x) Lambda*(gamma_1, ..., gamma_2g).

Degrees: deg x = 2, deg gamma_i = 1.  A monomial is x^a g_S for a subset S
of {1..2g} kept as a strictly increasing tuple; the wedge of two monomials
is zero when the gamma sets meet, otherwise the merged monomial with the
shuffle sign.

The distinguished degree-2 element

    theta = sum_i gamma_i wedge gamma_{g+i}

plays the role of the symplectic/theta class.  ``top_eval`` reads off the
coefficient of a class on the volume element theta^g / g!; note that
theta^g = g! * (-1)^(g(g-1)/2) * gamma_1 ... gamma_2g, so the extraction
carries the shuffle sign epsilon_g = (-1)^(g(g-1)/2).

Primitive subspaces: Lambda_0^k = ker(theta^(g-k+1) : Lambda^k ->
Lambda^(2g-k+2)), of dimension C(2g,k) - C(2g,k-2).  The returned basis is
canonical (kernel basis of the multiplication matrix in lexicographic
monomial order), so every module downstream agrees on it.

>>> top_eval(theta_class(2) * theta_class(2))
Fraction(2, 1)
>>> [len(primitive_basis(3, k)) for k in range(4)]
[1, 6, 14, 14]
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, GenusMismatch
from .qlinalg import QMatrix, kernel_basis

Rat = Fraction


class ExtMono(NamedTuple):
    """x^xexp times the wedge of the listed gamma generators."""
    xexp: int
    gammas: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return 2 * self.xexp + len(self.gammas)

    def sort_key(self):
        # canonical order: by degree, then x exponent descending, then
        # gamma tuple lexicographically
        return (self.degree, -self.xexp, self.gammas)


UNIT_MONO = ExtMono(0, ())


def _check_mono(g: int, m: ExtMono) -> None:
    if m.xexp < 0:
        raise DomainError(f"negative x exponent in {m}")
    if list(m.gammas) != sorted(set(m.gammas)):
        raise DomainError(f"gamma indices must be strictly increasing: {m.gammas}")
    if m.gammas and not (1 <= m.gammas[0] and m.gammas[-1] <= 2 * g):
        raise DomainError(f"gamma index out of range 1..{2*g}: {m.gammas}")


def _merge_sign(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """Merge two increasing gamma tuples; (sign, merged) or (0, None) on overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return 0, None
    merged = []
    i = j = 0
    inversions = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a)-i generators of a
            merged.append(b[j])
            inversions += len(a) - i
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return (-1 if inversions % 2 else 1), tuple(merged)


class ExtClass:
    """A finite Q-linear combination of ExtMono terms at a fixed genus."""

    __slots__ = ("g", "terms")

    def __init__(self, g: int, terms: Optional[Dict[ExtMono, Fraction]] = None):
        if g < 1:
            raise DomainError(f"genus must be >= 1, got {g}")
        self.g = g
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    _check_mono(g, m)
                    self.terms[m] = Fraction(c)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, g: int) -> "ExtClass":
        return cls(g)

    @classmethod
    def unit(cls, g: int) -> "ExtClass":
        return cls(g, {UNIT_MONO: Fraction(1)})

    @classmethod
    def monomial(cls, g: int, m: ExtMono, coeff=1) -> "ExtClass":
        return cls(g, {m: Fraction(coeff)})

    @classmethod
    def x_power(cls, g: int, a: int) -> "ExtClass":
        return cls(g, {ExtMono(a, ()): Fraction(1)})

    @classmethod
    def gamma(cls, g: int, i: int) -> "ExtClass":
        return cls(g, {ExtMono(0, (i,)): Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: ExtMono) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degrees(self) -> List[int]:
        return sorted({m.degree for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Degree if homogeneous (None for 0); DomainError otherwise."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise DomainError(f"class is not homogeneous, degrees {degs}")
        return degs[0]

    def homogeneous_components(self) -> Dict[int, "ExtClass"]:
        out: Dict[int, Dict[ExtMono, Fraction]] = {}
        for m, c in self.terms.items():
            out.setdefault(m.degree, {})[m] = c
        return {d: ExtClass(self.g, t) for d, t in sorted(out.items())}

    def sorted_terms(self) -> List[Tuple[ExtMono, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())

    # -- arithmetic --------------------------------------------------------

    def _require_same_genus(self, other: "ExtClass") -> None:
        if self.g != other.g:
            raise GenusMismatch(f"genus {self.g} vs {other.g}")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        self._require_same_genus(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return ExtClass(self.g, terms)

    def __neg__(self) -> "ExtClass":
        return ExtClass(self.g, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return self + (-other)

    def scale(self, k) -> "ExtClass":
        k = Fraction(k)
        return ExtClass(self.g, {m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ExtClass):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtClass) and self.g == other.g
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.g, frozenset(self.terms.items())))

    def __repr__(self):
        return f"ExtClass(g={self.g}, {render_class(self)})"


def wedge(u: ExtClass, v: ExtClass) -> ExtClass:
    """Wedge product, bilinear over Q; raises GenusMismatch across genera."""
    u._require_same_genus(v)
    acc: Dict[ExtMono, Fraction] = {}
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            sign, gam = _merge_sign(m1.gammas, m2.gammas)
            if sign == 0:
                continue
            m = ExtMono(m1.xexp + m2.xexp, gam)
            acc[m] = acc.get(m, Fraction(0)) + sign * c1 * c2
    return ExtClass(u.g, acc)


@lru_cache(maxsize=None)
def theta_class(g: int) -> ExtClass:
    """theta = sum_{i=1}^{g} gamma_i ^ gamma_{g+i}."""
    if g < 1:
        raise DomainError("genus must be >= 1")
    return ExtClass(g, {ExtMono(0, (i, g + i)): Fraction(1) for i in range(1, g + 1)})


@lru_cache(maxsize=None)
def theta_power(g: int, j: int) -> ExtClass:
    """theta^j, cached; theta^j = 0 once j > g."""
    if j < 0:
        raise DomainError("negative theta power")
    if j == 0:
        return ExtClass.unit(g)
    if j > g:
        return ExtClass.zero(g)
    return wedge(theta_power(g, j - 1), theta_class(g))


def epsilon(g: int) -> int:
    """Shuffle sign relating theta^g to the sorted volume monomial."""
    return -1 if (g * (g - 1) // 2) % 2 else 1


def top_eval(u: ExtClass) -> Fraction:
    """Coefficient of u on the volume element theta^g / g!.

    Only the component on x^0 gamma_1...gamma_2g contributes; everything
    else is ignored.

    >>> top_eval(theta_power(3, 3))
    Fraction(6, 1)
    >>> top_eval(ExtClass.unit(3))
    Fraction(0, 1)
    """
    g = u.g
    vol = ExtMono(0, tuple(range(1, 2 * g + 1)))
    return epsilon(g) * u.coefficient(vol)


def gamma_monomials(g: int, k: int) -> List[Tuple[int, ...]]:
    """All k-element gamma index tuples, lexicographic."""
    return list(combinations(range(1, 2 * g + 1), k))


def monomials_up_to(g: int, maxdeg: int) -> List[ExtMono]:
    """All monomials of degree <= maxdeg in the canonical order.

    Order: by degree, then x exponent descending, then gamma tuple lex.
    """
    out: List[ExtMono] = []
    for deg in range(maxdeg + 1):
        for xexp in range(deg // 2, -1, -1):
            gdeg = deg - 2 * xexp
            if gdeg > 2 * g:
                continue
            for gam in combinations(range(1, 2 * g + 1), gdeg):
                out.append(ExtMono(xexp, gam))
    return out


@lru_cache(maxsize=None)
def primitive_basis(g: int, k: int) -> Tuple[ExtClass, ...]:
    """Canonical basis of the primitive subspace Lambda_0^k.

    Lambda_0^k = ker(theta^(g-k+1): Lambda^k -> Lambda^(2g-k+2)); the basis
    is the canonical kernel basis of the multiplication matrix with both
    sides in lexicographic monomial order.
    """
    if not (0 <= k <= g):
        raise DomainError(f"primitive degree k = {k} outside 0..g = {g}")
    cols = gamma_monomials(g, k)
    target_deg = 2 * g - k + 2
    power = theta_power(g, g - k + 1)
    if target_deg > 2 * g:
        rows: List[Tuple[int, ...]] = []
    else:
        rows = gamma_monomials(g, target_deg)
    row_index = {gam: i for i, gam in enumerate(rows)}
    mat = [[Fraction(0)] * len(cols) for _ in rows]
    for j, gam in enumerate(cols):
        image = wedge(ExtClass.monomial(g, ExtMono(0, gam)), power)
        for m, c in image.terms.items():
            mat[row_index[m.gammas]][j] = c
    ker = kernel_basis(QMatrix(mat, ncols=len(cols)))
    basis = []
    for vec in ker:
        basis.append(ExtClass(g, {ExtMono(0, cols[j]): c
                                  for j, c in enumerate(vec) if c}))
    return tuple(basis)


def embed_bipoly(g: int, poly) -> ExtClass:
    """Send a polynomial in eta, theta into A: eta -> x, theta -> theta_class.

    ``poly`` may be a symprod.BiPoly or any mapping-like object whose items
    are ((eta_exp, theta_exp), coefficient).
    """
    items = poly.terms.items() if hasattr(poly, "terms") else dict(poly).items()
    out = ExtClass.zero(g)
    for (a, b), coeff in items:
        term = wedge(ExtClass.x_power(g, a), theta_power(g, b))
        out = out + term.scale(coeff)
    return out


# -- text format -----------------------------------------------------------
#
# Monomial grammar: '*'-separated factors out of
#     1       the unit
#     x, x^3  powers of x
#     g7      a gamma generator (indices strictly increasing as written)
#     t, t^2  powers of the theta alias (expands to theta_class(g))
# A class expression is a '+'/'-' separated sum of [rational '*'] monomials.
# Rationals print as p/q with '/q' omitted when q == 1.

_FACTOR_RE = re.compile(r"^(1|x(\^\d+)?|t(\^\d+)?|g\d+)$")
_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def render_frac(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_mono(m: ExtMono) -> str:
    parts = []
    if m.xexp == 1:
        parts.append("x")
    elif m.xexp > 1:
        parts.append(f"x^{m.xexp}")
    parts.extend(f"g{i}" for i in m.gammas)
    return "*".join(parts) if parts else "1"


def render_class(u: ExtClass) -> str:
    """Canonical text of a class; terms in canonical monomial order."""
    if u.is_zero():
        return "0"
    chunks: List[str] = []
    for m, c in u.sorted_terms():
        mono = render_mono(m)
        mag = abs(c)
        if mono == "1":
            body = render_frac(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{render_frac(mag)}*{mono}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


def parse_monomial(g: int, text: str) -> ExtClass:
    """One monomial in the grammar above, as a class (t expands to a sum)."""
    text = text.strip()
    if not text:
        raise DomainError("empty monomial")
    xexp = 0
    tpow = 0
    gammas: List[int] = []
    saw_unit = False
    for factor in text.split("*"):
        factor = factor.strip()
        if not _FACTOR_RE.match(factor):
            raise DomainError(f"bad factor {factor!r} in monomial {text!r}")
        if factor == "1":
            saw_unit = True
        elif factor.startswith("x"):
            xexp += int(factor[2:]) if "^" in factor else 1
        elif factor.startswith("t"):
            tpow += int(factor[2:]) if "^" in factor else 1
        else:
            idx = int(factor[1:])
            if not (1 <= idx <= 2 * g):
                raise DomainError(f"gamma index {idx} out of range 1..{2*g}")
            if gammas and idx <= gammas[-1]:
                raise DomainError(
                    f"gamma indices must be strictly increasing, got g{gammas[-1]} before g{idx}")
            gammas.append(idx)
    if saw_unit and (xexp or tpow or gammas) and len(text.split("*")) > 1:
        raise DomainError(f"'1' cannot be combined with other factors: {text!r}")
    out = ExtClass.monomial(g, ExtMono(xexp, tuple(gammas)))
    if tpow:
        out = wedge(out, theta_power(g, tpow))
    return out


def parse_class(g: int, text: str) -> ExtClass:
    """A sum of rational multiples of monomials, e.g. '3/2*x^2*g1*g5 - t + 1'."""
    text = text.strip()
    if not text:
        raise DomainError("empty expression")
    # split on +/- at top level (no parentheses in the grammar)
    tokens = re.findall(r"[+-]|[^+-]+", text.replace(" ", ""))
    out = ExtClass.zero(g)
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in "+-":
            if expect_term and tok == "-":
                sign = -sign
                continue
            if expect_term:
                continue
            sign = -1 if tok == "-" else 1
            expect_term = True
            continue
        if not expect_term:
            raise DomainError(f"two terms without operator near {tok!r}")
        coeff = Fraction(sign)
        body = tok
        parts = body.split("*", 1)
        if _RAT_RE.match(parts[0]) and parts[0] != "1":
            coeff *= Fraction(parts[0])
            body = parts[1] if len(parts) > 1 else "1"
        elif parts[0] == "1" and len(parts) == 1:
            body = "1"
        out = out + parse_monomial(g, body).scale(coeff)
        sign = 1
        expect_term = False
    if expect_term:
        raise DomainError(f"dangling operator in {text!r}")
    return out
