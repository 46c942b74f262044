"""Seiberg-Witten invariants of the ruled surface over Sigma and the pairing
they induce on the model algebra.

For a genus-g surface and a twisting level r with 1 <= |r| <= g-1, the
spin-c structures of interest on Sigma x S^2 are indexed by an integer n,
and the invariant of a class z in A(Sigma) at level n is nonzero only when

    n <= -1,   deg z = 2*D,   D = r*n + g - 1 >= 0.

In that case, writing z = sum_a x^a w_a with w_a purely in the gammas,

    sw_sphere(n, z) = sum_a top_eval(w_a ^ exp(-n theta)),

with the exponential truncated at theta^g.  Two classical value families
fall out of this rule and are pinned as tests: sw(x^a theta^b) =
g!/(g-b)! (-n)^(g-b), and the version with a product of primitive pairs
inserted, (g-k)!/(g-k-b)! (-n)^(g-k-b).

``pair`` sums sw_sphere over all levels; on a wedge of two homogeneous
classes at most one level can contribute, so the sum is finite and exact.
The radical of this pairing on monomials of degree <= 2d (d = g-1-|r|) is
computed degreewise by ``annihilator``; the quotient by the radical is the
Floer ring, built by the PairingQuotient engine at the bottom of this file
and consumed by the floerring and symprod modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, VerificationFailure
from .extalg import (
    ExtClass,
    ExtMono,
    _merge_sign,
    monomials_up_to,
    primitive_basis,
    theta_power,
    top_eval,
    wedge,
)
from .qlinalg import QMatrix, invert, kernel_basis, rref

Rat = Fraction
ZERO = Fraction(0)


@dataclass(frozen=True)
class SphereParams:
    """Genus and twisting level; fixes d = g-1-|r| and the ladder step 2|r|."""

    g: int
    r: int

    def __post_init__(self):
        if self.g < 2:
            raise DomainError(f"genus must be >= 2, got {self.g}")
        if not (1 <= abs(self.r) <= self.g - 1):
            raise DomainError(
                f"twisting level must satisfy 1 <= |r| <= g-1, got r={self.r} at g={self.g}")

    @property
    def d(self) -> int:
        return self.g - 1 - abs(self.r)

    @property
    def N(self) -> int:
        return 2 * abs(self.r)


def contributing_level(params: SphereParams, total_degree: int) -> Optional[int]:
    """The unique level n <= -1 with total_degree = 2(r n + g - 1), if any."""
    if total_degree < 0 or total_degree % 2:
        return None
    num = total_degree // 2 - (params.g - 1)
    if num % params.r:
        return None
    n = num // params.r
    return n if n <= -1 else None


@lru_cache(maxsize=None)
def _gamma_eval(g: int, gammas: Tuple[int, ...], n: int) -> Fraction:
    """top_eval(g_S ^ exp(-n theta)) for a single gamma monomial."""
    s = len(gammas)
    if s % 2:
        return ZERO
    j = g - s // 2
    if j < 0:
        return ZERO
    base = top_eval(wedge(ExtClass.monomial(g, ExtMono(0, gammas)), theta_power(g, j)))
    if not base:
        return ZERO
    return base * Fraction((-n) ** j, factorial(j))


def sw_sphere(params: SphereParams, n: int, z: ExtClass) -> Fraction:
    """Invariant of z at level n; zero unless the degree window matches."""
    if z.g != params.g:
        raise DomainError(f"class has genus {z.g}, params have {params.g}")
    if n >= 0:
        return ZERO
    D = params.r * n + params.g - 1
    if D < 0:
        return ZERO
    total = ZERO
    for m, c in z.terms.items():
        if m.degree == 2 * D:
            total += c * _gamma_eval(params.g, m.gammas, n)
    return total


def mono_pair(params: SphereParams, m1: ExtMono, m2: ExtMono,
              n_filter: Optional[int] = None) -> Fraction:
    """pair on two monomials; optionally restricted to a single level."""
    n = contributing_level(params, m1.degree + m2.degree)
    if n is None or (n_filter is not None and n != n_filter):
        return ZERO
    sign, gam = _merge_sign(m1.gammas, m2.gammas)
    if sign == 0:
        return ZERO
    return sign * _gamma_eval(params.g, gam, n)


def class_pair(params: SphereParams, z1: ExtClass, z2: ExtClass,
               n_filter: Optional[int] = None) -> Fraction:
    total = ZERO
    for m1, c1 in z1.terms.items():
        for m2, c2 in z2.terms.items():
            v = mono_pair(params, m1, m2, n_filter)
            if v:
                total += c1 * c2 * v
    return total


def pair(params: SphereParams, z1: ExtClass, z2: ExtClass) -> Fraction:
    """Sum over all levels of sw_sphere(n, z1 ^ z2).

    Only levels with 0 <= r n + g - 1 <= deg(z1 z2)/2 can contribute, and
    for homogeneous inputs at most one does.
    """
    if z1.g != params.g or z2.g != params.g:
        raise DomainError("genus mismatch against params")
    return class_pair(params, z1, z2)


def gram(params: SphereParams, basis: Sequence[ExtClass]) -> QMatrix:
    """Matrix of pair on the given classes."""
    return QMatrix([[pair(params, u, v) for v in basis] for u in basis],
                   ncols=len(basis))


@lru_cache(maxsize=None)
def monos_of_degree(g: int, q: int) -> Tuple[ExtMono, ...]:
    return tuple(m for m in monomials_up_to(g, q) if m.degree == q)


@lru_cache(maxsize=None)
def _graded_radical(params: SphereParams, degree: int,
                    n_filter: Optional[int] = None):
    """Radical piece in one degree: homogeneous z with pair(z, m) = 0 for
    every monomial m of degree <= 2d.

    Returns (kernel vectors over the degree's monomials, pivot column
    indices).  The pivot monomials span a canonical complement of the
    radical piece inside the degree, which the mixed-element solver and
    the quotient engine both rely on.
    """
    cols = monos_of_degree(params.g, degree)
    cap = 2 * params.d
    rows: List[List[Fraction]] = []
    for qq in range(cap + 1):
        n = contributing_level(params, degree + qq)
        if n is None or (n_filter is not None and n != n_filter):
            continue
        for m2 in monos_of_degree(params.g, qq):
            rows.append([mono_pair(params, m1, m2, n_filter) for m1 in cols])
    reduced, pivots, _ = rref(QMatrix(rows, ncols=len(cols)))
    pivot_set = set(pivots)
    kernel: List[Tuple[Fraction, ...]] = []
    for f in range(len(cols)):
        if f in pivot_set:
            continue
        v = [ZERO] * len(cols)
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[(i, f)]
        kernel.append(tuple(v))
    return kernel, pivots


def _mixed_radical(params: SphereParams, n_filter: Optional[int] = None,
                   col_cap: Optional[int] = None) -> List[ExtClass]:
    """Radical elements that are not sums of homogeneous radical elements.

    The radical of the pairing need not be graded: levels n and n-1 tie
    degrees q and q - 2|r| together, and (for example) at g=5, r=1 there
    is an element of the radical with components in degrees 4 and 2 whose
    degree-4 part alone is not in the radical.  Modulo the graded pieces,
    any such element can be taken supported on the canonical pivot
    monomials of each degree, and testing against pivot monomials suffices
    since pairing against a graded radical piece is identically zero.
    One kernel computation per residue class of degree mod 2|r| finds
    a canonical basis of these corrections.
    """
    cap = 2 * params.d
    col_cap = cap if col_cap is None else col_cap
    pivot_monos: Dict[int, List[ExtMono]] = {}
    for q in range(max(cap, col_cap) + 1):
        cols = monos_of_degree(params.g, q)
        _, pivots = _graded_radical(params, q, n_filter)
        pivot_monos[q] = [cols[p] for p in pivots]
    out: List[ExtClass] = []
    N = params.N
    for rho in range(N):
        col_degs = [q for q in range(col_cap + 1) if q % N == rho and pivot_monos[q]]
        if len(col_degs) < 2:
            continue
        cols = [m for q in col_degs for m in pivot_monos[q]]
        row_degs = [qq for qq in range(cap + 1)
                    if any(contributing_level(params, q + qq) is not None
                           and (n_filter is None
                                or contributing_level(params, q + qq) == n_filter)
                           for q in col_degs)]
        rows = [[mono_pair(params, m1, m2, n_filter) for m1 in cols]
                for qq in row_degs for m2 in pivot_monos[qq]]
        for vec in kernel_basis(QMatrix(rows, ncols=len(cols))):
            out.append(ExtClass(params.g,
                                {cols[j]: c for j, c in enumerate(vec) if c}))
    return out


def annihilator(params: SphereParams, maxdeg: Optional[int] = None) -> List[ExtClass]:
    """Canonical basis of the radical of pair within degrees <= maxdeg.

    The radical is {z : pair(z, m) = 0 for every monomial m of degree
    <= 2d} (default maxdeg 2d).  The basis comes in two runs: first the
    homogeneous pieces, degree by degree, each the canonical kernel basis
    of the pairing conditions in that degree; then the mixed-degree
    corrections, which exist because consecutive levels couple degrees
    q and q - 2|r| (see _mixed_radical).  Its codimension in the degree
    <= 2d monomial space is the total Betti number of s^d Sigma.
    """
    cap = 2 * params.d if maxdeg is None else maxdeg
    if cap < 0:
        raise DomainError("maxdeg must be >= 0")
    out: List[ExtClass] = []
    for q in range(cap + 1):
        cols = monos_of_degree(params.g, q)
        if not cols:
            continue
        kernel, _ = _graded_radical(params, q)
        for vec in kernel:
            out.append(ExtClass(params.g, {cols[j]: c for j, c in enumerate(vec) if c}))
    out.extend(_mixed_radical(params, None, cap))
    return out


class BasisLabel(NamedTuple):
    """Canonical basis element w_k[w] ^ x^a theta^b with 2a + b <= d - k."""
    k: int
    w: int
    a: int
    b: int

    @property
    def degree(self) -> int:
        return self.k + 2 * self.a + 2 * self.b


def canonical_labels(g: int, d: int) -> List[BasisLabel]:
    """Primitive-prefactor basis labels, degree-sorted deterministically."""
    labels = []
    for k in range(d + 1):
        width = len(primitive_basis(g, k))
        for w in range(width):
            for a in range((d - k) // 2 + 1):
                for b in range(d - k - 2 * a + 1):
                    labels.append(BasisLabel(k, w, a, b))
    labels.sort(key=lambda L: (L.degree, L.k, L.w, L.a))
    return labels


def label_element(g: int, label: BasisLabel) -> ExtClass:
    w = primitive_basis(g, label.k)[label.w]
    return wedge(w, wedge(ExtClass.x_power(g, label.a), theta_power(g, label.b)))


class PairingQuotient:
    """The quotient of A^(<= 2d) by the radical of a pairing.

    Two pairings are used: the full level sum (the Floer ring of
    Sigma x S^1) and its restriction to level n = -1 (the cohomology ring
    of the symmetric product s^d Sigma).  Everything else is shared: the
    canonical primitive-prefactor basis, the radical, Gram blocks, and
    normal forms.

    The radical is not always a graded subspace (level coupling between
    degrees q and q - 2|r| produces mixed-degree elements, first at
    g=5, r=1), so the quotient is graded only mod 2|r|.  The homogeneous
    canonical basis still represents a basis: construction certifies the
    complement property by a global dimension count (homogeneous radical
    pieces plus mixed corrections plus basis size equals the monomial
    count) together with invertibility of the antidiagonal Gram blocks,
    which gives independence mod the radical.  Violation raises.
    """

    def __init__(self, params: SphereParams, n_filter: Optional[int] = None):
        if params.r < 0:
            params = SphereParams(params.g, -params.r)
        self.params = params
        self.g = params.g
        self.d = params.d
        self.n_filter = n_filter
        cap = 2 * self.d
        self.monos = monomials_up_to(self.g, cap)
        self._monos_by_deg: Dict[int, List[ExtMono]] = {}
        for m in self.monos:
            self._monos_by_deg.setdefault(m.degree, []).append(m)

        self.labels = canonical_labels(self.g, self.d)
        self.basis = [label_element(self.g, L) for L in self.labels]
        self._by_deg: Dict[int, List[int]] = {}
        for i, L in enumerate(self.labels):
            self._by_deg.setdefault(L.degree, []).append(i)

        self._radical_by_deg: Dict[int, List[Tuple[Fraction, ...]]] = {}
        radical_dim = 0
        for q in range(cap + 1):
            vecs, _ = _graded_radical(params, q, n_filter)
            self._radical_by_deg[q] = vecs
            radical_dim += len(vecs)
            n_basis = len(self._by_deg.get(q, []))
            if n_basis != len(self._by_deg.get(cap - q, [])):
                raise VerificationFailure(
                    f"basis counts not symmetric between degrees {q} and {cap - q}")
        self._mixed_vectors = _mixed_radical(params, n_filter)
        radical_dim += len(self._mixed_vectors)
        if len(self.basis) + radical_dim != len(self.monos):
            raise VerificationFailure(
                f"{len(self.basis)} basis elements + {radical_dim} radical "
                f"dimensions != {len(self.monos)} monomials at "
                f"(g,r)=({self.g},{params.r})")

        self.dim = len(self.basis)
        self._gram: Optional[QMatrix] = None
        self._blocks: Dict[int, QMatrix] = {}
        self._prepare_blocks()
        self._structure: Dict[Tuple[int, int], Tuple[Fraction, ...]] = {}

    # -- pairing and Gram --------------------------------------------------

    def pairing(self, u: ExtClass, v: ExtClass) -> Fraction:
        return class_pair(self.params, u, v, self.n_filter)

    @property
    def gram(self) -> QMatrix:
        if self._gram is None:
            self._gram = QMatrix(
                [[self.pairing(u, v) for v in self.basis] for u in self.basis],
                ncols=self.dim)
        return self._gram

    def _prepare_blocks(self) -> None:
        # invert every antidiagonal Gram block; SingularMatrix here means
        # the claimed basis is not a complement, which no valid input
        # should be able to cause
        cap = 2 * self.d
        for q in range(cap + 1):
            cols = self._by_deg.get(q, [])
            rows = self._by_deg.get(cap - q, [])
            if not cols and not rows:
                continue
            block = QMatrix([[self.pairing(self.basis[i], self.basis[l])
                              for i in cols] for l in rows], ncols=len(cols))
            self._blocks[q] = invert(block)

    def _solve_coefficients(self, values: List[Fraction]) -> List[Fraction]:
        """Solve sum_i c_i pair(e_i, e_l) = values[l] for c by blockwise
        back substitution along the degree filtration."""
        cap = 2 * self.d
        coeffs: List[Fraction] = [ZERO] * self.dim
        for q in range(cap + 1):
            cols = self._by_deg.get(q, [])
            if not cols:
                continue
            rows = self._by_deg.get(cap - q, [])
            rhs = []
            for l in rows:
                acc = values[l]
                for qq in range(q):
                    for i in self._by_deg.get(qq, []):
                        ci = coeffs[i]
                        if ci:
                            gil = self.gram[(i, l)]
                            if gil:
                                acc -= ci * gil
                rhs.append(acc)
            sol = self._blocks[q].apply(rhs)
            for i, c in zip(cols, sol):
                coeffs[i] = c
        return coeffs

    # -- normal forms ------------------------------------------------------

    def nf_vector(self, z: ExtClass) -> Tuple[Fraction, ...]:
        """Coefficients of the class of z on the canonical basis."""
        if z.g != self.g:
            raise DomainError(f"genus mismatch: class {z.g}, ring {self.g}")
        values = [self.pairing(z, e) for e in self.basis]
        return tuple(self._solve_coefficients(values))

    def nf_class(self, z: ExtClass) -> ExtClass:
        out = ExtClass.zero(self.g)
        for c, e in zip(self.nf_vector(z), self.basis):
            if c:
                out = out + e.scale(c)
        return out

    def is_in_radical(self, z: ExtClass) -> bool:
        return all(c == 0 for c in self.nf_vector(z))

    def element_from_vector(self, vec: Sequence[Fraction]) -> ExtClass:
        out = ExtClass.zero(self.g)
        for c, e in zip(vec, self.basis):
            if c:
                out = out + e.scale(c)
        return out

    # -- ring structure ----------------------------------------------------

    def product_vector(self, u: ExtClass, v: ExtClass) -> Tuple[Fraction, ...]:
        return self.nf_vector(wedge(u, v))

    def product(self, u: ExtClass, v: ExtClass) -> ExtClass:
        return self.nf_class(wedge(u, v))

    def structure_constant(self, i: int, j: int) -> Tuple[Fraction, ...]:
        """nf coefficients of e_i e_j, cached."""
        key = (i, j)
        if key not in self._structure:
            self._structure[key] = self.product_vector(self.basis[i], self.basis[j])
        return self._structure[key]

    # -- radical access ----------------------------------------------------

    def radical_vectors(self, q: int) -> List[Tuple[Fraction, ...]]:
        return list(self._radical_by_deg.get(q, []))

    def radical_elements(self) -> List[ExtClass]:
        """Homogeneous radical pieces by degree, then mixed corrections."""
        out = []
        for q in sorted(self._radical_by_deg):
            cols = self._monos_by_deg.get(q, [])
            for vec in self._radical_by_deg[q]:
                out.append(ExtClass(self.g, {cols[j]: c for j, c in enumerate(vec) if c}))
        out.extend(self._mixed_vectors)
        return out

    def mixed_radical_elements(self) -> List[ExtClass]:
        return list(self._mixed_vectors)

    def basis_degrees(self) -> List[int]:
        return [L.degree for L in self.labels]

    def dims_by_degree(self) -> List[int]:
        return [len(self._by_deg.get(q, [])) for q in range(2 * self.d + 1)]
