"""Gluing along a surface and adjunction checks.

Two four-manifold pieces glued along Sigma x S^1 have their invariants
coupled by the inverse Gram matrix of the Floer pairing: the closed
invariant is sum_ij m_ij t1(z_i) t2(z_j) over the canonical basis
{z_i}.  The per-piece data enters as finite tables (SWTable); offsets
of the Spin^C structure along the surface and rim-torus classes are
pre-aggregated into the table values, since at most one offset can
contribute in each degree.

The second half implements the adjunction-inequality verdicts for an
embedded surface of genus g >= 2 with nonnegative self-intersection,
in three strengths: the plain degree bound, the invariant-dimension
bound, and the vanishing-cycle bound.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, GenusMismatch, VerificationFailure
from .extalg import (
    ExtClass,
    ExtMono,
    embed_bipoly,
    parse_monomial,
    render_mono,
    wedge,
)
from .floerring import FloerRing, build_oracle, tilde_relation
from .qlinalg import QMatrix, invert, kernel_basis, rref
from .swpair import BasisLabel, SphereParams, monos_of_degree, pair

ZERO = Fraction(0)
ONE = Fraction(1)


# -- relative-invariant tables ---------------------------------------------

class SWTable:
    """Finite rational-valued functional on monomials, with metadata.

    Keys are monomials of degree at most 2d for the (g, r) the table
    belongs to; absent keys are zero.  Aggregation convention: a value
    is the sum over surface offsets and rim-torus classes of the
    invariants of one piece against one fixed insertion times the key
    monomial.
    """

    __slots__ = ("g", "r", "values")

    def __init__(self, g: int, r: int, values: Dict[ExtMono, Fraction]):
        params = SphereParams(g, abs(r))
        cap = 2 * params.d
        clean: Dict[ExtMono, Fraction] = {}
        for m, v in values.items():
            for i in m.gammas:
                if not (1 <= i <= 2 * g):
                    raise DomainError(
                        f"monomial {render_mono(m)} has a gamma index "
                        f"outside 1..{2*g}")
            if m.degree > cap:
                raise DomainError(
                    f"monomial {render_mono(m)} has degree {m.degree} "
                    f"above the table cap {cap}")
            v = Fraction(v)
            if v:
                clean[m] = v
        self.g = g
        self.r = r
        self.values = clean

    def value(self, m: ExtMono) -> Fraction:
        return self.values.get(m, ZERO)

    def evaluate(self, z: ExtClass) -> Fraction:
        """The table extended linearly to classes."""
        total = ZERO
        for m, c in z.terms.items():
            v = self.values.get(m)
            if v is not None:
                total += c * v
        return total

    def is_zero(self) -> bool:
        return not self.values


def parse_sw_table(text: str) -> SWTable:
    """Parse the table file format.

    First meaningful line: ``genus <g> r <r>``.  Every further line is
    ``<monomial> <rational>`` in the monomial grammar of extalg, with
    the rational as the last whitespace-separated token.  Blank lines
    and ``#`` comments are skipped.  Each key must be a plain monomial
    (no ``t`` factors, which expand to sums) and may appear only once.
    """
    header: Optional[Tuple[int, int]] = None
    entries: Dict[ExtMono, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            tokens = line.split()
            if len(tokens) != 4 or tokens[0] != "genus" or tokens[2] != "r":
                raise DomainError(
                    f"line {lineno}: expected 'genus <g> r <r>', got {line!r}")
            try:
                header = (int(tokens[1]), int(tokens[3]))
            except ValueError:
                raise DomainError(
                    f"line {lineno}: non-integer genus or twist in {line!r}")
            continue
        parts = line.rsplit(None, 1)
        if len(parts) != 2:
            raise DomainError(
                f"line {lineno}: expected '<monomial> <rational>', got {line!r}")
        mono_text, value_text = parts
        cls = parse_monomial(header[0], mono_text)
        if len(cls.terms) != 1:
            raise DomainError(
                f"line {lineno}: {mono_text!r} is not a single monomial")
        ((m, coeff),) = cls.terms.items()
        if coeff != 1:
            raise DomainError(
                f"line {lineno}: {mono_text!r} carries a coefficient; "
                f"put it in the value column")
        if m in entries:
            raise DomainError(
                f"line {lineno}: duplicate monomial {render_mono(m)}")
        try:
            entries[m] = Fraction(value_text)
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"line {lineno}: bad rational {value_text!r}")
    if header is None:
        raise DomainError("empty table: missing 'genus <g> r <r>' header")
    return SWTable(header[0], header[1], entries)


def load_sw_table(path: str) -> SWTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sw_table(fh.read())


# -- the universal matrix --------------------------------------------------

@lru_cache(maxsize=None)
def universal_matrix(g: int, r: int) -> Tuple[Tuple[BasisLabel, ...], QMatrix]:
    """Inverse Gram matrix of the Floer pairing on the canonical basis.

    The matrix depends on the basis; the labels are returned with it so
    callers can translate.  A singular Gram matrix would contradict the
    nondegeneracy of the pairing on the quotient and aborts loudly.
    """
    ring = build_oracle(g, r)
    return tuple(ring.labels), invert(ring.gram)


def glue(g: int, r: int, t1: SWTable, t2: SWTable) -> Fraction:
    """Invariant of the glued manifold from two per-piece tables.

    Computes sum_ij m_ij t1(z_i) t2(z_j); with the aggregation baked
    into the tables this is the total invariant of the union, summed
    over rim-torus classes.
    """
    for t, side in ((t1, "first"), (t2, "second")):
        if t.g != g or abs(t.r) != abs(r):
            raise GenusMismatch(
                f"{side} table is for (g, r) = ({t.g}, {t.r}), "
                f"gluing asked for ({g}, {r})")
    ring = build_oracle(g, r)
    _, m = universal_matrix(g, r)
    left = [t1.evaluate(z) for z in ring.basis]
    right = [t2.evaluate(z) for z in ring.basis]
    total = ZERO
    for i, a in enumerate(left):
        if not a:
            continue
        for j, b in enumerate(right):
            if b:
                total += m[i, j] * a * b
    return total


def cap_table(g: int, r: int, k: int) -> SWTable:
    """The table pairing everything against the k-th basis element.

    Gluing any table against this one reads off its k-th coordinate:
    the matrix identity sum_j m_ij gram_jk = delta_ik in table form.
    """
    ring = build_oracle(g, r)
    if not (0 <= k < ring.dim):
        raise DomainError(f"basis index {k} out of range 0..{ring.dim - 1}")
    target = ring.basis[k]
    values: Dict[ExtMono, Fraction] = {}
    for q in range(2 * ring.d + 1):
        for m in monos_of_degree(g, q):
            v = pair(ring.params, ExtClass.monomial(g, m), target)
            if v:
                values[m] = v
    return SWTable(g, r, values)


def h1_simple_glue(g: int, r: int, s1: Fraction, s2: Fraction) -> Fraction:
    """Gluing collapsed to scalars for pieces with no odd-degree data.

    When both sides vanish on all monomials with gamma factors, the
    double sum telescopes to a single binomial coefficient on the
    x-power ladder: (-1)^(d/2) C(g-1, d/2) s1 s2 for d even, and zero
    for d odd (the ladder then has no middle rung).
    """
    params = SphereParams(g, abs(r))
    d = params.d
    if d % 2:
        return ZERO
    return Fraction((-1) ** (d // 2) * comb(g - 1, d // 2)) \
        * Fraction(s1) * Fraction(s2)


def c_coefficient(g: int, r: int) -> Fraction:
    """The scalar relating the two middle-dimensional gluing routes.

    Returns (-1)^alpha C(g-1, alpha) with alpha = d/2, after verifying
    against the independent route: the self-pairing of the embedded
    order-one relation must be exactly its reciprocal.
    """
    params = SphereParams(g, abs(r))
    d = params.d
    if d % 2:
        raise DomainError(f"coefficient defined only for even d, got d={d}")
    a = d // 2
    c = Fraction((-1) ** a * comb(g - 1, a))
    rel = embed_bipoly(g, tilde_relation(g, abs(r), 1))
    self_pair = pair(params, rel, rel)
    if self_pair != 1 / c:
        raise VerificationFailure(
            f"(g, r) = ({g}, {r}): formula gives c = {c} but the "
            f"relation self-pairs to {self_pair}, not {1 / c}")
    return c


# -- the gamma-annihilated subspace ----------------------------------------

@lru_cache(maxsize=None)
def kernel_K_basis(g: int, r: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Basis of {phi : gamma_j . phi = 0 for all j}, in oracle coordinates.

    Stacks the multiplication-by-gamma_j maps on the canonical basis
    and returns the kernel of the stack.
    """
    ring = build_oracle(g, r)
    rows: List[List[Fraction]] = []
    for j in range(1, 2 * g + 1):
        gcls = ExtClass.monomial(g, ExtMono(0, (j,)))
        cols = [ring.product_vector(gcls, e) for e in ring.basis]
        for out_idx in range(ring.dim):
            row = [cols[i][out_idx] for i in range(ring.dim)]
            if any(row):
                rows.append(row)
    if not rows:
        return tuple(tuple(ONE if i == k else ZERO for i in range(ring.dim))
                     for k in range(ring.dim))
    return tuple(kernel_basis(QMatrix(rows, ring.dim)))


def kernel_pairing_rank(g: int, r: int) -> int:
    """Rank of the Floer pairing restricted to the gamma-annihilated
    subspace; one for d even, zero for d odd."""
    ring = build_oracle(g, r)
    vecs = kernel_K_basis(g, r)
    if not vecs:
        return 0
    elems = [ring.element_from_vector(v) for v in vecs]
    m = QMatrix([[ring.pairing(u, v) for v in elems] for u in elems],
                len(elems))
    return rref(m)[2]


# -- vanishing witnesses ---------------------------------------------------

@lru_cache(maxsize=None)
def _vanishing_cycle_ideal(g: int, r: int) -> Tuple[QMatrix, Tuple[int, ...]]:
    """RREF of the span of the ideal generated by gamma_1..gamma_d in
    the oracle, in canonical coordinates."""
    ring = build_oracle(g, r)
    rows: List[List[Fraction]] = []
    for j in range(1, ring.d + 1):
        gcls = ExtClass.monomial(g, ExtMono(0, (j,)))
        for e in ring.basis:
            v = ring.product_vector(gcls, e)
            if any(v):
                rows.append(list(v))
    if not rows:
        return QMatrix([], ring.dim), ()
    reduced, pivots, _ = rref(QMatrix(rows, ring.dim))
    return reduced, pivots


def _in_ideal(g: int, r: int, vec: Sequence[Fraction]) -> bool:
    reduced, pivots = _vanishing_cycle_ideal(g, r)
    work = list(vec)
    for i, p in enumerate(pivots):
        c = work[p]
        if c:
            for jj in range(len(work)):
                rij = reduced[i, jj]
                if rij:
                    work[jj] -= c * rij
    return not any(work)


def vanishing_witness(g: int, r: int, m: ExtMono) -> bool:
    """Whether a monomial is zero in the quotient ring.

    For monomials of degree above d the class, zero or not, must lie
    in the ideal generated by the first d one-dimensional classes;
    that structural claim is verified on the side and a failure raises,
    since it would break the vanishing-cycle adjunction argument.
    """
    ring = build_oracle(g, r)
    vec = ring.nf_vector(ExtClass.monomial(g, m))
    if m.degree > ring.d and not _in_ideal(g, r, vec):
        raise VerificationFailure(
            f"(g, r) = ({g}, {r}): monomial {render_mono(m)} of degree "
            f"{m.degree} > {ring.d} is outside the vanishing-cycle ideal")
    return not any(vec)


# -- adjunction verdicts ---------------------------------------------------

@dataclass(frozen=True)
class AdjunctionQuery:
    """One adjunction question about an embedded surface.

    g: genus of the surface (>= 2); sigma_sq: its self-intersection
    (>= 0); c1_dot: pairing of the Spin^C determinant with the surface;
    deg_b: degree of the surface-supported insertion; b_plus: 1 for
    b+ = 1 (the verdict is then chamber-specific, taken on the side of
    the surface class), anything larger for b+ > 1; l: number of
    vanishing cycles, if known; d_s: dimension of the invariant, if
    known (requires the simple-type hypothesis on the manifold side).
    """

    g: int
    sigma_sq: int
    c1_dot: int
    deg_b: int = 0
    b_plus: int = 2
    l: Optional[int] = None
    d_s: Optional[int] = None

    def __post_init__(self):
        if self.g < 2:
            raise DomainError(f"genus must be at least 2, got {self.g}")
        if self.sigma_sq < 0:
            raise DomainError(
                f"self-intersection must be nonnegative, got {self.sigma_sq}")
        if self.deg_b < 0:
            raise DomainError(f"insertion degree must be nonnegative")
        if self.b_plus < 1:
            raise DomainError(f"b_plus must be at least 1, got {self.b_plus}")
        if abs(self.c1_dot) + self.sigma_sq <= 0:
            raise DomainError(
                "torsion case: |c1 . surface| + self-intersection must be "
                "positive")
        if self.l is not None and self.l < 0:
            raise DomainError(f"vanishing-cycle count must be nonnegative")
        if self.d_s is not None and self.d_s < 0:
            raise DomainError(f"invariant dimension must be nonnegative")


@dataclass(frozen=True)
class AdjunctionVerdict:
    excluded: bool
    form: Optional[str] = None

    def __str__(self) -> str:
        if not self.excluded:
            return "ALLOWED"
        return f"EXCLUDED (thm adjunction, {self.form} form)"


def adjunction_verdict(q: AdjunctionQuery) -> AdjunctionVerdict:
    """Decide whether a nonzero invariant is ruled out.

    The self-intersection is absorbed into the bound by the blow-up
    bookkeeping, which leaves the genus and the invariant dimension
    unchanged; so each test compares base + correction against 2g - 2,
    where base is |c1 . S| + S^2, except with b+ = 1 where only the
    chamber on the surface side is available and base is
    -c1 . S + S^2 (no verdict when that is not positive).  The three
    corrections, tried in order: the insertion degree; twice the
    invariant dimension, if supplied; twice the insertion degree, if a
    vanishing-cycle count l with deg_b <= l + 1 is supplied.
    """
    bound = 2 * q.g - 2
    if q.b_plus == 1:
        base = -q.c1_dot + q.sigma_sq
        if base <= 0:
            return AdjunctionVerdict(False)
    else:
        base = abs(q.c1_dot) + q.sigma_sq
    if base + q.deg_b > bound:
        return AdjunctionVerdict(True, "deg")
    if q.d_s is not None and base + 2 * q.d_s > bound:
        return AdjunctionVerdict(True, "dim")
    if q.l is not None and q.deg_b <= q.l + 1 and base + 2 * q.deg_b > bound:
        return AdjunctionVerdict(True, "cycle")
    return AdjunctionVerdict(False)
