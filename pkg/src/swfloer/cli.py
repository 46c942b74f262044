"""Command-line frontend.

Every command prints deterministic text: fixed basis orderings, exact
rationals (p/q, the denominator omitted when 1), no timestamps.  The
verify command runs the same invariant suite the acceptance tests use;
the check registry at the bottom is the single source for both.

Exit codes: 0 on success (all PASS for verify), 1 when a verification
fails or an internal cross-check aborts, 2 on usage errors including
out-of-range parameters.
"""

import argparse
import random
import sys
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import (
    DomainError,
    GenusMismatch,
    InconsistentRecursion,
    SingularMatrix,
    VerificationFailure,
)
from .extalg import (
    ExtClass,
    ExtMono,
    embed_bipoly,
    parse_class,
    primitive_basis,
    render_class,
    render_frac,
    wedge,
)
from .floerring import (
    alpha_of,
    build_oracle,
    deformation_components,
    presentation_dimension,
    presentation_quotient,
    recursion_free_check,
    recursion_unique,
    tilde_relation,
)
from .glueadj import (
    AdjunctionQuery,
    adjunction_verdict,
    c_coefficient,
    glue,
    kernel_pairing_rank,
    load_sw_table,
    universal_matrix,
)
from .qlinalg import QMatrix
from .swpair import SphereParams, monos_of_degree, pair
from .symprod import (
    BiPoly,
    betti,
    betti_total,
    parse_bipoly,
    relation_R,
    render_bipoly,
    ring_oracle,
    sector_normal_form,
)

SWEEP = [(g, r) for g in range(2, 6) for r in range(1, g)]


# -- small print helpers ---------------------------------------------------

def _print_matrix(m: QMatrix, out) -> None:
    for i in range(m.nrows):
        out.write(" ".join(render_frac(m[i, j]) for j in range(m.ncols)))
        out.write("\n")


def _print_basis_legend(g: int, r: int, out) -> None:
    ring = build_oracle(g, r)
    out.write("# basis\n")
    for i, e in enumerate(ring.basis):
        out.write(f"z{i + 1} = {render_class(e)}\n")


# -- command handlers ------------------------------------------------------

def _cmd_betti(args, out) -> int:
    out.write(" ".join(str(b) for b in betti(args.g, args.d)) + "\n")
    return 0


def _cmd_sp_relation(args, out) -> int:
    out.write(render_bipoly(relation_R(args.g, args.d, args.k)) + "\n")
    return 0


def _cmd_sp_nf(args, out) -> int:
    p = parse_bipoly(args.expr)
    out.write(render_bipoly(sector_normal_form(args.g, args.d, args.k, p))
              + "\n")
    return 0


def _cmd_floer_relations(args, out) -> int:
    rs = recursion_unique(args.g, args.r)
    family = rs.tilde if args.variant == "tilde" else rs.recursion
    for k in sorted(family):
        out.write(f"k={k}: {render_bipoly(family[k])}\n")
    return 0


def _cmd_floer_dim(args, out) -> int:
    ring = build_oracle(args.g, args.r)
    pres = presentation_dimension(args.g, args.r)
    out.write(f"oracle={ring.dim} presentation={pres}\n")
    return 0


def _cmd_floer_nf(args, out) -> int:
    ring = build_oracle(args.g, args.r)
    z = parse_class(args.g, args.expr)
    out.write(render_class(ring.nf_class(z)) + "\n")
    return 0


def _cmd_gram(args, out) -> int:
    ring = build_oracle(args.g, args.r)
    _print_basis_legend(args.g, args.r, out)
    out.write(f"# gram {ring.dim}x{ring.dim}\n")
    _print_matrix(ring.gram, out)
    return 0


def _cmd_umatrix(args, out) -> int:
    _, m = universal_matrix(args.g, args.r)
    _print_basis_legend(args.g, args.r, out)
    out.write(f"# inverse gram {m.nrows}x{m.ncols}\n")
    _print_matrix(m, out)
    return 0


def _cmd_glue(args, out) -> int:
    t1 = load_sw_table(args.t1)
    t2 = load_sw_table(args.t2)
    out.write(render_frac(glue(args.g, args.r, t1, t2)) + "\n")
    return 0


def _cmd_adjunct(args, out) -> int:
    q = AdjunctionQuery(g=args.g, sigma_sq=args.sigma2, c1_dot=args.c1dot,
                        deg_b=args.degb, b_plus=args.bplus, l=args.l,
                        d_s=args.ds)
    out.write(str(adjunction_verdict(q)) + "\n")
    return 0


def _cmd_verify(args, out) -> int:
    if args.all:
        cases = SWEEP
        names = [name for name, _, _ in CHECKS]
    else:
        if args.g is None or args.r is None:
            raise DomainError("verify needs --g and --r, or --all")
        SphereParams(args.g, abs(args.r))
        cases = [(args.g, abs(args.r))]
        names = [name for name, _, per_case in CHECKS if per_case]
    ok = True
    for name, fn, _ in CHECKS:
        if name not in names:
            continue
        fails = fn(cases)
        if fails:
            ok = False
            out.write(f"FAIL {name}: {fails[0]}")
            if len(fails) > 1:
                out.write(f" (+{len(fails) - 1} more)")
            out.write("\n")
        else:
            out.write(f"PASS {name}\n")
    return 0 if ok else 1


# -- argument parsing ------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="swfloer",
        description="Exact computations in the Floer ring of a product "
                    "three-manifold and its gluing formulas.")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, handler, **flags):
        p = sub.add_parser(name)
        for flag, spec in flags.items():
            p.add_argument(f"--{flag}", **spec)
        p.set_defaults(handler=handler)
        return p

    intreq = dict(type=int, required=True)
    add("betti", _cmd_betti, g=intreq, d=intreq)
    add("sp-relation", _cmd_sp_relation, g=intreq, d=intreq, k=intreq)
    add("sp-nf", _cmd_sp_nf, g=intreq, d=intreq, k=intreq,
        expr=dict(required=True))
    add("floer-relations", _cmd_floer_relations, g=intreq, r=intreq,
        variant=dict(choices=["tilde", "recursion"], default="tilde"))
    add("floer-dim", _cmd_floer_dim, g=intreq, r=intreq)
    add("floer-nf", _cmd_floer_nf, g=intreq, r=intreq,
        expr=dict(required=True))
    add("gram", _cmd_gram, g=intreq, r=intreq)
    add("umatrix", _cmd_umatrix, g=intreq, r=intreq)
    add("glue", _cmd_glue, g=intreq, r=intreq,
        t1=dict(required=True), t2=dict(required=True))
    add("adjunct", _cmd_adjunct, g=intreq, sigma2=intreq, c1dot=intreq,
        degb=dict(type=int, default=0), bplus=dict(type=int, choices=[1, 2],
                                                   default=2),
        l=dict(type=int, default=None), ds=dict(type=int, default=None))
    add("verify", _cmd_verify, g=dict(type=int, default=None),
        r=dict(type=int, default=None),
        all=dict(action="store_true", default=False))
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.handler(args, sys.stdout)
    except (DomainError, GenusMismatch) as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return 2
    except (VerificationFailure, SingularMatrix, InconsistentRecursion) as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return 1
    except FileNotFoundError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return 2


# -- the invariant suite ---------------------------------------------------
#
# Each check takes a list of (g, r) cases and returns failure strings;
# empty means pass.  The registry drives both `swfloer verify` and the
# acceptance tests, so they cannot drift apart.

def check_dimension_match(cases) -> List[str]:
    """Quotient dimension equals the total Betti number."""
    fails = []
    for g, r in cases:
        ring = build_oracle(g, r)
        want = betti_total(g, ring.d)
        if ring.dim != want:
            fails.append(f"({g},{r}): oracle dim {ring.dim} != {want}")
    return fails


def check_relations_annihilate(cases) -> List[str]:
    """Every w ^ R~_k and w ^ theta R~_(k+1) is in the pairing radical."""
    fails = []
    for g, r in cases:
        ring = build_oracle(g, r)
        d = ring.d
        for k in range(d + 1):
            rel = embed_bipoly(g, tilde_relation(g, r, k))
            nxt = embed_bipoly(g, BiPoly.theta() * tilde_relation(g, r, k + 1))
            for w in primitive_basis(g, k):
                if not ring.is_in_radical(wedge(w, rel)):
                    fails.append(f"({g},{r}) k={k}: relation survives")
                    break
                if not ring.is_in_radical(wedge(w, nxt)):
                    fails.append(f"({g},{r}) k={k}: theta-shifted relation "
                                 f"survives")
                    break
    return fails


def check_presentation_basis(cases) -> List[str]:
    """Sector bases are the predicted monomials; weighted sizes add up."""
    fails = []
    for g, r in cases:
        d = g - 1 - r
        total = 0
        for k in range(d + 1):
            quo = presentation_quotient(g, r, k)
            want = sorted(((a, b) for a in range(d + 1) for b in range(d + 1)
                           if 2 * a + b <= d - k),
                          key=lambda ab: (ab[0] + ab[1], -ab[0]))
            if sorted(quo.basis) != sorted(want):
                fails.append(f"({g},{r}) k={k}: basis {quo.basis}")
            prim = comb(2 * g, k) - (comb(2 * g, k - 2) if k >= 2 else 0)
            total += prim * quo.dim
        if total != betti_total(g, d):
            fails.append(f"({g},{r}): weighted sector sum {total}")
    return fails


def check_recursion_consistency(cases) -> List[str]:
    """Unique solution matches the closed form; free solution checks out;
    order-k relations are order-zero relations one genus down."""
    fails = []
    for g, r in cases:
        rs = recursion_unique(g, r)
        d = g - 1 - r
        a = alpha_of(d, 0)
        lo, hi = 2 * a + 2 * r - d, a + r
        for i in range(max(lo, 0), hi + 1):
            want = sum(
                Fraction((-1) ** (j + 1) * factorial(a + r) * 2 ** (i - j),
                         factorial(i - j) * factorial(j)
                         * factorial(a + r - i))
                for j in range(i - lo + 1))
            if rs.a_coeffs.get((i, 1), Fraction(0)) != want:
                fails.append(f"({g},{r}): a[{i},1] != closed form")
        for (i, m) in rs.a_coeffs:
            if m == 1 and not (lo <= i <= hi):
                fails.append(f"({g},{r}): stray a[{i},1]")
        if not recursion_free_check(g, r):
            fails.append(f"({g},{r}): free-solution check failed")
        for k in range(1, d + 1):
            if rs.recursion[k] != recursion_unique(g - k, r).recursion[0]:
                fails.append(f"({g},{r}): order-{k} relation not the "
                             f"genus-{g - k} order-zero relation")
    return fails


def check_gram_structure(cases) -> List[str]:
    """Anti-triangular by degree, fundamental pairing on the antidiagonal,
    invertible."""
    fails = []
    for g, r in cases:
        ring = build_oracle(g, r)
        sym = ring_oracle(g, ring.d)
        G = ring.gram
        degs = ring.basis_degrees()
        cap = 2 * ring.d
        for i in range(ring.dim):
            for j in range(ring.dim):
                s = degs[i] + degs[j]
                if s > cap and G[i, j]:
                    fails.append(f"({g},{r}): nonzero above top degree "
                                 f"at ({i},{j})")
                if s == cap and G[i, j] != sym.pairing(ring.basis[i],
                                                      ring.basis[j]):
                    fails.append(f"({g},{r}): antidiagonal entry ({i},{j}) "
                                 f"differs from the fundamental pairing")
        try:
            universal_matrix(g, r)
        except SingularMatrix:
            fails.append(f"({g},{r}): Gram matrix singular")
    return fails


def _random_homogeneous(ring, rng) -> ExtClass:
    by_deg: Dict[int, List[ExtClass]] = {}
    for lab, e in zip(ring.labels, ring.basis):
        by_deg.setdefault(lab.degree, []).append(e)
    while True:
        q = rng.choice(sorted(by_deg))
        out = ExtClass.zero(ring.g)
        for e in by_deg[q]:
            out = out + e.scale(Fraction(rng.randint(-3, 3)))
        if not out.is_zero():
            return out


def check_deformation_cup(cases) -> List[str]:
    """Base deformation component is the cup product; nothing appears off
    the even ladder.  Runs at genus up to four, 100 seeded pairs each."""
    fails = []
    for g, r in cases:
        if g > 4:
            continue
        ring = build_oracle(g, r)
        sym = ring_oracle(g, ring.d)
        rng = random.Random(1000 * g + r)
        for t in range(100):
            f1 = _random_homogeneous(ring, rng)
            f2 = _random_homogeneous(ring, rng)
            try:
                comps = deformation_components(ring, f1, f2)
            except VerificationFailure:
                fails.append(f"({g},{r}) pair {t}: off-ladder component")
                break
            cup = sym.product(f1, f2)
            base_ok = comps[0] == cup if comps else cup.is_zero()
            if not base_ok:
                fails.append(f"({g},{r}) pair {t}: base term is not the "
                             f"cup product")
                break
    return fails


def check_middle_coefficient(cases) -> List[str]:
    """Both routes to the middle coefficient agree; the pairing restricted
    to the gamma-annihilated subspace has rank 1 for d even, 0 for odd."""
    fails = []
    for g, r in cases:
        d = g - 1 - r
        if d % 2 == 0:
            try:
                c = c_coefficient(g, r)
            except VerificationFailure as e:
                fails.append(f"({g},{r}): {e}")
                continue
            if (g, r) == (4, 1):
                rel = embed_bipoly(4, tilde_relation(4, 1, 1))
                if c != -3 or pair(SphereParams(4, 1), rel, rel) != \
                        Fraction(-1, 3):
                    fails.append("(4,1): expected c = -3 and self-pairing "
                                 "-1/3")
        want = 1 if d % 2 == 0 else 0
        if kernel_pairing_rank(g, r) != want:
            fails.append(f"({g},{r}): restricted pairing rank != {want}")
    return fails


def check_gluing_cap(cases) -> List[str]:
    """Top-twist gluing is a plain product; the universal matrix inverts
    the Gram matrix entry by entry."""
    fails = []
    from .glueadj import SWTable
    for g, r in cases:
        if r == g - 1:
            s, t = Fraction(3, 2), Fraction(-4, 5)
            t1 = SWTable(g, r, {ExtMono(0, ()): s})
            t2 = SWTable(g, r, {ExtMono(0, ()): t})
            if glue(g, r, t1, t2) != s * t:
                fails.append(f"({g},{r}): product formula failed")
        ring = build_oracle(g, r)
        _, m = universal_matrix(g, r)
        G = ring.gram
        n = ring.dim
        g_rows = [[(k, G[j, k]) for k in range(n) if G[j, k]]
                  for j in range(n)]
        for i in range(n):
            acc = [Fraction(0)] * n
            for j in range(n):
                mij = m[i, j]
                if mij:
                    for kk, gv in g_rows[j]:
                        acc[kk] += mij * gv
            for k in range(n):
                if acc[k] != (1 if i == k else 0):
                    fails.append(f"({g},{r}): cap identity fails at "
                                 f"({i},{k})")
                    break
            else:
                continue
            break
    return fails


def check_high_degree_vanishing(cases) -> List[str]:
    """Monomials above twice the symmetric-product dimension die: all of
    them for the four lowest degrees past the cap (plus the pure-x ladder)
    at genus up to four, a seeded sample of 500 at genus five."""
    fails = []
    for g, r in cases:
        ring = build_oracle(g, r)
        cap = 2 * ring.d
        monos: List[ExtMono] = []
        if g <= 4:
            for q in range(cap + 1, cap + 5):
                monos.extend(monos_of_degree(g, q))
            monos.extend(ExtMono(a, ())
                         for a in range(ring.d + 1, ring.d + 7))
        else:
            rng = random.Random(20240612 + r)
            while len(monos) < 500:
                xexp = rng.randint(0, 6)
                ng = rng.randint(0, 2 * g)
                gammas = tuple(sorted(rng.sample(range(1, 2 * g + 1), ng)))
                m = ExtMono(xexp, gammas)
                if m.degree > cap:
                    monos.append(m)
        for m in monos:
            if any(ring.nf_vector(ExtClass.monomial(g, m))):
                fails.append(f"({g},{r}): {m} does not vanish")
                break
    return fails


def check_betti_triple(cases) -> List[str]:
    """Series coefficients, presentation dimensions and oracle dimensions
    agree; low Betti numbers match the alternating binomial count."""
    fails = []
    for g in range(2, 6):
        for d in range(g - 1):
            r = g - 1 - d
            total = betti_total(g, d)
            if presentation_dimension(g, r) != total:
                fails.append(f"g={g} d={d}: presentation sum != {total}")
            if build_oracle(g, r).dim != total:
                fails.append(f"g={g} d={d}: oracle dim != {total}")
            b = betti(g, d)
            for i in range(d + 1):
                want = sum(comb(2 * g, i - 2 * v) for v in range(i // 2 + 1))
                if b[i] != want:
                    fails.append(f"g={g} d={d}: b_{i} != binomial sum")
    return fails


ADJUNCTION_CASES: List[Tuple[dict, str]] = [
    (dict(g=2, sigma_sq=0, c1_dot=-2, deg_b=1, b_plus=2),
     "EXCLUDED (thm adjunction, deg form)"),
    (dict(g=3, sigma_sq=0, c1_dot=-2, deg_b=2, b_plus=2), "ALLOWED"),
    (dict(g=2, sigma_sq=1, c1_dot=-1, deg_b=0, b_plus=2), "ALLOWED"),
    (dict(g=2, sigma_sq=2, c1_dot=2, deg_b=0, b_plus=2),
     "EXCLUDED (thm adjunction, deg form)"),
    (dict(g=3, sigma_sq=0, c1_dot=6, deg_b=0, b_plus=1), "ALLOWED"),
    (dict(g=3, sigma_sq=0, c1_dot=-6, deg_b=0, b_plus=1),
     "EXCLUDED (thm adjunction, deg form)"),
    (dict(g=2, sigma_sq=0, c1_dot=-2, deg_b=0, d_s=1, b_plus=2),
     "EXCLUDED (thm adjunction, dim form)"),
    (dict(g=4, sigma_sq=0, c1_dot=-2, deg_b=0, d_s=2, b_plus=2), "ALLOWED"),
    (dict(g=3, sigma_sq=0, c1_dot=-2, deg_b=2, l=2, b_plus=2),
     "EXCLUDED (thm adjunction, cycle form)"),
    (dict(g=3, sigma_sq=0, c1_dot=-2, deg_b=3, l=1, b_plus=2),
     "EXCLUDED (thm adjunction, deg form)"),
    (dict(g=2, sigma_sq=3, c1_dot=-1, deg_b=0, b_plus=2),
     "EXCLUDED (thm adjunction, deg form)"),
    (dict(g=3, sigma_sq=1, c1_dot=-2, deg_b=0, d_s=1, b_plus=1),
     "EXCLUDED (thm adjunction, dim form)"),
]


def check_adjunction_table(cases) -> List[str]:
    """Twelve hand-computed verdicts, covering both chambers, all three
    inequality forms, the applicability gate and a boundary case."""
    fails = []
    for i, (kwargs, want) in enumerate(ADJUNCTION_CASES):
        got = str(adjunction_verdict(AdjunctionQuery(**kwargs)))
        if got != want:
            fails.append(f"query {i + 1}: got {got!r}, want {want!r}")
    return fails


# name, function, runs-in-single-case-mode
CHECKS: List[Tuple[str, Callable, bool]] = [
    ("dimension-match", check_dimension_match, True),
    ("relations-annihilate", check_relations_annihilate, True),
    ("presentation-basis", check_presentation_basis, True),
    ("recursion-consistency", check_recursion_consistency, True),
    ("gram-structure", check_gram_structure, True),
    ("deformation-cup", check_deformation_cup, True),
    ("middle-coefficient", check_middle_coefficient, True),
    ("gluing-cap", check_gluing_cap, True),
    ("high-degree-vanishing", check_high_degree_vanishing, True),
    ("betti-triple-count", check_betti_triple, False),
    ("adjunction-table", check_adjunction_table, False),
]


if __name__ == "__main__":
    sys.exit(main())
