"""The loop-rescaling isomorphism between twisted toroidal algebras.

A finite-order automorphism pi of the Chevalley algebra (order K) and the
principal-type automorphism theta it induces (order m) give two twisted
toroidal algebras over the same base.  This module builds the explicit
isomorphism phi between them:

    phi(x t^r0 t^r)  =  x t^(N(x) + (m/K) r0) t^r        (weight lines),
    phi(k_i t^r0 t^r) = k_i t^((m/K) r0) t^r,

with a central k_0 correction on weight-zero loop elements.  The exponent
table N lives on t-weight lines: pairs (Z_K-eigenclass, weight under the
fixed Cartan t of the eigenclass-zero subalgebra), since for K > 1 the
root vectors of the big Cartan are not pi-eigenvectors.  N is propagated
from the canonical affine generators through bracket words; any
inconsistency is reported, never patched.

The bracket conventions differ on the two sides: the pi-side divides the
k_0 central cocycle by K, the theta-side by m (both realized through
ToroidalAlgebra's automorphism order).  verify_iso checks the bracket
homomorphism property on seeded random basis pairs, the N invariants, the
theta-fixedness of every image, and the central identity phi(C) = C.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .autom import (Automorphism, affine_marks, diagram_automorphism,
                    identity_automorphism)
from .rootsys import ChevalleyAlgebra, GElement, build_root_system
from .scalar import Cyc, cyc_root_of_unity
from .toroidal import TorElement, ToroidalAlgebra, _record


class _LoopOrder:
    """Stand-in automorphism carrying only the loop order m.

    The theta-side ToroidalAlgebra needs just the central divisor; theta
    itself acts diagonally on the adapted weight lines and is tracked by
    the eigenvalue table d below, so no symbol action is ever required.
    """

    def __init__(self, order: int):
        self.order = order


class Line:
    """A 1-dimensional (eigenclass, t-weight) component of the algebra."""

    __slots__ = ("cls", "weight", "g", "vec")

    def __init__(self, cls, weight, g, vec):
        self.cls = cls
        self.weight = weight
        self.g = g
        self.vec = vec

    def __repr__(self):
        return "Line(cls=%d, weight=%r)" % (self.cls, self.weight)


class Probe:
    """A weight-zero bracket [x_u, x_v] with its phi image data."""

    __slots__ = ("cls", "g", "vec", "shift", "central")

    def __init__(self, cls, g, vec, shift, central):
        self.cls = cls
        self.g = g
        self.vec = vec
        self.shift = shift       # exponent shift N(u) + N(v)
        self.central = central   # k_0 coefficient <x_u, x_v>' N(u)/m


class IsoContext:
    """Everything needed to evaluate and verify the isomorphism phi."""

    def __init__(self, alg, pi, K, nvars):
        self.alg = alg
        self.pi = pi
        self.K = K
        self.nvars = nvars
        self.ell = 0
        self.E = []            # canonical generators, index 0..ell
        self.F = []
        self.H = []
        self.cartan = []       # affine Cartan matrix psi_j(H_i)
        self.marks = []
        self.comarks = []
        self.m = 0
        self.lam = Cyc.one()   # form normalization <psi_0, psi_0> = 2 a1_0 / K
        self.lines = []
        self.line_at = {}      # (cls, weight) -> line index
        self.N = {}            # line index -> exponent shift
        self.d = {}            # line index -> theta eigenvalue exponent mod m
        self.probes = []       # per class: chosen spanning probes
        self.cols = []         # per class: (vectors, infos) for decomposition
        self.dom = None        # ToroidalAlgebra over pi   (divisor K)
        self.cod = None        # ToroidalAlgebra, divisor m
        self._coords = {}


def _vec_of(alg, g):
    return alg.to_vector(g)


def _ratio(alg, u, v):
    """Scalar c with u = c v, or None."""
    if v.is_zero():
        return None
    coeffs = linalg.express_in_span([_vec_of(alg, v)], _vec_of(alg, u))
    return None if coeffs is None else coeffs[0]


def _class_project(alg, pi, g, cls):
    K = pi.order
    if K == 1:
        return g
    out = GElement()
    for p in range(K):
        out = out + pi.power(p).apply(g).scale(cyc_root_of_unity(K, (-cls * p) % K))
    return out.scale(Cyc.rational(Fraction(1, K)))


def _subspace_basis(vectors):
    rows, pivots = linalg.rref(vectors)
    return [r for r in rows[:len(pivots)]]


def _restricted_matrix(alg, basis, op):
    """Rows of the operator op (GElement endo) in the given basis."""
    cols = []
    for v in basis:
        img = _vec_of(alg, op(alg.from_vector(v)))
        c = linalg.express_in_span(basis, img)
        if c is None:
            raise ValueError("operator does not preserve the subspace")
        cols.append(c)
    n = len(basis)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _weight_split(alg, basis, hams):
    """Refine a subspace into joint ad-eigenspaces of the Cartan elements."""
    pieces = [((), basis)]
    for h in hams:
        refined = []
        for prefix, vs in pieces:
            if not vs:
                continue
            mat = _restricted_matrix(alg, vs, lambda g, h=h: alg.bracket(h, g))
            total = 0
            for lam in range(-12, 13):
                shifted = [[mat[i][j] - (Cyc.rational(lam) if i == j else Cyc.zero())
                            for j in range(len(vs))] for i in range(len(vs))]
                ker = linalg.nullspace(shifted)
                if not ker:
                    continue
                sub = []
                for coeffs in ker:
                    vec = [Cyc.zero()] * len(vs[0])
                    for c, v in zip(coeffs, vs):
                        if c:
                            vec = [a + c * b for a, b in zip(vec, v)]
                    sub.append(vec)
                refined.append((prefix + (lam,), _subspace_basis(sub)))
                total += len(ker)
            if total != len(vs):
                raise ValueError("ad-eigenvalues escape the search range")
        pieces = refined
    return pieces


def _simple_orbits(pi, rank):
    if pi.order == 1:
        return [(i,) for i in range(rank)]
    perm = pi.root_permutation()
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    seen = set()
    orbits = []
    for i in range(rank):
        if i in seen:
            continue
        orbit = []
        a = simple[i]
        while True:
            idx = next(j for j, s in enumerate(simple) if s == a)
            if idx in seen:
                break
            seen.add(idx)
            orbit.append(idx)
            a = perm[a]
        orbits.append(tuple(orbit))
    return orbits


def _int_of(c):
    f = c.as_fraction()
    if f.denominator != 1:
        raise ValueError("expected an integer eigenvalue, got %s" % (f,))
    return int(f)


def build_iso_context(kind: str, rank: int, K: int = 1, perm=None,
                      nvars: int = 1) -> IsoContext:
    """Construct the isomorphism data for the twisted pair (pi, theta)."""
    rs = build_root_system(kind, rank)
    alg = ChevalleyAlgebra(rs)
    if K == 1:
        pi = identity_automorphism(alg)
    else:
        if perm is None:
            raise ValueError("a diagram permutation is required when K > 1")
        pi = diagram_automorphism(alg, list(perm), K)
    ctx = IsoContext(alg, pi, K, nvars)

    # canonical generators of the eigenclass-zero subalgebra
    orbits = _simple_orbits(pi, rank)
    ctx.ell = len(orbits)
    E, F, H = [None], [None], [None]
    for orbit in orbits:
        a0 = rs.simple_roots[orbit[0]]
        e = GElement()
        f = GElement()
        for p in range(len(orbit)):
            e = e + pi.power(p).apply(GElement.x(a0))
            f = f + pi.power(p).apply(GElement.x(tuple(-x for x in a0)))
        if not pi.apply(e) == e or not pi.apply(f) == f:
            raise ValueError("orbit sum is not pi-fixed (sign obstruction)")
        h = alg.bracket(e, f)
        c = _ratio(alg, alg.bracket(h, e), e)
        if c is None or not c:
            raise ValueError("degenerate sl2 triple on a node orbit")
        f = f.scale(Cyc.rational(2) / c)
        E.append(e)
        F.append(f)
        H.append(alg.bracket(e, f))

    # eigenclass subspaces and their t-weight lines
    hams = H[1:]
    class_bases = []
    for cls in range(K):
        vs = [_vec_of(alg, _class_project(alg, pi, GElement({s: Cyc.one()}), cls))
              for s in alg.symbols]
        class_bases.append(_subspace_basis(vs))
    zero_spaces = [None] * K
    for cls in range(K):
        for weight, basis in _weight_split(alg, class_bases[cls], hams):
            if not any(weight):
                zero_spaces[cls] = basis
                continue
            if len(basis) > 1:
                raise ValueError("t-weight multiplicity above one at %r" % (weight,))
            vec = basis[0]
            ctx.line_at[(cls, weight)] = len(ctx.lines)
            ctx.lines.append(Line(cls, weight, alg.from_vector(vec), vec))

    # affine node: lowest weight line of class 1, highest of class -1
    def joint_kernel_line(cls, gens):
        basis = class_bases[cls % K]
        rows = []
        for g in gens:
            mat = []
            for v in basis:
                mat.append(_vec_of(alg, alg.bracket(g, alg.from_vector(v))))
            for i in range(len(mat[0])):
                rows.append([mat[j][i] for j in range(len(basis))])
        ker = linalg.nullspace(rows)
        if len(ker) != 1:
            raise ValueError("affine node weight space is not a line "
                             "(dim %d)" % len(ker))
        vec = [Cyc.zero()] * alg.dim
        for c, v in zip(ker[0], basis):
            if c:
                vec = [a + c * b for a, b in zip(vec, v)]
        return alg.from_vector(vec)

    e0 = joint_kernel_line(1, F[1:])
    f0 = joint_kernel_line(-1, E[1:])
    h0 = alg.bracket(e0, f0)
    c = _ratio(alg, alg.bracket(h0, e0), e0)
    if c is None or not c:
        raise ValueError("affine node does not close to an sl2 triple")
    f0 = f0.scale(Cyc.rational(2) / c)
    E[0], F[0] = e0, f0
    H[0] = alg.bracket(e0, f0)
    ctx.E, ctx.F, ctx.H = E, F, H

    # affine Cartan matrix, marks, comarks, theta order m
    n = ctx.ell + 1
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            r = _ratio(alg, alg.bracket(H[i], E[j]), E[j])
            A[i][j] = 0 if r is None else _int_of(r)
    ctx.cartan = A
    marks, comarks = affine_marks(A)
    if marks[0] != 1:
        raise ValueError("affine mark a_0 is %d, expected 1" % marks[0])
    check = GElement()
    for a1, h in zip(comarks, H):
        check = check + h.scale(a1)
    if not check.is_zero():
        raise ValueError("comark null relation sum a1_j H_j = 0 fails")
    ctx.marks, ctx.comarks = marks, comarks
    ctx.m = K * sum(marks)

    # form normalization: <psi_0, psi_0> = 2 a1_0 / K
    gram = [[alg.form(H[i], H[j]) for j in range(1, n)] for i in range(1, n)]
    rhs = [Cyc.rational(A[i][0]) for i in range(1, n)]
    coords = linalg.solve(gram, rhs)
    if coords is None:
        raise ValueError("restricted Cartan form is degenerate")
    psi0sq = Cyc.zero()
    for a, b in zip(rhs, coords):
        psi0sq = psi0sq + a * b
    ctx.psi0sq = psi0sq
    ctx.lam = psi0sq * Fraction(K, 2 * comarks[0])

    ctx.dom = ToroidalAlgebra(alg, pi, nvars, form_scale=ctx.lam)
    ctx.cod = ToroidalAlgebra(alg, _LoopOrder(ctx.m), nvars, form_scale=ctx.lam)

    compute_N(ctx)
    _build_probes(ctx, zero_spaces)
    return ctx


def _line_of(ctx, g, cls):
    """Line index of a weight vector g in the given class, with a check."""
    weight = []
    for h in ctx.H[1:]:
        r = _ratio(ctx.alg, ctx.alg.bracket(h, g), g)
        weight.append(0 if r is None else _int_of(r))
    idx = ctx.line_at.get((cls % ctx.K, tuple(weight)))
    if idx is None or _ratio(ctx.alg, g, ctx.lines[idx].g) is None:
        raise ValueError("element does not sit on a single t-weight line")
    return idx


def compute_N(ctx: IsoContext):
    """Propagate the exponent table N from the affine generators.

    Seeds: N = 1 on the E_j lines, -1 on the F_j lines, 1 - m/K on the
    affine node E_0 and m/K - 1 on F_0.  Brackets of known lines force N
    additively; a conflicting forced value raises (the inconsistency is
    reported, never patched).  Also fills the theta-eigenvalue table d
    (seeds +-1 on every generator line, additive mod m).
    """
    alg, K = ctx.alg, ctx.K
    mK = ctx.m // K
    ctx.N = {}
    ctx.d = {}

    def seed(g, cls, nval, dval):
        idx = _line_of(ctx, g, cls)
        for table, val, name in ((ctx.N, nval, "N"), (ctx.d, dval % ctx.m, "d")):
            if idx in table and table[idx] != val:
                raise ValueError("%s seed conflict on line %r" % (name, ctx.lines[idx]))
            table[idx] = val

    for j in range(1, ctx.ell + 1):
        seed(ctx.E[j], 0, 1, 1)
        seed(ctx.F[j], 0, -1, -1)
    seed(ctx.E[0], 1, 1 - mK, 1)
    seed(ctx.F[0], -1, mK - 1, -1)

    changed = True
    while changed:
        changed = False
        known = sorted(ctx.N)
        for i in known:
            for j in known:
                li, lj = ctx.lines[i], ctx.lines[j]
                wsum = tuple(a + b for a, b in zip(li.weight, lj.weight))
                if not any(wsum):
                    continue
                b = alg.bracket(li.g, lj.g)
                if b.is_zero():
                    continue
                cls = (li.cls + lj.cls) % ctx.K
                idx = ctx.line_at.get((cls, wsum))
                if idx is None:
                    raise ValueError("bracket escapes the weight lines at %r" % (wsum,))
                nval = ctx.N[i] + ctx.N[j]
                dval = (ctx.d[i] + ctx.d[j]) % ctx.m
                if idx in ctx.N:
                    if ctx.N[idx] != nval:
                        raise ValueError(
                            "inconsistent N at %r: %d vs %d forced by brackets"
                            % (ctx.lines[idx], ctx.N[idx], nval))
                    if ctx.d[idx] != dval:
                        raise ValueError("inconsistent theta exponent at %r"
                                         % (ctx.lines[idx],))
                else:
                    ctx.N[idx] = nval
                    ctx.d[idx] = dval
                    changed = True
    missing = [ctx.lines[i] for i in range(len(ctx.lines)) if i not in ctx.N]
    if missing:
        raise ValueError("N undetermined on lines %r" % (missing,))
    return {(ln.cls, ln.weight): ctx.N[i] for i, ln in enumerate(ctx.lines)}


def _build_probes(ctx, zero_spaces):
    """Spanning weight-zero brackets with their phi image data, per class."""
    alg = ctx.alg
    ctx.probes = [[] for _ in range(ctx.K)]
    order = sorted(range(len(ctx.lines)),
                   key=lambda i: (ctx.lines[i].cls, ctx.lines[i].weight))
    for i in order:
        for j in order:
            li, lj = ctx.lines[i], ctx.lines[j]
            if any(a + b for a, b in zip(li.weight, lj.weight)):
                continue
            b = alg.bracket(li.g, lj.g)
            if b.is_zero():
                continue
            cls = (li.cls + lj.cls) % ctx.K
            f = alg.form(li.g, lj.g) * ctx.lam
            if f and ctx.N[i] + ctx.N[j] != 0:
                raise ValueError("form-paired lines with N(u) + N(v) != 0")
            chosen = ctx.probes[cls]
            vec = _vec_of(alg, b)
            if linalg.express_in_span([p.vec for p in chosen], vec) is not None:
                continue
            chosen.append(Probe(cls, b, vec, ctx.N[i] + ctx.N[j],
                                f * Fraction(ctx.N[i], ctx.m)))
    ctx.cols = []
    for cls in range(ctx.K):
        vectors = []
        infos = []
        for i, ln in enumerate(ctx.lines):
            if ln.cls == cls:
                vectors.append(ln.vec)
                infos.append(("line", ln.g, ctx.N[i]))
        for p in ctx.probes[cls]:
            vectors.append(p.vec)
            infos.append(("probe", p.g, p.shift, p.central))
        zdim = len(zero_spaces[cls]) if zero_spaces[cls] else 0
        want = sum(1 for ln in ctx.lines if ln.cls == cls) + zdim
        if linalg.rank(vectors) != want:
            raise ValueError("weight-zero probes do not span class %d" % cls)
        ctx.cols.append((vectors, infos))


def _decompose(ctx, cls, g):
    key = (cls, tuple(sorted((s, repr(c)) for s, c in g.terms.items())))
    hit = ctx._coords.get(key)
    if hit is None:
        vectors, _ = ctx.cols[cls]
        hit = linalg.express_in_span(vectors, _vec_of(ctx.alg, g))
        ctx._coords[key] = hit if hit is not None else False
    if hit is False or hit is None:
        raise ValueError("element is not in the pi-twisted subalgebra")
    return hit


def phi(ctx: IsoContext, el: TorElement) -> TorElement:
    """Image of a pi-twisted toroidal element under the isomorphism."""
    cod, K, mK = ctx.cod, ctx.K, ctx.m // ctx.K
    out = TorElement()
    groups = {}
    for key, c in el.terms.items():
        if key[0] == "g":
            _, sym, r0, rv = key
            g = groups.setdefault((r0, rv), GElement())
            groups[(r0, rv)] = g + GElement({sym: c})
        elif key[0] == "k":
            _, i, r0, rv = key
            if r0 % K:
                raise ValueError("central term t^%d k_%d is not pi-fixed" % (r0, i))
            out = out + TorElement({("k", i, r0 * mK, rv): c})
        else:
            raise ValueError("derivations are outside the isomorphism domain")
    for (r0, rv), g in sorted(groups.items()):
        cls = r0 % K
        base = r0 * mK
        coords = _decompose(ctx, cls, g)
        _, infos = ctx.cols[cls]
        for c, info in zip(coords, infos):
            if not c:
                continue
            if info[0] == "line":
                out = out + cod.loop(info[1].scale(c), base + info[2], rv)
            else:
                out = out + cod.loop(info[1].scale(c), base + info[2], rv)
                if info[3]:
                    out = out + TorElement({("k", 0, base, rv): c * info[3]})
    return cod.normalize_dA(out)


def check_phi_C(ctx: IsoContext, entries):
    """phi(C) = C through the affine-node chain.

    Bracket the images of E_0 t and F_0 t^-1 on the theta side, subtract
    the image of H_0; the remainder must be <E_0, F_0>'/K times k_0 at
    multidegree zero, which is exactly where phi(C) = C materializes.
    """
    zeros = (0,) * ctx.nvars
    a = ctx.dom.loop(ctx.E[0], 1, zeros)
    b = ctx.dom.loop(ctx.F[0], -1, zeros)
    lhs = ctx.cod.bracket(phi(ctx, a), phi(ctx, b)) - phi(
        ctx, ctx.dom.loop(ctx.H[0], 0, zeros))
    pair = ctx.lam * ctx.alg.form(ctx.E[0], ctx.F[0])
    rhs = TorElement({("k", 0, 0, zeros): pair * Fraction(1, ctx.K)})
    _record(entries, "iso.phi_C", {"K": ctx.K, "m": ctx.m}, lhs, rhs)


def _random_domain_element(ctx, rng, rmax=2):
    pool = len(ctx.lines) + sum(len(p) for p in ctx.probes) + ctx.nvars + 1
    pick = rng.randrange(pool)
    rv = tuple(rng.randint(-1, 1) for _ in range(ctx.nvars))
    if pick < len(ctx.lines):
        ln = ctx.lines[pick]
        r0 = ln.cls + ctx.K * rng.randint(-rmax, rmax)
        return ctx.dom.loop(ln.g, r0, rv), ("line", pick, r0, rv)
    pick -= len(ctx.lines)
    for cls in range(ctx.K):
        if pick < len(ctx.probes[cls]):
            p = ctx.probes[cls][pick]
            r0 = cls + ctx.K * rng.randint(-rmax, rmax)
            return ctx.dom.loop(p.g, r0, rv), ("zero", cls, pick, r0, rv)
        pick -= len(ctx.probes[cls])
    r0 = ctx.K * rng.randint(-rmax, rmax)
    return ctx.dom.central(pick, r0, rv), ("central", pick, r0, rv)


def verify_iso(ctx: IsoContext, samples: int = 1000, seed: int = 0):
    """Structural invariants plus the bracket homomorphism on random pairs."""
    entries = []
    alg = ctx.alg

    ok = ctx.marks[0] == 1
    entries.append(("iso.marks", {"marks": tuple(ctx.marks),
                                  "comarks": tuple(ctx.comarks)},
                    "pass" if ok else "fail",
                    None if ok else {"difference": ["a_0 = %d" % ctx.marks[0]]}))

    for j in range(1, ctx.ell + 1):
        for g, want, tag in ((ctx.E[j], 1, "E"), (ctx.F[j], -1, "F")):
            idx = _line_of(ctx, g, 0)
            got = ctx.N[idx]
            entries.append(("iso.N_simple", {"node": j, "gen": tag},
                            "pass" if got == want else "fail",
                            None if got == want else
                            {"difference": ["N = %d, expected %d" % (got, want)]}))

    bad = []
    for i, li in enumerate(ctx.lines):
        for j, lj in enumerate(ctx.lines):
            if alg.form(li.g, lj.g) and ctx.N[i] + ctx.N[j] != 0:
                bad.append((li.weight, lj.weight))
    entries.append(("iso.N_opposite", {"pairs": len(ctx.lines) ** 2},
                    "pass" if not bad else "fail",
                    None if not bad else {"difference": list(map(repr, bad))}))

    mK = ctx.m // ctx.K
    bad = [repr(ln) for i, ln in enumerate(ctx.lines)
           if (ctx.d[i] - ctx.N[i] - ln.cls * mK) % ctx.m]
    entries.append(("iso.theta_fixed_images", {"lines": len(ctx.lines)},
                    "pass" if not bad else "fail",
                    None if not bad else {"difference": bad}))

    prod = ctx.alg.form(ctx.E[0], ctx.F[0]) * ctx.psi0sq
    ok = prod == Cyc.rational(2)
    entries.append(("iso.form_pairing", {"psi0sq": repr(ctx.psi0sq)},
                    "pass" if ok else "fail",
                    None if ok else {"difference": [repr(prod)]}))

    check_phi_C(ctx, entries)

    rng = random.Random(seed)
    for t in range(samples):
        a, da = _random_domain_element(ctx, rng)
        b, db = _random_domain_element(ctx, rng)
        lhs = phi(ctx, ctx.dom.bracket(a, b))
        rhs = ctx.cod.bracket(phi(ctx, a), phi(ctx, b))
        _record(entries, "iso.hom", {"sample": t, "a": da, "b": db}, lhs, rhs)
    return entries


def n_table(ctx: IsoContext):
    """JSON-friendly exponent table, sorted deterministically."""
    out = []
    for i, ln in enumerate(ctx.lines):
        out.append({"class": ln.cls, "weight": list(ln.weight),
                    "N": ctx.N[i], "theta_exp": ctx.d[i]})
    out.sort(key=lambda e: (e["class"], e["weight"]))
    return out
