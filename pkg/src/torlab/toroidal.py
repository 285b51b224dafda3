"""The (twisted) toroidal Lie algebra and its generating-function relations.

Elements are Cyc-linear combinations of
  loop terms     g (x) t^r0 t^rvec      (g a Chevalley basis symbol),
  central terms  t^r0 t^rvec k_i        (0 <= i <= N),
  derivations    d_i                    (0 <= i <= N),
held in a deterministic normal form modulo the central relations
  (1/m) r0 t^r0 t^rvec k_0 + sum_i r_i t^r0 t^rvec k_i = 0.
"""

from __future__ import annotations

from fractions import Fraction

from .autom import Automorphism, eigenspace_decompose, eta
from .rootsys import ChevalleyAlgebra, GElement
from .scalar import Cyc, cyc_root_of_unity


class TorElement:
    """Finite combination of toroidal basis symbols (already normalized)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TorElement(out)

    def __sub__(self, other):
        return self + other.scale(Cyc.rational(-1))

    def __neg__(self):
        return self.scale(Cyc.rational(-1))

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = Cyc.rational(c)
        if not c:
            return TorElement()
        return TorElement({k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (self - other).is_zero()

    def __repr__(self):
        return "TorElement(%r)" % (self.terms,)


class ToroidalAlgebra:
    """Bracket engine for the twisted toroidal algebra of an automorphism.

    The central divisor in the bracket and in the d_A relation is the
    automorphism order m.  form_scale rescales the invariant form (used
    by the principal-realization contexts where the form is normalized).
    """

    def __init__(self, alg: ChevalleyAlgebra, aut: Automorphism, N: int, form_scale=None):
        self.alg = alg
        self.aut = aut
        self.N = N
        self.m = aut.order
        self.form_scale = Cyc.one() if form_scale is None else form_scale
        self._components = {}   # sym -> dict class -> GElement

    # -- constructors of elements ------------------------------------

    def loop(self, g: GElement, r0: int, rvec) -> TorElement:
        rvec = tuple(rvec)
        return TorElement({("g", sym, r0, rvec): c for sym, c in g.terms.items()})

    def central(self, i: int, r0: int, rvec) -> TorElement:
        return self.normalize_dA(TorElement({("k", i, r0, tuple(rvec)): Cyc.one()}))

    def deriv(self, i: int) -> TorElement:
        return TorElement({("d", i): Cyc.one()})

    def g_component(self, sym, cls: int) -> GElement:
        """Projection of a Chevalley basis symbol onto the cls eigenspace."""
        cls %= self.m
        table = self._components.get(sym)
        if table is None:
            comps = eigenspace_decompose(self.aut, GElement({sym: Cyc.one()}))
            table = {i: comp for i, comp in comps}
            self._components[sym] = table
        return table.get(cls, GElement())

    def loop_component(self, g: GElement, r0: int, rvec) -> TorElement:
        """g's (r0 mod m) eigencomponent placed at t^r0 t^rvec."""
        proj = GElement()
        for sym, c in g.terms.items():
            proj = proj + self.g_component(sym, r0).scale(c)
        return self.loop(proj, r0, rvec)

    # -- normal form ---------------------------------------------------

    def normalize_dA(self, el: TorElement) -> TorElement:
        out = {}
        m = self.m
        for key, c in el.terms.items():
            if key[0] != "k":
                _acc(out, key, c)
                continue
            _, j, r0, rvec = key
            if r0 != 0 and j == 0:
                # k_0 = -(m/r0) sum_i r_i k_i at this multidegree
                f = Cyc.rational(Fraction(-m, r0)) * c
                for i, ri in enumerate(rvec):
                    if ri:
                        _acc(out, ("k", i + 1, r0, rvec), f * ri)
            elif r0 == 0 and any(rvec) and j >= 1:
                j0 = next(i for i, ri in enumerate(rvec) if ri) + 1
                if j == j0:
                    f = c * Fraction(-1, rvec[j0 - 1])
                    for i in range(j0, len(rvec)):
                        if rvec[i]:
                            _acc(out, ("k", i + 1, 0, rvec), f * rvec[i])
                else:
                    _acc(out, key, c)
            else:
                _acc(out, key, c)
        return TorElement(out)

    # -- bracket -------------------------------------------------------

    def bracket(self, a: TorElement, b: TorElement) -> TorElement:
        alg = self.alg
        m = self.m
        out = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                t1, t2 = k1[0], k2[0]
                if t1 == "g" and t2 == "g":
                    _, s1, r0, rv = k1
                    _, s2, s0, sv = k2
                    c = c1 * c2
                    tot0 = r0 + s0
                    totv = tuple(x + y for x, y in zip(rv, sv))
                    for sym, sc in alg.bracket_basis(s1, s2).items():
                        _acc(out, ("g", sym, tot0, totv), sc * c)
                    fv = _form_basis(alg, s1, s2)
                    if fv:
                        f = self.form_scale * fv * c
                        if r0:
                            _acc(out, ("k", 0, tot0, totv), f * Fraction(r0, m))
                        for i, ri in enumerate(rv):
                            if ri:
                                _acc(out, ("k", i + 1, tot0, totv), f * ri)
                elif t1 == "d" and t2 in ("g", "k"):
                    r0, rv = k2[2], k2[3]
                    deg = r0 if k1[1] == 0 else rv[k1[1] - 1]
                    if deg:
                        _acc(out, k2, c1 * c2 * deg)
                elif t2 == "d" and t1 in ("g", "k"):
                    r0, rv = k1[2], k1[3]
                    deg = r0 if k2[1] == 0 else rv[k2[1] - 1]
                    if deg:
                        _acc(out, k1, -(c1 * c2 * deg))
                # k with anything, d with d: zero
        return self.normalize_dA(TorElement(out))

    # -- fields --------------------------------------------------------

    def x_field_mode(self, g: GElement, rvec, n: int) -> TorElement:
        return self.loop_component(g, n, tuple(rvec))

    def k_field_mode(self, i: int, rvec, n: int) -> TorElement:
        if n % self.m:
            return TorElement()
        return self.normalize_dA(TorElement({("k", i, n, tuple(rvec)): Cyc.one()}))


def _acc(out, key, val):
    prev = out.get(key)
    val = val if prev is None else prev + val
    if val:
        out[key] = val
    else:
        out.pop(key, None)


def _form_basis(alg, s1, s2):
    if s1[0] == "x" and s2[0] == "x":
        if not any(x + y for x, y in zip(s1[1], s2[1])):
            return Cyc.rational(-1)
        return None
    if s1[0] == "h" and s2[0] == "h":
        g = alg.rs.cartan[s1[1]][s2[1]]
        return Cyc.rational(g) if g else None
    return None


def toroidal_bracket(tor: ToroidalAlgebra, a: TorElement, b: TorElement) -> TorElement:
    return tor.bracket(a, b)


def normalize_dA(tor: ToroidalAlgebra, el: TorElement) -> TorElement:
    return tor.normalize_dA(el)


def apply_loop_automorphism(aut: Automorphism, el: TorElement) -> TorElement:
    """Loop extension: scale by w^(-r0), apply aut to the Chevalley part."""
    out = TorElement()
    m = aut.order
    for key, c in el.terms.items():
        if key[0] == "g":
            _, sym, r0, rv = key
            img = aut.apply(GElement({sym: c * cyc_root_of_unity(m, -r0)}))
            out = out + TorElement({("g", s2, r0, rv): c2 for s2, c2 in img.terms.items()})
        elif key[0] == "k":
            out = out + TorElement({key: c * cyc_root_of_unity(m, -key[2])})
        else:
            out = out + TorElement({key: c})
    return out


def project_theta_fixed(tor: ToroidalAlgebra, el: TorElement) -> TorElement:
    """Average of the loop automorphism orbit (a theta-fixed element)."""
    m = tor.m
    if m == 1:
        return el
    acc = TorElement()
    cur = el
    for _ in range(m):
        acc = acc + cur
        cur = apply_loop_automorphism(tor.aut, cur)
    return tor.normalize_dA(acc.scale(Fraction(1, m)))


def delta_specialize(coeffs: dict, m: int, window: int):
    """Both coefficient maps of f(z) delta(z^m) = sum_p f(w^p) delta(w^-p z).

    coeffs maps exponent -> Cyc for the finite series f.  Returns
    (lhs, rhs) maps over |mode| <= window; callers assert equality.
    The specialization carries a 1/m prefactor (each residue class is
    counted m times by the sum over p); the same prefactor shows up in
    the delta expansion of the loop-field brackets.
    """
    minv = Fraction(1, m)
    lhs = {}
    rhs = {}
    for n in range(-window, window + 1):
        tot = Cyc.zero()
        for a, c in coeffs.items():
            if (n - a) % m == 0:
                tot = tot + c
        if tot:
            lhs[n] = tot
        tot2 = Cyc.zero()
        for p in range(m):
            fw = Cyc.zero()
            for a, c in coeffs.items():
                fw = fw + c * cyc_root_of_unity(m, p * a)
            tot2 = tot2 + fw * cyc_root_of_unity(m, -p * n)
        tot2 = tot2 * minv
        if tot2:
            rhs[n] = tot2
    return lhs, rhs


class GeneratingRelationVerifier:
    """Coefficient-wise checks of the eight generating-function relations."""

    def __init__(self, tor: ToroidalAlgebra, window: int):
        self.tor = tor
        self.window = window
        self.m = tor.m
        self.alg = tor.alg

    def _theta_root(self, beta, p):
        perm = self.tor.aut.root_permutation()
        for _ in range(p % self.m if self.m > 1 else 0):
            beta = perm[beta]
        return beta

    def check_pair_relation_1(self, b1, b2, rvec, svec, entries):
        """[x_b1(r,z1), x_b2(s,z2)] against the delta-function expansion."""
        tor, m, W = self.tor, self.m, self.window
        alg = self.alg
        rs = alg.rs
        tot = tuple(x + y for x, y in zip(rvec, svec))
        for i in range(-W, W + 1):
            for j in range(-W, W + 1):
                lhs = tor.bracket(tor.x_field_mode(GElement.x(b1), rvec, i),
                                  tor.x_field_mode(GElement.x(b2), svec, j))
                rhs = TorElement()
                for p in range(m):
                    tb1 = self._theta_root(b1, p)
                    summed = tuple(x + y for x, y in zip(tb1, b2))
                    wpi = cyc_root_of_unity(m, -p * i)
                    et = eta(tor.aut, p, b1)
                    if summed in rs.root_set:
                        epsv = alg.eps_roots(tb1, b2)
                        coeff = et * epsv * wpi * Fraction(1, m)
                        rhs = rhs + tor.x_field_mode(GElement.x(summed), tot, i + j).scale(coeff)
                    elif not any(summed):
                        fval = Cyc.rational(-1)  # <x_b2, x_-b2>
                        c0 = et * wpi * Fraction(1, m)
                        rhs = rhs - tor.x_field_mode(GElement.h(b2), tot, i + j).scale(fval * c0)
                        for l, rl in enumerate(rvec):
                            if rl:
                                rhs = rhs + tor.k_field_mode(l + 1, tot, i + j).scale(fval * c0 * rl)
                        rhs = rhs + tor.k_field_mode(0, tot, i + j).scale(
                            fval * c0 * Fraction(i, m))
                _record(entries, "1.5(1)", {"beta1": b1, "beta2": b2, "r": rvec,
                                            "s": svec, "modes": (i, j)}, lhs, rhs)

    def check_pair_relation_2(self, b1, b2, rvec, svec, entries):
        tor, m, W = self.tor, self.m, self.window
        tot = tuple(x + y for x, y in zip(rvec, svec))
        for i in range(-W, W + 1):
            for j in range(-W, W + 1):
                lhs = tor.bracket(tor.x_field_mode(GElement.h(b1), rvec, i),
                                  tor.x_field_mode(GElement.h(b2), svec, j))
                rhs = TorElement()
                for p in range(m):
                    pairing = self.alg.form(self.tor.aut.power(p).apply(GElement.h(b1)),
                                            GElement.h(b2)) if p else \
                        Cyc.rational(self.alg.rs.form(b1, b2))
                    if not pairing:
                        continue
                    wpi = cyc_root_of_unity(m, -p * i)
                    c0 = pairing * wpi * Fraction(1, m)
                    for l, rl in enumerate(rvec):
                        if rl:
                            rhs = rhs + tor.k_field_mode(l + 1, tot, i + j).scale(c0 * rl)
                    rhs = rhs + tor.k_field_mode(0, tot, i + j).scale(c0 * Fraction(i, m))
                _record(entries, "1.5(2)", {"beta1": b1, "beta2": b2, "r": rvec,
                                            "s": svec, "modes": (i, j)}, lhs, rhs)

    def check_pair_relation_3(self, b1, b2, rvec, svec, entries):
        tor, m, W = self.tor, self.m, self.window
        tot = tuple(x + y for x, y in zip(rvec, svec))
        for i in range(-W, W + 1):
            for j in range(-W, W + 1):
                lhs = tor.bracket(tor.x_field_mode(GElement.h(b1), rvec, i),
                                  tor.x_field_mode(GElement.x(b2), svec, j))
                rhs = TorElement()
                for p in range(m):
                    pairing = self.alg.form(self.tor.aut.power(p).apply(GElement.h(b1)),
                                            GElement.h(b2)) if p else \
                        Cyc.rational(self.alg.rs.form(b1, b2))
                    if not pairing:
                        continue
                    coeff = pairing * cyc_root_of_unity(m, -p * i) * Fraction(1, m)
                    rhs = rhs + tor.x_field_mode(GElement.x(b2), tot, i + j).scale(coeff)
                _record(entries, "1.5(3)", {"beta1": b1, "beta2": b2, "r": rvec,
                                            "s": svec, "modes": (i, j)}, lhs, rhs)

    def check_central_relations(self, rvec, entries):
        """(4): (1/m) Dk_0 + sum r_i k_i = 0; (5)/(6): derivation action;
        (8): centrality."""
        tor, m, W = self.tor, self.m, self.window
        for n in range(-W, W + 1):
            if n % m:
                continue
            el = tor.k_field_mode(0, rvec, n).scale(Fraction(n, m))
            for i, ri in enumerate(rvec):
                if ri:
                    el = el + tor.k_field_mode(i + 1, rvec, n).scale(ri)
            _record(entries, "1.5(4)", {"r": rvec, "mode": n}, el, TorElement())
            for j in range(tor.N + 1):
                kj = tor.k_field_mode(j, rvec, n)
                for i in range(1, tor.N + 1):
                    lhs = tor.bracket(tor.deriv(i), kj)
                    _record(entries, "1.5(5)", {"r": rvec, "mode": n, "i": i, "j": j},
                            lhs, kj.scale(rvec[i - 1]))
                lhs = tor.bracket(tor.deriv(0), kj)
                _record(entries, "1.5(6)", {"r": rvec, "mode": n, "j": j},
                        lhs, kj.scale(n))
                sample = tor.x_field_mode(GElement.x(self.alg.rs.roots[0]), rvec, 1)
                _record(entries, "1.5(8)", {"r": rvec, "mode": n, "j": j},
                        tor.bracket(kj, sample), TorElement())

    def check_relation_7(self, beta, rvec, entries):
        tor, m, W = self.tor, self.m, self.window
        for p in range(m):
            for n in range(-W, W + 1):
                lhs = tor.x_field_mode(GElement.x(beta), rvec, n).scale(
                    cyc_root_of_unity(m, p * n))
                tb = self._theta_root(beta, p)
                rhs = tor.x_field_mode(GElement.x(tb), rvec, n).scale(eta(tor.aut, p, beta))
                _record(entries, "1.5(7)", {"beta": beta, "p": p, "r": rvec, "mode": n},
                        lhs, rhs)

    def run(self, rvec, svec, root_pairs=None):
        entries = []
        rs = self.alg.rs
        pairs = root_pairs
        if pairs is None:
            pairs = [(a, b) for a in rs.roots for b in rs.roots]
        for b1, b2 in pairs:
            self.check_pair_relation_1(b1, b2, rvec, svec, entries)
            self.check_pair_relation_2(b1, b2, rvec, svec, entries)
            self.check_pair_relation_3(b1, b2, rvec, svec, entries)
        for beta in rs.roots:
            self.check_relation_7(beta, rvec, entries)
        self.check_central_relations(rvec, entries)
        self.check_central_relations(svec, entries)
        return entries


def sample_bracket_axioms(tor: ToroidalAlgebra, samples: int, seed: int,
                          r0max: int = 3, rimax: int = 2, entries=None):
    """Antisymmetry and Jacobi on seeded random elements, plus d_A zeros.

    Elements are drawn uniformly from theta-compatible loop components,
    central monomials and derivations with |r0| <= r0max, |r_i| <= rimax.
    The PRNG is random.Random(seed) (Mersenne Twister), so witnesses are
    reproducible from the seed alone.
    """
    import random
    if entries is None:
        entries = []
    rng = random.Random(seed)

    def rand_elem():
        kind = rng.randrange(6)
        r0 = rng.randint(-r0max, r0max)
        rv = tuple(rng.randint(-rimax, rimax) for _ in range(tor.N))
        if kind < 4:
            sym = tor.alg.symbols[rng.randrange(tor.alg.dim)]
            el = tor.loop_component(GElement({sym: Cyc.one()}), r0, rv)
            if not el.is_zero():
                return el
            return rand_elem()
        if kind == 4:
            return tor.central(rng.randrange(tor.N + 1), r0 - r0 % tor.m, rv)
        return tor.deriv(rng.randrange(tor.N + 1))

    zero = TorElement()
    for t in range(samples):
        a, b, c = rand_elem(), rand_elem(), rand_elem()
        _record(entries, "tor.antisym", {"sample": t},
                tor.bracket(a, b) + tor.bracket(b, a), zero)
        jac = tor.bracket(a, tor.bracket(b, c)) + \
            tor.bracket(b, tor.bracket(c, a)) + \
            tor.bracket(c, tor.bracket(a, b))
        _record(entries, "tor.jacobi", {"sample": t}, jac, zero)
    for t in range(samples):
        r0 = rng.randint(-r0max, r0max)
        rv = tuple(rng.randint(-rimax, rimax) for _ in range(tor.N))
        rel = TorElement({("k", 0, r0, rv): Cyc.rational(Fraction(r0, tor.m))})
        for i, ri in enumerate(rv):
            if ri:
                rel = rel + TorElement({("k", i + 1, r0, rv): Cyc.rational(ri)})
        _record(entries, "tor.dA_zero", {"sample": t, "r0": r0, "r": rv},
                tor.normalize_dA(rel), zero)
    return entries


def _record(entries, rel, params, lhs, rhs):
    diff = lhs - rhs
    if diff.is_zero():
        entries.append((rel, params, "pass", None))
    else:
        entries.append((rel, params, "fail",
                        {"difference": sorted(map(repr, diff.terms.items()))}))
