"""Truncated formal-distribution calculus with operator coefficients.

The shared engine for every field-relation check: Fock states over a
lattice, Heisenberg creation/annihilation, exponential dressing
operators, generalized binomial factors, delta-function identities, and
a generic checker for relations of the shape

    prod (1 - a_p z1/z2)^(c_p) f(z1) g(z2) - (mirror) = sum delta-terms.

Mode convention: the operator coefficient at zeta^n shifts the d_0
degree by n; creation modes sit at negative powers, so degrees are
bounded above on every state and all coefficient sums are finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial as _factorial

from .scalar import Cyc

try:
    from gmpy2 import mpq as RAT
except ImportError:  # pragma: no cover
    RAT = Fraction


@dataclass(frozen=True)
class TruncationWindow:
    """Bounds for a verification sweep.

    modes:   |zeta-exponent| <= modes per variable
    degree:  state-degree bound for the swept input states
    support: bound on the total coordinate norm of lattice labels
    """

    modes: int
    degree: int
    support: int

    def __post_init__(self):
        if self.modes < 0 or self.degree < 0 or self.support < 0:
            raise ValueError("window bounds must be nonnegative")

    def as_tuple(self):
        return (self.modes, self.degree, self.support)


# ---------------------------------------------------------------------------
# scalar series helpers
# ---------------------------------------------------------------------------


def binomial_coefficient(c, n: int):
    """Generalized binomial coefficient C(c, n) for exact rational c."""
    out = RAT(1)
    for i in range(n):
        out *= (c - i)
        out /= i + 1
    return out


def binomial_factor(c, a, nmax: int):
    """Coefficients of (1 - a*u)^c in u^0..u^nmax, c an exact rational.

    Nonnegative integer c terminates exactly (higher coefficients are 0).
    Coefficients stay plain Fractions unless a is irrational.
    """
    c = RAT(c)
    if isinstance(a, Cyc) and a.is_rational():
        a = a.as_fraction()
    if not isinstance(a, Cyc):
        a = RAT(a)
    out = []
    apow = a ** 0
    for n in range(nmax + 1):
        out.append(binomial_coefficient(c, n) * (-1) ** n * apow)
        apow = apow * a
    return out


def series_mul(s1, s2, nmax: int):
    out = [0] * (nmax + 1)
    for i, x in enumerate(s1[: nmax + 1]):
        if x:
            for j, y in enumerate(s2[: nmax + 1 - i]):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def product_of_binomials(factors, nmax: int):
    """Expansion of prod (1 - a*u)^c over (c, a) pairs, to u^nmax."""
    out = [RAT(1)] + [0] * nmax
    for c, a in factors:
        out = series_mul(out, binomial_factor(c, a, nmax), nmax)
    return out


@lru_cache(maxsize=None)
def partitions(n: int):
    """All partitions of n as tuples of (part, multiplicity), parts distinct."""
    if n < 0:
        return ()
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for part in range(min(rest, maxpart), 0, -1):
            for mult in range(rest // part, 0, -1):
                acc.append((part, mult))
                rec(rest - part * mult, part - 1, acc)
                acc.pop()

    rec(n, n, [])
    return tuple(out)


# ---------------------------------------------------------------------------
# Fock spaces
# ---------------------------------------------------------------------------


class FockSpace:
    """States are (label, modes): a lattice label gamma and a multiset of
    creation modes (direction index, n > 0), stored sorted.

    gram:        pairing matrix on label coordinates (exact rationals)
    heis_dirs:   coordinate indices that carry Heisenberg modes
    mode_scale:  level factor in the contraction [a(n), b(-n)] = n*scale*(a,b)
    weight:      zeta-exponent carried per unit mode (m for principal fields)
    """

    def __init__(self, gram, heis_dirs, mode_scale=1, weight=1):
        self.gram = [list(row) for row in gram]
        self.dim = len(gram)
        self.heis_dirs = list(heis_dirs)
        self.mode_scale = (mode_scale if isinstance(mode_scale, int)
                           else RAT(mode_scale))
        self.weight = weight
        self._dir_pairs = {}

    def vacuum(self, label=None):
        if label is None:
            label = (0,) * self.dim
        return (tuple(label), ())

    def pair(self, u, v):
        g = self.gram
        tot = 0
        for i, ui in enumerate(u):
            if ui:
                row = g[i]
                for j, vj in enumerate(v):
                    if vj and row[j]:
                        tot += ui * row[j] * vj
        return tot

    def dir_vec(self, idx):
        return tuple(1 if i == idx else 0 for i in range(self.dim))

    def dir_pairs(self, vec):
        """Tuple of pairings of vec with each coordinate direction."""
        hit = self._dir_pairs.get(vec)
        if hit is None:
            g = self.gram
            hit = tuple(sum(ui * g[i][j] for i, ui in enumerate(vec) if ui)
                        for j in range(self.dim))
            self._dir_pairs[vec] = hit
        return hit

    def degree(self, state) -> Fraction:
        label, modes = state
        tot = sum(n for _, n in modes)
        return -self.weight * (Fraction(self.pair(label, label), 2) + tot)

    def support_norm(self, state) -> int:
        return sum(abs(c) for c in state[0])

    def shift_label(self, state, shift):
        label, modes = state
        return (tuple(a + b for a, b in zip(label, shift)), modes)

    def add_mode(self, state, dir_idx, n):
        label, modes = state
        return (label, tuple(sorted(modes + ((dir_idx, n),))))

    def annihilatable(self, state, vec) -> int:
        """Upper bound on the total annihilation index vec-modes can eat."""
        dp = self.dir_pairs(tuple(vec))
        return sum(n for d, n in state[1] if dp[d])

    # -- Heisenberg action -------------------------------------------------

    def heisenberg_act(self, vec, n: int, comb):
        """Apply the mode vec(n): create for n<0, read gamma for n=0,
        differentiate with the contraction factor for n>0."""
        out = {}
        if n == 0:
            dp = self.dir_pairs(tuple(vec))
            for state, c in comb.items():
                p = sum(dp[i] * li for i, li in enumerate(state[0]) if li)
                if p:
                    _acc(out, state, c * p)
            return out
        if n < 0:
            for state, c in comb.items():
                for d in self.heis_dirs:
                    vd = vec[d]
                    if vd:
                        _acc(out, self.add_mode(state, d, -n), c * vd)
            return out
        dp = self.dir_pairs(tuple(vec))
        for state, c in comb.items():
            label, modes = state
            seen = set()
            for i, (d, j) in enumerate(modes):
                if j != n or (d, j) in seen:
                    continue
                seen.add((d, j))
                p = dp[d]
                if not p:
                    continue
                mult = sum(1 for e in modes if e == (d, j))
                reduced = list(modes)
                reduced.pop(i)
                _acc(out, (label, tuple(reduced)),
                     c * (mult * n * self.mode_scale * p))
        return out


def _acc(out, key, val):
    prev = out.get(key)
    val = val if prev is None else prev + val
    if val:
        out[key] = val
    else:
        out.pop(key, None)


def comb_add(a, b):
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, v)
    return out


def comb_scale(a, c):
    if not c:
        return {}
    if isinstance(c, Cyc) and c.is_rational():
        c = c.as_fraction()
    if c == 1:
        return dict(a)
    return {k: v * c for k, v in a.items()}


def comb_sub(a, b):
    return comb_add(a, comb_scale(b, -1))


def comb_eq(a, b):
    return not comb_sub(a, b)


# ---------------------------------------------------------------------------
# fields (formal distributions with operator coefficients)
# ---------------------------------------------------------------------------


class GradedOperator:
    """A pure map state -> finite combination with a declared degree shift."""

    __slots__ = ("shift", "_fn", "_memo")

    def __init__(self, shift, fn):
        self.shift = shift
        self._fn = fn
        self._memo = {}

    def __call__(self, state):
        hit = self._memo.get(state)
        if hit is None:
            hit = self._fn(state)
            self._memo[state] = hit
        return hit


class FieldFamily:
    """Mode family of a formal distribution.

    Subclasses implement mode_state(n, state) and max_mode(state); modes
    above max_mode annihilate the state.  Results are memoized, which is
    what makes the bivariate sweeps affordable.
    """

    label = "field"
    shift = None  # label shift per mode, when the field has one

    def __init__(self):
        self._memo = {}

    def mode_state(self, n, state):
        raise NotImplementedError

    def max_mode(self, state):
        raise NotImplementedError

    def mode_memo(self, n, state):
        key = (n, state)
        hit = self._memo.get(key)
        if hit is None:
            hit = {} if n > self.max_mode(state) else self.mode_state(n, state)
            self._memo[key] = hit
        return hit

    def mode(self, n, comb):
        out = {}
        for state, c in comb.items():
            for k, v in self.mode_memo(n, state).items():
                _acc(out, k, v * c)
        return out

    def operator(self, n) -> GradedOperator:
        return GradedOperator(n, lambda state: self.mode(n, {state: RAT(1)}))


class ZeroField(FieldFamily):
    label = "0"

    def mode_state(self, n, state):
        return {}

    def max_mode(self, state):
        return 0


class IdentityField(FieldFamily):
    """Only mode 0 acts, as the identity."""

    label = "id"

    def __init__(self, dim=None):
        super().__init__()
        if dim is not None:
            self.shift = (0,) * dim

    def mode_state(self, n, state):
        return {state: RAT(1)} if n == 0 else {}

    def max_mode(self, state):
        return 0


class ScaledField(FieldFamily):
    def __init__(self, base, coeff):
        super().__init__()
        self.base = base
        self.coeff = coeff if isinstance(coeff, Cyc) else RAT(coeff)
        self.shift = base.shift
        self.label = base.label

    def mode_state(self, n, state):
        return comb_scale(self.base.mode_state(n, state), self.coeff)

    def max_mode(self, state):
        return self.base.max_mode(state)


class SumField(FieldFamily):
    def __init__(self, parts):
        super().__init__()
        self.parts = list(parts)
        self.shift = self.parts[0].shift
        self.label = "+".join(p.label for p in self.parts)

    def mode_state(self, n, state):
        out = {}
        for p in self.parts:
            out = comb_add(out, p.mode_memo(n, state))
        return out

    def max_mode(self, state):
        return max(p.max_mode(state) for p in self.parts)


class DerivativeField(FieldFamily):
    """D f for D = zeta d/dzeta: mode n scaled by n."""

    def __init__(self, base):
        super().__init__()
        self.base = base
        self.shift = base.shift
        self.label = "D" + base.label

    def mode_state(self, n, state):
        if not n:
            return {}
        return comb_scale(self.base.mode_state(n, state), n)

    def max_mode(self, state):
        return self.base.max_mode(state)


class ComposedField(FieldFamily):
    """f(z) g(z) as a single field: mode n = sum_q f_(n-q) g_q.

    cap_fn(state) must bound f.max_mode over every state that g can
    produce from the input state; it makes the q-sum finite from below.
    """

    def __init__(self, f, g, cap_fn=None):
        super().__init__()
        self.f = f
        self.g = g
        self.cap_fn = cap_fn
        if f.shift is not None and g.shift is not None:
            self.shift = tuple(a + b for a, b in zip(f.shift, g.shift))
        self.label = f.label + "*" + g.label

    def max_mode(self, state):
        cap = self.cap_fn(state) if self.cap_fn else self.f.max_mode(state)
        return cap + self.g.max_mode(state)

    def mode_state(self, n, state):
        cap = self.cap_fn(state) if self.cap_fn else self.f.max_mode(state)
        out = {}
        for q in range(n - cap, self.g.max_mode(state) + 1):
            mid = self.g.mode_memo(q, state)
            if mid:
                out = comb_add(out, self.f.mode(n - q, mid))
        return out


class ProductField(FieldFamily):
    """Same-variable product f(z) g(z), optionally times a scalar.

    The mode sum is made finite with the cap rule: f's max_mode over any
    state g produces is bounded by f's max_mode on the label-shifted
    input.  That holds whenever g only removes modes or creates modes
    pairing to zero with f's annihilation directions, which is true for
    every dressing/vertex field combined here.
    """

    def __init__(self, f, g, scale=None, label=None):
        super().__init__()
        self.f = f
        self.g = g
        self.scale = scale
        self.shift = tuple(a + b for a, b in zip(f.shift, g.shift))
        self.label = label or (f.label + "*" + g.label)

    def _fcap(self, state):
        mid = (tuple(a + b for a, b in zip(state[0], self.g.shift)), state[1])
        return self.f.max_mode(mid)

    def max_mode(self, state):
        return self._fcap(state) + self.g.max_mode(state)

    def mode_state(self, n, state):
        out = {}
        for q in range(n - self._fcap(state), self.g.max_mode(state) + 1):
            mid = self.g.mode_memo(q, state)
            if mid:
                out = comb_add(out, self.f.mode(n - q, mid))
        if self.scale is not None:
            out = comb_scale(out, self.scale)
        return out


class HeisenbergField(FieldFamily):
    """vec(z) = sum_n vec(n) z^(weight*n) on a FockSpace."""

    def __init__(self, space: FockSpace, vec, label="h"):
        super().__init__()
        self.space = space
        self.vec = tuple(vec)
        self.shift = (0,) * space.dim
        self.label = label

    def max_mode(self, state):
        return self.space.weight * self.space.annihilatable(state, self.vec)

    def mode_state(self, n, state):
        w = self.space.weight
        if n % w:
            return {}
        return self.space.heisenberg_act(self.vec, n // w, {state: RAT(1)})


class ExpField(FieldFamily):
    """exp(c * sum_(j>0) vec(sign*j) z^(sign*weight*j) / j) on a FockSpace.

    sign=-1 is a pure creation series (modes at nonpositive exponents);
    sign=+1 is pure annihilation (modes bounded by what the state can
    absorb in pairable directions).
    """

    def __init__(self, space: FockSpace, vec, c, sign: int, label="E"):
        super().__init__()
        self.space = space
        self.vec = tuple(vec)
        self.c = RAT(c)
        self.sign = 1 if sign > 0 else -1
        self.shift = (0,) * space.dim
        self.label = label

    def max_mode(self, state):
        if self.sign < 0:
            return 0
        return self.space.weight * self.space.annihilatable(state, self.vec)

    def mode_state(self, n, state):
        w = self.space.weight
        sign = self.sign
        if n % w or sign * n < 0:
            return {}
        total = sign * n // w
        if total == 0:
            return {state: RAT(1)}
        # t F_t = c sum_{j=1..t} a(sign j) F_{t-j}  (the modes commute)
        acc = {}
        for j in range(1, total + 1):
            prev = self.mode_memo(sign * (total - j) * w, state)
            if prev:
                acc = comb_add(acc, self.space.heisenberg_act(self.vec, sign * j, prev))
        return comb_scale(acc, self.c / total)


def dressing_operator(space: FockSpace, sign: int, vec, k, m=1, label=None):
    """E^sign(beta, z) of the category bridge: exponent coefficient m/k
    with creation at negative and annihilation at positive powers."""
    if isinstance(k, Cyc):
        k = k.as_fraction()
    if not k:
        raise ValueError("dressing operators need a nonzero level k")
    c = RAT(m) / RAT(k)
    name = label or ("E+" if sign > 0 else "E-")
    return ExpField(space, vec, (c if sign > 0 else -c), sign, label=name)


# ---------------------------------------------------------------------------
# bivariate products and the generic delta-relation checker
# ---------------------------------------------------------------------------


def field_product(f: FieldFamily, g: FieldFamily, a: int, b: int, comb):
    """Coefficient at z1^a z2^b of f(z1) g(z2), applied to a combination."""
    return f.mode(a, g.mode(b, comb))


@dataclass
class DeltaTerm:
    """coeff * (D^use_D delta)(a z1/z2) * h(z2) with h a field in z2."""

    coeff: Cyc
    a: Cyc
    field: FieldFamily
    use_D: bool = False


class DeltaRelation:
    """prod_p (1 - a_p z1/z2)^(c_p) f(z1) g(z2)
       - prod_p (1 - a_p z2/z1)^(c_p) g(z2) f(z1)  =  sum of DeltaTerms.

    factors: list of (c_p exact rational, a_p Cyc); the mirrored product
    uses the same data with z1 and z2 exchanged, which is the expansion
    region convention for reversed operator order.
    """

    def __init__(self, f, g, factors, rhs_terms):
        self.f = f
        self.g = g
        self.factors = [(RAT(c), a if isinstance(a, Cyc) else RAT(a))
                        for c, a in factors]
        self.rhs_terms = rhs_terms
        self._coef = []
        self._apow = {}

    def cutoff(self, state):
        """Bound C with: every coefficient at z1^a z2^b with a + b > C is
        zero on this state, on both sides.  Needs .shift on both fields."""
        caps = [t.field.max_mode(state) for t in self.rhs_terms]
        for first, second in ((self.f, self.g), (self.g, self.f)):
            mid = (tuple(x + y for x, y in zip(state[0], second.shift)), state[1])
            caps.append(first.max_mode(mid) + second.max_mode(state))
        return max(caps)

    def _coefs(self, nmax):
        if nmax >= len(self._coef):
            self._coef = product_of_binomials(self.factors, nmax + 8)
        return self._coef

    def lhs_coeff(self, a, b, state):
        nmax1 = max(self.g.max_mode(state) - b, -1)
        out = {}
        if nmax1 >= 0:
            coef = self._coefs(nmax1)
            for n in range(nmax1 + 1):
                if coef[n]:
                    mid = self.g.mode_memo(b + n, state)
                    if mid:
                        out = comb_add(out, comb_scale(self.f.mode(a - n, mid), coef[n]))
        nmax2 = max(self.f.max_mode(state) - a, -1)
        if nmax2 >= 0:
            coef = self._coefs(nmax2)
            for n in range(nmax2 + 1):
                if coef[n]:
                    mid = self.f.mode_memo(a + n, state)
                    if mid:
                        out = comb_sub(out, comb_scale(self.g.mode(b - n, mid), coef[n]))
        return out

    def rhs_coeff(self, a, b, state):
        out = {}
        for term in self.rhs_terms:
            if a + b > term.field.max_mode(state):
                continue
            c = term.coeff * term.a ** a
            if term.use_D:
                c = c * a
            if c:
                out = comb_add(out, comb_scale(term.field.mode_memo(a + b, state), c))
        return out

    def _delta_coeff(self, ti, term, a):
        key = (ti, a)
        hit = self._apow.get(key)
        if hit is None:
            hit = term.coeff * term.a ** a
            if term.use_D:
                hit = hit * a
            self._apow[key] = hit
        return hit

    def check_state(self, a, b, state):
        """(ok, witness) for the coefficient at z1^a z2^b on one state."""
        diff = {}
        nmax1 = self.g.max_mode(state) - b
        if nmax1 >= 0:
            coef = self._coefs(nmax1)
            fmode = self.f.mode_memo
            for n in range(nmax1 + 1):
                cn = coef[n]
                if cn:
                    mid = self.g.mode_memo(b + n, state)
                    an = a - n
                    for w, cw in mid.items():
                        res = fmode(an, w)
                        if res:
                            cc = cw if cn == 1 else cw * cn
                            for k, v in res.items():
                                _acc(diff, k, v * cc)
        nmax2 = self.f.max_mode(state) - a
        if nmax2 >= 0:
            coef = self._coefs(nmax2)
            gmode = self.g.mode_memo
            for n in range(nmax2 + 1):
                cn = coef[n]
                if cn:
                    mid = self.f.mode_memo(a + n, state)
                    bn = b - n
                    for w, cw in mid.items():
                        res = gmode(bn, w)
                        if res:
                            cc = -cw if cn == 1 else -cw * cn
                            for k, v in res.items():
                                _acc(diff, k, v * cc)
        s = a + b
        for ti, term in enumerate(self.rhs_terms):
            if s > term.field.max_mode(state):
                continue
            c = self._delta_coeff(ti, term, a)
            if c:
                for k, v in term.field.mode_memo(s, state).items():
                    _acc(diff, k, -(v * c))
        if not diff:
            return True, None
        return False, {"state": state, "modes": (a, b),
                       "difference": sorted((repr(k), repr(v)) for k, v in diff.items())}

    def check_window(self, W, state):
        """Check every coefficient cell |a|, |b| <= W on one state.

        Equivalent to check_state over the grid, but the cell products
        f_p(g_q(v)) on each anti-diagonal p + q = a + b are merged once
        and reused across the cells that share them.
        """
        cut = min(2 * W, self.cutoff(state))
        gmax = self.g.max_mode(state)
        fmax = self.f.max_mode(state)
        fmode = self.f.mode_memo
        gmode = self.g.mode_memo
        for S in range(-2 * W, cut + 1):
            amin = max(-W, S - W)
            amax = min(W, S + W)
            p1lo = S - gmax
            coef = self._coefs(max(amax - p1lo, fmax - amin, 0))
            cells1 = []
            for p in range(p1lo, amax + 1):
                mid = gmode(S - p, state)
                if not mid:
                    continue
                acc = {}
                for w, cw in mid.items():
                    res = fmode(p, w)
                    if res:
                        for k, v in res.items():
                            prev = acc.get(k)
                            vv = v * cw
                            acc[k] = vv if prev is None else prev + vv
                items = tuple((k, v) for k, v in acc.items() if v)
                if items:
                    cells1.append((p, items))
            cells2 = []
            for p in range(amin, fmax + 1):
                mid = fmode(p, state)
                if not mid:
                    continue
                acc = {}
                for w, cw in mid.items():
                    res = gmode(S - p, w)
                    if res:
                        for k, v in res.items():
                            prev = acc.get(k)
                            vv = v * cw
                            acc[k] = vv if prev is None else prev + vv
                items = tuple((k, v) for k, v in acc.items() if v)
                if items:
                    cells2.append((p, items))
            rhs_cells = []
            for ti, term in enumerate(self.rhs_terms):
                if S <= term.field.max_mode(state):
                    cell = term.field.mode_memo(S, state)
                    if cell:
                        rhs_cells.append((ti, term, tuple(cell.items())))
            if not (cells1 or cells2 or rhs_cells):
                continue
            for a in range(amin, amax + 1):
                diff = {}
                dget = diff.get
                for p, items in cells1:
                    if p > a:
                        break
                    cn = coef[a - p]
                    if cn:
                        for k, v in items:
                            prev = dget(k)
                            vv = v * cn
                            diff[k] = vv if prev is None else prev + vv
                for p, items in cells2:
                    if p >= a:
                        cn = coef[p - a]
                        if cn:
                            for k, v in items:
                                prev = dget(k)
                                vv = -v * cn
                                diff[k] = vv if prev is None else prev + vv
                for ti, term, items in rhs_cells:
                    c = self._delta_coeff(ti, term, a)
                    if c:
                        for k, v in items:
                            prev = dget(k)
                            vv = -(v * c)
                            diff[k] = vv if prev is None else prev + vv
                if any(diff.values()):
                    bad = {k: v for k, v in diff.items() if v}
                    return False, {"state": state, "modes": (a, S - a),
                                   "difference": sorted((repr(k), repr(v))
                                                        for k, v in bad.items())}
        return True, None


# ---------------------------------------------------------------------------
# delta-function identities (formal-calculus substitution rules)
# ---------------------------------------------------------------------------


def delta_mul(a: Cyc, f: dict, window: int, derivative: bool = False):
    """Both sides of the substitution identity for delta(a z1/z2) * f.

    f maps (i, j) -> Cyc with finite support (finite support satisfies
    the one-sided condition trivially).  Returns (lhs, rhs) coefficient
    maps over |modes| <= window; with derivative=True the identity is the
    D-delta version, whose right side carries the extra substituted
    z2-derivative term.
    """
    if not isinstance(a, Cyc):
        a = Cyc.rational(a)
    if not f:
        return {}, {}
    if not a:
        raise ValueError("delta substitution needs a nonzero scale")
    ainv = a.inv()
    # collapsed univariate g_t = sum_j a^j f[t-j, j]   (f at (z1, a z1))
    g = {}
    g2 = {}  # D_2 f at (z1, a z1): extra factor j
    for (i, j), c in f.items():
        t = i + j
        val = c * a ** j
        prev = g.get(t)
        g[t] = val if prev is None else prev + val
        if j:
            prev = g2.get(t)
            v2 = val * j
            g2[t] = v2 if prev is None else prev + v2
    lhs = {}
    rhs = {}
    for A in range(-window, window + 1):
        for B in range(-window, window + 1):
            # product with the full delta / D-delta series
            tot = Cyc.zero()
            for (i, j), c in f.items():
                k = A - i
                if B - j != -k:
                    continue
                w = a ** k if k >= 0 else ainv ** (-k)
                if derivative:
                    w = w * k
                tot = tot + c * w
            if tot:
                lhs[(A, B)] = tot
            # substituted side: the ratio delta(a z1/z2) contributes a^(-B)
            # against the pure-z1 function f(z1, a z1)
            t = A + B
            w = ainv ** B if B >= 0 else a ** (-B)
            if derivative:
                val = g.get(t, Cyc.zero()) * w * (-B) + g2.get(t, Cyc.zero()) * w
            else:
                val = g.get(t, Cyc.zero()) * w
            if val:
                rhs[(A, B)] = val
    return lhs, rhs
