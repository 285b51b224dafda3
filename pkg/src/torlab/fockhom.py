"""Homogeneous Fock-space realization (untwisted, level 1).

V(Gamma) = S(h^-) (x) C[Gamma] over the extended lattice Gamma: states
are a lattice label together with creation modes in the root and delta
directions.  The d-directions carry no modes; they only appear in
labels, which is what makes the k-fields nontrivial.

Operator conventions (see also the mode convention in toroidal):
  X(delta_r, z)  = E^-(delta_r, z) e^{delta_r} z^{-delta_r(0)} E^+,
                   with E^- = exp(+ sum_{n>0} delta_r(-n) z^{-n}/n);
                   E^+ acts as the identity here.
  k_0(r, z)      = X(delta_r, z)
  k_i(r, z)      = delta_i(z) X(delta_r, z)
  Z(a, 0, z)     = eps(a, .) e^a z^{-1-(a, .)}   (pure lattice operator)
  Z(a, r, z)     = Z(a, 0, z) k_0(r, z)
  beta(r, z)     = beta(z) k_0(r, z)             (level k = 1)
The z^{-...} exponents read the shifted label, which keeps degrees
bounded above and makes [d_0, F] = DF exact.
"""

from __future__ import annotations

from fractions import Fraction

from .distops import (DeltaRelation, DeltaTerm, ExpField, FieldFamily,
                      FockSpace, ProductField, TruncationWindow, comb_add,
                      comb_scale, comb_sub, partitions)
from .rootsys import ChevalleyAlgebra, GElement, Lattice, RootSystem
from .scalar import Cyc


class HomogeneousModule:
    """The Fock module V(Gamma) with its field dictionary."""

    def __init__(self, rs: RootSystem, N: int):
        self.rs = rs
        self.N = N
        self.lat = Lattice(rs, N)
        self.alg = ChevalleyAlgebra(rs, self.lat)
        heis = list(range(rs.rank + N))
        self.space = FockSpace(self.lat.gram, heis, mode_scale=Fraction(1), weight=1)
        self._fields = {}

    def vacuum(self, label=None):
        return self.space.vacuum(label)

    # cached field constructors -------------------------------------------

    def k0(self, rvec):
        key = ("k0", tuple(rvec))
        if key not in self._fields:
            self._fields[key] = VertexXField(self, rvec)
        return self._fields[key]

    def k(self, i, rvec):
        key = ("k", i, tuple(rvec))
        if key not in self._fields:
            dv = self.lat.delta(tuple(1 if j == i else 0 for j in range(self.N)))
            self._fields[key] = HeisTimesK0Field(self, dv, rvec,
                                                 label="k%d" % (i + 1))
        return self._fields[key]

    def z(self, alpha, rvec):
        key = ("z", tuple(alpha), tuple(rvec))
        if key not in self._fields:
            self._fields[key] = ZField(self, alpha, rvec)
        return self._fields[key]

    def heis(self, vec, rvec):
        """beta(r, z) = beta(z) k_0(r, z) for beta in the Cartan span."""
        key = ("b", tuple(vec), tuple(rvec))
        if key not in self._fields:
            self._fields[key] = HeisTimesK0Field(self, vec, rvec, label="beta")
        return self._fields[key]


class VertexXField(FieldFamily):
    """X(delta_r, z): shifts the label by delta_r, multiplies the
    z-exponent -(delta_r, label), and dresses with the E^- series."""

    def __init__(self, mod: HomogeneousModule, rvec):
        super().__init__()
        self.mod = mod
        self.vec = mod.lat.delta(rvec)
        self.shift = self.vec
        self.label = "k0" + repr(tuple(rvec))
        self.em = ExpField(mod.space, self.vec, Fraction(1), -1)
        self._base = {}

    def base(self, label):
        hit = self._base.get(label)
        if hit is None:
            hit = -int(self.mod.space.pair(self.vec, label))
            self._base[label] = hit
        return hit

    def max_mode(self, state):
        return self.base(state[0])

    def mode_state(self, n, state):
        e = self.base(state[0])
        if n > e:
            return {}
        shifted = self.mod.space.shift_label(state, self.vec)
        return self.em.mode_memo(n - e, shifted)


class HeisTimesK0Field(FieldFamily):
    """vec(z) X(delta_r, z): the k_i fields (vec = delta_i) and the
    dressed Cartan fields beta(r, z) (level 1)."""

    def __init__(self, mod: HomogeneousModule, vec, rvec, label="k"):
        super().__init__()
        self.mod = mod
        self.vec = tuple(vec)
        self.x = mod.k0(rvec)
        self.shift = self.x.shift
        self.label = label + repr(tuple(rvec))

    def _pmax(self, state):
        # X creates only delta-direction modes, which pair to zero with
        # any Cartan vector, so annihilation is bounded by the input state
        return self.mod.space.annihilatable(state, self.vec)

    def max_mode(self, state):
        return self._pmax(state) + self.x.max_mode(state)

    def mode_state(self, n, state):
        space = self.mod.space
        out = {}
        xmax = self.x.max_mode(state)
        for p in range(n - xmax, self._pmax(state) + 1):
            mid = self.x.mode_memo(n - p, state)
            if mid:
                out = comb_add(out, space.heisenberg_act(self.vec, p, mid))
        return out


class ZField(FieldFamily):
    """Z(alpha, r, z) = Z(alpha, 0, z) k_0(r, z); the alpha-part is a pure
    lattice operator, so each input state meets exactly one split."""

    def __init__(self, mod: HomogeneousModule, alpha, rvec):
        super().__init__()
        self.mod = mod
        self.alpha = tuple(alpha)
        self.avec = mod.lat.embed_root(alpha)
        self.x = mod.k0(rvec)
        self.shift = tuple(a + b for a, b in zip(self.avec, self.x.shift))
        self.label = "Z" + repr(self.alpha) + repr(tuple(rvec))
        self._half = int(mod.space.pair(self.avec, self.avec)) // 2
        self._zexp = {}

    def zexp(self, label):
        # z-exponent of the lattice part, reading the post-shift label
        hit = self._zexp.get(label)
        if hit is None:
            hit = -int(self.mod.space.pair(self.avec, label)) - self._half
            self._zexp[label] = hit
        return hit

    def max_mode(self, state):
        return self.zexp(state[0]) + self.x.max_mode(state)

    def mode_state(self, n, state):
        e = self.zexp(state[0])  # (alpha, delta_r) = 0: label shift is invisible
        mid = self.x.mode_memo(n - e, state)
        if not mid:
            return {}
        sign = self.mod.lat.eps(self.avec, state[0])
        out = {}
        for (label, modes), c in mid.items():
            key = (tuple(a + b for a, b in zip(label, self.avec)), modes)
            out[key] = c if sign > 0 else -c
        return out


class ZeroModeTimesField(FieldFamily):
    """vec(0) applied after a base field (used by the Cartan delta-term)."""

    def __init__(self, space, vec, base):
        super().__init__()
        self.space = space
        self.vec = tuple(vec)
        self.base = base
        self.shift = base.shift
        self.label = "h0*" + base.label

    def max_mode(self, state):
        return self.base.max_mode(state)

    def mode_state(self, n, state):
        return self.space.heisenberg_act(self.vec, 0, self.base.mode_memo(n, state))


# ---------------------------------------------------------------------------
# spec-facing wrappers
# ---------------------------------------------------------------------------


def heisenberg_act(mod: HomogeneousModule, vec, n, comb):
    return mod.space.heisenberg_act(vec, n, comb)

def vertex_X(mod: HomogeneousModule, rvec) -> VertexXField:
    return mod.k0(rvec)


def z_operator_hom(mod: HomogeneousModule, alpha, rvec) -> ZField:
    return mod.z(alpha, rvec)


# ---------------------------------------------------------------------------
# window-state enumeration
# ---------------------------------------------------------------------------


def _l1_ball(dim, radius):
    if dim == 0:
        yield ()
        return
    for c in range(-radius, radius + 1):
        for rest in _l1_ball(dim - 1, radius - abs(c)):
            yield (c,) + rest


def _mode_multisets(dirs, total):
    if not dirs:
        if total == 0:
            yield ()
        return
    d = dirs[0]
    for t0 in range(total + 1):
        for lam in partitions(t0):
            head = tuple(sorted((d, part) for part, mult in lam
                                for _ in range(mult)))
            for rest in _mode_multisets(dirs[1:], total - t0):
                yield tuple(sorted(head + rest))


def window_states(space: FockSpace, window: TruncationWindow):
    """All states with label L1-norm <= support and degree >= -degree."""
    out = []
    for label in _l1_ball(space.dim, window.support):
        cap = (Fraction(window.degree, space.weight)
               - Fraction(space.pair(label, label), 2))
        if cap < 0:
            continue
        for total in range(int(cap) + 1):
            for modes in _mode_multisets(tuple(space.heis_dirs), total):
                out.append((tuple(label), modes))
    return out


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------


def _record(entries, rel, params, ok, witness=None):
    entries.append((rel, params, "pass" if ok else "fail", witness))


def _fields_equal(f, g, states, lo, hi, scale=None):
    """Mode-by-mode equality of two fields over given states and modes."""
    for v in states:
        for n in range(lo, hi + 1):
            a = f.mode_memo(n, v)
            if scale is not None:
                a = comb_scale(a, scale)
            b = g.mode_memo(n, v)
            diff = comb_sub(a, b)
            if diff:
                return False, {"state": v, "mode": n,
                               "difference": sorted((repr(k), repr(c))
                                                    for k, c in diff.items())}
    return True, None


def pair_relation(mod: HomogeneousModule, b1, b2, rvec, svec) -> DeltaRelation:
    """The quadratic Z-operator relation for a root pair, untwisted form."""
    space = mod.space
    f = mod.z(b1, rvec)
    g = mod.z(b2, svec)
    ip = mod.rs.form(b1, b2)
    rhs = []
    tot = tuple(a + b for a, b in zip(rvec, svec))
    s = tuple(a + b for a, b in zip(b1, b2))
    if s in mod.rs.root_set:
        rhs.append(DeltaTerm(Cyc.rational(mod.alg.eps_roots(b1, b2)),
                             Cyc.one(), mod.z(s, tot)))
    if not any(s):
        fxx = mod.alg.form(GElement.x(b2), GElement.x(tuple(-c for c in b2)))
        b2vec = mod.lat.embed_root(b2)
        rhs.append(DeltaTerm(-fxx, Cyc.one(),
                             ZeroModeTimesField(space, b2vec, mod.k0(tot))))
        if any(rvec):
            # sum_i r_i k_i(r+s, z) packaged as (delta_r)(z) X(delta_{r+s}, z)
            rhs.append(DeltaTerm(fxx, Cyc.one(),
                                 HeisTimesK0Field(mod, mod.lat.delta(rvec), tot, "rk")))
        rhs.append(DeltaTerm(fxx, Cyc.one(), mod.k0(tot), use_D=True))
    return DeltaRelation(f, g, [(Fraction(ip), Cyc.one())], rhs)


def verify_33(mod: HomogeneousModule, window: TruncationWindow,
              root_pairs=None, rvecs=None, states=None, entries=None):
    """Sweep the quadratic relation over root pairs, multidegrees, window
    states and mode pairs; every coefficient is compared exactly."""
    if entries is None:
        entries = []
    if root_pairs is None:
        root_pairs = [(a, b) for a in mod.rs.roots for b in mod.rs.roots]
    if rvecs is None:
        rvecs = _default_rvecs(mod.N)
    if states is None:
        states = window_states(mod.space, window)
    W = window.modes
    for b1, b2 in root_pairs:
        for rvec in rvecs:
            for svec in rvecs:
                rel = pair_relation(mod, b1, b2, rvec, svec)
                ok = True
                witness = None
                for v in states:
                    good, w = rel.check_window(W, v)
                    if not good:
                        ok, witness = False, w
                        break
                _record(entries, "zhom.pair",
                        {"b1": list(b1), "b2": list(b2),
                         "r": list(rvec), "s": list(svec)}, ok, witness)
    return entries


def _default_rvecs(N):
    out = [(0,) * N]
    for i in range(N):
        for sgn in (1, -1):
            out.append(tuple(sgn if j == i else 0 for j in range(N)))
    return out


def verify_center_hom(mod: HomogeneousModule, window: TruncationWindow,
                      rvecs=None, states=None, entries=None):
    """D k_0(r, z) + sum_i r_i k_i(r, z) = 0, plus k_i nontriviality and
    the k-field product factorizations."""
    if entries is None:
        entries = []
    if rvecs is None:
        rvecs = _default_rvecs(mod.N)
    if states is None:
        states = window_states(mod.space, window)
    W = window.modes
    for rvec in rvecs:
        k0 = mod.k0(rvec)
        ok = True
        witness = None
        for v in states:
            for n in range(-W, k0.max_mode(v) + 1):
                acc = comb_scale(k0.mode_memo(n, v), n)
                for i in range(mod.N):
                    if rvec[i]:
                        ki = mod.k(i, rvec)
                        acc = comb_add(acc, comb_scale(ki.mode_memo(n, v), rvec[i]))
                if acc:
                    ok, witness = False, {"state": v, "mode": n}
                    break
            if not ok:
                break
        _record(entries, "zhom.center", {"r": list(rvec)}, ok, witness)
    # nontriviality: each k_i has a nonzero mode on some window state
    for i in range(mod.N):
        ki = mod.k(i, (0,) * mod.N)
        hit = any(ki.mode_memo(n, v)
                  for v in states for n in range(-W, ki.max_mode(v) + 1))
        _record(entries, "zhom.k_nontrivial", {"i": i + 1}, hit)
    return entries


def verify_products_hom(mod: HomogeneousModule, window: TruncationWindow,
                        alpha=None, rvecs=None, states=None, entries=None):
    """Factorization through k_0: Z(a, r, z) k_0(s, z) = Z(a, r+s, z) and
    k_0(r, z) k_i(s, z) = k_i(r+s, z), as same-variable mode identities."""
    if entries is None:
        entries = []
    if rvecs is None:
        rvecs = _default_rvecs(mod.N)
    if states is None:
        states = window_states(mod.space, window)
    if alpha is None:
        alpha = mod.rs.roots[-1]
    W = window.modes
    for rvec in rvecs:
        for svec in rvecs:
            tot = tuple(a + b for a, b in zip(rvec, svec))
            zc = _compose(mod.z(alpha, rvec), mod.k0(svec), mod.space)
            ok, witness = _fields_equal(zc, mod.z(alpha, tot), states, -W, W)
            _record(entries, "zhom.prod_zk0",
                    {"a": list(alpha), "r": list(rvec), "s": list(svec)}, ok, witness)
            kc = _compose(mod.k0(rvec), mod.k(0, svec), mod.space)
            ok, witness = _fields_equal(kc, mod.k(0, tot), states, -W, W)
            _record(entries, "zhom.prod_k0k",
                    {"i": 1, "r": list(rvec), "s": list(svec)}, ok, witness)
    return entries


class _compose(ProductField):
    """Same-variable product f(z) g(z) (kept for backward compatibility)."""

    def __init__(self, f, g, space):
        super().__init__(f, g)
