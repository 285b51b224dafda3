import random
from fractions import Fraction

from torlab.distops import (DeltaRelation, TruncationWindow, comb_eq,
                            comb_scale, comb_sub)
from torlab.fockhom import (HomogeneousModule, _compose, pair_relation,
                            verify_33, verify_center_hom, verify_products_hom,
                            vertex_X, window_states, z_operator_hom)
from torlab.rootsys import build_root_system
from torlab.scalar import Cyc


def _a1():
    return HomogeneousModule(build_root_system("A", 1), 1)


def _a2():
    return HomogeneousModule(build_root_system("A", 2), 1)


def test_window_states_shape():
    mod = _a1()
    win = TruncationWindow(2, 2, 1)
    states = window_states(mod.space, win)
    assert mod.vacuum() in states
    assert len(states) == len(set(states))
    for s in states:
        assert mod.space.support_norm(s) <= 1
        assert mod.space.degree(s) >= -2


def test_k0_vacuum_modes():
    mod = _a1()
    vac = mod.vacuum()
    k0 = mod.k0((1,))
    # on the vacuum the exponent is 0: modes <= 0, mode 0 shifts the label
    assert k0.max_mode(vac) == 0
    dvec = mod.lat.delta((1,))
    shifted = mod.space.shift_label(vac, dvec)
    assert comb_eq(k0.mode_memo(0, vac), {shifted: Cyc.one()})
    # mode -1 creates delta(-1) on the shifted label
    didx = mod.rs.rank  # coordinate of delta_1
    assert comb_eq(k0.mode_memo(-1, vac),
                   {mod.space.add_mode(shifted, didx, 1): Cyc.one()})


def test_z_vacuum_mode():
    mod = _a1()
    vac = mod.vacuum()
    a = mod.rs.roots[-1]
    z = mod.z(a, (0,))
    assert z.max_mode(vac) == -1
    out = z.mode_memo(-1, vac)
    assert comb_eq(out, {(mod.lat.embed_root(a), ()): Cyc.one()})
    assert z.mode_memo(0, vac) == {}


def test_field_modes_shift_degree():
    """[d_0, F] = DF: mode n changes the state degree by exactly n."""
    mod = _a2()
    states = window_states(mod.space, TruncationWindow(2, 2, 1))
    rng = random.Random(7)
    fields = [mod.k0((1,)), mod.k(0, (-1,)), mod.z(mod.rs.roots[0], (1,)),
              mod.heis(mod.lat.embed_root(mod.rs.roots[2]), (0,))]
    for f in fields:
        for _ in range(30):
            v = states[rng.randrange(len(states))]
            n = rng.randint(-3, 3)
            for s in f.mode_memo(n, v):
                assert mod.space.degree(s) == mod.space.degree(v) + n


def test_d_i_eigenvalue_shift():
    """[d_1, F(r)] = r_1 F(r): the label's delta-coordinate moves by r_1."""
    mod = _a1()
    didx = mod.rs.rank
    states = window_states(mod.space, TruncationWindow(2, 2, 1))
    for rvec in [(1,), (-1,), (0,)]:
        for f in (mod.k0(rvec), mod.z(mod.rs.roots[0], rvec)):
            for v in states[:40]:
                for n in range(-2, 1):
                    for s in f.mode_memo(n, v):
                        assert s[0][didx] - v[0][didx] == rvec[0]


def test_zero_mode_bracket_with_z():
    """[a(0), Z(b, r, z)] = (a, b) Z(b, r, z) for Cartan a."""
    mod = _a2()
    states = window_states(mod.space, TruncationWindow(2, 2, 1))
    b = mod.rs.roots[1]
    z = mod.z(b, (1,))
    for a in (mod.rs.simple_roots[0], mod.rs.simple_roots[1]):
        avec = mod.lat.embed_root(a)
        ip = mod.rs.form(a, b)
        for v in states[:30]:
            comb = {v: Cyc.one()}
            for n in range(-2, z.max_mode(v) + 1):
                lhs = comb_sub(
                    mod.space.heisenberg_act(avec, 0, z.mode_memo(n, v)),
                    z.mode(n, mod.space.heisenberg_act(avec, 0, comb)))
                rhs = comb_scale(z.mode_memo(n, v), ip)
                assert comb_eq(lhs, rhs)


def test_k_fields_central():
    mod = _a1()
    states = window_states(mod.space, TruncationWindow(2, 2, 1))
    k = mod.k(0, (1,))
    z = mod.z(mod.rs.roots[0], (-1,))
    rel = DeltaRelation(k, z, [], [])
    for v in states[:25]:
        for a in range(-2, 3):
            for b in range(-2, 3):
                ok, w = rel.check_state(a, b, v)
                assert ok, w


def test_product_factorizations():
    mod = _a1()
    win = TruncationWindow(2, 2, 1)
    entries = verify_products_hom(mod, win)
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]


def test_center_and_nontriviality():
    mod = _a1()
    entries = verify_center_hom(mod, TruncationWindow(2, 2, 1))
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]
    assert any(e[0] == "zhom.k_nontrivial" for e in entries)


def test_pair_relation_small_window():
    mod = _a1()
    win = TruncationWindow(2, 2, 1)
    a = mod.rs.roots[-1]
    na = mod.rs.roots[0]
    pairs = [(a, a), (a, na), (na, a)]
    entries = verify_33(mod, win, root_pairs=pairs,
                        rvecs=[(0,), (1,)])
    assert len(entries) == 3 * 4
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]


def test_wrappers():
    mod = _a1()
    assert vertex_X(mod, (1,)) is mod.k0((1,))
    assert z_operator_hom(mod, mod.rs.roots[0], (0,)) is mod.z(mod.rs.roots[0], (0,))
