from fractions import Fraction

import pytest

from torlab.distops import (DeltaRelation, IdentityField, ScaledField,
                            TruncationWindow, comb_add, comb_scale, comb_sub,
                            dressing_operator)
from torlab.fockhom import HomogeneousModule, window_states
from torlab.rootsys import build_root_system
from torlab.scalar import Cyc
from torlab.zbridge import (CkModule, HeisenbergVerma, TwistData, check_Ck,
                            from_Zmodule, homogeneous_Ck, omega_basis,
                            roundtrip_check, to_Zmodule, verify_Zk_relations,
                            verma_bracket_check)


def _v(rs_type="A", rank=1):
    return homogeneous_Ck(HomogeneousModule(build_root_system(rs_type, rank), 1))


WIN = TruncationWindow(2, 2, 1)


def test_omega_basis_structure():
    V = _v()
    omega, pure = omega_basis(V, WIN)
    assert pure
    cartan = set(range(V.rs.rank))
    assert all(not any(d in cartan for d, _ in s[1]) for s in omega)
    # delta-direction modes are allowed in the vacuum space
    assert any(s[1] for s in omega)
    # and it is the exact kernel: every positive Cartan mode kills it
    space = V.space
    for s in omega:
        for d in cartan:
            for i in (1, 2):
                assert not space.heisenberg_act(space.dir_vec(d), i,
                                                {s: Cyc.one()})


def test_verma_bracket():
    verma = HeisenbergVerma([[2, 1], [1, 0]], [0, 1], Fraction(3, 2))
    states = [verma.vacuum(), ((0, 0), ((0, 2),)), ((0, 0), ((1, 1), (1, 1)))]
    entries = verma_bracket_check(verma, [(1, 0), (0, 1), (1, -1)], states, 3)
    assert entries and all(e[2] == "pass" for e in entries)


def test_verma_zero_level_rejected():
    with pytest.raises(ValueError):
        HeisenbergVerma([[2]], [0], 0)


def test_dressed_Z_reduces_to_lattice_operator_on_omega():
    """E^-(b) x_b E^+(b) undoes the dressing of x_b on vacuum states."""
    mod = HomogeneousModule(build_root_system("A", 1), 1)
    V = homogeneous_Ck(mod)
    W = to_Zmodule(V, WIN)
    b = mod.rs.roots[-1]
    for rvec in [(0,), (1,)]:
        zd = W.z(b, rvec)
        zl = mod.z(b, rvec)
        for v in W.omega_states:
            for n in range(-2, max(zd.max_mode(v), zl.max_mode(v)) + 1):
                assert not comb_sub(zd.mode_memo(n, v), zl.mode_memo(n, v))


def test_Z_commutes_with_nonzero_heisenberg_modes():
    V = _v()
    W = to_Zmodule(V, WIN)
    space = V.space
    b = V.rs.roots[0]
    z = W.z(b, (0,))
    avec = V.root_vec(V.rs.simple_roots[0])
    states = window_states(space, WIN)
    for v in states[:25]:
        comb = {v: Cyc.one()}
        for i in (-2, -1, 1, 2):
            for n in range(-2, z.max_mode(v) + 1):
                lhs = space.heisenberg_act(avec, i, z.mode_memo(n, v))
                rhs = z.mode(n, space.heisenberg_act(avec, i, comb))
                assert not comb_sub(lhs, rhs)


def test_dressed_commutator_identity():
    """The quadratic LHS equals E^- E^- [x, x] E^+ E^+ coefficient-wise."""
    mod = HomogeneousModule(build_root_system("A", 1), 1)
    V = homogeneous_Ck(mod)
    W = to_Zmodule(V, WIN)
    space = V.space
    b1 = V.rs.roots[0]
    b2 = V.rs.roots[-1]
    rvec = svec = (0,)
    ip = V.rs.form(b1, b2)
    rel = DeltaRelation(W.z(b1, rvec), W.z(b2, svec),
                        [(Fraction(ip), Cyc.one())], [])
    x1 = V.x(b1, rvec)
    x2 = V.x(b2, svec)
    em1 = dressing_operator(space, -1, V.root_vec(b1), 1)
    em2 = dressing_operator(space, -1, V.root_vec(b2), 1)
    ep1 = dressing_operator(space, 1, V.root_vec(b1), 1)
    ep2 = dressing_operator(space, 1, V.root_vec(b2), 1)

    def cmax(field, comb):
        return max((field.max_mode(s) for s in comb), default=-10)

    def rhs_coeff(A, B, v):
        # E^-(b1,z1) E^-(b2,z2) [x1(z1), x2(z2)] E^+(b1,z1) E^+(b2,z2),
        # coefficient at z1^A z2^B; the E^- modes t_i = A/B - s_i - u_i
        # vanish when positive, so every sum below is finite.
        out = {}
        for s2 in range(0, ep2.max_mode(v) + 1):
            c2 = ep2.mode_memo(s2, v)
            if not c2:
                continue
            for s1 in range(0, cmax(ep1, c2) + 1):
                c1 = ep1.mode(s1, c2)
                if not c1:
                    continue
                for u2 in range(B - s2, cmax(x2, c1) + 1):
                    w2 = x2.mode(u2, c1)
                    for u1 in range(A - s1, cmax(x1, w2) + 1):
                        mid = x1.mode(u1, w2)
                        if mid:
                            step = em2.mode(B - s2 - u2, mid)
                            out = comb_add(out,
                                           em1.mode(A - s1 - u1, step))
                for u1 in range(A - s1, cmax(x1, c1) + 1):
                    w1 = x1.mode(u1, c1)
                    for u2 in range(B - s2, cmax(x2, w1) + 1):
                        mid = x2.mode(u2, w1)
                        if mid:
                            step = em2.mode(B - s2 - u2, mid)
                            out = comb_sub(out,
                                           em1.mode(A - s1 - u1, step))
        return out

    states = [space.vacuum(), (tuple(V.root_vec(b1)), ())]
    for v in states:
        for A in range(-2, 3):
            for B in range(-2, 3):
                lhs = rel.lhs_coeff(A, B, v)
                assert not comb_sub(lhs, rhs_coeff(A, B, v)), (A, B, v)


def test_check_Ck_small_window():
    entries = check_Ck(_v(), WIN)
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]


def test_Zk_relations_small_window():
    V = _v()
    W = to_Zmodule(V, WIN)
    entries = verify_Zk_relations(W, WIN)
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]
    assert any(e[0] == "zk.7" for e in entries)


def test_roundtrip_small_window():
    entries, W, back = roundtrip_check(_v(), WIN)
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, bad[:2]
    assert any(e[0] == "bridge.roundtrip_x" for e in entries)
    assert any(e[0] == "bridge.pairing_injective" for e in entries)


def test_factorization_counterexample():
    """k_0 forced to 2*Id with unscaled root fields breaks (3)."""
    mod = HomogeneousModule(build_root_system("A", 1), 1)
    V = homogeneous_Ck(mod)

    def bad_k(i, rvec):
        if i == 0:
            return ScaledField(IdentityField(dim=V.space.dim), 2)
        return V.kf(i, rvec)

    broken = CkModule(V.space, 2, TwistData(1), V.rs, V.lat, V.alg,
                      V._x_fn, V._beta_fn, bad_k, name="broken")
    win = TruncationWindow(1, 1, 1)
    entries = check_Ck(broken, win)
    fails = [e for e in entries if e[0] == "ck.factor_x" and e[2] == "fail"]
    assert fails and fails[0][3] is not None


def test_zero_level_rejected():
    mod = HomogeneousModule(build_root_system("A", 1), 1)
    V = homogeneous_Ck(mod)
    V0 = CkModule(V.space, 0, TwistData(1), V.rs, V.lat, V.alg,
                  V._x_fn, V._beta_fn, V._k_fn)
    with pytest.raises(ValueError):
        to_Zmodule(V0, WIN)
    with pytest.raises(ValueError):
        check_Ck(V0, WIN)
    W = to_Zmodule(V, WIN)
    W.k = Cyc.zero()
    with pytest.raises(ValueError):
        from_Zmodule(W)
