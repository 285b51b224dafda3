"""Acceptance suite: one test per criterion, exact arithmetic throughout.

Each criterion is verified at its stated window and seed with zero
tolerance; the elapsed time is asserted against the stated budget.
Run with -v to get one pass/fail line per criterion.
"""

import json
import random
import time
from fractions import Fraction

from torlab.autom import diagram_automorphism, identity_automorphism
from torlab.cli import main
from torlab.distops import TruncationWindow
from torlab.fockhom import HomogeneousModule, verify_33, verify_center_hom
from torlab.fockprin import (PrincipalModule, negation_theta,
                             solve_prin_constants, verify_52,
                             verify_principal_relations)
from torlab.princiso import build_iso_context, verify_iso
from torlab.rootsys import (ChevalleyAlgebra, GElement, Lattice,
                            build_root_system)
from torlab.scalar import Cyc
from torlab.toroidal import (GeneratingRelationVerifier, ToroidalAlgebra,
                             sample_bracket_axioms)
from torlab.zbridge import check_Ck, homogeneous_Ck, roundtrip_check

SEED = 20240825


def _assert_clean(entries, label):
    bad = [e for e in entries if e[2] != "pass"]
    assert not bad, "%s: %d failing entries, first: %r" % (label, len(bad),
                                                           bad[:1])


def _budget(t0, limit, label):
    elapsed = time.time() - t0
    assert elapsed < limit, "%s exceeded budget: %.1fs > %ds" % (label,
                                                                 elapsed, limit)
    print("\n%s: PASS (%.1fs)" % (label, elapsed))


def test_criterion_1_cocycle_axioms():
    """Cocycle axioms on basis vectors and two-term sums, A2 and D4, N=2."""
    t0 = time.time()
    for kind, rank in (("A", 2), ("D", 4)):
        lat = Lattice(build_root_system(kind, rank), 2)
        basis = [tuple(1 if j == i else 0 for j in range(lat.dim))
                 for i in range(lat.dim)]
        sums = [tuple(a + b for a, b in zip(u, v))
                for i, u in enumerate(basis) for v in basis[i:]]
        vecs = basis + sums
        for u in vecs:
            # (1) eps(u, u) = (-1)^((u,u)/2)
            assert lat.eps(u, u) == (-1) ** ((lat.form(u, u) // 2) % 2)
            for v in vecs:
                # (2) eps(u, v) eps(v, u) = (-1)^((u,v))
                assert lat.eps(u, v) * lat.eps(v, u) == \
                    (-1) ** (lat.form(u, v) % 2)
        for b1 in basis:
            for b2 in basis:
                s = tuple(a + b for a, b in zip(b1, b2))
                for v in vecs:
                    # (3) and (4): bimultiplicativity in both slots
                    assert lat.eps(s, v) == lat.eps(b1, v) * lat.eps(b2, v)
                    assert lat.eps(v, s) == lat.eps(v, b1) * lat.eps(v, b2)
    _budget(t0, 1, "criterion 1 (cocycle axioms)")


def test_criterion_2_chevalley_bracket():
    """Antisymmetry and Jacobi: A2 exhaustively, D4 on 500 seeded triples."""
    t0 = time.time()
    a2 = ChevalleyAlgebra(build_root_system("A", 2))
    basis = [GElement({s: Cyc.one()}) for s in a2.symbols]
    for u in basis:
        for v in basis:
            assert (a2.bracket(u, v) + a2.bracket(v, u)).is_zero()
            for w in basis:
                jac = a2.bracket(u, a2.bracket(v, w)) + \
                    a2.bracket(v, a2.bracket(w, u)) + \
                    a2.bracket(w, a2.bracket(u, v))
                assert jac.is_zero()
    d4 = ChevalleyAlgebra(build_root_system("D", 4))
    rng = random.Random(SEED)

    def rand_elem():
        s1 = d4.symbols[rng.randrange(d4.dim)]
        s2 = d4.symbols[rng.randrange(d4.dim)]
        return GElement({s1: Cyc.one()}) + GElement(
            {s2: Cyc.rational(rng.choice((-2, -1, 1, 2)))})

    for _ in range(500):
        u, v, w = rand_elem(), rand_elem(), rand_elem()
        assert (d4.bracket(u, v) + d4.bracket(v, u)).is_zero()
        jac = d4.bracket(u, d4.bracket(v, w)) + \
            d4.bracket(v, d4.bracket(w, u)) + \
            d4.bracket(w, d4.bracket(u, v))
        assert jac.is_zero()
    _budget(t0, 10, "criterion 2 (Chevalley bracket)")


def _toroidal_configs():
    a1 = ChevalleyAlgebra(build_root_system("A", 1))
    tor1 = ToroidalAlgebra(a1, identity_automorphism(a1), 2)
    a2 = ChevalleyAlgebra(build_root_system("A", 2))
    tor2 = ToroidalAlgebra(a2, diagram_automorphism(a2, [1, 0], 2), 1)
    return tor1, tor2


def test_criterion_3_toroidal_bracket():
    """Toroidal antisymmetry, Jacobi, and d_A zeros on 500 seeded triples."""
    t0 = time.time()
    for tor in _toroidal_configs():
        entries = sample_bracket_axioms(tor, 500, SEED, r0max=3, rimax=2)
        _assert_clean(entries, "toroidal axioms m=%d" % tor.m)
    _budget(t0, 30, "criterion 3 (toroidal bracket)")


def test_criterion_4_generating_relations():
    """Generating-function relations, all mode pairs |i|,|j| <= 4."""
    t0 = time.time()
    tor1, tor2 = _toroidal_configs()
    entries = GeneratingRelationVerifier(tor1, 4).run((1, 0), (0, 1))
    _assert_clean(entries, "relations m=1")
    entries = GeneratingRelationVerifier(tor2, 4).run((1,), (0,))
    _assert_clean(entries, "relations m=2")
    _budget(t0, 120, "criterion 4 (generating relations)")


def test_criterion_5_homogeneous_picture():
    """All 36 ordered A2 root pairs at window (3,3,2), plus the center."""
    t0 = time.time()
    mod = HomogeneousModule(build_root_system("A", 2), 1)
    win = TruncationWindow(3, 3, 2)
    entries = verify_33(mod, win)
    assert sum(1 for e in entries if e[0] == "zhom.pair") == 36 * 9
    verify_center_hom(mod, win, entries=entries)
    _assert_clean(entries, "homogeneous picture")
    _budget(t0, 300, "criterion 5 (homogeneous picture)")


def test_criterion_6_roundtrip():
    """Rebuild through the quadratic algebra and compare matrix elements."""
    t0 = time.time()
    win = TruncationWindow(3, 3, 2)
    ck = homogeneous_Ck(HomogeneousModule(build_root_system("A", 1), 1))
    entries, _w, back = roundtrip_check(ck, win)
    check_Ck(ck, win, entries=entries)
    check_Ck(back, win, entries=entries)
    _assert_clean(entries, "roundtrip")
    _budget(t0, 300, "criterion 6 (roundtrip)")


def test_criterion_7_principal_picture():
    """Solved constant squares to -1/16; relations at (6,4,2); stable set."""
    t0 = time.time()
    # expansion oracle: (1-x)^2 (1+x)^(-2) = 1 + sum 4n(-x)^n, |mode| <= 6
    coef = [Fraction(0)] * 7
    for i in range(7):
        for j, c2 in ((0, 1), (1, -2), (2, 1)):
            if i - j >= 0:
                coef[i] += c2 * Fraction((-1) ** (i - j) * (i - j + 1))
    assert coef[0] == 1
    assert all(coef[n] == Fraction((-1) ** n * 4 * n) for n in range(1, 7))
    for a in range(1, 7):
        assert Fraction(-1, 16) * coef[a] == Fraction(-1, 4) * (-1) ** a * a

    mod = PrincipalModule(build_root_system("A", 1), 1, 2, negation_theta)
    win = TruncationWindow(6, 4, 2)
    sols = solve_prin_constants(mod, win)
    assert all(c * c == Cyc.rational(Fraction(-1, 16)) for c in sols)
    sols2 = solve_prin_constants(mod, TruncationWindow(8, 4, 2))
    assert sorted(map(repr, sols)) == sorted(map(repr, sols2))
    mod.set_constants(sorted(sols, key=repr)[0])
    entries = verify_52(mod, win)
    verify_principal_relations(mod, win, entries=entries)
    ids = {e[0] for e in entries}
    assert {"prin.%d" % i for i in range(1, 11)} <= ids and "prin.52" in ids
    _assert_clean(entries, "principal picture")
    _budget(t0, 300, "criterion 7 (principal picture)")


def test_criterion_8_principal_realization_iso():
    """1000 seeded pairs each for (A1, K=1) and (A3, K=2); phi(C) = C."""
    t0 = time.time()
    for kind, rank, K, perm in (("A", 1, 1, None), ("A", 3, 2, [2, 1, 0])):
        ctx = build_iso_context(kind, rank, K=K, perm=perm)
        entries = verify_iso(ctx, samples=1000, seed=SEED)
        assert sum(1 for e in entries if e[0] == "iso.hom") == 1000
        for rel in ("iso.N_simple", "iso.N_opposite", "iso.phi_C"):
            assert any(e[0] == rel for e in entries)
        _assert_clean(entries, "iso %s%d K=%d" % (kind, rank, K))
    _budget(t0, 120, "criterion 8 (principal realization)")


def test_criterion_9_determinism(tmp_path):
    """Byte-identical reports across two runs of every suite, fixed seeds."""
    t0 = time.time()
    runs = [
        ["verify", "toroidal", "--algebra", "A1", "--n", "1",
         "--theta", "identity", "--window", "2,2,1", "--samples", "25"],
        ["verify", "toroidal", "--algebra", "A2", "--n", "1",
         "--theta", "diagram:1,0", "--window", "2,2,1", "--samples", "25"],
        ["verify", "homogeneous", "--algebra", "A1", "--window", "2,2,1"],
        ["verify", "zalg", "--algebra", "A1", "--window", "2,2,1"],
        ["verify", "roundtrip", "--algebra", "A1", "--window", "2,2,1"],
        ["verify", "principal", "--algebra", "A1", "--solve-constants",
         "--window", "4,3,1"],
        ["verify", "iso", "--algebra", "A3", "--theta", "diagram:2,1,0",
         "--samples", "100"],
        ["solve-constants", "--algebra", "A1", "--window", "4,3,1"],
        ["gen", "--algebra", "A1", "--n", "1", "--window", "1,1,1"],
    ]
    out = tmp_path / "report.json"
    for argv in runs:
        argv = argv + ["--seed", str(SEED), "--out", str(out)]
        code = main(argv)
        assert code == 0, argv
        first = out.read_bytes()
        json.loads(first)  # well-formed
        assert main(argv) == 0
        assert out.read_bytes() == first, "nondeterministic: %r" % argv
    _budget(t0, 120, "criterion 9 (determinism)")
