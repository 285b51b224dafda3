import random

import pytest

from torlab.autom import (affine_marks, diagram_automorphism, eigenspace_decompose,
                          eta, identity_automorphism, untwisted_affine_cartan)
from torlab.rootsys import ChevalleyAlgebra, GElement, build_root_system
from torlab.scalar import Cyc, cyc_root_of_unity


def test_identity_decomposition():
    alg = ChevalleyAlgebra(build_root_system("A", 2))
    aut = identity_automorphism(alg)
    x = GElement.x(alg.rs.simple_roots[0]) + GElement.h(alg.rs.simple_roots[1])
    assert eigenspace_decompose(aut, x) == [(0, x)]


def test_diagram_automorphism_a2():
    alg = ChevalleyAlgebra(build_root_system("A", 2))
    aut = diagram_automorphism(alg, [1, 0], 2)
    aut.validate()
    assert aut.order == 2
    perm = aut.root_permutation()
    assert perm is not None
    a0, a1 = alg.rs.simple_roots
    assert perm[a0] == a1


def test_diagram_automorphism_a3():
    alg = ChevalleyAlgebra(build_root_system("A", 3))
    aut = diagram_automorphism(alg, [2, 1, 0], 2)
    aut.validate()


def test_eigenspace_projector_reassembles():
    alg = ChevalleyAlgebra(build_root_system("A", 2))
    aut = diagram_automorphism(alg, [1, 0], 2)
    rng = random.Random(5)
    for _ in range(100):
        x = GElement()
        for _ in range(3):
            sym = alg.symbols[rng.randrange(alg.dim)]
            x = x + GElement({sym: Cyc.rational(rng.randint(-3, 3))})
        comps = eigenspace_decompose(aut, x)
        total = GElement()
        for i, comp in comps:
            total = total + comp
            got = aut.apply(comp)
            assert got == comp.scale(cyc_root_of_unity(2, i))
        assert total == x


def test_eta_chain_rule():
    alg = ChevalleyAlgebra(build_root_system("A", 2))
    aut = diagram_automorphism(alg, [1, 0], 2)
    perm = aut.root_permutation()
    for beta in alg.rs.roots:
        assert eta(aut, 0, beta) == 1
        for p in range(2):
            for q in range(2):
                tq = beta
                for _ in range(q):
                    tq = perm[tq]
                assert eta(aut, p + q, beta) == eta(aut, p, tq) * eta(aut, q, beta)


def test_eta_identity_automorphism():
    alg = ChevalleyAlgebra(build_root_system("A", 1))
    aut = identity_automorphism(alg)
    for p in range(3):
        assert eta(aut, p, alg.rs.roots[0]) == 1


def test_affine_marks_a1():
    marks, comarks = affine_marks([[2, -2], [-2, 2]])
    assert marks == [1, 1]
    assert comarks == [1, 1]


def test_affine_marks_a_ell():
    for ell in (2, 3, 4):
        rs = build_root_system("A", ell)
        marks, comarks = affine_marks(untwisted_affine_cartan(rs))
        assert marks == [1] * (ell + 1)
        assert comarks == [1] * (ell + 1)
        assert marks[0] == 1


def test_affine_marks_d4():
    rs = build_root_system("D", 4)
    marks, comarks = affine_marks(untwisted_affine_cartan(rs))
    assert marks[0] == 1
    assert sum(marks) == 6  # Coxeter number of D4
    cart = untwisted_affine_cartan(rs)
    for i in range(5):
        assert sum(cart[i][j] * marks[j] for j in range(5)) == 0


def test_corank_error():
    with pytest.raises(ValueError):
        affine_marks([[2, -1], [-1, 2]])
