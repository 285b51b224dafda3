"""A short tour of the twisted toroidal bracket.

Builds the order-2 diagram twist of sl(3), forms the twisted toroidal
algebra in one extra variable, and walks through a few brackets: a root
vector pair producing a central term, the d_A normal form, and one of
the generating-function relations checked coefficient by coefficient.

Run:  python3 demos/twisted_bracket_tour.py
"""

from torlab.autom import diagram_automorphism
from torlab.rootsys import ChevalleyAlgebra, GElement, build_root_system
from torlab.scalar import Cyc
from torlab.toroidal import GeneratingRelationVerifier, ToroidalAlgebra


def main():
    rs = build_root_system("A", 2)
    alg = ChevalleyAlgebra(rs)
    aut = diagram_automorphism(alg, [1, 0], 2)
    tor = ToroidalAlgebra(alg, aut, 1)
    print("twisted toroidal algebra: A2, diagram twist of order", tor.m)

    alpha = rs.roots[0]
    x = GElement({("x", alpha): Cyc.one()})
    y = GElement({("x", tuple(-a for a in alpha)): Cyc.one()})
    a = tor.loop_component(x, 1, (0,))
    b = tor.loop_component(y, -1, (1,))
    print("\n[x_a t^1, x_-a t^-1 s^1] =")
    print(" ", tor.bracket(a, b))

    # the relation element (1/m) r0 k_0 + sum_i r_i k_i dies in normal form
    from torlab.toroidal import TorElement
    from fractions import Fraction
    r0, r1 = 2, 1
    dA = TorElement({("k", 0, r0, (r1,)): Cyc.rational(Fraction(r0, tor.m)),
                     ("k", 1, r0, (r1,)): Cyc.rational(r1)})
    print("\nd_A relation element at (r0, r1) = (2, 1) normalizes to:",
          tor.normalize_dA(dA))

    verifier = GeneratingRelationVerifier(tor, 2)
    entries = verifier.run((1,), (0,))
    bad = [e for e in entries if e[2] != "pass"]
    print("\ngenerating relations at |modes| <= 2: %d coefficient checks, "
          "%d failures" % (len(entries), len(bad)))


if __name__ == "__main__":
    main()
