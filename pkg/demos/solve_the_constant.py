"""Solving for the principal-picture structure constant.

In the principal realization of affine sl(2) the vertex operator carries
an undetermined orbit constant C.  Matching the operator products against
the bracket relations over a finite window pins it down to C^2 = -1/16,
so C = +-i/4.  This demo solves for C exactly, shows that enlarging the
window does not change the solution set, and then verifies the quadratic
relation with the solved constant in place.

Run:  python3 demos/solve_the_constant.py
"""

from torlab.distops import TruncationWindow
from torlab.fockprin import (PrincipalModule, negation_theta,
                             solve_prin_constants, verify_52,
                             verify_principal_relations)
from torlab.rootsys import build_root_system


def main():
    mod = PrincipalModule(build_root_system("A", 1), 1, 2, negation_theta)
    win = TruncationWindow(6, 4, 2)
    sols = solve_prin_constants(mod, win)
    print("solutions at window (6,4,2):")
    for c in sorted(sols, key=repr):
        print("  C =", c, "  C^2 =", c * c)

    bigger = solve_prin_constants(mod, TruncationWindow(8, 4, 2))
    same = sorted(map(repr, sols)) == sorted(map(repr, bigger))
    print("solution set unchanged at window (8,4,2):", same)

    mod.set_constants(sorted(sols, key=repr)[0])
    entries = verify_52(mod, win)
    verify_principal_relations(mod, win, entries=entries)
    bad = [e for e in entries if e[2] != "pass"]
    print("relation checks with the solved constant: %d entries, %d failures"
          % (len(entries), len(bad)))


if __name__ == "__main__":
    main()
