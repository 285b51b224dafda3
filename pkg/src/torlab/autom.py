"""Finite-order automorphisms of the Chevalley algebra.

An automorphism is stored as its action on basis symbols (a column map).
Diagram automorphisms are seeded on simple root vectors with a searched
sign vector and extended through bracket words; the same closure engine
builds arbitrary automorphisms from generator images, which is how the
principal automorphism of a twisted context is realized.
"""

from __future__ import annotations

from . import linalg
from .rootsys import ChevalleyAlgebra, GElement
from .scalar import Cyc, cyc_root_of_unity


class Automorphism:
    def __init__(self, alg: ChevalleyAlgebra, action: dict, order: int):
        self.alg = alg
        self.action = action  # symbol -> GElement
        self.order = order
        self.w = cyc_root_of_unity(order, 1)
        self._powers = [None, self]
        self._root_perm = ()

    def apply(self, u: GElement) -> GElement:
        out = GElement()
        for sym, c in u.terms.items():
            out = out + self.action[sym].scale(c)
        return out

    def power(self, p: int) -> "Automorphism":
        p %= self.order
        while len(self._powers) <= p:
            prev = self._powers[-1]
            action = {s: self.apply(img) for s, img in prev.action.items()}
            self._powers.append(Automorphism(self.alg, action, self.order))
        if p == 0:
            return identity_automorphism(self.alg)
        return self._powers[p]

    def is_identity_map(self) -> bool:
        return all(img == GElement({s: Cyc.one()}) for s, img in self.action.items())

    def root_permutation(self):
        """Map on roots, or None if some x_alpha is not sent to a root line."""
        if self._root_perm != ():
            return self._root_perm
        perm = {}
        for a in self.alg.rs.roots:
            img = self.action[("x", a)]
            if len(img.terms) != 1:
                perm = None
                break
            (sym, _), = img.terms.items()
            if sym[0] != "x":
                perm = None
                break
            perm[a] = sym[1]
        object.__setattr__(self, "_root_perm", perm)
        return perm

    def validate(self):
        alg = self.alg
        basis = [GElement({s: Cyc.one()}) for s in alg.symbols]
        for i, u in enumerate(basis):
            for v in basis[i:]:
                if not alg.bracket(self.apply(u), self.apply(v)) == self.apply(alg.bracket(u, v)):
                    raise ValueError("bracket not preserved")
                if not alg.form(self.apply(u), self.apply(v)) == alg.form(u, v):
                    raise ValueError("form not preserved")
        pw = self.power(self.order - 1) if self.order > 1 else self
        if self.order > 1:
            comp = {s: pw.apply(self.action[s]) for s in alg.symbols}
            ident = {s: GElement({s: Cyc.one()}) for s in alg.symbols}
            if any(comp[s] != ident[s] for s in alg.symbols):
                raise ValueError("automorphism order is not %d" % self.order)
        return self


def identity_automorphism(alg: ChevalleyAlgebra) -> Automorphism:
    action = {s: GElement({s: Cyc.one()}) for s in alg.symbols}
    aut = Automorphism(alg, action, 1)
    return aut


def automorphism_from_generator_images(alg: ChevalleyAlgebra, pairs, order: int):
    """Extend generator images through bracket words to a full automorphism.

    pairs: list of (GElement, GElement).  Returns None if the images are
    bracket-inconsistent or do not span the algebra.
    """
    domain = []     # coordinate vectors spanning the known domain
    images = []     # matching image elements
    for u, au in pairs:
        if not _absorb(alg, domain, images, u, au):
            return None
    frontier = list(range(len(domain)))
    while frontier:
        fresh = []
        for i in range(len(domain)):
            for j in frontier:
                u = alg.from_vector(domain[i])
                v = alg.from_vector(domain[j])
                w = alg.bracket(u, v)
                if w.is_zero():
                    continue
                n0 = len(domain)
                ok = _absorb(alg, domain, images, w, alg.bracket(images[i], images[j]))
                if not ok:
                    return None
                if len(domain) > n0:
                    fresh.append(n0)
        frontier = fresh
    if len(domain) < alg.dim:
        return None
    action = {}
    for s in alg.symbols:
        target = [Cyc.one() if t == s else Cyc.zero() for t in alg.symbols]
        coeffs = linalg.express_in_span(domain, target)
        if coeffs is None:
            return None
        img = GElement()
        for c, im in zip(coeffs, images):
            if c:
                img = img + im.scale(c)
        action[s] = img
    return Automorphism(alg, action, order)


def _absorb(alg, domain, images, u, au):
    """Add (u, au) to the span; check consistency if already in span."""
    vec = alg.to_vector(u)
    coeffs = linalg.express_in_span(domain, vec)
    if coeffs is None:
        domain.append(vec)
        images.append(au)
        return True
    pred = GElement()
    for c, im in zip(coeffs, images):
        if c:
            pred = pred + im.scale(c)
    return pred == au


def diagram_automorphism(alg: ChevalleyAlgebra, perm, order: int) -> Automorphism:
    """Automorphism from a Dynkin-node permutation, with a sign search.

    perm is a list: node i maps to node perm[i].  The sign freedom on
    non-simple root vectors means a seed of +1 signs may be bracket
    inconsistent; we search sign vectors, all-plus first.
    """
    rs = alg.rs
    import itertools
    for signs in itertools.product((1, -1), repeat=rs.rank):
        pairs = []
        ok_order = all(signs[i] * signs[perm[i]] == 1 for i in range(rs.rank))
        if not ok_order and order == 2:
            continue
        for i in range(rs.rank):
            a = rs.simple_roots[i]
            b = rs.simple_roots[perm[i]]
            na = tuple(-x for x in a)
            nb = tuple(-x for x in b)
            pairs.append((GElement.x(a), GElement.x(b).scale(signs[i])))
            pairs.append((GElement.x(na), GElement.x(nb).scale(signs[i])))
            pairs.append((GElement.h(a), GElement.h(b)))
        aut = automorphism_from_generator_images(alg, pairs, order)
        if aut is None:
            continue
        try:
            return aut.validate()
        except ValueError:
            continue
    raise ValueError("no consistent sign assignment for diagram automorphism")


def eigenspace_decompose(aut: Automorphism, x: GElement):
    """Components x_i with aut(x_i) = w^i x_i; their sum is x."""
    m = aut.order
    if m == 1:
        return [(0, x)] if not x.is_zero() else []
    minv = Cyc.rational(1) / m
    out = []
    applied = [x]
    for p in range(1, m):
        applied.append(aut.power(p).apply(x))
    for i in range(m):
        comp = GElement()
        for p in range(m):
            comp = comp + applied[p].scale(cyc_root_of_unity(m, (-i * p) % m))
        comp = comp.scale(minv)
        if not comp.is_zero():
            out.append((i, comp))
    return out


def eta(aut: Automorphism, p: int, beta) -> Cyc:
    """Scalar with aut^p (x_beta) = eta * x_(theta^p beta)."""
    perm = aut.root_permutation()
    if perm is None:
        raise ValueError("automorphism does not permute the root lines")
    img = aut.power(p).apply(GElement.x(beta))
    (sym, coeff), = img.terms.items()
    target = beta
    for _ in range(p % aut.order):
        target = perm[target]
    assert sym == ("x", target)
    return coeff


def untwisted_affine_cartan(rs) -> list:
    """Affine Cartan matrix with node 0 attached through the highest root."""
    psi = rs.highest_root()
    n = rs.rank + 1
    mat = [[0] * n for _ in range(n)]
    mat[0][0] = 2
    for i in range(rs.rank):
        for j in range(rs.rank):
            mat[i + 1][j + 1] = rs.cartan[i][j]
        pair = rs.form(psi, rs.simple_roots[i])
        mat[0][i + 1] = -pair
        mat[i + 1][0] = -pair
    return mat


def affine_marks(cartan):
    """(marks, comarks): primitive positive right/left null vectors."""
    n = len(cartan)
    rows = [[Cyc.rational(c) for c in row] for row in cartan]
    marks = linalg.int_nullvector(rows)
    cols = [[Cyc.rational(cartan[j][i]) for j in range(n)] for i in range(n)]
    comarks = linalg.int_nullvector(cols)
    return marks, comarks


def extend_to_loops(aut: Automorphism):
    """Action on loop-algebra elements: see toroidal.TorElement.apply_autom."""
    from .toroidal import apply_loop_automorphism

    def act(element):
        return apply_loop_automorphism(aut, element)

    return act
