"""The graded restricted Lie algebra of the principal congruence tower.

Each layer of the tower of sign-class congruence subgroups of PSL(2, Z) at
levels p, p^2, ... is elementary abelian; a kernel element at level q is
I + p^q N mod p^{q+1} and its class is coordinatized by N.  For odd p the
trace of N vanishes mod p, giving coordinates (a, b, d) with

    N = [[d, a], [b, -d]]  mod p,

so the unipotent basis matrices map to (1,0,0) and (0,1,0) and the diagonal
direction to (0,0,1).  For p = 2 the sign ambiguity shifts the diagonal of
N, so only the off-diagonal coordinates (a, b) are well defined and the
layer has rank 2.

The bracket is induced by the group commutator after lifting classes one
level up; the p-th power map sends level q to level q+1.  ``lift`` uses the
unipotent basis matrices for the off-diagonal directions and
diag(u, u^{-1}) with u = 1 + p^q for the diagonal direction, which has
determinant exactly 1 in Z/p^T.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exactmat import Modulus, ModMat


class GradedError(ValueError):
    pass


@dataclass(frozen=True)
class GradedClass:
    """A class in the level-q layer, as coordinates mod p.

    coords is (a, b, d) for odd p and (a, b) for p = 2.
    """

    p: int
    q: int
    coords: tuple

    def __post_init__(self):
        want = 2 if self.p == 2 else 3
        if self.q < 1:
            raise GradedError("level must be >= 1, got %d" % self.q)
        if len(self.coords) != want:
            raise GradedError("expected %d coordinates for p=%d" % (want, self.p))
        object.__setattr__(self, "coords", tuple(c % self.p for c in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self):
        return ",".join(str(c) for c in self.coords)


def zero_class(p: int, q: int) -> GradedClass:
    return GradedClass(p, q, (0,) * (2 if p == 2 else 3))


def basis_class(p: int, q: int, name: str) -> GradedClass:
    """The coordinate basis classes: 'A' -> e1, 'B' -> e2, 'D' -> e3 (odd p)."""
    if p == 2:
        vecs = {"A": (1, 0), "B": (0, 1)}
    else:
        vecs = {"A": (1, 0, 0), "B": (0, 1, 0), "D": (0, 0, 1)}
    if name not in vecs:
        raise GradedError("no basis class %r for p=%d" % (name, p))
    return GradedClass(p, q, vecs[name])


def class_add(c1: GradedClass, c2: GradedClass) -> GradedClass:
    if (c1.p, c1.q) != (c2.p, c2.q):
        raise GradedError("classes live at different (p, q)")
    return GradedClass(c1.p, c1.q, tuple(a + b for a, b in zip(c1.coords, c2.coords)))


def class_neg(c: GradedClass) -> GradedClass:
    return GradedClass(c.p, c.q, tuple(-a for a in c.coords))


def class_smul(k: int, c: GradedClass) -> GradedClass:
    return GradedClass(c.p, c.q, tuple(k * a for a in c.coords))


def class_of(m: ModMat, q: int) -> GradedClass:
    """Coordinates of a kernel element: m must be a determinant-one matrix
    mod p^{q+1} congruent to (+-)I mod p^q."""
    mod = m.modulus
    p = mod.p
    if mod.r != q + 1:
        raise GradedError("expected a matrix mod %d^%d, got modulus %s" % (p, q + 1, mod))
    if m.det() != 1:
        raise GradedError("expected det = 1 mod %d, got %d" % (mod.m, m.det()))
    pq = p ** q
    mm = mod.m

    def offset(mat):
        diffs = [mat.entries[i][j] - (1 if i == j else 0) for i in range(2) for j in range(2)]
        if all(d % pq == 0 for d in diffs):
            return tuple((d // pq) % p for d in diffs)
        return None

    n = offset(m)
    if n is None:
        n = offset(-m)
    if n is None:
        raise GradedError("matrix is not congruent to +-I mod %d^%d" % (p, q))
    n00, n01, n10, n11 = n
    if (n00 + n11) % p != 0:
        raise GradedError("trace of the kernel offset is nonzero mod %d" % p)  # pragma: no cover
    if p == 2:
        return GradedClass(p, q, (n01, n10))
    return GradedClass(p, q, (n01, n10, n00))


def lift(c: GradedClass, t_exp: int) -> ModMat:
    """A determinant-one representative of c mod p^t_exp (t_exp >= q + 1)."""
    p, q = c.p, c.q
    if t_exp < q + 1:
        raise GradedError("target exponent %d too small for level %d" % (t_exp, q))
    mod = Modulus(p, t_exp)
    m = mod.m
    pq = p ** q
    if p == 2:
        a, b = c.coords
        d = 0
    else:
        a, b, d = c.coords
    out = ModMat(((1, a * pq), (0, 1)), mod) * ModMat(((1, 0), (b * pq, 1)), mod)
    if d:
        u = (1 + pq) % m
        uinv = pow(u, -1, m)
        out = out * (ModMat(((u, 0), (0, uinv)), mod) ** d)
    return out


def bracket_from_lifts(m1: ModMat, m2: ModMat, q: int, s: int) -> GradedClass:
    """Class of the group commutator of two lifts, read at level q + s."""
    if m1.modulus != m2.modulus:
        raise GradedError("lifts live at different moduli")
    if m1.modulus.r != q + s + 1:
        raise GradedError("lifts must be taken mod p^%d" % (q + s + 1))
    comm = m1 * m2 * m1.inverse() * m2.inverse()
    return class_of(comm, q + s)


def bracket(c1: GradedClass, c2: GradedClass) -> GradedClass:
    """The induced bracket: lift one level past q+s, commutate, project."""
    if c1.p != c2.p:
        raise GradedError("classes live at different primes")
    t = c1.q + c2.q + 1
    return bracket_from_lifts(lift(c1, t), lift(c2, t), c1.q, c2.q)


def power_map(c: GradedClass) -> GradedClass:
    """The p-th power map from level q to level q + 1."""
    t = c.q + 2
    m = lift(c, t) ** c.p
    return class_of(m, c.q + 1)


def random_kernel_element(p: int, level: int, t_exp: int, rng: random.Random) -> ModMat:
    """A random determinant-one matrix mod p^t_exp congruent to I mod p^level,
    built as a word in the canonical lifts at that level."""
    names = ["A", "B"] if p == 2 else ["A", "B", "D"]
    out = ModMat.identity(2, Modulus(p, t_exp))
    for _ in range(rng.randint(1, 4)):
        g = lift(basis_class(p, level, rng.choice(names)), t_exp)
        if rng.random() < 0.5:
            g = g.inverse()
        out = out * g
    return out


def _relation_cells(p, q_max):
    return [(q, s) for q in range(1, q_max) for s in range(1, q_max) if q + s <= q_max]


def verify_relation_table(p: int, q_max: int) -> dict:
    """Exhaustively check the bracket/power relation table of the tower.

    Odd p: [A_q, B_s] = D_{q+s}, [A_q, D_s] = A_{q+s}^{-2},
    [B_q, D_s] = B_{q+s}^2, and the p-th power map shifts A, B, D one level.
    p = 2: every basis bracket vanishes and squaring shifts A and B.
    Bilinearity and antisymmetry of the bracket are checked on the
    coordinate bases at every cell.
    """
    names = ["A", "B"] if p == 2 else ["A", "B", "D"]
    relations = []

    def expected_pairs(q, s):
        if p == 2:
            return {
                ("A", "B"): zero_class(p, q + s),
                ("B", "A"): zero_class(p, q + s),
                ("A", "A"): zero_class(p, q + s),
                ("B", "B"): zero_class(p, q + s),
            }
        d = basis_class(p, q + s, "D")
        a = basis_class(p, q + s, "A")
        b = basis_class(p, q + s, "B")
        return {
            ("A", "B"): d,
            ("B", "A"): class_neg(d),
            ("A", "D"): class_smul(-2, a),
            ("D", "A"): class_smul(2, a),
            ("B", "D"): class_smul(2, b),
            ("D", "B"): class_smul(-2, b),
            ("A", "A"): zero_class(p, q + s),
            ("B", "B"): zero_class(p, q + s),
            ("D", "D"): zero_class(p, q + s),
        }

    cells = _relation_cells(p, q_max)
    bracket_failures = []
    for q, s in cells:
        for (n1, n2), want in expected_pairs(q, s).items():
            got = bracket(basis_class(p, q, n1), basis_class(p, s, n2))
            if got != want:
                bracket_failures.append({"cell": [q, s], "pair": [n1, n2], "got": str(got), "want": str(want)})
    relations.append({"id": "basis_brackets", "cells": len(cells), "failures": bracket_failures,
                      "pass": not bracket_failures})

    power_failures = []
    for q in range(1, q_max):
        for name in names:
            got = power_map(basis_class(p, q, name))
            want = basis_class(p, q + 1, name)
            if got != want:
                power_failures.append({"q": q, "name": name, "got": str(got), "want": str(want)})
    relations.append({"id": "power_map_shifts_basis", "cells": q_max - 1, "failures": power_failures,
                      "pass": not power_failures})

    basis_vecs = [basis_class(p, 1, n) for n in names]
    bilin_failures = []
    anti_failures = []
    for q, s in cells:
        at_q = [GradedClass(p, q, v.coords) for v in basis_vecs]
        at_s = [GradedClass(p, s, v.coords) for v in basis_vecs]
        for c1 in at_q:
            for c1b in at_q:
                for c2 in at_s:
                    left = bracket(class_add(c1, c1b), c2)
                    right = class_add(bracket(c1, c2), bracket(c1b, c2))
                    if left != right:
                        bilin_failures.append({"cell": [q, s], "slot": "left",
                                               "args": [str(c1), str(c1b), str(c2)]})
        for c1 in at_q:
            for c2 in at_s:
                for c2b in at_s:
                    left = bracket(c1, class_add(c2, c2b))
                    right = class_add(bracket(c1, c2), bracket(c1, c2b))
                    if left != right:
                        bilin_failures.append({"cell": [q, s], "slot": "right",
                                               "args": [str(c1), str(c2), str(c2b)]})
        for c1 in at_q:
            for c2 in at_s:
                lhs = bracket(c1, c2)
                rhs = class_neg(GradedClass(p, q + s, bracket(c2, c1).coords))
                if lhs != rhs:
                    anti_failures.append({"cell": [q, s], "args": [str(c1), str(c2)]})
    relations.append({"id": "bilinearity_on_bases", "cells": len(cells), "failures": bilin_failures,
                      "pass": not bilin_failures})
    relations.append({"id": "antisymmetry_on_bases", "cells": len(cells), "failures": anti_failures,
                      "pass": not anti_failures})

    return {
        "p": p,
        "q_max": q_max,
        "relations": relations,
        "ok": all(rel["pass"] for rel in relations),
    }
