"""Independent brute-force oracles for the delicate group computations.

These deliberately avoid the shortcuts used by the implementation (normal
closures from generating sets, p-power order climbing, canonical lifts) and
recompute the same quantities by exhaustive enumeration over all pairs.
"""

from filtra.exactmat import Modulus, ModMat
from filtra.filtration import kernel_enumerate
from filtra.graded import GradedClass, basis_class, class_add, class_of, zero_class


def brute_frattini_rank(table):
    """d(G) from Phi(G) generated by every p-th power and every commutator,
    with the subgroup closure done over the full generator set."""
    elems = table.elements
    gens = set()
    for x in elems:
        gens.add(table.power(x, table.p))
    for x in elems:
        xinv = table.inv(x)
        for y in elems:
            gens.add(table.mul(table.mul(x, y), table.mul(xinv, table.inv(y))))
    gens.discard(table.identity)
    frat = {table.identity}
    frontier = [table.identity]
    gens = sorted(gens)
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = table.mul(cur, g)
            if nxt not in frat:
                frat.add(nxt)
                frontier.append(nxt)
    quotient = table.order // len(frat)
    d = 0
    while quotient > 1:
        quotient //= table.p
        d += 1
    return d


def brute_exponent(table):
    worst = 1
    for x in table.elements:
        k = 1
        y = x
        while y != table.identity:
            y = table.mul(y, x)
            k += 1
        worst = max(worst, k)
    return worst


def test_frattini_rank_matches_bruteforce():
    for p, i, j, family in ((3, 1, 2, "pgamma"), (3, 1, 3, "pgamma"),
                            (2, 1, 3, "gamma"), (2, 1, 2, "pgamma")):
        table = kernel_enumerate(p, i, j, family)
        assert table.minimal_generators() == brute_frattini_rank(table)


def test_exponent_matches_bruteforce():
    for p, i, j, family in ((3, 1, 2, "pgamma"), (3, 1, 3, "gamma"), (2, 1, 3, "pgamma")):
        table = kernel_enumerate(p, i, j, family)
        assert table.exponent() == brute_exponent(table)


def test_bracket_by_exhaustive_coset_pairing():
    # [A_1, B_1] = D_2 for every pair of representatives, not just the
    # canonical lifts: enumerate the whole level-1 kernel mod 27 and pick
    # the full cosets of A_1 and B_1 over the level-2 kernel.
    p = 3
    table = kernel_enumerate(p, 1, 3, "gamma")
    mod = Modulus(p, 3)

    def coset_of(cls):
        members = []
        for e in table.elements:
            m = ModMat((e[:2], e[2:]), mod)
            # class at level 1 needs the reduction mod p^2
            red = ModMat(m.entries, Modulus(p, 2))
            if class_of(red, 1) == cls:
                members.append(m)
        return members

    a_reps = coset_of(basis_class(p, 1, "A"))
    b_reps = coset_of(basis_class(p, 1, "B"))
    assert len(a_reps) == len(b_reps) == 27
    want = basis_class(p, 2, "D")
    for u in a_reps:
        for v in b_reps:
            comm = u * v * u.inverse() * v.inverse()
            assert class_of(comm, 2) == want


def test_layer_addition_by_exhaustive_table():
    # the coordinate map is an isomorphism onto the layer: bijective and
    # additive over the entire enumerated kernel
    for p in (3, 2):
        table = kernel_enumerate(p, 2, 3, "pgamma")
        mod = Modulus(p, 3)
        seen = {}
        for e in table.elements:
            cls = class_of(ModMat((e[:2], e[2:]), mod), 2)
            assert cls.coords not in seen
            seen[cls.coords] = e
        assert len(seen) == table.order
        assert zero_class(p, 2).coords in seen
        for c1, e1 in seen.items():
            for c2, e2 in seen.items():
                prod = table.mul(e1, e2)
                got = class_of(ModMat((prod[:2], prod[2:]), mod), 2)
                want = class_add(GradedClass(p, 2, c1), GradedClass(p, 2, c2))
                assert got == want
