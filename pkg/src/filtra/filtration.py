"""Congruence filtrations of (P)SL(2, Z) and their finite quotients.

A filtration here is the descending chain of congruence subgroups at levels
p^{r0}, p^{r0+1}, ... of either family:

- ``gamma``:  matrices congruent to I mod p^e (kernel of reduction on the
  integral matrix group), and
- ``pgamma``: sign classes, i.e. matrices congruent to +-I mod p^e.

``level_of`` measures how deep an element sits, ``kernel_enumerate`` builds
the finite quotient between two levels by complete enumeration, and
``check_p_congruence`` verifies the finite p-group and bounded-generation
conditions for every pair of levels up to a depth cap.

Minimal generator counts use the Burnside basis theorem: for a finite
p-group G, d(G) = log_p |G / Phi(G)| with Phi(G) generated by p-th powers
and commutators.  Phi is computed by explicit closure, which is fine at the
enumeration sizes guarded here.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass

from .exactmat import IntMat, Modulus, ModMat, PslClass, is_prime

#: Level value meaning "deeper than the truncation cap".
TOP = float("inf")

DEFAULT_ENUM_GUARD = 10 ** 7

FAMILIES = ("pgamma", "gamma")


class GuardError(RuntimeError):
    """Raised when a requested enumeration exceeds the desk-scale guard."""


class NotPGroup(ValueError):
    pass


def enum_guard_limit() -> int:
    value = os.environ.get("FILTRA_MAX_ENUM")
    if value:
        return int(value)
    return DEFAULT_ENUM_GUARD


@dataclass(frozen=True)
class FiltrationSpec:
    """A p-power congruence chain: level j sits at exponent r0 + j."""

    family: str
    p: int
    r0: int = 1
    depth_cap: int = 4

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("family must be one of %s, got %r" % (FAMILIES, self.family))
        if not is_prime(self.p):
            raise ValueError("p must be prime, got %r" % (self.p,))
        if self.r0 < 1:
            raise ValueError("base exponent must be >= 1")
        if self.depth_cap < 0:
            raise ValueError("depth cap must be >= 0")

    @property
    def allow_sign(self) -> bool:
        return self.family == "pgamma"

    def exponent(self, level: int) -> int:
        return self.r0 + level


def _valuation_to_identity(entries, n, p, cap, allow_sign):
    """Largest e <= cap with M = (+-)I mod p^e, as a truncated valuation."""
    best = 0
    signs = (1, -1) if allow_sign else (1,)
    for sign in signs:
        diffs = [entries[i][j] - (sign if i == j else 0) for i in range(n) for j in range(n)]
        v = cap
        for d in diffs:
            if d == 0:
                continue
            dv = 0
            while dv < v and d % p == 0:
                d //= p
                dv += 1
            v = min(v, dv)
            if v == 0:
                break
        best = max(best, v)
        if best == cap:
            break
    return best


def level_of(x, spec: FiltrationSpec):
    """Largest level j <= depth_cap with x in the level-j subgroup.

    Returns -1 when x is not even in the level-0 group and TOP when x is
    congruent to (+-)I one exponent beyond the cap, i.e. deeper than the
    truncation can distinguish.
    """
    cap_exp = spec.r0 + spec.depth_cap + 1
    if isinstance(x, IntMat):
        if x.n != 2:
            raise ValueError("expected a 2x2 matrix, got %dx%d" % (x.n, x.n))
        if x.det() != 1:
            raise ValueError("expected determinant 1, got %d" % x.det())
        entries = x.entries
    elif isinstance(x, (ModMat, PslClass)):
        mat = x.rep if isinstance(x, PslClass) else x
        if mat.modulus.p != spec.p:
            raise ValueError("modulus prime %d does not match filtration prime %d" % (mat.modulus.p, spec.p))
        if mat.modulus.r < cap_exp:
            raise GuardError(
                "modulus %s too shallow to resolve levels up to cap %d" % (mat.modulus, spec.depth_cap)
            )
        entries = mat.entries
    else:
        raise TypeError("level_of expects IntMat, ModMat, or PslClass, got %r" % type(x))
    v = _valuation_to_identity(entries, 2, spec.p, cap_exp, spec.allow_sign)
    if v >= cap_exp:
        return TOP
    if v >= spec.r0:
        return v - spec.r0
    return -1


def exact_congruence_exponent(x: IntMat, p: int, allow_sign: bool, bail: int = 64):
    """Untruncated congruence exponent of an integer matrix; TOP past bail."""
    v = _valuation_to_identity(x.entries, x.n, p, bail, allow_sign)
    return TOP if v >= bail else v


def congruence_basis(p: int, q: int) -> dict:
    """The three determinant-one integer matrices generating depth p^q:
    upper and lower unipotents with offdiagonal p^q, and the mixed one with
    diagonal 1 +- p^q."""
    t = p ** q
    return {
        "A": IntMat(((1, t), (0, 1))),
        "B": IntMat(((1, 0), (t, 1))),
        "C": IntMat(((1 + t, t), (-t, 1 - t))),
    }


# --- finite quotients -------------------------------------------------------

def _flat_mul(x, y, m):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)


def _flat_inv(x, m):
    # valid because every element here has determinant 1 mod m
    a, b, c, d = x
    return (d % m, -b % m, -c % m, a % m)


_FLAT_ID = (1, 0, 0, 1)


def _scalar_subgroup(p, i, j):
    """Scalars lam = 1 + p^i mu with lam^2 = 1 mod p^j (the central scalars
    living inside the enumerated kernel).  Trivial for odd p."""
    pi_, pj = p ** i, p ** j
    return tuple(
        lam for mu in range(p ** (j - i)) if ((lam := (1 + pi_ * mu) % pj) * lam) % pj == 1
    )


class QuotientTable:
    """The finite quotient between congruence levels p^i and p^j.

    Elements are canonical flat 2x2 tuples mod p^j of matrices I + p^i N
    with determinant 1 mod p^j; for the pgamma family each element is
    additionally normalized across the central scalar classes, which
    identifies the sign ambiguity of the quotient.
    """

    def __init__(self, p, i, j, family, elements, scalars):
        self.p = p
        self.i = i
        self.j = j
        self.family = family
        self.modulus = Modulus(p, j)
        self.scalars = scalars
        self.elements = tuple(sorted(elements))
        self._members = frozenset(self.elements)
        self.identity = self.canon(_FLAT_ID)
        self._d = None
        self._exponent = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def canon(self, flat):
        if len(self.scalars) == 1:
            return flat
        m = self.modulus.m
        return min(tuple((lam * e) % m for e in flat) for lam in self.scalars)

    def mul(self, x, y):
        return self.canon(_flat_mul(x, y, self.modulus.m))

    def inv(self, x):
        return self.canon(_flat_inv(x, self.modulus.m))

    def power(self, x, k):
        out = self.identity
        base = x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def __contains__(self, flat):
        return self.canon(flat) in self._members

    def matrices(self):
        return [ModMat((e[:2], e[2:]), self.modulus) for e in self.elements]

    def element_order(self, x):
        # orders are p-powers, so climb by repeated p-th powers
        k = 1
        y = x
        while y != self.identity:
            y = self.power(y, self.p)
            k *= self.p
            if k > self.order:
                raise NotPGroup("element order is not a p-power")
        return k

    def exponent(self) -> int:
        if self._exponent is None:
            self._exponent = max(self.element_order(x) for x in self.elements)
        return self._exponent

    def is_p_group(self) -> bool:
        n = self.order
        while n % self.p == 0:
            n //= self.p
        return n == 1

    def is_abelian(self) -> bool:
        gens = self.greedy_generators()
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
        )

    def is_elementary_abelian(self) -> bool:
        return self.is_abelian() and self.exponent() == self.p

    # -- subgroup machinery (desk scale: plain closures over element sets) --

    def _closure(self, gens):
        gens = [self.canon(g) for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def greedy_generators(self):
        gens = []
        have = {self.identity}
        for x in self.elements:
            if x not in have:
                gens.append(x)
                have = self._closure(gens)
                if len(have) == self.order:
                    break
        return gens

    def _commutator_subgroup(self, gens):
        ngens = {
            self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
            for a in gens
            for b in gens
        }
        ngens.discard(self.identity)
        sub = self._closure(ngens) if ngens else {self.identity}
        # normal closure: stabilize under conjugation by the group generators
        while True:
            extra = set()
            for g in gens:
                ginv = self.inv(g)
                for x in sub:
                    y = self.mul(self.mul(g, x), ginv)
                    if y not in sub:
                        extra.add(y)
            if not extra:
                return sub
            ngens |= extra
            sub = self._closure(ngens)

    def minimal_generators(self) -> int:
        """d(G) = log_p |G / Phi(G)| via the elementary abelian quotient."""
        if self._d is not None:
            return self._d
        if not self.is_p_group():
            raise NotPGroup("order %d is not a power of %d" % (self.order, self.p))
        if self.order == 1:
            self._d = 0
            return 0
        if self.is_elementary_abelian():
            self._d = _plog(self.order, self.p)
            return self._d
        gens = self.greedy_generators()
        derived = self._commutator_subgroup(gens)
        coset = self._coset_map(derived)
        reps = sorted(set(coset.values()))
        # p-th powers in the abelianization form a subgroup
        ppowers = {coset[self.power(r, self.p)] for r in reps}
        self._d = _plog(len(reps) // len(ppowers), self.p)
        return self._d

    def _coset_map(self, subgroup):
        sub = sorted(subgroup)
        coset = {}
        for g in self.elements:
            if g in coset:
                continue
            members = [self.mul(g, s) for s in sub]
            rep = min(members)
            for x in members:
                coset[x] = rep
        return coset

    def generating_set(self):
        """A generating set of size exactly d(G) (Burnside basis theorem):
        elements whose images span the elementary abelian quotient G/Phi(G)
        generate G."""
        d = self.minimal_generators()
        if d == 0:
            return []
        gens = self.greedy_generators()
        derived = self._commutator_subgroup(gens)
        coset = self._coset_map(derived)
        reps = sorted(set(coset.values()))

        def amul(r1, r2):
            return coset[self.mul(r1, r2)]

        ppowers = sorted({coset[self.power(r, self.p)] for r in reps})
        vmap = {}
        for r in reps:
            if r in vmap:
                continue
            members = [amul(r, s) for s in ppowers]
            rep = min(members)
            for x in members:
                vmap[x] = rep

        def vmul(v1, v2):
            return vmap[amul(v1, v2)]

        def v_of(x):
            return vmap[coset[x]]

        picked = []
        span_v = {v_of(self.identity)}
        for x in self.elements:
            vx = v_of(x)
            if vx not in span_v:
                picked.append(x)
                grown = set(span_v)
                for s in span_v:
                    cur = s
                    for _ in range(self.p - 1):
                        cur = vmul(cur, vx)
                        grown.add(cur)
                span_v = grown
                if len(picked) == d:
                    break
        if len(picked) != d or len(self._closure(picked)) != self.order:
            raise RuntimeError("generating-set extraction failed")  # pragma: no cover
        return picked

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "i": self.i,
            "j": self.j,
            "order": self.order,
            "exponent": self.exponent(),
            "d": self.minimal_generators(),
            "elementary_abelian": self.is_elementary_abelian(),
        }


def _plog(n, p):
    k = 0
    while n > 1:
        if n % p:
            raise NotPGroup("%d is not a power of %d" % (n, p))
        n //= p
        k += 1
    return k


_table_cache: dict = {}


def kernel_enumerate(p: int, i: int, j: int, family: str = "pgamma") -> QuotientTable:
    """Enumerate the quotient between congruence levels p^i and p^j.

    Lists every M = I + p^i N (N over Z/p^{j-i}) with det = 1 mod p^j; for
    the pgamma family the result is normalized across central scalar
    classes.  Guarded by p^{4(j-i)} <= FILTRA_MAX_ENUM (default 10^7).
    """
    if family not in FAMILIES:
        raise ValueError("family must be one of %s" % (FAMILIES,))
    if not (1 <= i < j):
        raise ValueError("need 1 <= i < j, got i=%d j=%d" % (i, j))
    if not is_prime(p):
        raise ValueError("p must be prime, got %r" % (p,))
    work = p ** (4 * (j - i))
    limit = enum_guard_limit()
    if work > limit:
        raise GuardError("enumeration size p^{4(j-i)} = %d exceeds guard %d" % (work, limit))
    key = (p, i, j, family)
    if key in _table_cache:
        return _table_cache[key]
    span = p ** (j - i)
    pi_, pj = p ** i, p ** j
    scalars = _scalar_subgroup(p, i, j) if family == "pgamma" else (1,)
    raw = []
    for n00, n01, n10, n11 in itertools.product(range(span), repeat=4):
        a = (1 + pi_ * n00) % pj
        b = (pi_ * n01) % pj
        c = (pi_ * n10) % pj
        d = (1 + pi_ * n11) % pj
        if (a * d - b * c) % pj == 1:
            raw.append((a, b, c, d))
    if len(scalars) > 1:
        m = pj
        canon = {min(tuple((lam * e) % m for e in flat) for lam in scalars) for flat in raw}
    else:
        canon = set(raw)
    table = QuotientTable(p, i, j, family, canon, scalars)
    _table_cache[key] = table
    return table


def minimal_generators(table: QuotientTable) -> int:
    """Minimal number of generators of a finite p-group quotient."""
    return table.minimal_generators()


def check_p_congruence(spec: FiltrationSpec, j_max: int, bound_e: int,
                       sample_count: int = 60, seed: int = 2715) -> dict:
    """Verify the finite p-group and bounded-generation conditions.

    For every 0 <= i < j <= j_max the quotient between levels i and j must
    be a finite p-group with d <= bound_e; additionally a seeded sample of
    generator words is checked for consistency between the truncated
    level_of and the exact congruence exponent (no finite-depth element may
    report TOP).
    """
    pairs = []
    ok = True
    for i in range(j_max):
        for j in range(i + 1, j_max + 1):
            table = kernel_enumerate(spec.p, spec.exponent(i), spec.exponent(j), spec.family)
            entry = table.to_dict()
            entry["levels"] = [i, j]
            entry["p_group"] = table.is_p_group()
            entry["d_le_e"] = entry["d"] <= bound_e
            entry["pass"] = entry["p_group"] and entry["d_le_e"]
            ok = ok and entry["pass"]
            pairs.append(entry)

    rng = random.Random("pcongruence:%d:%s:%d" % (spec.p, spec.family, seed))
    basis = [congruence_basis(spec.p, spec.exponent(lv)) for lv in range(spec.depth_cap + 1)]
    gens = [m for lv in basis for m in lv.values()]
    gens += [m.inverse() for m in gens]
    truncation_failures = []
    for _ in range(sample_count):
        w = IntMat.identity(2)
        for _ in range(rng.randint(1, 6)):
            w = w * rng.choice(gens)
        exact = exact_congruence_exponent(w, spec.p, spec.allow_sign)
        reported = level_of(w, spec)
        if exact is TOP:
            expected = TOP
        elif exact >= spec.r0 + spec.depth_cap + 1:
            expected = TOP
        elif exact >= spec.r0:
            expected = exact - spec.r0
        else:
            expected = -1
        if reported != expected:
            truncation_failures.append({"matrix": str(w), "reported": _level_json(reported), "exact": _level_json(exact)})
    ok = ok and not truncation_failures
    return {
        "family": spec.family,
        "p": spec.p,
        "r0": spec.r0,
        "j_max": j_max,
        "bound_e": bound_e,
        "pairs": pairs,
        "truncation_check": {"samples": sample_count, "failures": truncation_failures},
        "ok": ok,
    }


def _level_json(level):
    return "top" if level is TOP else level
