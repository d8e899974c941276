"""filtra: exact arithmetic for congruence towers and split extensions.

Everything in this package computes with exact integers; there is no
floating point anywhere in the arithmetic.  The submodules are

- ``exactmat``   matrices over Z and Z/p^r, sign classes in PSL(2, Z/p^r)
- ``freegroup``  reduced words, endomorphisms, basis-conjugating fixtures
- ``holomorph``  semidirect-product element arithmetic over a classified action
- ``filtration`` congruence filtrations of (P)SL(2, Z) and their finite quotients
- ``stability``  empirical stability / Lie-like checks for split extensions
- ``graded``     the graded restricted Lie algebra of the congruence tower
- ``linrep``     the conjugation extension of SL(n, A) and its n^2-dimensional
  faithful representation
- ``cli``        the ``filtra`` command line front end
"""

__version__ = "0.1.0"

from .exactmat import IntMat, ModMat, Modulus, PslClass  # noqa: F401
