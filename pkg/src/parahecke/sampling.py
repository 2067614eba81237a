"""Seeded random group elements and Hecke elements for property tests."""

import random
from fractions import Fraction

from .exact import ZZ
from .groups import GroupElement, ParabolicDatum
from .hecke import HeckeElement, Pair, hecke_T


def _block_perm(datum: ParabolicDatum, rnd: random.Random):
    out = []
    for s, e in datum.bounds:
        perm = list(range(s, e))
        rnd.shuffle(perm)
        out += perm
    return out


def random_levi_part(datum: ParabolicDatum, rnd: random.Random, bound: int) -> GroupElement:
    """w t with t = diag(+-p^e), e in [-bound, bound], and w a within-block permutation."""
    p, n = datum.p, datum.n
    diag = [rnd.choice((1, -1)) * Fraction(p) ** rnd.randint(-bound, bound) for _ in range(n)]
    w = _block_perm(datum, rnd)
    return GroupElement.from_rows([[diag[k] if w[l] == k else 0 for l in range(n)]
                                   for k in range(n)])


def random_unipotent(datum: ParabolicDatum, rnd: random.Random, bound: int, level: str = "P"):
    """Upper unipotent in P (or M) with entries x / p^j, |x| <= p, 0 <= j <= bound."""
    n, p = datum.n, datum.p
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k, l in datum.positions(level):
        if k < l and rnd.random() < 0.5:
            rows[k][l] = Fraction(rnd.randint(-p, p), p ** rnd.randint(0, bound))
    return GroupElement.from_rows(rows)


def random_group_element(datum: ParabolicDatum, rnd: random.Random, bound: int,
                         level: str = "P") -> GroupElement:
    return random_unipotent(datum, rnd, bound, level) @ random_levi_part(datum, rnd, bound)


def random_gamma(datum: ParabolicDatum, rnd: random.Random, level: str = "P",
                 height: int = 9) -> GroupElement:
    """A random element of Gamma (or Gamma_M)."""
    p, n = datum.p, datum.n
    rows = [[0] * n for _ in range(n)]
    for k, l in datum.positions(level):
        if k == l:
            while True:
                x = rnd.randint(-height, height)
                if x % p and (datum.flavor == "iwahori" or x % p == 1):
                    break
        elif k > l:
            x = p * rnd.randint(-height, height)
        else:
            x = rnd.randint(-height, height)
        rows[k][l] = x
    g = GroupElement.from_rows(rows)
    assert datum.member(g, datum.subgroup_of(level))
    return g


def random_coefficient(ring, rnd: random.Random) -> int:
    if ring.modulus is None:
        return rnd.choice([-3, -2, -1, 1, 2, 3])
    return rnd.randint(1, ring.modulus - 1)


def random_element(datum: ParabolicDatum, rnd: random.Random, pair=Pair.P, ring=ZZ,
                   bound: int = 1, size: int = 2) -> HeckeElement:
    """sum of ``size`` random multiples of T_g with g of bounded valuations."""
    pair = Pair(pair)
    X = HeckeElement.zero(datum, pair, ring)
    for _ in range(size):
        g = random_group_element(datum, rnd, bound, pair.value)
        X = X + hecke_T(g, datum, pair, ring).scale(random_coefficient(ring, rnd))
    return X


def random_positive_levi(datum: ParabolicDatum, rnd: random.Random, bound: int) -> GroupElement:
    """Random element of M^+ with bounded valuations (retry until positive)."""
    while True:
        m = random_group_element(datum, rnd, bound, "M")
        if datum.is_positive(m):
            return m


def random_positive_element(datum, rnd, ring=ZZ, bound: int = 1, size: int = 2) -> HeckeElement:
    """Random element of H_R(M^+) inside the Levi algebra."""
    X = HeckeElement.zero(datum, Pair.M, ring)
    for _ in range(size):
        m = random_positive_levi(datum, rnd, bound)
        X = X + hecke_T(m, datum, Pair.M, ring).scale(random_coefficient(ring, rnd))
    return X


def seeded(seed, name: str) -> random.Random:
    """Independent deterministic stream per (seed, property name)."""
    return random.Random(f"{seed}:{name}")
