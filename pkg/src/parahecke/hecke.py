"""Hecke algebras H_R(Gamma, P) and H_R(Gamma_M, M) in the right-coset basis.

An element is a finitely supported map from right cosets to R. Elements are
stored cosetwise; the T-basis is computed on demand by ``to_T_basis``.
"""

from enum import Enum
from functools import lru_cache

from .cosets import (DEFAULT_ORBIT_CAP, balance, balancing_modulus, coset_key,
                     decompose_double_coset, gamma_generators, truncation_level)
from .errors import DomainError
from .exact import ZZ, CoefficientRing
from .groups import GroupElement, ParabolicDatum
from .textio import format_matrix, format_terms


class Pair(str, Enum):
    """Which Hecke pair an element lives in: (P, Gamma) or (M, Gamma_M)."""

    P = "P"
    M = "M"


@lru_cache(maxsize=8192)
def cached_decomposition(g: GroupElement, datum: ParabolicDatum, level: str, cap: int):
    return decompose_double_coset(g, datum, level, cap)


def clear_caches():
    cached_decomposition.cache_clear()


def _simplicity(g: GroupElement):
    off = sum(1 for i, row in enumerate(g.num) for j, x in enumerate(row) if x and i != j)
    return (off, g.den, sum(abs(x) for row in g.num for x in row), g.num)


class HeckeElement:
    """sum_i c_i (Gamma g_i). ``terms`` maps coset keys to (representative, coefficient)."""

    __slots__ = ("datum", "pair", "ring", "terms", "invariant")

    def __init__(self, datum: ParabolicDatum, pair, ring: CoefficientRing = ZZ,
                 terms=None, invariant: bool = False):
        self.datum = datum
        self.pair = Pair(pair)
        self.ring = ring
        self.terms = terms or {}
        self.invariant = invariant

    @classmethod
    def from_cosets(cls, datum, pair, ring, cosets, invariant=False) -> "HeckeElement":
        """Collect (coefficient, representative) pairs into an element."""
        acc = {}
        level = Pair(pair).value
        for c, g in cosets:
            if not datum.in_group(g, level):
                raise DomainError(f"representative is not in {level}")
            k = coset_key(g, datum)
            if k in acc:
                acc[k] = (acc[k][0], acc[k][1] + c)
            else:
                acc[k] = (g, c)
        return cls(datum, pair, ring, _clean(acc, ring), invariant)

    @classmethod
    def zero(cls, datum, pair, ring=ZZ) -> "HeckeElement":
        return cls(datum, pair, ring, {}, True)

    @classmethod
    def one(cls, datum, pair, ring=ZZ) -> "HeckeElement":
        g = datum.identity()
        return cls(datum, pair, ring, {coset_key(g, datum): (g, 1)}, True)

    @property
    def level(self) -> str:
        return self.pair.value

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def cosets(self):
        """(coefficient, representative) pairs in key order."""
        return [(c, g) for _, (g, c) in sorted(self.terms.items())]

    def coefficient_map(self):
        return {k: c for k, (_, c) in self.terms.items()}

    def _check(self, other):
        if not isinstance(other, HeckeElement):
            raise TypeError("expected a HeckeElement")
        if other.datum != self.datum or other.pair != self.pair:
            raise DomainError("elements belong to different Hecke pairs")
        if other.ring != self.ring:
            raise DomainError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    def _new(self, terms, invariant):
        return HeckeElement(self.datum, self.pair, self.ring, _clean(terms, self.ring), invariant)

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, (g, c) in other.terms.items():
            acc[k] = (acc[k][0], acc[k][1] + c) if k in acc else (g, c)
        return self._new(acc, self.invariant and other.invariant)

    def __neg__(self):
        return self._new({k: (g, -c) for k, (g, c) in self.terms.items()}, self.invariant)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "HeckeElement":
        return self._new({k: (g, c * x) for k, (g, x) in self.terms.items()}, self.invariant)

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return hecke_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return (self.datum == other.datum and self.pair == other.pair and self.ring == other.ring
                and self.coefficient_map() == other.coefficient_map())

    __hash__ = None

    def base_change(self, ring: CoefficientRing) -> "HeckeElement":
        """R (x) -: reduce integer coefficients into ``ring``."""
        if self.ring.modulus is not None and (ring.modulus is None or self.ring.modulus % ring.modulus):
            raise DomainError(f"no ring map {self.ring} -> {ring}")
        return HeckeElement(self.datum, self.pair, ring, _clean(self.terms, ring), self.invariant)

    def act(self, s: GroupElement) -> "HeckeElement":
        """Right action (Gamma g) s = (Gamma g s)."""
        acc = {}
        for g, c in self.terms.values():
            h = _reduced(g @ s, self.datum)
            k = coset_key(h, self.datum)
            acc[k] = (acc[k][0], acc[k][1] + c) if k in acc else (h, c)
        return self._new(acc, False)

    def dump(self) -> str:
        """Cosetwise listing, one `coefficient  representative` per line."""
        return "\n".join(f"{c}  {format_matrix(g)}" for c, g in self.cosets()) or "0"

    def __str__(self):
        if self.invariant:
            return format_terms(to_T_basis(self))
        return self.dump()

    def __repr__(self):
        return f"HeckeElement({self.level}, {self.ring}, {len(self)} cosets)"


def _clean(terms, ring):
    out = {}
    for k, (g, c) in terms.items():
        c = ring.reduce(c)
        if c:
            out[k] = (g, c)
    return out


def _reduced(h: GroupElement, datum: ParabolicDatum) -> GroupElement:
    return balance(h, balancing_modulus(h, datum.p))


def hecke_T(g: GroupElement, datum: ParabolicDatum, pair=Pair.P, ring=ZZ,
            cap: int = DEFAULT_ORBIT_CAP) -> HeckeElement:
    """T_g: the sum of the right cosets in Gamma g Gamma, each with coefficient 1."""
    pair = Pair(pair)
    dec = cached_decomposition(g, datum, pair.value, cap)
    terms = {c.key: (c.rep, 1) for c in dec.cosets}
    return HeckeElement(datum, pair, ring, _clean(terms, ring), True)


def invariance_check(X: HeckeElement) -> bool:
    """X s = X for all generators s of Gamma modulo a level fixing every support coset."""
    if X.is_zero():
        return True
    N = max(truncation_level(g, X.datum.p) for g, _ in X.terms.values())
    return all(X.act(s) == X for s in gamma_generators(X.datum, N, X.level))


def hecke_mul(X: HeckeElement, Y: HeckeElement) -> HeckeElement:
    """sum a_i (Gamma g_i) * sum b_j (Gamma h_j) = sum a_i b_j (Gamma g_i h_j).

    X must be Gamma-invariant; Y may be any element of R[Gamma \\ S]."""
    X._check(Y)
    if not X.invariant:
        if not invariance_check(X):
            raise DomainError("left factor of a product must be Gamma-invariant")
        X.invariant = True
    d = X.datum
    acc = {}
    for h, b in Y.terms.values():
        for g, a in X.terms.values():
            gh = _reduced(g @ h, d)
            k = coset_key(gh, d)
            acc[k] = (acc[k][0], acc[k][1] + a * b) if k in acc else (gh, a * b)
    return X._new(acc, Y.invariant)


def to_T_basis(X: HeckeElement, cap: int = DEFAULT_ORBIT_CAP):
    """Write an invariant X as sum c_g T_g; returns sorted (coefficient, representative)."""
    remaining = dict(X.terms)
    out = []
    while remaining:
        k0 = min(remaining)
        rep, c = remaining[k0]
        dec = cached_decomposition(rep, X.datum, X.level, cap)
        for cos in dec.cosets:
            got = remaining.pop(cos.key, None)
            if got is None or got[1] != c:
                raise DomainError("element is not invariant: coefficients differ inside a double coset")
        best = min((cos.rep for cos in dec.cosets), key=_simplicity)
        out.append((c, best))
    out.sort(key=lambda t: (t[1].den, t[1].num))
    return out


def from_T_basis(pairs, datum, pair=Pair.P, ring=ZZ, cap: int = DEFAULT_ORBIT_CAP) -> HeckeElement:
    """sum c T_g for (c, g) pairs."""
    total = HeckeElement.zero(datum, pair, ring)
    for c, g in pairs:
        total = total + hecke_T(g, datum, pair, ring, cap).scale(c)
    return total
