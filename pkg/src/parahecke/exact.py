"""Exact scalars: p-adic valuations, Z[1/p] numbers, residues and coefficient rings."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
import re

from .errors import DomainError, ParseError

INFINITY = inf


def vp_int(x: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("vp_int(0)")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def split_p(x: int, p: int):
    """Return (v, w) with x = p**v * w and p not dividing w; x must be nonzero."""
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def valuation(x, p: int):
    """p-adic valuation of an int, Fraction or PScaled; INFINITY for zero."""
    if isinstance(x, PScaled):
        return INFINITY if x.numerator == 0 else -x.exponent
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def is_power_of(d: int, p: int) -> bool:
    if d < 1:
        return False
    while d % p == 0:
        d //= p
    return d == 1


@dataclass(frozen=True)
class PScaled:
    """The number numerator / p**exponent with numerator prime to p (or zero)."""

    numerator: int
    exponent: int
    prime: int

    def __post_init__(self):
        if self.numerator == 0:
            if self.exponent != 0:
                raise ValueError("zero must have exponent 0")
        elif self.numerator % self.prime == 0:
            raise ValueError("numerator divisible by p; use PScaled.make")

    @classmethod
    def make(cls, numerator: int, exponent: int, p: int) -> "PScaled":
        if numerator == 0:
            return cls(0, 0, p)
        v, w = split_p(numerator, p)
        return cls(w, exponent - v, p)

    @classmethod
    def from_fraction(cls, x, p: int) -> "PScaled":
        x = Fraction(x)
        k, w = split_p(x.denominator, p)
        if w != 1:
            raise DomainError(f"{x} is not in Z[1/{p}]")
        return cls.make(x.numerator, k, p)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator) / Fraction(self.prime) ** self.exponent

    def _same(self, other):
        if isinstance(other, int):
            return PScaled.make(other, 0, self.prime)
        if not isinstance(other, PScaled) or other.prime != self.prime:
            return NotImplemented
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        e = max(self.exponent, other.exponent)
        p = self.prime
        n = self.numerator * p ** (e - self.exponent) + other.numerator * p ** (e - other.exponent)
        return PScaled.make(n, e, p)

    __radd__ = __add__

    def __neg__(self):
        return PScaled(-self.numerator, self.exponent, self.prime)

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return PScaled.make(self.numerator * other.numerator,
                            self.exponent + other.exponent, self.prime)

    __rmul__ = __mul__

    def valuation(self):
        return valuation(self, self.prime)

    def reduce(self, N: int) -> "Residue":
        """Image in Z/p^N; only defined for p-adic integers."""
        if self.exponent > 0:
            raise DomainError("reduce() needs valuation >= 0")
        return Residue(self.numerator * self.prime ** (-self.exponent), self.prime, N)

    def __str__(self):
        return format_scalar(self.to_fraction())


@dataclass(frozen=True)
class Residue:
    """An element of Z/p^N, stored reduced."""

    value: int
    prime: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime ** self.N

    def signed(self) -> int:
        """Lift to the balanced range (-m/2, m/2]."""
        m = self.modulus
        return self.value - m if self.value > m // 2 else self.value

    def __add__(self, other):
        return Residue(self.value + other.value, self.prime, self.N)

    def __mul__(self, other):
        return Residue(self.value * other.value, self.prime, self.N)

    def __neg__(self):
        return Residue(-self.value, self.prime, self.N)


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(x: int, m: int) -> int:
    if gcd(x, m) != 1:
        raise DomainError(f"{x} is not a unit mod {m}")
    k, y = 1, x % m
    while y != 1 % m:
        y = y * x % m
        k += 1
    return k


def unit_group_generators(p: int, N: int):
    """Generators of (Z/p^N)^x.

    Odd p: the least primitive root, found by brute force and checked through
    its order. p = 2: -1 and 5 (fewer for N <= 2).
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    m = p ** N
    if p == 2:
        if N == 1:
            return []
        if N == 2:
            return [Residue(-1, p, N)]
        return [Residue(-1, p, N), Residue(5, p, N)]
    phi = m - m // p
    qs = _prime_factors(phi)
    for c in range(2, m):
        if c % p and all(pow(c, phi // q, m) != 1 for q in qs):
            return [Residue(c, p, N)]
    raise AssertionError("no primitive root found")  # pragma: no cover


def principal_unit_generators(p: int, N: int):
    """Generators of the image of 1 + pZ_p in (Z/p^N)^x (pro-p flavor)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    if p == 2:
        return unit_group_generators(2, N)
    if N == 1:
        return []
    return [Residue(1 + p, p, N)]


def generated_subgroup(gens, m: int):
    """Closure of the given residues under multiplication mod m."""
    seen = {1 % m}
    frontier = [1 % m]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * (g.value if isinstance(g, Residue) else g) % m
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


class CoefficientRing:
    """The coefficient ring R: either Z (modulus None) or Z/m with m >= 2."""

    __slots__ = ("modulus",)

    def __init__(self, modulus=None):
        if modulus is not None and modulus < 2:
            raise DomainError("Z/m needs m >= 2")
        self.modulus = modulus

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        t = text.strip().lower()
        if t in ("z", "zz"):
            return cls(None)
        m = re.fullmatch(r"(?:mod:|z/)(\d+)", t)
        if not m:
            raise ParseError(f"bad coefficient ring {text!r}; expected 'z' or 'mod:m'")
        return cls(int(m.group(1)))

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.modulus is None:
            return x in (1, -1)
        return gcd(x, self.modulus) == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise DomainError(f"{x} is not a unit in {self}")
        return x if self.modulus is None else pow(x, -1, self.modulus)

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("ring", self.modulus))

    def __repr__(self):
        return "CoefficientRing(%r)" % self.modulus

    def __str__(self):
        return "z" if self.modulus is None else f"mod:{self.modulus}"


ZZ = CoefficientRing(None)

_SCALAR = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_scalar(text: str, p: int, line=1, column=1) -> Fraction:
    """Parse 'a' or 'a/b' where b must be a power of p."""
    m = _SCALAR.fullmatch(text)
    if not m:
        raise ParseError(f"bad scalar {text!r}", line, column)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if not is_power_of(den, p):
        raise ParseError(f"denominator {den} is not a power of {p}", line, column)
    return Fraction(num, den)


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
