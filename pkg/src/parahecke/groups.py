"""Block upper-triangular parabolics P = U x M of GL_n(Q_p) and their Iwahori-type
compact open subgroups Gamma = Gamma_U Gamma_M.

Group elements are exact rational matrices (Q is dense in Q_p, and every coset
of an open subgroup has rational representatives).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, gcd

from .errors import DomainError, InvariantViolation
from .exact import INFINITY, split_p, valuation

FLAVORS = ("iwahori", "pro-p")
SUBGROUPS = ("Gamma", "GammaU", "GammaM", "GLnZp")


def int_det(a) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(a)
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class GroupElement:
    """The rational matrix num / den, kept in lowest terms (den > 0)."""

    num: tuple
    den: int = 1

    @classmethod
    def make(cls, num, den: int = 1) -> "GroupElement":
        if den < 0:
            num = [[-x for x in row] for row in num]
            den = -den
        g = den
        for row in num:
            for x in row:
                if g == 1:
                    break
                g = gcd(g, x)
        if g != 1:
            num = [[x // g for x in row] for row in num]
            den //= g
        return cls(tuple(tuple(row) for row in num), den)

    @classmethod
    def from_rows(cls, rows) -> "GroupElement":
        fr = [[Fraction(x) for x in row] for row in rows]
        n = len(fr)
        if any(len(row) != n for row in fr):
            raise DomainError("matrix must be square")
        den = 1
        for row in fr:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        return cls.make([[int(x * den) for x in row] for row in fr], den)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)

    @classmethod
    def diagonal(cls, entries) -> "GroupElement":
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.num)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.num[i][j], self.den)

    def rows(self):
        return [[Fraction(x, self.den) for x in row] for row in self.num]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.num, other.num
        cols = list(zip(*b))
        prod = [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]
        return GroupElement.make(prod, self.den * other.den)

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        out = GroupElement.identity(self.n)
        for _ in range(abs(k)):
            out = out @ base
        return out

    def scale(self, c) -> "GroupElement":
        c = Fraction(c)
        return GroupElement.make([[x * c.numerator for x in row] for row in self.num],
                                 self.den * c.denominator)

    @cached_property
    def det(self) -> Fraction:
        return Fraction(int_det(self.num), self.den ** self.n)

    def inverse(self) -> "GroupElement":
        n = self.n
        m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.num)]
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                raise DomainError("matrix is singular")
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [x * inv for x in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        # (num/den)^{-1} = den * num^{-1}
        return GroupElement.from_rows([[x * self.den for x in row[n:]] for row in m])

    def min_valuation(self, p: int):
        return min(valuation(self.entry(i, j), p) for i in range(self.n) for j in range(self.n))

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.n)

    def __str__(self):
        from .textio import format_matrix
        return format_matrix(self)


@dataclass(frozen=True)
class ParabolicDatum:
    """Prime p, block sizes (n_1, ..., n_r) and the flavor of Gamma.

    P is block upper triangular, M block diagonal, U block unipotent. Gamma_M is
    the product of the (pro-p) Iwahori subgroups of the GL_{n_i}(Z_p) and
    Gamma_U the integral points of U.
    """

    p: int
    blocks: tuple
    flavor: str = "iwahori"

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise DomainError(f"p={self.p} is not prime")
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise DomainError("block sizes must be positive")
        if self.flavor not in FLAVORS:
            raise DomainError(f"flavor must be one of {FLAVORS}")

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @cached_property
    def bounds(self):
        out, start = [], 0
        for b in self.blocks:
            out.append((start, start + b))
            start += b
        return tuple(out)

    @cached_property
    def block_of(self):
        return tuple(i for i, (s, e) in enumerate(self.bounds) for _ in range(s, e))

    def header(self) -> str:
        return "p=%d blocks=%s flavor=%s" % (self.p, ",".join(map(str, self.blocks)), self.flavor)

    def positions(self, level: str = "P"):
        """Matrix positions allowed in P (or M)."""
        bo = self.block_of
        if level == "P":
            return tuple((k, l) for k in range(self.n) for l in range(self.n) if bo[k] <= bo[l])
        return tuple((k, l) for k in range(self.n) for l in range(self.n) if bo[k] == bo[l])

    # -- shapes -----------------------------------------------------------

    def _zero_outside(self, g: GroupElement, level: str) -> bool:
        bo = self.block_of
        for k in range(self.n):
            for l in range(self.n):
                if g.num[k][l] and (bo[k] > bo[l] if level == "P" else bo[k] != bo[l]):
                    return False
        return True

    def in_P(self, g: GroupElement) -> bool:
        return g.n == self.n and self._zero_outside(g, "P") and g.det != 0

    def in_M(self, g: GroupElement) -> bool:
        return g.n == self.n and self._zero_outside(g, "M") and g.det != 0

    def in_U(self, g: GroupElement) -> bool:
        if not (g.n == self.n and self._zero_outside(g, "P")):
            return False
        bo = self.block_of
        return all(g.num[k][l] == (g.den if k == l else 0)
                   for k in range(self.n) for l in range(self.n) if bo[k] == bo[l])

    def in_group(self, g: GroupElement, level: str) -> bool:
        return self.in_P(g) if level == "P" else self.in_M(g)

    def element(self, rows) -> GroupElement:
        g = rows if isinstance(rows, GroupElement) else GroupElement.from_rows(rows)
        if g.n != self.n:
            raise DomainError(f"expected a {self.n}x{self.n} matrix")
        if not self._zero_outside(g, "P"):
            raise DomainError("matrix is not block upper triangular")
        if g.det == 0:
            raise DomainError("matrix is singular")
        return g

    def identity(self) -> GroupElement:
        return GroupElement.identity(self.n)

    def diag(self, *entries) -> GroupElement:
        if len(entries) != self.n:
            raise DomainError(f"expected {self.n} diagonal entries")
        return GroupElement.diagonal(entries)

    def block_scalar(self, *scalars) -> GroupElement:
        if len(scalars) != self.r:
            raise DomainError(f"expected {self.r} block scalars")
        return GroupElement.diagonal([scalars[self.block_of[i]] for i in range(self.n)])

    def strictly_positive_template(self) -> GroupElement:
        """Block scalars p^(r-1), ..., p, 1."""
        return self.block_scalar(*[self.p ** (self.r - 1 - i) for i in range(self.r)])

    # -- factorization and membership ------------------------------------

    def levi_part(self, g: GroupElement) -> GroupElement:
        bo = self.block_of
        return GroupElement.make([[x if bo[k] == bo[l] else 0 for l, x in enumerate(row)]
                                  for k, row in enumerate(g.num)], g.den)

    def factor_um(self, g: GroupElement):
        """Return (u, m) with g = u m, u in U and m the block diagonal of g."""
        if not self._zero_outside(g, "P"):
            raise DomainError("element is not in P")
        m = self.levi_part(g)
        if m.det == 0:
            raise DomainError("malformed element: singular diagonal block")
        return g @ m.inverse(), m

    def _iwahori_ok(self, g: GroupElement, level: str) -> bool:
        p, bo = self.p, self.block_of
        k_, w = split_p(g.den, p)
        if k_:
            # entries must still be integral after the p-part of den cancels
            q = p ** k_
            if any(x % q for row in g.num for x in row):
                return False
        den = g.den
        for k in range(self.n):
            for l in range(self.n):
                x = g.num[k][l]
                if bo[k] != bo[l]:
                    if bo[k] > bo[l] or level == "M":
                        if x:
                            return False
                    continue
                if k > l and x and valuation(Fraction(x, den), p) < 1:
                    return False
                if k == l:
                    if valuation(Fraction(x, den), p) != 0:
                        return False
                    if self.flavor == "pro-p" and (x - den) % p:
                        return False
        return True

    def member(self, g: GroupElement, which: str = "Gamma") -> bool:
        """Exact membership of g (an element of P) in Gamma, Gamma_U, Gamma_M or GL_n(Z_p)."""
        if which not in SUBGROUPS:
            raise DomainError(f"unknown subgroup {which!r}")
        if which == "GLnZp":
            return g.min_valuation(self.p) >= 0 and valuation(g.det, self.p) == 0
        if which == "GammaU":
            return self.in_U(g) and g.min_valuation(self.p) >= 0
        if which == "GammaM":
            return self.in_M(g) and self._iwahori_ok(g, "M")
        u, m = self.factor_um(g)
        return self.member(u, "GammaU") and self.member(m, "GammaM")

    def subgroup_of(self, level: str) -> str:
        return "Gamma" if level == "P" else "GammaM"

    # -- positivity ------------------------------------------------------

    def _blocks_of(self, m: GroupElement):
        return [GroupElement.make([row[s:e] for row in m.num[s:e]], m.den) for s, e in self.bounds]

    def _require_M(self, m: GroupElement):
        if not self.in_M(m):
            raise DomainError("element is not in the Levi M")

    def _pair_deficits(self, m: GroupElement):
        """For block pairs i<j: min valuation of m_i E m_j^{-1} over matrix units E."""
        blocks = self._blocks_of(m)
        invs = [b.inverse() for b in blocks]
        p = self.p
        out = {}
        for i in range(self.r):
            for j in range(i + 1, self.r):
                mi, mj_inv = blocks[i], invs[j]
                worst = INFINITY
                for k in range(mi.n):
                    for l in range(mj_inv.n):
                        for x in range(mi.n):
                            a = mi.entry(x, k)
                            if not a:
                                continue
                            for y in range(mj_inv.n):
                                b = mj_inv.entry(l, y)
                                if b:
                                    worst = min(worst, valuation(a * b, p))
                out[(i, j)] = worst
        return out

    def is_positive(self, m: GroupElement) -> bool:
        """m Gamma_U m^{-1} is contained in Gamma_U; checked on matrix units."""
        self._require_M(m)
        return all(v >= 0 for v in self._pair_deficits(m).values())

    def block_scalars(self, a: GroupElement):
        """The scalars lambda_i if every diagonal block of a is scalar, else None."""
        if not self.in_M(a):
            return None
        out = []
        for s, e in self.bounds:
            lam = a.num[s][s]
            for k in range(s, e):
                for l in range(s, e):
                    if a.num[k][l] != (lam if k == l else 0):
                        return None
            out.append(Fraction(lam, a.den))
        return out

    def is_strictly_positive(self, a: GroupElement) -> bool:
        lams = self.block_scalars(a)
        if lams is None or not self.is_positive(a):
            return False
        vals = [valuation(x, self.p) for x in lams]
        return all(vals[i] > vals[j] for i in range(self.r) for j in range(i + 1, self.r))

    def positive_shift(self, a: GroupElement, m: GroupElement) -> int:
        """Least n > 0 with a^n m positive."""
        if not self.is_strictly_positive(a):
            raise DomainError("a is not strictly positive")
        self._require_M(m)
        vals = [valuation(x, self.p) for x in self.block_scalars(a)]
        cap = 1
        for (i, j), v in self._pair_deficits(m).items():
            if v < 0:
                cap = max(cap, ceil(-v / (vals[i] - vals[j])))
        an = self.identity()
        for n in range(1, cap + 1):
            an = an @ a
            if an @ m != m @ an:
                raise InvariantViolation("strictly positive element is not central in M")
            if self.is_positive(an @ m):
                return n
        raise InvariantViolation(f"positive_shift exceeded its bound {cap}")

    def min_positive_shift(self, a: GroupElement, m: GroupElement) -> int:
        """Least n >= 0 with a^n m positive."""
        return 0 if self.is_positive(m) else self.positive_shift(a, m)

    def modulus_character(self, g: GroupElement) -> Fraction:
        """delta(g) = |Gamma \\ Gamma g Gamma| / |Gamma g Gamma / Gamma| as a power of p."""
        _, m = self.factor_um(g)
        dets = [b.det for b in self._blocks_of(m)]
        e = 0
        for i in range(self.r):
            for j in range(i + 1, self.r):
                e += (self.blocks[j] * valuation(dets[i], self.p)
                      - self.blocks[i] * valuation(dets[j], self.p))
        return Fraction(self.p) ** e
