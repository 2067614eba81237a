"""Hand-built modules for p = 2, blocks (1,1), iwahori flavor.

Every matrix is computed from an actual ring homomorphism out of H_R(P), so the
specs are genuine modules:

- degree characters  sum c_i (Gamma g_i) -> sum c_i psi(g_i),
- left-degree characters  T_g -> |Gamma \\ Gamma g Gamma| psi(g),
- pullbacks along Theta of H_R(M) = R[x^{+-1}, y^{+-1}] acting through two
  commuting invertible matrices,

and direct sums of these. psi(g) = alpha_1^{v(det m_1)} alpha_2^{v(det m_2)}
is an unramified character of P (trivial on Gamma).
"""

from fractions import Fraction

from .exact import CoefficientRing, valuation
from .groups import GroupElement, ParabolicDatum
from .hecke import HeckeElement, Pair, hecke_T, to_T_basis
from .levi import theta
from .linalg import identity, inverse_mod, matmul, matpow
from .modules import Assignment, ModuleSpec

DATUM = ParabolicDatum(2, (1, 1), "iwahori")
A = DATUM.diag(2, 1)
B = DATUM.diag(4, 2)

ASSIGNED = [
    ("Ta", (2, 1)),
    ("Tb", (4, 2)),
    ("T12", (1, 2)),
    ("Tz", (2, 2)),
    ("Tzi", (Fraction(1, 2), Fraction(1, 2))),
    ("Tai", (Fraction(1, 2), 1)),
]

INDUCE = [(1, 1), (Fraction(1, 2), 1), (1, 2), (2, 2), (Fraction(1, 2), Fraction(1, 2)),
          (1, Fraction(1, 2))]


def _psi(g: GroupElement, alphas, m: int) -> int:
    _, lev = DATUM.factor_um(g)
    out = 1
    for (s, e), al in zip(DATUM.bounds, alphas):
        blk = GroupElement.make([row[s:e] for row in lev.num[s:e]], lev.den)
        v = valuation(blk.det, DATUM.p)
        out = out * pow(al, v, m) % m if v >= 0 else out * pow(pow(al, -1, m), -v, m) % m
    return out


def degree(alphas=(1, 1)):
    def rho(X: HeckeElement, m: int):
        return [[sum(c * _psi(g, alphas, m) for g, c in X.terms.values()) % m]]
    return rho


def left_degree(alphas=(1, 1)):
    def rho(X: HeckeElement, m: int):
        total = Fraction(0)
        for c, g in to_T_basis(X):
            L = len(hecke_T(g, DATUM, Pair.P).terms)
            total += c * L * DATUM.modulus_character(g) * _psi(g, alphas, m)
        assert total.denominator == 1
        return [[int(total) % m]]
    return rho


def pullback(X0, Y0):
    """Theta-pullback of x -> X0, y -> Y0 (x, y: the two torus coordinates)."""
    def rho(X: HeckeElement, m: int):
        d = len(X0)
        Xi, Yi = inverse_mod(X0, m), inverse_mod(Y0, m)
        out = [[0] * d for _ in range(d)]
        for g, c in theta(X).terms.values():
            i = valuation(g.entry(0, 0), DATUM.p)
            j = valuation(g.entry(1, 1), DATUM.p)
            term = matmul(matpow(X0 if i >= 0 else Xi, abs(i), m),
                          matpow(Y0 if j >= 0 else Yi, abs(j), m), m)
            out = [[(x + c * y) % m for x, y in zip(r, s)] for r, s in zip(out, term)]
        return out
    return rho


def direct_sum(*parts):
    """parts: (rho, dim) pairs."""
    def rho(X: HeckeElement, m: int):
        d = sum(k for _, k in parts)
        out = [[0] * d for _ in range(d)]
        off = 0
        for r, k in parts:
            blk = r(X, m)
            for i in range(k):
                for j in range(k):
                    out[off + i][off + j] = blk[i][j]
            off += k
        return out
    return rho


def build_spec(name: str, rho, dim: int, m: int) -> ModuleSpec:
    ring = CoefficientRing(m)
    asgs = []
    one = HeckeElement.one(DATUM, Pair.P, ring)
    asgs.append(Assignment("1", one, rho(one, m) if dim else []))
    for label, diag in ASSIGNED:
        X = hecke_T(DATUM.diag(*diag), DATUM, Pair.P, ring)
        asgs.append(Assignment(label, X, rho(X, m) if dim else []))
    induce = [hecke_T(DATUM.diag(*d), DATUM, Pair.M, ring) for d in INDUCE]
    return ModuleSpec(DATUM, m, dim, A, asgs, "Ta", B, induce, name)


def _jordan2():
    return [[1, 1], [0, 1]]


def library():
    """The module specs, mod 2 and mod 3."""
    specs = []
    add = lambda name, rho, dim, m: specs.append(build_spec(name, rho, dim, m))
    add("deg-mod2", degree(), 1, 2)
    add("ldeg-mod2", left_degree(), 1, 2)
    add("deg+ldeg-mod2", direct_sum((degree(), 1), (left_degree(), 1)), 2, 2)
    add("pull-jordan-mod2", pullback(_jordan2(), identity(2)), 2, 2)
    add("pull-jordan2-mod2", pullback(_jordan2(), _jordan2()), 2, 2)
    cyc = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    add("pull-cyclic-mod2", pullback(cyc, matmul(cyc, cyc, 2)), 3, 2)
    add("ldeg2+deg-mod2", direct_sum((left_degree(), 1), (left_degree(), 1), (degree(), 1)), 3, 2)
    add("pull+ldeg+deg-mod2", direct_sum((pullback(_jordan2(), identity(2)), 2),
                                         (left_degree(), 1), (degree(), 1)), 4, 2)
    add("deg-twisted-mod3", degree((2, 1)), 1, 3)
    add("ldeg-mod3", left_degree(), 1, 3)
    add("pull-mod3", pullback([[2, 1], [0, 2]], identity(2)), 2, 3)
    add("deg+ldeg+pull-mod3", direct_sum((degree(), 1), (left_degree((1, 2)), 1),
                                         (pullback([[2]], [[2]]), 1)), 3, 3)
    add("zero-mod2", degree(), 0, 2)
    return specs
