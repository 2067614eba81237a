"""The map Theta: H_R(Gamma, P) -> H_R(Gamma_M, M), the centralizer C(a) of T_a,
and localization at the powers of T_a with explicit witnesses."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import ceil

from .cosets import DEFAULT_ORBIT_CAP, coset_key
from .errors import DomainError, InvariantViolation, ResourceError
from .exact import ZZ, valuation
from .groups import GroupElement, ParabolicDatum
from .hecke import (HeckeElement, Pair, cached_decomposition, hecke_T, hecke_mul,
                    invariance_check, to_T_basis)


@dataclass(frozen=True)
class LocalizationWitness:
    """Y = Theta(T_a)^{-n} Theta(X); ``shifted`` is (T^M_a)^n Y = Theta(X)."""

    n: int
    X: HeckeElement
    Y: HeckeElement
    shifted: HeckeElement


@dataclass(frozen=True)
class RadicalWitness:
    """Least n > 0 with T_a^n X = 0 (None if there is none); ``shift`` from power_shift."""

    n: object
    shift: int


def _require_invariant(X: HeckeElement):
    if not X.invariant:
        if not invariance_check(X):
            raise DomainError("element is not invariant")
        X.invariant = True


def _require_strict(datum: ParabolicDatum, a: GroupElement):
    if not datum.is_strictly_positive(a):
        raise DomainError("a is not strictly positive")


def theta(X: HeckeElement) -> HeckeElement:
    """sum c_i (Gamma u_i m_i) -> sum c_i (Gamma_M m_i)."""
    if X.pair != Pair.P:
        raise DomainError("theta is defined on the (P, Gamma) algebra")
    _require_invariant(X)
    d = X.datum
    acc = {}
    for g, c in X.terms.values():
        _, m = d.factor_um(g)
        k = coset_key(m, d)
        acc[k] = (acc[k][0], acc[k][1] + c) if k in acc else (m, c)
    return HeckeElement(d, Pair.M, X.ring, {k: v for k, v in acc.items() if X.ring.reduce(v[1])}, True)


def T_a(datum: ParabolicDatum, a: GroupElement, ring=ZZ, pair=Pair.P) -> HeckeElement:
    return hecke_T(a, datum, pair, ring)


def structural_centralizer_test(X: HeckeElement) -> bool:
    """Every support coset has a representative in M.

    Checked as "U-part of the stored representative lies in Gamma_U"; this does
    not depend on the representative because Gamma_M normalizes Gamma_U."""
    d = X.datum
    return all(d.member(d.factor_um(g)[0], "GammaU") for g, _ in X.terms.values())


def centralizer_test(X: HeckeElement, a: GroupElement) -> bool:
    """X T_a == T_a X, cross-checked against the structural description of C(a)."""
    d = X.datum
    _require_strict(d, a)
    _require_invariant(X)
    Ta = T_a(d, a, X.ring)
    commute = hecke_mul(X, Ta) == hecke_mul(Ta, X)
    if commute != structural_centralizer_test(X):
        raise InvariantViolation("commutator and structural centralizer tests disagree")
    return commute


def shift_bound(X: HeckeElement, a: GroupElement) -> int:
    """Upper bound for the power of T_a moving X into C(a), from U-part valuations."""
    d = X.datum
    vals = [valuation(x, d.p) for x in d.block_scalars(a)]
    bo = d.block_of
    bound = 0
    for g, _ in X.terms.values():
        u, _ = d.factor_um(g)
        for k in range(d.n):
            for l in range(d.n):
                i, j = bo[k], bo[l]
                if i < j and u.num[k][l]:
                    v = valuation(u.entry(k, l), d.p)
                    if v < 0:
                        bound = max(bound, ceil(-v / (vals[i] - vals[j])))
    return bound


def power_shift(X: HeckeElement, a: GroupElement):
    """Least n >= 0 with T_a^n X in C(a); returns (n, T_a^n X)."""
    d = X.datum
    _require_strict(d, a)
    _require_invariant(X)
    bound = shift_bound(X, a)
    Ta = T_a(d, a, X.ring)
    Y = X
    for n in range(bound + 1):
        if centralizer_test(Y, a):
            return n, Y
        Y = hecke_mul(Ta, Y)
    raise InvariantViolation(f"power_shift exceeded its bound {bound}")


def levi_lift(Y: HeckeElement) -> HeckeElement:
    """T^M_m -> T_m on H_R(M^+), the inverse of Theta on C(a)."""
    if Y.pair != Pair.M:
        raise DomainError("levi_lift expects an element of the (M, Gamma_M) algebra")
    _require_invariant(Y)
    d = Y.datum
    out = HeckeElement.zero(d, Pair.P, Y.ring)
    for c, m in to_T_basis(Y):
        if not d.is_positive(m):
            raise DomainError("component is not supported on positive elements")
        out = out + hecke_T(m, d, Pair.P, Y.ring).scale(c)
    return out


def fraction_decompose(Y: HeckeElement, a: GroupElement) -> LocalizationWitness:
    """Write Y = Theta(T_a)^{-n} Theta(X) with n minimal."""
    if Y.pair != Pair.M:
        raise DomainError("fraction_decompose expects an element of the (M, Gamma_M) algebra")
    d = Y.datum
    _require_strict(d, a)
    _require_invariant(Y)
    n = max((d.min_positive_shift(a, m) for _, m in to_T_basis(Y)), default=0)
    Z = Y
    TaM = T_a(d, a, Y.ring, Pair.M)
    for _ in range(n):
        Z = hecke_mul(TaM, Z)
    X = levi_lift(Z)
    if theta(X) != Z:
        raise InvariantViolation("theta(levi_lift(Z)) differs from Z")
    return LocalizationWitness(n, X, Y, Z)


def kernel_test(X: HeckeElement, a: GroupElement) -> RadicalWitness:
    """Least n > 0 with T_a^n X = 0, searched up to the power_shift exponent."""
    d = X.datum
    n0, _ = power_shift(X, a)
    Ta = T_a(d, a, X.ring)
    Z = X
    found = None
    for n in range(1, max(n0, 1) + 1):
        Z = hecke_mul(Ta, Z)
        if Z.is_zero():
            found = n
            break
    if (found is not None) != theta(X).is_zero():
        raise InvariantViolation("kernel of theta and T_a-torsion disagree")
    return RadicalWitness(found, n0)


# -- the image of Theta over Z ------------------------------------------------

def _candidate_reps(datum: ParabolicDatum, b: int):
    """u w t with t diagonal p-powers in [-b, b] (times units mod p for pro-p),
    w a within-block permutation and u unipotent with entries x / p^j, 0 < j <= b."""
    p, n = datum.p, datum.n
    units = list(range(1, p)) if datum.flavor == "pro-p" else [1]
    perms = [[i for part in combo for i in part]
             for combo in product(*[list(permutations(range(s, e))) for s, e in datum.bounds])]
    uvals = [Fraction(0)] + [Fraction(x, p ** j) for j in range(1, b + 1)
                             for x in range(1, p ** j) if x % p]
    upper = [(k, l) for k, l in datum.positions("P") if k < l]
    for ex in product(range(-b, b + 1), repeat=n):
        for us in product(units, repeat=n):
            diag = [us[i] * Fraction(p) ** ex[i] for i in range(n)]
            for w in perms:
                wt = GroupElement.from_rows([[diag[k] if w[l] == k else 0 for l in range(n)]
                                             for k in range(n)])
                for uv in product(uvals, repeat=len(upper)):
                    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
                    for (k, l), x in zip(upper, uv):
                        u[k][l] = x
                    g = GroupElement.from_rows(u) @ wt
                    if datum.in_P(g):
                        yield g


def image_span_basis(datum: ParabolicDatum, b: int, cap: int = DEFAULT_ORBIT_CAP,
                     max_candidates: int = 5000):
    """theta(T_g) for one g in each double coset reached by the candidate set of
    bound b; returns a list of (g, theta(T_g)) over Z."""
    if b < 0:
        raise DomainError("valuation bound must be >= 0")
    seen = []
    out = []
    count = 0
    for g in _candidate_reps(datum, b):
        count += 1
        if count > max_candidates:
            raise ResourceError("too many candidate double cosets", count)
        k = coset_key(g, datum)
        if any(k in keys for keys in seen):
            continue
        dec = cached_decomposition(g, datum, "P", cap)
        seen.append(dec.keys)
        out.append((g, theta(hecke_T(g, datum, Pair.P, ZZ, cap))))
    return out


def image_experiment(datum: ParabolicDatum, b: int, cap: int = DEFAULT_ORBIT_CAP):
    """Elementary divisors of the bound-b truncation of the image of Theta over Z,
    in the T^M basis. A divisor d > 1 means theta is not injective on
    R (x) (truncated image) for R = Z/q with q | d."""
    from .linalg import smith_normal_form
    fam = image_span_basis(datum, b, cap)
    columns = {}
    rows = []
    for _, y in fam:
        row = {}
        for c, m in to_T_basis(y):
            k = coset_key(m, datum)
            if k not in columns:
                columns[k] = m
            row[k] = c
        rows.append(row)
    keys = sorted(columns)
    mat = [[r.get(k, 0) for k in keys] for r in rows]
    divisors = [x for x in smith_normal_form(mat)[0] if x] if mat and keys else []
    return {"bound": b, "generators": len(fam), "basis_size": len(keys),
            "elementary_divisors": divisors,
            "torsion_primes": sorted({q for x in divisors for q in _primes(x)})}


def _primes(x: int):
    out, q = [], 2
    x = abs(x)
    while q * q <= x:
        if x % q == 0:
            out.append(q)
            while x % q == 0:
                x //= q
        q += 1
    if x > 1:
        out.append(x)
    return out
