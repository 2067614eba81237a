"""Right cosets Gamma g and the decomposition of double cosets Gamma g Gamma.

Coset identity is decided by an exact canonical key: the normal form of g under
left multiplication by the full Iwahori subgroup of GL_n(Z_p) (row operations),
extended by a torus residue mod p for the pro-p flavor. For g, h in P one has
Gamma g = Gamma h iff g h^{-1} lies in that Iwahori, so the key is exact for
both levels P and M. ``coset_eq`` keeps the literal membership test.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import prod

from .errors import DomainError, InvariantViolation, ResourceError
from .exact import principal_unit_generators, split_p, unit_group_generators, valuation
from .groups import GroupElement, ParabolicDatum, int_det

DEFAULT_ORBIT_CAP = 100_000
DEFAULT_ORACLE_CAP = 200_000

# Counters reported by the CLI; reset by the runner.
stats = Counter()


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _normal_form(A, p: int, K: int, track: bool):
    """Iwahori row-reduction normal form of the integer matrix A, working mod p^K.

    Valid when K > v_p(det A): changes by p^K-multiples are then absorbed by the
    first congruence subgroup. Returns (rows, multipliers mod p per row).
    """
    n = len(A)
    q = p ** K
    rows = [[x % q for x in r] for r in A]
    mult = [1] * n
    free = list(range(n))
    piv_row = [0] * n
    piv_exp = [0] * n
    for c in range(n - 1, -1, -1):
        best, bv = -1, K
        for r in free:
            x = rows[r][c]
            if x:
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v <= bv:  # ties go to the largest row index
                    best, bv = r, v
        if best < 0:
            raise InvariantViolation("normal form precision too low")
        r = best
        pv = p ** bv
        uinv = pow(rows[r][c] // pv, -1, q)
        rows[r] = [x * uinv % q for x in rows[r]]
        if track:
            mult[r] = mult[r] * uinv % p
        free.remove(r)
        rr = rows[r]
        for s in free:
            y = rows[s][c]
            if y:
                t = y // pv
                rows[s] = [(a - t * b) % q for a, b in zip(rows[s], rr)]
        piv_row[c] = r
        piv_exp[c] = bv
    for c in range(n - 1, -1, -1):
        r, a = piv_row[c], piv_exp[c]
        rr = rows[r]
        for c2 in range(c + 1, n):
            s = piv_row[c2]
            x = rows[s][c]
            if not x:
                continue
            if s < r:
                t = x // p ** a
            else:
                t = (x // p ** (a + 1)) * p
            if t:
                rows[s] = [(e - t * f) % q for e, f in zip(rows[s], rr)]
    return rows, mult


def det_valuation(g: GroupElement, p: int) -> int:
    """v_p(det num) for g = num/den."""
    return _vp(int_det(g.num), p)


def coset_key(g: GroupElement, datum: ParabolicDatum, K: int = None) -> tuple:
    """Canonical key of the right coset Gamma g (equally Gamma_M g for g in M)."""
    stats["coset_keys"] += 1
    p = datum.p
    k, w = split_p(g.den, p)
    if K is None:
        K = det_valuation(g, p) + 1
    rows, mult = _normal_form(g.num, p, K, datum.flavor == "pro-p")
    flat = [x for r in rows for x in r]
    s = min(_vp(x, p) for x in flat if x)
    if s:
        ps = p ** s
        flat = [x // ps for x in flat]
    key = (k - s, tuple(flat))
    if datum.flavor == "pro-p":
        key += (tuple(m * w % p for m in mult),)
    return key


def balancing_modulus(g: GroupElement, p: int, dv: int = None) -> int:
    """Entries of num may be shifted by multiples of this without changing Gamma g."""
    if dv is None:
        dv = det_valuation(g, p)
    kp = max(1, 1 + dv - _vp(g.den, p))
    return g.den * p ** kp


def balance(g: GroupElement, modulus: int) -> GroupElement:
    half = modulus // 2
    num = []
    for row in g.num:
        r = []
        for x in row:
            x %= modulus
            r.append(x - modulus if x > half else x)
        num.append(r)
    return GroupElement.make(num, g.den)


@dataclass(frozen=True, eq=False)
class RightCoset:
    """The coset Gamma g (level P) or Gamma_M g (level M)."""

    rep: GroupElement
    datum: ParabolicDatum
    level: str = "P"

    @cached_property
    def key(self):
        return coset_key(self.rep, self.datum)

    def __eq__(self, other):
        if not isinstance(other, RightCoset):
            return NotImplemented
        return (self.datum == other.datum and self.level == other.level
                and self.key == other.key)

    def __hash__(self):
        return hash((self.level, self.key))


def coset_eq(A: RightCoset, B: RightCoset) -> bool:
    """Literal test: rep(A) rep(B)^{-1} lies in the subgroup of the level."""
    if A.level != B.level or A.datum != B.datum:
        raise DomainError("cosets of different pairs")
    stats["equality_tests"] += 1
    d = A.datum
    return d.member(A.rep @ B.rep.inverse(), d.subgroup_of(A.level))


def truncation_level(g: GroupElement, p: int) -> int:
    """N = 2d + 1, d the worst negative valuation among entries of g and g^{-1}."""
    d = max(0, -min(g.min_valuation(p), g.inverse().min_valuation(p)))
    return 2 * d + 1


def _elementary(n: int, k: int, l: int, c: int) -> GroupElement:
    return GroupElement(tuple(tuple(int(i == j) + (c if (i, j) == (k, l) else 0)
                                    for j in range(n)) for i in range(n)), 1)


def _diag_unit(n: int, k: int, z: int) -> GroupElement:
    return GroupElement(tuple(tuple((z if i == k else 1) if i == j else 0
                                    for j in range(n)) for i in range(n)), 1)


def gamma_generators(datum: ParabolicDatum, N: int, level: str = "P"):
    """Generators of Gamma (or Gamma_M) modulo the congruence subgroup of level p^N."""
    if N < 1:
        raise DomainError("N must be >= 1")
    n, p = datum.n, datum.p
    gens = []
    for k, l in datum.positions(level):
        if k < l:
            gens.append(_elementary(n, k, l, 1))
    for k, l in datum.positions(level):
        if k > l:
            gens.append(_elementary(n, k, l, p))
    units = (unit_group_generators if datum.flavor == "iwahori" else principal_unit_generators)(p, N)
    for k in range(n):
        for z in units:
            gens.append(_diag_unit(n, k, z.signed()))
    return gens


def congruence_generators(datum: ParabolicDatum, N: int, level: str = "P"):
    """Topological generators of the level-p^N congruence subgroup of Gamma."""
    n, p = datum.n, datum.p
    q = p ** N
    gens = [_elementary(n, k, l, q) for k, l in datum.positions(level) if k != l]
    diag = [1 + q] if (p != 2 or N >= 2) else [-1, 5]
    gens += [_diag_unit(n, k, z) for k in range(n) for z in diag]
    return gens


def stabilizes(g: GroupElement, datum: ParabolicDatum, N: int, level: str = "P") -> bool:
    """Does g (level-p^N congruence subgroup) g^{-1} lie in Gamma? Checked on generators."""
    gi = g.inverse()
    sub = datum.subgroup_of(level)
    return all(datum.member(g @ c @ gi, sub) for c in congruence_generators(datum, N, level))


@dataclass(frozen=True)
class DoubleCosetDecomposition:
    base: GroupElement
    cosets: tuple

    def __len__(self):
        return len(self.cosets)

    @cached_property
    def keys(self):
        return frozenset(c.key for c in self.cosets)


def decompose_double_coset(g: GroupElement, datum: ParabolicDatum, level: str = "P",
                           cap: int = DEFAULT_ORBIT_CAP) -> DoubleCosetDecomposition:
    """All right cosets in Gamma g Gamma, by breadth-first search of the orbit of
    Gamma g under right multiplication by generators of Gamma mod Gamma(p^N)."""
    if not datum.in_group(g, level):
        raise DomainError(f"element is not in {level}")
    p = datum.p
    N = truncation_level(g, p)
    if not stabilizes(g, datum, N, level):
        raise InvariantViolation(f"truncation level {N} does not stabilize the cosets")
    gens = gamma_generators(datum, N, level)
    dv = det_valuation(g, p)
    K = dv + 1
    mod = balancing_modulus(g, p, dv)
    start = balance(g, mod)
    table = {coset_key(start, datum, K): start}
    queue = [start]
    for h in queue:
        for s in gens:
            h2 = balance(h @ s, mod)
            k2 = coset_key(h2, datum, K)
            if k2 not in table:
                table[k2] = h2
                queue.append(h2)
                if len(table) > cap:
                    raise ResourceError("double coset exceeds the orbit cap", len(table))
    stats["cosets_enumerated"] += len(table)
    cosets = []
    for k, h in table.items():
        c = RightCoset(h, datum, level)
        c.__dict__["key"] = k
        cosets.append(c)
    return DoubleCosetDecomposition(g, tuple(cosets))


# -- independent oracles for |Gamma g Gamma / Gamma| --------------------------

def stabilizing_level(g: GroupElement, datum: ParabolicDatum, level: str = "P") -> int:
    """Least N >= 1 whose congruence subgroup fixes every coset of Gamma g Gamma."""
    top = truncation_level(g, datum.p)
    for N in range(1, top + 1):
        if stabilizes(g, datum, N, level):
            return N
    raise InvariantViolation("no stabilizing level up to the truncation bound")


def _entry_ranges(datum: ParabolicDatum, N: int, level: str):
    p = datum.p
    q = p ** N
    pos = datum.positions(level)
    ranges = []
    for k, l in pos:
        if k == l:
            if datum.flavor == "iwahori":
                ranges.append([x for x in range(q) if x % p])
            else:
                ranges.append(list(range(1, q, p)))
        elif k > l:
            ranges.append(list(range(0, q, p)))
        else:
            ranges.append(list(range(q)))
    return pos, ranges


def oracle_index(g: GroupElement, datum: ParabolicDatum, level: str = "P",
                 N: int = None, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """|Gamma g Gamma / Gamma| = [Gamma : Gamma ∩ g^{-1} Gamma g], by enumerating
    Gamma mod p^N and counting the elements gamma with g gamma g^{-1} in Gamma."""
    if not datum.in_group(g, level):
        raise DomainError(f"element is not in {level}")
    p, n = datum.p, datum.n
    if N is None:
        N = stabilizing_level(g, datum, level)
    pos, ranges = _entry_ranges(datum, N, level)
    size = prod(len(r) for r in ranges)
    if size > cap:
        raise ResourceError("finite quotient of Gamma exceeds the oracle cap", size)
    gi = g.inverse()
    G, Gi = g.num, gi.num
    D = g.den * gi.den
    vD, wD = split_p(D, p)
    t0, t1 = p ** vD, p ** (vD + 1)
    bo = datum.block_of
    checks = []
    for k in range(n):
        for l in range(n):
            if level == "P" and bo[k] > bo[l] or level == "M" and bo[k] != bo[l]:
                continue
            checks.append((k, l, 0 if k < l else (1 if k > l else 2)))
    prop = datum.flavor == "pro-p"
    stab = 0
    gamma = [[0] * n for _ in range(n)]
    for vals in product(*ranges):
        for (k, l), x in zip(pos, vals):
            gamma[k][l] = x
        left = [[sum(G[i][j] * gamma[j][c] for j in range(n)) for c in range(n)] for i in range(n)]
        ok = True
        for k, l, kind in checks:
            x = sum(left[k][j] * Gi[j][l] for j in range(n))
            if kind == 0:
                if x % t0:
                    ok = False
            elif kind == 1:
                if x % t1:
                    ok = False
            else:
                if x % t0 or not (x // t0) % p:
                    ok = False
                elif prop and ((x // t0) - wD) % p:
                    ok = False
            if not ok:
                break
        stab += ok
    stats["oracle_elements"] += size
    if size % stab:
        raise InvariantViolation("stabilizer order does not divide the group order")
    return size // stab


def lattice_covolume(vectors, p: int) -> int:
    """v_p of the covolume of the Z_p-span of rational vectors (must have full rank)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        raise DomainError("empty lattice")
    dim = len(rows[0])
    total = 0
    for c in range(dim):
        best, bv = None, None
        for i, r in enumerate(rows):
            if r[c]:
                v = valuation(r[c], p)
                if bv is None or v < bv:
                    best, bv = i, v
        if best is None:
            raise DomainError("vectors do not span a lattice of full rank")
        piv = rows.pop(best)
        total += bv
        nxt = []
        for r in rows:
            if r[c]:
                f = r[c] / piv[c]
                r = [a - f * b for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        rows = nxt
    return total


def oracle_volume_index(g: GroupElement, datum: ParabolicDatum, level: str = "P") -> int:
    """|Gamma g Gamma / Gamma| as a ratio of Haar volumes, vol(Gamma) / vol(stabilizer).

    On Gamma the left Haar measure of P is the additive measure of the matrix
    entries. The stabilizer is cut out of Gamma by the lattice condition
    g X g^{-1} in Lambda; the iwahori flavor handles "diagonal is a unit" by
    inclusion-exclusion over diagonal entries forced into pZ_p.
    """
    if not datum.in_group(g, level):
        raise DomainError(f"element is not in {level}")
    p, n = datum.p, datum.n
    pos = datum.positions(level)
    idx = {q: i for i, q in enumerate(pos)}
    gi = g.inverse()
    G, Gi = g.rows(), gi.rows()

    def scales(diag_p):
        return [p if (k > l or (k == l and (k, l) in diag_p)) else 1 for k, l in pos]

    def basis(sc):
        out = []
        for (k, l), s in zip(pos, sc):
            v = [0] * len(pos)
            v[idx[(k, l)]] = s
            out.append(v)
        return out

    def pulled_back(sc):
        # images of s E_kl under X -> g^{-1} X g
        out = []
        for (k, l), s in zip(pos, sc):
            v = [Fraction(0)] * len(pos)
            for (i, j) in pos:
                v[idx[(i, j)]] = s * Gi[i][k] * G[l][j]
            out.append(v)
        return out

    diag = [(k, k) for k in range(n)]
    if datum.flavor == "pro-p":
        sc = scales(set(diag))
        lam, lam_pb = basis(sc), pulled_back(sc)
        v_lam = lattice_covolume(lam, p)
        v_pb = lattice_covolume(lam_pb, p)
        v_sum = lattice_covolume(lam + lam_pb, p)
        # [Lambda : Lambda ∩ Lambda'] = [Lambda + Lambda' : Lambda']
        return p ** (v_pb - v_sum)
    target = scales(set())
    lam_pb = pulled_back(target)
    v_pb = lattice_covolume(lam_pb, p)
    vol_gamma = Fraction(0)
    vol_stab = Fraction(0)
    for size in range(n + 1):
        for J in combinations(diag, size):
            sc = scales(set(J))
            lam = basis(sc)
            v_lam = lattice_covolume(lam, p)
            v_int = v_lam + v_pb - lattice_covolume(lam + lam_pb, p)
            sign = (-1) ** size
            vol_gamma += sign * Fraction(1, p ** v_lam)
            vol_stab += sign * Fraction(1, p) ** v_int
    index = vol_gamma / vol_stab
    if index.denominator != 1:
        raise InvariantViolation(f"volume ratio {index} is not an integer")
    return int(index)
