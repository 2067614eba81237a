"""Seeded property suites. Each property draws from its own random stream, so a
report depends only on (datum, ring, seed, cases)."""

import traceback
from dataclasses import dataclass
from itertools import product

from . import module_library as lib
from .cosets import (DEFAULT_ORACLE_CAP, coset_eq, coset_key, decompose_double_coset,
                     gamma_generators, oracle_index, oracle_volume_index, RightCoset)
from .errors import CoverageError, DomainError, HeckeError, ResourceError
from .exact import (PScaled, ZZ, CoefficientRing, generated_subgroup, principal_unit_generators,
                    unit_group_generators, valuation)
from .groups import GroupElement, ParabolicDatum
from .hecke import (HeckeElement, Pair, from_T_basis, hecke_T, hecke_mul, invariance_check,
                    to_T_basis)
from .levi import (centralizer_test, fraction_decompose, kernel_test, levi_lift, power_shift,
                   structural_centralizer_test, theta)
from .linalg import howell_form, matmul, matpow
from .modules import (check_consistency, descent_test, essential_image_check, induce_levi_action,
                      radical, radical_independence, radical_submodule_check, ta_matrix)
from .sampling import (random_element, random_gamma, random_group_element, random_positive_element,
                       random_positive_levi, seeded)

SUITES = ("exact", "group", "coset", "hecke", "levi", "module")


@dataclass
class Context:
    datum: ParabolicDatum
    ring: CoefficientRing
    a: GroupElement
    seed: int
    cases: int
    bound: int
    cap: int


@dataclass
class PropertyResult:
    suite: str
    name: str
    cases: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


_REGISTRY = {s: [] for s in SUITES}


def prop(suite):
    def deco(fn):
        _REGISTRY[suite].append(fn)
        return fn
    return deco


def run_suites(names, ctx: Context):
    chosen = SUITES if "all" in names else names
    out = []
    for suite in chosen:
        if suite not in _REGISTRY:
            raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
        for fn in _REGISTRY[suite]:
            name = fn.__name__
            rnd = seeded(ctx.seed, f"{suite}.{name}")
            try:
                cases, fails = fn(ctx, rnd)
                detail = fails[0] if fails else ""
                out.append(PropertyResult(suite, name, cases, len(fails), detail))
            except HeckeError as e:
                out.append(PropertyResult(suite, name, 0, 1, f"{type(e).__name__}: {e}"))
            except Exception as e:  # report, do not crash the runner
                tb = traceback.extract_tb(e.__traceback__)[-1]
                out.append(PropertyResult(suite, name, 0, 1,
                                          f"{type(e).__name__}: {e} at {tb.name}:{tb.lineno}"))
    return out


def _check(fails, ok, msg):
    if not ok:
        fails.append(msg)


# -- exact ---------------------------------------------------------------------

def _random_pscaled(rnd, p):
    return PScaled.make(rnd.randint(-500, 500), rnd.randint(-3, 3), p)


@prop("exact")
def valuation_multiplicative(ctx, rnd):
    fails = []
    for _ in range(ctx.cases * 5):
        p = rnd.choice((2, 3, 5, 7))
        x, y = _random_pscaled(rnd, p), _random_pscaled(rnd, p)
        if x.numerator and y.numerator:
            _check(fails, valuation(x * y, p) == valuation(x, p) + valuation(y, p), f"{x} {y}")
        _check(fails, (x * y).to_fraction() == x.to_fraction() * y.to_fraction(), "product")
        _check(fails, (x + y).to_fraction() == x.to_fraction() + y.to_fraction(), "sum")
    return ctx.cases * 5, fails


@prop("exact")
def reduce_homomorphism(ctx, rnd):
    fails = []
    for _ in range(ctx.cases * 5):
        p, N = rnd.choice((2, 3, 5)), rnd.randint(1, 4)
        x, y = _random_pscaled(rnd, p), _random_pscaled(rnd, p)
        for z in (x, y):
            try:
                z.reduce(N)
                _check(fails, valuation(z, p) >= 0, f"reduce defined on {z}")
            except DomainError:
                _check(fails, valuation(z, p) < 0, f"reduce undefined on {z}")
        if valuation(x, p) >= 0 and valuation(y, p) >= 0:
            _check(fails, (x + y).reduce(N) == x.reduce(N) + y.reduce(N), "additive")
            _check(fails, (x * y).reduce(N) == x.reduce(N) * y.reduce(N), "multiplicative")
    return ctx.cases * 5, fails


@prop("exact")
def unit_generators_exhaustive(ctx, rnd):
    fails, n = [], 0
    for p in (2, 3, 5, 7):
        N = 1
        while p ** N <= 81:
            m = p ** N
            units = {x for x in range(m) if x % p}
            _check(fails, generated_subgroup(unit_group_generators(p, N), m) == units, f"{p}^{N}")
            princ = {x for x in range(m) if x % p == 1}
            _check(fails, generated_subgroup(principal_unit_generators(p, N), m) == princ
                   or p == 2, f"1+pZ {p}^{N}")
            n += 1
            N += 1
    return n, fails


# -- group ---------------------------------------------------------------------

@prop("group")
def factor_um_roundtrip(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        g = random_gamma(d, rnd) @ random_group_element(d, rnd, ctx.bound + 1)
        u, m = d.factor_um(g)
        _check(fails, u @ m == g and d.in_U(u) and d.in_M(m), f"factor {g}")
    return ctx.cases, fails


@prop("group")
def positivity_monoid(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        m1 = random_group_element(d, rnd, ctx.bound + 1, "M")
        m2 = random_group_element(d, rnd, ctx.bound + 1, "M")
        if d.is_positive(m1) and d.is_positive(m2):
            _check(fails, d.is_positive(m1 @ m2), f"{m1} {m2}")
        _check(fails, d.is_positive(random_gamma(d, rnd, "M")), "Gamma_M not positive")
    return ctx.cases, fails


@prop("group")
def gamma_m_normalizes_gamma_u(ctx, rnd):
    d, fails = ctx.datum, []
    gens = gamma_generators(d, 2, "P")
    mgens = [g for g in gens if d.in_M(g)]
    ugens = [g for g in gens if d.in_U(g)]
    for gm in mgens:
        for gu in ugens:
            _check(fails, d.member(gm @ gu @ gm.inverse(), "GammaU"), f"{gm} {gu}")
    return len(mgens) * len(ugens), fails


@prop("group")
def strictly_positive_is_central(ctx, rnd):
    d, a, fails = ctx.datum, ctx.a, []
    _check(fails, d.is_strictly_positive(a) and d.is_positive(a), "a not strictly positive")
    for _ in range(ctx.cases):
        m = random_group_element(d, rnd, ctx.bound + 1, "M")
        _check(fails, a @ m == m @ a, f"a does not commute with {m}")
    return ctx.cases, fails


@prop("group")
def positive_shift_minimal(ctx, rnd):
    d, a, fails = ctx.datum, ctx.a, []
    for _ in range(ctx.cases):
        m = random_group_element(d, rnd, ctx.bound + 1, "M")
        n = d.positive_shift(a, m)
        _check(fails, d.is_positive((a ** n) @ m), f"a^{n} m not positive")
        if n > 1:
            _check(fails, not d.is_positive((a ** (n - 1)) @ m), f"shift {n} not minimal")
    return ctx.cases, fails


@prop("group")
def membership_translates(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        gam = random_gamma(d, rnd)
        g = random_group_element(d, rnd, ctx.bound)
        _check(fails, d.member(gam, "Gamma") and d.member(gam, "GLnZp"), "gamma")
        _check(fails, d.member(gam @ g, "Gamma") == d.member(g, "Gamma"), f"translate {g}")
    return ctx.cases, fails


# -- coset ---------------------------------------------------------------------

@prop("coset")
def key_agrees_with_membership(ctx, rnd):
    d, fails = ctx.datum, []
    gens = gamma_generators(d, 2, "P")
    for _ in range(ctx.cases):
        g = random_group_element(d, rnd, ctx.bound)
        h = g @ rnd.choice(gens) if rnd.random() < 0.5 else random_group_element(d, rnd, ctx.bound)
        for level in ("P",) + (("M",) if d.in_M(g) and d.in_M(h) else ()):
            A, B = RightCoset(g, d, level), RightCoset(h, d, level)
            _check(fails, (A.key == B.key) == coset_eq(A, B), f"{g} {h}")
            C = RightCoset(random_gamma(d, rnd, level) @ g, d, level)
            _check(fails, C.key == A.key and coset_eq(A, C), f"translate of {g}")
    return ctx.cases, fails


@prop("coset")
def decomposition_matches_oracles(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        g = random_gamma(d, rnd) @ random_group_element(d, rnd, ctx.bound) @ random_gamma(d, rnd)
        n = len(decompose_double_coset(g, d, "P", ctx.cap))
        v = oracle_volume_index(g, d)
        _check(fails, n == v, f"{g}: bfs {n} volume {v}")
        try:
            e = oracle_index(g, d, cap=DEFAULT_ORACLE_CAP // 10)
            _check(fails, n == e, f"{g}: bfs {n} enumeration {e}")
        except ResourceError:
            pass
    return ctx.cases, fails


@prop("coset")
def decomposition_cosets_lie_in_double_coset(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        g = random_group_element(d, rnd, ctx.bound)
        dec = decompose_double_coset(g, d, "P", ctx.cap)
        _check(fails, len(dec.keys) == len(dec), "duplicate cosets")
        h = rnd.choice(dec.cosets).rep
        _check(fails, decompose_double_coset(h, d, "P", ctx.cap).keys == dec.keys, f"{h} outside")
    return ctx.cases, fails


# -- hecke ---------------------------------------------------------------------

def _pairs():
    return (Pair.P, Pair.M)


@prop("hecke")
def associativity(ctx, rnd):
    d, fails = ctx.datum, []
    for pair in _pairs():
        for _ in range(ctx.cases):
            X, Y, Z = [random_element(d, rnd, pair, ctx.ring, ctx.bound, 2) for _ in range(3)]
            _check(fails, hecke_mul(hecke_mul(X, Y), Z) == hecke_mul(X, hecke_mul(Y, Z)),
                   f"{pair.value}: {X} | {Y} | {Z}")
    return 2 * ctx.cases, fails


@prop("hecke")
def unit(ctx, rnd):
    d, fails = ctx.datum, []
    for pair in _pairs():
        one = HeckeElement.one(d, pair, ctx.ring)
        for _ in range(ctx.cases):
            X = random_element(d, rnd, pair, ctx.ring, ctx.bound, 2)
            _check(fails, hecke_mul(one, X) == X and hecke_mul(X, one) == X, str(X))
    return 2 * ctx.cases, fails


@prop("hecke")
def products_are_invariant(ctx, rnd):
    d, fails = ctx.datum, []
    for pair in _pairs():
        for _ in range(ctx.cases):
            X, Y = [random_element(d, rnd, pair, ctx.ring, ctx.bound, 2) for _ in range(2)]
            _check(fails, invariance_check(hecke_mul(X, Y)), f"{X} * {Y}")
    return 2 * ctx.cases, fails


@prop("hecke")
def single_coset_not_invariant(ctx, rnd):
    d = ctx.datum
    m = d.block_scalar(*[d.p ** i for i in range(d.r)])
    X = HeckeElement.from_cosets(d, Pair.P, ctx.ring, [(1, m)])
    ok = invariance_check(X) == (len(decompose_double_coset(m, d)) == 1)
    return 1, [] if ok else [f"single coset of {m}"]


@prop("hecke")
def T_basis_roundtrip(ctx, rnd):
    d, fails = ctx.datum, []
    for pair in _pairs():
        for _ in range(ctx.cases):
            gs = []
            for _ in range(3):
                g = random_group_element(d, rnd, ctx.bound, pair.value)
                keys = decompose_double_coset(g, d, pair.value, ctx.cap).keys
                if all(coset_key(h, d) not in keys for h in gs):
                    gs.append(g)
            cs = [rnd.randint(1, 5) for _ in gs]
            if ctx.ring.modulus:
                cs = [c % ctx.ring.modulus or 1 for c in cs]
            X = from_T_basis(list(zip(cs, gs)), d, pair, ctx.ring)
            back = to_T_basis(X)
            _check(fails, sorted(c for c, _ in back) == sorted(cs), "coefficients")
            _check(fails, from_T_basis(back, d, pair, ctx.ring) == X, "roundtrip")
    return 2 * ctx.cases, fails


@prop("hecke")
def base_change(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        m = rnd.choice((2, 3, 4))
        R = CoefficientRing(m)
        X, Y = [random_element(d, rnd, Pair.P, ZZ, ctx.bound, 2) for _ in range(2)]
        lhs = hecke_mul(X, Y).base_change(R)
        rhs = hecke_mul(X.base_change(R), Y.base_change(R))
        _check(fails, lhs == rhs, f"mod {m}")
    return ctx.cases, fails


# -- levi ----------------------------------------------------------------------

@prop("levi")
def theta_is_multiplicative(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        X, Y = [random_element(d, rnd, Pair.P, ctx.ring, ctx.bound, 2) for _ in range(2)]
        _check(fails, theta(hecke_mul(X, Y)) == hecke_mul(theta(X), theta(Y)), f"{X} | {Y}")
        _check(fails, theta(X + Y) == theta(X) + theta(Y), "additive")
    one = HeckeElement.one(d, Pair.P, ctx.ring)
    _check(fails, theta(one) == HeckeElement.one(d, Pair.M, ctx.ring), "unit")
    return ctx.cases, fails


@prop("levi")
def theta_inverts_powers_of_Ta(ctx, rnd):
    d, a, fails = ctx.datum, ctx.a, []
    one = HeckeElement.one(d, Pair.M, ctx.ring)
    for n in range(1, 4):
        t = theta(hecke_T(a ** n, d, Pair.P, ctx.ring))
        inv = hecke_T(a ** -n, d, Pair.M, ctx.ring)
        _check(fails, hecke_mul(t, inv) == one and hecke_mul(inv, t) == one, f"n={n}")
    return 3, fails


@prop("levi")
def centralizer_tests_agree(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        X = random_element(d, rnd, Pair.P, ctx.ring, ctx.bound, 2)
        centralizer_test(X, ctx.a)  # raises on disagreement
    return ctx.cases, fails


@prop("levi")
def positive_T_basis_in_centralizer(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        m1 = random_positive_levi(d, rnd, ctx.bound)
        m2 = random_positive_levi(d, rnd, ctx.bound)
        X1, X2 = hecke_T(m1, d, Pair.P, ctx.ring), hecke_T(m2, d, Pair.P, ctx.ring)
        _check(fails, centralizer_test(X1, ctx.a) and centralizer_test(X2, ctx.a), f"{m1} {m2}")
        same = coset_key(m2, d) in decompose_double_coset(m1, d).keys
        _check(fails, same or len(to_T_basis(X1 + X2)) == 2, "dependent")
    return ctx.cases, fails


@prop("levi")
def power_shift_lands_in_centralizer(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        X = random_element(d, rnd, Pair.P, ctx.ring, ctx.bound, 2)
        n, Y = power_shift(X, ctx.a)
        _check(fails, structural_centralizer_test(Y) and centralizer_test(Y, ctx.a), f"{X}")
    return ctx.cases, fails


@prop("levi")
def kernel_equals_radical(ctx, rnd):
    d, fails = ctx.datum, []
    rings = [ctx.ring] if ctx.ring.modulus else [CoefficientRing(d.p), ZZ]
    for R in rings:
        for _ in range(ctx.cases):
            X = random_element(d, rnd, Pair.P, R, ctx.bound, 2)
            w = kernel_test(X, ctx.a)
            _check(fails, (w.n is not None) == theta(X).is_zero(), f"{X}")
    return len(rings) * ctx.cases, fails


@prop("levi")
def fraction_roundtrip(ctx, rnd):
    d, fails = ctx.datum, []
    TaM = theta(hecke_T(ctx.a, d, Pair.P, ctx.ring))
    for _ in range(ctx.cases):
        Y = random_element(d, rnd, Pair.M, ctx.ring, ctx.bound + 1, 2)
        w = fraction_decompose(Y, ctx.a)
        Z = Y
        for _ in range(w.n):
            Z = hecke_mul(TaM, Z)
        _check(fails, theta(w.X) == Z, f"{Y}")
    return ctx.cases, fails


@prop("levi")
def levi_lift_is_a_section(ctx, rnd):
    d, fails = ctx.datum, []
    for _ in range(ctx.cases):
        Y = random_positive_element(d, rnd, ctx.ring, ctx.bound, 2)
        X = levi_lift(Y)
        _check(fails, theta(X) == Y and centralizer_test(X, ctx.a), f"{Y}")
    return ctx.cases, fails


# -- module --------------------------------------------------------------------

def _library_actions():
    return [(s, check_consistency(s)) for s in lib.library()]


@prop("module")
def library_specs_consistent(ctx, rnd):
    specs = lib.library()
    fails = []
    for s in specs:
        try:
            check_consistency(s)
        except HeckeError as e:
            fails.append(f"{s.name}: {e}")
    return len(specs), fails


@prop("module")
def radical_independent_of_a(ctx, rnd):
    fails = []
    acts = _library_actions()
    for s, act in acts:
        _check(fails, radical_independence(act, lib.A, lib.B), s.name)
    return len(acts), fails


@prop("module")
def radical_is_submodule(ctx, rnd):
    fails = []
    acts = _library_actions()
    for s, act in acts:
        _check(fails, radical_submodule_check(act, lib.A), s.name)
        if descent_test(act, lib.A):
            _check(fails, radical(act, lib.A).is_zero(), f"{s.name}: automorphism with radical")
    return len(acts), fails


@prop("module")
def radical_dimension_over_field(ctx, rnd):
    fails = []
    acts = _library_actions()
    for s, act in acts:
        if s.dim == 0:
            continue
        A = ta_matrix(act, lib.A)
        rank = len(howell_form(matpow(A, s.dim, s.modulus), s.modulus, s.dim))
        _check(fails, radical(act, lib.A).rank() + rank == s.dim, s.name)
    return len(acts), fails


def _expressible_induce(act, Y):
    try:
        return induce_levi_action(act, lib.A, Y)
    except CoverageError:
        return None


@prop("module")
def descent_iff_induction(ctx, rnd):
    fails = []
    acts = _library_actions()
    for s, act in acts:
        ok = descent_test(act, lib.A)
        for Y in s.induce:
            try:
                induce_levi_action(act, lib.A, Y)
                _check(fails, ok, f"{s.name}: induced without descent")
            except CoverageError:
                pass
            except DomainError:
                _check(fails, not ok, f"{s.name}: refused despite descent")
    return len(acts), fails


@prop("module")
def induced_action_multiplicative(ctx, rnd):
    fails, n = [], 0
    for s, act in _library_actions():
        if not descent_test(act, lib.A):
            continue
        for Y1, Y2 in product(s.induce, repeat=2):
            r12 = _expressible_induce(act, hecke_mul(Y1, Y2))
            r1, r2 = _expressible_induce(act, Y1), _expressible_induce(act, Y2)
            if None in (r12, r1, r2):
                continue
            n += 1
            _check(fails, r12.matrix == matmul(r1.matrix, r2.matrix, s.modulus), s.name)
    return n, fails


@prop("module")
def induced_action_extends_positive_part(ctx, rnd):
    fails, n = [], 0
    for s, act in _library_actions():
        if not descent_test(act, lib.A):
            continue
        for asg in s.assignments:
            basis = to_T_basis(asg.element)
            if len(basis) != 1 or not s.datum.in_M(basis[0][1]) or not s.datum.is_positive(basis[0][1]):
                continue
            c, m = basis[0]
            Y = hecke_T(m, s.datum, Pair.M, s.ring).scale(c)
            n += 1
            _check(fails, induce_levi_action(act, lib.A, Y).matrix == asg.matrix, f"{s.name} {asg.label}")
    return n, fails


@prop("module")
def essential_image(ctx, rnd):
    fails, n = [], 0
    for s, act in _library_actions():
        samples = [asg.element for asg in s.assignments]
        for status in essential_image_check(act, lib.A, samples):
            n += 1
            _check(fails, status != "fail", s.name)
    return n, fails
