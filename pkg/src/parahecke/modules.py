"""Finite left H_R(P)-modules over R = Z/m given by matrices for finitely many
algebra elements: radicals, descent to the Levi algebra, induced action.

A spec is only checked locally: the assigned elements and their pairwise
products span a finite piece of the algebra, and every linear relation in that
piece must hold among the corresponding matrices.
"""

import json
from math import gcd
from dataclasses import dataclass, field

from .errors import ConsistencyError, CoverageError, DomainError, ParseError
from .exact import CoefficientRing
from .groups import GroupElement, ParabolicDatum
from .hecke import (HeckeElement, Pair, from_T_basis, hecke_T, hecke_mul, invariance_check,
                    to_T_basis)
from .levi import fraction_decompose, kernel_test
from .linalg import (Submodule, det_mod, eventual_kernel, identity, inverse_mod, kernel_mod,
                     matmul, solve_mod)
from .textio import format_matrix, format_terms, parse_matrix, parse_terms


@dataclass
class Assignment:
    label: str
    element: HeckeElement
    matrix: list


@dataclass
class ModuleSpec:
    datum: ParabolicDatum
    modulus: int
    dim: int
    a: GroupElement
    assignments: list
    ta_label: str = "Ta"
    b: GroupElement = None
    induce: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if self.modulus < 2:
            raise DomainError("module coefficients need m >= 2")
        for asg in self.assignments:
            if len(asg.matrix) != self.dim or any(len(r) != self.dim for r in asg.matrix):
                raise DomainError(f"matrix for {asg.label!r} is not {self.dim}x{self.dim}")
            asg.matrix = [[x % self.modulus for x in r] for r in asg.matrix]
            if asg.element.ring != self.ring or asg.element.pair != Pair.P:
                raise DomainError(f"element {asg.label!r} must lie in H_R(P) with R = Z/{self.modulus}")
            if not asg.element.invariant and not invariance_check(asg.element):
                raise DomainError(f"element {asg.label!r} is not Gamma-invariant")
        one = HeckeElement.one(self.datum, Pair.P, self.ring)
        if not any(asg.element == one for asg in self.assignments):
            self.assignments.insert(0, Assignment("1", one, identity(self.dim)))

    @property
    def ring(self) -> CoefficientRing:
        return CoefficientRing(self.modulus)

    def element(self, g: GroupElement) -> HeckeElement:
        return hecke_T(g, self.datum, Pair.P, self.ring)


class ModuleAction:
    """Linear algebra over the span of assigned elements and their pairwise products."""

    def __init__(self, spec: ModuleSpec):
        self.spec = spec
        m = spec.modulus
        fam = [(a.element, a.matrix, a.label) for a in spec.assignments]
        base = list(fam)
        for x, mx, lx in base:
            for y, my, ly in base:
                fam.append((hecke_mul(x, y), matmul(mx, my, m), f"{lx}*{ly}"))
        self.family = fam
        keys = sorted({k for e, _, _ in fam for k in e.terms})
        self.keys = {k: i for i, k in enumerate(keys)}
        self.coords = [[0] * len(fam) for _ in keys]
        for j, (e, _, _) in enumerate(fam):
            for k, (_, c) in e.terms.items():
                self.coords[self.keys[k]][j] = c % m

    def _vector(self, X: HeckeElement):
        v = [0] * len(self.keys)
        for k, (_, c) in X.terms.items():
            if k not in self.keys:
                return None
            v[self.keys[k]] = c % self.spec.modulus
        return v

    def express(self, X: HeckeElement):
        """Coefficients of X in the family, or None."""
        if X.ring != self.spec.ring:
            X = X.base_change(self.spec.ring)
        v = self._vector(X)
        if v is None:
            return None
        if not self.keys:
            return [0] * len(self.family)
        return solve_mod(self.coords, v, self.spec.modulus)

    def combine(self, coeffs):
        m, d = self.spec.modulus, self.spec.dim
        out = [[0] * d for _ in range(d)]
        for c, (_, mat, _) in zip(coeffs, self.family):
            if c:
                for i in range(d):
                    for j in range(d):
                        out[i][j] = (out[i][j] + c * mat[i][j]) % m
        return out

    def rho(self, X: HeckeElement):
        c = self.express(X)
        if c is None:
            raise CoverageError("element is not expressible through assigned elements and products")
        return self.combine(c)

    def violations(self):
        """Linear relations of the family that the matrices fail; labels per relation."""
        if not self.keys:
            return []
        out = []
        for rel in kernel_mod(self.coords, self.spec.modulus):
            if any(any(row) for row in self.combine(rel)):
                out.append([f"{c}*{lab}" for c, (_, _, lab) in zip(rel, self.family) if c])
        return out


def check_consistency(spec: ModuleSpec) -> ModuleAction:
    act = ModuleAction(spec)
    bad = act.violations()
    if bad:
        raise ConsistencyError("inconsistent module spec; violated relation: " + " + ".join(bad[0]))
    return act


def _action(spec_or_act):
    return spec_or_act if isinstance(spec_or_act, ModuleAction) else check_consistency(spec_or_act)


def ta_matrix(spec, a: GroupElement):
    act = _action(spec)
    return act.rho(act.spec.element(a))


def radical(spec, a: GroupElement) -> Submodule:
    """Eventual kernel of the T_a matrix."""
    act = _action(spec)
    A = ta_matrix(act, a)
    if act.spec.dim == 0:
        return Submodule.zero(act.spec.modulus, 0)
    return eventual_kernel(A, act.spec.modulus)[1]


def radical_independence(spec, a: GroupElement, b: GroupElement) -> bool:
    act = _action(spec)
    return radical(act, a) == radical(act, b)


def radical_submodule_check(spec, a: GroupElement) -> bool:
    act = _action(spec)
    R = radical(act, a)
    return all(R.image(asg.matrix) <= R for asg in act.spec.assignments)


def descent_test(spec, a: GroupElement) -> bool:
    """T_a acts invertibly."""
    act = _action(spec)
    if act.spec.dim == 0:
        return True
    return gcd(det_mod(ta_matrix(act, a), act.spec.modulus), act.spec.modulus) == 1


@dataclass
class InducedAction:
    matrix: list
    n: int
    rechecked: bool


def induce_levi_action(spec, a: GroupElement, Y: HeckeElement) -> InducedAction:
    """rho(T_a)^{-n} rho(X) for Y = Theta(T_a)^{-n} Theta(X)."""
    act = _action(spec)
    sp = act.spec
    if not descent_test(act, a):
        raise DomainError("T_a does not act invertibly on this module")
    if Y.ring != sp.ring:
        Y = Y.base_change(sp.ring)
    m = sp.modulus
    Ainv = inverse_mod(ta_matrix(act, a), m) if sp.dim else []
    w = fraction_decompose(Y, a)
    out = act.rho(w.X)
    for _ in range(w.n):
        out = matmul(Ainv, out, m)
    # the same fraction with one more power of T_a must give the same answer
    Ta = sp.element(a)
    c = act.express(hecke_mul(Ta, w.X))
    rechecked = c is not None
    if rechecked:
        again = act.combine(c)
        for _ in range(w.n + 1):
            again = matmul(Ainv, again, m)
        if again != out:
            raise ConsistencyError("induced action depends on the chosen fraction; spec is not a module")
    return InducedAction(out, w.n, rechecked)


def essential_image_check(spec, a: GroupElement, samples):
    """For kernel elements X of Theta, rho(X) must vanish on a radical-free module.

    Returns one status per sample: pass, fail, inexpressible, not-in-kernel or
    not-applicable (when the radical is nonzero)."""
    act = _action(spec)
    if not radical(act, a).is_zero():
        return ["not-applicable"] * len(samples)
    out = []
    for X in samples:
        if X.ring != act.spec.ring:
            X = X.base_change(act.spec.ring)
        if kernel_test(X, a).n is None:
            out.append("not-in-kernel")
            continue
        c = act.express(X)
        if c is None:
            out.append("inexpressible")
        elif any(any(r) for r in act.combine(c)):
            out.append("fail")
        else:
            out.append("pass")
    return out


# -- file format --------------------------------------------------------------

def _element(text, datum, ring, where):
    try:
        terms = parse_terms(text, datum.p)
    except ParseError as e:
        raise ParseError(f"{where}: {e.message}", e.line, e.column) from None
    for _, g in terms:
        datum.element(g)
    return terms


def load_module_spec(text: str, source: str = "<spec>") -> ModuleSpec:
    """Parse the JSON module format (see README)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", e.lineno, e.colno) from None
    try:
        datum = ParabolicDatum(int(doc["p"]), tuple(doc["blocks"]), doc.get("flavor", "iwahori"))
        m = int(doc["modulus"])
        ring = CoefficientRing(m)
        a = datum.element(parse_matrix(doc["a"], datum.p))
        b = datum.element(parse_matrix(doc["b"], datum.p)) if doc.get("b") else None
        asgs = []
        for i, item in enumerate(doc["assignments"]):
            terms = _element(item["element"], datum, ring, f"assignment {i}")
            asgs.append(Assignment(item.get("label", f"e{i}"),
                                   from_T_basis(terms, datum, Pair.P, ring),
                                   [[int(x) for x in r] for r in item["matrix"]]))
        induce = []
        for i, t in enumerate(doc.get("induce", [])):
            terms = _element(t, datum, ring, f"induce {i}")
            for _, g in terms:
                if not datum.in_M(g):
                    raise DomainError(f"induce {i}: representative is not in M")
            induce.append(from_T_basis(terms, datum, Pair.M, ring))
    except KeyError as e:
        raise ParseError(f"{source}: missing field {e.args[0]!r}") from None
    return ModuleSpec(datum, m, int(doc["dimension"]), a, asgs, doc.get("ta_label", "Ta"),
                      b, induce, doc.get("name", ""))


def dump_module_spec(spec: ModuleSpec) -> str:
    doc = {
        "name": spec.name,
        "p": spec.datum.p,
        "blocks": list(spec.datum.blocks),
        "flavor": spec.datum.flavor,
        "modulus": spec.modulus,
        "dimension": spec.dim,
        "a": format_matrix(spec.a),
        "ta_label": spec.ta_label,
        "assignments": [{"label": s.label, "element": format_terms(to_T_basis(s.element)),
                         "matrix": s.matrix} for s in spec.assignments],
    }
    if spec.b is not None:
        doc["b"] = format_matrix(spec.b)
    if spec.induce:
        doc["induce"] = [format_terms(to_T_basis(y)) for y in spec.induce]
    return json.dumps(doc, indent=2)
