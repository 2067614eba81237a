"""Command-line front end: `parahecke <verb> [options]`.

Reports go to stdout and are deterministic for a fixed configuration and
seed; wall-clock timing is written to stderr only.
"""

import argparse
import sys
import time
from dataclasses import dataclass

from . import cosets
from .cosets import DEFAULT_ORBIT_CAP, decompose_double_coset, gamma_generators, oracle_index, \
    oracle_volume_index
from .errors import CoverageError, HeckeError, ParseError, ResourceError
from .exact import CoefficientRing
from .groups import ParabolicDatum
from .hecke import Pair, clear_caches, from_T_basis, hecke_mul, to_T_basis
from .levi import (centralizer_test, fraction_decompose, image_experiment, kernel_test,
                   power_shift, structural_centralizer_test, theta)
from .modules import (check_consistency, descent_test, essential_image_check, induce_levi_action,
                      load_module_spec, radical, radical_independence, radical_submodule_check,
                      ta_matrix)
from .textio import format_matrix, format_terms, parse_matrix, parse_terms
from .verify import SUITES, Context, run_suites


@dataclass(frozen=True)
class SessionConfig:
    datum: ParabolicDatum
    ring: CoefficientRing
    seed: int
    orbit_cap: int
    val_bound: int
    a: object

    def header(self):
        return [("config.p", str(self.datum.p)),
                ("config.blocks", ",".join(map(str, self.datum.blocks))),
                ("config.flavor", self.datum.flavor),
                ("config.coeff", str(self.ring)),
                ("config.seed", str(self.seed)),
                ("config.orbit_cap", str(self.orbit_cap)),
                ("config.val_bound", str(self.val_bound)),
                ("config.a", format_matrix(self.a))]


class Report:
    """Ordered key/value lines, rendered as text or as key=value."""

    def __init__(self, command: str, config: SessionConfig = None):
        self.lines = [("command", command)]
        if config is not None:
            self.lines += config.header()

    def add(self, key, value):
        self.lines.append((key, str(value)))

    def render(self, fmt: str) -> str:
        if fmt == "kv":
            return "\n".join(f"{k}={v}" for k, v in self.lines) + "\n"
        width = max(len(k) for k, _ in self.lines)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in self.lines) + "\n"


def _blocks(text: str):
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"bad block list {text!r}") from None
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=2, help="the prime")
    p.add_argument("--blocks", default="1,1", help="block sizes, e.g. 2,1")
    p.add_argument("--flavor", default="iwahori", choices=("iwahori", "pro-p"))
    p.add_argument("--coeff", default="z", help="coefficient ring: z or mod:m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    p.add_argument("--val-bound", type=int, default=1, help="valuation bound for random elements")
    p.add_argument("--a", default=None, help="strictly positive element (default: block scalars p^(r-1),...,1)")
    p.add_argument("--format", default="text", choices=("text", "kv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parahecke",
                                     description="Exact computations in parabolic Hecke algebras.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("describe", help="datum, Gamma generators and the positive template")
    _common(p)
    p.add_argument("--level", type=int, default=3, help="print generators modulo p^level")

    p = sub.add_parser("decompose", help="right cosets of Gamma g Gamma")
    _common(p)
    p.add_argument("--g", required=True)
    p.add_argument("--pair", default="P", choices=("P", "M"))
    p.add_argument("--oracle", action="store_true", help="also compute the index independently")

    p = sub.add_parser("mul", help="product of two Hecke elements")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--pair", default="P", choices=("P", "M"))

    for verb, arg, hlp in (("theta", "--x", "image in the Levi algebra"),
                           ("centralizer-test", "--x", "does X commute with T_a"),
                           ("shift", "--x", "least n with T_a^n X in C(a)"),
                           ("fraction", "--y", "write a Levi element as Theta(T_a)^-n Theta(X)"),
                           ("kernel-test", "--x", "T_a-torsion witness")):
        p = sub.add_parser(verb, help=hlp)
        _common(p)
        p.add_argument(arg, required=True)

    p = sub.add_parser("image", help="elementary divisors of the truncated image of Theta over Z")
    _common(p)
    p.add_argument("--bound", type=int, default=1, help="valuation bound of the truncation")

    p = sub.add_parser("module", help="module analysis")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("analyze", help="analyze a JSON module spec")
    _common(q)
    q.add_argument("file")

    p = sub.add_parser("verify", help="run seeded property suites")
    _common(p)
    p.add_argument("--suite", default="all", help="all or a comma list of " + ",".join(SUITES))
    p.add_argument("--cases", type=int, default=20, help="random cases per property")
    return parser


def _config(args) -> SessionConfig:
    datum = ParabolicDatum(args.p, _blocks(args.blocks), args.flavor)
    ring = CoefficientRing.parse(args.coeff)
    if args.orbit_cap < 1 or args.val_bound < 0:
        raise ParseError("caps must be positive")
    a = datum.element(parse_matrix(args.a, datum.p)) if args.a else datum.strictly_positive_template()
    return SessionConfig(datum, ring, args.seed, args.orbit_cap, args.val_bound, a)


def _element(cfg: SessionConfig, text: str, pair: Pair):
    terms = parse_terms(text, cfg.datum.p)
    for _, g in terms:
        cfg.datum.element(g)
    return from_T_basis(terms, cfg.datum, pair, cfg.ring, cfg.orbit_cap)


def _show(X) -> str:
    return format_terms(to_T_basis(X))


def cmd_describe(cfg, args, rep):
    d = cfg.datum
    rep.add("n", d.n)
    rep.add("subgroup", "Gamma = Gamma_U Gamma_M, Gamma_M = product of "
            + ("pro-p " if d.flavor == "pro-p" else "") + "Iwahori subgroups")
    gens = gamma_generators(d, args.level, "P")
    q = d.p ** args.level
    rep.add("generators.modulus", q)
    rep.add("generators.count", len(gens))
    for i, g in enumerate(gens):
        rows = [[x % q for x in row] for row in g.num]
        rep.add(f"generator.{i}", "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in rows) + "]")
    t = d.strictly_positive_template()
    rep.add("strictly_positive_template", format_matrix(t))
    rep.add("a.strictly_positive", d.is_strictly_positive(cfg.a))


def cmd_decompose(cfg, args, rep):
    d = cfg.datum
    g = d.element(parse_matrix(args.g, d.p))
    dec = decompose_double_coset(g, d, args.pair, cfg.orbit_cap)
    rep.add("cosets", len(dec))
    for i, c in enumerate(sorted(dec.cosets, key=lambda c: c.key)):
        rep.add(f"coset.{i}", format_matrix(c.rep))
    if args.oracle:
        try:
            rep.add("oracle.enumeration", oracle_index(g, d, args.pair))
        except ResourceError as e:
            rep.add("oracle.enumeration", f"skipped ({e})")
        if args.pair == "P":
            rep.add("oracle.volume", oracle_volume_index(g, d))


def cmd_mul(cfg, args, rep):
    pair = Pair(args.pair)
    X, Y = _element(cfg, args.x, pair), _element(cfg, args.y, pair)
    Z = hecke_mul(X, Y)
    rep.add("product", _show(Z))
    rep.add("product.cosets", len(Z))


def cmd_theta(cfg, args, rep):
    X = _element(cfg, args.x, Pair.P)
    rep.add("theta", _show(theta(X)))


def cmd_centralizer(cfg, args, rep):
    X = _element(cfg, args.x, Pair.P)
    rep.add("commutes", centralizer_test(X, cfg.a))
    rep.add("structural", structural_centralizer_test(X))


def cmd_shift(cfg, args, rep):
    X = _element(cfg, args.x, Pair.P)
    n, Y = power_shift(X, cfg.a)
    rep.add("n", n)
    rep.add("shifted", _show(Y))


def cmd_fraction(cfg, args, rep):
    Y = _element(cfg, args.y, Pair.M)
    w = fraction_decompose(Y, cfg.a)
    rep.add("n", w.n)
    rep.add("numerator", _show(w.X))
    rep.add("theta_numerator", _show(w.shifted))


def cmd_kernel(cfg, args, rep):
    X = _element(cfg, args.x, Pair.P)
    w = kernel_test(X, cfg.a)
    rep.add("witness", "none" if w.n is None else w.n)
    rep.add("shift_exponent", w.shift)
    rep.add("theta_is_zero", theta(X).is_zero())


def cmd_image(cfg, args, rep):
    res = image_experiment(cfg.datum, args.bound)
    rep.add("bound", res["bound"])
    rep.add("generators", res["generators"])
    rep.add("basis_size", res["basis_size"])
    rep.add("elementary_divisors", ",".join(map(str, res["elementary_divisors"])) or "-")
    rep.add("torsion_primes", ",".join(map(str, res["torsion_primes"])) or "none")


def _mat(M) -> str:
    return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in M) + "]"


def cmd_module(cfg, args, rep):
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {args.file}: {e.strerror}") from None
    spec = load_module_spec(text, args.file)
    act = check_consistency(spec)
    a = spec.a
    rep.add("module.name", spec.name or "-")
    rep.add("module.datum", spec.datum.header())
    rep.add("module.modulus", spec.modulus)
    rep.add("module.dimension", spec.dim)
    rep.add("module.assignments", len(spec.assignments))
    rep.add("consistency", "ok")
    R = radical(act, a)
    rep.add("T_a", _mat(ta_matrix(act, a)))
    rep.add("radical.generators", len(R.rows))
    rep.add("radical.size", R.size())
    rep.add("radical.basis", _mat(R.rows) if R.rows else "[]")
    rep.add("radical.submodule", radical_submodule_check(act, a))
    if spec.b is not None:
        try:
            same = radical_independence(act, a, spec.b)
            rep.add("radical.independent_of_a", same if same else "False (alarm: not a module)")
        except CoverageError:
            rep.add("radical.independent_of_a", "skipped (T_b not expressible)")
    ok = descent_test(act, a)
    rep.add("descent", ok)
    if ok:
        for i, Y in enumerate(spec.induce):
            key = f"induce.{i}"
            try:
                res = induce_levi_action(act, a, Y)
                rep.add(key, f"{_show(Y)} -> {_mat(res.matrix)} n={res.n}"
                        + ("" if res.rechecked else " (recheck skipped)"))
            except HeckeError as e:
                rep.add(key, f"{_show(Y)} -> {type(e).__name__}: {e}")
    samples = [asg.element for asg in spec.assignments]
    statuses = essential_image_check(act, a, samples)
    for asg, st in zip(spec.assignments, statuses):
        rep.add(f"essential_image.{asg.label}", st)


def cmd_verify(cfg, args, rep):
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    ctx = Context(cfg.datum, cfg.ring, cfg.a, cfg.seed, args.cases, cfg.val_bound, cfg.orbit_cap)
    results = run_suites(names, ctx)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} cases={r.cases}"
        if not r.passed:
            line += f" failures={r.failures} first={r.detail}"
        rep.add(f"property.{r.suite}.{r.name}", line)
    failed = sum(not r.passed for r in results)
    rep.add("summary", f"properties={len(results)} passed={len(results) - failed} failed={failed}")
    return 5 if failed else 0


COMMANDS = {
    "describe": cmd_describe,
    "decompose": cmd_decompose,
    "mul": cmd_mul,
    "theta": cmd_theta,
    "centralizer-test": cmd_centralizer,
    "shift": cmd_shift,
    "fraction": cmd_fraction,
    "kernel-test": cmd_kernel,
    "image": cmd_image,
    "module": cmd_module,
    "verify": cmd_verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    clear_caches()
    cosets.stats.clear()
    started = time.perf_counter()
    verb = args.verb + (" " + args.action if args.verb == "module" else "")
    try:
        cfg = _config(args)
        rep = Report(verb, cfg)
        code = COMMANDS[args.verb](cfg, args, rep) or 0
    except HeckeError as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return e.exit_code
    rep.add("counters.cosets_enumerated", cosets.stats["cosets_enumerated"])
    rep.add("counters.coset_keys", cosets.stats["coset_keys"])
    rep.add("counters.equality_tests", cosets.stats["equality_tests"])
    out.write(rep.render(args.format))
    print(f"elapsed {time.perf_counter() - started:.3f}s", file=err)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
