"""Command-line entry point: ``cyclocat <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arith.cyclotomic import (cyclotomic_polynomial, factorize, string_quotient,
                               verify_cyclotomic_identities)
from .arith.field import FieldError
from .report import Report

EXIT_FAIL = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


class Output:
    """Buffers text lines and a JSON payload; emitted once, in order."""

    def __init__(self, args):
        self.as_json = getattr(args, "json", False)
        self.out = getattr(args, "out", None)
        self.lines: list[str] = []
        self.payload: dict = {}

    def line(self, text: str = ""):
        self.lines.append(text)

    def report(self, report: Report):
        self.lines.extend(report.lines())
        self.payload.setdefault("reports", []).append(report.to_dict())

    def emit(self):
        text = json.dumps(self.payload, indent=1) if self.as_json else "\n".join(self.lines)
        if self.out:
            Path(self.out).write_text(text + "\n")
        else:
            print(text)


def _structure(args):
    from .hopf import build_structure
    if args.n is None:
        raise ConfigError("--n is required")
    try:
        return build_structure(args.n, args.field)
    except (FieldError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _module(path, H):
    from .io import load_module
    return load_module(path, H)


# --- subcommands ------------------------------------------------------------------------------

def cmd_verify_hopf(args, out: Output) -> int:
    from .hopf import verify_hopf_axioms, verify_integrals, verify_spherical, verify_structure
    H = _structure(args)
    reports = [verify_structure(H), verify_hopf_axioms(H), verify_spherical(H), verify_integrals(H)]
    for r in reports:
        out.report(r)
    return 0 if all(reports) else EXIT_FAIL


def cmd_examples(args, out: Output) -> int:
    from .gradedmod import (ModuleError, example_I_three_primes, example_V, example_Vdoubleprime,
                            example_Vprime)
    from .ideal import is_in_I, is_in_Ik
    from .k0 import class_of
    from .stable import stable_hom
    H = _structure(args)
    ok = True
    try:
        mods = [example_V(H), example_Vprime(H), example_Vdoubleprime(H)]
    except ModuleError:
        mods = []
        out.line("two-prime examples unavailable")
        out.payload["two_prime"] = None
    rows = []
    for M in mods:
        res = is_in_Ik(M, 2, budget=args.budget, seed=args.seed)
        ok &= bool(res)
        row = {"name": M.name, "graded_dimension": str(M.graded_dimension()),
               "I_2": res.to_dict(),
               "k0_stmod": str(class_of(M, "stmod")), "k0_on": str(class_of(M, "on"))}
        rows.append(row)
        out.line(f"{M.name}: graded dim {row['graded_dimension']}")
        out.line(f"  I_2 membership: {res.status}"
                 + (f" ({len(res.certificate)} steps)" if res.certificate else ""))
        if res.certificate:
            out.line("  certificate: " + json.dumps(res.certificate.to_dict()))
        out.line(f"  K0(stmod) = {row['k0_stmod']}, K0(O_{H.n}) = {row['k0_on']}")
    if mods:
        out.line("stable hom dimensions (row -> column):")
        table = [[stable_hom(A, B).stable_dimension for B in mods] for A in mods]
        for A, r in zip(mods, table):
            out.line(f"  {A.name:4s} " + " ".join(str(x) for x in r))
        out.payload["two_prime"] = rows
        out.payload["stable_hom"] = table
    try:
        T = example_I_three_primes(H)
    except ModuleError:
        T = None
        out.line("three-prime example unavailable")
    if T is not None:
        res = is_in_I(T, budget=args.budget, seed=args.seed)
        ok &= bool(res)
        out.line(f"{T.name}: graded dim {T.graded_dimension()}, I membership {res.status}")
        if res.certificate:
            out.line("  certificate kinds: " + " ".join(str(k) for k in res.certificate.kinds()))
        out.payload["three_prime"] = {"graded_dimension": str(T.graded_dimension()),
                                      "I": res.to_dict()}
    return 0 if ok else EXIT_FAIL


def cmd_k0(args, out: Output) -> int:
    from .k0 import class_of
    H = _structure(args)
    M = _module(args.module, H)
    c = class_of(M, args.ring)
    out.line(str(c))
    out.payload.update(c.to_dict())
    return 0


def cmd_k0_ideal(args, out: Output) -> int:
    from .k0 import ideal_generated_by_strings
    if args.n is None or args.n < 2:
        raise ConfigError("--n >= 2 is required")
    g = ideal_generated_by_strings(args.n, check=False)
    phi = cyclotomic_polynomial(args.n)
    out.line(f"gcd = {g}")
    out.line(f"Phi_{args.n} = {phi}")
    out.line("equal: " + ("yes" if g == phi else "NO"))
    out.payload.update({"n": args.n, "gcd": str(g), "phi": str(phi), "equal": g == phi})
    return 0 if g == phi else EXIT_FAIL


def cmd_ideal_test(args, out: Output) -> int:
    from .ideal import is_in_I, is_in_Ik
    H = _structure(args)
    M = _module(args.module, H)
    if args.k is not None:
        if not 1 <= args.k <= H.t:
            raise ConfigError(f"--k must be in 1..{H.t} for n={H.n}")
        res = is_in_Ik(M, args.k, budget=args.budget, seed=args.seed)
    else:
        res = is_in_I(M, budget=args.budget, seed=args.seed)
    out.line(res.status)
    if res.certificate is not None:
        out.line(json.dumps(res.certificate.to_dict()))
    if res.obstruction:
        out.line(f"obstruction: {res.obstruction}")
    out.payload.update(res.to_dict())
    return 0


def cmd_stable_hom(args, out: Output) -> int:
    from .stable import stable_hom
    H = _structure(args)
    M, N = _module(args.source, H), _module(args.target, H)
    s = stable_hom(M, N)
    out.line(f"total {len(s.total)}")
    out.line(f"null-homotopic {len(s.null_homotopic)}")
    out.line(f"stable {s.stable_dimension}")
    out.payload.update({"total": len(s.total), "null_homotopic": len(s.null_homotopic),
                        "stable": s.stable_dimension})
    return 0


def cmd_shift(args, out: Output) -> int:
    from .io import module_to_dict
    from .stable import shift_times
    H = _structure(args)
    M = _module(args.module, H)
    S = shift_times(M, args.times)
    data = module_to_dict(S)
    out.as_json = True
    out.payload = data
    return 0


def cmd_cone(args, out: Output) -> int:
    from .io import load_map, module_to_dict
    from .stable import cone
    H = _structure(args)
    f = load_map(args.map, H)
    out.as_json = True
    out.payload = module_to_dict(cone(f).module)
    return 0


def cmd_cyclotomic(args, out: Output) -> int:
    if args.n is None or args.n < 2:
        raise ConfigError("--n >= 2 is required")
    n = args.n
    phi = cyclotomic_polynomial(n)
    out.line(f"Phi_{n} = {phi}")
    strings = {p: string_quotient(n, n // p) for p, _ in factorize(n)}
    for p, s in strings.items():
        out.line(f"[{n}]/[{n // p}] = {s}")
    rep = verify_cyclotomic_identities(n)
    out.report(rep)
    out.payload.update({"n": n, "phi": str(phi),
                        "string_quotients": {str(p): str(s) for p, s in strings.items()}})
    return 0 if rep else EXIT_FAIL


def cmd_all_checks(args, out: Output) -> int:
    from .checks import run_all
    only = set(args.only) if args.only else None
    results = run_all(args.n, args.seed, args.budget, args.field, only)
    summary = []
    for crit, rep in results:
        status = "PASS" if rep else "FAIL"
        out.line(f"[{crit.number:2d}] {crit.name}: {status}")
        for c in rep.checks:
            out.line("     " + c.line())
        summary.append({"criterion": crit.number, "name": crit.name, "passed": rep.passed,
                        "report": rep.to_dict()})
    failed = [s["criterion"] for s in summary if not s["passed"]]
    out.line(f"summary: {len(summary) - len(failed)}/{len(summary)} criteria passed"
             + (f"; failed {failed}" if failed else ""))
    out.payload.update({"n": args.n, "seed": args.seed, "budget": args.budget,
                        "criteria": summary, "failed": failed})
    return EXIT_FAIL if failed else 0


# --- argument parsing --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="the integer n >= 2")
    common.add_argument("--field", default="q",
                        help="'q' for Q(zeta_N) (default) or 'fp:<prime>' with prime = 1 mod N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=10_000, help="search budget in nodes")
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--out", help="write output to this file")

    parser = argparse.ArgumentParser(prog="cyclocat",
                                     description="Graded H_n-modules, their stable category and K0.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("verify-hopf", cmd_verify_hopf, "check the Hopf, spherical and integral identities")
    add("examples", cmd_examples, "build the two- and three-prime example modules")
    p = add("k0", cmd_k0, "K0 class of a module file")
    p.add_argument("--ring", choices=["stmod", "on"], default="on")
    p.add_argument("module")
    add("k0-ideal", cmd_k0_ideal, "gcd of the string classes, compared with Phi_n")
    p = add("ideal-test", cmd_ideal_test, "membership in I (or I_k with --k)")
    p.add_argument("--k", type=int)
    p.add_argument("module")
    p = add("stable-hom", cmd_stable_hom, "total, null-homotopic and stable hom dimensions")
    p.add_argument("source")
    p.add_argument("target")
    p = add("shift", cmd_shift, "apply the stable shift r times and strip projectives")
    p.add_argument("--times", type=int, default=1)
    p.add_argument("module")
    p = add("cone", cmd_cone, "cone of a map file")
    p.add_argument("map")
    add("cyclotomic", cmd_cyclotomic, "Phi_n, string quotients and their identities")
    p = add("all-checks", cmd_all_checks, "run the acceptance checks")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    return parser


def main(argv=None) -> int:
    from .io import ModuleFileError
    from .k0 import K0Error
    args = build_parser().parse_args(argv)
    out = Output(args)
    try:
        code = args.func(args, out)
    except (ConfigError, FieldError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ModuleFileError, K0Error) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
