"""Command line entry point: ``einfty <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or parse errors.
"""

import argparse
import json
import os
import sys

from . import coaction as co
from . import quotient as Q
from . import simplicial as sc
from . import trees as T
from .core import FormalSum
from .grammar import ParseError, format_sum, parse_simplex, parse_tree_sum, tensor_to_list


class UsageError(Exception):
    pass


def _complex(arg):
    if os.path.exists(arg):
        with open(arg) as fh:
            try:
                return sc.ComplexSpec.from_json(fh.read())
            except (ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"{arg}: not a complex description ({exc})") from None
    name = os.path.basename(arg)
    if name.endswith(".json"):
        name = name[:-5]
    if name in sc.FIXTURES:
        return sc.load_fixture(name)
    raise UsageError(f"{arg}: no such file or bundled complex ({', '.join(sc.FIXTURES)})")


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _homogeneous(x, what):
    if x and x.degree(T.degree) == "mixed":
        raise UsageError(f"{what} mixes degrees")
    if x and len({T.arity(t) for t, _ in x.items()}) > 1:
        raise UsageError(f"{what} mixes arities")


# ------------------------------------------------------------------ commands


def cmd_verify_operad(args):
    if args.max_arity < 1 or args.max_degree < 0:
        raise UsageError("--max-arity must be >= 1 and --max-degree >= 0")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be positive")
    try:
        report = Q.verify_einfty(args.max_arity, args.max_degree, samples=args.samples,
                                 seed=args.seed, homology_arity=args.homology_arity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def cmd_contraction_check(args):
    x = parse_tree_sum(args.expr)
    _homogeneous(x, "expression")
    x = Q.normalize(x)
    complete = not args.literal
    ph = Q.phi(x, complete)
    lhs = Q.r_boundary(ph) + Q.phi(Q.r_boundary(x), complete)
    ee = FormalSum()
    for t, c in x.items():
        ee = ee + Q.eta_epsilon_tree(t) * c
    residual = lhs - x + ee
    payload = {
        "input": format_sum(x),
        "phi": format_sum(ph),
        "d_phi_plus_phi_d": format_sum(lhs),
        "residual": format_sum(residual),
        "formula": "literal" if args.literal else "completed",
        "passed": not residual,
    }
    text = "\n".join(f"{k}: {payload[k]}" for k in ("input", "phi", "d_phi_plus_phi_d", "residual"))
    text += "\n" + ("PASS" if not residual else "FAIL")
    _emit(args, payload, text)
    return 0 if not residual else 1


def cmd_normal_form(args):
    x = parse_tree_sum(args.expr)
    out = format_sum(Q.normalize(x))
    _emit(args, {"input": args.expr, "normal_form": out}, out)
    return 0


def cmd_act(args):
    X = _complex(args.complex)
    x = parse_tree_sum(args.element)
    _homogeneous(x, "element")
    s = parse_simplex(args.simplex)
    if s not in X:
        raise UsageError(f"simplex {list(s)} is not in the complex")
    h = co.CoactionHandle(X)
    val = co.theta_tree(h, x, FormalSum.basis(s))
    payload = {"element": format_sum(x), "simplex": list(s), "tensor": tensor_to_list(val)}
    status = 0
    if args.verify:
        d = x.degree(T.degree) or 0
        lhs = sc.tensor_boundary(val)
        rhs = co.theta_tree(h, Q.r_boundary(x), FormalSum.basis(s))
        rhs = rhs + co.theta_tree(h, x, sc.simplex_boundary(s)) * (-1 if d % 2 else 1)
        ok = lhs == rhs
        payload["chain_map_identity"] = ok
        status = 0 if ok else 1
    text = json.dumps(payload["tensor"])
    if args.verify:
        text += "\nchain-map identity: " + ("PASS" if payload["chain_map_identity"] else "FAIL")
    _emit(args, payload, text)
    return status


def cmd_cup(args):
    X = _complex(args.complex)
    try:
        k, l = (int(a) for a in args.deg.split(","))
    except ValueError:
        raise UsageError("--deg expects two integers such as 1,1") from None
    if k < 0 or l < 0:
        raise UsageError("degrees must be nonnegative")
    table = co.cup_product_table(X, k, l)
    lines = [f"H^{d} = {g}" for d, g in sorted(table["H"].items())]
    for e in table["entries"]:
        lines.append(f"{e['left']} u {e['right']} = free {e['free']} torsion {e['torsion']}")
    _emit(args, table, "\n".join(lines))
    return 0


def cmd_homology(args):
    X = _complex(args.complex)
    h = sc.homology(X)
    coh = sc.cohomology_ring_input(X)
    payload = {
        "homology": {str(k): {"betti": b, "torsion": t} for k, (b, t) in sorted(h.items())},
        "cohomology": {str(k): g.describe() for k, g in sorted(coh.items())},
    }
    lines = []
    for k, (b, t) in sorted(h.items()):
        parts = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z/{o}" for o in t]
        lines.append(f"H_{k} = {' + '.join(parts) if parts else '0'}")
    for k, g in sorted(coh.items()):
        lines.append(f"H^{k} = {g.describe()}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_relations(args):
    X = _complex(args.complex)
    if args.budget is not None and args.budget < 1:
        raise UsageError("--budget must be positive")
    report = co.check_relations(co.CoactionHandle(X), max_arity=args.max_arity, max_degree=args.max_degree,
                            budget=args.budget, seed=args.seed)
    _emit(args, report.to_dict(), report.to_text())
    return 0 if report.passed else 1


# -------------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="einfty", description="Exact E-infinity operad toolkit.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        return sp

    sp = add("verify-operad", cmd_verify_operad, "contraction, freeness and degree-0 checks on R(n)")
    sp.add_argument("--max-arity", type=int, required=True)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--samples", type=int, help="random trees per cell for arity >= 4")
    sp.add_argument("--homology-arity", type=int, help="also compute H_*(R(n)) by SNF up to this arity")

    sp = add("contraction-check", cmd_contraction_check, "evaluate d Phi + Phi d on an element of R")
    sp.add_argument("expr")
    sp.add_argument("--literal", action="store_true", help="omit the degree-0-root completion term")

    sp = add("normal-form", cmd_normal_form, "canonical representative in R")
    sp.add_argument("expr")

    sp = add("act", cmd_act, "evaluate the structure map on a simplex")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--simplex", required=True)
    sp.add_argument("--verify", action="store_true", help="check the chain-map identity on this simplex")

    sp = add("cup", cmd_cup, "cup product table in the SNF generator basis")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--deg", required=True, help="k,l")

    sp = add("homology", cmd_homology, "integer homology and cohomology")
    sp.add_argument("--complex", required=True)

    sp = add("relations", cmd_relations, "check the coalgebra relations on a complex")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--budget", type=int, help="random sample size (default: all cases)")
    sp.add_argument("--max-arity", type=int, default=3)
    sp.add_argument("--max-degree", type=int, default=3)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(exc.caret(), file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"einfty {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
