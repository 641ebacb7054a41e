"""Command-line front end.

Exit codes: 0 everything passed, 1 a check failed (or a computation was
rejected), 2 bad configuration or input, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from . import __version__
from .affine import build_affine, compute_root_system
from .classical import SlSuper, build_sigma
from .clifford import build_clifford_module, check_clifford_relations, coradical, gram_f_lambda
from .errors import InvalidConfig, InvalidInput, SuperAffineError
from .exact import label_sort_key, radical
from .functionals import Functional
from .modules import GradedModule
from .module_theory import (
    LaurentAlgebra,
    build_functional_f,
    build_omega_module,
    build_v_k_phi,
    core_module,
    induced_character,
    induced_character_bruteforce,
    laurent_evaluation,
    loop_module,
    omega_lambda_lift,
    parabolic_decompose,
    root_dims_and_parities,
    simple_component,
    top_space,
)
from .quadratic import (
    Q_RULES,
    adjoint_quotient_module,
    build_q,
    exterior_loop_module,
    find_flat_vector,
    flat_search_radius,
    is_flat,
    q_labels,
    trivial_q_module,
)
from .roots import A_FOUR, check_table_consistency, normalize_type, table_root_datum
from .suites import (
    FAULTS,
    SUITE_ORDER,
    parse_config,
    report_exit_code,
    report_json,
    report_text,
    run_suite,
)
from .superalgebra import Window, label_str, vec_to_json


def _emit(doc, out: str | None = None) -> None:
    text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _functional(text: str) -> Functional:
    return Functional.parse(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    if args.what == "q":
        _emit(build_q(Window(-args.window, args.window)).to_json() + "\n", args.out)
    elif args.what == "slsuper":
        _emit(SlSuper(args.m, args.n).table().to_json() + "\n", args.out)
    elif args.what == "sigma":
        s = build_sigma(SlSuper(args.m, args.n))
        images = {label_str(x): vec_to_json(s.apply({x: 1})) for x in s.algebra.labels}
        _emit({"m": args.m, "n": args.n, "images": images}, args.out)
    elif args.what == "affine":
        _emit(build_affine(args.m, args.n, args.window).table.to_json() + "\n", args.out)
    elif args.what == "omega":
        omega = build_omega_module(_functional(args.lam), _functional(args.rho))
        xs = q_labels(Window(-args.window, args.window))
        _emit(omega.module.to_json(xs) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    text = None
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    flags = {
        "type": args.type,
        "m": args.m,
        "n": args.n,
        "window": args.window,
        "suites": ",".join(filter(None, [*args.names, args.suites or ""])) or None,
        "seed": args.seed,
        "samples": args.samples,
        "inject_fault": args.inject_fault,
        "format": args.format,
        "output": args.out,
        "workers": args.workers,
    }
    cfg = parse_config(flags, text, args.config or "config")
    report = run_suite(cfg)
    _emit(report_json(report) if cfg.format == "json" else report_text(report), cfg.output)
    return report_exit_code(report)


def cmd_report(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        try:
            report = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{args.file}: line {exc.lineno}: {exc.msg}") from None
    _emit(report_json(report) if args.format == "json" else report_text(report))
    return report_exit_code(report)


def cmd_roots(args) -> int:
    tag = normalize_type(args.type)
    if args.source == "computed":
        if tag != A_FOUR:
            raise InvalidInput("computed root systems exist only for the order-four type")
        datum, _ = compute_root_system(build_affine(args.m, args.n, args.window))
    else:
        datum = table_root_datum(tag, args.m, args.n, args.window)
    rep = check_table_consistency(datum)
    _emit({"type": datum.type_tag, "m": args.m, "n": args.n, "window": args.window, "p_star": datum.p_star,
           "source": datum.source, "consistent": rep.ok, "problems": rep.problems, "roots": datum.to_json()})
    return 0 if rep.ok else 1


def cmd_clifford(args) -> int:
    lam = _functional(args.lam)
    if args.what == "gram":
        form = gram_f_lambda(lam, args.window)
        rad, qdim = radical(form)
        entries = [[label_str(a), label_str(b), str(form(a, b))] for a in form.basis for b in form.basis if form(a, b)]
        _emit({"lambda": lam.description, "window": args.window, "basis": [label_str(a) for a in form.basis],
               "entries": entries, "radical_dim": len(rad), "quotient_dim": qdim})
        return 0
    co = coradical(lam)
    doc = {"lambda": lam.description, "coradical_dims": co.dims, "coradical_value": co.value}
    if args.what == "coradical":
        _emit(doc)
        return 0
    ok = co.finite
    if co.finite:
        data, _ = build_clifford_module(lam)
        problems = check_clifford_relations(data.representation)
        doc.update(module_dim=data.module_dim, type=data.algebra_type, relation_problems=problems)
        ok = not problems
    _emit(doc)
    return 0 if ok else 1


def _module_summary(mod) -> dict:
    return {
        "name": mod.name,
        "dim": len(mod),
        "degrees": {str(k): mod.dim_of_degree(k) for k in mod.degrees()} if mod.graded else None,
    }


def cmd_module(args) -> int:
    W = Window(-args.window, args.window)
    action = args.action
    if action == "build-vkphi":
        A = LaurentAlgebra(args.var_degree, W)
        mod = build_v_k_phi(A, args.K or args.var_degree, laurent_evaluation(args.z, args.var_degree))
        _emit(mod.to_json(A.labels) + "\n", args.out)
        return 0
    if action == "build-omega":
        omega = build_omega_module(_functional(args.lam), _functional(args.rho))
        doc = _module_summary(omega.module)
        doc.update(type=omega.algebra_type, phi={label_str(z): len(m) for z, m in sorted(omega.phi.items(), key=lambda kv: label_sort_key(kv[0]))})
        _emit(doc, args.out)
        return 0
    if action in ("loop", "extract-simple", "lift"):
        lam = _functional(args.lam)
        omega = build_omega_module(lam, _functional(args.rho))
        L = loop_module(omega.module, args.window)
        if action == "loop":
            _emit(_module_summary(L), args.out)
            return 0
        if action == "extract-simple":
            res = simple_component(L, lam)
            _emit({"r": res.r, "s": res.s, "trace": res.trace, "dims": {str(k): v for k, v in res.dims.items()},
                   "graded_simple": res.graded_simple, "periodic": res.periodic, "notes": res.notes}, args.out)
            return 0 if res.graded_simple and res.periodic else 1
        aff = build_affine(args.m, args.n, args.window)
        weight = Functional({("L", 0, 0): args.lambda_h, ("d",): args.lambda_d})
        res = omega_lambda_lift(aff, L, weight)
        _emit({"dim": len(res.module.module), "lattice_matches": res.lattice_matches, "problems": res.problems[:5]},
              args.out)
        return 0 if res.lattice_matches and not res.problems else 1
    if action == "top":
        aff = build_affine(args.m, args.n, args.window)
        datum, spaces = compute_root_system(aff)
        F = build_functional_f(A_FOUR, args.m, args.n)
        res = top_space(core_module(aff), F.f, datum, spaces)
        _emit({
            "annihilator_dim": len(res.annihilator),
            "annihilator_weights": [{"dot": list(map(str, w[0])), "k": str(w[1])} for w in res.annihilator_weights],
            "support_gap_weights": len(res.support_gap),
            "stepping_trace": res.stepping_trace,
            "skipped_products": res.skipped_products,
            "notes": res.notes,
        }, args.out)
        return 0 if not res.empty else 1
    if action == "induce-char":
        tag = normalize_type(args.type)
        datum = table_root_datum(tag, args.m, args.n, args.window)
        F = build_functional_f(tag, args.m, args.n)
        dec = parabolic_decompose(datum, F.f)
        dims, parity = root_dims_and_parities(datum)
        base = {(tuple([0] * (args.m + args.n)), 0): 1}
        char = induced_character(base, dec, dims, parity, args.depth)
        brute = induced_character_bruteforce(base, dec, dims, parity, args.depth)
        rows = sorted(((w[1], w[0], c) for w, c in char.items()))
        _emit({"depth": args.depth, "matches_bruteforce": char == brute,
               "weights": [{"dot": list(d), "k": k, "mult": c} for k, d, c in rows]}, args.out)
        return 0 if char == brute else 1
    raise InvalidInput(f"unknown module action {action!r}")


def cmd_search(args) -> int:
    makers = {
        "grassmann": (2, exterior_loop_module),
        "adjoint-quotient": (1, adjoint_quotient_module),
        "trivial": (1, lambda w: trivial_q_module(w, (0,))),
    }
    if args.module_file:
        with open(args.module_file, encoding="utf-8") as fh:
            text = fh.read()
        try:
            doc = json.loads(text)
            lo, hi = doc["window"]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"{args.module_file}: not a graded module document ({exc})") from None
        mod = GradedModule.from_json(text, Q_RULES)
        name, d, radius = args.module_file, args.d, max(-lo, hi)
    else:
        d, make = makers[args.module]
        d = args.d or d
        radius = args.window or flat_search_radius(d)
        mod = make(Window(-radius, radius))
        name = args.module
    res = find_flat_vector(mod, d)
    ok = is_flat(mod, res.vector)
    _emit({"module": name, "radius": radius, "degree": res.degree, "branch": res.branch,
           "vector": vec_to_json(res.vector), "oracle_flat": ok})
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superaffine", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"superaffine {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an algebra or module and print it as JSON")
    b.add_argument("what", choices=["q", "slsuper", "sigma", "affine", "omega"])
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--n", type=int, default=0)
    b.add_argument("--window", type=int, default=8)
    b.add_argument("--lambda", dest="lam", default="eval:1")
    b.add_argument("--rho", default="zero")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run check suites and write a report")
    v.add_argument("names", nargs="*", metavar="SUITE", help="suites to run (same as --suites)")
    v.add_argument("--config", help="JSON config file; flags override its fields")
    v.add_argument("--type")
    v.add_argument("--m", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--window", type=int)
    v.add_argument("--suites", help=f"comma-separated subset of: {', '.join(SUITE_ORDER)}")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int, help="sampled triples for the affine Jacobi check")
    v.add_argument("--inject-fault", choices=FAULTS)
    v.add_argument("--format", choices=["text", "json"])
    v.add_argument("--out")
    v.add_argument("--workers", type=int)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("roots", help="root datum from the tables or from the adjoint action")
    r.add_argument("--type", default=A_FOUR)
    r.add_argument("--m", type=int, default=1)
    r.add_argument("--n", type=int, default=0)
    r.add_argument("--window", type=int, default=8)
    r.add_argument("--source", choices=["table", "computed"], default="table")
    r.set_defaults(func=cmd_roots)

    c = sub.add_parser("clifford", help="form, coradical and Clifford module of a functional")
    c.add_argument("what", nargs="?", choices=["gram", "coradical", "module"], default="module")
    c.add_argument("--window", type=int, default=9, help="degree radius for 'gram'")
    c.add_argument("--lambda", dest="lam", default="eval:1")
    c.set_defaults(func=cmd_clifford)

    mo = sub.add_parser("module", help="module constructions")
    mo.add_argument("action", choices=["build-vkphi", "build-omega", "loop", "extract-simple", "lift", "top", "induce-char"])
    mo.add_argument("--window", type=int, default=12)
    mo.add_argument("--depth", type=int, default=2)
    mo.add_argument("--f", choices=["standard"], default="standard")
    mo.add_argument("--type", default=A_FOUR)
    mo.add_argument("--m", type=int, default=1)
    mo.add_argument("--n", type=int, default=0)
    mo.add_argument("--lambda", dest="lam", default="eval:1")
    mo.add_argument("--rho", default="zero")
    mo.add_argument("--lambda-h", default="0", help="value of the lifted weight on the first Cartan element")
    mo.add_argument("--lambda-d", default="0", help="value of the lifted weight on d")
    mo.add_argument("--var-degree", type=int, default=1)
    mo.add_argument("--K", type=int, help="generator of the support lattice (default: the variable degree)")
    mo.add_argument("--z", default="1")
    mo.add_argument("--out")
    mo.set_defaults(func=cmd_module)

    s = sub.add_parser("search", help="flat-vector search on a sample module")
    s.add_argument("target", choices=["flat", "flat-vector"])
    s.add_argument("--module", choices=["grassmann", "adjoint-quotient", "trivial"], default="grassmann")
    s.add_argument("--module-file", help="graded Q-module JSON, as written by 'module' or 'build'")
    s.add_argument("--d", type=int, help="bound on homogeneous dimensions (default: read off the module)")
    s.add_argument("--window", type=int)
    s.set_defaults(func=cmd_search)

    rp = sub.add_parser("report", help="re-render a saved JSON report")
    rp.add_argument("file")
    rp.add_argument("--format", choices=["text", "json"], default="text")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfig, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SuperAffineError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
