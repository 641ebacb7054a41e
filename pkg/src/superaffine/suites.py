"""Check suites, fault injection and machine-readable reports."""

from __future__ import annotations

import json
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import __version__
from .affine import (
    C,
    D,
    build_affine,
    check_affine_jacobi,
    compute_root_system,
    core_structure,
    decompose_frak_L,
    ad_nilpotency_degree,
    verify_q_embedding,
)
from .classical import SlSuper, build_sigma, eigenweight_decompose, verify_automorphism, verify_tables
from .clifford import (
    build_clifford_module,
    check_clifford_relations,
    check_onesided_nondegeneracy,
    coradical,
    mat_scale,
)
from .errors import InvalidConfig, InvalidInput, PhiNotCompatible, SuperAffineError
from .exact import ONE, GScalar
from .functionals import Functional
from .module_theory import (
    LaurentAlgebra,
    RootFunctional,
    associative_action_problems,
    audit_ln_support,
    build_functional_f,
    build_omega_module,
    build_v_k_phi,
    core_module,
    induced_character,
    induced_character_bruteforce,
    is_simple_module,
    k_restriction_matches,
    laurent_evaluation,
    loop_module,
    omega_lambda_lift,
    omega_problems,
    parabolic_decompose,
    phi_problems,
    root_dims_and_parities,
    simple_component,
    top_space,
)
from .modules import generated_submodule, validate_module
from .quadratic import (
    adjoint_quotient_module,
    build_q,
    check_m20_identities,
    exterior_loop_module,
    find_flat_vector,
    flat_search_radius,
    is_flat,
    q_labels,
    trivial_q_module,
    verify_annihilation_propagation,
)
from .roots import (
    A_FOUR,
    RE,
    TYPES,
    Root,
    check_rank,
    check_table_consistency,
    compare_root_data,
    normalize_type,
    table_root_datum,
)
from .superalgebra import Window, check_super_jacobi, label_str

WORKERS_ENV = "SUPERAFFINE_WORKERS"
FAULTS = ("sigma-sign", "q-structure-constant", "clifford-relation", "action-entry", "root-table-entry")
PASS, FAIL, SKIPPED = "pass", "fail", "skipped-boundary"


# ---------------------------------------------------------------------------
# configuration


@dataclass
class SuiteConfig:
    type_tag: str = A_FOUR
    m: int = 1
    n: int = 0
    window: int = 12
    suites: list = field(default_factory=list)
    output: str | None = None
    seed: int = 0
    samples: int = 3000
    inject_fault: str | None = None
    format: str = "text"
    workers: int = 1

    @property
    def p_star(self) -> int:
        return 4 if self.type_tag == A_FOUR else 2

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        out["p_star"] = self.p_star
        return out


_FIELDS = {
    "type": "type_tag",
    "type_tag": "type_tag",
    "m": "m",
    "n": "n",
    "window": "window",
    "suites": "suites",
    "output": "output",
    "seed": "seed",
    "samples": "samples",
    "inject_fault": "inject_fault",
    "format": "format",
    "workers": "workers",
}


SUITE_ALIASES = {"q-flat-search": "flat-search", "flat-vector": "flat-search", "root-tables": "roots"}


def _key_lines(text: str) -> dict:
    """Line number of each top-level key in a JSON config, for diagnostics."""
    out = {}
    for i, line in enumerate(text.splitlines(), start=1):
        for key in re.findall(r'"([A-Za-z_]+)"\s*:', line):
            out.setdefault(key, i)
    return out


def parse_config(values: dict | None = None, text: str | None = None, source: str = "config") -> SuiteConfig:
    """Validated configuration from a JSON document and/or a dict of flag values (flags win)."""
    merged: dict = {}
    where: dict = {}
    if text is not None:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise InvalidConfig(f"{source}: expected a JSON object")
        lines = _key_lines(text)
        for key, val in doc.items():
            if key not in _FIELDS:
                raise InvalidConfig(f"{source}: line {lines.get(key, 1)}: unknown field {key!r}")
            merged[_FIELDS[key]] = val
            where[_FIELDS[key]] = f"{source}: line {lines.get(key, 1)}: "
    for key, val in (values or {}).items():
        if val is None:
            continue
        if key not in _FIELDS:
            raise InvalidConfig(f"unknown option {key!r}")
        merged[_FIELDS[key]] = val
        where.pop(_FIELDS[key], None)

    def bad(attr: str, msg: str) -> InvalidConfig:
        name = {"type_tag": "type"}.get(attr, attr)
        return InvalidConfig(f"{where.get(attr, '')}field {name!r}: {msg}")

    cfg = SuiteConfig()
    for key, val in merged.items():
        setattr(cfg, key, val)
    for key in ("m", "n", "window", "seed", "samples", "workers"):
        val = getattr(cfg, key)
        if isinstance(val, bool) or not isinstance(val, int):
            raise bad(key, f"expected an integer, got {val!r}")
    try:
        cfg.type_tag = normalize_type(str(cfg.type_tag))
        check_rank(cfg.type_tag, cfg.m, cfg.n)
    except InvalidInput as exc:
        raise bad("type_tag", str(exc)) from None
    if cfg.workers < 1:
        raise bad("workers", "must be at least 1")
    if cfg.format not in ("text", "json"):
        raise bad("format", f"expected 'text' or 'json', got {cfg.format!r}")
    if cfg.inject_fault is not None and cfg.inject_fault not in FAULTS:
        raise bad("inject_fault", f"expected one of {', '.join(FAULTS)}")
    if isinstance(cfg.suites, str):
        cfg.suites = [s.strip() for s in cfg.suites.split(",") if s.strip()]
    if not isinstance(cfg.suites, list) or not all(isinstance(x, str) for x in cfg.suites):
        raise bad("suites", "expected a list of suite names")
    cfg.suites = [SUITE_ALIASES.get(x, x) for x in cfg.suites]
    if not cfg.suites:
        cfg.suites = applicable_suites(cfg)
    for name in cfg.suites:
        if name not in SUITES:
            raise bad("suites", f"unknown suite {name!r}")
        need = SUITES[name].min_window
        if cfg.window < need:
            raise bad("window", f"suite {name!r} needs a window of at least {need}")
        if SUITES[name].scope == "matrix" and (cfg.type_tag != A_FOUR or cfg.m < 1):
            raise bad("suites", f"suite {name!r} needs type {A_FOUR} with m >= 1")
    cfg.suites = [x for x in SUITE_ORDER if x in cfg.suites]
    return cfg


def applicable_suites(cfg: SuiteConfig) -> list[str]:
    out = []
    for name in SUITE_ORDER:
        spec = SUITES[name]
        if spec.scope == "matrix" and (cfg.type_tag != A_FOUR or cfg.m < 1):
            continue
        out.append(name)
    return out


# ---------------------------------------------------------------------------
# records


def _rec(name: str, anchor: str, ok: bool | None, **witness) -> dict:
    status = SKIPPED if ok is None else (PASS if ok else FAIL)
    return {"name": name, "anchor": anchor, "status": status, "witness": _jsonable(witness)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else label_str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, GScalar):
        return str(x)
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def _first(items, k: int = 3) -> list:
    return [str(i) for i in list(items)[:k]]


# ---------------------------------------------------------------------------
# suites over Q


def suite_q_jacobi(cfg: SuiteConfig) -> list[dict]:
    corrupt = None
    if cfg.inject_fault == "q-structure-constant":
        corrupt = {(("s", 2), ("t", 1)): {("t", 3): GScalar(2)}}
    alg = build_q(Window(-cfg.window, cfg.window), corrupt)
    fails = check_super_jacobi(alg)
    problems = alg.validate()
    return [
        _rec("q-jacobi.super-jacobi", "build_q/check_super_jacobi", not fails, failures=len(fails), first=_first(f[0] for f in fails)),
        _rec("q-jacobi.skew-symmetry", "build_q/validate", not problems, problems=problems[:3]),
    ]


def _z1_omega(cfg: SuiteConfig):
    omega = build_omega_module(Functional.evaluation(1))
    module = omega.module
    if cfg.inject_fault == "action-entry":
        v0 = module.labels[0]
        module = module.with_entry(("t", 1), v0, {module.labels[1]: GScalar(2)})
    return omega, module


def _z1_loop(cfg: SuiteConfig, window: int):
    omega, module = _z1_omega(cfg)
    return loop_module(module, window)


def suite_m20(cfg: SuiteConfig) -> list[dict]:
    out = []
    radius = 64
    modules = {
        "clifford-lift": _z1_loop(cfg, radius),
        "grassmann": exterior_loop_module(Window(-radius, radius)),
    }
    for name, mod in modules.items():
        vectors = [{v: ONE} for v in mod.labels if abs(mod.degree(v)) <= 4]
        rep = check_m20_identities(
            mod,
            vectors,
            r_values=(1, -1),
            tau_values=(1, -1),
            p_values=(-2, -1, 0, 1, 2),
            l_values=(-2, -1, 0, 1, 2),
            k_values=(0, 1, 2, 3),
            skip_out_of_window=True,
        )
        out.append(
            _rec(
                f"m20.{name}",
                "check_m20_identities",
                rep.ok and rep.checked > 0,
                checked=rep.checked,
                skipped=rep.skipped,
                mismatches=[(m.identity, m.params) for m in rep.mismatches[:3]],
            )
        )
    return out


def suite_m22(cfg: SuiteConfig) -> list[dict]:
    mod = exterior_loop_module(Window(-40, 40))
    u = {("g", 0, 3): ONE}
    results = []
    for r in (1, -1):
        for p in (1, -1):
            for l in (1, 2):
                for N in (None, 2 * l + 2):
                    try:
                        results.append(((r, p, l, N), verify_annihilation_propagation(mod, u, r, p, l, N)))
                    except SuperAffineError as exc:
                        results.append(((r, p, l, N), str(exc)))
    held = [x for x in results if x[1] is True]
    failed = [x for x in results if x[1] is False]
    return [
        _rec("m22.annihilation-propagation", "verify_annihilation_propagation", not failed and bool(held),
             held=len(held), failed=_first(failed), hypotheses_not_met=len(results) - len(held) - len(failed))
    ]


def suite_flat_search(cfg: SuiteConfig) -> list[dict]:
    out = []
    cases = [
        ("grassmann", 2, exterior_loop_module),
        ("adjoint-quotient", 1, adjoint_quotient_module),
        ("trivial", 1, lambda w: trivial_q_module(w, (0,))),
        ("trivial-shifted", 1, lambda w: trivial_q_module(w, (3,))),
    ]
    for name, d, make in cases:
        radius = flat_search_radius(d)
        mod = make(Window(-radius, radius))
        try:
            res = find_flat_vector(mod, d)
            ok = is_flat(mod, res.vector)
            out.append(_rec(f"flat-search.{name}", "find_flat_vector/is_flat", ok, radius=radius,
                            degree=res.degree, branch=res.branch))
        except SuperAffineError as exc:
            out.append(_rec(f"flat-search.{name}", "find_flat_vector", False, error=str(exc)))
    return out


def suite_clifford(cfg: SuiteConfig) -> list[dict]:
    out = []
    lam = Functional.evaluation(1)
    co = coradical(lam)
    data, mod = build_clifford_module(lam)
    rep = data.representation
    if cfg.inject_fault == "clifford-relation":
        rep.generators[0] = mat_scale(GScalar(2), rep.generators[0])
    rel = check_clifford_relations(rep)
    out.append(_rec("clifford.eval-1.coradical", "coradical", co.value == 2, dims=co.dims))
    out.append(_rec("clifford.eval-1.relations", "check_clifford_relations", not rel and data.module_dim == 2,
                    dim=data.module_dim, problems=rel[:3]))
    out.append(_rec("clifford.eval-1.type", "classify_simple_superalgebra", data.algebra_type == "M(1|1)",
                    type=data.algebra_type))
    zdata, _ = build_clifford_module(Functional.zero())
    out.append(_rec("clifford.zero.dim", "build_clifford_module", zdata.module_dim == 1, dim=zdata.module_dim))
    onesided = [
        (Functional.parse("t@-2=1"), 1),
        (Functional.parse("t@-6=1,t@-2=2"), 1),
        (Functional.parse("t@2=1,t@10=-1"), -1),
    ]
    for i, (f, sigma) in enumerate(onesided):
        res = check_onesided_nondegeneracy(f, sigma, 14, seed=cfg.seed)
        out.append(_rec(f"clifford.onesided-{i}", "check_onesided_nondegeneracy", res.ok and bool(res.witnesses),
                        functional=f.description, witnesses=len(res.witnesses), failures=len(res.failures)))
    return out


def suite_vkphi(cfg: SuiteConfig) -> list[dict]:
    out = []
    W = Window(-cfg.window, cfg.window)
    for name, deg, K in (("deg1", 1, 1), ("deg2", 2, 2)):
        A = LaurentAlgebra(deg, W)
        mod = build_v_k_phi(A, K, laurent_evaluation(1, deg))
        probs = associative_action_problems(mod, A)
        band = Window(W.lo + 2, W.hi - 2)
        inner = [v for v in mod.labels if mod.degree(v) in band]
        simple = all(
            len(generated_submodule(mod, [{v: ONE}], A.labels).basis) == len(mod.labels) for v in inner
        )
        supp_ok = mod.degrees() == [t for t in W.degrees() if t % K == 0]
        out.append(_rec(f"vkphi.{name}", "build_v_k_phi", not probs and simple and supp_ok,
                        support=mod.degrees(), problems=probs[:3]))
    try:
        phi = Functional(rule=lambda lab: 0 if lab[1] == 4 else 1)
        build_v_k_phi(LaurentAlgebra(1, W), 1, phi)
        out.append(_rec("vkphi.incompatible-rejected", "build_v_k_phi", False))
    except PhiNotCompatible as exc:
        out.append(_rec("vkphi.incompatible-rejected", "build_v_k_phi", True, error=str(exc)))
    return out


def suite_omega(cfg: SuiteConfig) -> list[dict]:
    out = []
    omega, module = _z1_omega(cfg)
    Qw = build_q(Window(-cfg.window, cfg.window))
    probs = validate_module(module, Qw)
    xs = q_labels(Window(-cfg.window, cfg.window))
    out.append(_rec("omega.eval-1.axioms", "build_omega_module/validate_module", not probs,
                    dim=omega.dim, problems=probs[:3]))
    out.append(_rec("omega.eval-1.simple", "build_omega_module", omega.dim == 2 and is_simple_module(module, xs),
                    type=omega.algebra_type))
    out.append(_rec("omega.eval-1.k-restriction", "build_omega_module", k_restriction_matches(omega, cfg.window)))
    zero = build_omega_module(Functional.zero(), Functional.parse("s@2=5"))
    zval = zero.module.act_basis(("s", 2), zero.module.labels[0])
    out.append(_rec("omega.zero", "build_omega_module", zero.dim == 1 and zval == {zero.module.labels[0]: GScalar(5)} and not omega_problems(zero, 8),
                    dim=zero.dim))
    big = build_omega_module(Functional.parse("eval:1;2"))
    labels = big.module.labels
    even = [v for v in labels if big.module.parity(v) == 0]
    bad = {("s", 2): {(even[0], even[1]): ONE}, ("s", -2): {(even[1], even[0]): ONE}}
    msgs = phi_problems(big.data, bad, 8)
    out.append(_rec("omega.noncommuting-phi-rejected", "phi_problems", any("commute" in m for m in msgs),
                    dim=big.dim, problems=msgs[:2]))
    return out


def suite_loop_extract(cfg: SuiteConfig) -> list[dict]:
    W = max(cfg.window, 12)
    L = _z1_loop(cfg, W)
    probs = validate_module(L, build_q(Window(-W, W)), vectors=[v for v in L.labels if abs(L.degree(v)) <= 4])
    res = simple_component(L, Functional.evaluation(1))
    decreasing = all(a > b for a, b in zip(res.trace, res.trace[1:]))
    dims = set(res.dims.values())
    return [
        _rec("loop-extract.axioms", "loop_module/validate_module", not probs, problems=probs[:3]),
        _rec("loop-extract.component", "simple_component",
             decreasing and res.graded_simple and res.periodic and res.r == 2 and len(dims) == 1 and max(dims) <= 2,
             trace=res.trace, r=res.r, dims=sorted(dims), notes=res.notes),
    ]


# ---------------------------------------------------------------------------
# suites on the matrix realization and the affine algebra


def _sigma(cfg: SuiteConfig):
    G = SlSuper(cfg.m, cfg.n)
    s = build_sigma(G)
    if cfg.inject_fault == "sigma-sign":
        s = s.with_flipped_sign()
    return G, s


def suite_sigma(cfg: SuiteConfig) -> list[dict]:
    G, s = _sigma(cfg)
    rep = verify_automorphism(s)
    return [
        _rec("sigma.bracket", "verify_automorphism", not rep.bracket_failures, failures=len(rep.bracket_failures)),
        _rec("sigma.order-four", "verify_automorphism", not rep.order_failures, failures=len(rep.order_failures)),
        _rec("sigma.form", "verify_automorphism", not rep.form_failures, failures=len(rep.form_failures)),
        _rec("sigma.cartan", "verify_automorphism", not rep.cartan_failures, failures=len(rep.cartan_failures)),
        _rec("sigma.report", "verify_automorphism", rep.ok),
    ]


def suite_tables(cfg: SuiteConfig) -> list[dict]:
    G, s = _sigma(cfg)
    dec = eigenweight_decompose(s)
    rep = verify_tables(s, dec)
    return [
        _rec("tables.listed-vectors", "verify_tables", rep.ok, rows=rep.rows_checked,
             failures=_first(rep.failures), notes=rep.notes),
        _rec("tables.total-dimension", "eigenweight_decompose", dec.total_dim() == G.dim,
             total=dec.total_dim(), expected=G.dim),
    ]


_AFF_CACHE: dict = {}


def _affine(cfg: SuiteConfig):
    key = (cfg.m, cfg.n, cfg.window)
    if key not in _AFF_CACHE:
        _AFF_CACHE.clear()
        _AFF_CACHE[key] = build_affine(cfg.m, cfg.n, cfg.window)
    return _AFF_CACHE[key]


def suite_affine_jacobi(cfg: SuiteConfig) -> list[dict]:
    rep = check_affine_jacobi(_affine(cfg), limit=cfg.samples, seed=cfg.seed)
    return [_rec("affine-jacobi.sampled", "check_affine_jacobi", rep.ok, checked=rep.checked,
                 failures=_first(rep.failures), form_failures=len(rep.form_failures))]


def _tabled(cfg: SuiteConfig):
    datum = table_root_datum(cfg.type_tag, cfg.m, cfg.n, cfg.window)
    if cfg.inject_fault == "root-table-entry":
        victim = min(datum.of_class(RE), key=lambda r: (abs(r.k), r.k, r.dot))
        datum = datum.without(victim)
    return datum


def suite_roots(cfg: SuiteConfig) -> list[dict]:
    datum = _tabled(cfg)
    rep = check_table_consistency(datum)
    counts = {c: len(datum.of_class(c)) for c in sorted(set(datum.classification.values()))}
    return [_rec("roots.table-consistency", "check_table_consistency", rep.ok, roots=len(datum.roots),
                 classes=counts, problems=rep.problems[:3])]


def suite_root_compare(cfg: SuiteConfig) -> list[dict]:
    computed, _ = compute_root_system(_affine(cfg))
    band = max(0, cfg.window - 8)
    diffs = compare_root_data(computed, _tabled(cfg), band)
    return [_rec("root-compare.interior", "compute_root_system/compare_root_data", not diffs,
                 interior=cfg.window - band, roots=len(computed.interior(band).roots), diffs=_first(diffs))]


def suite_core(cfg: SuiteConfig) -> list[dict]:
    rep = core_structure(_affine(cfg), band=max(2, cfg.window // 2))
    return [_rec("core.structure", "core_structure", rep.ok, band=rep.band, checked=rep.checked,
                 multiplicity=len(rep.multiplicity_failures), propagation=len(rep.propagation_failures),
                 connected=rep.connected, imaginary=len(rep.imaginary_failures))]


def suite_frakl(cfg: SuiteConfig) -> list[dict]:
    rep = decompose_frak_L(_affine(cfg))
    return [_rec("frakL.decomposition", "decompose_frak_L", rep.ok, dims=rep.dims, spans=rep.spans_everything,
                 direct=rep.direct, notes=rep.notes)]


def suite_q_embedding(cfg: SuiteConfig) -> list[dict]:
    rep = verify_q_embedding(_affine(cfg))
    return [
        _rec("q-embedding.relations", "verify_q_embedding", not rep.relation_failures,
             checked=rep.relations_checked, failures=_first(rep.relation_failures)),
        _rec("q-embedding.bracket-map", "verify_q_embedding", not rep.map_failures and rep.independent,
             checked=rep.map_pairs_checked, failures=_first(rep.map_failures)),
        _rec("q-embedding.abelian-part", "verify_q_embedding", not rep.k_failures, failures=len(rep.k_failures)),
    ]


def suite_lift(cfg: SuiteConfig) -> list[dict]:
    if not (cfg.m == cfg.n or cfg.n == 0):
        reason = "the imaginary part has no core-plus-nilpotent splitting when m != n and n >= 1"
        return [_rec("lift.boundary", "omega_lambda_lift", None, reason=reason)]
    aff = _affine(cfg)
    L = _z1_loop(cfg, cfg.window)
    lam = Functional({("L", 0, 0): GScalar("1/2"), D: GScalar("1/3")})
    res = omega_lambda_lift(aff, L, lam)
    mod = res.module.module
    d_ok = all(mod.act_basis(D, v) == {v: lam(D) + mod.degree(v)} for v in mod.labels)
    c_ok = all(not mod.act_basis(C, v) for v in mod.labels)
    return [
        _rec("lift.axioms", "omega_lambda_lift/validate_module", not res.problems, problems=res.problems[:3]),
        _rec("lift.d-and-c", "omega_lambda_lift", d_ok and c_ok),
        _rec("lift.submodule-lattice", "omega_lambda_lift", res.lattice_matches),
    ]


def suite_parabolic(cfg: SuiteConfig) -> list[dict]:
    out = []
    bad_checks = []
    for tag in TYPES:
        for m in range(3):
            for n in range(3):
                try:
                    check_rank(tag, m, n)
                except InvalidInput:
                    continue
                F = build_functional_f(tag, m, n)
                dec = parabolic_decompose(table_root_datum(tag, m, n, 6), F.f)
                if not F.ok or not dec.zero_is_delta_line:
                    bad_checks.append((tag, m, n, [k for k, v in F.checks.items() if not v]))
    out.append(_rec("parabolic.functional-all-types", "build_functional_f/parabolic_decompose", not bad_checks,
                    failures=_first(bad_checks)))
    F = build_functional_f(cfg.type_tag, cfg.m, cfg.n)
    datum = _tabled(cfg)
    dec = parabolic_decompose(datum, F.f)
    out.append(_rec("parabolic.config-type", "parabolic_decompose", F.ok and dec.zero_is_delta_line,
                    f=F.f.to_json(), plus=len(dec.plus_part), minus=len(dec.minus_part)))
    if cfg.type_tag == A_FOUR and cfg.m >= 1:
        probe = Root(tuple([1] + [0] * (cfg.m + cfg.n - 1)), 3)
        out.append(_rec("parabolic.eps1-plus-3delta", "parabolic_decompose", probe in dec.plus_part))
    zero = parabolic_decompose(datum, RootFunctional.zero(cfg.m, cfg.n))
    out.append(_rec("parabolic.zero-functional", "parabolic_decompose", zero.zero_part == datum.roots))
    return out


def suite_induce_char(cfg: SuiteConfig) -> list[dict]:
    window = min(cfg.window, 6)
    datum = table_root_datum(cfg.type_tag, cfg.m, cfg.n, window)
    F = build_functional_f(cfg.type_tag, cfg.m, cfg.n)
    dec = parabolic_decompose(datum, F.f)
    dims, parity = root_dims_and_parities(datum)
    base = {(tuple([0] * (cfg.m + cfg.n)), 0): 1}
    out = []
    for depth in range(4):
        a = induced_character(base, dec, dims, parity, depth)
        b = induced_character_bruteforce(base, dec, dims, parity, depth)
        out.append(_rec(f"induce-char.depth-{depth}", "induced_character", a == b, weights=len(a),
                        total=sum(a.values()), window=window))
    return out


def suite_ln_support(cfg: SuiteConfig) -> list[dict]:
    aff = _affine(cfg)
    datum, spaces = compute_root_system(aff)
    wm = core_module(aff)
    max_power = 5
    ln = set()
    for r in datum.of_class(RE):
        if abs(r.k) * max_power > cfg.window - 1:
            continue
        try:
            ad_nilpotency_degree(aff, spaces[r][0], max_power=max_power)
            ln.add(r)
        except SuperAffineError:
            pass
    audit = audit_ln_support(wm.support(), datum, ln, band=2)
    F = build_functional_f(A_FOUR, cfg.m, cfg.n)
    top = top_space(wm, F.f, datum, spaces)
    return [
        _rec("ln-support.audit", "check_ln_support", audit.ok and audit.checked > 0, checked=audit.checked,
             ln_roots=len(ln), failures=_first(audit.failures)),
        _rec("ln-support.core-top-space", "top_space", not top.empty and top.stepping_vector is not None,
             top_dim=len(top.annihilator), support_gap=len(top.support_gap), skipped_products=top.skipped_products),
    ]


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class SuiteSpec:
    run: Callable[[SuiteConfig], list]
    min_window: int
    scope: str  # "q", "table" or "matrix"


SUITES: dict[str, SuiteSpec] = {
    "q-jacobi": SuiteSpec(suite_q_jacobi, 2, "q"),
    "m20": SuiteSpec(suite_m20, 4, "q"),
    "m22": SuiteSpec(suite_m22, 4, "q"),
    "flat-search": SuiteSpec(suite_flat_search, 4, "q"),
    "clifford": SuiteSpec(suite_clifford, 4, "q"),
    "sigma": SuiteSpec(suite_sigma, 4, "matrix"),
    "tables": SuiteSpec(suite_tables, 4, "matrix"),
    "roots": SuiteSpec(suite_roots, 4, "table"),
    "affine-jacobi": SuiteSpec(suite_affine_jacobi, 8, "matrix"),
    "root-compare": SuiteSpec(suite_root_compare, 8, "matrix"),
    "core": SuiteSpec(suite_core, 8, "matrix"),
    "frakL": SuiteSpec(suite_frakl, 8, "matrix"),
    "q-embedding": SuiteSpec(suite_q_embedding, 8, "matrix"),
    "vkphi": SuiteSpec(suite_vkphi, 4, "q"),
    "omega": SuiteSpec(suite_omega, 4, "q"),
    "loop-extract": SuiteSpec(suite_loop_extract, 4, "q"),
    "lift": SuiteSpec(suite_lift, 8, "matrix"),
    "parabolic": SuiteSpec(suite_parabolic, 4, "table"),
    "induce-char": SuiteSpec(suite_induce_char, 4, "table"),
    "ln-support": SuiteSpec(suite_ln_support, 8, "matrix"),
}
SUITE_ORDER = list(SUITES)


def _run_one(args: tuple) -> list[dict]:
    name, cfg = args
    try:
        return SUITES[name].run(cfg)
    except SuperAffineError as exc:
        return [_rec(f"{name}.error", name, False, error=f"{type(exc).__name__}: {exc}")]


def worker_count(cfg: SuiteConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InvalidConfig(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise InvalidConfig(f"{WORKERS_ENV} must be at least 1")
        return value
    return cfg.workers


def run_suite(cfg: SuiteConfig) -> dict:
    """Run the selected suites and assemble a deterministic report."""
    jobs = [(name, cfg) for name in cfg.suites]
    workers = worker_count(cfg)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    records = [r for rs in results for r in rs]
    summary = {s: sum(1 for r in records if r["status"] == s) for s in (PASS, FAIL, SKIPPED)}
    return {
        "tool": "superaffine",
        "version": __version__,
        "config": cfg.echo(),
        "records": records,
        "summary": summary,
    }


def report_exit_code(report: dict) -> int:
    return 0 if report["summary"][FAIL] == 0 else 1


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_text(report: dict) -> str:
    cfg = report["config"]
    lines = [
        f"superaffine {report['version']}  type {cfg['type_tag']}  m={cfg['m']} n={cfg['n']}  window {cfg['window']}"
        + (f"  fault {cfg['inject_fault']}" if cfg.get("inject_fault") else ""),
    ]
    for r in report["records"]:
        lines.append(f"{r['status'].upper():<17} {r['name']}")
        if r["status"] == FAIL:
            lines.append(f"{'':17} {json.dumps(r['witness'], sort_keys=True)}")
    s = report["summary"]
    lines.append(f"{s[PASS]} passed, {s[FAIL]} failed, {s[SKIPPED]} skipped")
    return "\n".join(lines) + "\n"
