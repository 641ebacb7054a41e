"""Module constructions and searches.

* V(K, phi) over a Laurent algebra;
* finite-dimensional simple modules Omega over Q built on a Clifford module;
* loop modules L(U) and extraction of a graded-simple component;
* the level-zero lift Omega(lambda) to the imaginary part of the affine algebra;
* the functional f, parabolic decompositions, top spaces and induced characters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .affine import C, D, AffineAlgebra, k_elements, mod_c, n_elements
from .clifford import (
    CliffordData,
    NotCoradicalFinite,
    build_clifford_module,
    classify_simple_superalgebra,
    commutator,
    mat_add,
    mat_apply,
    mat_identity,
    mat_mul,
    mat_scale,
)
from .errors import (
    EmptyTop,
    HypothesesNotMet,
    InvalidInput,
    NoPhiSolution,
    NotParabolic,
    NotSimple,
    PhiNotCompatible,
    PreconditionViolated,
    WindowExhausted,
)
from .exact import ONE, ZERO, EchelonBasis, g, kernel_basis, label_sort_key, solve, vaxpy
from .functionals import Functional
from .modules import GradedModule, degree_dims, generated_submodule, validate_module
from .quadratic import Q_RULES, build_q, q_labels
from .roots import (
    A_ODD_ODD,
    IM,
    NS,
    RE,
    Root,
    RootDatum,
    check_rank,
    dot_form,
    even_finite_part,
    normalize_type,
    positive_even_roots,
    simple_systems,
    table_root_datum,
)
from .superalgebra import OUT_OF_WINDOW, Window, label_str

# ---------------------------------------------------------------------------
# V(K, phi) over a Laurent algebra


class LaurentAlgebra:
    """C[a^{+-1}] with deg a = ``var_degree``, windowed; labels ``("a", sigma)``."""

    def __init__(self, var_degree: int, window: Window):
        if var_degree <= 0:
            raise InvalidInput("the variable degree must be positive")
        self.var_degree = var_degree
        self.window = window
        self.labels = [("a", s) for s in window.degrees() if s % var_degree == 0]

    def __contains__(self, label) -> bool:
        return label in self.labels

    def parity(self, label) -> int:
        return 0

    def degree(self, label) -> int:
        return label[1]

    def product(self, x, y):
        s = x[1] + y[1]
        return {("a", s): ONE} if s in self.window else OUT_OF_WINDOW


def laurent_evaluation(z, var_degree: int = 1) -> Functional:
    """a^sigma -> z^(sigma / var_degree)."""
    z = g(z)
    if not z:
        raise InvalidInput("evaluation point must be nonzero")
    return Functional(rule=lambda lab: z ** (lab[1] // var_degree), description=f"eval:{z}")


def build_v_k_phi(A: LaurentAlgebra, K: int, phi: Functional) -> GradedModule:
    """The module with basis x^tau, tau in K = K*Z, and a.x^tau = phi(a) x^{tau + deg a}."""
    if K <= 0:
        raise InvalidInput("K is given by a positive generator")
    for x in A.labels:
        inside = x[1] % K == 0
        if bool(phi(x)) != inside:
            raise PhiNotCompatible(
                f"phi({label_str(x)}) is {'zero' if inside else 'nonzero'} but deg "
                f"{x[1]} is {'in' if inside else 'outside'} K"
            )
    for x in A.labels:
        for y in A.labels:
            xy = A.product(x, y)
            if xy is OUT_OF_WINDOW:
                continue
            if phi(x) * phi(y) != phi(next(iter(xy))):
                raise PhiNotCompatible(f"phi is not multiplicative on {label_str(x)}, {label_str(y)}")
    basis = [(("x", t), 0, t) for t in A.window.degrees() if t % K == 0]

    def rule(a, v):
        c = phi(a)
        return {("x", v[1] + a[1]): c} if c else {}

    return GradedModule(basis, rule, A, A.window, name=f"V({K}Z)", algebra_window=A.window)


def associative_action_problems(module: GradedModule, A: LaurentAlgebra) -> list[str]:
    """Check a(b v) = (ab) v and commutativity on every in-window triple."""
    problems = []
    for a in A.labels:
        for b in A.labels:
            ab = A.product(a, b)
            if ab is OUT_OF_WINDOW:
                continue
            for v in module.labels:
                vec = {v: ONE}
                bv = module.act(b, vec)
                av = module.act(a, vec)
                if bv is OUT_OF_WINDOW or av is OUT_OF_WINDOW:
                    continue
                lhs = module.act(a, bv)
                swapped = module.act(b, av)
                rhs = module.act_vec(ab, vec)
                if OUT_OF_WINDOW in (lhs, swapped, rhs):
                    continue
                if lhs != rhs:
                    problems.append(f"associativity fails for ({label_str(a)}, {label_str(b)}) on {label_str(v)}")
                if lhs != swapped:
                    problems.append(f"commutativity fails for ({label_str(a)}, {label_str(b)}) on {label_str(v)}")
    return problems


# ---------------------------------------------------------------------------
# finite-dimensional modules Omega over Q


@dataclass
class OmegaModule:
    module: GradedModule
    data: CliffordData
    rho: Functional
    phi: dict  # s-label -> matrix
    algebra_type: str
    radius: int

    @property
    def dim(self) -> int:
        return len(self.module)


def _odd_t(radius: int) -> list[tuple]:
    return [("t", b) for b in range(-radius, radius + 1) if b % 2]


def _shift_constraints(data: CliffordData, z, radius: int):
    """Linear system for Phi with Phi rho(x) - rho(x) Phi = rho([z, x]) over odd x."""
    labels = data.representation.basis
    parity = data.representation.parity
    unknowns = [(i, j) for i in labels for j in labels if parity[i] == parity[j]]
    rows: list = []
    rhs: list = []
    for x in _odd_t(radius):
        rx = data.operator(x)
        target = data.operator(("t", z[1] + x[1]))
        # (Phi R - R Phi)[i, j] = sum_k Phi[i,k] R[k,j] - R[i,k] Phi[k,j]
        eqs: dict = {}
        for (k, j), c in rx.items():
            for i in labels:
                if parity[i] == parity[k]:
                    eqs.setdefault((i, j), {})
                    vaxpy(eqs[(i, j)], c, {(i, k): ONE})
        for (i, k), c in rx.items():
            for j in labels:
                if parity[k] == parity[j]:
                    eqs.setdefault((i, j), {})
                    vaxpy(eqs[(i, j)], -c, {(k, j): ONE})
        for key in set(eqs) | set(target):
            rows.append(eqs.get(key, {}))
            rhs.append(target.get(key, ZERO))
    return unknowns, rows, rhs


def solve_phi(data: CliffordData, z, radius: int) -> dict:
    """An even operator Phi realizing the s-family element z on the Clifford module."""
    unknowns, rows, rhs = _shift_constraints(data, z, radius)
    sol = solve(rows, rhs, unknowns)
    if sol is None:
        raise NoPhiSolution(f"no even operator realizes {label_str(z)}")
    return {k: c for k, c in sol.items() if c}


def phi_problems(data: CliffordData, phi: Mapping, radius: int) -> list[str]:
    """Both compatibility constraints: the shift relation and vanishing commutators."""
    problems = []
    parity = data.representation.parity
    for z, m in phi.items():
        for (i, j) in m:
            if parity[i] != parity[j]:
                problems.append(f"phi({label_str(z)}) is not even")
                break
        for x in _odd_t(radius):
            rx = data.operator(x)
            lhs = mat_add(mat_mul(m, rx), mat_mul(rx, m), -ONE)
            if lhs != {k: c for k, c in data.operator(("t", z[1] + x[1])).items() if c}:
                problems.append(f"phi({label_str(z)}) fails the shift relation against {label_str(x)}")
                break
    zs = sorted(phi, key=label_sort_key)
    for a in zs:
        for b in zs:
            if commutator(phi[a], phi[b]):
                problems.append(f"phi({label_str(a)}) and phi({label_str(b)}) do not commute")
    return problems


def build_omega_module(
    lam: Functional,
    rho: Functional | None = None,
    phi: Mapping | None = None,
    radius: int = 10,
) -> OmegaModule:
    """Finite-dimensional Q-module on V_{c,lambda}: t acts as on V, s as rho(s) id + phi(s).

    ``phi`` maps s-labels to even operators; missing ones are solved for.  The
    s-family is covered for degrees in [-radius, radius]; other s-labels are
    solved on first use.
    """
    rho = rho or Functional.zero()
    try:
        data, kmod = build_clifford_module(lam)
    except NotCoradicalFinite as exc:
        raise PreconditionViolated(str(exc)) from None
    labels = data.representation.basis
    parity = data.representation.parity
    check_radius = radius + 4 * len(data.quotient_basis) + 4
    supplied = {z: dict(m) for z, m in (phi or {}).items()}
    table = dict(supplied)
    for z in q_labels(Window(-radius, radius)):
        if z[0] == "s" and z not in table:
            table[z] = solve_phi(data, z, check_radius)
    problems = phi_problems(data, table, check_radius)
    if problems:
        raise PreconditionViolated("; ".join(problems))
    ident = mat_identity(labels)
    cache: dict = {}

    def operator(x):
        m = cache.get(x)
        if m is None:
            if x[0] == "t":
                m = data.operator(x)
            else:
                if x not in table:
                    table[x] = solve_phi(data, x, check_radius + abs(x[1]))
                m = mat_add(table[x], mat_scale(rho(x), ident))
            cache[x] = m
        return m

    def rule(x, v):
        Q_RULES.parity(x)
        return mat_apply(operator(x), {v: ONE})

    module = GradedModule([(v, parity[v], 0) for v in labels], rule, Q_RULES, graded=False, name="omega")
    # V is simple over the t-family, hence over Q: the operators generate End(V)
    # (type M) or a queer algebra acting on its natural module (type Q)
    ops = [data.operator(x) for x in _odd_t(check_radius)]
    if len(labels) == 1:
        kind = "M(1|0)"
    else:
        st = classify_simple_superalgebra(ops, parity)
        if (st.kind == "M" and st.r + st.s != len(labels)) or (st.kind == "Q" and 2 * st.r != len(labels)):
            raise NotSimple(f"operators generate {st} on a space of dimension {len(labels)}")
        kind = str(st)
    return OmegaModule(module, data, rho, table, kind, radius)


def omega_problems(omega: OmegaModule, window: int | None = None) -> list[str]:
    """Exhaustive module-axiom check against windowed Q."""
    w = window or omega.radius
    return validate_module(omega.module, build_q(Window(-w, w)))


def k_restriction_matches(omega: OmegaModule, window: int) -> bool:
    """The identity is an even isomorphism from Omega restricted to the t-family onto V."""
    _, kmod = build_clifford_module(omega.data.lam)
    for x in q_labels(Window(-window, window)):
        if x[0] != "t":
            continue
        for v in omega.module.labels:
            if omega.module.act_basis(x, v) != kmod.act_basis(x, v):
                return False
    return all(omega.module.parity(v) == kmod.parity(v) for v in omega.module.labels)


def is_simple_module(module: GradedModule, xs: Iterable) -> bool:
    """Every nonzero parity-homogeneous vector generates (checked on a spanning family of rays)."""
    xs = list(xs)
    full = len(module)
    for v in module.labels:
        if len(generated_submodule(module, [{v: ONE}], xs).basis) != full:
            return False
    return True


# ---------------------------------------------------------------------------
# loop modules and graded-simple components


def loop_label(n: int, u: tuple) -> tuple:
    return ("v", n) + tuple(u)


def loop_module(U: GradedModule, window: int, probe: int = 10) -> GradedModule:
    """U tensor C[t^{+-1}] with (x, u t^n) -> x u t^{n + deg x}."""
    nontrivial = any(
        U.act_basis(("t", p), u)
        for p in range(-probe, probe + 1)
        if p % 4 == 2
        for u in U.labels
    )
    if not nontrivial:
        raise PreconditionViolated("the t^2-family acts trivially on U")
    W = Window(-window, window)
    basis = [(loop_label(n, u), U.parity(u), n) for n in W.degrees() for u in U.labels]

    def rule(x, v):
        n, u = v[1], v[2:]
        return {loop_label(n + x[1], w): c for w, c in U.act_basis(x, u).items()}

    return GradedModule(basis, rule, Q_RULES, W, name=f"L({U.name})", algebra_window=W)


@dataclass
class ComponentResult:
    basis: list
    r: int
    s: int
    trace: list
    dims: dict
    graded_simple: bool
    periodic: bool
    notes: list = field(default_factory=list)


def injective_periods(lam: Functional, probe: int = 40) -> tuple[int, int]:
    """Smallest r, s = 2 mod 4 with lambda(t^r) != 0 and lambda(t^-s) != 0."""
    r = next((p for p in range(2, probe + 1, 4) if lam(("t", p))), None)
    s = next((p for p in range(2, probe + 1, 4) if lam(("t", -p))), None)
    if r is None or s is None:
        raise PreconditionViolated("no injective t^{4k+2} found in either direction")
    return r, s


def _rm(module: GradedModule, basis: Sequence[Mapping], r: int) -> int:
    dims = degree_dims(module, basis)
    return sum(dims.get(i, 0) for i in range(r))


def _homogeneous_parts(module: GradedModule, basis: Sequence[Mapping], degrees: Iterable[int]) -> list:
    want = set(degrees)
    spans: dict = {}
    for v in basis:
        parts: dict = {}
        for k, c in v.items():
            d = module.degree(k)
            if d in want:
                parts.setdefault(d, {})[k] = c
        for d, p in parts.items():
            spans.setdefault(d, EchelonBasis()).add(p)
    return [row for d in sorted(spans) for row in spans[d].rows()]


def simple_component(V: GradedModule, lam: Functional) -> ComponentResult:
    """Descend through generated submodules minimizing r_M, then certify graded simplicity."""
    r, s = injective_periods(lam)
    W = V.window
    if W is None or W.lo > -(r + s) or W.hi < 2 * r + s:
        raise WindowExhausted(f"the window must contain [-{r + s}, {2 * r + s}]")
    xs = q_labels(W)
    current = [{v: ONE} for v in V.labels]
    trace = [_rm(V, current, r)]
    while True:
        better = None
        for v in _homogeneous_parts(V, current, range(r)):
            sub = generated_submodule(V, [v], xs).basis
            if _rm(V, sub, r) < trace[-1]:
                better = sub
                break
        if better is None:
            break
        current = better
        trace.append(_rm(V, current, r))
    dims = degree_dims(V, current)
    band = Window(W.lo + r + s, W.hi - r - s)
    periodic = all(dims.get(k, 0) == dims.get(k + r, 0) for k in range(band.lo, band.hi - r + 1))
    notes = []
    graded_simple = _graded_simple(V, current, xs, band, notes)
    return ComponentResult(current, r, s, trace, dims, graded_simple, periodic, notes)


def _graded_simple(V: GradedModule, basis: list, xs: list, band: Window, notes: list) -> bool:
    """Each homogeneous piece in the band generates the band and is irreducible under degree-zero words."""
    band_part = _homogeneous_parts(V, basis, band.degrees())
    ok = True
    for k in band.degrees():
        piece = _homogeneous_parts(V, basis, [k])
        for v in piece:
            sub = EchelonBasis()
            for u in generated_submodule(V, [v], xs).basis:
                sub.add(u)
            if not all(sub.contains(u) for u in band_part):
                ok = False
        d = len(piece)
        if d > 1 and _degree_zero_algebra_dim(V, piece, xs) < d * d:
            notes.append(f"degree-zero words do not generate End of the degree-{k} piece")
            ok = False
    return ok


def _degree_zero_algebra_dim(V: GradedModule, piece: list, xs: list) -> int:
    """Dimension of the algebra generated by two-letter degree-zero words on one piece."""
    coords = [k for k in sorted({k for v in piece for k in v}, key=label_sort_key)]
    cols = list(range(len(piece)))
    rows = [{j: piece[j].get(k, ZERO) for j in cols if piece[j].get(k)} for k in coords]

    def coordinates(w):
        sol = solve(rows, [w.get(k, ZERO) for k in coords], cols)
        if sol is None:
            raise PreconditionViolated("the piece is not invariant")
        return sol

    ops = []
    by_degree: dict = {}
    for x in xs:
        by_degree.setdefault(Q_RULES.degree(x), []).append(x)
    for x in xs:
        for y in by_degree.get(-Q_RULES.degree(x), []):
            m = {}
            for j, v in enumerate(piece):
                w = V.act_word([x, y], v)
                if w is OUT_OF_WINDOW:
                    m = None
                    break
                for i, c in coordinates(w).items():
                    m[(i, j)] = c
            if m is not None:
                ops.append(m)
    span = EchelonBasis()
    members = [mat_identity(cols)]
    span.add(members[0])
    queue = list(ops)
    while queue:
        m = queue.pop()
        if span.add(m):
            members.append(m)
            queue += [mat_mul(m, o) for o in members]
    return len(span)


# ---------------------------------------------------------------------------
# weight modules over the affine algebra


def dot_to_cartan_values(dot: Sequence, m: int, n: int) -> list:
    """Values on the fixed Cartan basis of the weight with eps/delta coordinates ``dot``."""
    out = []
    for start, size in ((0, m), (m, n)):
        for i in range(start, start + size):
            nxt = dot[i + 1] if i + 1 < start + size else 0
            out.append(g(dot[i]) - g(nxt))
    return out


def cartan_values_to_dot(values: Sequence, m: int, n: int) -> tuple:
    res = [ZERO] * (m + n)
    for start, size in ((0, m), (m, n)):
        nxt = ZERO
        for i in range(start + size - 1, start - 1, -1):
            res[i] = g(values[i]) + nxt
            nxt = res[i]
    return tuple(res)


@dataclass
class WeightModule:
    """A graded module over the windowed affine algebra with a weight for each basis vector.

    Weights are pairs (eps/delta coordinates, d-eigenvalue).  Algebra labels
    outside ``domain`` act by zero (a module of a subalgebra extended by zero).
    """

    module: GradedModule
    weights: dict
    domain: set | None = None
    name: str = ""

    def act(self, x, vec: Mapping):
        if self.domain is not None and x not in self.domain:
            return {}
        return self.module.act(x, vec)

    def support(self) -> set:
        return set(self.weights.values())

    def weight_spaces(self) -> dict:
        out: dict = {}
        for v in self.module.labels:
            out.setdefault(self.weights[v], []).append(v)
        return out


def core_module(aff: AffineAlgebra) -> WeightModule:
    """The windowed centreless core: the L-part of the algebra acted on by the bracket mod c."""
    labels = [x for x in aff.table.labels if x[0] == "L"]
    basis = [(x, aff.table.parity(x), aff.table.degree(x)) for x in labels]

    def rule(x, v):
        return mod_c(aff.table.bracket_basis(x, v))

    W = Window(-aff.window, aff.window)
    module = GradedModule(basis, rule, aff.table, W, name="core", algebra_window=W)
    weights = {x: (tuple(aff.weight(x)), aff.table.degree(x)) for x in labels}
    return WeightModule(module, weights, None, "core")


@dataclass
class LiftResult:
    module: WeightModule
    lattice_matches: bool
    problems: list


def imaginary_coordinates(aff: AffineAlgebra) -> dict:
    """Each weight-zero basis element of degree p != 0 as (Q-part, abelian part) coordinates."""
    G = aff.G
    if not G.psl and G.n >= 1:
        raise PreconditionViolated(
            "the imaginary part is not the direct sum of an abelian ideal and Q when m != n and n >= 1"
        )
    N = n_elements(aff)
    K = k_elements(aff)
    out = {}
    for x in aff.table.labels:
        if x[0] != "L" or any(aff.weight(x)) or x[1] == 0:
            continue
        p = x[1]
        parts = [("q", lab, v) for lab, v in N.items() if lab[1] == p]
        parts += [("k", i, v) for i, v in enumerate(K) if aff.table.degree(next(iter(v))) == p]
        keys = sorted({k for _, _, v in parts for k in v} | {x}, key=label_sort_key)
        cols = list(range(len(parts)))
        rows = [{j: parts[j][2].get(k, ZERO) for j in cols if parts[j][2].get(k)} for k in keys]
        sol = solve(rows, [ONE if k == x else ZERO for k in keys], cols)
        if sol is None:
            raise PreconditionViolated(f"{label_str(x)} is outside the abelian part plus Q")
        out[x] = {parts[j][1]: c for j, c in sol.items() if parts[j][0] == "q" and c}
    return out


def omega_lambda_lift(aff: AffineAlgebra, omega: GradedModule, lam: Functional) -> LiftResult:
    """Level-zero lift: Q-part acts as on Omega, the abelian part and c by 0, h + r d by lambda(h + r d) + r k.

    ``lam`` is a functional on the labels ("L", 0, i) of the fixed Cartan and on D.
    """
    G = aff.G
    coords = imaginary_coordinates(aff)
    cartan = [("L", 0, i) for i in range(G.m + G.n)]
    domain = set(coords) | set(cartan) | {C, D}
    W = Window(-aff.window, aff.window)
    win = omega.window or W
    if win.lo < W.lo or win.hi > W.hi:
        raise PreconditionViolated("the module window must lie inside the affine window")
    keep = list(omega.labels)
    basis = [(v, omega.parity(v), omega.degree(v)) for v in keep]
    dot = cartan_values_to_dot([lam(h) for h in cartan], G.m, G.n)

    def rule(x, v):
        if x == C:
            return {}
        if x == D:
            return {v: lam(D) + omega.degree(v)}
        if x in cartan:
            return {v: lam(x)}
        if x not in coords:
            raise PreconditionViolated(f"{label_str(x)} is not in the imaginary part")
        out: dict = {}
        for q, c in coords[x].items():
            w = omega.act_basis(q, v)
            if w is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            vaxpy(out, c, w)
        return out

    module = GradedModule(basis, rule, aff.table, win, name="lift", algebra_window=W)
    weights = {v: (dot, lam(D) + omega.degree(v)) for v in keep}
    wm = WeightModule(module, weights, domain, "lift")
    problems = validate_module(module, aff.table, xs=sorted(domain, key=label_sort_key))
    # graded submodules of Omega and weight submodules of the lift coincide
    qxs = [x for x in q_labels(win)]
    lxs = sorted(domain, key=label_sort_key)
    matches = True
    for v in keep:
        a = generated_submodule(omega, [{v: ONE}], qxs).basis
        b = generated_submodule(module, [{v: ONE}], lxs).basis
        sa, sb = EchelonBasis(), EchelonBasis()
        for u in a:
            sa.add(u)
        for u in b:
            sb.add(u)
        if len(sa) != len(sb) or not all(sa.contains(u) for u in sb.rows()):
            matches = False
    return LiftResult(wm, matches, problems)


# ---------------------------------------------------------------------------
# the functional f and parabolic decompositions


@dataclass(frozen=True)
class RootFunctional:
    """A linear functional on the span of the roots: values on eps_i, delta_p and delta."""

    values: tuple
    delta: Fraction = Fraction(0)

    def dot(self, dot: Sequence) -> Fraction:
        return sum((Fraction(a) * b for a, b in zip(dot, self.values)), Fraction(0))

    def __call__(self, root: Root) -> Fraction:
        return self.dot(root.dot) + self.delta * root.k

    @classmethod
    def zero(cls, m: int, n: int) -> "RootFunctional":
        return cls(tuple([Fraction(0)] * (m + n)))

    def to_json(self) -> dict:
        return {"values": [str(v) for v in self.values], "delta": str(self.delta)}


@dataclass
class FunctionalF:
    f: RootFunctional
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _unit(size: int, i: int, c: int = 1) -> tuple:
    v = [0] * size
    v[i] = c
    return tuple(v)


def build_functional_f(tag: str, m: int, n: int) -> FunctionalF:
    """g(eps_i) = (m+1-i)(n+2), g(delta_p) = n+1-p, f(delta) = 0, with every constraint checked."""
    tag = normalize_type(tag)
    check_rank(tag, m, n)
    vals = [Fraction((m + 1 - i) * (n + 2)) for i in range(1, m + 1)]
    vals += [Fraction(n + 1 - p) for p in range(1, n + 1)]
    f = RootFunctional(tuple(vals))
    size = m + n
    eps = [f.dot(_unit(size, i)) for i in range(m)]
    dels = [f.dot(_unit(size, m + p)) for p in range(n)]
    checks = {"f(delta) = 0": f(Root(tuple([0] * size), 1)) == 0}
    _, pi = simple_systems(tag, m, n)
    checks["g > 0 on the real base"] = all(f.dot(b) > 0 for b in pi)
    special = tag == A_ODD_ODD and m == 1
    if m and not special and n:
        checks["min g(eps) > max g(delta)"] = min(eps) > max(dels)
    if special:
        checks["g(eps_1) > max |g(delta_p)|"] = all(eps[0] > abs(d) for d in dels)
    datum = table_root_datum(tag, m, n, 4)
    real_dots = {r.dot for r in datum.of_class(RE)}
    cols = list(range(len(pi)))
    positive_span = []
    for d in sorted(real_dots):
        rows = [{j: Fraction(pi[j][i]) for j in cols if pi[j][i]} for i in range(size)]
        sol = solve(rows, [Fraction(x) for x in d], cols)
        if sol is not None and all(g(c).re >= 0 and not g(c).im for c in sol.values()):
            positive_span.append(d)
    checks["f > 0 on real roots in the nonnegative span of the base"] = all(f.dot(d) > 0 for d in positive_span)
    mixed = [
        tuple(a + s * b for a, b in zip(_unit(size, i), _unit(size, m + p)))
        for i in range(m)
        for p in range(n)
        for s in (1, -1)
    ]
    checks["f(eps_i +- delta_p) > 0"] = all(f.dot(d) > 0 for d in mixed)
    checks["f != 0 on nonzero finite roots"] = all(f.dot(d) != 0 for d in datum.dot_roots())
    return FunctionalF(f, checks)


@dataclass
class ParabolicDecomposition:
    P: set
    zero_part: set
    plus_part: set
    minus_part: set
    zero_is_delta_line: bool

    def to_json(self) -> dict:
        def enc(s):
            return [r.to_json() for r in sorted(s, key=lambda r: (r.k, r.dot))]

        return {
            "P": enc(self.P),
            "zero": enc(self.zero_part),
            "plus": enc(self.plus_part),
            "minus": enc(self.minus_part),
            "zero_is_delta_line": self.zero_is_delta_line,
        }


def parabolic_problems(R: set, P: set) -> list[str]:
    problems = []
    missing = [r for r in R if r not in P and -r not in P]
    if missing:
        problems.append(f"{len(missing)} roots lie in neither P nor -P")
    for a in P:
        for b in P:
            c = a + b
            if c in R and c not in P:
                problems.append(f"P + P meets R outside P at {c.to_json()}")
                return problems
    return problems


def parabolic_decompose(R: RootDatum, f: RootFunctional | None = None, P: set | None = None) -> ParabolicDecomposition:
    """P = {f >= 0} (or a supplied P), split into P cap -P, P minus -P and its negative."""
    roots = set(R.roots)
    if P is None:
        if f is None:
            raise InvalidInput("supply f or P")
        P = {r for r in roots if f(r) >= 0}
    P = set(P)
    problems = parabolic_problems(roots, P)
    if problems:
        raise NotParabolic("; ".join(problems))
    zero = {r for r in P if -r in P}
    plus = P - zero
    minus = {-r for r in plus}
    line = {r for r in roots if not any(r.dot)}
    return ParabolicDecomposition(P, zero, plus, minus, zero == line)


# ---------------------------------------------------------------------------
# top spaces


@dataclass
class TopSpaceResult:
    annihilator: list
    annihilator_weights: list
    support_gap: list
    stepping_vector: dict | None
    stepping_weight: tuple | None
    stepping_trace: list
    skipped_products: int
    notes: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.annihilator

    def witnesses(self) -> list[tuple]:
        out = [("annihilator", w) for w in self.annihilator_weights]
        out += [("support-gap", w) for w in self.support_gap]
        if self.stepping_weight is not None:
            out.append(("stepping", self.stepping_weight))
        return out


def _kernel_on(wm: WeightModule, labels: list, xs: Iterable) -> tuple[list, int]:
    """Common kernel of the operators xs on span(labels), ignoring products leaving the window."""
    rows: dict = {}
    skipped = 0
    for x in xs:
        images = {}
        for v in labels:
            w = wm.act(x, {v: ONE})
            if w is OUT_OF_WINDOW:
                images = None
                break
            images[v] = w
        if images is None:
            skipped += 1
            continue
        for v, w in images.items():
            for k, c in w.items():
                rows.setdefault((x, k), {})[v] = c
    return kernel_basis(list(rows.values()), labels), skipped


def _labels_by_root(spaces: Mapping, roots: Iterable) -> list:
    out = []
    for r in sorted(roots, key=lambda r: (r.k, r.dot)):
        out += spaces.get(r, [])
    return out


def support_gap_search(
    support: set,
    tag: str,
    m: int,
    n: int,
    p_star: int,
    kwin: Window,
    dot_bound: int | None = None,
) -> list:
    """Weights lam with lam + a + r p_* delta outside the support for every a in S+ and r in the window."""
    pos = [d for d in positive_even_roots(tag, m, n) if any(d)]
    found = []
    for lam in sorted(support, key=lambda w: (_real(w[1]), tuple(_real(x) for x in w[0]))):
        dot, k = lam
        ok = True
        for a in pos:
            shifted = tuple(x + y for x, y in zip(dot, a))
            if dot_bound is not None and any(abs(_real(x)) > dot_bound for x in shifted):
                ok = False  # cannot be decided from a truncated support
                break
            k0 = _real(k)
            r_lo = -((k0 - kwin.lo) // p_star)
            r_hi = (kwin.hi - k0) // p_star
            for r in range(int(r_lo), int(r_hi) + 1):
                if (shifted, k + r * p_star) in support:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(lam)
    return found


def _real(x) -> Fraction:
    return g(x).re


def top_space(
    wm: WeightModule,
    f: RootFunctional,
    datum: RootDatum,
    spaces: Mapping,
    max_steps: int = 50,
    strict: bool = False,
) -> TopSpaceResult:
    """(a) the annihilator of the plus part, (b) the support search, (c) the stepping search."""
    dec = parabolic_decompose(datum, f)
    plus_labels = _labels_by_root(spaces, dec.plus_part)
    ws = wm.weight_spaces()
    ann, ann_w, skipped = [], [], 0
    for w in sorted(ws, key=_weight_key):
        ker, sk = _kernel_on(wm, ws[w], plus_labels)
        skipped += sk
        ann += ker
        ann_w += [w] * len(ker)
    kwin = wm.module.window
    tag = datum.type_tag
    gaps = support_gap_search(wm.support(), tag, datum.m, datum.n, datum.p_star, kwin)
    vec, weight, trace = stepping_top_search(wm, f, datum, spaces, max_steps)
    res = TopSpaceResult(ann, ann_w, gaps, vec, weight, trace, skipped)
    if res.empty:
        res.notes.append("no nonzero vector is killed by the plus part inside the window")
        if strict:
            raise EmptyTop(res.notes[-1])
    return res


def _weight_key(w):
    return (_real(w[1]), tuple(_real(x) for x in w[0]))


def stepping_top_search(
    wm: WeightModule, f: RootFunctional, datum: RootDatum, spaces: Mapping, max_steps: int = 50
) -> tuple[dict | None, tuple | None, list]:
    """Minimize |A_v| over weight vectors of W, then step along the f-maximal root until A_v is empty."""
    p = datum.p_star
    even_dots = {d for d in even_finite_part(datum.type_tag, datum.m, datum.n) if any(d) and f.dot(d) > 0}
    s_labels = _labels_by_root(spaces, [r for r in datum.roots if r.dot in even_dots and r.k % p == 0])
    T = [r for r in datum.roots if 0 <= r.k < p and f(r) > 0]
    T.sort(key=lambda r: (-f(r), r.k, r.dot))
    shifts: dict = {}
    for r in datum.roots:
        if f(r) > 0:
            base = Root(r.dot, r.k % p)
            shifts.setdefault(base, []).append(r)

    def A(v):
        out = []
        for beta in T:
            for r in sorted(shifts.get(beta, []), key=lambda r: r.k):
                hit = None
                for x in spaces.get(r, []):
                    w = wm.act(x, v)
                    if w is not OUT_OF_WINDOW and w:
                        hit = (x, w)
                        break
                if hit:
                    out.append((beta, hit))
                    break
        return out

    ws = wm.weight_spaces()
    candidates = []
    for w in sorted(ws, key=_weight_key):
        ker, _ = _kernel_on(wm, ws[w], s_labels)
        for v in ker:
            candidates.append((len(A(v)), _weight_key(w), w, v))
    if not candidates:
        return None, None, []
    candidates.sort(key=lambda c: (c[0], c[1]))
    _, _, weight, v = candidates[0]
    trace = []
    for _ in range(max_steps):
        av = A(v)
        trace.append({"weight": _weight_repr(weight), "size": len(av)})
        if not av:
            return v, weight, trace
        beta, (x, w) = av[0]
        v = w
        weight = _shift_weight(weight, wm, w)
        trace[-1]["step"] = {"dot": list(beta.dot), "k": beta.k}
    return None, None, trace


def _shift_weight(weight, wm: WeightModule, vec: Mapping):
    ws = {wm.weights[k] for k in vec}
    return ws.pop() if len(ws) == 1 else weight


def _weight_repr(w) -> dict:
    return {"dot": [str(x) for x in w[0]], "k": str(w[1])}


# ---------------------------------------------------------------------------
# induced characters


def root_dims_and_parities(datum: RootDatum, spaces: Mapping | None = None) -> tuple[dict, dict]:
    """Root-space dimensions and parities: computed from ``spaces`` or read from the tables."""
    dims, parity = {}, {}
    if spaces is not None:
        for r in datum.roots:
            dims[r] = len(spaces.get(r, []))
            parity[r] = datum.parity.get(r)
        return dims, parity
    big = table_root_datum(datum.type_tag, datum.m, datum.n, 2 * datum.window + 2)
    for r in datum.roots:
        cls = datum.classification.get(r)
        if cls == IM:
            continue
        dims[r] = 1
        parity[r] = 1 if cls == NS or r.scaled(2) in big.roots else 0
    return dims, parity


def _add_weight(w, root: Root, times: int = 1):
    dot, k = w
    return (tuple(x + times * y for x, y in zip(dot, root.dot)), k + times * root.k)


def induced_character(
    N: Mapping, dec: ParabolicDecomposition, dims: Mapping, parity: Mapping, depth: int
) -> dict:
    """Weight multiplicities of U(minus part) tensor N counted by PBW monomials of length <= depth."""
    # generating polynomial over (offset root-sum, length)
    poly: dict = {(None, 0): 1}
    zero_key = None
    for beta in sorted(dec.minus_part, key=lambda r: (r.k, r.dot)):
        d = dims.get(beta, 0)
        if not d:
            continue
        odd = parity.get(beta) == 1
        new: dict = {}
        for (off, length), c in poly.items():
            top = min(depth - length, d if odd else depth - length)
            for j in range(top + 1):
                ways = comb(d, j) if odd else comb(d + j - 1, j)
                if not ways:
                    continue
                key = (_offset_add(off, beta, j), length + j)
                new[key] = new.get(key, 0) + c * ways
        poly = new
    out: dict = {}
    for (off, _), c in poly.items():
        for w, mult in N.items():
            t = w if off is zero_key else (tuple(x + y for x, y in zip(w[0], off[0])), w[1] + off[1])
            out[t] = out.get(t, 0) + c * mult
    return {w: c for w, c in out.items() if c}


def _offset_add(off, beta: Root, j: int):
    if j == 0:
        return off
    if off is None:
        return (tuple(j * x for x in beta.dot), j * beta.k)
    return (tuple(a + j * b for a, b in zip(off[0], beta.dot)), off[1] + j * beta.k)


def induced_character_bruteforce(
    N: Mapping, dec: ParabolicDecomposition, dims: Mapping, parity: Mapping, depth: int
) -> dict:
    """Independent count: enumerate ordered PBW monomials in root vectors directly."""
    slots = [
        (beta, i, parity.get(beta) == 1)
        for beta in sorted(dec.minus_part, key=lambda r: (r.k, r.dot))
        for i in range(dims.get(beta, 0))
    ]
    out: dict = {}
    for length in range(depth + 1):
        for mono in combinations_with_replacement(range(len(slots)), length):
            if any(slots[a][2] and a == b for a, b in zip(mono, mono[1:])):
                continue
            for w, mult in N.items():
                t = w
                for a in mono:
                    t = _add_weight(t, slots[a][0])
                out[t] = out.get(t, 0) + mult
    return out


# ---------------------------------------------------------------------------
# support audit for locally nilpotent real roots


def check_ln_support(support: set, alpha: Root, mu: tuple, datum: RootDatum, ln_roots: set | None = None) -> bool:
    """If +-alpha act locally nilpotently and 2(mu, alpha)/(alpha, alpha) > 0 is an integer, then mu - alpha is a weight."""
    if datum.classification.get(alpha) != RE and dot_form(alpha.dot, alpha.dot, datum.m) == 0:
        raise HypothesesNotMet("alpha is not a real root")
    if ln_roots is not None and (alpha not in ln_roots or -alpha not in ln_roots):
        raise HypothesesNotMet("+-alpha are not known to act locally nilpotently")
    aa = dot_form(alpha.dot, alpha.dot, datum.m)
    ma = dot_form(tuple(_real(x) for x in mu[0]), alpha.dot, datum.m)
    q = Fraction(2 * ma) / aa
    if q <= 0 or q.denominator != 1:
        raise HypothesesNotMet(f"2(mu, alpha)/(alpha, alpha) = {q} is not a positive integer")
    return _add_weight(mu, -alpha) in support


@dataclass
class SupportAudit:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def audit_ln_support(support: set, datum: RootDatum, ln_roots: set, band: int = 0) -> SupportAudit:
    """Run check_ln_support over every weight and every real root whose hypotheses hold."""
    audit = SupportAudit()
    inner = datum.window - band
    for alpha in sorted(datum.of_class(RE), key=lambda r: (r.k, r.dot)):
        if alpha not in ln_roots or -alpha not in ln_roots:
            continue
        for mu in sorted(support, key=_weight_key):
            if abs(_real(mu[1])) > inner or abs(_real(mu[1]) - alpha.k) > inner:
                continue
            try:
                ok = check_ln_support(support, alpha, mu, datum, ln_roots)
            except HypothesesNotMet:
                continue
            audit.checked += 1
            if not ok:
                audit.failures.append((alpha.to_json(), _weight_repr(mu)))
    return audit
