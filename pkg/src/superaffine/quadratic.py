"""The quadratic Lie superalgebra Q and the flat-vector machinery for its modules.

Q has even part spanned by s^{4k+2} and t^{4k+2}, odd part spanned by
t^{4k+1} and t^{4k-1}.  Labels are ``("s", a)`` and ``("t", b)``.
Nonzero brackets:

* [t^a, t^b] = t^{a+b} if a, b are both 1 mod 4, and -t^{a+b} if both are 3 mod 4;
* [s^a, t^b] = t^{a+b} for odd b (and [t^b, s^a] = -t^{a+b}).

The t^{4k+2} are central.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import (
    HypothesesNotMet,
    InvalidInput,
    ParamOutOfWindow,
    PreconditionViolated,
    UnknownLabel,
    WindowExhausted,
    WindowTooSmall,
)
from .exact import ONE, EchelonBasis, GScalar, kernel_basis, vaxpy, vscale
from .modules import GradedModule
from .superalgebra import OUT_OF_WINDOW, SuperAlgebraTable, Window, label_str


def is_q_label(label) -> bool:
    if not (isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], int)):
        return False
    kind, k = label
    if kind == "s":
        return k % 4 == 2
    if kind == "t":
        return k % 2 == 1 or k % 4 == 2
    return False


class QuadraticRules:
    """Unwindowed parity, degree and bracket of Q."""

    name = "Q"

    def parity(self, label) -> int:
        if not is_q_label(label):
            raise UnknownLabel(label_str(label))
        return label[1] % 2

    def degree(self, label) -> int:
        if not is_q_label(label):
            raise UnknownLabel(label_str(label))
        return label[1]

    def bracket(self, x, y) -> dict:
        (kx, a), (ky, b) = x, y
        if kx == "t" and ky == "t":
            if a % 4 == 1 and b % 4 == 1:
                return {("t", a + b): ONE}
            if a % 4 == 3 and b % 4 == 3:
                return {("t", a + b): -ONE}
            return {}
        if kx == "s" and ky == "t" and b % 2:
            return {("t", a + b): ONE}
        if kx == "t" and ky == "s" and a % 2:
            return {("t", a + b): -ONE}
        return {}


Q_RULES = QuadraticRules()


def q_labels(window: Window) -> list[tuple]:
    out = []
    for k in window.degrees():
        if k % 2:
            out.append(("t", k))
        elif k % 4 == 2:
            out.append(("t", k))
            out.append(("s", k))
    return out


def build_q(window: Window, corrupt: Mapping | None = None) -> SuperAlgebraTable:
    """Windowed Q.  ``corrupt`` overrides chosen brackets (for fault injection).

    Overrides are given as ``{(x, y): vector}``; the super-skew partner is
    overridden consistently.
    """
    if window.lo > -2 or window.hi < 2:
        raise WindowTooSmall("Q needs a window containing [-2, 2]")
    basis = [(x, Q_RULES.parity(x), Q_RULES.degree(x)) for x in q_labels(window)]
    overrides = {}
    for (x, y), v in (corrupt or {}).items():
        overrides[(x, y)] = dict(v)
        sign = 1 if Q_RULES.parity(x) * Q_RULES.parity(y) else -1
        overrides[(y, x)] = vscale(sign, v)

    def rule(x, y):
        if (x, y) in overrides:
            return overrides[(x, y)]
        return Q_RULES.bracket(x, y)

    return SuperAlgebraTable.from_rule(basis, rule, window, name="Q")


# ---------------------------------------------------------------------------
# the two commutation identities


@dataclass
class IdentityMismatch:
    identity: str
    params: dict
    vector: dict
    lhs: dict
    rhs: dict


@dataclass
class IdentityReport:
    checked: int = 0
    skipped: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _need(res):
    if res is OUT_OF_WINDOW:
        raise ParamOutOfWindow("a term of the identity leaves the window")
    return res


def _s(r: int, l: int) -> tuple:
    return ("s", r * (4 * l + 2))


def identity_one_sides(module: GradedModule, omega: Mapping, r: int, tau: int, p: int, l: int):
    """Both sides of the s^+ s^- commutation identity, or raises ParamOutOfWindow."""
    sp, sm = _s(r, l), _s(-r, l)
    t = ("t", 4 * p - tau)
    lhs = _need(module.act_word([t, sp, sm], omega))
    d_minus = 1 if tau == -r else 0
    d_plus = 1 if tau == r else 0
    t1 = ("t", 4 * (p + r * l + r * d_minus) + tau)
    t2 = ("t", 4 * (p - r * l - r * d_plus) + tau)
    rhs: dict = {}
    vaxpy(rhs, -ONE, _need(module.act_word([sm, t1], omega)))
    vaxpy(rhs, ONE, _need(module.act(t, omega)))
    vaxpy(rhs, -ONE, _need(module.act_word([sp, t2], omega)))
    vaxpy(rhs, ONE, _need(module.act_word([sp, sm, t], omega)))
    return lhs, rhs


def identity_two_sides(
    module: GradedModule, omega: Mapping, r: int, tau: int, p: int, l: int, k: int
):
    """Both sides of the binomial expansion of (s^{r(4l+2)})^k t^{4p+tau}."""
    if k < 0:
        raise InvalidInput("k must be nonnegative")
    s = _s(r, l)
    lhs = _need(module.act_word([s] * k + [("t", 4 * p + tau)], omega))
    rhs: dict = {}
    for i in range(k + 1):
        t = ("t", 4 * (p + i * r * l) + tau + 2 * r * i)
        term = _need(module.act_word([t] + [s] * (k - i), omega))
        vaxpy(rhs, comb(k, i), term)
    return lhs, rhs


def check_m20_identities(
    module: GradedModule,
    vectors: Iterable[Mapping],
    r_values: Sequence[int] = (1, -1),
    tau_values: Sequence[int] = (1, -1),
    p_values: Sequence[int] = (0,),
    l_values: Sequence[int] = (0, 1),
    k_values: Sequence[int] = (1, 2),
    skip_out_of_window: bool = False,
) -> IdentityReport:
    """Evaluate both identities on every vector and parameter combination."""
    report = IdentityReport()
    vectors = [dict(v) for v in vectors]
    for omega in vectors:
        for r in r_values:
            for tau in tau_values:
                for p in p_values:
                    for l in l_values:
                        params = {"r": r, "tau": tau, "p": p, "l": l}
                        _one(report, "i", params, omega, skip_out_of_window,
                             lambda: identity_one_sides(module, omega, r, tau, p, l))
                        for k in k_values:
                            pk = dict(params, k=k)
                            _one(report, "ii", pk, omega, skip_out_of_window,
                                 lambda: identity_two_sides(module, omega, r, tau, p, l, k))
    return report


def _one(report, name, params, omega, skip, thunk):
    try:
        lhs, rhs = thunk()
    except ParamOutOfWindow:
        if not skip:
            raise
        report.skipped += 1
        return
    report.checked += 1
    if lhs != rhs:
        report.mismatches.append(IdentityMismatch(name, params, omega, lhs, rhs))


# ---------------------------------------------------------------------------
# sample Q-modules

# exterior algebra on psi, chi: basis codes 0 -> 1, 1 -> psi, 2 -> chi, 3 -> psi*chi
_EXT_PARITY = {0: 0, 1: 1, 2: 1, 3: 0}
_LEFT_PSI = {0: (1, 1), 2: (3, 1)}  # psi*1 = psi, psi*chi = psi chi
_LEFT_CHI = {0: (2, 1), 1: (3, -1)}  # chi*psi = -psi chi
_SWAP = {1: (2, 1), 2: (1, 1)}  # even derivation exchanging psi and chi


def _exterior_action(x, code):
    kind, a = x
    if kind == "t":
        if a % 4 == 1:
            return _LEFT_PSI.get(code)
        if a % 4 == 3:
            return _LEFT_CHI.get(code)
        return None
    return _SWAP.get(code)


def exterior_loop_module(window: Window) -> GradedModule:
    """Cyclic graded Q-submodule of the loop module of the exterior algebra on two generators.

    On the exterior algebra t^{4k+1} multiplies by psi, t^{4k-1} by chi,
    s^{4k+2} acts by the derivation exchanging psi and chi, and t^{4k+2} by
    zero.  The submodule generated by 1 in degree 0 has degree 0 spanned by
    1 and psi*chi, degree 4k spanned by psi*chi, and one odd vector in each
    odd degree.  Homogeneous dimensions are at most 2 and psi*chi in any
    degree 4k is annihilated by every odd generator.
    """
    basis = []
    for n in window.degrees():
        if n == 0:
            basis += [(("g", 0, 0), 0, 0), (("g", 0, 3), 0, 0)]
        elif n % 4 == 0:
            basis.append((("g", n, 3), 0, n))
        elif n % 4 == 1:
            basis.append((("g", n, 1), 1, n))
        elif n % 4 == 3:
            basis.append((("g", n, 2), 1, n))

    def rule(x, v):
        _, n, code = v
        hit = _exterior_action(x, code)
        if hit is None:
            return {}
        tgt, sign = hit
        return {("g", n + x[1], tgt): GScalar(sign)}

    return GradedModule(basis, rule, Q_RULES, window, name="exterior-loop")


def adjoint_quotient_module(window: Window) -> GradedModule:
    """Q modulo its central t^{4k+2} family, under the adjoint action."""
    basis = []
    for k in window.degrees():
        if k % 2:
            basis.append((("t", k), 1, k))
        elif k % 4 == 2:
            basis.append((("s", k), 0, k))

    def rule(x, v):
        out = Q_RULES.bracket(x, v)
        return {k: c for k, c in out.items() if k[1] % 2}

    return GradedModule(basis, rule, Q_RULES, window, name="adjoint-quotient")


def trivial_q_module(window: Window, degrees: Iterable[int] = (0,)) -> GradedModule:
    basis = [(("v", k), 0, k) for k in degrees]
    return GradedModule(basis, lambda x, v: {}, Q_RULES, window, name="trivial")


# ---------------------------------------------------------------------------
# annihilation by the odd generators


def _odd(j: int, tau: int) -> tuple:
    return ("t", 4 * j + tau)


def t2_acts_trivially(module: GradedModule) -> bool:
    """Does every in-window t^{4k+2} act as zero on the whole module?"""
    cached = getattr(module, "_t2_trivial", None)
    if cached is not None:
        return cached
    degs = module.degrees()
    span = (max(degs) - min(degs)) if degs else 0
    ok = True
    for k in range(-span - 2, span + 3):
        if k % 4 != 2:
            continue
        for v in module.labels:
            w = module.act_basis(("t", k), v)
            if w is not OUT_OF_WINDOW and w:
                ok = False
                break
        if not ok:
            break
    module._t2_trivial = ok
    return ok


def _kill(module: GradedModule, v: dict, labels: Sequence) -> dict:
    """Replace v by images under the given odd generators until each kills it."""
    for x in labels:
        w = module.act(x, v)
        if w is OUT_OF_WINDOW:
            raise WindowExhausted(f"{label_str(x)} leaves the window")
        if w:
            v = w
    for x in labels:
        w = module.act(x, v)
        if w is OUT_OF_WINDOW:
            raise WindowExhausted(f"{label_str(x)} leaves the window")
        if w:
            raise PreconditionViolated("odd generators fail to anticommute on this module")
    return v


def _killed(module: GradedModule, v: Mapping, x) -> bool:
    w = module.act(x, v)
    if w is OUT_OF_WINDOW:
        raise WindowExhausted(f"{label_str(x)} leaves the window")
    return not w


def _check_homogeneous_nonzero(module: GradedModule, v: Mapping) -> None:
    if not v:
        raise PreconditionViolated("vector must be nonzero")
    module.vector_degree(v)


def strip_vector(
    module: GradedModule, v: Mapping, r: int, i1: int, i2: int
) -> tuple[dict, dict]:
    """Extend an annihilation range of odd generators by one step in each direction.

    Given v killed by t^{4rj+1} and t^{4rj-1} for i1 <= j <= i2, returns
    (v', v'') killed on [i1, i2+1] and [i1-1, i2] respectively.
    """
    if r not in (1, -1):
        raise InvalidInput("r must be +1 or -1")
    if not t2_acts_trivially(module):
        raise PreconditionViolated("the t^{4k+2} family must act as zero")
    v = dict(v)
    _check_homogeneous_nonzero(module, v)
    for j in range(i1, i2 + 1):
        for tau in (1, -1):
            if not _killed(module, v, _odd(r * j, tau)):
                raise PreconditionViolated("vector is not killed on the stated range")
    up = _kill(module, v, [_odd(r * (i2 + 1), 1), _odd(r * (i2 + 1), -1)])
    down = _kill(module, v, [_odd(r * (i1 - 1), 1), _odd(r * (i1 - 1), -1)])
    return up, down


def verify_annihilation_propagation(
    module: GradedModule, u: Mapping, r: int, p: int, l: int, N: int | None = None
) -> bool:
    """Check the conclusion of the annihilation-propagation statement on the window.

    Without ``N``: hypotheses s^{-r(4l+2)}u = 0 and t^{4ri+-1}u = 0 for i > 0;
    conclusion for all integers i.  With ``N``: hypotheses N > 2l+1,
    s^{r(4l+2)}u = 0 and t^{4pi+-1}u = 0 for 1 <= i <= N-1; conclusion for
    all positive i.  Raises HypothesesNotMet when the hypotheses fail.
    """
    if r not in (1, -1) or p not in (1, -1):
        raise InvalidInput("r and p must be +1 or -1")
    if l <= 0:
        raise HypothesesNotMet("l must be positive")
    u = dict(u)
    if not u:
        raise HypothesesNotMet("u must be nonzero")

    def killed(x):
        w = module.act(x, u)
        return None if w is OUT_OF_WINDOW else not w

    def all_killed(js):
        for j in js:
            for tau in (1, -1):
                ok = killed(_odd(j, tau))
                if ok is False:
                    return False
        return True

    degs = module.degrees()
    reach = (max(degs) - min(degs)) // 4 + 2 if degs else 2
    if N is None:
        if killed(_s(-r, l)) is not True:
            raise HypothesesNotMet("s^{-r(4l+2)} u must vanish")
        if not all_killed(r * i for i in range(1, reach)):
            raise HypothesesNotMet("u is not killed by the positive-direction odd generators")
        return all_killed(range(-reach, reach + 1))
    if N <= 2 * l + 1:
        raise HypothesesNotMet("need N > 2l + 1")
    if killed(_s(r, l)) is not True:
        raise HypothesesNotMet("s^{r(4l+2)} u must vanish")
    if not all_killed(p * i for i in range(1, N)):
        raise HypothesesNotMet("u is not killed on 1 <= i <= N-1")
    return all_killed(r * i for i in range(1, reach))


def flat_search_radius(d: int) -> int:
    """Window radius that keeps every step of the flat-vector search in range."""
    return 4 * (2 * d * (2 * d + 1) + (2 * d + 1) ** 2 * d)


@dataclass
class FlatVectorResult:
    vector: dict
    degree: int
    branch: str
    trace: list = field(default_factory=list)


def is_flat(module: GradedModule, u: Mapping) -> bool:
    """Independent exhaustive check: every in-window odd generator kills u."""
    deg = module.vector_degree(u)
    lo, hi = module.window.lo - deg, module.window.hi - deg
    for b in range(lo, hi + 1):
        if b % 2 == 0:
            continue
        w = module.act(("t", b), u)
        if w is OUT_OF_WINDOW:
            continue
        if w:
            return False
    return True


def _first_violation(module: GradedModule, v: dict, start: int):
    """Smallest N >= start (either direction) with t^{4rN+sigma} v != 0."""
    deg = module.vector_degree(v)
    best = None
    limit = max(abs(module.window.lo), module.window.hi) // 4 + 2
    for r in (1, -1):
        for N in range(start, limit + 1):
            hit = None
            for sigma in (1, -1):
                x = _odd(r * N, sigma)
                if deg + x[1] not in module.window:
                    continue
                w = module.act(x, v)
                if w is not OUT_OF_WINDOW and w:
                    hit = (N, r, sigma)
                    break
            if hit:
                if best is None or hit[0] < best[0]:
                    best = hit
                break
    return best


def _in_span(vectors: Sequence[Mapping], target: Mapping) -> bool:
    span = EchelonBasis()
    for u in vectors:
        span.add(u)
    return span.contains(target)


def find_flat_vector(
    module: GradedModule, d: int | None = None, start: Mapping | None = None
) -> FlatVectorResult:
    """A nonzero homogeneous vector killed by every odd generator of Q.

    Follows the stripping argument: first clear a symmetric block of odd
    generators around degree 0 of the index, and if some generator further
    out still acts, move to its image and use the s-family dependence
    relations to force annihilation on the remaining side.
    """
    if not module.labels:
        raise PreconditionViolated("module must be nonzero")
    if not module.graded or module.window is None:
        raise PreconditionViolated("a graded windowed module is required")
    if not t2_acts_trivially(module):
        raise PreconditionViolated("the t^{4k+2} family must act as zero")
    if d is None:
        d = module.max_homogeneous_dim()
    need = flat_search_radius(d)
    if -module.window.lo < need or module.window.hi < need:
        raise WindowExhausted(f"window radius {need} needed for dimension bound {d}")
    trace: list = []
    if start is None:
        order = {x: i for i, x in enumerate(module.labels)}
        first = min(module.labels, key=lambda x: (abs(module.degree(x)), order[x]))
        start = {first: ONE}
    v = dict(start)
    _check_homogeneous_nonzero(module, v)
    v = _kill(module, v, [_odd(0, 1), _odd(0, -1)])
    B = 2 * d * (2 * d + 1)
    for j in range(1, B + 1):
        v, _ = strip_vector(module, v, 1, -(j - 1), j - 1)
        v = _kill(module, v, [_odd(-j, 1), _odd(-j, -1)])
    trace.append(("stripped", module.vector_degree(v), B))
    hit = _first_violation(module, v, B + 1)
    if hit is None:
        return _finish(module, v, "stripped", trace)
    N, r, sigma = hit
    w = module.act(_odd(r * N, sigma), v)
    trace.append(("w", module.vector_degree(w), {"N": N, "r": r, "sigma": sigma}))
    # dependence among s^{r(4i+2)} s^{-r(4i+2)} v
    chain = [v]
    k = None
    for i in range(1, d + 1):
        x = _need_window(module.act_word([_s(r, i), _s(-r, i)], v))
        if _in_span(chain, x):
            k = i
            break
        chain.append(x)
    if k is None:
        raise PreconditionViolated("dimension bound d is too small for this module")
    if _need_window(module.act(_s(-r, k), w)):
        raise PreconditionViolated("module axioms fail: s-annihilation did not follow")
    trace.append(("k", k))
    hit2 = None
    for N2 in range(1, max(-module.window.lo, module.window.hi) // 4 + 2):
        for tau in (1, -1):
            x = _odd(r * N2, tau)
            if module.vector_degree(w) + x[1] not in module.window:
                continue
            img = module.act(x, w)
            if img is not OUT_OF_WINDOW and img:
                hit2 = (N2, tau)
                break
        if hit2:
            break
    if hit2 is None:
        return _finish(module, w, "after-first-step", trace)
    N2, tau = hit2
    ys = []
    ell = None
    for j in range(d + 1):
        s_lab = ("s", r * (4 * (2 * k + 1) * (d - j) + 2))
        t_lab = _odd(r * (N2 + (2 * k + 1) * j), tau)
        y = _need_window(module.act_word([s_lab, t_lab], w))
        if _in_span(ys, y):
            ell = j
            break
        ys.append(y)
    if ell is None:
        raise PreconditionViolated("dimension bound d is too small for this module")
    ell_p = (2 * k + 1) * (d - ell)
    u = _need_window(module.act(_odd(r * N2, tau), w))
    trace.append(("u", module.vector_degree(u), {"N'": N2, "tau": tau, "ell": ell, "ell'": ell_p}))
    return _finish(module, u, "second-step", trace)


def _need_window(res):
    if res is OUT_OF_WINDOW:
        raise WindowExhausted("search left the window")
    return res


def _finish(module: GradedModule, u: dict, branch: str, trace: list) -> FlatVectorResult:
    if not u:
        raise PreconditionViolated("search produced the zero vector")
    if not is_flat(module, u):
        raise PreconditionViolated(f"candidate from branch {branch} is not flat")
    return FlatVectorResult(u, module.vector_degree(u), branch, trace)


def enumerate_flat_vectors(module: GradedModule, degree: int) -> list[dict]:
    """Basis of the flat vectors in one degree (kernel of all odd generators there)."""
    labels = module.basis_of_degree(degree)
    rows: dict = {}
    lo, hi = module.window.lo - degree, module.window.hi - degree
    for b in range(lo, hi + 1):
        if b % 2 == 0:
            continue
        for v in labels:
            w = module.act_basis(("t", b), v)
            if w is OUT_OF_WINDOW:
                continue
            for key, c in w.items():
                rows.setdefault((b, key), {})[v] = c
    return kernel_basis(list(rows.values()), labels)
