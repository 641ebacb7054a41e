"""The form f_lambda(x, y) = lambda([x, y]) on the odd part of Q, its Clifford
superalgebra, and the simple module of that Clifford superalgebra.

The odd part is spanned by the t^b with b odd; the even "k_0" part seen by
lambda is the central t^{4k+2} family.  Modules are built as Fock spaces:
an orthogonal basis u_1..u_D of a complement of the radical is split into
hyperbolic pairs (fermion creation/annihilation operators), and an
unpaired generator, if any, acts through an extra 1|1 factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .errors import (
    HypothesesNotMet,
    InvalidInput,
    NonSplitForm,
    NotSimple,
    SuperAffineError,
    UnknownLabel,
)
from .exact import (
    ONE,
    ZERO,
    EchelonBasis,
    GramForm,
    GScalar,
    g,
    gsqrt,
    kernel_basis,
    label_sort_key,
    radical,
    vaxpy,
)
from .functionals import Functional
from .modules import GradedModule
from .quadratic import Q_RULES, QuadraticRules
from .superalgebra import Window, label_str


class NotCoradicalFinite(SuperAffineError):
    """The quotient of the odd part by the radical does not stabilize."""


DIVERGENT = "DIVERGENT"


def odd_labels(radius: int) -> list[tuple]:
    """Odd Q labels with |degree| <= radius, ordered by (|degree|, degree)."""
    labels = [("t", b) for b in range(-radius, radius + 1) if b % 2]
    return sorted(labels, key=lambda x: (abs(x[1]), x[1]))


def f_lambda(lam: Functional, x, y) -> GScalar:
    """lambda([x, y]) for odd Q labels, through the unwindowed bracket."""
    total = ZERO
    for k, c in Q_RULES.bracket(x, y).items():
        total = total + c * lam(k)
    return total


def f_lambda_vec(lam: Functional, u: Mapping, v: Mapping) -> GScalar:
    total = ZERO
    for a, x in u.items():
        for b, y in v.items():
            val = f_lambda(lam, a, b)
            if val:
                total = total + x * y * val
    return total


def gram_f_lambda(lam: Functional, window: Window | int) -> GramForm:
    radius = window if isinstance(window, int) else min(-window.lo, window.hi)
    labels = odd_labels(radius)
    entries = {}
    for a in labels:
        for b in labels:
            v = f_lambda(lam, a, b)
            if v:
                entries[(a, b)] = v
    return GramForm(labels, entries)


@dataclass
class CoradicalResult:
    dims: list  # (radius, quotient dimension)
    value: int | str
    radical_basis: list
    quotient_basis: list

    @property
    def finite(self) -> bool:
        return self.value != DIVERGENT


def _independent_rows(form: GramForm) -> list:
    """Labels whose rows are a basis of the row space (in basis order)."""
    span = EchelonBasis()
    chosen = []
    for a in form.basis:
        if span.add(form.row(a)):
            chosen.append(a)
    return chosen


def coradical(lam: Functional, schedule: Sequence[int] = (5, 9, 13, 17)) -> CoradicalResult:
    """Quotient dimension of the odd part by rad(f_lambda) over growing windows."""
    if len(schedule) < 3:
        raise InvalidInput("need at least three windows")
    dims = []
    form = None
    for r in schedule:
        form = gram_f_lambda(lam, r)
        rad, q = radical(form)
        dims.append((r, q))
    last = [q for _, q in dims[-3:]]
    value = last[0] if len(set(last)) == 1 else DIVERGENT
    return CoradicalResult(dims, value, rad, _independent_rows(form))


def radical_is_s_invariant(lam: Functional, result: CoradicalResult, shifts: Iterable[int]) -> bool:
    """Is [s^a, r] still in the radical, tested against a generous window of labels?"""
    final = result.dims[-1][0]
    for a in shifts:
        test = odd_labels(final + abs(a) + 8)
        for r in result.radical_basis:
            image = {("t", k[1] + a): c for k, c in r.items()}
            for y in test:
                if f_lambda_vec(lam, image, {y: ONE}):
                    return False
    return True


# ---------------------------------------------------------------------------
# nondegeneracy witnesses


@dataclass
class NondegeneracyReport:
    sigma: int
    k: int
    anchor: tuple
    witnesses: list = field(default_factory=list)  # (x, partner, value)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def onesided_partner(lam: Functional, sigma: int, x: Mapping, k: int) -> tuple:
    """The explicit partner label y with f_lambda(y, x) != 0.

    sigma = -1: expand x by (m, j) with t^{4m+j}, take the largest m (and the
    last j among ties) and return t^{4(k-m+[j=-1])+j}.  sigma = +1 is the
    mirror: smallest m and y = t^{-4k-2-4m-j}.
    """
    terms = sorted(((b - _j(b)) // 4, _j(b)) for _, b in x)
    if sigma == -1:
        m, j = terms[-1]
        return ("t", 4 * (k - m + (1 if j == -1 else 0)) + j)
    m, j = terms[0]
    return ("t", -4 * k - 2 - 4 * m - j)


def _j(b: int) -> int:
    return 1 if b % 4 == 1 else -1


def check_onesided_nondegeneracy(
    lam: Functional, sigma: int, window: int, samples: int = 40, seed: int = 0
) -> NondegeneracyReport:
    """Exhibit partners for basis vectors, pairs and random combinations."""
    if sigma not in (1, -1):
        raise InvalidInput("sigma must be +1 or -1")
    evens = [k for k in range(-window, window + 1) if k % 4 == 2]
    if not any(lam(("t", k)) for k in evens):
        raise HypothesesNotMet("lambda vanishes on the in-window t^{4k+2} family")
    for k in evens:
        if k * sigma > 0 and lam(("t", k)):
            raise HypothesesNotMet(f"lambda(t^{k}) must vanish on the sigma side")
    ks = [k for k in range(0, window) if lam(("t", -sigma * (4 * k + 2)))]
    if not ks:
        raise HypothesesNotMet("no nonzero value of lambda inside the window")
    k = ks[0]
    anchor = ("t", -sigma * (4 * k + 2))
    report = NondegeneracyReport(sigma, k, anchor)
    labels = odd_labels(window)
    rng = random.Random(seed)
    tests = [{x: ONE} for x in labels]
    tests += [{a: ONE, b: GScalar(2, 1)} for a, b in zip(labels, labels[1:])]
    for _ in range(samples):
        chosen = rng.sample(labels, min(len(labels), rng.randint(2, 5)))
        tests.append({x: GScalar(rng.randint(-3, 3) or 1, rng.randint(-2, 2)) for x in chosen})
    for x in tests:
        y = onesided_partner(lam, sigma, x, k)
        val = f_lambda_vec(lam, {y: ONE}, x)
        if val:
            report.witnesses.append((x, y, val))
        else:
            report.failures.append((x, y))
    return report


# ---------------------------------------------------------------------------
# operators as sparse matrices {(row, col): scalar}


def mat_mul(a: Mapping, b: Mapping) -> dict:
    by_row: dict = {}
    for (i, k), x in b.items():
        by_row.setdefault(i, []).append((k, x))
    out: dict = {}
    for (i, j), x in a.items():
        for k, y in by_row.get(j, ()):
            key = (i, k)
            s = out.get(key, ZERO) + x * y
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def mat_add(a: Mapping, b: Mapping, c=ONE) -> dict:
    out = dict(a)
    vaxpy(out, c, b)
    return out


def mat_scale(c, a: Mapping) -> dict:
    c = g(c)
    return {k: c * v for k, v in a.items()} if c else {}


def mat_identity(labels: Iterable) -> dict:
    return {(v, v): ONE for v in labels}


def anticommutator(a: Mapping, b: Mapping) -> dict:
    return mat_add(mat_mul(a, b), mat_mul(b, a))


def commutator(a: Mapping, b: Mapping) -> dict:
    return mat_add(mat_mul(a, b), mat_mul(b, a), -ONE)


def mat_apply(a: Mapping, vec: Mapping) -> dict:
    out: dict = {}
    for (i, j), x in a.items():
        c = vec.get(j)
        if c:
            vaxpy(out, x * c, {i: ONE})
    return out


# ---------------------------------------------------------------------------
# Clifford representations


@dataclass
class CliffordRepresentation:
    """Operators for an orthogonal basis of a nondegenerate form."""

    orthogonal_basis: list  # vectors over the form's basis labels
    norms: list  # f(u_i, u_i)
    generators: list  # operator matrices of u_i, squaring to norm/2
    basis: list  # module basis labels
    parity: dict
    pairs: list  # (i, j, rho)
    leftover: int | None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def algebra_type(self) -> str:
        n = len(self.pairs)
        if self.leftover is None:
            half = 2 ** (n - 1) if n else 1
            return f"M({half}|{half})" if n else "M(1|0)"
        return f"Q({2 ** n})"


def orthogonalize(form: GramForm) -> tuple[list, list]:
    """Orthogonal basis with nonzero norms of a nondegenerate form (deterministic)."""
    remaining = [{a: ONE} for a in form.basis]
    basis, norms = [], []
    while remaining:
        idx = next((i for i, v in enumerate(remaining) if form.pair(v, v)), None)
        if idx is None:
            v = remaining[0]
            jdx = next((j for j, w in enumerate(remaining) if j and form.pair(v, w)), None)
            if jdx is None:
                raise InvalidInput("form is degenerate")
            remaining[0] = _vsum(v, remaining[jdx])
            idx = 0
        u = remaining.pop(idx)
        c = form.pair(u, u)
        basis.append(u)
        norms.append(c)
        remaining = [_vsum(w, u, -form.pair(w, u) / c) for w in remaining]
        remaining = [w for w in remaining if w]
    return basis, norms


def _vsum(u, v, c=ONE):
    out = dict(u)
    vaxpy(out, c, v)
    return out


def clifford_representation(form: GramForm) -> CliffordRepresentation:
    """Simple module of the Clifford superalgebra of a nondegenerate form.

    Generators satisfy x y + y x = f(x, y).  Raises NonSplitForm when more
    than one orthogonal generator is left without a hyperbolic partner in Q(i).
    """
    basis, norms = orthogonalize(form)
    D = len(norms)
    unpaired = list(range(D))
    pairs = []
    while unpaired:
        i = unpaired.pop(0)
        for pos, j in enumerate(unpaired):
            rho = gsqrt(-norms[j] / norms[i])
            if rho is not None and rho:
                pairs.append((i, j, rho))
                unpaired.pop(pos)
                break
        else:
            pairs.append((i, None, None))
    leftovers = [p[0] for p in pairs if p[1] is None]
    pairs = [p for p in pairs if p[1] is not None]
    if len(leftovers) > 1:
        raise NonSplitForm(
            "the form has no hyperbolic splitting over Q(i); norms "
            + ", ".join(str(norms[i]) for i in leftovers)
        )
    leftover = leftovers[0] if leftovers else None
    n = len(pairs)
    extra = (0, 1) if leftover is not None else (0,)
    labels = [("f",) + bits + (e,) for bits in product((0, 1), repeat=n) for e in extra]
    parity = {v: (sum(v[1:]) % 2) for v in labels}

    def creation(k):
        m = {}
        for v in labels:
            bits = v[1 : 1 + n]
            if bits[k] == 0:
                sign = -ONE if sum(bits[:k]) % 2 else ONE
                w = v[: 1 + k] + (1,) + v[2 + k :]
                m[(w, v)] = sign
        return m

    def annihilation(k):
        m = {}
        for v in labels:
            bits = v[1 : 1 + n]
            if bits[k] == 1:
                sign = -ONE if sum(bits[:k]) % 2 else ONE
                w = v[: 1 + k] + (0,) + v[2 + k :]
                m[(w, v)] = sign
        return m

    gens: list = [None] * D
    for k, (i, j, rho) in enumerate(pairs):
        alpha = norms[i] / 2
        a, b = creation(k), annihilation(k)
        # a = g_i + g_j / rho and 4 alpha b = g_i - g_j / rho
        b4 = mat_scale(4 * alpha, b)
        gens[i] = mat_scale(GScalar(1, 0) / 2, mat_add(a, b4))
        gens[j] = mat_scale(rho / 2, mat_add(a, b4, -ONE))
    if leftover is not None:
        half = norms[leftover] / 2
        m = {}
        for v in labels:
            sign = -ONE if parity[v[:-1] + (0,)] else ONE
            if v[-1] == 1:
                m[(v[:-1] + (0,), v)] = sign * half
            else:
                m[(v[:-1] + (1,), v)] = sign
        gens[leftover] = m
    return CliffordRepresentation(basis, norms, gens, labels, parity, pairs, leftover)


def check_clifford_relations(rep: CliffordRepresentation) -> list[str]:
    """u_i u_j + u_j u_i = delta_ij norm_i, as operator identities."""
    problems = []
    ident = mat_identity(rep.basis)
    for i, a in enumerate(rep.generators):
        for j, b in enumerate(rep.generators):
            want = mat_scale(rep.norms[i], ident) if i == j else {}
            if anticommutator(a, b) != want:
                problems.append(f"relation fails for generators {i}, {j}")
        for (row, col) in a:
            if rep.parity[row] == rep.parity[col]:
                problems.append(f"generator {i} is not odd")
                break
    return problems


class KRules(QuadraticRules):
    """The subalgebra spanned by the t-family only."""

    name = "k"

    def parity(self, label):
        if label[0] != "t":
            raise UnknownLabel(label_str(label))
        return super().parity(label)


K_RULES = KRules()


@dataclass
class CliffordData:
    lam: Functional
    quotient_basis: list
    gram: GramForm
    module_dim: int
    representation: CliffordRepresentation
    coradical: CoradicalResult

    @property
    def algebra_type(self) -> str:
        return self.representation.algebra_type

    def coefficients(self, x) -> list[GScalar]:
        """Coordinates of the odd label x against the orthogonal generators, modulo the radical."""
        rep = self.representation
        out = []
        for u, c in zip(rep.orthogonal_basis, rep.norms):
            out.append(f_lambda_vec(self.lam, {x: ONE}, u) / c)
        return out

    def operator(self, x) -> dict:
        """Matrix of an element of the t-family on the module."""
        if x[1] % 2 == 0:
            return mat_scale(self.lam(x), mat_identity(self.representation.basis))
        m: dict = {}
        for a, gen in zip(self.coefficients(x), self.representation.generators):
            if a:
                m = mat_add(m, gen, a)
        return m


def build_clifford_module(
    lam: Functional, schedule: Sequence[int] = (5, 9, 13, 17)
) -> tuple[CliffordData, GradedModule]:
    """The finite-dimensional simple module on which t^{4k+2} acts by lambda."""
    co = coradical(lam, schedule)
    if not co.finite:
        raise NotCoradicalFinite(f"quotient dimensions {co.dims} do not stabilize")
    final = co.dims[-1][0]
    full = gram_f_lambda(lam, final)
    qb = co.quotient_basis
    gram = GramForm(qb, {(a, b): full(a, b) for a in qb for b in qb})
    rep = clifford_representation(gram)
    data = CliffordData(lam, qb, gram, rep.dim, rep, co)
    cache: dict = {}

    def rule(x, v):
        if x[0] != "t":
            raise UnknownLabel(f"{label_str(x)} is not in the t-family")
        m = cache.get(x)
        if m is None:
            m = cache[x] = data.operator(x)
        return mat_apply(m, {v: ONE})

    module = GradedModule(
        [(v, rep.parity[v], 0) for v in rep.basis], rule, K_RULES, graded=False, name="clifford"
    )
    return data, module


# ---------------------------------------------------------------------------
# simple associative superalgebras


@dataclass
class SuperalgebraType:
    kind: str  # "M" or "Q"
    r: int
    s: int
    dim: int
    even_dim: int

    def __str__(self) -> str:
        return f"Q({self.r})" if self.kind == "Q" else f"M({self.r}|{self.s})"


def _flat(m: Mapping) -> dict:
    return {k: g(v) for k, v in m.items() if v}


def associative_span(ops: Sequence[Mapping], labels: Sequence) -> list[dict]:
    """Basis of the unital associative algebra generated by the operators."""
    span = EchelonBasis()
    members = []
    queue = [mat_identity(labels)] + [_flat(m) for m in ops]
    while queue:
        m = queue.pop(0)
        if not span.add(m):
            continue
        members.append(m)
        for other in list(members):
            queue.append(mat_mul(m, other))
            queue.append(mat_mul(other, m))
    return span.canonical_basis()


def _trace(m: Mapping) -> GScalar:
    total = ZERO
    for (i, j), x in m.items():
        if i == j:
            total = total + x
    return total


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def classify_simple_superalgebra(
    ops: Sequence[Mapping], parity: Mapping
) -> SuperalgebraType:
    """Recognize Q(r) or M(r|s) from operators acting on a graded space.

    ``parity`` gives the parity of each basis vector of the space.  The
    generated algebra must be semisimple (nondegenerate trace form) with
    ordinary centre C*1 (type M) or C*1 + C*z with z odd (type Q).
    """
    labels = sorted(parity, key=label_sort_key)
    basis = associative_span(ops, labels)
    n = len(basis)

    def elem_parity(m):
        ps = {(parity[i] + parity[j]) % 2 for (i, j) in m}
        if len(ps) > 1:
            raise InvalidInput("operators are not parity-homogeneous")
        return ps.pop() if ps else 0

    # split into homogeneous parts
    homog = []
    for m in basis:
        parts = {0: {}, 1: {}}
        for (i, j), x in m.items():
            parts[(parity[i] + parity[j]) % 2][(i, j)] = x
        homog += [p for p in parts.values() if p]
    span0, span1 = EchelonBasis(), EchelonBasis()
    for m in homog:
        (span0 if elem_parity(m) == 0 else span1).add(m)
    even, odd = span0.canonical_basis(), span1.canonical_basis()
    if len(even) + len(odd) != n:
        raise NotSimple("the algebra is not graded by the given parities")
    elems = even + odd
    gram = [[_trace(mat_mul(a, b)) for b in elems] for a in elems]
    if len(kernel_basis([{j: x for j, x in enumerate(r) if x} for r in gram], list(range(n)))):
        raise NotSimple("trace form is degenerate, so the algebra is not semisimple")
    # ordinary centre: coefficients c with sum c_k [e_k, e_l] = 0 for all l
    rows: dict = {}
    for k, a in enumerate(elems):
        for l, b in enumerate(elems):
            for key, x in commutator(a, b).items():
                rows.setdefault((l, key), {})[k] = x
    centre = kernel_basis(list(rows.values()), list(range(n)))
    ne = len(even)
    centre_odd = [c for c in centre if all(k >= ne for k in c)]
    dim_v0 = sum(1 for v in labels if parity[v] == 0)
    dim_v1 = len(labels) - dim_v0
    if len(centre) == 1:
        tot = _isqrt_exact(n)
        diff = _isqrt_exact(len(even) - len(odd))
        if tot is None or diff is None or (tot + diff) % 2:
            raise NotSimple("dimensions do not match a full matrix superalgebra")
        big, small = (tot + diff) // 2, (tot - diff) // 2
        r, s = (big, small) if dim_v0 >= dim_v1 else (small, big)
        return SuperalgebraType("M", r, s, n, len(even))
    if len(centre) == 2 and centre_odd:
        r = _isqrt_exact(n // 2)
        if r is None or n % 2 or len(even) != len(odd):
            raise NotSimple("dimensions do not match a queer superalgebra")
        return SuperalgebraType("Q", r, r, n, len(even))
    raise NotSimple(f"centre has dimension {len(centre)}")
