"""The superalgebra sl(2m+1|2n+1) (psl when m = n), its order-4 automorphism
sigma, and the simultaneous sigma-eigenspace / restricted-weight decomposition.

Matrix indices are 1-based.  Rows 1..2m+1 are even, rows 2m+2..2m+2n+2 are
odd; ``bar(p) = p + 2m + 1``.  The basis is

* ``("e", a, b)`` for a != b (elementary matrices),
* ``("h", i) = e_ii - e_{i+1,i+1}`` for 1 <= i <= 2m,
* ``("d", p) = e_{bar p} - e_{bar(p+1)}`` for 1 <= p <= 2n,
* ``("J",) = e_{m+1,m+1} + e_{bar(n+1),bar(n+1)}`` when m != n.

For m = n matrices are taken modulo the identity; the normal form removes
tr(even block)/(2m+1) times the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidInput
from .exact import (
    I_UNIT,
    ONE,
    ZERO,
    GScalar,
    g,
    kernel_basis,
    label_sort_key,
    span_equal,
    vaxpy,
    vscale,
)
from .superalgebra import SuperAlgebraTable, Window

ZETA = I_UNIT


class BadRank(InvalidInput):
    """Rank parameters outside the supported range."""


def _sgn(s: int) -> int:
    return 1 if s > 0 else 0


def _pm(k: int) -> GScalar:
    return ONE if k % 2 == 0 else -ONE


Matrix = dict  # {(row, col): GScalar}


class SlSuper:
    """Matrix realization with coordinate conversion to the standard basis."""

    def __init__(self, m: int, n: int):
        if m < 1 or n < 0:
            raise BadRank("need m >= 1 and n >= 0")
        self.m, self.n = m, n
        self.M = 2 * m + 1
        self.size = self.M + 2 * n + 1
        self.psl = m == n
        labels = [("e", a, b) for a in range(1, self.size + 1) for b in range(1, self.size + 1) if a != b]
        labels += [("h", i) for i in range(1, 2 * m + 1)]
        labels += [("d", p) for p in range(1, 2 * n + 1)]
        if not self.psl:
            labels.append(("J",))
        self.labels = sorted(labels, key=label_sort_key)
        self._bracket_cache: dict = {}

    # index helpers --------------------------------------------------------
    def bar(self, p: int) -> int:
        return p + self.M

    def index_parity(self, i: int) -> int:
        return 0 if i <= self.M else 1

    def parity(self, label) -> int:
        if label[0] == "e":
            return (self.index_parity(label[1]) + self.index_parity(label[2])) % 2
        return 0

    @property
    def dim(self) -> int:
        return len(self.labels)

    # matrices ---------------------------------------------------------------
    def matrix(self, label) -> Matrix:
        kind = label[0]
        if kind == "e":
            return {(label[1], label[2]): ONE}
        if kind == "h":
            i = label[1]
            return {(i, i): ONE, (i + 1, i + 1): -ONE}
        if kind == "d":
            a = self.bar(label[1])
            return {(a, a): ONE, (a + 1, a + 1): -ONE}
        if kind == "J":
            a, b = self.m + 1, self.bar(self.n + 1)
            return {(a, a): ONE, (b, b): ONE}
        raise InvalidInput(f"unknown label {label}")

    def to_matrix(self, coords: Mapping) -> Matrix:
        out: Matrix = {}
        for label, c in coords.items():
            vaxpy(out, c, self.matrix(label))
        return out

    def supertrace(self, X: Mapping) -> GScalar:
        total = ZERO
        for (i, j), c in X.items():
            if i == j:
                total = total + (c if self.index_parity(i) == 0 else -c)
        return total

    def normal_form(self, X: Mapping) -> Matrix:
        """For psl, the representative whose even block has trace zero."""
        X = {k: g(v) for k, v in X.items() if v}
        if not self.psl:
            return X
        tr = sum((c for (i, j), c in X.items() if i == j and i <= self.M), ZERO)
        if not tr:
            return X
        shift = tr / self.M
        out = dict(X)
        vaxpy(out, -shift, {(i, i): ONE for i in range(1, self.size + 1)})
        return out

    def coords(self, X: Mapping) -> dict:
        """Coordinates of a supertrace-zero matrix in the standard basis."""
        X = self.normal_form(X)
        if self.supertrace(X):
            raise InvalidInput("matrix has nonzero supertrace")
        out: dict = {}
        diag = {}
        for (i, j), c in X.items():
            if i != j:
                out[("e", i, j)] = c
            else:
                diag[i] = c
        j_coef = sum((diag.get(i, ZERO) for i in range(1, self.M + 1)), ZERO)
        if self.psl and j_coef:
            raise InvalidInput("normal form failed")
        if j_coef:
            out[("J",)] = j_coef
        run = ZERO
        for i in range(1, 2 * self.m + 1):
            run = run + diag.get(i, ZERO) - (j_coef if i == self.m + 1 else ZERO)
            if run:
                out[("h", i)] = run
        run = ZERO
        for p in range(1, 2 * self.n + 1):
            q = self.bar(p)
            run = run + diag.get(q, ZERO) - (j_coef if p == self.n + 1 else ZERO)
            if run:
                out[("d", p)] = run
        return out

    def matmul(self, A: Mapping, B: Mapping) -> Matrix:
        by_row: dict = {}
        for (i, k), x in B.items():
            by_row.setdefault(i, []).append((k, x))
        out: Matrix = {}
        for (i, j), x in A.items():
            for k, y in by_row.get(j, ()):
                key = (i, k)
                s = out.get(key, ZERO) + x * y
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def _split(self, X: Mapping) -> dict:
        parts: dict = {0: {}, 1: {}}
        for (i, j), c in X.items():
            parts[(self.index_parity(i) + self.index_parity(j)) % 2][(i, j)] = c
        return parts

    def bracket_matrix(self, A: Mapping, B: Mapping) -> Matrix:
        """Supercommutator, extended bilinearly over parity components."""
        out: Matrix = {}
        pa, pb = self._split(A), self._split(B)
        for a in (0, 1):
            for b in (0, 1):
                if not pa[a] or not pb[b]:
                    continue
                vaxpy(out, ONE, self.matmul(pa[a], pb[b]))
                vaxpy(out, ONE if a * b else -ONE, self.matmul(pb[b], pa[a]))
        return out

    def bracket_labels(self, x, y) -> dict:
        key = (x, y)
        hit = self._bracket_cache.get(key)
        if hit is None:
            hit = self.coords(self.bracket_matrix(self.matrix(x), self.matrix(y)))
            self._bracket_cache[key] = hit
        return hit

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                w = self.bracket_labels(x, y)
                if w:
                    vaxpy(out, a * b, w)
        return out

    def form(self, u: Mapping, v: Mapping) -> GScalar:
        """Supertrace form str(uv) on coordinate vectors."""
        return self.supertrace(self.matmul(self.to_matrix(u), self.to_matrix(v)))

    def table(self) -> SuperAlgebraTable:
        basis = [(x, self.parity(x), 0) for x in self.labels]
        return SuperAlgebraTable.from_rule(
            basis, self.bracket_labels, Window(0, 0), name=f"sl({self.M}|{2 * self.n + 1})"
        )

    # weights --------------------------------------------------------------
    def dot_weight(self, label) -> tuple:
        """Weight over (eps_1..eps_{2m+1}, delta_1..delta_{2n+1}) before restriction."""
        w = [0] * self.size
        if label[0] == "e":
            w[label[1] - 1] += 1
            w[label[2] - 1] -= 1
        return tuple(w)

    def restrict(self, dot: Iterable[int]) -> tuple:
        """Restriction to the sigma-fixed Cartan: coordinates over (eps_1..eps_m, delta_1..delta_n)."""
        dot = list(dot)
        m, n = self.m, self.n
        out = [0] * (m + n)
        for i in range(1, self.M + 1):
            c = dot[i - 1]
            if i <= m:
                out[i - 1] += c
            elif i >= m + 2:
                out[2 * m + 2 - i - 1] -= c
        for p in range(1, 2 * n + 2):
            c = dot[self.M + p - 1]
            if p <= n:
                out[m + p - 1] += c
            elif p >= n + 2:
                out[m + 2 * n + 2 - p - 1] -= c
        return tuple(out)

    def restricted_weight(self, label) -> tuple:
        return self.restrict(self.dot_weight(label))

    def fixed_cartan(self) -> list[dict]:
        """Basis h_r + h_{2m+1-r}, d_p + d_{2n+1-p} of the sigma-fixed Cartan."""
        m, n = self.m, self.n
        out = []
        for r in range(1, m + 1):
            out.append(_merge({("h", r): ONE}, {("h", 2 * m + 1 - r): ONE}))
        for p in range(1, n + 1):
            out.append(_merge({("d", p): ONE}, {("d", 2 * n + 1 - p): ONE}))
        return out

    def weight_by_evaluation(self, vec: Mapping) -> tuple | None:
        """Restricted weight of ``vec`` read off from brackets with the fixed Cartan.

        Returns None if ``vec`` is not a common eigenvector.
        """
        values = []
        for H in self.fixed_cartan():
            w = self.bracket(H, vec)
            lam = _eigenvalue(vec, w)
            if lam is None:
                return None
            values.append(lam)
        # eps_i(H_r) = delta_{ir} - delta_{i,r+1}, so value_r = c_r - c_{r+1};
        # the delta block has the same shape
        m, n = self.m, self.n
        res = [ZERO] * (m + n)
        for start, size in ((0, m), (m, n)):
            nxt = ZERO
            for i in range(start + size - 1, start - 1, -1):
                res[i] = values[i] + nxt
                nxt = res[i]
        ints = []
        for i, c in enumerate(res):
            if c.im or c.re.denominator != 1:
                return None
            ints.append(int(c.re))
        return tuple(ints)


def _merge(a, b):
    out = dict(a)
    vaxpy(out, ONE, b)
    return out


def _eigenvalue(vec: Mapping, image: Mapping) -> GScalar | None:
    if not image:
        return ZERO
    k = next(iter(vec))
    lam = image.get(k, ZERO) / vec[k]
    for key in set(vec) | set(image):
        if image.get(key, ZERO) != lam * vec.get(key, ZERO):
            return None
    return lam


# ---------------------------------------------------------------------------
# the order-4 automorphism


@dataclass
class Sigma:
    algebra: SlSuper
    images: dict  # label -> coordinate vector
    note: str = ""

    def apply(self, vec: Mapping) -> dict:
        out: dict = {}
        for x, c in vec.items():
            vaxpy(out, c, self.images[x])
        return out

    def power(self, vec: Mapping, k: int) -> dict:
        for _ in range(k):
            vec = self.apply(vec)
        return dict(vec)

    def with_flipped_sign(self, label=None) -> "Sigma":
        """Copy with the image of one basis element negated (fault injection)."""
        if label is None:
            label = ("e", 1, self.algebra.bar(1))
        images = dict(self.images)
        images[label] = vscale(-ONE, images[label])
        return Sigma(self.algebra, images, note=f"sign of {label} flipped")


def build_sigma(G: SlSuper) -> Sigma:
    m, n = G.m, G.n
    M1, N1 = 2 * m + 2, 2 * n + 2
    images: dict = {}
    for label in G.labels:
        kind = label[0]
        if kind == "h":
            images[label] = {("h", 2 * m + 1 - label[1]): ONE}
        elif kind == "d":
            images[label] = {("d", 2 * n + 1 - label[1]): ONE}
        elif kind == "J":
            images[label] = {("J",): -ONE}
        else:
            a, b = label[1], label[2]
            pa, pb = G.index_parity(a), G.index_parity(b)
            if pa == 0 and pb == 0:
                i, j = a, b
                coef = -_pm(i + j)
                tgt = (M1 - j, M1 - i)
            elif pa == 1 and pb == 1:
                p, q = a - G.M, b - G.M
                expo = p + q + _sgn(n + 1 - p) + _sgn(n + 1 - q) + (n + 1) * (
                    int(p == n + 1) + int(q == n + 1)
                )
                coef = -_pm(expo) * ZETA ** int(q == n + 1) * (-ZETA) ** int(p == n + 1)
                tgt = (G.bar(N1 - q), G.bar(N1 - p))
            elif pa == 0:
                i, p = a, b - G.M
                expo = i + p + _sgn(n + 1 - p) + (n + 1) * int(p == n + 1)
                coef = -_pm(expo) * ZETA ** int(p == n + 1)
                tgt = (G.bar(N1 - p), M1 - i)
            else:
                p, i = a - G.M, b
                expo = i + p + _sgn(n + 1 - p) + (n + 1) * int(p == n + 1)
                coef = _pm(expo) * (-ZETA) ** int(p == n + 1)
                tgt = (M1 - i, G.bar(N1 - p))
            images[label] = {("e",) + tgt: coef}
    return Sigma(G, images)


@dataclass
class AutomorphismReport:
    bracket_failures: list = field(default_factory=list)
    order_failures: list = field(default_factory=list)
    cartan_failures: list = field(default_factory=list)
    form_failures: list = field(default_factory=list)
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.bracket_failures or self.order_failures or self.cartan_failures or self.form_failures)


def verify_automorphism(sigma: Sigma, check_form: bool = True) -> AutomorphismReport:
    G = sigma.algebra
    rep = AutomorphismReport()
    for x in G.labels:
        sx = sigma.images[x]
        for y in G.labels:
            lhs = sigma.apply(G.bracket_labels(x, y))
            rhs = G.bracket(sx, sigma.images[y])
            rep.pairs_checked += 1
            if lhs != rhs:
                rep.bracket_failures.append((x, y))
            if check_form and G.form(sx, sigma.images[y]) != G.form({x: ONE}, {y: ONE}):
                rep.form_failures.append((x, y))
        if sigma.power({x: ONE}, 4) != {x: ONE}:
            rep.order_failures.append(x)
        if x[0] != "e" and any(k[0] == "e" for k in sx):
            rep.cartan_failures.append(x)
    return rep


# ---------------------------------------------------------------------------
# eigenspace and weight decomposition


@dataclass
class Decomposition:
    algebra: SlSuper
    blocks: dict  # (j, weight) -> list of coordinate vectors
    weight_spaces: dict  # weight -> labels

    def dims(self) -> dict:
        return {k: len(v) for k, v in self.blocks.items()}

    def block(self, j: int, weight: tuple) -> list:
        return self.blocks.get((j % 4, tuple(weight)), [])

    def total_dim(self) -> int:
        return sum(len(v) for v in self.blocks.values())


def eigenweight_decompose(sigma: Sigma) -> Decomposition:
    G = sigma.algebra
    spaces: dict = {}
    for x in G.labels:
        spaces.setdefault(G.restricted_weight(x), []).append(x)
    blocks: dict = {}
    for weight in sorted(spaces):
        for j in range(4):
            ev = ZETA ** j
            ker = []
            # sigma preserves parity, so each kernel splits into homogeneous parts
            for parity in (0, 1):
                labels = [x for x in spaces[weight] if G.parity(x) == parity]
                rows: dict = {}
                for x in labels:
                    img = dict(sigma.images[x])
                    vaxpy(img, -ev, {x: ONE})
                    for k, c in img.items():
                        rows.setdefault(k, {})[x] = c
                if labels:
                    ker += kernel_basis(list(rows.values()), labels)
            if ker:
                blocks[(j, weight)] = ker
    return Decomposition(G, blocks, spaces)


# ---------------------------------------------------------------------------
# special elements


@dataclass
class SpecialElements:
    cartan: list  # labels of the standard Cartan basis
    I: dict  # coordinates (zero for psl)
    J: dict
    x: dict
    y: dict
    e: dict
    f: dict
    x_alternative: dict | None
    y_alternative: dict
    notes: list = field(default_factory=list)


def _diag(G: SlSuper, entries: Mapping[int, object]) -> Matrix:
    return {(i, i): g(c) for i, c in entries.items() if c}


def special_elements(G: SlSuper) -> SpecialElements:
    m, n = G.m, G.n
    notes = []
    half, quarter = GScalar(Fraction(1, 2)), GScalar(Fraction(1, 4))
    ident_even = {i: Fraction(1, G.M) for i in range(1, G.M + 1)}
    ident_odd = {G.bar(p): Fraction(1, 2 * n + 1) for p in range(1, 2 * n + 2)}
    I_mat = _diag(G, {**ident_even, **ident_odd})
    I = {} if G.psl else G.coords(I_mat)
    J = {} if G.psl else {("J",): ONE}
    hm = {("h", m): ONE}
    hm1 = {("h", m + 1): ONE}
    if n >= 1:
        mat = _diag(
            G,
            {
                m: -quarter,
                m + 2: -quarter,
                G.bar(n): quarter,
                G.bar(n + 2): quarter,
                m + 1: half,
                G.bar(n + 1): -half,
            },
        )
        x = G.coords(mat)
        alt: dict = {}
        vaxpy(alt, quarter, {("d", n): ONE})
        vaxpy(alt, -quarter, {("d", n + 1): ONE})
        vaxpy(alt, -quarter, hm)
        vaxpy(alt, quarter, hm1)
        x_alt = alt
    else:
        x = {}
        vaxpy(x, -half, hm)
        vaxpy(x, half, hm1)
        x_alt = None
        notes.append("n = 0: x taken as -(h_m - h_{m+1})/2 so that [x, e] = f")
    y_direct = G.coords(_diag(G, {m + 1: 2, G.bar(n + 1): 2}))
    y2: dict = {}
    if not G.psl:
        vaxpy(y2, 2, I)
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            vaxpy(y2, GScalar(Fraction(-2, 2 * m + 1)), {("h", j): ONE})
            vaxpy(y2, GScalar(Fraction(2, 2 * m + 1)), {("h", 2 * m + 1 - j): ONE})
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            vaxpy(y2, GScalar(Fraction(-2, 2 * n + 1)), {("d", j): ONE})
            vaxpy(y2, GScalar(Fraction(2, 2 * n + 1)), {("d", 2 * n + 1 - j): ONE})
    E = ("e", m + 1, G.bar(n + 1))
    F = ("e", G.bar(n + 1), m + 1)
    zm = ZETA ** m
    sign = _pm(m)
    e = {E: zm, F: zm * sign}
    f = {E: zm, F: -zm * sign}
    cartan = [x for x in G.labels if x[0] != "e"]
    return SpecialElements(cartan, I, J, x, y2, e, f, x_alt, y_direct, notes)


# ---------------------------------------------------------------------------
# transcribed table of eigen-components


def _e(G, a, b):
    return ("e", a, b)


def listed_vectors(G: SlSuper) -> list[tuple]:
    """Every spanning vector of the tabulated components as (j, weight, vector, row)."""
    m, n = G.m, G.n
    M1, N1 = 2 * m + 2, 2 * n + 2
    B = G.bar
    rows = []

    def eps(*pairs):
        w = [0] * (m + n)
        for kind, idx, c in pairs:
            w[(idx - 1) if kind == "e" else (m + idx - 1)] += c
        return tuple(w)

    def vec(*terms):
        out: dict = {}
        for c, a, b in terms:
            vaxpy(out, c, {_e(G, a, b): ONE})
        return out

    def add(j, weight, v, name):
        rows.append((j, weight, v, name))

    R = range(1, m + 1)
    P = range(1, n + 1)
    mid = m + 1
    nb = B(n + 1)
    for sgn_j, j in ((1, 0), (-1, 2)):
        # sgn_j flips the relative sign between the two blocks
        for r in R:
            for s in R:
                if r == s:
                    continue
                add(j, eps(("e", r, 1), ("e", s, -1)), vec((1, r, s), (-sgn_j * _pm(r + s), M1 - s, M1 - r)), "eps_r-eps_s")
                add(j, eps(("e", r, 1), ("e", s, 1)), vec((1, r, M1 - s), (-sgn_j * _pm(r + s), s, M1 - r)), "eps_r+eps_s")
                add(j, eps(("e", r, -1), ("e", s, -1)), vec((1, M1 - r, s), (-sgn_j * _pm(r + s), M1 - s, r)), "-eps_r-eps_s")
            add(j, eps(("e", r, 1)), vec((1, r, mid), (sgn_j * _pm(r + m), mid, M1 - r)), "eps_r")
            add(j, eps(("e", r, -1)), vec((1, mid, r), (sgn_j * _pm(r + m), M1 - r, mid)), "-eps_r")
        for p in P:
            for q in P:
                if p == q:
                    continue
                add(j, eps(("d", p, 1), ("d", q, -1)), vec((1, B(p), B(q)), (-sgn_j * _pm(p + q), B(N1 - q), B(N1 - p))), "delta_p-delta_q")
                add(j, eps(("d", p, 1), ("d", q, 1)), vec((1, B(p), B(N1 - q)), (sgn_j * _pm(p + q), B(q), B(N1 - p))), "delta_p+delta_q")
                add(j, eps(("d", p, -1), ("d", q, -1)), vec((1, B(N1 - p), B(q)), (sgn_j * _pm(p + q), B(N1 - q), B(p))), "-delta_p-delta_q")
            add(j, eps(("d", p, 1)), vec((1, B(p), mid), (sgn_j * _pm(m + p), mid, B(N1 - p))), "delta_p")
            add(j, eps(("d", p, -1)), vec((1, mid, B(p)), (-sgn_j * _pm(m + p), B(N1 - p), mid)), "-delta_p")
            for r in R:
                add(j, eps(("e", r, 1), ("d", p, -1)), vec((1, r, B(p)), (sgn_j * _pm(r + p), B(N1 - p), M1 - r)), "eps_r-delta_p")
                add(j, eps(("d", p, 1), ("e", r, -1)), vec((1, B(p), r), (-sgn_j * _pm(r + p), M1 - r, B(N1 - p))), "delta_p-eps_r")
                add(j, eps(("e", r, 1), ("d", p, 1)), vec((1, r, B(N1 - p)), (-sgn_j * _pm(r + p), B(p), M1 - r)), "eps_r+delta_p")
                add(j, eps(("e", r, -1), ("d", p, -1)), vec((1, M1 - r, B(p)), (sgn_j * _pm(r + p), B(N1 - p), r)), "-eps_r-delta_p")
    for p in P:
        add(0, eps(("d", p, 2)), vec((1, B(p), B(N1 - p))), "2delta_p")
        add(0, eps(("d", p, -2)), vec((1, B(N1 - p), B(p))), "-2delta_p")
    for r in R:
        add(2, eps(("e", r, 2)), vec((1, r, M1 - r)), "2eps_r")
        add(2, eps(("e", r, -2)), vec((1, M1 - r, r)), "-2eps_r")
    for sgn_j, j in ((1, 1), (-1, 3)):
        for r in R:
            add(j, eps(("e", r, 1)), vec((1, r, nb), (-sgn_j * _pm(r), nb, M1 - r)), "eps_r")
            add(j, eps(("e", r, -1)), vec((1, M1 - r, nb), (-sgn_j * _pm(r), nb, r)), "-eps_r")
        for p in P:
            add(j, eps(("d", p, 1)), vec((1, B(p), nb), (sgn_j * _pm(p), nb, B(N1 - p))), "delta_p")
            add(j, eps(("d", p, -1)), vec((1, nb, B(p)), (-sgn_j * _pm(p), B(N1 - p), nb)), "-delta_p")
    zero = tuple([0] * (m + n))
    add(1, zero, vec((1, mid, nb), (_pm(m), nb, mid)), "weight-0 odd (k=1)")
    add(3, zero, vec((1, mid, nb), (-_pm(m), nb, mid)), "weight-0 odd (k=3)")
    for v in G.fixed_cartan():
        add(0, zero, v, "fixed Cartan")
    return rows


def weight_zero_two_block(G: SlSuper, special: SpecialElements) -> tuple[list, list]:
    """The two listed spanning sets of the j = 2, weight 0 component."""
    m, n = G.m, G.n
    first = []
    for r in range(1, m + 1):
        first.append(_merge({("h", r): ONE}, {("h", 2 * m + 1 - r): -ONE}))
    for p in range(1, n + 1):
        first.append(_merge({("d", p): ONE}, {("d", 2 * n + 1 - p): -ONE}))
    if not G.psl:
        first.append({("J",): ONE})
    second = []
    for r in range(1, m):
        second.append(_merge({("h", r): ONE}, {("h", 2 * m + 1 - r): -ONE}))
    for p in range(1, n):
        second.append(_merge({("d", p): ONE}, {("d", 2 * n + 1 - p): -ONE}))
    second += [special.x, special.y]
    if not G.psl:
        second.append(special.I)
    return first, second


@dataclass
class TableReport:
    rows_checked: int = 0
    failures: list = field(default_factory=list)
    dims_ok: bool = True
    total_dim: int = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.dims_ok


def in_component(sigma: Sigma, j: int, weight: tuple, v: Mapping) -> bool:
    G = sigma.algebra
    if not v:
        return False
    if sigma.apply(v) != vscale(ZETA ** j, v):
        return False
    return all(G.restricted_weight(k) == tuple(weight) for k in v)


def verify_tables(sigma: Sigma, decomposition: Decomposition | None = None) -> TableReport:
    G = sigma.algebra
    dec = decomposition or eigenweight_decompose(sigma)
    rep = TableReport()
    sp = special_elements(G)
    for j, weight, v, name in listed_vectors(G):
        rep.rows_checked += 1
        if not in_component(sigma, j, weight, v):
            rep.failures.append((j, weight, name, "not in the listed component"))
            continue
        if weight_by_eval_mismatch(G, v, weight):
            rep.failures.append((j, weight, name, "evaluated weight differs"))
        if any(weight) and len(dec.block(j, weight)) != 1:
            rep.failures.append((j, weight, name, "component is not one-dimensional"))
    zero = tuple([0] * (G.m + G.n))
    first, second = weight_zero_two_block(G, sp)
    for v in first + second:
        rep.rows_checked += 1
        if v and not in_component(sigma, 2, zero, v):
            rep.failures.append((2, zero, "weight-0 (k=2) spanning vector", v))
    block = dec.block(2, zero)
    if not span_equal(first, block):
        rep.failures.append((2, zero, "first spanning set", "does not span the component"))
    if not span_equal(second, block):
        rep.failures.append((2, zero, "second spanning set", "does not span the component"))
    if len(second) > len(block):
        rep.notes.append(
            f"second spanning set of the weight-0 (k=2) component has {len(second)} vectors "
            f"for a {len(block)}-dimensional space"
        )
    expected = {0: G.m + G.n, 1: 1, 2: G.m + G.n + (0 if G.psl else 1), 3: 1}
    for j, d in expected.items():
        if len(dec.block(j, zero)) != d:
            rep.dims_ok = False
            rep.failures.append((j, zero, "weight-0 dimension", len(dec.block(j, zero))))
    rep.total_dim = dec.total_dim()
    if rep.total_dim != G.dim:
        rep.dims_ok = False
        rep.failures.append(("total", rep.total_dim, G.dim))
    return rep


def weight_by_eval_mismatch(G: SlSuper, v: Mapping, weight: tuple) -> bool:
    got = G.weight_by_evaluation(v)
    return got is not None and got != tuple(weight)
