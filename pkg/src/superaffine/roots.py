"""Root data of the four twisted affine types, generated from tabulated families.

A root is ``dot + k*delta`` with ``dot`` an integer vector over
(eps_1..eps_m, delta_1..delta_n).  The form is (eps_i, eps_j) = [i = j],
(delta_p, delta_q) = -[p = q], and delta is null and orthogonal to everything.
Only nonzero roots are stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import InvalidInput
from .exact import rank, solve

A_EVEN_ODD = "A(2m,2n-1)^(2)"
A_ODD_ODD = "A(2m-1,2n-1)^(2)"
A_FOUR = "A(2m,2n)^(4)"
D_TWO = "D(m+1,n)^(2)"
TYPES = (A_EVEN_ODD, A_ODD_ODD, A_FOUR, D_TWO)

RE, IM, NS = "re", "im", "ns"


class BadRank(InvalidInput):
    """Rank parameters violate the constraint of the type."""


def normalize_type(tag: str) -> str:
    key = "".join(ch for ch in tag if not ch.isspace())
    for t in TYPES:
        if key == t:
            return t
    aliases = {
        "A2m2n-1": A_EVEN_ODD,
        "A2m-12n-1": A_ODD_ODD,
        "A2m2n": A_FOUR,
        "A24": A_FOUR,
        "Dm+1n": D_TWO,
    }
    if key in aliases:
        return aliases[key]
    raise InvalidInput(f"unknown type {tag!r}; expected one of {', '.join(TYPES)}")


def check_rank(tag: str, m: int, n: int) -> None:
    ok = {
        A_EVEN_ODD: m >= 0 and n >= 1,
        A_ODD_ODD: m >= 1 and n >= 1 and (m, n) != (1, 1),
        A_FOUR: m >= 0 and n >= 0 and (m, n) != (0, 0),
        D_TWO: m >= 0 and n >= 1,
    }[tag]
    if not ok:
        raise BadRank(f"{tag} does not allow (m, n) = ({m}, {n})")


@dataclass(frozen=True, order=True)
class Root:
    dot: tuple
    k: int

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.dot, other.dot)), self.k + other.k)

    def __neg__(self) -> "Root":
        return Root(tuple(-a for a in self.dot), -self.k)

    def scaled(self, c: int) -> "Root":
        return Root(tuple(c * a for a in self.dot), c * self.k)

    def is_zero(self) -> bool:
        return self.k == 0 and not any(self.dot)

    def to_json(self) -> dict:
        return {"dot": list(self.dot), "k": self.k}


def dot_form(a: tuple, b: tuple, m: int) -> int:
    return sum(x * y for x, y in zip(a[:m], b[:m])) - sum(x * y for x, y in zip(a[m:], b[m:]))


def root_form(a: Root, b: Root, m: int) -> int:
    return dot_form(a.dot, b.dot, m)


def format_dot(dot: tuple, m: int) -> str:
    parts = []
    for i, c in enumerate(dot):
        if not c:
            continue
        name = f"eps{i + 1}" if i < m else f"delta{i - m + 1}"
        coef = "" if abs(c) == 1 else str(abs(c))
        parts.append(("-" if c < 0 else "+") + coef + name)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else (s or "0")


# ---------------------------------------------------------------------------
# families of dot vectors


def _unit(size: int, i: int, c: int = 1) -> tuple:
    v = [0] * size
    v[i] = c
    return tuple(v)


def _sum(*vs) -> tuple:
    return tuple(sum(x) for x in zip(*vs))


def _pm(vs: Iterable[tuple]) -> set:
    out = set()
    for v in vs:
        out.add(v)
        out.add(tuple(-x for x in v))
    return out


def families(m: int, n: int) -> dict[str, set]:
    size = m + n
    eps = [_unit(size, i) for i in range(m)]
    dl = [_unit(size, m + p) for p in range(n)]

    def pairs(vs, ws, distinct):
        return _pm(
            _sum(v, tuple(s * x for x in w))
            for a, v in enumerate(vs)
            for b, w in enumerate(ws)
            if not (distinct and a == b)
            for s in (1, -1)
        )

    return {
        "eps": _pm(eps),
        "delta": _pm(dl),
        "2eps": _pm(_sum(v, v) for v in eps),
        "2delta": _pm(_sum(v, v) for v in dl),
        "eps+-eps": pairs(eps, eps, True),
        "delta+-delta": pairs(dl, dl, True),
        "eps+-delta": pairs(eps, dl, False),
    }


def _every(k: int) -> bool:
    return True


def _even(k: int) -> bool:
    return k % 2 == 0


def _odd(k: int) -> bool:
    return k % 2 == 1


def _two_mod_four(k: int) -> bool:
    return k % 4 == 2


def _zero_mod_four(k: int) -> bool:
    return k % 4 == 0


# Table of the root systems: (families, condition on the delta coefficient)
ROOT_TABLE: dict[str, list[tuple[tuple[str, ...], Callable[[int], bool]]]] = {
    A_EVEN_ODD: [
        (("eps", "delta", "eps+-eps", "delta+-delta", "eps+-delta"), _every),
        (("2eps",), _odd),
        (("2delta",), _even),
    ],
    A_ODD_ODD: [
        (("eps+-eps", "delta+-delta", "eps+-delta"), _every),
        (("2eps",), _odd),
        (("2delta",), _even),
    ],
    A_FOUR: [
        (("eps", "delta"), _every),
        (("eps+-eps", "delta+-delta", "eps+-delta"), _even),
        (("2eps",), _two_mod_four),
        (("2delta",), _zero_mod_four),
    ],
    D_TWO: [
        (("eps", "delta"), _every),
        (("2delta", "eps+-eps", "delta+-delta", "eps+-delta"), _even),
    ],
}

# Real and nonsingular finite parts
REAL_TABLE = {
    A_EVEN_ODD: ("eps", "delta", "2eps", "2delta", "eps+-eps", "delta+-delta"),
    A_ODD_ODD: ("2eps", "2delta", "eps+-eps", "delta+-delta"),
    A_FOUR: ("eps", "delta", "2eps", "2delta", "eps+-eps", "delta+-delta"),
    D_TWO: ("eps", "delta", "2delta", "eps+-eps", "delta+-delta"),
}
NONSINGULAR_TABLE = {t: ("eps+-delta",) for t in TYPES}

# The even finite part (zero included)
EVEN_FINITE_TABLE = {
    A_EVEN_ODD: ("eps", "eps+-eps", "2delta", "delta+-delta"),
    A_ODD_ODD: ("eps+-eps", "2delta", "delta+-delta"),
    A_FOUR: ("eps", "eps+-eps", "2delta", "delta+-delta"),
    D_TWO: ("eps", "eps+-eps", "2delta", "delta+-delta"),
}


def simple_systems(tag: str, m: int, n: int) -> tuple[list[tuple], list[tuple]]:
    """The fixed bases of the even finite part and of the real finite part."""
    size = m + n
    e = lambda i: _unit(size, i - 1)  # noqa: E731
    d = lambda p: _unit(size, m + p - 1)  # noqa: E731
    neg = lambda v: tuple(-x for x in v)  # noqa: E731
    eps_chain = [_sum(e(i), neg(e(i + 1))) for i in range(1, m)]
    del_chain = [_sum(d(p), neg(d(p + 1))) for p in range(1, n)]
    del_even = del_chain + ([_sum(d(n), d(n))] if n else [])
    if tag == A_ODD_ODD:
        eps_even = eps_chain + ([_sum(e(m - 1), e(m))] if m >= 2 else [])
        eps_real = eps_chain + ([_sum(e(m), e(m))] if m else [])
        return eps_even + del_even, eps_real + del_even
    eps_part = eps_chain + ([e(m)] if m else [])
    del_real = del_chain + ([d(n)] if n else [])
    return eps_part + del_even, eps_part + del_real


# ---------------------------------------------------------------------------


@dataclass
class RootDatum:
    type_tag: str
    m: int
    n: int
    window: int
    p_star: int
    roots: set
    classification: dict = field(default_factory=dict)
    parity: dict = field(default_factory=dict)
    source: str = ""

    def form(self, a: Root, b: Root) -> int:
        return root_form(a, b, self.m)

    def classify(self) -> None:
        dots = {r.dot for r in self.roots}
        self.classification = {}
        for r in self.roots:
            if self.form(r, r) != 0:
                self.classification[r] = RE
            elif all(dot_form(r.dot, d, self.m) == 0 for d in dots):
                self.classification[r] = IM
            else:
                self.classification[r] = NS

    def of_class(self, cls: str) -> set:
        return {r for r, c in self.classification.items() if c == cls}

    def dot_roots(self) -> set:
        return {r.dot for r in self.roots if any(r.dot)}

    def interior(self, band: int) -> "RootDatum":
        keep = {r for r in self.roots if abs(r.k) <= self.window - band}
        out = RootDatum(self.type_tag, self.m, self.n, self.window - band, self.p_star, keep, source=self.source)
        out.classification = {r: self.classification[r] for r in keep if r in self.classification}
        out.parity = {r: self.parity[r] for r in keep if r in self.parity}
        return out

    def without(self, root: Root) -> "RootDatum":
        """Copy with one root removed (fault injection)."""
        out = RootDatum(
            self.type_tag, self.m, self.n, self.window, self.p_star, set(self.roots) - {root}, source=self.source
        )
        out.classify()
        return out

    def to_json(self) -> list:
        return [
            {"dot": list(r.dot), "k": r.k, "class": self.classification.get(r, "")}
            for r in sorted(self.roots, key=lambda r: (r.k, r.dot))
        ]


def table_root_datum(tag: str, m: int, n: int, window: int) -> RootDatum:
    tag = normalize_type(tag)
    check_rank(tag, m, n)
    fam = families(m, n)
    roots = {Root(tuple([0] * (m + n)), k) for k in range(-window, window + 1) if k}
    for names, cond in ROOT_TABLE[tag]:
        for name in names:
            for dot in fam[name]:
                roots.update(Root(dot, k) for k in range(-window, window + 1) if cond(k))
    datum = RootDatum(tag, m, n, window, 4 if tag == A_FOUR else 2, roots, source="table")
    datum.classify()
    return datum


@dataclass
class TableConsistency:
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def check_table_consistency(datum: RootDatum) -> TableConsistency:
    """Cross-check a root datum against the real/nonsingular, even-part and base tables."""
    rep = TableConsistency()
    tag, m, n = datum.type_tag, datum.m, datum.n
    fam = families(m, n)
    real = set().union(*(fam[k] for k in REAL_TABLE[tag]))
    ns = set().union(*(fam[k] for k in NONSINGULAR_TABLE[tag]))
    got_real = {r.dot for r in datum.of_class(RE)}
    got_ns = {r.dot for r in datum.of_class(NS)}
    if got_real != real:
        rep.problems.append(("real finite part", sorted(got_real ^ real)))
    if got_ns != ns:
        rep.problems.append(("nonsingular finite part", sorted(got_ns ^ ns)))
    if any(any(r.dot) for r in datum.of_class(IM)):
        rep.problems.append(("imaginary roots with finite part", sorted(datum.of_class(IM))))
    # closure properties
    for r in datum.roots:
        if -r not in datum.roots:
            rep.problems.append(("not symmetric", r))
        s = Root(r.dot, r.k + datum.p_star)
        if abs(s.k) <= datum.window and not s.is_zero() and s not in datum.roots:
            rep.problems.append(("not p_star periodic", r))
    # even finite part
    derived = derived_even_finite(datum)
    tabled = even_finite_part(tag, m, n)
    if derived != tabled:
        rep.problems.append(("even finite part", sorted(derived ^ tabled)))
    base_even, base_real = simple_systems(tag, m, n)
    if not is_base(base_even, tabled - {tuple([0] * (m + n))}):
        rep.problems.append(("base of the even finite part", base_even))
    if not is_base(base_real, real):
        rep.problems.append(("base of the real finite part", base_real))
    return rep


def even_finite_part(tag: str, m: int, n: int) -> set:
    fam = families(m, n)
    out = set().union(*(fam[k] for k in EVEN_FINITE_TABLE[tag]))
    out.add(tuple([0] * (m + n)))
    return out


def derived_even_finite(datum: RootDatum) -> set:
    """{a : a real at delta-degree 0 and 2a not a root at delta-degree 0} together with 0."""
    zero = tuple([0] * (datum.m + datum.n))
    out = {zero}
    for r in datum.of_class(RE):
        if r.k != 0:
            continue
        if Root(tuple(2 * x for x in r.dot), 0) not in datum.roots:
            out.add(r.dot)
    return out


def is_base(base: list[tuple], roots: set) -> bool:
    """Linearly independent, spans, and every root has coefficients of one sign."""
    if not roots:
        return not base
    cols = list(range(len(base)))
    for r in roots:
        rows = [{j: Fraction(base[j][i]) for j in cols if base[j][i]} for i in range(len(r))]
        coeffs = solve(rows, [Fraction(x) for x in r], cols)
        if coeffs is None:
            return False
        vals = [coeffs.get(j, 0) for j in cols]
        vals = [v.re if hasattr(v, "re") else v for v in vals]
        if any(Fraction(v).denominator != 1 for v in vals):
            return False
        if not (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
            return False
    # independence: rank equals the number of base vectors
    return rank([{i: Fraction(v[i]) for i in range(len(v)) if v[i]} for v in base]) == len(base)


def positive_even_roots(tag: str, m: int, n: int) -> list[tuple]:
    """Nonzero even finite roots that are nonnegative combinations of the even base."""
    base, _ = simple_systems(tag, m, n)
    out = []
    cols = list(range(len(base)))
    for r in sorted(even_finite_part(tag, m, n)):
        if not any(r):
            continue
        rows = [{j: Fraction(base[j][i]) for j in cols if base[j][i]} for i in range(len(r))]
        coeffs = solve(rows, [Fraction(x) for x in r], cols)
        vals = [coeffs.get(j, 0) for j in cols]
        if all((v.re if hasattr(v, "re") else v) >= 0 for v in vals):
            out.append(r)
    return out


def compare_root_data(computed: RootDatum, tabled: RootDatum, band: int = 0) -> list:
    """Differences between two root data on the interior (roots and classes)."""
    a = computed.interior(band)
    b = tabled.interior(band)
    diffs = []
    for r in sorted(a.roots - b.roots):
        diffs.append(("only computed", r))
    for r in sorted(b.roots - a.roots):
        diffs.append(("only tabulated", r))
    for r in sorted(a.roots & b.roots):
        if a.classification.get(r) != b.classification.get(r):
            diffs.append(("class", r, a.classification.get(r), b.classification.get(r)))
    return diffs
