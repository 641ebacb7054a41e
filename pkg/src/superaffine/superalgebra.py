"""Windowed Lie superalgebras given by a finite basis and a bracket table.

Basis labels are tuples such as ``("t", 5)`` or ``("L", 3, 0)``; their text
form joins the parts with ``@`` (``"t@5"``).  A bracket whose degree leaves
the window is the sentinel ``OUT_OF_WINDOW`` and never a silent zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidInput, UnknownLabel
from .exact import ONE, ZERO, EchelonBasis, GScalar, g, kernel_basis, label_sort_key, vaxpy


class _OutOfWindow:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "OUT_OF_WINDOW"

    def __bool__(self) -> bool:
        raise TypeError("OUT_OF_WINDOW has no truth value; compare with `is`")


OUT_OF_WINDOW = _OutOfWindow()


def label_str(label) -> str:
    if isinstance(label, tuple):
        return "@".join(str(x) for x in label)
    return str(label)


def parse_label(text: str) -> tuple:
    parts = text.split("@")
    out = []
    for p in parts:
        if p.lstrip("-").isdigit():
            out.append(int(p))
        elif p:
            out.append(p)
        else:
            raise InvalidInput(f"bad label {text!r}")
    return tuple(out)


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if not (self.lo <= 0 <= self.hi):
            raise InvalidInput(f"window [{self.lo}, {self.hi}] must contain 0")

    @classmethod
    def radius(cls, r: int) -> "Window":
        return cls(-r, r)

    def __contains__(self, k: int) -> bool:
        return self.lo <= k <= self.hi

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def shrink(self, band: int) -> "Window":
        """The interior window at distance ``band`` from the boundary."""
        return Window(min(0, self.lo + band), max(0, self.hi - band))


@dataclass
class SubspaceResult:
    """A computed subspace plus truncation bookkeeping."""

    basis: list[dict]
    truncated: bool = False
    boundary_band: int = 0
    notes: list[str] = field(default_factory=list)


class SuperAlgebraTable:
    """Finite basis with parity and degree, and a sparse bracket table."""

    def __init__(
        self,
        basis: Sequence[tuple],
        bracket: Mapping[tuple, object],
        window: Window,
        name: str = "",
    ):
        self.name = name
        self.window = window
        self.labels: list = sorted((b[0] for b in basis), key=label_sort_key)
        self._parity: dict = {}
        self._degree: dict = {}
        for label, parity, degree in basis:
            if label in self._parity:
                raise InvalidInput(f"duplicate label {label_str(label)}")
            if parity not in (0, 1):
                raise InvalidInput(f"bad parity for {label_str(label)}")
            self._parity[label] = parity
            self._degree[label] = degree
        self._table: dict = {}
        for (a, b), v in bracket.items():
            if v is OUT_OF_WINDOW:
                self._table[(a, b)] = OUT_OF_WINDOW
            elif v:
                self._table[(a, b)] = {k: g(x) for k, x in v.items() if x}

    @classmethod
    def from_rule(
        cls,
        basis: Sequence[tuple],
        rule: Callable[[tuple, tuple], Mapping],
        window: Window,
        name: str = "",
    ) -> "SuperAlgebraTable":
        """Tabulate ``rule`` on all ordered pairs, marking out-of-window degrees."""
        degree = {b[0]: b[2] for b in basis}
        table: dict = {}
        for a in degree:
            for b in degree:
                if degree[a] + degree[b] not in window:
                    table[(a, b)] = OUT_OF_WINDOW
                    continue
                v = rule(a, b)
                if v:
                    table[(a, b)] = v
        return cls(basis, table, window, name)

    # basic queries -------------------------------------------------------
    def __contains__(self, label) -> bool:
        return label in self._parity

    def parity(self, label) -> int:
        try:
            return self._parity[label]
        except KeyError:
            raise UnknownLabel(label_str(label)) from None

    def degree(self, label) -> int:
        try:
            return self._degree[label]
        except KeyError:
            raise UnknownLabel(label_str(label)) from None

    def labels_of_degree(self, k: int) -> list:
        return [x for x in self.labels if self._degree[x] == k]

    def bracket_basis(self, a, b):
        """Bracket of two basis labels (a dict, possibly empty, or OUT_OF_WINDOW)."""
        if a not in self._parity:
            raise UnknownLabel(label_str(a))
        if b not in self._parity:
            raise UnknownLabel(label_str(b))
        return self._table.get((a, b), {})

    def check_vector(self, v: Mapping) -> None:
        for k in v:
            if k not in self._parity:
                raise UnknownLabel(label_str(k))

    def is_homogeneous(self, v: Mapping) -> bool:
        return len({(self._parity[k], self._degree[k]) for k in v}) <= 1

    def vector_parity(self, v: Mapping) -> int:
        ps = {self._parity[k] for k in v}
        if len(ps) > 1:
            raise InvalidInput("vector is not parity-homogeneous")
        return ps.pop() if ps else 0

    def stored_pairs(self) -> Iterable[tuple]:
        return self._table.items()

    # structural validation ----------------------------------------------
    def validate(self) -> list[str]:
        """Super-skew symmetry, degree and parity additivity of stored brackets."""
        problems = []
        for (a, b), v in self._table.items():
            if v is OUT_OF_WINDOW:
                if self._degree[a] + self._degree[b] in self.window:
                    problems.append(f"[{label_str(a)},{label_str(b)}] wrongly out of window")
                continue
            deg = self._degree[a] + self._degree[b]
            par = (self._parity[a] + self._parity[b]) % 2
            for k in v:
                if k not in self._parity:
                    problems.append(f"[{label_str(a)},{label_str(b)}] has unknown {label_str(k)}")
                    continue
                if self._degree[k] != deg and self._degree[k] is not None:
                    problems.append(f"[{label_str(a)},{label_str(b)}] breaks degree")
                if self._parity[k] != par:
                    problems.append(f"[{label_str(a)},{label_str(b)}] breaks parity")
            other = self._table.get((b, a), {})
            if other is OUT_OF_WINDOW:
                problems.append(f"[{label_str(b)},{label_str(a)}] inconsistent window")
                continue
            sign = 1 if self._parity[a] * self._parity[b] else -1
            expect = {k: sign * x for k, x in v.items()}
            if expect != other:
                problems.append(f"super-skew fails for ({label_str(a)}, {label_str(b)})")
        for a in self.labels:
            for b in self.labels:
                if self._degree[a] + self._degree[b] not in self.window:
                    if self._table.get((a, b)) is not OUT_OF_WINDOW:
                        problems.append(f"[{label_str(a)},{label_str(b)}] should be out of window")
        return problems

    # serialization --------------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "window": [self.window.lo, self.window.hi],
            "basis": [
                {"label": label_str(x), "parity": self._parity[x], "degree": self._degree[x]}
                for x in self.labels
            ],
            "bracket": [
                [label_str(a), label_str(b), _vec_json(v)]
                for (a, b), v in sorted(
                    self._table.items(),
                    key=lambda kv: (label_sort_key(kv[0][0]), label_sort_key(kv[0][1])),
                )
                if v is not OUT_OF_WINDOW
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SuperAlgebraTable":
        doc = json.loads(text)
        window = Window(*doc["window"])
        basis = [(parse_label(b["label"]), b["parity"], b["degree"]) for b in doc["basis"]]
        degree = {b[0]: b[2] for b in basis}
        table: dict = {}
        for a in degree:
            for b in degree:
                if degree[a] + degree[b] not in window:
                    table[(a, b)] = OUT_OF_WINDOW
        for a, b, v in doc["bracket"]:
            table[(parse_label(a), parse_label(b))] = _vec_from_json(v)
        return cls(basis, table, window, doc.get("name", ""))


def _vec_json(v: Mapping) -> list:
    return [[label_str(k), str(v[k])] for k in sorted(v, key=label_sort_key)]


def _vec_from_json(items: list) -> dict:
    return {parse_label(k): GScalar.parse(x) for k, x in items}


def vec_to_json(v: Mapping) -> list:
    return _vec_json(v)


def vec_from_json(items: list) -> dict:
    return _vec_from_json(items)


# ---------------------------------------------------------------------------
# operations


def bracket_eval(alg: SuperAlgebraTable, x: Mapping, y: Mapping):
    """Bilinear extension of the bracket table."""
    alg.check_vector(x)
    alg.check_vector(y)
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            v = alg.bracket_basis(a, b)
            if v is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            if v:
                vaxpy(out, ca * cb, v)
    return out


def _sign(alg: SuperAlgebraTable, a, b) -> int:
    return -1 if alg.parity(a) and alg.parity(b) else 1


def jacobi_residual(alg: SuperAlgebraTable, x, y, z):
    """[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]] for basis labels, or OUT_OF_WINDOW."""
    X, Y, Z = {x: ONE}, {y: ONE}, {z: ONE}
    yz = bracket_eval(alg, Y, Z)
    xy = bracket_eval(alg, X, Y)
    xz = bracket_eval(alg, X, Z)
    if yz is OUT_OF_WINDOW or xy is OUT_OF_WINDOW or xz is OUT_OF_WINDOW:
        return OUT_OF_WINDOW
    t1 = bracket_eval(alg, X, yz)
    t2 = bracket_eval(alg, xy, Z)
    t3 = bracket_eval(alg, Y, xz)
    if t1 is OUT_OF_WINDOW or t2 is OUT_OF_WINDOW or t3 is OUT_OF_WINDOW:
        return OUT_OF_WINDOW
    out = dict(t1)
    vaxpy(out, -ONE, t2)
    vaxpy(out, -_sign(alg, x, y), t3)
    return out


def check_super_jacobi(
    alg: SuperAlgebraTable, triples: Iterable[tuple] | None = None
) -> list[tuple[tuple, dict]]:
    """Failing safe triples as ``((x, y, z), residual)``; empty means the identity holds."""
    if triples is None:
        triples = _safe_triples(alg)
    failures = []
    for x, y, z in triples:
        r = jacobi_residual(alg, x, y, z)
        if r is OUT_OF_WINDOW or not r:
            continue
        failures.append(((x, y, z), r))
    return failures


def _safe_triples(alg: SuperAlgebraTable):
    labels = alg.labels
    w = alg.window
    deg = alg.degree
    # only pairs with nonzero or out-of-window brackets can contribute
    for x in labels:
        dx = deg(x)
        for y in labels:
            dy = deg(y)
            if dx + dy not in w:
                continue
            for z in labels:
                dz = deg(z)
                if dy + dz in w and dx + dz in w and dx + dy + dz in w:
                    yield (x, y, z)


def count_safe_triples(alg: SuperAlgebraTable) -> int:
    return sum(1 for _ in _safe_triples(alg))


def subalgebra_generated(alg: SuperAlgebraTable, gens: Iterable[Mapping]) -> SubspaceResult:
    """Smallest in-window subspace containing ``gens`` and closed under brackets."""
    span = EchelonBasis()
    queue: list[dict] = []
    for v in gens:
        alg.check_vector(v)
        if span.add(v):
            queue.append(dict(v))
    members: list[dict] = []
    truncated = False
    while queue:
        v = queue.pop(0)
        members.append(v)
        for u in list(members):
            for a, b in ((u, v), (v, u)):
                w = bracket_eval_split(alg, a, b)
                if w[1]:
                    truncated = True
                if w[0] and span.add(w[0]):
                    queue.append(w[0])
    return SubspaceResult(span.canonical_basis(), truncated)


def bracket_eval_split(alg: SuperAlgebraTable, x: Mapping, y: Mapping) -> tuple[dict, bool]:
    """In-window part of [x, y] plus a flag telling whether any part was dropped."""
    out: dict = {}
    dropped = False
    for a, ca in x.items():
        for b, cb in y.items():
            v = alg.bracket_basis(a, b)
            if v is OUT_OF_WINDOW:
                dropped = True
            elif v:
                vaxpy(out, ca * cb, v)
    return out, dropped


def centralizer(alg: SuperAlgebraTable, S: Iterable[Mapping]) -> SubspaceResult:
    """Elements whose in-window brackets with every element of S vanish."""
    S = [dict(s) for s in S]
    for s in S:
        alg.check_vector(s)
    band = max((abs(alg.degree(k)) for s in S for k in s), default=0)
    rows: dict = {}
    # the linear map v -> ([v, s])_s, one row per (s index, output label)
    for j, s in enumerate(S):
        for a in alg.labels:
            for b, cb in s.items():
                v = alg.bracket_basis(a, b)
                if v is OUT_OF_WINDOW or not v:
                    continue
                for k, x in v.items():
                    row = rows.setdefault((j, k), {})
                    val = row.get(a, ZERO) + cb * x
                    if val:
                        row[a] = val
                    else:
                        row.pop(a)
    basis = kernel_basis(list(rows.values()), alg.labels)
    notes = [f"elements within {band} of the window edge may be spuriously central"]
    return SubspaceResult(basis, False, band, notes)


def interior_part(alg: SuperAlgebraTable, basis: Iterable[Mapping], band: int) -> list[dict]:
    """Vectors of ``basis`` supported strictly inside the window minus ``band``."""
    inner = alg.window.shrink(band)
    return [v for v in basis if all(alg.degree(k) in inner for k in v)]
