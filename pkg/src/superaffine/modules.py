"""Graded modules over windowed superalgebras.

A module is a basis (label, parity, degree) plus an action ``act(x, v)`` for
algebra labels ``x`` and module basis labels ``v``.  The action is either a
sparse table or a rule; rule results are cached.  Products whose degree leaves
the module window, or that use an algebra element outside the window the
module knows about, are ``OUT_OF_WINDOW``.
"""

from __future__ import annotations

import json
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidInput, PreconditionViolated, UnknownLabel
from .exact import ONE, EchelonBasis, label_sort_key, vaxpy
from .superalgebra import (
    OUT_OF_WINDOW,
    SubspaceResult,
    SuperAlgebraTable,
    Window,
    label_str,
    parse_label,
    vec_from_json,
    vec_to_json,
)


class GradedModule:
    """A (possibly ungraded) module with an explicit finite basis."""

    def __init__(
        self,
        basis: Sequence[tuple],
        action: Callable | Mapping,
        algebra,
        window: Window | None = None,
        graded: bool = True,
        name: str = "",
        algebra_window: Window | None = None,
    ):
        """``algebra`` only needs ``parity(label)`` and ``degree(label)``."""
        self.name = name
        self.algebra = algebra
        self.graded = graded
        self.window = window
        self.algebra_window = algebra_window
        self.labels = sorted((b[0] for b in basis), key=label_sort_key)
        self._parity: dict = {}
        self._degree: dict = {}
        for label, parity, degree in basis:
            if label in self._parity:
                raise InvalidInput(f"duplicate module label {label_str(label)}")
            self._parity[label] = parity
            self._degree[label] = degree if graded else 0
            if graded and window is not None and degree not in window:
                raise InvalidInput(f"{label_str(label)} lies outside the module window")
        if callable(action):
            self._rule = action
            self._table = None
        else:
            self._rule = None
            self._table = {x: {v: dict(w) for v, w in cols.items()} for x, cols in action.items()}
        self._cache: dict = {}
        self._by_degree: dict = {}
        for v in self.labels:
            self._by_degree.setdefault(self._degree[v], []).append(v)

    # queries ---------------------------------------------------------------
    def __contains__(self, label) -> bool:
        return label in self._parity

    def __len__(self) -> int:
        return len(self.labels)

    def parity(self, v) -> int:
        try:
            return self._parity[v]
        except KeyError:
            raise UnknownLabel(label_str(v)) from None

    def degree(self, v) -> int:
        try:
            return self._degree[v]
        except KeyError:
            raise UnknownLabel(label_str(v)) from None

    def degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def basis_of_degree(self, k: int) -> list:
        return list(self._by_degree.get(k, []))

    def dim_of_degree(self, k: int) -> int:
        return len(self._by_degree.get(k, ()))

    def max_homogeneous_dim(self) -> int:
        return max((len(v) for v in self._by_degree.values()), default=0)

    def vector_degree(self, vec: Mapping) -> int:
        ds = {self.degree(k) for k in vec}
        if len(ds) != 1:
            raise InvalidInput("vector is not homogeneous")
        return ds.pop()

    # action ------------------------------------------------------------------
    def act_basis(self, x, v):
        key = (x, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if v not in self._parity:
            raise UnknownLabel(label_str(v))
        if self.algebra_window is not None and self.algebra.degree(x) not in self.algebra_window:
            return OUT_OF_WINDOW
        if self.graded and self.window is not None:
            if self._degree[v] + self.algebra.degree(x) not in self.window:
                return OUT_OF_WINDOW
        if self._rule is not None:
            out = self._rule(x, v)
            if out is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            out = {k: c for k, c in out.items() if c}
            for k in out:
                if k not in self._parity:
                    raise UnknownLabel(f"action produced {label_str(k)} outside the basis")
        else:
            out = self._table.get(x, {}).get(v, {})
        self._cache[key] = out
        return out

    def act(self, x, vec: Mapping):
        """Action of the algebra basis element ``x`` on a vector."""
        out: dict = {}
        for v, c in vec.items():
            w = self.act_basis(x, v)
            if w is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            if w:
                vaxpy(out, c, w)
        return out

    def act_vec(self, xvec: Mapping, vec: Mapping):
        """Action of a general algebra vector."""
        out: dict = {}
        for x, a in xvec.items():
            w = self.act(x, vec)
            if w is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            vaxpy(out, a, w)
        return out

    def act_word(self, word: Sequence, vec: Mapping):
        """Apply ``word[0](word[1](...(vec)))``."""
        out = dict(vec)
        for x in reversed(word):
            out = self.act(x, out)
            if out is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
        return out

    def operator(self, x, labels: Sequence | None = None) -> dict:
        """Sparse matrix of ``x``: {(row, col): scalar} over ``labels``."""
        labels = self.labels if labels is None else labels
        mat = {}
        for v in labels:
            w = self.act_basis(x, v)
            if w is OUT_OF_WINDOW:
                raise PreconditionViolated(f"{label_str(x)} leaves the window on {label_str(v)}")
            for k, c in w.items():
                mat[(k, v)] = c
        return mat

    # derived modules -------------------------------------------------------
    def materialize(self, xs: Iterable) -> "GradedModule":
        """Table-backed copy restricted to the algebra labels ``xs``."""
        xs = list(xs)
        table: dict = {}
        for x in xs:
            cols = {}
            for v in self.labels:
                w = self.act_basis(x, v)
                if w is OUT_OF_WINDOW:
                    continue
                if w:
                    cols[v] = dict(w)
            if cols:
                table[x] = cols
        return GradedModule(
            [(v, self._parity[v], self._degree[v]) for v in self.labels],
            table,
            self.algebra,
            self.window,
            self.graded,
            self.name,
            self.algebra_window,
        )

    def with_entry(self, x, v, new_value: Mapping) -> "GradedModule":
        """Copy with one action column replaced (used for fault injection)."""
        base = self

        def rule(y, u):
            if (y, u) == (x, v):
                return dict(new_value)
            return base.act_basis(y, u)

        return GradedModule(
            [(u, self._parity[u], self._degree[u]) for u in self.labels],
            rule,
            self.algebra,
            self.window,
            self.graded,
            self.name + "*",
            self.algebra_window,
        )

    # serialization ---------------------------------------------------------
    def to_json(self, xs: Iterable) -> str:
        xs = sorted(xs, key=label_sort_key)
        actions = []
        for x in xs:
            for v in self.labels:
                w = self.act_basis(x, v)
                if w is OUT_OF_WINDOW or not w:
                    continue
                actions.append([label_str(x), label_str(v), vec_to_json(w)])
        doc = {
            "name": self.name,
            "graded": self.graded,
            "window": None if self.window is None else [self.window.lo, self.window.hi],
            "algebra_window": None
            if self.algebra_window is None
            else [self.algebra_window.lo, self.algebra_window.hi],
            "basis": [
                {"label": label_str(v), "parity": self._parity[v], "degree": self._degree[v]}
                for v in self.labels
            ],
            "actions": actions,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, algebra) -> "GradedModule":
        doc = json.loads(text)
        basis = [(parse_label(b["label"]), b["parity"], b["degree"]) for b in doc["basis"]]
        table: dict = {}
        for x, v, w in doc["actions"]:
            table.setdefault(parse_label(x), {})[parse_label(v)] = vec_from_json(w)
        window = Window(*doc["window"]) if doc.get("window") else None
        aw = Window(*doc["algebra_window"]) if doc.get("algebra_window") else None
        return cls(basis, table, algebra, window, doc.get("graded", True), doc.get("name", ""), aw)


# ---------------------------------------------------------------------------
# validation


def validate_module(
    module: GradedModule,
    alg: SuperAlgebraTable,
    vectors: Iterable | None = None,
    xs: Iterable | None = None,
) -> list[str]:
    """Check degree/parity shifts and the super module axiom on safe triples.

    ``vectors`` restricts the module basis vectors tested and ``xs`` the
    algebra labels (defaults: everything).  Returns a list of problems.
    """
    vectors = module.labels if vectors is None else list(vectors)
    xs = alg.labels if xs is None else list(xs)
    problems = []
    for x in xs:
        px, dx = alg.parity(x), alg.degree(x)
        for v in vectors:
            w = module.act_basis(x, v)
            if w is OUT_OF_WINDOW:
                continue
            for k in w:
                if module.parity(k) != (px + module.parity(v)) % 2:
                    problems.append(f"{label_str(x)}.{label_str(v)} breaks parity")
                if module.graded and module.degree(k) != dx + module.degree(v):
                    problems.append(f"{label_str(x)}.{label_str(v)} breaks degree")
    for x in xs:
        for y in xs:
            xy = alg.bracket_basis(x, y)
            if xy is OUT_OF_WINDOW:
                continue
            sign = -1 if alg.parity(x) and alg.parity(y) else 1
            for v in vectors:
                vec = {v: ONE}
                lhs = module.act_vec(xy, vec)
                if lhs is OUT_OF_WINDOW:
                    continue
                yv = module.act(y, vec)
                xv = module.act(x, vec)
                if yv is OUT_OF_WINDOW or xv is OUT_OF_WINDOW:
                    continue
                a = module.act(x, yv)
                b = module.act(y, xv)
                if a is OUT_OF_WINDOW or b is OUT_OF_WINDOW:
                    continue
                rhs = dict(a)
                vaxpy(rhs, -sign, b)
                if rhs != lhs:
                    problems.append(
                        f"axiom fails for ({label_str(x)}, {label_str(y)}) on {label_str(v)}"
                    )
    return problems


def generated_submodule(
    module: GradedModule, vectors: Iterable[Mapping], xs: Iterable
) -> SubspaceResult:
    """Windowed submodule generated by ``vectors`` under the labels ``xs``."""
    xs = list(xs)
    span = EchelonBasis()
    queue = []
    for v in vectors:
        if span.add(v):
            queue.append(dict(v))
    truncated = False
    while queue:
        v = queue.pop()
        for x in xs:
            w = module.act(x, v)
            if w is OUT_OF_WINDOW:
                # fall back to the in-window part of a split action
                w, dropped = _act_split(module, x, v)
                truncated = truncated or dropped
            if w and span.add(w):
                queue.append(w)
    return SubspaceResult(span.canonical_basis(), truncated)


def _act_split(module: GradedModule, x, vec: Mapping) -> tuple[dict, bool]:
    out: dict = {}
    dropped = False
    for v, c in vec.items():
        w = module.act_basis(x, v)
        if w is OUT_OF_WINDOW:
            dropped = True
        elif w:
            vaxpy(out, c, w)
    return out, dropped


def degree_dims(module: GradedModule, basis: Iterable[Mapping]) -> dict[int, int]:
    """Per-degree dimensions of a subspace spanned by homogeneous vectors."""
    spans: dict[int, EchelonBasis] = {}
    for v in basis:
        parts: dict[int, dict] = {}
        for k, c in v.items():
            parts.setdefault(module.degree(k), {})[k] = c
        for d, p in parts.items():
            spans.setdefault(d, EchelonBasis()).add(p)
    return {d: len(s) for d, s in sorted(spans.items())}


def contains_band(module: GradedModule, sub_basis: Iterable[Mapping], band: Window) -> bool:
    """Does the subspace contain every module basis vector of degree in ``band``?"""
    span = EchelonBasis()
    for v in sub_basis:
        span.add(v)
    return all(
        span.contains({v: ONE}) for v in module.labels if module.degree(v) in band
    )
