"""Exact Gaussian-rational scalars and sparse exact linear algebra.

Everything here is exact: scalars are pairs of ``Fraction`` and every
elimination uses deterministic pivoting (first nonzero column, smallest row
index), so derived bases are reproducible.
"""

from __future__ import annotations

import math
import re as _re
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InvalidInput

Label = Hashable


class GScalar:
    """An element a + b*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction = 0):
        if isinstance(re, str):
            parsed = GScalar.parse(re)
            self.re, self.im = parsed.re, parsed.im + Fraction(im)
            return
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _make(re: Fraction, im: Fraction) -> "GScalar":
        out = object.__new__(GScalar)
        out.re = re
        out.im = im
        return out

    @staticmethod
    def coerce(x) -> "GScalar":
        if type(x) is GScalar:
            return x
        if isinstance(x, (int, Fraction)):
            return GScalar._make(Fraction(x), Fraction(0))
        if isinstance(x, str):
            return GScalar.parse(x)
        if isinstance(x, complex):
            raise InvalidInput("floating complex numbers are not exact")
        raise InvalidInput(f"cannot interpret {x!r} as a Gaussian rational")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        return GScalar._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        return GScalar._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        return GScalar._make(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        if not o.im and not self.im:
            return GScalar._make(self.re * o.re, Fraction(0))
        return GScalar._make(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GScalar._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GScalar":
        return GScalar._make(self.re, -self.im)

    def norm(self) -> Fraction:
        """The field norm a^2 + b^2."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GScalar":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GScalar._make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero")
            return GScalar._make(self.re / o.re, self.im / o.re)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_g(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = _as_g(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = f"{self.im}*i"
        if not self.re:
            return im
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def __repr__(self) -> str:
        return f"GScalar('{self}')"

    _TOKEN = _re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*i)?")

    @staticmethod
    def parse(text: str) -> "GScalar":
        """Parse ``"a/b+c/d*i"`` style text (also ``"i"``, ``"-1/2*i"``, ``"3"``)."""
        s = text.replace(" ", "")
        if not s:
            raise InvalidInput("empty scalar")
        re_part = Fraction(0)
        im_part = Fraction(0)
        pos = 0
        seen = False
        while pos < len(s):
            m = GScalar._TOKEN.match(s, pos)
            if m is None or m.end() == pos:
                raise InvalidInput(f"bad scalar {text!r}")
            sign, num, imag = m.groups()
            if num is None and imag is None:
                raise InvalidInput(f"bad scalar {text!r}")
            if seen and not sign:
                raise InvalidInput(f"bad scalar {text!r}")
            value = Fraction(num) if num is not None else Fraction(1)
            if sign == "-":
                value = -value
            if imag:
                im_part += value
            else:
                re_part += value
            seen = True
            pos = m.end()
        return GScalar._make(re_part, im_part)


def _as_g(x) -> GScalar | None:
    if type(x) is GScalar:
        return x
    if isinstance(x, (int, Fraction)):
        return GScalar._make(Fraction(x), Fraction(0))
    return None


ZERO = GScalar(0)
ONE = GScalar(1)
I_UNIT = GScalar(0, 1)


def g(x) -> GScalar:
    """Shorthand coercion to GScalar."""
    return GScalar.coerce(x)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def gsqrt(z) -> GScalar | None:
    """A square root of ``z`` inside Q(i), or None if there is none."""
    z = g(z)
    if not z:
        return ZERO
    r = _rational_sqrt(z.norm())
    if r is None:
        return None
    x = _rational_sqrt((z.re + r) / 2)
    y = _rational_sqrt((r - z.re) / 2)
    if x is None or y is None:
        return None
    if z.im < 0:
        y = -y
    root = GScalar._make(x, y)
    return root if root * root == z else None


# ---------------------------------------------------------------------------
# sparse vectors: plain dicts label -> GScalar with no stored zeros


SparseVector = dict


def vclean(v: Mapping) -> dict:
    return {k: g(c) for k, c in v.items() if c}


def vadd(u: Mapping, v: Mapping) -> dict:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, ZERO) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vsub(u: Mapping, v: Mapping) -> dict:
    return vaxpy(dict(u), -ONE, v)


def vscale(c, v: Mapping) -> dict:
    c = g(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vaxpy(acc: dict, c, v: Mapping) -> dict:
    """In place ``acc += c * v``; returns ``acc``."""
    c = g(c)
    if not c:
        return acc
    for k, x in v.items():
        s = acc.get(k, ZERO) + c * x
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def vdot_pairs(u: Mapping, v: Mapping, pairing: Callable[[Label, Label], GScalar]) -> GScalar:
    total = ZERO
    for a, x in u.items():
        for b, y in v.items():
            p = pairing(a, b)
            if p:
                total = total + x * y * p
    return total


def vformat(v: Mapping, name: Callable[[Label], str] = str) -> str:
    if not v:
        return "0"
    return " + ".join(f"({v[k]}){name(k)}" for k in sorted(v, key=_label_key))


def _label_key(label):
    return label_sort_key(label)


def label_sort_key(label):
    """Total order on structured labels (tuples mixing str and int)."""
    if isinstance(label, tuple):
        return tuple((0, x) if isinstance(x, int) else (1, str(x)) for x in label)
    if isinstance(label, int):
        return ((0, label),)
    return ((1, str(label)),)


# ---------------------------------------------------------------------------
# elimination


def _as_rows(matrix) -> tuple[list[dict], list]:
    """Normalize a dense (list of lists) or sparse (list of dicts) matrix."""
    rows = list(matrix)
    if not rows:
        return [], []
    if isinstance(rows[0], Mapping):
        cols = sorted({k for r in rows for k in r}, key=label_sort_key)
        return [vclean(r) for r in rows], cols
    ncols = len(rows[0])
    out = []
    for r in rows:
        if len(r) != ncols:
            raise InvalidInput("ragged matrix")
        out.append({j: g(x) for j, x in enumerate(r) if x})
    return out, list(range(ncols))


def rref(rows: Sequence[Mapping], columns: Sequence[Label]) -> tuple[list[dict], list]:
    """Reduced row echelon form.

    Columns are scanned in the given order; for each column the pivot is the
    first remaining row (by index) with a nonzero entry.  Returns the nonzero
    reduced rows and their pivot columns.
    """
    work = [dict(r) for r in rows]
    pivots: list = []
    reduced: list[dict] = []
    for col in columns:
        idx = next((i for i, r in enumerate(work) if r.get(col)), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = prow[col].inverse()
        prow = {k: inv * x for k, x in prow.items()}
        for r in work:
            c = r.get(col)
            if c:
                vaxpy(r, -c, prow)
        for r in reduced:
            c = r.get(col)
            if c:
                vaxpy(r, -c, prow)
        reduced.append(prow)
        pivots.append(col)
        if not work:
            break
    return reduced, pivots


def kernel_basis(matrix, columns: Sequence[Label] | None = None) -> list[dict]:
    """Basis of the null space, one vector per free column, in column order.

    ``matrix`` is a list of dense rows or a list of sparse rows (dicts).  For
    sparse rows, ``columns`` gives the full ordered column set (columns absent
    from every row are free).
    """
    rows, cols = _as_rows(matrix)
    if columns is not None:
        cols = list(columns)
    elif not rows and isinstance(matrix, Sequence) and len(matrix) == 0:
        cols = []
    reduced, pivots = rref(rows, cols)
    pivot_set = set(pivots)
    basis = []
    for free in cols:
        if free in pivot_set:
            continue
        v = {free: ONE}
        for r, p in zip(reduced, pivots):
            c = r.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def dense_kernel_basis(matrix: Sequence[Sequence], ncols: int | None = None) -> list[dict]:
    """Kernel of a dense matrix that may have zero rows (``ncols`` then needed)."""
    if ncols is None:
        if not matrix:
            raise InvalidInput("column count unknown for an empty matrix")
        ncols = len(matrix[0])
    rows = [{j: g(x) for j, x in enumerate(r) if x} for r in matrix]
    return kernel_basis(rows, list(range(ncols)))


def rank(matrix, columns: Sequence[Label] | None = None) -> int:
    rows, cols = _as_rows(matrix)
    if columns is not None:
        cols = list(columns)
    return len(rref(rows, cols)[1])


def solve(rows: Sequence[Mapping], rhs: Sequence, columns: Sequence[Label]) -> dict | None:
    """A solution x of ``row_i . x = rhs_i`` with free variables zero, or None."""
    aug = "__rhs__"
    work = []
    for r, b in zip(rows, rhs):
        row = vclean(r)
        b = g(b)
        if b:
            row[aug] = b
        work.append(row)
    reduced, pivots = rref(work, list(columns) + [aug])
    if aug in pivots:
        return None
    return {p: r[aug] for r, p in zip(reduced, pivots) if r.get(aug)}


def inverse(matrix: Sequence[Sequence]) -> list[list[GScalar]]:
    """Inverse of a dense square matrix (raises on singular input)."""
    n = len(matrix)
    rows = []
    for i, r in enumerate(matrix):
        if len(r) != n:
            raise InvalidInput("matrix is not square")
        row = {j: g(x) for j, x in enumerate(r) if x}
        row[("inv", i)] = ONE
        rows.append(row)
    cols = list(range(n)) + [("inv", i) for i in range(n)]
    reduced, pivots = rref(rows, cols)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [[r.get(("inv", j), ZERO) for j in range(n)] for r in reduced[:n]]


class EchelonBasis:
    """Incrementally grown basis of a subspace, for membership and span tests."""

    def __init__(self, order: Callable[[Label], object] = label_sort_key):
        self._key = order
        self._rows: dict = {}  # pivot label -> row with coefficient 1 at pivot

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Mapping) -> dict:
        v = vclean(v)
        while True:
            cands = [k for k in v if k in self._rows]
            if not cands:
                return v
            k = min(cands, key=self._key)
            vaxpy(v, -v[k], self._rows[k])

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; returns True if it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r, key=self._key)
        inv = r[p].inverse()
        self._rows[p] = {k: inv * x for k, x in r.items()}
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def rows(self) -> list[dict]:
        return [self._rows[k] for k in sorted(self._rows, key=self._key)]

    def canonical_basis(self) -> list[dict]:
        """Reduced echelon basis, independent of insertion order."""
        pivots = sorted(self._rows, key=self._key)
        cols = sorted({k for r in self._rows.values() for k in r}, key=self._key)
        reduced, _ = rref([self._rows[p] for p in pivots], cols)
        return reduced


def span_equal(us: Iterable[Mapping], vs: Iterable[Mapping]) -> bool:
    a, b = EchelonBasis(), EchelonBasis()
    for u in us:
        a.add(u)
    for v in vs:
        b.add(v)
    return len(a) == len(b) and all(b.contains(r) for r in a.rows())


# ---------------------------------------------------------------------------
# symmetric forms


class GramForm:
    """A symmetric bilinear form on an ordered basis, stored sparsely."""

    def __init__(self, basis: Sequence[Label], entries: Mapping[tuple, object]):
        self.basis = list(basis)
        index = set(self.basis)
        self._e: dict = {}
        for (a, b), x in entries.items():
            if a not in index or b not in index:
                raise InvalidInput(f"entry ({a}, {b}) outside the basis")
            x = g(x)
            if not x:
                continue
            other = entries.get((b, a))
            if other is not None and g(other) != x:
                raise InvalidInput(f"form is not symmetric at ({a}, {b})")
            self._e[(a, b)] = x
            self._e[(b, a)] = x

    def __call__(self, a: Label, b: Label) -> GScalar:
        return self._e.get((a, b), ZERO)

    def pair(self, u: Mapping, v: Mapping) -> GScalar:
        return vdot_pairs(u, v, self)

    def row(self, a: Label) -> dict:
        return {b: self._e[(a, b)] for b in self.basis if (a, b) in self._e}

    def matrix(self) -> list[list[GScalar]]:
        return [[self(a, b) for b in self.basis] for a in self.basis]


def radical(form: GramForm) -> tuple[list[dict], int]:
    """Radical of a symmetric form and the dimension of the quotient."""
    rows = [form.row(a) for a in form.basis]
    rad = kernel_basis(rows, form.basis)
    return rad, len(form.basis) - len(rad)
