"""Exact arithmetic in the real quadratic field Q(sqrt 2).

Every coordinate the package handles is a :class:`Scalar`, i.e. a number
``p + q*sqrt(2)`` with ``p, q`` rational.  Values are immutable and kept in a
canonical reduced form, so ``==`` and ``hash`` are structural.

Internally a scalar is a triple of integers ``(a, b, c)`` standing for
``(a + b*sqrt(2)) / c`` with ``c > 0`` and ``gcd(a, b, c) == 1``; the rational
and irrational parts are exposed as :class:`fractions.Fraction` in lowest terms.

The module also carries the exact linear algebra used everywhere else:
determinants (fraction-free Bareiss elimination over ``Z[sqrt 2]``), rank,
null spaces and linear solves.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "Scalar",
    "ScalarParseError",
    "DimensionError",
    "SQRT2",
    "ZERO",
    "ONE",
    "as_scalar",
    "sign",
    "det",
    "det_sign",
    "rank",
    "nullspace",
    "solve",
    "row_reduce",
]


class ScalarParseError(ValueError):
    """Malformed scalar token.  ``column`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DimensionError(ValueError):
    """Matrix shape does not fit the requested operation."""


_RAT = r"-?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?:(?P<r2only>{_RAT})r2|(?P<rat>{_RAT})(?:(?P<op>[+-])(?P<root>\d+(?:/\d+)?)r2)?)$"
)


def _parse_rat(tok: str) -> Fraction:
    num, _, den = tok.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(f"zero denominator in {tok!r}")
    return Fraction(int(num), int(den) if den else 1)


def _fmt_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Scalar:
    """An exact element ``rat_part + root2_part * sqrt(2)`` of Q(sqrt 2)."""

    __slots__ = ("_a", "_b", "_c")

    def __init__(self, rat_part=0, root2_part=0):
        r = Fraction(rat_part)
        s = Fraction(root2_part)
        den = r.denominator * s.denominator // math.gcd(r.denominator, s.denominator)
        self._set(r.numerator * (den // r.denominator), s.numerator * (den // s.denominator), den)

    def _set(self, a: int, b: int, c: int) -> None:
        g = math.gcd(a, b, c)
        if g != 1:
            a //= g
            b //= g
            c //= g
        if c < 0:
            a, b, c = -a, -b, -c
        self._a = a
        self._b = b
        self._c = c

    @classmethod
    def _raw(cls, a: int, b: int, c: int) -> "Scalar":
        obj = cls.__new__(cls)
        obj._set(a, b, c)
        return obj

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``RAT | RAT 'r2' | RAT ('+'|'-') RAT 'r2'``."""
        tok = text.strip()
        m = _SCALAR_RE.match(tok)
        if m is None:
            raise ScalarParseError(f"malformed scalar {text!r}")
        if m.group("r2only") is not None:
            return cls(0, _parse_rat(m.group("r2only")))
        rat = _parse_rat(m.group("rat"))
        if m.group("root") is None:
            return cls(rat)
        root = _parse_rat(m.group("root"))
        return cls(rat, root if m.group("op") == "+" else -root)

    # -- views -----------------------------------------------------------
    @property
    def rat_part(self) -> Fraction:
        return Fraction(self._a, self._c)

    @property
    def root2_part(self) -> Fraction:
        return Fraction(self._b, self._c)

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def as_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._a, self._c)

    def sign(self) -> int:
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 2 b^2
        if a * a > 2 * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self._a, -self._b, self._c)

    def __float__(self) -> float:
        return (self._a + self._b * math.sqrt(2)) / self._c

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __str__(self) -> str:
        r, s = self.rat_part, self.root2_part
        if s == 0:
            return _fmt_rat(r)
        if r == 0:
            return _fmt_rat(s) + "r2"
        op = "+" if s > 0 else "-"
        return f"{_fmt_rat(r)}{op}{_fmt_rat(abs(s))}r2"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        if self._c == o._c:
            return Scalar._raw(self._a + o._a, self._b + o._b, self._c)
        return Scalar._raw(
            self._a * o._c + o._a * self._c, self._b * o._c + o._b * self._c, self._c * o._c
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self._a, -self._b, self._c)

    def __pos__(self) -> "Scalar":
        return self

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        if self._c == o._c:
            return Scalar._raw(self._a - o._a, self._b - o._b, self._c)
        return Scalar._raw(
            self._a * o._c - o._a * self._c, self._b * o._c - o._b * self._c, self._c * o._c
        )

    def __rsub__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        if b1 == 0 and b2 == 0:
            return Scalar._raw(a1 * a2, 0, self._c * o._c)
        return Scalar._raw(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1, self._c * o._c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b, c = self._a, self._b, self._c
        if a == 0 and b == 0:
            raise ZeroDivisionError("Scalar division by zero")
        norm = a * a - 2 * b * b
        return Scalar._raw(c * a, -c * b, norm)

    def __truediv__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        if o._b == 0:
            if o._a == 0:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._raw(self._a * o._c, self._b * o._c, self._c * o._a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other) -> bool:
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._c == o._c

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._c))
        return hash((self._a, self._b, self._c))

    def _cmp(self, other) -> int | None:
        o = as_scalar(other, strict=False)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __reduce__(self):
        return (Scalar, (self.rat_part, self.root2_part))


def as_scalar(x, strict: bool = True) -> Scalar | None:
    """Coerce ints, Fractions and scalar strings to :class:`Scalar`."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw(x, 0, 1)
    if isinstance(x, Rational):
        return Scalar._raw(x.numerator, 0, x.denominator)
    if isinstance(x, str) and strict:
        return Scalar.parse(x)
    if strict:
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar exactly")
    return None


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)


def sign(x) -> int:
    """Exact sign of ``x`` in {-1, 0, +1}."""
    return as_scalar(x).sign()


# ---------------------------------------------------------------------------
# Fraction-free determinants over Z[sqrt 2]
# ---------------------------------------------------------------------------


def integral_row(row: Sequence[Scalar]) -> tuple[int, list[int] | list[tuple[int, int]]]:
    """Scale a row of scalars into ``Z[sqrt 2]``.

    Returns ``(scale, entries)`` where ``scale > 0`` and each entry equals
    ``scale * row[i]``.  Entries are plain ints when the row is rational,
    otherwise ``(a, b)`` pairs meaning ``a + b*sqrt 2``.
    """
    scale = 1
    for x in row:
        scale = scale * x._c // math.gcd(scale, x._c)
    if all(x._b == 0 for x in row):
        return scale, [x._a * (scale // x._c) for x in row]
    return scale, [(x._a * (scale // x._c), x._b * (scale // x._c)) for x in row]


def _bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    m = [r[:] for r in m]
    neg = False
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    neg = not neg
                    break
            else:
                return 0
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - f * rk[j]) // prev
        prev = pk
    d = m[n - 1][n - 1]
    return -d if neg else d


def _zmul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _zdiv(x, y):
    # exact division in Z[sqrt 2]
    n = y[0] * y[0] - 2 * y[1] * y[1]
    p = _zmul(x, (y[0], -y[1]))
    return (p[0] // n, p[1] // n)


def _bareiss_z2(m: list[list[tuple[int, int]]]) -> tuple[int, int]:
    n = len(m)
    m = [r[:] for r in m]
    neg = False
    prev = (1, 0)
    for k in range(n - 1):
        if m[k][k] == (0, 0):
            for i in range(k + 1, n):
                if m[i][k] != (0, 0):
                    m[k], m[i] = m[i], m[k]
                    neg = not neg
                    break
            else:
                return (0, 0)
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            f = ri[k]
            for j in range(k + 1, n):
                a = _zmul(pk, ri[j])
                b = _zmul(f, rk[j])
                num = (a[0] - b[0], a[1] - b[1])
                ri[j] = num if prev == (1, 0) else _zdiv(num, prev)
        prev = pk
    d = m[n - 1][n - 1]
    return (-d[0], -d[1]) if neg else d


def integral_det(rows) -> tuple[int, int]:
    """Determinant of rows already scaled by :func:`integral_row`.

    Returns ``(a, b)`` meaning ``a + b*sqrt 2``.
    """
    if not rows:
        return (1, 0)
    if all(not isinstance(r[0], tuple) for r in rows):
        return (_bareiss_int([list(r) for r in rows]), 0)
    z = [[x if isinstance(x, tuple) else (x, 0) for x in r] for r in rows]
    return _bareiss_z2(z)


def _square(m) -> list[list[Scalar]]:
    rows = [[as_scalar(x) for x in r] for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError(f"determinant needs a square matrix, got {n} rows of lengths {[len(r) for r in rows]}")
    return rows


def det(m) -> Scalar:
    """Exact determinant of a square matrix of scalars."""
    rows = _square(m)
    if not rows:
        return ONE
    scale = 1
    scaled = []
    for r in rows:
        s, ints = integral_row(r)
        scale *= s
        scaled.append(ints)
    a, b = integral_det(scaled)
    return Scalar._raw(a, b, scale)


def det_sign(m) -> int:
    rows = _square(m)
    if not rows:
        return 1
    a, b = integral_det([integral_row(r)[1] for r in rows])
    return Scalar._raw(a, b, 1).sign()


# ---------------------------------------------------------------------------
# Gaussian elimination over Q(sqrt 2)
# ---------------------------------------------------------------------------


def row_reduce(m: Iterable[Sequence]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form.  Returns ``(rref_rows, pivot_columns)``."""
    rows = [[as_scalar(x) for x in r] for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m) -> int:
    return len(row_reduce(m)[1])


def nullspace(m, ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of the right kernel ``{x : m x = 0}``."""
    m = [list(r) for r in m]
    if ncols is None:
        if not m:
            raise DimensionError("ncols required for an empty matrix")
        ncols = len(m[0])
    rref, pivots = row_reduce(m)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(rref, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m, rhs) -> list[Scalar] | None:
    """One solution of ``m x = rhs`` or ``None`` if inconsistent."""
    m = [list(r) for r in m]
    if not m:
        raise DimensionError("empty system")
    ncols = len(m[0])
    aug = [r + [b] for r, b in zip(m, rhs)]
    rref, pivots = row_reduce(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(rref, pivots):
        x[p] = row[ncols]
    return x
