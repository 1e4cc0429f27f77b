"""Exact arithmetic over Q(sqrt(3)) and exact 2-vectors.

Every coordinate in this package is an element of the quadratic field
Q(sqrt(3)), stored as r + s*sqrt(3) with arbitrary-precision rationals
r and s.  Nothing here ever rounds; floats only appear on explicit
conversion at the edges (angle evaluation, SVG emission).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

_RationalLike = Union[int, Fraction]
_ScalarLike = Union[int, Fraction, "QSqrt3"]


class ScalarParseError(ValueError):
    """Raised when a scalar string does not match the grammar."""

    def __init__(self, text: str, pos: int, message: str) -> None:
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


@dataclass(frozen=True)
class QSqrt3:
    """r + s*sqrt(3) with rational r, s.  Immutable and hashable."""

    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    @staticmethod
    def of(r: _RationalLike = 0, s: _RationalLike = 0) -> "QSqrt3":
        return QSqrt3(Fraction(r), Fraction(s))

    @staticmethod
    def _coerce(value: _ScalarLike) -> "QSqrt3":
        if isinstance(value, QSqrt3):
            return value
        if isinstance(value, (int, Fraction)):
            return QSqrt3(Fraction(value), Fraction(0))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QSqrt3(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __sub__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QSqrt3(self.r - other.r, self.s - other.s)

    def __rsub__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QSqrt3(
            self.r * other.r + 3 * self.s * other.s,
            self.r * other.s + self.s * other.r,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt3":
        # (r + s*sqrt3)^-1 = (r - s*sqrt3) / (r^2 - 3 s^2); the norm is zero
        # only for r = s = 0 because sqrt(3) is irrational.
        norm = self.r * self.r - 3 * self.s * self.s
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(3))")
        return QSqrt3(self.r / norm, -self.s / norm)

    def __truediv__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: _ScalarLike) -> "QSqrt3":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self) -> "QSqrt3":
        return QSqrt3(-self.r, -self.s)

    def __bool__(self) -> bool:
        return bool(self.r) or bool(self.s)

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1, decided without floating point."""
        sr = (self.r > 0) - (self.r < 0)
        ss = (self.s > 0) - (self.s < 0)
        if ss == 0:
            return sr
        if sr == 0 or sr == ss:
            return ss
        # r and s*sqrt(3) pull in opposite directions: compare r^2 with 3 s^2.
        # They cannot be equal for nonzero rationals (sqrt(3) is irrational).
        return sr if self.r * self.r > 3 * self.s * self.s else ss

    def __lt__(self, other: _ScalarLike) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other: _ScalarLike) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other: _ScalarLike) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other: _ScalarLike) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSqrt3.of(other)
        if not isinstance(other, QSqrt3):
            return NotImplemented
        return self.r == other.r and self.s == other.s

    def __hash__(self) -> int:
        return hash((self.r, self.s))

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * 3.0 ** 0.5

    def __repr__(self) -> str:
        return f"QSqrt3({render_scalar(self)!r})"


ZERO = QSqrt3.of(0)
ONE = QSqrt3.of(1)
SQRT3 = QSqrt3.of(0, 1)
HALF = QSqrt3.of(Fraction(1, 2))


def qs3(r: _RationalLike = 0, s: _RationalLike = 0) -> QSqrt3:
    return QSqrt3.of(r, s)


_RAT_RE = re.compile(r"-?\d+(?:/\d+)?")


def _parse_rational(text: str, pos: int) -> tuple[Fraction, int]:
    m = _RAT_RE.match(text, pos)
    if m is None:
        raise ScalarParseError(text, pos, "expected a rational number")
    token = m.group()
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ScalarParseError(text, pos, "zero denominator")
        value = Fraction(int(num), int(den))
    else:
        value = Fraction(int(token))
    return value, m.end()


def _parse_term(text: str, pos: int) -> tuple[Fraction, bool, int]:
    """One term: RAT, RAT [*] r3, or bare [-]r3.  Returns (coef, is_root, end)."""
    if text.startswith("r3", pos):
        return Fraction(1), True, pos + 2
    if text.startswith("-r3", pos):
        return Fraction(-1), True, pos + 3
    value, pos = _parse_rational(text, pos)
    if pos < len(text) and text[pos] == "*":
        if not text.startswith("r3", pos + 1):
            raise ScalarParseError(text, pos + 1, "expected 'r3' after '*'")
        return value, True, pos + 3
    if text.startswith("r3", pos):
        return value, True, pos + 2
    return value, False, pos


def parse_scalar(text: str) -> QSqrt3:
    """Parse 'p/q', 'r/s*r3' or 'p/q+r/s*r3' ('r3' denotes sqrt(3))."""
    if not text:
        raise ScalarParseError(text, 0, "empty scalar")
    coef, is_root, pos = _parse_term(text, 0)
    rat_part = Fraction(0)
    root_part = Fraction(0)
    if is_root:
        root_part = coef
    else:
        rat_part = coef
    if pos < len(text):
        op = text[pos]
        if op not in "+-":
            raise ScalarParseError(text, pos, "expected '+', '-' or end of input")
        start = pos + 1
        coef, is_root2, pos = _parse_term(text, start)
        if op == "-":
            coef = -coef
        if not is_root2:
            if is_root:
                raise ScalarParseError(text, start, "rational term must come first")
            raise ScalarParseError(text, start, "duplicate rational term")
        if is_root:
            raise ScalarParseError(text, start, "duplicate sqrt(3) term")
        root_part = coef
    if pos != len(text):
        raise ScalarParseError(text, pos, "trailing input")
    return QSqrt3(rat_part, root_part)


def _render_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_scalar(value: QSqrt3) -> str:
    """Canonical text form; parse_scalar(render_scalar(v)) == v."""
    if not value:
        return "0"
    parts = []
    if value.r:
        parts.append(_render_rational(value.r))
    if value.s:
        root = f"{_render_rational(abs(value.s))}*r3"
        if parts:
            parts.append("+" if value.s > 0 else "-")
            parts.append(root)
        else:
            parts.append(root if value.s > 0 else f"-{root}")
    return "".join(parts)


# cos/sin of 60*k degrees, k = 0..5
_COS60 = [ONE, HALF, -HALF, -ONE, -HALF, HALF]
_SIN60 = [
    ZERO,
    QSqrt3.of(0, Fraction(1, 2)),
    QSqrt3.of(0, Fraction(1, 2)),
    ZERO,
    QSqrt3.of(0, Fraction(-1, 2)),
    QSqrt3.of(0, Fraction(-1, 2)),
]


@dataclass(frozen=True)
class VecE:
    """Exact 2-vector over Q(sqrt(3))."""

    x: QSqrt3 = ZERO
    y: QSqrt3 = ZERO

    @staticmethod
    def of(x: _ScalarLike = 0, y: _ScalarLike = 0) -> "VecE":
        cx = x if isinstance(x, QSqrt3) else QSqrt3.of(x)
        cy = y if isinstance(y, QSqrt3) else QSqrt3.of(y)
        return VecE(cx, cy)

    def __add__(self, other: "VecE") -> "VecE":
        return VecE(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "VecE") -> "VecE":
        return VecE(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "VecE":
        return VecE(-self.x, -self.y)

    def __mul__(self, k: _ScalarLike) -> "VecE":
        return VecE(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def dot(self, other: "VecE") -> QSqrt3:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "VecE") -> QSqrt3:
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> QSqrt3:
        return self.dot(self)

    def to_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def __repr__(self) -> str:
        return f"VecE({render_scalar(self.x)}, {render_scalar(self.y)})"


VEC_ZERO = VecE(ZERO, ZERO)


def rotate60(v: VecE, k: int) -> VecE:
    """Rotate v counterclockwise by k steps of 60 degrees (k may be negative)."""
    k %= 6
    c, s = _COS60[k], _SIN60[k]
    return VecE(c * v.x - s * v.y, s * v.x + c * v.y)


def reflect_y_axis(v: VecE) -> VecE:
    """Mirror across the y axis: (x, y) -> (-x, y)."""
    return VecE(-v.x, v.y)
