"""Exact scalars and 2x2 matrices.

Rationals are :class:`fractions.Fraction` (always stored reduced, positive
denominator).  ``QuadExt`` is an element ``u + v*sqrt(a)`` of a real
quadratic field; ``IntMat2`` and ``ExtMat2`` are immutable 2x2 matrices over
the integers and over ``Q(sqrt(a))`` respectively.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ValueError(f"malformed rational: {x!r}") from exc
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


class RadicandMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QuadExt:
    """``u + v*sqrt(a)`` with rational ``u, v`` and a fixed non-square ``a > 0``."""

    u: Fraction
    v: Fraction
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", as_rational(self.u))
        object.__setattr__(self, "v", as_rational(self.v))
        object.__setattr__(self, "a", as_rational(self.a))
        if self.a <= 0:
            raise ValueError("radicand must be positive")

    @classmethod
    def rational(cls, q: RationalLike, a: RationalLike) -> "QuadExt":
        return cls(as_rational(q), Fraction(0), as_rational(a))

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.a != self.a:
                raise RadicandMismatch(f"radicands differ: {self.a} vs {other.a}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.a)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.u + o.u, self.v + o.v, self.a)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.u, -self.v, self.a)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.u - o.u, self.v - o.v, self.a)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.u * o.u + self.a * self.v * o.v,
            self.u * o.v + o.u * self.v,
            self.a,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.u, -self.v, self.a)

    def norm(self) -> Fraction:
        return self.u * self.u - self.a * self.v * self.v

    def is_rational(self) -> bool:
        return self.v == 0 or is_rational_square(self.a)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if isinstance(other, QuadExt):
            return self.a == other.a and self.u == other.u and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.u, self.v, self.a))

    def __float__(self):
        return float(self.u) + float(self.v) * float(self.a) ** 0.5

    def __repr__(self):
        return f"({self.u} + {self.v}*sqrt({self.a}))"


@dataclass(frozen=True)
class IntMat2:
    """Integer matrix ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "IntMat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntMat2") -> "IntMat2":
        if not isinstance(other, IntMat2):
            return NotImplemented
        return IntMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "IntMat2":
        return IntMat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> "IntMat2":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IntMat2.identity(), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def inverse(self) -> "IntMat2":
        """Inverse of a determinant-one matrix."""
        if self.det() != 1:
            raise ValueError(f"{self} is not in SL2(Z)")
        return IntMat2(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def height(self) -> int:
        return max(abs(e) for e in self.entries())

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


@dataclass(frozen=True)
class ExtMat2:
    """2x2 matrix over ``Q(sqrt(radicand))``."""

    a: QuadExt
    b: QuadExt
    c: QuadExt
    d: QuadExt

    def __post_init__(self):
        radicands = {e.a for e in (self.a, self.b, self.c, self.d)}
        if len(radicands) != 1:
            raise RadicandMismatch(f"entries over different radicands: {sorted(radicands)}")

    @property
    def radicand(self) -> Fraction:
        return self.a.a

    @classmethod
    def identity(cls, radicand: RationalLike) -> "ExtMat2":
        one, zero = QuadExt.rational(1, radicand), QuadExt.rational(0, radicand)
        return cls(one, zero, zero, one)

    def det(self) -> QuadExt:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QuadExt:
        return self.a + self.d

    def __matmul__(self, other: "ExtMat2") -> "ExtMat2":
        if not isinstance(other, ExtMat2):
            return NotImplemented
        if other.radicand != self.radicand:
            raise RadicandMismatch(f"radicands differ: {self.radicand} vs {other.radicand}")
        return ExtMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: "ExtMat2") -> "ExtMat2":
        if not isinstance(other, ExtMat2):
            return NotImplemented
        return ExtMat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def entries(self) -> tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
        return (self.a, self.b, self.c, self.d)

    def to_float(self) -> tuple[float, float, float, float]:
        return tuple(float(e) for e in self.entries())


Mat = Union[IntMat2, ExtMat2]


def mat_mul(m1: Mat, m2: Mat) -> Mat:
    if type(m1) is not type(m2):
        raise TypeError("cannot multiply an integer matrix by a quadratic-extension matrix")
    return m1 @ m2


def mat_det(m: Mat):
    return m.det()


def mat_trace(m: Mat):
    return m.trace()
