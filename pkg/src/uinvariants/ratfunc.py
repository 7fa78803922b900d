"""Exact rational functions in one variable over Q.

Used to follow a matrix along a line ``A + e*P`` when the triangular solve
meets a vanishing slope at ``A`` itself: the solve is done over Q(e) and the
answer is read off at e = 0.  Numerator and denominator are kept coprime with
a monic denominator, so equality is structural.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple

Dense = Tuple  # coefficients, constant term first, no trailing zeros


def _trim(c) -> Dense:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(a: Dense, b: Dense) -> Dense:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for j, v in enumerate(b):
        out[j] += v
    return _trim(out)


def _neg(a: Dense) -> Dense:
    return tuple(-v for v in a)


def _mul(a: Dense, b: Dense) -> Dense:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim(out)


def _divmod(a: Dense, b: Dense):
    lead = Fraction(b[-1])
    rem = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1] / lead
        if c:
            q[shift] = c
            for j, v in enumerate(b):
                rem[shift + j] -= c * v
    return _trim(q), _trim(rem[: len(b) - 1])


def _monic(a: Dense) -> Dense:
    lead = Fraction(a[-1])
    return tuple(_small(v / lead) for v in a)


def _small(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _gcd(a: Dense, b: Dense) -> Dense:
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a) if a else (1,)


class RatFunc:
    """num(e) / den(e) with exact rational coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num: Dense, den: Dense = (1,), reduce: bool = True):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if not num:
                den = (1,)
            elif len(den) > 1:
                g = _gcd(num, den)
                if len(g) > 1:
                    num, den = _divmod(num, g)[0], _divmod(den, g)[0]
            lead = Fraction(den[-1])
            if lead != 1:
                num = tuple(_small(v / lead) for v in num)
                den = tuple(_small(v / lead) for v in den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, v) -> "RatFunc":
        return cls((v,) if v else (), (1,), reduce=False)

    @classmethod
    def line(cls, a, p) -> "RatFunc":
        """The affine function a + p*e."""
        return cls(_trim((a, p)), (1,), reduce=False)

    def _poly(self) -> bool:
        return self.den == (1,)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RatFunc":
        return other if isinstance(other, RatFunc) else RatFunc.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        if self._poly() and o._poly():
            return RatFunc(_add(self.num, o.num), (1,), reduce=False)
        if self.den == o.den:
            return RatFunc(_add(self.num, o.num), self.den)
        return RatFunc(_add(_mul(self.num, o.den), _mul(o.num, self.den)), _mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_neg(self.num), self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self._poly() and o._poly():
            return RatFunc(_mul(self.num, o.num), (1,), reduce=False)
        return RatFunc(_mul(self.num, o.num), _mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(_mul(self.num, o.den), _mul(self.den, o.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        out = RatFunc.const(1)
        for _ in range(e):
            out = out * self
        return out

    def at_zero(self):
        """Value at e = 0; raises ZeroDivisionError at a pole."""
        if not self.den[0]:
            raise ZeroDivisionError("pole at 0")
        c = self.num[0] if self.num else 0
        return _small(Fraction(c) / self.den[0])

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"
