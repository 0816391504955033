"""Exact scalar fields: the rationals and prime fields.

Every object in the package carries the field it was built over, and objects
built over different fields refuse to interact.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "FpElement",
    "FieldMismatch",
    "QQ",
    "parse_field",
]


class FieldMismatch(TypeError):
    """Raised when objects over different fields are combined."""


class Field:
    """Abstract exact field; concrete subclasses are :class:`Rationals` and :class:`PrimeField`."""

    characteristic: int = 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):
        raise NotImplementedError

    def parse(self, text: str):
        """Parse an integer or ``p/q`` literal. Decimal literals are rejected."""
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+(/[+-]?\d+)?", text):
            raise ValueError(f"not an exact scalar literal: {text!r}")
        num, _, den = text.partition("/")
        if den:
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            return self(int(num)) / self(int(den))
        return self(int(num))

    def format(self, x) -> str:
        return str(x)


class Rationals(Field):
    """The field Q; elements are :class:`fractions.Fraction` (always in lowest terms)."""

    def __call__(self, value) -> Fraction:
        if isinstance(value, FpElement):
            raise FieldMismatch("cannot convert a prime-field residue to a rational")
        if isinstance(value, float):
            raise TypeError("floating-point values are not exact; use int or Fraction")
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def spec(self) -> str:
        return "rationals"

    def format(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField(Field):
    """The field F_p with elements :class:`FpElement`."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, value) -> FpElement:
        if isinstance(value, FpElement):
            if value.field != self:
                raise FieldMismatch(f"residue mod {value.field.p} used in F_{self.p}")
            return value
        if isinstance(value, float):
            raise TypeError("floating-point values are not exact; use int or Fraction")
        if isinstance(value, Rational) and not isinstance(value, int):
            return FpElement(self, value.numerator) / FpElement(self, value.denominator)
        return FpElement(self, int(value))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def spec(self) -> str:
        return f"fp:{self.p}"


class FpElement:
    """A residue modulo a prime, stored in [0, p)."""

    __slots__ = ("field", "value")

    def __init__(self, field: PrimeField, value: int):
        self.field = field
        self.value = value % field.p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"F_{self.field.p} and F_{other.field.p} elements mixed")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatch("rational and prime-field scalars mixed")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.field, o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(self.field, -self.value)

    def __pos__(self):
        return self

    def inverse(self) -> FpElement:
        if self.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.field, pow(self.value, -1, self.field.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.field, o) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"

    def __str__(self):
        return str(self.value)


QQ = Rationals()


def parse_field(spec: str) -> Field:
    """Parse ``rationals``, ``fp:P`` or ``prime P``."""
    s = spec.strip().lower()
    if s in ("rationals", "q", "qq"):
        return QQ
    m = re.fullmatch(r"(?:fp:|prime\s+|gf\()(\d+)\)?", s)
    if m:
        return PrimeField(int(m.group(1)))
    raise ValueError(f"unknown field specification: {spec!r}")
