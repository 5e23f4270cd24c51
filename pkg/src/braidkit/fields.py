"""Exact scalar arithmetic over Q and prime fields GF(p).

Rational scalars are gmpy2.mpq values (fractions.Fraction when gmpy2 is
unavailable); they are always stored in lowest terms with positive
denominator, so equality is structural.  GF(p) scalars are plain ints in
[0, p).  No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Exact coefficient field: rationals (p is None) or GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else f"prime({self.p})"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def zero(self):
        return _rational(0) if self.p is None else 0

    def one(self):
        return _rational(1) if self.p is None else 1

    def coerce(self, x):
        """Coerce an int, Fraction, mpq or exact literal string to a scalar."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return _rational(x)
        if isinstance(x, Fraction) or type(x).__name__ == "mpq":
            num, den = int(x.numerator), int(x.denominator)
            return (num * pow(den, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    def parse(self, text: str):
        """Parse an exact literal: an integer or a fraction "a/b"."""
        text = text.strip()
        if "/" in text:
            a, b = text.split("/")
            num, den = int(a), int(b)
        else:
            num, den = int(text), 1
        if den == 0:
            raise FieldError(f"zero denominator in literal {text!r}")
        if self.p is None:
            return _rational(num, den)
        return (num % self.p) * pow(den, self.p - 2, self.p) % self.p

    def literal(self, x) -> str:
        """Render a scalar as an exact decimal-free literal."""
        return str(x)

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / _rational(a) if self.p is None else pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"


RATIONALS = Field()


def GF(p: int) -> Field:
    return Field(p)


def check_same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldError(f"mixed fields: {first!r} vs {f!r}")
    return first
