"""Exact rational arithmetic backend.

All algebra and LP code works over exact rationals.  gmpy2's mpq is used
when available (it is an order of magnitude faster than fractions.Fraction
on the pivot-heavy LP paths); the stdlib Fraction is a drop-in fallback.
Integers mix freely with either type, so integer-coefficient elements stay
integer until division actually happens.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq

    def rat(num, den=1):
        return _mpq(num, den)

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

    def rat(num, den=1):
        return _mpq(num, den)

    RAT_BACKEND = "fractions"


def parse_rat(text: str):
    """Parse '3', '-3' or '3/4' into an exact rational (int when integral)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        value = rat(int(num), int(den))
    else:
        value = rat(int(text))
    return normalize_rat(value)


def format_rat(value) -> str:
    """Canonical text form: bare integer, or num/den in lowest terms."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def normalize_rat(value):
    """Collapse integral rationals to plain int (cheaper hashing/arith)."""
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return int(value.numerator)
    return value


class Q6:
    """Exact element a + b*sqrt(6) of the ordered field Q(sqrt 6).

    Supports the arithmetic and comparisons the simplex needs, so LPs whose
    data mixes quarter-exponent classes differing by 2 (a factor sqrt 6)
    stay exact.  Comparisons reduce to the sign of a + b*sqrt(6), decided
    by comparing a^2 with 6 b^2 in Q.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        if isinstance(a, Q6) or isinstance(b, Q6):
            raise TypeError("Q6 components must be rational")
        self.a = rat(a)
        self.b = rat(b)

    @staticmethod
    def sqrt6() -> "Q6":
        return Q6(0, 1)

    @staticmethod
    def of(value) -> "Q6":
        return value if isinstance(value, Q6) else Q6(value)

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (1 if a > 0 else 0)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare |a| against |b| sqrt 6 via squares
        if a > 0:  # b < 0
            return 1 if a * a > 6 * b * b else (-1 if a * a < 6 * b * b else 0)
        return 1 if 6 * b * b > a * a else (-1 if 6 * b * b < a * a else 0)

    def __add__(self, other):
        other = Q6.of(other)
        return Q6(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Q6(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Q6.of(other))

    def __rsub__(self, other):
        return Q6.of(other) + (-self)

    def __mul__(self, other):
        other = Q6.of(other)
        return Q6(self.a * other.a + 6 * self.b * other.b,
                  self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Q6.of(other)
        norm = other.a * other.a - 6 * other.b * other.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 6)")
        inv = Q6(other.a / norm, -other.b / norm)
        return self * inv

    def __rtruediv__(self, other):
        return Q6.of(other) / self

    def __eq__(self, other):
        if isinstance(other, Q6):
            return self.a == other.a and self.b == other.b
        return self.b == 0 and self.a == other

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __lt__(self, other):
        return (self - Q6.of(other)).sign() < 0

    def __le__(self, other):
        return (self - Q6.of(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Q6.of(other)).sign() > 0

    def __ge__(self, other):
        return (self - Q6.of(other)).sign() >= 0

    def __repr__(self):
        return f"Q6({format_rat(self.a)}, {format_rat(self.b)})"

    def format(self) -> str:
        return f"{format_rat(self.a)}+{format_rat(self.b)}r6"

    @staticmethod
    def parse(text: str) -> "Q6":
        a, b = text.split("+")
        if not b.endswith("r6"):
            raise ValueError(f"malformed Q6 literal {text!r}")
        return Q6(parse_rat(a), parse_rat(b[:-2]))
