"""Exact coefficient fields: the rationals and prime fields.

Every computation in the library is exact.  Rationals are represented by
`fractions.Fraction` (always in lowest terms, positive denominator), prime
field elements by plain ints in ``[0, p)``.  Jet arithmetic accumulates
coefficients with native ``+``/``*`` and calls :meth:`Field.normalize` once
per result, so the element representations must tolerate intermediate
un-normalized values (ints outside ``[0, p)`` are fine, they are reduced by
``% p``).
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


class Field:
    """Common interface of the two coefficient fields."""

    char: int

    def normalize(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.normalize(a * self.inv(b))

    def of_int(self, n: int):
        raise NotImplementedError

    @property
    def zero(self):
        return self.of_int(0)

    @property
    def one(self):
        return self.of_int(1)

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError


class Rationals(Field):
    """The field of rational numbers with arbitrary-precision arithmetic."""

    char = 0

    def normalize(self, a):
        if isinstance(a, Fraction):
            return a
        return Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero in Q")
        return 1 / Fraction(a)

    def of_int(self, n: int):
        return Fraction(n)

    def parse(self, text: str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {text!r}") from exc

    def format(self, a) -> str:
        return str(Fraction(a))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Field):
    """The finite field F_p; elements are ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.char = p

    def normalize(self, a):
        return a % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise FieldError(f"division by zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def of_int(self, n: int):
        return n % self.p

    def parse(self, text: str):
        try:
            return int(text) % self.p
        except ValueError as exc:
            raise FieldError(f"bad F_{self.p} literal {text!r}") from exc

    def format(self, a) -> str:
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)
