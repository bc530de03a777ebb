"""Exact arithmetic in real quadratic orders.

Elements are stored with doubled numerators, ``(a + b*sqrt(D)) / 2``, so that
half-integral units such as ``(3 + sqrt(13)) / 2`` are first-class values.
Nothing in here touches floating point except ``__float__``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


def is_perfect_square(n: int) -> int | None:
    """Return the nonnegative square root of ``n`` if it is a perfect square."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _check_radicand(D: int) -> int:
    if not isinstance(D, int) or isinstance(D, bool):
        raise DomainError(f"radicand must be an int, got {D!r}")
    if D < 2 or is_perfect_square(D) is not None:
        raise DomainError(f"radicand must be a positive non-square, got {D}")
    return D


@dataclass(frozen=True)
class Radicand:
    D: int

    def __post_init__(self):
        _check_radicand(self.D)

    def __int__(self) -> int:
        return self.D


def _sign(n) -> int:
    return (n > 0) - (n < 0)


def _sign_surd(r, s, D: int) -> int:
    """Sign of r + s*sqrt(D) for rationals (or ints) r, s."""
    sr, ss = _sign(r), _sign(s)
    if ss == 0:
        return sr
    if sr == 0 or sr == ss:
        return ss
    # opposite signs: compare r^2 with D s^2
    return sr if r * r > D * s * s else ss


@dataclass(frozen=True)
class QuadInt:
    """The element ``(a + b*sqrt(D)) / 2`` of the order attached to ``D``.

    The order is the set of such values with ``a*a - D*b*b`` divisible by 4.
    For ``D % 4 == 1`` that is the usual ``a = b (mod 2)`` condition; for
    ``D % 4 in (2, 3)`` it forces both ``a`` and ``b`` even.
    """

    a: int
    b: int
    D: int

    def __post_init__(self):
        _check_radicand(self.D)
        if (self.a * self.a - self.D * self.b * self.b) % 4:
            raise DomainError(
                f"({self.a} + {self.b}*sqrt({self.D}))/2 is not in the order"
            )

    @classmethod
    def integer(cls, n: int, D: int) -> QuadInt:
        return cls(2 * n, 0, D)

    def _same(self, other: QuadInt) -> None:
        if self.D != other.D:
            raise DomainError(f"mismatched radicands {self.D} and {other.D}")

    def __add__(self, other):
        if isinstance(other, int):
            other = QuadInt.integer(other, self.D)
        if not isinstance(other, QuadInt):
            return NotImplemented
        self._same(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b, self.D)

    def __sub__(self, other):
        if isinstance(other, int):
            other = QuadInt.integer(other, self.D)
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other, self.D)
        if not isinstance(other, QuadInt):
            return NotImplemented
        self._same(other)
        a = (self.a * other.a + self.D * self.b * other.b) // 2
        b = (self.a * other.b + self.b * other.a) // 2
        return QuadInt(a, b, self.D)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QuadInt:
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadInt.integer(1, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> QuadInt:
        return QuadInt(self.a, -self.b, self.D)

    def norm(self) -> int:
        return (self.a * self.a - self.D * self.b * self.b) // 4

    def trace(self) -> int:
        return self.a

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self) -> QuadInt:
        n = self.norm()
        if abs(n) != 1:
            raise DomainError(f"{self} is not a unit (norm {n})")
        return self.conj() * n

    def sign(self) -> int:
        return _sign_surd(self.a, self.b, self.D)

    def __lt__(self, other: QuadInt) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: QuadInt) -> bool:
        return (self - other).sign() <= 0

    def __float__(self) -> float:
        return (self.a + self.b * math.sqrt(self.D)) / 2

    def __str__(self) -> str:
        return f"({self.a} + {self.b}*sqrt({self.D}))/2"


def mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def conj(x: QuadInt) -> QuadInt:
    return x.conj()


def norm(x: QuadInt) -> int:
    return x.norm()


def sign_of(x: QuadInt) -> int:
    return x.sign()


@dataclass(frozen=True)
class QuadRat:
    """A value ``r + s*sqrt(D)`` with rational ``r`` and ``s``.

    ``D`` may be ``None`` for a purely rational value; such values combine
    with any radicand.  Fractions keep the representation canonical, so
    dataclass equality is value equality.
    """

    r: Fraction
    s: Fraction = Fraction(0)
    D: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))
        if not self.s:
            # canonical: rational values carry no radicand
            object.__setattr__(self, "D", None)
        if self.D is None:
            if self.s:
                raise DomainError("irrational part needs a radicand")
        else:
            _check_radicand(self.D)

    @classmethod
    def from_quadint(cls, x: QuadInt, den: int = 1) -> QuadRat:
        if den == 0:
            raise DomainError("zero denominator")
        return cls(Fraction(x.a, 2 * den), Fraction(x.b, 2 * den), x.D)

    @staticmethod
    def coerce(v) -> QuadRat:
        if isinstance(v, QuadRat):
            return v
        if isinstance(v, QuadInt):
            return QuadRat.from_quadint(v)
        if isinstance(v, (int, Fraction)):
            return QuadRat(Fraction(v))
        raise TypeError(f"cannot coerce {v!r} to QuadRat")

    def _radicand(self, other: QuadRat) -> int | None:
        if self.D is None:
            return other.D
        if other.D is None or other.D == self.D:
            return self.D
        raise DomainError(f"mismatched radicands {self.D} and {other.D}")

    def __add__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.r + other.r, self.s + other.s, self._radicand(other))

    __radd__ = __add__

    def __neg__(self) -> QuadRat:
        return QuadRat(-self.r, -self.s, self.D)

    def __sub__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        D = self._radicand(other)
        sd = D or 0
        return QuadRat(
            self.r * other.r + sd * self.s * other.s,
            self.r * other.s + self.s * other.r,
            D,
        )

    __rmul__ = __mul__

    def conj(self) -> QuadRat:
        return QuadRat(self.r, -self.s, self.D)

    def norm(self) -> Fraction:
        return self.r * self.r - (self.D or 0) * self.s * self.s

    def __truediv__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in QuadRat")
        inv = other.conj() * QuadRat(1 / n)
        return self * inv

    def __rtruediv__(self, other):
        return QuadRat.coerce(other) / self

    def sign(self) -> int:
        return _sign_surd(self.r, self.s, self.D or 0)

    def __bool__(self) -> bool:
        return bool(self.r) or bool(self.s)

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * math.sqrt(self.D or 0)

    @property
    def denominator(self) -> int:
        """Smallest ``den`` with ``self = (a + b*sqrt(D)) / (2*den)`` in the order."""
        return self._split()[1]

    @property
    def numerator(self) -> QuadInt:
        if self.D is None:
            raise DomainError("rational value has no quadratic numerator")
        a, b, _ = self._split()[0]
        return QuadInt(a, b, self.D)

    def _split(self) -> tuple[tuple[int, int, int | None], int]:
        top = math.lcm(self.r.denominator, self.s.denominator)
        D = self.D or 0
        for den in range(1, top + 1):
            if top % den:
                continue
            a, b = 2 * den * self.r, 2 * den * self.s
            if a.denominator == 1 and b.denominator == 1:
                a, b = int(a), int(b)
                if self.D is None or (a * a - D * b * b) % 4 == 0:
                    return (a, b, self.D), den
        raise AssertionError("unreachable: den = top always works")

    def to_json(self) -> dict:
        (a, b, D), den = self._split()
        return {"a": a, "b": b, "D": D, "den": den}

    @classmethod
    def from_json(cls, data: dict) -> QuadRat:
        den = 2 * data["den"]
        return cls(Fraction(data["a"], den), Fraction(data["b"], den), data["D"])

    def __str__(self) -> str:
        if not self.s:
            return str(self.r)
        return f"{self.r} + {self.s}*sqrt({self.D})"


@dataclass(frozen=True)
class CFExpansion:
    floor_term: int
    periodic_terms: tuple[int, ...]
    D: int

    @property
    def period(self) -> int:
        return len(self.periodic_terms)

    def convergents(self, count: int):
        """Yield the first ``count`` convergents ``(p, q)`` of sqrt(D)."""
        p_prev, p = 1, self.floor_term
        q_prev, q = 0, 1
        for i in range(count):
            yield p, q
            t = self.periodic_terms[i % self.period]
            p_prev, p = p, t * p + p_prev
            q_prev, q = q, t * q + q_prev


def sqrt_cf(D: int) -> CFExpansion:
    """Periodic continued fraction of sqrt(D)."""
    D = int(D)
    _check_radicand(D)
    a0 = math.isqrt(D)
    m, d, a = 0, 1, a0
    terms = []
    while a != 2 * a0:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        terms.append(a)
    return CFExpansion(a0, tuple(terms), D)


def period_end_convergent(cf: CFExpansion) -> tuple[int, int]:
    """The convergent ending the first period; it solves p^2 - D q^2 = (-1)^period."""
    *_, last = cf.convergents(cf.period)
    return last
