"""Dense univariate polynomials with exact coefficients.

Coefficient lists are indexed by degree (coeffs[i] is the coefficient of x^i).
``IntegerPolynomial`` is the workhorse for characteristic polynomials and
cyclotomic factors; rational-coefficient helpers back the number-field layer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def trim(coeffs: Sequence) -> tuple:
    """Drop trailing zeros so the highest-index coefficient is nonzero."""
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class IntegerPolynomial:
    """Univariate polynomial with exact integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        self.coeffs = trim(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntegerPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def one(cls) -> "IntegerPolynomial":
        return cls([1])

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial([-c for c in self.coeffs])

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntegerPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntegerPolynomial":
        if isinstance(other, int):
            return IntegerPolynomial([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntegerPolynomial([])
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntegerPolynomial(out)

    __rmul__ = __mul__

    def divmod_exact(self, divisor: "IntegerPolynomial"):
        """Quotient and remainder when the divisor's leading coefficient divides
        every intermediate leading term; returns None if division leaves Z[x]."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        d = divisor.degree
        lead = divisor.leading()
        if len(rem) - 1 < d:
            return IntegerPolynomial([]), IntegerPolynomial(rem)
        quot = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i] == 0:
                continue
            if rem[i] % lead != 0:
                return None
            q = rem[i] // lead
            quot[i - d] = q
            for j, c in enumerate(divisor.coeffs):
                rem[i - d + j] -= q * c
        return IntegerPolynomial(quot), IntegerPolynomial(rem)

    def try_divide(self, divisor: "IntegerPolynomial"):
        """Exact quotient self / divisor in Z[x], or None if it does not divide."""
        res = self.divmod_exact(divisor)
        if res is None:
            return None
        quot, rem = res
        return quot if rem.is_zero() else None

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Fraction) -> int:
        """Sign of the value at a rational point, computed in integers.

        Horner with denominator scaling: sum c_i p^i q^(n-i) has the sign of
        the value at p/q.
        """
        p, q = x.numerator, x.denominator
        acc = 0
        n = len(self.coeffs)
        for i in range(n - 1, -1, -1):
            acc = acc * p + self.coeffs[i] * q ** (n - 1 - i)
        return (acc > 0) - (acc < 0)

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def is_reciprocal(self) -> bool:
        """Palindromic coefficient test (x^deg * p(1/x) == p)."""
        return self.coeffs == self.coeffs[::-1] and not self.is_zero()

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def to_rational(self) -> tuple:
        return tuple(Fraction(c) for c in self.coeffs)

    def __repr__(self):
        return f"IntegerPolynomial({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(f"{c:+d}")
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                sign = "+" if c > 0 else "-"
                xs = "x" if i == 1 else f"x^{i}"
                parts.append(f"{sign}{mag}{xs}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# rational-coefficient helpers (tuples of Fraction, index = degree)

RatCoeffs = tuple


def rat_trim(coeffs: Sequence[Fraction]) -> RatCoeffs:
    return trim(tuple(Fraction(c) for c in coeffs))


def rat_add(a: RatCoeffs, b: RatCoeffs) -> RatCoeffs:
    n = max(len(a), len(b))
    return trim(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    )


def rat_neg(a: RatCoeffs) -> RatCoeffs:
    return tuple(-c for c in a)


def rat_mul(a: RatCoeffs, b: RatCoeffs) -> RatCoeffs:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return trim(out)


def rat_scale(a: RatCoeffs, s: Fraction) -> RatCoeffs:
    if s == 0:
        return ()
    return tuple(c * s for c in a)


def rat_divmod(a: RatCoeffs, b: RatCoeffs):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return (), trim(rem)
    quot = [Fraction(0)] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        if rem[i] == 0:
            continue
        q = rem[i] / lead
        quot[i - db] = q
        for j, c in enumerate(b):
            rem[i - db + j] -= q * c
    return trim(quot), trim(rem)


def rat_gcd_monic(a: RatCoeffs, b: RatCoeffs) -> RatCoeffs:
    """Monic gcd in Q[x] by the Euclidean algorithm."""
    while b:
        _, r = rat_divmod(a, b)
        a, b = b, r
    if a:
        a = rat_scale(a, 1 / a[-1])
    return a


def rat_xgcd(a: RatCoeffs, b: RatCoeffs):
    """Extended Euclid: returns (g, u, v) monic g with u*a + v*b = g."""
    r0, r1 = a, b
    u0, u1 = (Fraction(1),), ()
    v0, v1 = (), (Fraction(1),)
    while r1:
        q, r = rat_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, rat_add(u0, rat_neg(rat_mul(q, u1)))
        v0, v1 = v1, rat_add(v0, rat_neg(rat_mul(q, v1)))
    if r0:
        s = 1 / r0[-1]
        r0, u0, v0 = rat_scale(r0, s), rat_scale(u0, s), rat_scale(v0, s)
    return r0, u0, v0


def rat_eval(a: RatCoeffs, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc
