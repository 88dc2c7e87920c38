"""Characteristic polynomials of the map families, cyclotomic stripping and
Salem root isolation.

``char_poly_pk`` builds (x^{n+k}-1)(x^2-1) - x(x^{k+1}-1)(x^{n-1}-1) for the
projective-space family; ``char_poly_biproj`` builds the biprojective variant.
``strip_cyclotomic`` removes every cyclotomic factor by exact trial division,
leaving a Salem core (or a constant for the exceptional parameter pairs).
Root isolation uses Sturm sequences over exact rationals with bisection
refinement, so every reported root carries a certified isolating interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from .arith import DEFAULT_PRECISION_BITS, BigFloat
from .polynomials import IntegerPolynomial

# Parameter pairs whose characteristic polynomial is purely cyclotomic,
# as listed in the source construction (finite part; n <= 3 resp. n <= 2
# always included).
GAMMA_PK_FINITE = {(2, 4), (2, 5), (2, 6), (2, 7), (3, 4), (3, 5), (4, 4), (5, 4)}
GAMMA_BIPROJ_FINITE = {(2, 3), (2, 4), (3, 3), (4, 3), (5, 3)}


def gamma_pk_lists(k: int, n: int) -> bool:
    """Literal membership of (k, n) in the published exceptional list (pk)."""
    return n <= 3 or (k, n) in GAMMA_PK_FINITE


def gamma_biproj_lists(k: int, n: int) -> bool:
    return n <= 2 or (k, n) in GAMMA_BIPROJ_FINITE


def _check_kn(k: int, n: int) -> None:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _xn_minus_1(n: int) -> IntegerPolynomial:
    return IntegerPolynomial([-1] + [0] * (n - 1) + [1]) if n > 0 else IntegerPolynomial([])


def char_poly_pk(k: int, n: int) -> IntegerPolynomial:
    """(x^{n+k}-1)(x^2-1) - x(x^{k+1}-1)(x^{n-1}-1), degree n+k+2."""
    _check_kn(k, n)
    first = _xn_minus_1(n + k) * _xn_minus_1(2)
    if n == 1:
        return first
    second = IntegerPolynomial([0, 1]) * _xn_minus_1(k + 1) * _xn_minus_1(n - 1)
    return first - second


def char_poly_biproj(k: int, n: int) -> IntegerPolynomial:
    """x^n (x^{k+2} - sum c_j x^j) + x^2 sum c_j x^j - 1, with
    c_0 = c_k = 1 and c_1 = ... = c_{k-1} = 2."""
    _check_kn(k, n)
    c = IntegerPolynomial([1] + [2] * (k - 1) + [1])
    inner = IntegerPolynomial.monomial(k + 2) - c
    return (
        IntegerPolynomial.monomial(n) * inner
        + IntegerPolynomial.monomial(2) * c
        - IntegerPolynomial.one()
    )


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntegerPolynomial:
    """The d-th cyclotomic polynomial, by recursive exact division of x^d - 1."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = _xn_minus_1(d)
    for e in range(1, d):
        if d % e == 0:
            quot = poly.try_divide(cyclotomic(e))
            assert quot is not None
            poly = quot
    return poly


def euler_phi(d: int) -> int:
    return sum(1 for i in range(1, d + 1) if gcd(i, d) == 1)


def strip_cyclotomic(p: IntegerPolynomial):
    """Split p = +-(core) * prod Phi_d^mult with a cyclotomic-free core.

    Every index d with phi(d) <= deg p is tried (d <= 2 deg^2 suffices since
    phi(d) >= sqrt(d/2)); division is exact, so the factor list reconstructs
    the input exactly.
    """
    if p.is_zero():
        raise ValueError("cannot strip the zero polynomial")
    core = p
    factors = []
    deg = p.degree
    for d in range(1, 2 * deg * deg + 1):
        if core.degree == 0:
            break
        if euler_phi(d) > core.degree:
            continue
        mult = 0
        while True:
            quot = core.try_divide(cyclotomic(d))
            if quot is None:
                break
            core = quot
            mult += 1
        if mult:
            factors.append((d, mult))
    return factors, core


# ---------------------------------------------------------------------------
# Sturm-sequence root isolation


def _squarefree_part(p: IntegerPolynomial) -> IntegerPolynomial:
    """p / gcd(p, p') with integer coefficients (content-normalized)."""
    from .polynomials import rat_divmod, rat_gcd_monic

    if p.degree < 1:
        return p
    g = rat_gcd_monic(p.to_rational(), p.derivative().to_rational())
    if len(g) - 1 < 1:
        return p
    quot, _ = rat_divmod(p.to_rational(), g)
    denom = 1
    for c in quot:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in quot]
    out = IntegerPolynomial(ints)
    cont = out.content()
    if cont > 1:
        out = IntegerPolynomial([c // cont for c in out.coeffs])
    if out.leading() < 0:
        out = -out
    return out


def sturm_sequence(p: IntegerPolynomial):
    """Primitive-part Sturm chain of the squarefree part of p."""
    p = _squarefree_part(p)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        a, b = chain[-2], chain[-1]
        # pseudo-remainder keeps everything in Z[x]
        lead = b.leading()
        shift = a.degree - b.degree + 1
        scaled = a * abs(lead) ** shift  # positive scaling keeps signs intact
        res = scaled.divmod_exact(b)
        assert res is not None
        _, rem = res
        if rem.is_zero():
            break
        g = rem.content()
        rem = IntegerPolynomial([-c // g for c in rem.coeffs])
        chain.append(rem)
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    signs = [q.sign_at(x) for q in chain]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: IntegerPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    chain = sturm_sequence(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def root_bound(p: IntegerPolynomial) -> Fraction:
    """Cauchy bound: all roots have modulus < 1 + max|a_i| / |a_n|."""
    lead = abs(p.leading())
    return 1 + Fraction(max(abs(c) for c in p.coeffs), lead)


@dataclass
class IsolatedRoot:
    low: Fraction
    high: Fraction
    value: BigFloat

    @property
    def width(self) -> Fraction:
        return self.high - self.low


def leading_salem_root(
    core: IntegerPolynomial, precision_bits: int = DEFAULT_PRECISION_BITS
) -> Optional[IsolatedRoot]:
    """Certified isolating interval for the largest real root > 1, if any.

    Bisection on Sturm counts over (1, B], narrowed below 2^-precision_bits.
    Returns None when the core has no real root exceeding 1.
    """
    if core.degree < 1:
        return None
    chain = sturm_sequence(core)
    lo, hi = Fraction(1), root_bound(core)
    total = _sign_changes(chain, lo) - _sign_changes(chain, hi)
    if total == 0:
        return None
    # keep the subinterval containing the largest root
    target_width = Fraction(1, 2 ** precision_bits)
    while hi - lo >= target_width or (
        _sign_changes(chain, lo) - _sign_changes(chain, hi) > 1
    ):
        mid = (lo + hi) / 2
        if core.sign_at(mid) == 0:
            # rational root: nudge the endpoint so Sturm counting stays clean
            eps = (hi - lo) / 4
            if count_real_roots(core, mid, hi) >= 1:
                lo = mid + eps
                continue
            lo, hi = mid - eps, mid + eps
            if hi - lo <= target_width:
                break
            continue
        upper = _sign_changes(chain, mid) - _sign_changes(chain, hi)
        if upper >= 1:
            lo = mid
        else:
            hi = mid
    import mpmath

    with mpmath.workprec(precision_bits + 16):
        midf = (
            mpmath.mpf(lo.numerator) / lo.denominator
            + mpmath.mpf(hi.numerator) / hi.denominator
        ) / 2
    return IsolatedRoot(lo, hi, BigFloat(midf, precision_bits))


# ---------------------------------------------------------------------------


@dataclass
class SpectralReport:
    family: str
    k: int
    n: int
    full_poly: IntegerPolynomial
    cyclotomic_factors: list
    salem_factor: Optional[IntegerPolynomial]
    delta: Optional[IsolatedRoot]
    exceptional: bool
    literal_gamma_member: bool = False
    gamma_agrees: bool = True
    notes: list = field(default_factory=list)


def spectral_report(
    family: str, k: int, n: int, precision_bits: int = DEFAULT_PRECISION_BITS
) -> SpectralReport:
    """Full spectral pipeline for one (family, k, n) cell."""
    if family == "pk":
        poly = char_poly_pk(k, n)
        literal = gamma_pk_lists(k, n)
    elif family == "biproj":
        poly = char_poly_biproj(k, n)
        literal = gamma_biproj_lists(k, n)
    else:
        raise ValueError(f"unknown family {family!r}")
    factors, core = strip_cyclotomic(poly)
    exceptional = core.degree == 0
    salem = None
    delta = None
    notes = []
    if not exceptional:
        salem = core if core.leading() > 0 else -core
        delta = leading_salem_root(salem, precision_bits)
        if delta is None:
            notes.append("nonconstant core without real root > 1")
    agrees = literal == exceptional
    if not agrees:
        notes.append(
            f"published exceptional list {'contains' if literal else 'omits'} "
            f"({k},{n}) but computation says "
            f"{'exceptional' if exceptional else 'non-exceptional'}"
        )
    return SpectralReport(
        family=family,
        k=k,
        n=n,
        full_poly=poly,
        cyclotomic_factors=factors,
        salem_factor=salem,
        delta=delta,
        exceptional=exceptional,
        literal_gamma_member=literal,
        gamma_agrees=agrees,
        notes=notes,
    )


def classify_exceptional(family: str, k: int, n: int):
    rep = spectral_report(family, k, n, precision_bits=64)
    return rep.exceptional, rep
