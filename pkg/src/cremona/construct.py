"""Closed-form construction of the Coxeter-case Cremona maps.

For the projective family the multiplier delta lives in Q(delta) =
Q[x]/(S(x)) with S the Salem factor of the characteristic polynomial; the
indeterminacy parameters t_j^+, the translation tau and the matrix L (the map
is F = L o J after conjugating away T) are all exact elements of that field.
Explicit S and T matrices are kept as well so the un-conjugated map
F = S o J o T^{-1}, which fixes the standard curve, can be verified directly.

The biprojective family follows the recurrence system for t_j^- (the printed
closed form for t_j^+ is evaluated alongside and any mismatch is recorded,
not patched).  The concurrent-lines family produces the m matrices L_j from
the multiplier alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import NumberField, NumberFieldElement
from .geometry import LinearMap, gamma_eval
from .spectra import spectral_report


class ExceptionalPairError(Exception):
    """(k, n) has a purely cyclotomic characteristic polynomial: the
    multiplier would be a root of unity and the construction degenerates to a
    linear conjugate of the standard involution."""

    def __init__(self, family, k, n):
        self.family, self.k, self.n = family, k, n
        super().__init__(
            f"({k},{n}) is exceptional for family {family}: "
            "multiplier is a root of unity (no Salem factor)"
        )


class RootOfUnityError(Exception):
    pass


def delta_field(family: str, k: int, n: int):
    """Number field Q(delta) over the Salem factor, plus the spectral report."""
    rep = spectral_report(family, k, n)
    if rep.exceptional or rep.salem_factor is None:
        raise ExceptionalPairError(family, k, n)
    fld = NumberField(rep.salem_factor)
    return fld, rep


@dataclass
class CoxeterConstruction:
    family: str
    k: int
    n: int
    field: NumberField
    delta: NumberFieldElement
    t_plus: list
    tau: NumberFieldElement
    L: list  # one LinearMap (pk), two (biproj), m (lines)
    T_matrices: list = field(default_factory=list)
    S_matrices: list = field(default_factory=list)
    s_params: list = field(default_factory=list)  # parameters of S(e_j)
    m: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def modulus(self):
        return self.field.modulus


# ---------------------------------------------------------------------------
# the generic curve-fixing basic cremona map (any multiplier, any centers)


def column_scalings(params):
    """Scalings a_i with M = [a_i * gamma(t_i)] satisfying M(1,..,1) = e_k:
    a_i = 1 / ((sum t_j) * prod_{j != i} (t_j - t_i))."""
    total = sum(params[1:], params[0])
    if not_zero(total) is False:
        raise ValueError("parameter sum vanishes; centers are dependent")
    out = []
    for i, ti in enumerate(params):
        prod = None
        for j, tj in enumerate(params):
            if j != i:
                d = tj - ti
                prod = d if prod is None else prod * d
        out.append(invert_scalar(total * prod))
    return out


def not_zero(x) -> bool:
    if isinstance(x, NumberFieldElement):
        return not x.is_zero()
    return x != 0


def invert_scalar(x):
    if isinstance(x, NumberFieldElement):
        return x.inverse()
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def center_matrix(k: int, params) -> LinearMap:
    """Matrix with columns a_j * gamma(t_j), normalized to send (1,..,1) to
    the cusp e_k."""
    scalings = column_scalings(params)
    cols = [
        [a * c for c in gamma_eval(t, k).coords]
        for a, t in zip(scalings, params)
    ]
    return LinearMap([[cols[j][i] for j in range(k + 1)] for i in range(k + 1)])


def curve_fixing_map(k: int, delta, t_plus):
    """Basic cremona map S o J o T^{-1} properly fixing the standard curve
    with F(gamma(t)) = gamma(delta t + tau).

    Returns (T, S, tau, s_params) where s_params are the parameters of the
    exceptional-image points S(e_j) = gamma(delta t_j^+ - 2 tau / (k-1)).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(t_plus) != k + 1:
        raise ValueError("need k+1 indeterminacy parameters")
    total = sum(t_plus[1:], t_plus[0])
    tau = delta * total * Fraction(k - 1, k + 1)
    s_params = [delta * t - tau * Fraction(2, k - 1) for t in t_plus]
    T = center_matrix(k, t_plus)
    S = center_matrix(k, s_params)
    return T, S, tau, s_params


# ---------------------------------------------------------------------------
# projective-space family


def tplus_pk(k: int, n: int, delta: NumberFieldElement):
    """t_j^+ = delta^j (k+1)/(k-1) (delta^2-1)/(delta(delta^{k+1}-1)) - 2/(k-1)."""
    base = (
        (delta * delta - 1)
        * (delta * (delta ** (k + 1) - 1)).inverse()
        * Fraction(k + 1, k - 1)
    )
    shift = Fraction(2, k - 1)
    return [delta ** j * base - shift for j in range(k + 1)]


def build_L_pk(k: int, n: int, delta: NumberFieldElement) -> LinearMap:
    """Matrix of the conjugated map F = L o J: row 0 = (0,..,0,1),
    subdiagonal beta_i = (delta^i - 1) / (delta (delta^{k+1} - delta^i)),
    last column 1 - beta_i."""
    one = delta.field.one()
    zero = delta.field.zero()
    betas = [
        (delta ** i - 1) * (delta * (delta ** (k + 1) - delta ** i)).inverse()
        for i in range(1, k + 1)
    ]
    rows = [[zero] * k + [one]]
    for i, b in enumerate(betas):
        row = [zero] * (k + 1)
        row[i] = b
        row[k] = one - b
        rows.append(row)
    return LinearMap(rows)


def construct_pk(k: int, n: int) -> CoxeterConstruction:
    fld, rep = delta_field("pk", k, n)
    delta = fld.gen()
    t_plus = tplus_pk(k, n, delta)
    T, S, tau, s_params = curve_fixing_map(k, delta, t_plus)
    L = build_L_pk(k, n, delta)
    notes = list(rep.notes)
    return CoxeterConstruction(
        family="pk",
        k=k,
        n=n,
        field=fld,
        delta=delta,
        t_plus=t_plus,
        tau=tau,
        L=[L],
        T_matrices=[T],
        S_matrices=[S],
        s_params=s_params,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# biprojective family


def tplus_biproj(k: int, n: int, delta: NumberFieldElement):
    """Indeterminacy parameters for the biprojective family.

    The singleton orbits in the orbit data force t_j^- = t_{j+1}^+ for
    j < k, i.e. the recurrence t_{j+1}^+ = delta t_j^+ - (2 delta + 1);
    combined with sum t_j^+ = (k+1)(1/delta + 1) this pins every parameter.
    The exceptional-image parameters follow from t_j^- = delta(t_j^+ - 2) - 1.

    Returns (t_plus, t_minus, closed_form_matches) where the flag records
    whether an alternative published closed form for t_j^+ reproduces these
    values (it does not; the discrepancy is surfaced, not patched).
    """
    dinv = delta.inverse()
    dm1 = (delta - 1).inverse()
    powers = [delta ** i for i in range(k + 2)]
    geom = [(powers[i] - 1) * dm1 for i in range(k + 1)]  # (delta^i-1)/(delta-1)
    step = 2 * delta + 1
    # sum over j of delta^j t_0^+ - step*geom_j = (k+1)(1/delta + 1)
    sum_pow = sum(powers[: k + 1], delta.field.zero())
    sum_geom = sum(geom, delta.field.zero())
    rhs = Fraction(k + 1) * (dinv + 1)
    t0_plus = (rhs + step * sum_geom) * sum_pow.inverse()
    t_plus = [powers[j] * t0_plus - step * geom[j] for j in range(k + 1)]
    t_minus = [delta * (tp - 2) - 1 for tp in t_plus]
    # published closed form, for comparison only
    bracket = Fraction(k * (k + 1)) - delta * (delta + 1)
    tail = (k - 2 * delta * delta - delta + 1) * (delta * dm1.inverse()).inverse()
    closed = [
        powers[j] * dinv * (powers[k + 1] - 1).inverse() * bracket - tail
        for j in range(k + 1)
    ]
    matches = all(c == t for c, t in zip(closed, t_plus))
    return t_plus, t_minus, matches


def build_L_biproj(k: int, n: int, delta: NumberFieldElement):
    """The pair (L1, L2): row 0 = (0,..,0,s_i), subdiagonal
    beta_j = (delta^j-1)(delta+1)/(delta^2(delta^{k+1}-delta^j)),
    last column s_i - beta_j; s_1 = 1, s_2 = (delta+1)^2/delta.

    s_2 is rederived from T_2^{-1} S_2 rather than taken from the published
    value (delta^2+delta+1)/delta, which fails the factorization check.
    """
    one = delta.field.one()
    zero = delta.field.zero()
    betas = [
        (delta ** j - 1)
        * (delta + 1)
        * (delta * delta * (delta ** (k + 1) - delta ** j)).inverse()
        for j in range(1, k + 1)
    ]
    s_vals = [one, (delta + 1) ** 2 * delta.inverse()]
    out = []
    for s in s_vals:
        rows = [[zero] * k + [s]]
        for i, b in enumerate(betas):
            row = [zero] * (k + 1)
            row[i] = b
            row[k] = s - b
            rows.append(row)
        out.append(LinearMap(rows))
    return out


def construct_biproj(k: int, n: int) -> CoxeterConstruction:
    fld, rep = delta_field("biproj", k, n)
    delta = fld.gen()
    t_plus, t_minus, closed_ok = tplus_biproj(k, n, delta)
    tau = Fraction(k) + Fraction(k - 1) * delta
    L1, L2 = build_L_biproj(k, n, delta)
    # explicit center matrices for both factors of T and S
    T1 = center_matrix(k, t_plus)
    T2 = center_matrix(k, [t - 1 for t in t_plus])
    S1 = center_matrix(k, t_minus)
    S2 = center_matrix(k, [t - 1 for t in t_minus])
    notes = list(rep.notes)
    if not closed_ok:
        notes.append(
            "published closed form for t_j^+ disagrees with the orbit-data "
            "recurrence; recurrence values used (they reproduce L exactly)"
        )
    return CoxeterConstruction(
        family="biproj",
        k=k,
        n=n,
        field=fld,
        delta=delta,
        t_plus=t_plus,
        tau=tau,
        L=[L1, L2],
        T_matrices=[T1, T2],
        S_matrices=[S1, S2],
        s_params=t_minus,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# concurrent-lines family on (P^k)^m


def build_L_lines(k: int, m: int, n: int, alpha):
    """The m matrices L_j: row 0 = (0,..,0,s_j), constant subdiagonal
    v = -alpha (alpha^m - 1)/(alpha - 1), last column s_j - v, with
    s_j = (alpha^m-1)(alpha^{j+1}-1) / (alpha^j (alpha-1)(alpha^{m-j}-1)).

    The matrices do not depend on n; n fixes the intended long-orbit length
    n(k+1) and is validated here."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if isinstance(alpha, NumberFieldElement):
        zero = alpha.field.zero()
    else:
        alpha = Fraction(alpha)
        zero = Fraction(0)
    am = alpha ** m
    denom = alpha - 1
    if not not_zero(denom) or not not_zero(am - 1):
        raise RootOfUnityError("alpha must not be a root of unity")
    v = -alpha * (am - 1) * invert_scalar(denom)
    mats = []
    for j in range(m):
        s_j = (
            (am - 1)
            * (alpha ** (j + 1) - 1)
            * invert_scalar(alpha ** j * denom * (alpha ** (m - j) - 1))
        )
        rows = [[zero] * k + [s_j]]
        for i in range(1, k + 1):
            row = [zero] * (k + 1)
            row[i - 1] = v
            row[k] = s_j - v
            rows.append(row)
        mats.append(LinearMap(rows))
    return mats


def lines_alpha_field(k: int, m: int, n: int):
    """Default multiplier field for the lines family: Salem factor of the
    Coxeter element of the T(m+1, k+1, n(k+1)) diagram.

    The diagram rank (m+1) + (k+1) + n(k+1) - 2 equals m + N with
    N = k + n(k+1) blown-up points, matching the Picard rank of (P^k)^m
    blown up along the full orbit."""
    from .picard import coxeter_element_tpqr
    from .spectra import strip_cyclotomic

    arm = n * (k + 1)
    _, charpoly, _ = coxeter_element_tpqr(m + 1, k + 1, arm)
    _, core = strip_cyclotomic(charpoly)
    if core.degree == 0:
        raise RootOfUnityError(
            f"T({m + 1},{k + 1},{arm}) Coxeter element is periodic: "
            "multiplier would be a root of unity"
        )
    if core.leading() < 0:
        core = -core
    return NumberField(core)


def construct_lines(k: int, m: int, n: int, alpha=None) -> CoxeterConstruction:
    if alpha is None:
        fld = lines_alpha_field(k, m, n)
        alpha = fld.gen()
    elif isinstance(alpha, NumberFieldElement):
        fld = alpha.field
    else:
        raise ValueError("alpha override must be a NumberFieldElement")
    mats = build_L_lines(k, m, n, alpha)
    return CoxeterConstruction(
        family="lines",
        k=k,
        n=n,
        field=fld,
        delta=alpha,
        t_plus=[],
        tau=fld.zero(),
        L=mats,
        m=m,
    )
