"""Runtime verification of the constructed maps.

Verification runs in the conjugated frame F = L o J (or its product-space
variants) in full projective coordinates; the affine parameter dynamics
t -> delta t + tau is computed separately and used only as an independent
cross-check.  On the exact backend every comparison is an identity in
Q(delta); the float backend re-runs the same iteration after embedding delta
as a certified numerical root of the modulus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .arith import BigFloat, NumberFieldElement, nf_embed
from .geometry import (
    BiProjectivePoint,
    IndeterminacyError,
    LinearMap,
    NotOnCurveError,
    OO,
    ProjectivePoint,
    apply_J,
    apply_J_biproj,
    apply_J_multi,
    apply_linear,
    gamma1_eval,
    gamma_eval,
    is_exact,
    concurrent_line_membership,
    param_recover,
)
from .spectra import leading_salem_root


class VerificationError(Exception):
    pass


class PrecisionExhaustedError(VerificationError):
    """Float-backend coordinates collapsed below the zero threshold."""


@dataclass
class ConditionResult:
    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""


@dataclass
class OrbitCheckReport:
    family: str
    k: int
    n: int
    backend: str
    conditions: list = field(default_factory=list)
    orbit_points: list = field(default_factory=list)  # (step, curve param or None)
    distinct: Optional[bool] = None
    curve_invariant: Optional[bool] = None
    multiplier_measured: object = None
    translation_detected: bool = False
    m: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return (
            all(c.passed for c in self.conditions)
            and not self.translation_detected
        )


# ---------------------------------------------------------------------------
# scalar embedding for the float backend


def embed_scalar(x, root: BigFloat) -> BigFloat:
    if isinstance(x, NumberFieldElement):
        return nf_embed(x, root)
    return BigFloat(x, root.precision_bits)


def embed_matrix(m: LinearMap, root: BigFloat) -> LinearMap:
    return LinearMap(
        [[embed_scalar(c, root) for c in row] for row in m.matrix], check=False
    )


def field_root(construction, precision_bits: int) -> BigFloat:
    iso = leading_salem_root(construction.modulus, precision_bits)
    if iso is None:
        raise VerificationError("modulus has no real root above 1 to embed at")
    return iso.value


def _prepare(construction, backend: str, precision_bits: int):
    """(L matrices, delta, tau) in the requested backend."""
    if backend == "exact":
        return list(construction.L), construction.delta, construction.tau
    if backend != "float":
        raise ValueError(f"unknown backend {backend!r}")
    root = field_root(construction, precision_bits)
    mats = [embed_matrix(m, root) for m in construction.L]
    return mats, root, embed_scalar(construction.tau, root)


def projective_residual(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Scale-free distance; zero for exact projective equality."""
    if all(is_exact(c) for c in p.coords) and all(is_exact(c) for c in q.coords):
        return 0.0 if p.eq(q) else 1.0
    prec = max(
        [c.precision_bits for c in p.coords if isinstance(c, BigFloat)]
        + [c.precision_bits for c in q.coords if isinstance(c, BigFloat)]
        + [53]
    )
    with mpmath.workprec(prec):
        vals_p = _float_coords(p)
        vals_q = _float_coords(q)
        d1 = max(abs(a - b) for a, b in zip(vals_p, vals_q))
        d2 = max(abs(a + b) for a, b in zip(vals_p, vals_q))
        return float(min(d1, d2))


def _float_coords(p: ProjectivePoint):
    vals = [
        c.value if isinstance(c, BigFloat) else mpmath.mpf(c.numerator) / c.denominator
        if isinstance(c, Fraction)
        else mpmath.mpf(c)
        for c in p.coords
    ]
    mx = max(vals, key=abs)
    if mx == 0:
        raise PrecisionExhaustedError(
            "all coordinates vanished; raise precision or use the exact backend"
        )
    return [v / mx for v in vals]


# ---------------------------------------------------------------------------
# orbit verification


def _step_points(family, mats, point, zero_tol=None):
    if family == "pk":
        return [apply_linear(mats[0], apply_J(point[0], zero_tol))]
    img = apply_J_multi(point, zero_tol)
    return [apply_linear(m, p) for m, p in zip(mats, img)]


def _points_equal(a, b) -> bool:
    return all(p.eq(q) for p, q in zip(a, b))


def _residual(a, b) -> float:
    return max(projective_residual(p, q) for p, q in zip(a, b))


def _near_indeterminacy(point, zero_tol=None) -> bool:
    return len(point[0].zero_pattern(zero_tol)) >= 2


def verify_orbit(
    construction, backend: str = "exact", precision_bits: int = 256
) -> OrbitCheckReport:
    """Check the orbit-data conditions for F = L o J.

    (a) each exceptional image of a singleton orbit is the next
        indeterminacy point (column j of L proportional to e_{j+1});
    (b) the length-n orbit closes: F^{n-1} of the last column lands on the
        first coordinate point;
    (c) no intermediate orbit point meets the indeterminacy locus.
    """
    family = construction.family
    k = construction.k
    mats, delta, tau = _prepare(construction, backend, precision_bits)
    if family == "lines":
        n_steps = construction.n * (k + 1)
    else:
        n_steps = construction.n
    report = OrbitCheckReport(
        family=family,
        k=k,
        n=construction.n,
        m=construction.m,
        backend=backend if backend == "exact" else f"float({precision_bits})",
    )
    one = _matrix_one(mats[0])
    # (a): singleton orbits close immediately
    ok_a = True
    worst_a = 0.0
    for j in range(k):
        target = ProjectivePoint.standard_basis(j + 1, k, one=one)
        for m in mats:
            col = m.column(j)
            if not col.eq(target):
                ok_a = False
            worst_a = max(worst_a, projective_residual(col, target))
    report.conditions.append(
        ConditionResult("singleton orbits close", ok_a, worst_a)
    )
    # (b)/(c): iterate the long orbit
    e0 = [ProjectivePoint.standard_basis(0, k, one=one) for _ in mats]
    point = [m.column(k) for m in mats]
    ok_c = True
    fail_step = None
    for step in range(1, n_steps):
        if _near_indeterminacy(point):
            ok_c = False
            fail_step = step - 1
            break
        try:
            point = _step_points(family, mats, point)
        except IndeterminacyError:
            ok_c = False
            fail_step = step
            break
        report.orbit_points.append((step, [list(p.coords) for p in point]))
    if ok_c:
        closed = _points_equal(point, e0)
        res_b = _residual(point, e0)
        report.conditions.append(
            ConditionResult("long orbit closes at e0", closed, res_b)
        )
        report.conditions.append(
            ConditionResult("no premature indeterminacy", True, 0.0)
        )
    else:
        report.conditions.append(
            ConditionResult(
                "long orbit closes at e0", False, 1.0,
                f"orbit died at step {fail_step}",
            )
        )
        report.conditions.append(
            ConditionResult(
                "no premature indeterminacy", False, 1.0,
                f"indeterminacy at step {fail_step}",
            )
        )
    if family != "lines":
        inv = verify_curve_invariance(
            construction, samples=3, backend=backend, precision_bits=precision_bits
        )
        report.curve_invariant = inv.all_passed
        report.multiplier_measured = inv.multiplier_measured
        report.translation_detected = inv.translation_detected
        report.distinct = verify_distinctness(construction)
    return report


def _matrix_one(m: LinearMap):
    for row in m.matrix:
        for c in row:
            if isinstance(c, NumberFieldElement):
                return c.field.one()
            if isinstance(c, BigFloat):
                return BigFloat(1, c.precision_bits)
    return Fraction(1)


# ---------------------------------------------------------------------------
# curve invariance


@dataclass
class CurveReport:
    family: str
    k: int
    backend: str
    samples: list = field(default_factory=list)  # (t, image param, expected, ok)
    cusp_fixed: Optional[bool] = None
    multiplier_measured: object = None
    translation_detected: bool = False

    @property
    def all_passed(self) -> bool:
        return (
            bool(self.samples)
            and all(ok for *_, ok in self.samples)
            and self.cusp_fixed is not False
            and not self.translation_detected
        )


def apply_full_map(construction, point, backend="exact", precision_bits=256):
    """F = S o J o T^{-1} in the original frame, for pk or biproj."""
    T = construction.T_matrices
    S = construction.S_matrices
    if backend == "float":
        root = field_root(construction, precision_bits)
        T = [embed_matrix(m, root) for m in T]
        S = [embed_matrix(m, root) for m in S]
    if construction.family == "pk":
        pre = apply_linear(T[0].inverse(), point)
        return apply_linear(S[0], apply_J(pre))
    pre = BiProjectivePoint(
        apply_linear(T[0].inverse(), point.x),
        apply_linear(T[1].inverse(), point.y),
    )
    mid = apply_J_biproj(pre)
    return BiProjectivePoint(
        apply_linear(S[0], mid.x), apply_linear(S[1], mid.y)
    )


def _sample_params(construction, samples: int, backend, precision_bits):
    """Deterministic rational parameters away from the indeterminacy set."""
    excluded = list(construction.t_plus)
    out = []
    cand = 2
    while len(out) < samples:
        t = Fraction(cand, 7)
        cand += 1
        texact = t * _field_one(construction)
        if any(texact == e for e in excluded):
            continue
        out.append(t)
        if cand > 1000:
            raise VerificationError("could not find enough sample parameters")
    if backend == "float":
        root = field_root(construction, precision_bits)
        return [BigFloat(t, root.precision_bits) for t in out]
    return [t * _field_one(construction) for t in out]


def _field_one(construction):
    if construction.field is not None:
        return construction.field.one()
    return Fraction(1)


def _recover_param(construction, image, backend):
    k = construction.k
    if construction.family == "pk":
        return param_recover(image, k)
    t = param_recover(image.x, k)
    if t is OO:
        if not image.y.eq(ProjectivePoint.standard_basis(k, k)):
            raise NotOnCurveError(None, "second factor off the cusp")
        return OO
    if not image.y.eq(gamma_eval(t - t ** 0 * 1, k)):
        raise NotOnCurveError(None, "second factor off the curve")
    return t


def verify_curve_invariance(
    construction,
    samples: int = 20,
    backend: str = "exact",
    precision_bits: int = 256,
) -> CurveReport:
    """F(gamma(t)) = gamma(delta t + tau) on sampled parameters, plus the
    cusp; the multiplier is measured as the slope of the affine parameter map
    and a measured slope of 1 flags a translation (conjugate to the plain
    involution) instead of passing."""
    family = construction.family
    k = construction.k
    if backend == "float":
        root = field_root(construction, precision_bits)
        delta = root
        tau = embed_scalar(construction.tau, root)
    else:
        delta = construction.delta
        tau = construction.tau
    report = CurveReport(
        family=family,
        k=k,
        backend=backend if backend == "exact" else f"float({precision_bits})",
    )
    params = _sample_params(construction, samples, backend, precision_bits)
    images = []
    for t in params:
        p = gamma_eval(t, k) if family == "pk" else gamma1_eval(t, k)
        img = apply_full_map(construction, p, backend, precision_bits)
        expected = delta * t + tau
        try:
            got = _recover_param(construction, img, backend)
            ok = _scalars_close(got, expected)
        except NotOnCurveError:
            got, ok = None, False
        images.append(got)
        report.samples.append((t, got, expected, ok))
    # cusp: gamma(oo) must be fixed
    cusp = (
        gamma_eval(OO, k) if family == "pk" else gamma1_eval(OO, k)
    )
    try:
        cusp_img = apply_full_map(construction, cusp, backend, precision_bits)
        got = _recover_param(construction, cusp_img, backend)
        report.cusp_fixed = got is OO
    except (NotOnCurveError, IndeterminacyError):
        report.cusp_fixed = False
    # measured multiplier: slope through the first two good samples
    good = [
        (t, g) for (t, g, _, ok) in report.samples if ok and g is not None
    ]
    if len(good) >= 2:
        (t0, g0), (t1, g1) = good[0], good[1]
        slope = _scalar_quot(g1 - g0, t1 - t0)
        report.multiplier_measured = slope
        if _scalars_close(slope, slope ** 0):
            report.translation_detected = True
    return report


def _scalar_quot(a, b):
    if isinstance(b, NumberFieldElement):
        return a * b.inverse()
    return a / b


def _scalars_close(a, b) -> bool:
    if a is OO or b is OO:
        return a is b
    diff = a - b
    if isinstance(diff, NumberFieldElement):
        return diff.is_zero()
    if isinstance(diff, BigFloat):
        prec = diff.precision_bits
        scale = max(1.0, float(abs(BigFloat(a, prec)).value))
        return float(abs(diff).value) <= scale * 2.0 ** (-(prec // 2))
    return diff == 0


# ---------------------------------------------------------------------------
# distinctness


def blown_point_params(construction):
    """Parameters of all N = k + n blown-up points: the k+1 indeterminacy
    parameters plus the interior of the long orbit."""
    delta = construction.delta
    tau = construction.tau
    params = list(construction.t_plus)
    c = construction.s_params[construction.k]
    for _ in range(construction.n - 1):
        params.append(c)
        c = delta * c + tau
    return params, c  # c is the orbit endpoint, should equal t_plus[0]


def verify_distinctness(construction, injected=None) -> bool:
    params, endpoint = blown_point_params(construction)
    if injected is not None:
        params = list(params) + list(injected)
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            if params[i] == params[j]:
                return False
    return endpoint == construction.t_plus[0]


# ---------------------------------------------------------------------------
# concurrent lines


@dataclass
class LinesOrbitReport:
    k: int
    m: int
    n: int
    orbit_length: int
    closes: bool
    on_union: bool
    cyclic: bool
    line_sequence: list = field(default_factory=list)
    failure: Optional[str] = None

    @property
    def all_passed(self) -> bool:
        return self.closes and self.on_union and self.cyclic


def verify_lines_orbit(construction, backend: str = "exact",
                       precision_bits: int = 256) -> LinesOrbitReport:
    """Iterate F = (L_0 x .. x L_{m-1}) o J from the contracted image of the
    last coordinate hyperplane; the n(k+1) orbit points must stay on the
    union of lines and advance through the lines cyclically, and the final
    orbit point must map onto the indeterminacy point (e0,..,e0).
    Membership uses the lines through the concurrence point [1:...:1] and
    the coordinate points, which are the lines the map actually permutes."""
    if construction.family != "lines":
        raise VerificationError("lines-family construction required")
    k, m, n = construction.k, construction.m, construction.n
    mats, _, _ = _prepare(construction, backend, precision_bits)
    total = n * (k + 1)
    one = _matrix_one(mats[0])
    e0 = [ProjectivePoint.standard_basis(0, k, one=one) for _ in range(m)]
    point = [mat.column(k) for mat in mats]
    seq = []
    on_union = True
    failure = None
    for step in range(total):
        try:
            matches = concurrent_line_membership(point[0], k)
            seq.append(sorted(idx for idx, _ in matches))
        except NotOnCurveError:
            on_union = False
            failure = f"left the line union at step {step}"
            break
        if _near_indeterminacy(point):
            failure = f"premature indeterminacy at step {step}"
            break
        try:
            point = _step_points("lines", mats, point)
        except IndeterminacyError:
            failure = f"premature indeterminacy at step {step + 1}"
            break
    closes = failure is None and _points_equal(point, e0)
    # single-line steps must walk through the lines cyclically mod k+1
    single = [s[0] for s in seq if len(s) == 1]
    cyclic = _is_cyclic(single, k + 1)
    return LinesOrbitReport(
        k=k,
        m=m,
        n=n,
        orbit_length=total,
        closes=closes,
        on_union=on_union,
        cyclic=cyclic,
        line_sequence=seq,
        failure=failure,
    )


def _is_cyclic(indices, modulus) -> bool:
    if not indices:
        return False
    steps = [(b - a) % modulus for a, b in zip(indices, indices[1:])]
    return all(s in (0, 1) for s in steps) and set(indices) == set(range(modulus))
