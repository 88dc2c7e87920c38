"""Orbit-data verification, curve invariance, distinctness, lines orbits."""

from fractions import Fraction

import pytest

from cremona.arith import NumberField
from cremona.construct import (
    CoxeterConstruction,
    construct_biproj,
    construct_lines,
    construct_pk,
    curve_fixing_map,
)
from cremona.geometry import LinearMap
from cremona.polynomials import IntegerPolynomial
from cremona.verify import (
    blown_point_params,
    verify_curve_invariance,
    verify_distinctness,
    verify_lines_orbit,
    verify_orbit,
)


def test_pk_2_8_exact_all_pass():
    c = construct_pk(2, 8)
    rep = verify_orbit(c, backend="exact")
    assert rep.all_passed
    assert all(cond.residual == 0.0 for cond in rep.conditions)
    assert rep.distinct and rep.curve_invariant
    assert rep.multiplier_measured == c.delta


def test_pk_3_6_exact_pass():
    rep = verify_orbit(construct_pk(3, 6), backend="exact")
    assert rep.all_passed


def test_pk_float_backend_residuals():
    rep = verify_orbit(construct_pk(2, 8), backend="float", precision_bits=256)
    assert rep.all_passed
    assert max(cond.residual for cond in rep.conditions) < 2.0 ** -128


def test_biproj_exact_and_float():
    c = construct_biproj(2, 5)
    assert verify_orbit(c, backend="exact").all_passed
    rep = verify_orbit(c, backend="float", precision_bits=256)
    assert rep.all_passed
    assert max(cond.residual for cond in rep.conditions) < 2.0 ** -128


def test_perturbed_matrix_fails_closure():
    c = construct_pk(2, 8)
    L = c.L[0]
    rows = [list(r) for r in L.matrix]
    rows[1][0] = rows[1][0] + Fraction(1, 5)  # knock one beta off
    broken = CoxeterConstruction(
        family="pk",
        k=c.k,
        n=c.n,
        field=c.field,
        delta=c.delta,
        t_plus=c.t_plus,
        tau=c.tau,
        L=[LinearMap(rows)],
        T_matrices=c.T_matrices,
        S_matrices=c.S_matrices,
        s_params=c.s_params,
    )
    rep = verify_orbit(broken, backend="exact")
    closure = next(
        cond for cond in rep.conditions if cond.name == "long orbit closes at e0"
    )
    assert not closure.passed


def test_curve_invariance_pk_20_samples():
    c = construct_pk(2, 8)
    rep = verify_curve_invariance(c, samples=20, backend="exact")
    assert rep.all_passed
    assert rep.cusp_fixed
    assert rep.multiplier_measured == c.delta
    # the affine law forces parameter delta+1 at t=2
    sampled = {t: got for t, got, _, _ in rep.samples}
    t2 = Fraction(2) * c.field.one()
    if t2 in sampled:
        assert sampled[t2] == c.delta + 1


def test_curve_invariance_fixed_point():
    c = construct_pk(2, 8)
    from cremona.geometry import gamma_eval, param_recover
    from cremona.verify import apply_full_map

    img = apply_full_map(c, gamma_eval(c.field.one(), 2))
    assert param_recover(img, 2) == c.field.one()


def test_curve_invariance_biproj():
    c = construct_biproj(2, 5)
    rep = verify_curve_invariance(c, samples=20, backend="exact")
    assert rep.all_passed
    assert rep.cusp_fixed


def test_translation_guard():
    # multiplier 1 means the parameter action is a translation; the verifier
    # must flag it instead of passing
    t_plus = [Fraction(1, 2), Fraction(3), Fraction(-2)]
    T, S, tau, s_params = curve_fixing_map(2, Fraction(1), t_plus)
    stub = CoxeterConstruction(
        family="pk",
        k=2,
        n=1,
        field=None,
        delta=Fraction(1),
        t_plus=t_plus,
        tau=tau,
        L=[],
        T_matrices=[T],
        S_matrices=[S],
        s_params=s_params,
    )
    rep = verify_curve_invariance(stub, samples=4, backend="exact")
    assert rep.translation_detected
    assert not rep.all_passed


def test_distinctness():
    for c in (construct_pk(2, 8), construct_pk(3, 6), construct_biproj(2, 5)):
        assert verify_distinctness(c)


def test_distinctness_counts():
    c = construct_pk(2, 8)
    params, endpoint = blown_point_params(c)
    assert len(params) == c.k + c.n  # N = k + n
    assert endpoint == c.t_plus[0]


def test_distinctness_negative_control():
    c = construct_pk(2, 8)
    assert not verify_distinctness(c, injected=[c.t_plus[0]])


# ---------------------------------------------------------------------------
# lines family


def test_lines_orbit_exact_closes():
    rep = verify_lines_orbit(construct_lines(2, 2, 2), backend="exact")
    assert rep.closes and rep.on_union and rep.cyclic
    assert rep.orbit_length == 6
    assert rep.line_sequence == [[0], [1], [2], [0], [1], [2]]


def test_lines_orbit_float_various_cells():
    for k, m, n in ((2, 2, 3), (2, 3, 2), (3, 2, 2)):
        rep = verify_lines_orbit(
            construct_lines(k, m, n), backend="float", precision_bits=192
        )
        assert rep.closes and rep.on_union and rep.cyclic
        assert rep.orbit_length == n * (k + 1)


def test_lines_orbit_single_line_membership():
    rep = verify_lines_orbit(construct_lines(2, 2, 2), backend="exact")
    # away from the concurrence point each orbit point is on exactly one line
    assert all(len(entry) == 1 for entry in rep.line_sequence)


def test_lines_small_case_orbit_length_three():
    # k=2, m=2, n=1: the Coxeter element is periodic, so the multiplier is
    # taken from the closure condition's only non-degenerate factor
    # a^3 + a^2 - 1; the three orbit points walk the lines cyclically and
    # the last one is the coordinate point where the orbit terminates.
    fld = NumberField(IntegerPolynomial([-1, 0, 1, 1]))
    c = construct_lines(2, 2, 1, alpha=fld.gen())
    rep = verify_lines_orbit(c, backend="exact")
    assert rep.orbit_length == 3
    assert rep.on_union and rep.cyclic
    assert rep.line_sequence == [[0], [1], [2]]
    assert not rep.closes  # terminal point collides with a singleton orbit


def test_lines_wrong_family_rejected():
    from cremona.verify import VerificationError

    with pytest.raises(VerificationError):
        verify_lines_orbit(construct_pk(2, 8))
