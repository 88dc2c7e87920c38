"""Command-line front end: machine-readable JSON reports and exit codes for
the spectral, construction, verification and lattice pipelines.

Exit codes: 0 success, 2 invalid input, 3 exceptional parameter pair,
4 verification failure.  Exact field values are serialized as residue
coefficient arrays together with the modulus so they can be reconstructed
losslessly; decimals carry 30 significant digits by default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath

from .arith import BigFloat, NumberFieldElement, nf_embed
from .construct import (
    ExceptionalPairError,
    RootOfUnityError,
    construct_biproj,
    construct_lines,
    construct_pk,
)
from .picard import (
    LatticeError,
    OrbitData,
    PicardLattice,
    berkowitz_charpoly,
    canonical_pairings,
    coxeter_action,
    pair,
    preserves_form,
    trace_compatibility,
)
from .polynomials import IntegerPolynomial
from .spectra import char_poly_pk, spectral_report
from .verify import (
    VerificationError,
    blown_point_params,
    field_root,
    verify_lines_orbit,
    verify_orbit,
)

SCHEMA_VERSION = 1
DECIMAL_DIGITS = 30
PRECISION_ENV = "CREMONA_PRECISION_BITS"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EXCEPTIONAL = 3
EXIT_VERIFY = 4


# ---------------------------------------------------------------------------
# serialization helpers


def frac_str(f) -> str:
    f = Fraction(f)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def decimal_str(value, precision_bits: int) -> str:
    """Fixed-width decimal rendering; deterministic for a given precision."""
    if isinstance(value, BigFloat):
        precision_bits = value.precision_bits
        value = value.value
    with mpmath.workprec(precision_bits):
        return mpmath.nstr(
            mpmath.mpf(value) if not isinstance(value, (mpmath.mpf, mpmath.mpc))
            else value,
            DECIMAL_DIGITS,
            strip_zeros=False,
        )


def ser_exact(x):
    """Lossless form of an exact scalar."""
    if isinstance(x, NumberFieldElement):
        return {
            "residue": [frac_str(c) for c in x.residue],
            "modulus": list(x.modulus.coeffs),
        }
    return frac_str(x)


def ser_scalar(x, root):
    out = {"exact": ser_exact(x)}
    if isinstance(x, NumberFieldElement):
        out["decimal"] = decimal_str(nf_embed(x, root), root.precision_bits)
    else:
        out["decimal"] = decimal_str(
            BigFloat(Fraction(x), root.precision_bits), root.precision_bits
        )
    return out


def ser_matrix(m, root):
    return {
        "exact": [[ser_exact(c) for c in row] for row in m.matrix],
        "decimal": [
            [ser_scalar(c, root)["decimal"] for c in row] for row in m.matrix
        ],
    }


def ser_poly(p: IntegerPolynomial):
    """Coefficients, constant term first."""
    return list(p.coeffs)


def emit(payload, out_path) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _build_construction(args):
    if args.family == "pk":
        return construct_pk(args.k, args.n)
    if args.family == "biproj":
        return construct_biproj(args.k, args.n)
    if args.family == "lines":
        return construct_lines(args.k, args.m, args.n)
    raise ValueError(f"unknown family {args.family!r}")


def _degree_payload(family: str, k: int, n: int, precision_bits: int):
    rep = spectral_report(family, k, n, precision_bits)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "degree",
        "family": family,
        "k": k,
        "n": n,
        "characteristic_polynomial": ser_poly(rep.full_poly),
        "cyclotomic_factors": [[d, mult] for d, mult in rep.cyclotomic_factors],
        "salem_factor": ser_poly(rep.salem_factor) if rep.salem_factor else None,
        "exceptional": rep.exceptional,
        "exceptional_list_member": rep.literal_gamma_member,
        "exceptional_list_agrees": rep.gamma_agrees,
        "notes": rep.notes,
    }
    if rep.delta is not None:
        payload["delta"] = {
            "decimal": decimal_str(rep.delta.value, precision_bits),
            "interval": [frac_str(rep.delta.low), frac_str(rep.delta.high)],
        }
    else:
        payload["delta"] = None
    return payload


def cmd_degree(args) -> int:
    if args.sweep:
        cells = _sweep_cells(args.sweep)
        with ProcessPoolExecutor() as pool:
            reports = list(
                pool.map(
                    _degree_cell,
                    [(args.family, k, n, args.precision) for k, n in cells],
                )
            )
        emit(
            {
                "schema": SCHEMA_VERSION,
                "command": "degree-sweep",
                "family": args.family,
                "cells": reports,
            },
            args.out,
        )
        return EXIT_OK
    payload = _degree_payload(args.family, args.k, args.n, args.precision)
    emit(payload, args.out)
    return EXIT_OK


def _degree_cell(job):
    family, k, n, precision = job
    return _degree_payload(family, k, n, precision)


def _sweep_cells(spec_pair):
    def parse_range(text):
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi or lo)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return range(lo, hi + 1)

    ks, ns = (parse_range(t) for t in spec_pair)
    return [(k, n) for k in ks for n in ns]


def _construction_payload(construction, precision_bits: int):
    root = field_root(construction, precision_bits)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "construct",
        "family": construction.family,
        "k": construction.k,
        "n": construction.n,
        "modulus": ser_poly(construction.modulus),
        "delta": ser_scalar(construction.delta, root),
        "tau": ser_scalar(construction.tau, root),
        "t_plus": [ser_scalar(t, root) for t in construction.t_plus],
        "s_params": [ser_scalar(s, root) for s in construction.s_params],
        "L": [ser_matrix(m, root) for m in construction.L],
        "notes": list(construction.notes),
    }
    if construction.m is not None:
        payload["m"] = construction.m
    one = construction.field.one()
    checks = {}
    ones = [one] * (construction.k + 1)
    images = []
    for mat in construction.L:
        img = [
            sum((row[j] * ones[j] for j in range(len(row))), construction.field.zero())
            for row in mat.matrix
        ]
        images.append(img)
    if construction.family == "pk":
        checks["fixes_ones"] = all(c == one for c in images[0])
    checks["row_sums"] = [
        [ser_scalar(c, root)["decimal"] for c in img] for img in images
    ]
    payload["self_check"] = checks
    return payload


def cmd_construct(args) -> int:
    construction = _build_construction(args)
    emit(_construction_payload(construction, args.precision), args.out)
    return EXIT_OK


def _condition_dicts(report):
    return [
        {
            "name": c.name,
            "passed": c.passed,
            "residual": c.residual,
            "detail": c.detail,
        }
        for c in report.conditions
    ]


def cmd_verify(args) -> int:
    construction = _build_construction(args)
    root = field_root(construction, args.precision)
    if args.family == "lines":
        rep = verify_lines_orbit(construction, args.backend, args.precision)
        payload = {
            "schema": SCHEMA_VERSION,
            "command": "verify",
            "family": "lines",
            "k": rep.k,
            "m": rep.m,
            "n": rep.n,
            "backend": args.backend,
            "seed": args.seed,
            "orbit_length": rep.orbit_length,
            "closes": rep.closes,
            "on_union": rep.on_union,
            "cyclic": rep.cyclic,
            "line_sequence": rep.line_sequence,
            "failure": rep.failure,
        }
        emit(payload, args.out)
        return EXIT_OK if (rep.closes and rep.on_union and rep.cyclic) else EXIT_VERIFY
    rep = verify_orbit(construction, args.backend, args.precision)
    params, endpoint = blown_point_params(construction)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "family": rep.family,
        "k": rep.k,
        "n": rep.n,
        "backend": rep.backend,
        "seed": args.seed,
        "conditions": _condition_dicts(rep),
        "orbit_parameters": [ser_scalar(t, root) for t in params],
        "orbit_endpoint": ser_scalar(endpoint, root),
        "distinct": rep.distinct,
        "curve_invariant": rep.curve_invariant,
        "multiplier": (
            ser_scalar(rep.multiplier_measured, root)
            if isinstance(rep.multiplier_measured, NumberFieldElement)
            else (
                decimal_str(rep.multiplier_measured, args.precision)
                if rep.multiplier_measured is not None
                else None
            )
        ),
        "translation_detected": rep.translation_detected,
        "max_residual": max((c.residual for c in rep.conditions), default=0.0),
        "notes": rep.notes,
    }
    emit(payload, args.out)
    ok = rep.all_passed and rep.distinct and rep.curve_invariant
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_orbit_data(args) -> OrbitData:
    if args.lengths:
        lengths = tuple(int(t) for t in args.lengths.split(","))
        if args.sigma:
            sigma = tuple(int(t) for t in args.sigma.split(","))
        else:
            sigma = tuple((i + 1) % len(lengths) for i in range(len(lengths)))
        return OrbitData(lengths=lengths, sigma=sigma)
    return OrbitData.coxeter(args.k, args.n)


def cmd_picard(args) -> int:
    orbit = _parse_orbit_data(args)
    k = args.k
    lat = PicardLattice(k, orbit)
    action, _ = coxeter_action(k, orbit)
    gram = lat.gram()
    roots = lat.roots()
    root_gram = [[pair(gram, a, b) for b in roots] for a in roots]
    cp = berkowitz_charpoly(action)
    from .picard import spectral_radius as lattice_radius

    radius, _, salem = lattice_radius(action, args.precision)
    kk, kc = canonical_pairings(k, orbit)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "picard",
        "k": k,
        "orbit_lengths": list(orbit.lengths),
        "sigma": list(orbit.sigma),
        "rank": lat.rank,
        "gram": gram,
        "root_gram": root_gram,
        "action": action,
        "characteristic_polynomial": ser_poly(cp),
        "salem_factor": ser_poly(salem) if salem else None,
        "spectral_radius": decimal_str(radius, args.precision),
        "K_self_intersection": kk,
        "K_dot_curve": kc,
        "preserves_form": preserves_form(action, gram),
    }
    # cross-check against the family characteristic polynomial when the data
    # is the cyclic (1,...,1,n) case it was derived for
    if orbit.lengths == tuple([1] * k + [orbit.lengths[-1]]) and orbit.sigma == tuple(
        (i + 1) % (k + 1) for i in range(k + 1)
    ):
        n = orbit.lengths[-1]
        family_poly = char_poly_pk(k, n)
        lifted = cp * IntegerPolynomial([-1, 1])
        payload["family_polynomial_matches"] = (
            lifted == family_poly or -lifted == family_poly
        )
    emit(payload, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    bundle = {
        "schema": SCHEMA_VERSION,
        "command": "report",
        "family": args.family,
        "k": args.k,
        "n": args.n,
        "seed": args.seed,
    }
    rep = spectral_report(args.family, args.k, args.n, args.precision)
    bundle["degree"] = _degree_payload(args.family, args.k, args.n, args.precision)
    if rep.exceptional:
        bundle["exceptional_notice"] = (
            f"({args.k},{args.n}) is an exceptional pair: the multiplier would "
            "be a root of unity, so construction and verification are skipped"
        )
        emit(bundle, args.out)
        return EXIT_EXCEPTIONAL
    construction = _build_construction(args)
    root = field_root(construction, args.precision)
    bundle["construct"] = _construction_payload(construction, args.precision)
    verify_rep = verify_orbit(construction, args.backend, args.precision)
    bundle["verify"] = {
        "conditions": _condition_dicts(verify_rep),
        "all_passed": verify_rep.all_passed,
        "distinct": verify_rep.distinct,
        "curve_invariant": verify_rep.curve_invariant,
        "translation_detected": verify_rep.translation_detected,
    }
    cross = {}
    if args.family == "pk":
        orbit = OrbitData.coxeter(args.k, args.n)
        action, _ = coxeter_action(args.k, orbit)
        from .picard import spectral_radius as lattice_radius

        radius, cp, salem = lattice_radius(action, args.precision)
        bundle["picard"] = {
            "characteristic_polynomial": ser_poly(cp),
            "spectral_radius": decimal_str(radius, args.precision),
        }
        cross["lattice_radius_matches_delta"] = (
            abs(float(radius) - float(root)) < 1e-10
        )
        trace_rep = trace_compatibility(construction)
        cross["trace_compatibility"] = [
            {"class": desc, "passed": ok} for desc, ok in trace_rep.checked
        ]
        cross["salem_divides_lattice_polynomial"] = trace_rep.salem_divides
    mult = verify_rep.multiplier_measured
    cross["multiplier_equals_delta"] = (
        isinstance(mult, NumberFieldElement) and mult == construction.delta
    ) or (
        mult is not None
        and not isinstance(mult, NumberFieldElement)
        and abs(float(mult) - float(root)) < 2.0 ** (-args.precision // 2)
    )
    bundle["cross_checks"] = cross
    emit(bundle, args.out)
    ok = (
        verify_rep.all_passed
        and verify_rep.distinct
        and verify_rep.curve_invariant
        and cross.get("multiplier_equals_delta", True)
    )
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return 256


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cremona",
        description="Construct and verify pseudoautomorphism-inducing "
        "Cremona maps and their dynamical degrees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        if family:
            p.add_argument(
                "--family", choices=("pk", "biproj", "lines"), default="pk"
            )
        p.add_argument("-k", type=int, default=2)
        p.add_argument("-n", type=int, default=8)
        p.add_argument("-m", type=int, default=2, help="factor count (lines)")
        p.add_argument(
            "--backend", choices=("exact", "float"), default="exact"
        )
        p.add_argument("--precision", type=int, default=_default_precision())
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p_degree = sub.add_parser("degree", help="spectral report for one cell")
    common(p_degree)
    p_degree.add_argument(
        "--sweep",
        nargs=2,
        metavar=("KRANGE", "NRANGE"),
        default=None,
        help="evaluate a kmin..kmax nmin..nmax grid in parallel",
    )
    p_degree.set_defaults(func=cmd_degree)

    p_construct = sub.add_parser("construct", help="build the map data")
    common(p_construct)
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser("verify", help="verify orbit-data conditions")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_picard = sub.add_parser("picard", help="lattice action report")
    common(p_picard)
    p_picard.add_argument(
        "--lengths", default=None, help="comma-separated orbit lengths"
    )
    p_picard.add_argument(
        "--sigma", default=None, help="comma-separated permutation images"
    )
    p_picard.set_defaults(func=cmd_picard)

    p_report = sub.add_parser("report", help="full bundle with cross-checks")
    common(p_report)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 64:
        parser.error("--precision must be >= 64")
    try:
        return args.func(args)
    except ExceptionalPairError as exc:
        sys.stderr.write(
            f"exceptional pair: {exc}; the multiplier would be a root of "
            "unity and the construction is refused\n"
        )
        return EXIT_EXCEPTIONAL
    except RootOfUnityError as exc:
        sys.stderr.write(f"root-of-unity multiplier: {exc}\n")
        return EXIT_EXCEPTIONAL
    except (LatticeError, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except VerificationError as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
