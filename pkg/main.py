# main.py
"""
Command-line front end for sharelab.

Commands:
1) verify       check both implications for a candidate
2) classify     list the solution families for (a, b)
3) diophantine  emptiness certificates behind the pivot coefficients
4) jet          run the Taylor-jet recurrence at an a-point or b-point

Exit codes: 0 holds, 1 violated, 2 holds on the scanned region only,
3 sharelab error, 4 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction

import classifier
import diophantine
import reports
from errors import InvalidParameters, ShareLabError
from functions import (
    AffineFunction,
    CandidateFunction,
    ExpPolyFunction,
    jet_at_t,
    jet_of,
    load_candidate,
    parse_expr,
)
from polynomials import Poly
from recurrence import (
    AnchorKind,
    RecurrenceContext,
    fpp_candidates_at_a,
    JetReport,
    jet_report,
    seed_at_a,
    seed_at_multiple_b,
    seed_at_simple_b,
)
from report_store import ReportStore
from scalars import FieldElement, FloatScalar, Regime, as_scalar, is_close, parse_scalar
from utils import OUTPUTS, REGIMES, CliConfig, configure_logging, get_config
from verifier import Region, SharingProblem, align_regimes, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 3
EXIT_USAGE = 4


# values that start with "-": -1/8, -1+2i, -i, -5,5,-5,5 and --coeffs -a,1,1
_NEGATIVE_VALUE = re.compile(r"^-(?:[\d.][\d.,/+\-*eiw@]*|i|[ab](?:,[\w.,/+\-*@]*)?)$")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 4 so they never look like a verdict."""

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE_VALUE

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------- helpers ----------


def scalar(text: str) -> FieldElement:
    return parse_scalar(text)


def _emit(config: CliConfig, text: str, payload: dict) -> None:
    if config.output == "structured":
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)


def _save(args: argparse.Namespace, event_type: str, meta: dict, payload: dict) -> None:
    if args.out is None:
        return
    store = ReportStore(args.out or None)
    store.append(store.create_entry(event_type, meta, payload))


def _coeffs(text: str, a: FieldElement | None, b: FieldElement | None) -> tuple[FieldElement, ...]:
    """Comma-separated coefficients, lowest power first; `a`, `b`, `-a`, `-b` are placeholders."""
    values = []
    for token in text.split(","):
        token = token.strip()
        sign = 1
        if token.startswith("-") and token[1:] in ("a", "b"):
            sign, token = -1, token[1:]
        if token in ("a", "b"):
            value = a if token == "a" else b
            if value is None:
                raise InvalidParameters(f"--coeffs uses {token!r} but --{token} is not given")
            values.append(value if sign == 1 else -value)
        else:
            values.append(parse_scalar(token))
    return tuple(values)


def _is_float_candidate(f: CandidateFunction) -> bool:
    if isinstance(f, ExpPolyFunction):
        return isinstance(f.lam, FloatScalar) or f.poly.regime is Regime.FLOAT
    if isinstance(f, AffineFunction):
        return isinstance(f.slope, FloatScalar) or isinstance(f.intercept, FloatScalar)
    return False


def _apply_regime(
    f: CandidateFunction, prob: SharingProblem, config: CliConfig
) -> tuple[CandidateFunction, SharingProblem]:
    if config.regime == "float":
        return align_regimes(f, prob.to_float(config.precision_bits), config.precision_bits)
    if config.regime == "exact":
        if _is_float_candidate(f) or isinstance(prob.a, FloatScalar) or isinstance(prob.b, FloatScalar):
            raise InvalidParameters("exact regime requested but some input is a float")
        return f, prob
    return align_regimes(f, prob, config.precision_bits)


def _candidate(args: argparse.Namespace) -> tuple[CandidateFunction, FieldElement | None, FieldElement | None, object]:
    """(function, a, b, family or None) from the candidate flags."""
    a, b = args.a, args.b
    if args.family:
        family = classifier.family_by_kind(args.family, a, b)
        return family.instantiate(args.C).function, family.a, family.b, family
    if args.expr:
        return parse_expr(args.expr), a, b, None
    if args.exppoly:
        if args.lam is None or args.coeffs is None:
            raise InvalidParameters("--exppoly needs --lambda and --coeffs")
        return ExpPolyFunction(args.lam, Poly(_coeffs(args.coeffs, a, b))), a, b, None
    if args.affine:
        if args.slope is None or args.intercept is None:
            raise InvalidParameters("--affine needs --slope and --intercept")
        return AffineFunction(args.slope, args.intercept), a, b, None
    if args.candidate:
        cand = load_candidate(args.candidate)
        return cand.function, a if a is not None else cand.a, b if b is not None else cand.b, None
    raise InvalidParameters("give a candidate file or one of --family, --expr, --exppoly, --affine")


def _require_ab(a, b) -> tuple[FieldElement, FieldElement]:
    if a is None or b is None:
        raise InvalidParameters("both --a and --b are required")
    return a, b


# ---------- commands ----------


def cmd_verify(args: argparse.Namespace, config: CliConfig) -> int:
    f, a, b, _ = _candidate(args)
    a, b = _require_ab(a, b)
    prob = SharingProblem(a, b, relaxed=config.relaxed)
    f, prob = _apply_regime(f, prob, config)
    region = Region.parse(args.region) if args.region else None
    report = verify(
        f,
        prob,
        tol=config.tol,
        precision_bits=config.precision_bits,
        samples=args.samples,
        region=region,
        grid=args.grid,
        root_maxiter=config.root_maxiter,
        newton_maxiter=config.newton_maxiter,
    )
    payload = report.to_dict()
    payload["exit_code"] = report.exit_code
    _emit(config, reports.render_verification(report), payload)
    _save(args, "verify", {"candidate": report.candidate, "exit_code": report.exit_code}, payload)
    return report.exit_code


def cmd_classify(args: argparse.Namespace, config: CliConfig) -> int:
    a, b = _require_ab(args.a, args.b)
    families = classifier.classify(a, b, config.tol)
    payload: dict = {
        "a": as_scalar(a).serialize(),
        "b": as_scalar(b).serialize(),
        "families": [f.to_dict() for f in families],
        "includes_iv": any(f.kind == "iv" for f in families),
    }
    text = reports.render_families(families, a, b)
    code = EXIT_OK

    if args.check:
        checks = {}
        for family in families:
            report = classifier.verify_family(family, args.C, config.tol, config.precision_bits)
            checks[family.kind] = report.holds
            if not report.holds:
                code = EXIT_FAILED
        payload["checks"] = checks
        text += "\n" + "\n".join(f"({kind}) verified: {'yes' if ok else 'NO'}" for kind, ok in checks.items())

    if args.cases:
        analysis = classifier.case_analysis(args.nmax, config.precision_bits)
        payload["case_analysis"] = analysis.to_dict()
        text += "\n\n" + reports.render_case_analysis(analysis)
        if not analysis.only_d2_survives:
            code = EXIT_FAILED

    _emit(config, text, payload)
    _save(args, "classify", {"a": payload["a"], "b": payload["b"]}, payload)
    return code


def _parse_congruence(text: str | None) -> tuple[int, int] | None:
    if not text:
        return None
    try:
        residue, modulus = (int(x) for x in text.split(":"))
    except ValueError as e:
        raise InvalidParameters(f"--xmod expects RESIDUE:MODULUS, got {text!r}") from e
    return residue, modulus


def _parse_unit(text: str | None) -> tuple[int, int] | None:
    if not text:
        return None
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError as e:
        raise InvalidParameters(f"--unit expects X,Y, got {text!r}") from e
    return x, y


_NMAX_DEFAULTS = {"squares": 10**6, "mnk": 100, "djeq": 10**4, "all": 10**4}
_KMAX_DEFAULTS = {"mnk": 100, "djeq": 4}
DIOPHANTINE_CERTIFICATES = ("squares", "mod9", "diffsq", "pell", "mnk", "djeq", "all")
DIOPHANTINE_PARAMS = ("k", "nmax", "D", "N", "xmod", "y", "bound", "unit", "kmin", "kmax", "mmax", "dmax", "jmax")


def diophantine_certificate(
    name: str,
    k: int = 2,
    nmax: int | None = None,
    D: int = 3,
    N: int = 13,
    xmod: str | None = None,
    y: str = "any",
    bound: str = "51",
    unit: str | None = None,
    kmin: int = 2,
    kmax: int | None = None,
    mmax: int = 99,
    dmax: int = 12,
    jmax: int = 6,
) -> tuple[str, dict, bool]:
    """(title, payload, expected outcome holds) for one named certificate."""
    if name not in DIOPHANTINE_CERTIFICATES:
        raise InvalidParameters(f"unknown certificate {name!r}; one of {DIOPHANTINE_CERTIFICATES}")
    nmax = nmax if nmax is not None else _NMAX_DEFAULTS.get(name, 10**4)
    kmax = kmax if kmax is not None else _KMAX_DEFAULTS.get(name, 4)
    if name == "squares":
        hits = diophantine.square_family_scan(k, nmax)
        return f"(k+1)(n+1)^2 + n squares, k={k}", {"k": k, "n_max": nmax, "hits": hits}, not hits
    if name == "mod9":
        sieve = diophantine.mod_sieve_k4()
        return "5(n+1)^2 + n modulo 9", sieve.to_dict(), sieve.disjoint
    if name == "diffsq":
        result = diophantine.diff_squares_k3()
        return "x^2 - y^2 = 17, x = 8n+9", result.to_dict(), not result.positive_n_solutions
    if name == "pell":
        try:
            bound_value = Fraction(bound)
        except ValueError as e:
            raise InvalidParameters(f"bound must be a rational number, got {bound!r}") from e
        inst = diophantine.PellInstance(
            D=D,
            N=N,
            x_congruence=_parse_congruence(xmod),
            y_parity=y,
            bound=bound_value,
            unit=_parse_unit(unit),
        )
        solutions, cert = diophantine.pell_descent(inst)
        return f"x^2 - {D} y^2 = {N}", cert.to_dict(), cert.complete and not solutions
    if name == "mnk":
        hits = diophantine.mnk_feasible(nmax, kmax, mmax)
        argument = diophantine.mnk_closed_argument(nmax, kmax)
        ok = not hits and argument.m1_row_zero and argument.inequality_holds
        payload = {"hits": [list(h) for h in hits], "closed_argument": argument.to_dict()}
        return "(1 - 1/m^2)((n+1)^2 (k+1) + n) = 4(n+1)", payload, ok
    if name == "djeq":
        ks = tuple(range(kmin, kmax + 1))
        hits = diophantine.dj_equation_sweep(dmax, jmax, ks, nmax)
        payload = {"d_max": dmax, "j_max": jmax, "k": list(ks), "n_max": nmax, "hits": [list(h) for h in hits]}
        return "d^2 j^2 (n+1)^2 S = (d^2 n + j^2 (n+1)^2 (k+1))^2", payload, not hits
    bundle = diophantine.pivot_nonvanishing_certificates(nmax)
    return "pivot certificates for k = 2, 3, 4", bundle.to_dict(), bundle.all_empty


def cmd_diophantine(args: argparse.Namespace, config: CliConfig) -> int:
    params = {name: getattr(args, name) for name in DIOPHANTINE_PARAMS if getattr(args, name, None) is not None}
    title, payload, ok = diophantine_certificate(args.certificate, **params)
    payload = dict(payload, certificate=args.certificate, passed=ok)
    _emit(config, reports.render_certificate(title, payload, ok), payload)
    _save(args, f"diophantine_{args.certificate}", {"passed": ok}, payload)
    return EXIT_OK if ok else EXIT_FAILED


JET_ANCHORS = tuple(kind.value for kind in AnchorKind) + ("b-point",)


def _choose_fpp(ctx: RecurrenceContext, choice: str | None, oracle_fpp, precision_bits: int) -> FieldElement:
    plus, minus = fpp_candidates_at_a(ctx, precision_bits)
    if choice == "plus":
        return plus
    if choice == "minus":
        return minus
    if choice is not None:
        return parse_scalar(choice)
    if oracle_fpp is not None:
        for value in (plus, minus):
            if is_close(value, oracle_fpp, 1e-24):
                return value
        logger.warning("closed-form f'' = %s is neither admissible value %s, %s", oracle_fpp, plus, minus)
        return oracle_fpp
    return plus


def run_jet(
    config: CliConfig,
    family: str | None = None,
    function: CandidateFunction | None = None,
    a=None,
    b=None,
    C=1,
    k: int = 1,
    anchor: str = "a-point",
    order: int | None = None,
    t=None,
    at=None,
    fpp: str | None = None,
    leading=None,
) -> JetReport:
    """
    Seed the recurrence at an anchor and extend it to `order`. A family or a
    closed-form function supplies the comparison jet; a family also fixes
    k, the anchor location and the free coefficient at a multiple b-point.
    """
    order = order if order is not None else config.jet_order
    if anchor not in JET_ANCHORS:
        raise InvalidParameters(f"anchor must be one of {JET_ANCHORS}, got {anchor!r}")
    oracle = None
    if family:
        fam = classifier.family_by_kind(family, a, b)
        if anchor == "b-point":
            anchor = "multiple-b-point" if fam.kind == "iv" else "simple-b-point"
        k, t0 = classifier.family_jet_setup(fam, anchor, C)
        if t is not None:
            t0 = as_scalar(t)
        oracle = jet_at_t(fam.instantiate(C).function, t0, max(order, k + 2))
        a, b = fam.a, fam.b
    else:
        if anchor == "b-point":
            anchor = "simple-b-point"
        a, b = _require_ab(a, b)
        if function is not None:
            oracle = jet_of(function, at if at is not None else 0, max(order, k + 2), config.precision_bits)

    ctx = RecurrenceContext(a, b, k, AnchorKind(anchor), relaxed=config.relaxed)
    z0 = oracle.anchor if oracle is not None else (at if at is not None else 0)
    if ctx.anchor_kind is AnchorKind.AT_A_POINT:
        seed = seed_at_a(ctx, _choose_fpp(ctx, fpp, oracle.derivs[2] if oracle else None, config.precision_bits), z0)
    elif ctx.anchor_kind is AnchorKind.AT_SIMPLE_B_POINT:
        seed = seed_at_simple_b(ctx, z0)
    else:
        if leading is None and oracle is not None:
            leading = oracle.derivs[k + 2]
        if leading is None:
            raise InvalidParameters("a multiple b-point needs the value of f^(k+2) at the anchor")
        seed = seed_at_multiple_b(ctx, leading, z0)
    return jet_report(seed, ctx, order, oracle, config.tol, config.precision_bits)


def cmd_jet(args: argparse.Namespace, config: CliConfig) -> int:
    function = None
    if not args.family and (args.expr or args.exppoly or args.affine or args.candidate):
        function, _, _, _ = _candidate(args)
    report = run_jet(
        config,
        family=args.family,
        function=function,
        a=args.a,
        b=args.b,
        C=args.C,
        k=args.k,
        anchor=args.anchor,
        order=args.order,
        t=args.t,
        at=args.at,
        fpp=args.fpp,
        leading=args.leading,
    )
    payload = report.to_dict()
    _emit(config, reports.render_jet(report), payload)
    _save(args, "jet", {"anchor": report.context.anchor_kind.value, "order": report.jet.order}, payload)
    return EXIT_FAILED if report.matches is False else EXIT_OK


# ---------- parser ----------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="float precision in bits (SHARELAB_PRECISION)")
    common.add_argument("--tol", type=float, help="certification tolerance (SHARELAB_TOL)")
    common.add_argument("--regime", choices=REGIMES, help="exact, float or auto (SHARELAB_REGIME)")
    common.add_argument("--output", choices=OUTPUTS, help="text or structured (JSON)")
    common.add_argument("--relaxed", action="store_true", default=None, help="allow a = 0 or b = 0")
    common.add_argument("--log-level", help="logging level (SHARELAB_LOG_LEVEL)")
    common.add_argument(
        "--out",
        nargs="?",
        const="",
        default=None,
        metavar="PATH",
        help="append the report to a JSON history (default SHARELAB_REPORT_FILE)",
    )
    return common


def _candidate_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("candidate", nargs="?", help="candidate JSON file")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--family", choices=classifier.FAMILY_KINDS, help="a solution family")
    source.add_argument("--expr", help="closed form in z, e.g. 'exp(z^3)-1'")
    source.add_argument("--exppoly", action="store_true", help="P(e^(lambda z)) from --lambda and --coeffs")
    source.add_argument("--affine", action="store_true", help="slope*z + intercept")
    p.add_argument("--a", type=scalar)
    p.add_argument("--b", type=scalar)
    p.add_argument("--C", type=scalar, default=parse_scalar("1"), help="family constant (default 1)")
    p.add_argument("--lambda", dest="lam", type=scalar)
    p.add_argument("--coeffs", help="coefficients of P, lowest power first; a and b are placeholders")
    p.add_argument("--slope", type=scalar)
    p.add_argument("--intercept", type=scalar)


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="sharelab", description="Entire functions sharing values with their derivative.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check both implications")
    _candidate_options(p)
    p.add_argument("--region", help="x0,x1,y0,y1 for closed-form candidates")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--samples", type=int, default=16)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("classify", parents=[common], help="solution families for (a, b)")
    p.add_argument("--a", type=scalar)
    p.add_argument("--b", type=scalar)
    p.add_argument("--C", type=scalar, default=parse_scalar("1"))
    p.add_argument("--check", action="store_true", help="verify one instance of every family")
    p.add_argument("--cases", action="store_true", help="include the (d, j, k) case analysis")
    p.add_argument("--nmax", type=int, default=10_000)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("diophantine", help="square-condition certificates")
    certs = p.add_subparsers(dest="certificate", required=True)
    c = certs.add_parser("squares", parents=[common])
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--nmax", type=int, default=10**6)
    certs.add_parser("mod9", parents=[common])
    certs.add_parser("diffsq", parents=[common])
    c = certs.add_parser("pell", parents=[common])
    c.add_argument("--D", type=int, default=3)
    c.add_argument("--N", type=int, default=13)
    c.add_argument("--xmod", help="RESIDUE:MODULUS, e.g. 1:6")
    c.add_argument("--y", choices=diophantine.PARITIES, default="any")
    c.add_argument("--bound", default="51")
    c.add_argument("--unit", help="X,Y of a unit of norm 1 (default 7,4 for D = 3)")
    c = certs.add_parser("mnk", parents=[common])
    c.add_argument("--nmax", type=int, default=100)
    c.add_argument("--kmax", type=int, default=100)
    c.add_argument("--mmax", type=int, default=99)
    c = certs.add_parser("djeq", parents=[common])
    c.add_argument("--dmax", type=int, default=12)
    c.add_argument("--jmax", type=int, default=6)
    c.add_argument("--kmin", type=int, default=2)
    c.add_argument("--kmax", type=int, default=4)
    c.add_argument("--nmax", type=int, default=10**4)
    c = certs.add_parser("all", parents=[common])
    c.add_argument("--nmax", type=int, default=10**4)
    p.set_defaults(handler=cmd_diophantine)

    p = sub.add_parser("jet", parents=[common], help="Taylor-jet recurrence")
    _candidate_options(p)
    p.add_argument(
        "--anchor",
        choices=JET_ANCHORS,
        default="a-point",
    )
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--order", type=int)
    p.add_argument("--t", type=scalar, help="anchor in t = e^(lambda z) for a family")
    p.add_argument("--at", type=scalar, help="anchor z0 for a closed form")
    p.add_argument("--fpp", help="f'' at an a-point: plus, minus or a value")
    p.add_argument("--leading", type=scalar, help="f^(k+2) at a multiple b-point")
    p.set_defaults(handler=cmd_jet)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
        config = get_config().with_overrides(
            precision_bits=args.precision,
            tol=args.tol,
            regime=args.regime,
            output=args.output,
            relaxed=args.relaxed,
        )
        return args.handler(args, config)
    except ShareLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
