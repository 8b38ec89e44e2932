# reports.py
"""
Text templates for the CLI reports.
"""
from __future__ import annotations

from classifier import CaseAnalysis, SolutionFamily
from recurrence import JetReport
from verifier import VerificationReport


VERIFY_TEMPLATE = """
Candidate: {candidate}
Values:    a = {a}, b = {b}{relaxed}

f = a  =>  f' = a : {holds_a}
f' = b =>  f = b  : {holds_b}
g constant       : {g}
Counting data    : {counts}
Verdict          : {verdict}
""".strip()


FAMILY_TEMPLATE = """
({kind}) f = {form}
    parameters: {parameters}
    constraints: {constraints}
""".rstrip()


JET_TEMPLATE = """
Anchor:  {anchor_kind} at z0 = {anchor}   (a = {a}, b = {b}, k = {k}, c = {c})
Seed:    {seed}
Jet:
{jet}
Oracle:  {oracle}
""".strip()


CERTIFICATE_TEMPLATE = """
== {title} ==
{body}
Result: {result}
""".strip()


def _yes(ok: bool) -> str:
    return "holds" if ok else "VIOLATED"


def render_verification(report: VerificationReport) -> str:
    if report.g_constant_estimate is None:
        g = "n/a"
    else:
        g = f"{report.g_constant_estimate} (max deviation {report.g_max_deviation})"
    if report.counts is None:
        counts = "n/a"
    else:
        c = report.counts
        counts = (
            f"d={c.d} j={c.j} k={c.k} n(a)={c.n_a} nbar(a)={c.nbar_a} "
            f"n(b,f')={c.n_b_fprime} nbar(b,f')={c.nbar_b_fprime} n(0,f'')={c.n_0_fpp}"
        )
    if not report.holds:
        verdict = "violated"
    elif report.region_local:
        verdict = "holds on the scanned region only"
    else:
        verdict = "holds"

    lines = [
        VERIFY_TEMPLATE.format(
            candidate=report.candidate,
            a=report.a,
            b=report.b,
            relaxed="  (relaxed)" if report.relaxed else "",
            holds_a=_yes(report.holds_a_implies),
            holds_b=_yes(report.holds_b_implies),
            g=g,
            counts=counts,
            verdict=verdict,
        )
    ]
    if report.witnesses:
        lines.append("\nWitnesses:")
        for w in report.witnesses:
            lines.append(
                f"- {w.coordinate} = {w.location}: expected {w.rhs}, got {w.lhs} "
                f"(defect {w.defect}, implication {w.implication})"
            )
    if report.newton_failures:
        lines.append(f"\nNewton seeds without convergence: {report.newton_failures}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


def render_family(family: SolutionFamily) -> str:
    return FAMILY_TEMPLATE.format(
        kind=family.kind,
        form=family.form,
        parameters=", ".join(f"{name} = {value}" for name, value in family.parameters.items()),
        constraints="; ".join(family.constraints) or "none",
    )


def render_families(families: list[SolutionFamily], a, b) -> str:
    head = f"Solutions for a = {a}, b = {b} (C is any nonzero constant unless noted):"
    return "\n".join([head] + [render_family(f) for f in families])


def render_case_analysis(analysis: CaseAnalysis) -> str:
    lines = ["Feasible (d, j, k):"]
    for case in analysis.cases.feasible:
        lines.append(f"- ({case.d}, {case.j}, {case.k}) {case.branch.value}")
    for record in (analysis.d3, analysis.d4):
        case = record.case
        lines.append(f"Case d = {case.d}: {record.ansatz}; {record.relation}")
        for branch in record.branches:
            lines.append(f"- {branch.parameter} = {branch.value}: discriminant = {branch.discriminant}")
        for value, reason in record.excluded:
            lines.append(f"- excluded {value}: {reason}")
    lines.append(f"Pivot certificates complete: {analysis.certificates.all_empty}")
    lines.append(f"Only d = 2 survives: {analysis.only_d2_survives}")
    return "\n".join(lines)


def render_jet(report: JetReport) -> str:
    ctx = report.context
    jet_lines = "\n".join(f"  f^({n}) = {value}" for n, value in enumerate(report.jet.derivs))
    if report.oracle is None:
        oracle = "no closed form"
    elif report.matches:
        oracle = f"closed form agrees through order {min(report.jet.order, report.oracle.order)}"
    else:
        oracle = f"closed form DIFFERS at order {report.first_mismatch}"
    return JET_TEMPLATE.format(
        anchor_kind=ctx.anchor_kind.value,
        anchor=report.jet.anchor,
        a=ctx.a,
        b=ctx.b,
        k=ctx.k,
        c=ctx.c,
        seed=", ".join(str(v) for v in report.seed.derivs),
        jet=jet_lines,
        oracle=oracle,
    )


def _render_value(value) -> str:
    if isinstance(value, dict):
        return ", ".join(f"{k}={_render_value(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        if len(value) > 12:
            shown = ", ".join(_render_value(v) for v in value[:12])
            return f"[{shown}, ... ({len(value)} total)]"
        return "[" + ", ".join(_render_value(v) for v in value) + "]"
    return str(value)


def render_certificate(title: str, payload: dict, ok: bool) -> str:
    body = "\n".join(f"{key}: {_render_value(value)}" for key, value in payload.items())
    return CERTIFICATE_TEMPLATE.format(title=title, body=body, result="pass" if ok else "FAIL")
