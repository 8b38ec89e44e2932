# sharelab_api/views.py
from __future__ import annotations

import json
import logging
from typing import Any, Dict

from django.http import HttpRequest, JsonResponse
from django.views.decorators.csrf import csrf_exempt

import classifier
import main
from errors import InvalidParameters, ShareLabError
from functions import Candidate, scalar_field
from report_store import ReportStore
from utils import get_config
from verifier import Region, SharingProblem, verify

logger = logging.getLogger(__name__)


def _json_body(request: HttpRequest) -> Dict[str, Any]:
    try:
        data = json.loads(request.body.decode("utf-8") or "{}")
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InvalidParameters(f"request body is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InvalidParameters("request body must be a JSON object")
    return data


def _optional_scalar(data: Dict[str, Any], key: str):
    value = data.get(key)
    return scalar_field(value) if value is not None else None


def _config(data: Dict[str, Any]):
    return get_config().with_overrides(
        precision_bits=data.get("precision"),
        tol=data.get("tol"),
        relaxed=data.get("relaxed"),
    )


def _maybe_save(data: Dict[str, Any], event_type: str, meta: Dict[str, Any], payload: Dict[str, Any]) -> None:
    if not data.get("save"):
        return
    try:
        store = ReportStore()
        store.append(store.create_entry(event_type, meta, payload))
    except OSError:
        logger.exception("could not append %s report", event_type)


def _handle(fn):
    """Map sharelab errors to 400 and anything unexpected to 500."""

    def wrapper(request: HttpRequest, *args, **kwargs) -> JsonResponse:
        try:
            return fn(request, *args, **kwargs)
        except ShareLabError as e:
            return JsonResponse({"error": str(e)}, status=400)
        except Exception as e:
            logger.exception("unexpected error in %s", fn.__name__)
            return JsonResponse({"error": str(e)}, status=500)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@csrf_exempt
@_handle
def verify_candidate(request: HttpRequest) -> JsonResponse:
    """
    POST a candidate document plus a, b and optional relaxed, region, grid,
    samples; or {"family": "iv", "a": ..., "C": ...}.
    """
    if request.method != "POST":
        return JsonResponse({"detail": "POST required"}, status=405)

    data = _json_body(request)
    config = _config(data)
    a, b = _optional_scalar(data, "a"), _optional_scalar(data, "b")
    if data.get("family"):
        family = classifier.family_by_kind(data["family"], a, b)
        C = _optional_scalar(data, "C")
        candidate = family.instantiate(C if C is not None else 1)
    else:
        candidate = Candidate.from_dict(data)
    a = candidate.a if candidate.a is not None else a
    b = candidate.b if candidate.b is not None else b
    if a is None or b is None:
        raise InvalidParameters("a and b are required")

    region = Region.parse(data["region"]) if data.get("region") else None
    report = verify(
        candidate.function,
        SharingProblem(a, b, relaxed=config.relaxed),
        tol=config.tol,
        precision_bits=config.precision_bits,
        samples=int(data.get("samples", 16)),
        region=region,
        grid=int(data.get("grid", 9)),
        root_maxiter=config.root_maxiter,
        newton_maxiter=config.newton_maxiter,
    )
    payload = report.to_dict()
    payload["exit_code"] = report.exit_code
    _maybe_save(data, "verify", {"candidate": report.candidate, "exit_code": report.exit_code}, payload)
    return JsonResponse(payload)


@csrf_exempt
@_handle
def classify_values(request: HttpRequest) -> JsonResponse:
    """POST {"a": ..., "b": ...}."""
    if request.method != "POST":
        return JsonResponse({"detail": "POST required"}, status=405)

    data = _json_body(request)
    a, b = _optional_scalar(data, "a"), _optional_scalar(data, "b")
    if a is None or b is None:
        raise InvalidParameters("a and b are required")
    families = classifier.classify(a, b)
    payload = {
        "a": a.serialize(),
        "b": b.serialize(),
        "families": [f.to_dict() for f in families],
        "includes_iv": any(f.kind == "iv" for f in families),
    }
    _maybe_save(data, "classify", {"a": payload["a"], "b": payload["b"]}, payload)
    return JsonResponse(payload)


_INT_PARAMS = ("k", "nmax", "D", "N", "kmin", "kmax", "mmax", "dmax", "jmax")


@_handle
def diophantine_certificate(request: HttpRequest, name: str) -> JsonResponse:
    """GET /api/diophantine/<name>/?k=2&nmax=1000 with the CLI flag names."""
    if request.method != "GET":
        return JsonResponse({"detail": "GET required"}, status=405)

    params: Dict[str, Any] = {}
    for key in main.DIOPHANTINE_PARAMS:
        raw = request.GET.get(key)
        if raw is None or raw == "":
            continue
        if key in _INT_PARAMS:
            try:
                params[key] = int(raw)
            except ValueError as e:
                raise InvalidParameters(f"{key} must be an integer, got {raw!r}") from e
        else:
            params[key] = raw
    title, payload, ok = main.diophantine_certificate(name, **params)
    return JsonResponse({"certificate": name, "title": title, "passed": ok, "result": payload})


@csrf_exempt
@_handle
def jet(request: HttpRequest) -> JsonResponse:
    """POST {family | candidate fields, a, b, C, k, anchor, order, t, at, fpp, leading}."""
    if request.method != "POST":
        return JsonResponse({"detail": "POST required"}, status=405)

    data = _json_body(request)
    config = _config(data)
    function = None
    if not data.get("family") and data.get("kind"):
        function = Candidate.from_dict(data).function
    C = _optional_scalar(data, "C")
    report = main.run_jet(
        config,
        family=data.get("family"),
        function=function,
        a=_optional_scalar(data, "a"),
        b=_optional_scalar(data, "b"),
        C=C if C is not None else 1,
        k=int(data.get("k", 1)),
        anchor=data.get("anchor", "a-point"),
        order=int(data["order"]) if data.get("order") is not None else None,
        t=_optional_scalar(data, "t"),
        at=_optional_scalar(data, "at"),
        fpp=str(data["fpp"]) if data.get("fpp") is not None else None,
        leading=_optional_scalar(data, "leading"),
    )
    payload = report.to_dict()
    _maybe_save(data, "jet", {"anchor": report.context.anchor_kind.value}, payload)
    return JsonResponse(payload)


def list_reports(request: HttpRequest) -> JsonResponse:
    """GET /api/reports/?type=verify"""
    event_type = request.GET.get("type", "").strip()
    store = ReportStore()
    entries = store.by_type(event_type) if event_type else store.load()
    return JsonResponse({"reports": [e.to_dict() for e in entries]})
