"""HTTP/JSON service for the interactive explorer UI.

Thin wrapper over the job pipeline. Requests are hashed on their canonical
JSON form (sorted keys, numbers normalized so 2 and 2.0 collide) and the
serialized response bytes are cached, which makes the determinism contract
directly observable: identical body -> identical bytes, whether cached or
recomputed.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
import threading
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from importlib import resources

from . import __version__
from .cutting import CoefficientDatabase
from .errors import (
    InvalidInputError,
    NotFoundError,
    NumericError,
    OutOfRangeError,
    ParseError,
    SldError,
)
from .jobs import default_coefficient_db, job_from_dict, run_job
from .outputs import build_result_document, result_json_bytes
from .stability.types import OperatingPoint
from .uncertainty import UncertaintyBand, classify_probabilistic
from .units import m_to_mm, mm_to_m


@dataclass(frozen=True)
class ServiceConfig:
    db_path: str | None = None
    cache_size: int = 32
    allow_origin: str | None = None
    timeout_s: float = 120.0
    max_body_bytes: int = 1_000_000


def canonical_json(obj) -> str:
    """Canonical form used for request hashing: sorted keys, normalized numbers."""

    def normalize(value):
        if isinstance(value, bool) or value is None or isinstance(value, str):
            return value
        if isinstance(value, (int, float)):
            as_float = float(value)
            if as_float.is_integer() and abs(as_float) <= 2**53:
                return int(as_float)
            return as_float
        if isinstance(value, dict):
            return {str(k): normalize(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [normalize(v) for v in value]
        raise InvalidInputError(f"non-JSON value in request: {type(value).__name__}")

    return json.dumps(normalize(obj), sort_keys=True, separators=(",", ":"))


def request_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


class SessionCache:
    """Bounded LRU of request hash -> (response bytes, band for classify)."""

    def __init__(self, max_entries: int):
        self._max = max(1, max_entries)
        self._lock = threading.Lock()
        self._entries: OrderedDict[str, tuple[bytes, UncertaintyBand]] = OrderedDict()

    def get(self, key: str):
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                self._entries.move_to_end(key)
            return entry

    def put(self, key: str, value: tuple[bytes, UncertaintyBand]) -> None:
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self._max:
                self._entries.popitem(last=False)


def _error_body(code: str, message: str, path: str | None = None) -> dict:
    error = {"code": code, "message": message}
    if path:
        error["path"] = path
    return {"error": error}


def _error_response(exc: Exception) -> JSONResponse:
    if isinstance(exc, ParseError):
        return JSONResponse(
            status_code=400,
            content=_error_body("schema_violation", str(exc), exc.field),
        )
    if isinstance(exc, OutOfRangeError):
        return JSONResponse(status_code=400, content=_error_body("out_of_range", str(exc)))
    if isinstance(exc, NotFoundError):
        return JSONResponse(status_code=400, content=_error_body("not_found", str(exc)))
    if isinstance(exc, InvalidInputError):
        return JSONResponse(status_code=400, content=_error_body("invalid_input", str(exc)))
    if isinstance(exc, NumericError):
        return JSONResponse(status_code=422, content=_error_body("numeric_failure", str(exc)))
    if isinstance(exc, SldError):
        return JSONResponse(status_code=400, content=_error_body("invalid_input", str(exc)))
    return JSONResponse(status_code=500, content=_error_body("internal", str(exc)))


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="sldkit service", version=__version__)
    cache = SessionCache(config.cache_size)

    if config.allow_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.allow_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    if config.db_path:
        database = CoefficientDatabase.from_document(Path(config.db_path).read_text())
    else:
        database = default_coefficient_db()

    def compute_sync(doc: dict, key: str) -> tuple[bytes, UncertaintyBand]:
        job = job_from_dict(doc, base_dir=Path.cwd())
        # network jobs may not reference server-side files
        run = run_job(job)
        result = build_result_document(run)
        result["metadata"]["request_hash"] = key
        payload = result_json_bytes(result)
        entry = (payload, run.band)
        cache.put(key, entry)
        return entry

    async def compute_cached(doc: dict) -> tuple[str, tuple[bytes, UncertaintyBand]]:
        key = request_hash(doc)
        hit = cache.get(key)
        if hit is not None:
            return key, hit
        loop = asyncio.get_running_loop()
        try:
            entry = await asyncio.wait_for(
                loop.run_in_executor(None, compute_sync, doc, key),
                timeout=config.timeout_s,
            )
        except asyncio.TimeoutError:
            raise TimeoutError(
                f"computation exceeded the {config.timeout_s:.0f} s request timeout"
            ) from None
        return key, entry

    async def read_json_body(request: Request) -> dict:
        body = await request.body()
        if len(body) > config.max_body_bytes:
            raise PayloadTooLarge(
                f"request body {len(body)} bytes exceeds cap {config.max_body_bytes}"
            )
        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ParseError(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ParseError("request body must be a JSON object")
        return doc

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.get("/api/v1/catalog")
    async def catalog():
        materials = [
            {"name": name, "sources": database.sources_for(name)}
            for name in database.material_names
        ]
        example_tool = json.loads(
            resources.files("sldkit.data").joinpath("example_tool.json").read_text()
        )
        return {"materials": materials, "example_tools": [example_tool]}

    @app.post("/api/v1/compute")
    async def compute(request: Request):
        try:
            doc = await read_json_body(request)
            _, (payload, _band) = await compute_cached(doc)
        except PayloadTooLarge as exc:
            return JSONResponse(status_code=413, content=_error_body("payload_too_large", str(exc)))
        except TimeoutError as exc:
            return JSONResponse(status_code=500, content=_error_body("timeout", str(exc)))
        except (SldError, OSError) as exc:
            return _error_response(exc)
        return Response(content=payload, media_type="application/json")

    @app.post("/api/v1/classify")
    async def classify(request: Request):
        try:
            doc = await read_json_body(request)
            point_doc = doc.get("point")
            if not isinstance(point_doc, dict) or not {"n_rpm", "ap_mm"} <= set(point_doc):
                raise ParseError("classify request needs point {n_rpm, ap_mm}", field="/point")
            if "hash" in doc:
                entry = cache.get(str(doc["hash"]))
                if entry is None:
                    return JSONResponse(
                        status_code=404,
                        content=_error_body("unknown_hash", "no cached computation for hash"),
                    )
                band = entry[1]
            elif "job" in doc:
                _, (_payload, band) = await compute_cached(doc["job"])
            else:
                raise ParseError("classify request needs 'hash' or 'job'")
            point = OperatingPoint(
                float(point_doc["n_rpm"]), mm_to_m(float(point_doc["ap_mm"]))
            )
            verdict = classify_probabilistic(point, band)
        except PayloadTooLarge as exc:
            return JSONResponse(status_code=413, content=_error_body("payload_too_large", str(exc)))
        except TimeoutError as exc:
            return JSONResponse(status_code=500, content=_error_body("timeout", str(exc)))
        except (SldError, OSError) as exc:
            return _error_response(exc)
        return {
            "n_rpm": float(point_doc["n_rpm"]),
            "ap_mm": float(point_doc["ap_mm"]),
            "class": verdict.class_,
            "p_stable": verdict.p_stable,
            "margin_mm": m_to_mm(verdict.margin),
        }

    return app


class PayloadTooLarge(Exception):
    pass
