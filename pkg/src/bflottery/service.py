"""HTTP facade over evaluation, comparison, reduction, and elicitation.

Everything is JSON over plain ``http.server`` machinery; no web framework.
``Api`` does the actual work and is directly callable in tests, while the
request handler only parses HTTP and shuttles dicts in and out.  A single
lock serializes state changes, which is plenty for a tool that talks to one
decision maker at a time; the per-query sequence numbers are what protect a
session from double-submitted answers, not the lock.

Errors leave as ``{"error": {"code", "message", "details?"}}`` with the
HTTP status carrying the same meaning: 400 for malformed or invalid input,
404 for unknown things, 409 for answers out of step with the session, and
422 when a reduction is mathematically impossible.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import urlparse

from .elicitation import DmResponse, ElicitationSession, solve_indices
from .errors import (
    FrameMismatchError,
    InconsistentResponsesError,
    StaleQueryError,
    TotalConflictError,
    ValidationError,
)
from .frames import Frame
from .lottery import BfLottery, CompoundLottery, reduce_compound
from .store import WorkspaceStore
from .utility import (
    UtilityAssessment,
    UtilityInterval,
    choquet_lower,
    choquet_upper,
    compare,
    interval_utility,
    jaffray_utility,
    pignistic_utility,
    reduce_to_reference,
    reduce_to_reference_oracle,
)
from .wire import (
    _labels,
    _require,
    any_lottery_from_dict,
    any_lottery_to_dict,
    assessment_from_dict,
    assessment_to_dict,
    frame_from_dict,
    frame_to_dict,
    interval_to_dict,
    lottery_to_dict,
    reference_to_dict,
)

DEFAULT_PORT = 8532
ORACLE_TOLERANCE = 1e-9
_ID_SHAPE = re.compile(r"[A-Za-z0-9_.\-]{1,64}")

ENDPOINTS = (
    "GET /",
    "GET|POST /frames, GET|DELETE /frames/{id}",
    "GET|POST /lotteries, GET|DELETE /lotteries/{id}",
    "GET|POST /assessments, GET|DELETE /assessments/{id}",
    "POST /evaluate",
    "POST /compare",
    "POST /reduce",
    "GET|POST /sessions, GET|DELETE /sessions/{id}",
    "GET /sessions/{id}/next-query",
    "POST /sessions/{id}/responses",
    "GET /sessions/{id}/assessment",
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.details = details or {}


def _error_body(code: str, message: str, details: Optional[dict] = None) -> dict:
    error: dict = {"code": code, "message": message}
    if details:
        error["details"] = details
    return {"error": error}


def _not_found(what: str) -> ApiError:
    return ApiError(404, "not_found", what)


def _wrong_method(method: str, path: str) -> ApiError:
    return ApiError(405, "method_not_allowed", f"{method} is not supported on {path}")


class Api:
    """All routes as one method: (method, path, payload) -> (status, body)."""

    def __init__(self, store: WorkspaceStore):
        self.store = store
        self._lock = threading.RLock()

    def handle(self, method: str, path: str, payload) -> tuple[int, dict]:
        with self._lock:
            try:
                return self._route(method, path, payload)
            except ApiError as exc:
                return exc.status, _error_body(exc.code, str(exc), exc.details)
            except StaleQueryError as exc:
                return 409, _error_body("stale_query", str(exc))
            except InconsistentResponsesError as exc:
                return 409, _error_body(
                    "inconsistent_responses", str(exc), {"entries": list(exc.entries)}
                )
            except TotalConflictError as exc:
                return 422, _error_body("total_conflict", str(exc), {"k": exc.k})
            except (ValidationError, FrameMismatchError) as exc:
                return 400, _error_body("validation", str(exc))
            except Exception as exc:  # keep the connection usable
                return 500, _error_body("internal", f"{type(exc).__name__}: {exc}")

    # ------------------------------------------------------------- routing

    def _route(self, method: str, path: str, payload) -> tuple[int, dict]:
        parts = tuple(p for p in path.split("/") if p)
        if not parts:
            if method == "GET":
                return 200, {"service": "belief-lottery api", "endpoints": list(ENDPOINTS)}
            raise _wrong_method(method, "/")
        head = parts[0]
        if head in ("frames", "lotteries", "assessments") and len(parts) <= 2:
            return self._named(method, parts, payload)
        if head == "sessions":
            return self._sessions(method, parts, payload)
        if len(parts) == 1 and head in ("evaluate", "compare", "reduce"):
            if method != "POST":
                raise _wrong_method(method, f"/{head}")
            worker = getattr(self, head)
            return 200, worker(payload or {})
        raise _not_found(f"no such endpoint: /{'/'.join(parts)}")

    # ------------------------------------------------------ named documents

    def _registry(self) -> dict[str, Frame]:
        out = {}
        for fid in self.store.keys("frames"):
            out[fid] = frame_from_dict(self.store.get("frames", fid))
        return out

    @staticmethod
    def _checked_id(value) -> str:
        if not isinstance(value, str) or not _ID_SHAPE.fullmatch(value):
            raise ApiError(
                400, "validation",
                "ids must be 1-64 characters of letters, digits, '_', '.', or '-'",
            )
        return value

    def _named(self, method: str, parts: tuple, payload) -> tuple[int, dict]:
        section = parts[0]
        if len(parts) == 1:
            if method == "GET":
                items = [self.store.get(section, k) for k in self.store.keys(section)]
                return 200, {section: items}
            if method == "POST":
                return self._store_named(section, payload)
            raise _wrong_method(method, f"/{section}")
        key = parts[1]
        record = self.store.get(section, key)
        if method == "GET":
            if record is None:
                raise _not_found(f"no {section[:-1]} named {key!r}")
            return 200, record
        if method == "DELETE":
            if not self.store.delete(section, key):
                raise _not_found(f"no {section[:-1]} named {key!r}")
            return 200, {"deleted": key}
        raise _wrong_method(method, f"/{section}/{key}")

    def _store_named(self, section: str, payload) -> tuple[int, dict]:
        registry = self._registry()
        if section == "frames":
            frame = frame_from_dict(payload if payload is not None else {})
            key, record = self._checked_id(frame.id), frame_to_dict(frame)
        elif section == "lotteries":
            key = self._checked_id(_require(payload, "id", "request"))
            parsed = any_lottery_from_dict(
                _require(payload, "lottery", "request"), registry
            )
            record = {"id": key, "lottery": any_lottery_to_dict(parsed)}
        else:
            key = self._checked_id(_require(payload, "id", "request"))
            parsed_a = assessment_from_dict(
                _require(payload, "assessment", "request"), registry
            )
            record = {"id": key, "assessment": assessment_to_dict(parsed_a)}
        fresh = self.store.get(section, key) is None
        self.store.put(section, key, record)
        return (201 if fresh else 200), {"id": key, "stored": True}

    # ----------------------------------------------------------- evaluation

    def _load_lottery(self, ref, registry, where: str) -> BfLottery:
        if isinstance(ref, str):
            record = self.store.get("lotteries", ref)
            if record is None:
                raise _not_found(f"no lottery named {ref!r}")
            ref = record["lottery"]
        lot = any_lottery_from_dict(ref, registry, where)
        if isinstance(lot, CompoundLottery):
            return reduce_compound(lot)
        return lot

    def _load_assessment(self, ref, registry) -> UtilityAssessment:
        if isinstance(ref, str):
            record = self.store.get("assessments", ref)
            if record is None:
                raise _not_found(f"no assessment named {ref!r}")
            ref = record["assessment"]
        return assessment_from_dict(ref, registry)

    @staticmethod
    def _evaluation(lot: BfLottery, a: UtilityAssessment) -> dict:
        r = reduce_to_reference(lot, a)
        out = {
            "reference": reference_to_dict(r),
            "interval": interval_to_dict(interval_utility(lot, a)),
            "choquet": {"lower": choquet_lower(lot, a), "upper": choquet_upper(lot, a)},
            "pignistic": pignistic_utility(lot, a),
            "classification": lot.m.classify().value,
        }
        try:
            out["jaffray"] = jaffray_utility(lot, a)
        except ValidationError:
            out["jaffray"] = None
        return out

    def evaluate(self, payload) -> dict:
        registry = self._registry()
        lot = self._load_lottery(
            _require(payload, "lottery", "request"), registry, "lottery"
        )
        a = self._load_assessment(_require(payload, "assessment", "request"), registry)
        out = self._evaluation(lot, a)
        if payload.get("cross_check"):
            built = reduce_to_reference_oracle(lot, a)
            straight = reduce_to_reference(lot, a)
            error = max(
                abs(built.u - straight.u),
                abs(built.v - straight.v),
                abs(built.w - straight.w),
            )
            out["cross_check"] = {
                "reference": reference_to_dict(built),
                "max_error": error,
                "agrees": error <= ORACLE_TOLERANCE,
            }
        return out

    def compare(self, payload) -> dict:
        registry = self._registry()
        lot_a = self._load_lottery(_require(payload, "a", "request"), registry, "a")
        lot_b = self._load_lottery(_require(payload, "b", "request"), registry, "b")
        a = self._load_assessment(_require(payload, "assessment", "request"), registry)
        mode = payload.get("mode", "interval")
        verdict = compare(lot_a, lot_b, a, mode=mode)
        return {
            "verdict": verdict.value,
            "mode": mode,
            "a": self._evaluation(lot_a, a),
            "b": self._evaluation(lot_b, a),
        }

    def reduce(self, payload) -> dict:
        registry = self._registry()
        ref = _require(payload, "lottery", "request")
        if isinstance(ref, str):
            record = self.store.get("lotteries", ref)
            if record is None:
                raise _not_found(f"no lottery named {ref!r}")
            ref = record["lottery"]
        lot = any_lottery_from_dict(ref, registry)
        was_compound = isinstance(lot, CompoundLottery)
        plain = reduce_compound(lot) if was_compound else lot
        return {"lottery": lottery_to_dict(plain), "was_compound": was_compound}

    # ------------------------------------------------------------- sessions

    def _load_session(self, sid: str) -> ElicitationSession:
        record = self.store.get("sessions", sid)
        if record is None:
            raise _not_found(f"no session {sid!r}")
        return ElicitationSession.from_dict(record)

    def _save_session(self, sid: str, session: ElicitationSession) -> None:
        self.store.put("sessions", sid, {"id": sid, **session.to_dict()})

    @staticmethod
    def _view(sid: str, session: ElicitationSession, full: bool = True) -> dict:
        pending = session.to_dict()["pending"]
        out = {
            "id": sid,
            "target": sorted(session.target),
            "epsilon": session.epsilon,
            "done": session.done,
            "queries_used": len(session.transcript),
            "max_queries": session.max_queries,
            "brackets": {
                "lower": [session.u_lo, session.u_hi],
                "upper": [session.p_lo, session.p_hi],
            },
            "pending": pending,
        }
        if full:
            out["transcript"] = list(session.transcript)
        return out

    def _sessions(self, method: str, parts: tuple, payload) -> tuple[int, dict]:
        if len(parts) == 1:
            if method == "GET":
                views = [
                    self._view(sid, self._load_session(sid), full=False)
                    for sid in self.store.keys("sessions")
                ]
                return 200, {"sessions": views}
            if method == "POST":
                target = _labels(
                    _require(payload, "target", "request"), "request.target"
                )
                epsilon = payload.get("epsilon", 0.005)
                session = ElicitationSession(target, epsilon)
                sid = uuid.uuid4().hex[:12]
                self._save_session(sid, session)
                return 201, self._view(sid, session)
            raise _wrong_method(method, "/sessions")

        sid = parts[1]
        if len(parts) == 2:
            if method == "GET":
                return 200, self._view(sid, self._load_session(sid))
            if method == "DELETE":
                if not self.store.delete("sessions", sid):
                    raise _not_found(f"no session {sid!r}")
                return 200, {"deleted": sid}
            raise _wrong_method(method, f"/sessions/{sid}")

        if len(parts) != 3:
            raise _not_found(f"no such endpoint: /{'/'.join(parts)}")
        action = parts[2]
        session = self._load_session(sid)
        if action == "next-query":
            if method != "GET":
                raise _wrong_method(method, f"/sessions/{sid}/next-query")
            query = session.next_query()
            self._save_session(sid, session)
            return 200, {
                "done": session.done,
                "query": None
                if query is None
                else {
                    "seq": query.seq,
                    "probe_u": query.probe_u,
                    "target": sorted(query.target),
                },
            }
        if action == "responses":
            if method != "POST":
                raise _wrong_method(method, f"/sessions/{sid}/responses")
            seq = _require(payload, "seq", "request")
            if isinstance(seq, bool) or not isinstance(seq, int):
                raise ApiError(400, "validation", "request.seq: expected an integer")
            answer = _require(payload, "response", "request")
            allowed = {r.value for r in DmResponse}
            if answer not in allowed:
                raise ApiError(
                    400, "validation",
                    f"request.response: expected one of {sorted(allowed)}",
                )
            session.record(seq, DmResponse(answer))
            self._save_session(sid, session)
            return 200, self._view(sid, session)
        if action == "assessment":
            if method != "GET":
                raise _wrong_method(method, f"/sessions/{sid}/assessment")
            if not session.done:
                raise ApiError(
                    409, "incomplete_session",
                    "brackets are still wider than epsilon; keep answering",
                    {"queries_used": len(session.transcript)},
                )
            recovered = session.recovered()
            try:
                alpha, beta = solve_indices(recovered)
                indices = {"alpha": alpha, "beta": beta}
            except ValidationError:
                indices = None
            return 200, {
                "id": sid,
                "target": sorted(session.target),
                "recovered": reference_to_dict(recovered),
                "interval": interval_to_dict(
                    UtilityInterval(recovered.u, 1.0 - recovered.v)
                ),
                "indices": indices,
                "queries_used": len(session.transcript),
                "epsilon": session.epsilon,
            }
        raise _not_found(f"no such endpoint: /sessions/{sid}/{action}")


class _Handler(BaseHTTPRequestHandler):
    api: Api  # bound by make_server
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _send(self, status: int, body: dict) -> None:
        data = json.dumps(body).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.end_headers()
        self.wfile.write(data)

    def _dispatch(self, method: str) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        payload = None
        if length:
            raw = self.rfile.read(length)
            try:
                payload = json.loads(raw)
            except json.JSONDecodeError as exc:
                self._send(
                    400, _error_body("bad_request", f"body is not valid JSON: {exc}")
                )
                return
        status, body = self.api.handle(method, urlparse(self.path).path, payload)
        self._send(status, body)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Content-Length", "0")
        self.end_headers()


def make_server(
    store: WorkspaceStore, host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    """Build a ready-to-run server; ``port=0`` picks a free one."""
    handler = type("BoundHandler", (_Handler,), {"api": Api(store)})
    return ThreadingHTTPServer((host, port), handler)


def serve(store_path=None, host: str = "127.0.0.1", port: int = DEFAULT_PORT) -> None:
    """Run until interrupted.  Used by the command line front end."""
    server = make_server(WorkspaceStore(store_path), host, port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
