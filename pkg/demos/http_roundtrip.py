"""Exercise the HTTP service the way a browser client would.

Starts a server on a free port, stores a frame and two lotteries, runs a
comparison, then walks an elicitation session to completion and reads
the resulting assessment back.  Every request and response is printed,
so this doubles as a live tour of the JSON API.

Run with:  python3 demos/http_roundtrip.py
"""

from __future__ import annotations

import json
import threading
import urllib.request

from bflottery.service import make_server
from bflottery.store import WorkspaceStore


def call(base: str, method: str, path: str, payload=None):
    body = None if payload is None else json.dumps(payload).encode()
    req = urllib.request.Request(base + path, data=body, method=method)
    req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req) as resp:
            out = json.loads(resp.read())
            status = resp.status
    except urllib.error.HTTPError as err:
        out = json.loads(err.read())
        status = err.code
    shown = json.dumps(payload) if payload is not None else ""
    print(f"{method} {path} {shown}".rstrip())
    print(f"  {status} -> {json.dumps(out)[:200]}")
    return out


def main() -> None:
    server = make_server(WorkspaceStore())
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    base = f"http://{host}:{port}"
    print(f"service on {base}\n")

    call(base, "POST", "/frames", {"id": "payoff", "labels": ["$100", "$0"]})
    call(
        base,
        "POST",
        "/lotteries",
        {
            "id": "mystery-urn",
            "lottery": {
                "outcomes": {"frame": "payoff", "ranking": ["$100", "$0"]},
                "bpa": {"focal": [{"set": ["$100", "$0"], "mass": 1.0}]},
            },
        },
    )
    call(
        base,
        "POST",
        "/lotteries",
        {
            "id": "coin-flip",
            "lottery": {
                "outcomes": {"frame": "payoff", "ranking": ["$100", "$0"]},
                "bpa": {
                    "focal": [
                        {"set": ["$100"], "mass": 0.5},
                        {"set": ["$0"], "mass": 0.5},
                    ]
                },
            },
        },
    )
    call(
        base,
        "POST",
        "/assessments",
        {
            "id": "wary",
            "assessment": {
                "outcomes": {"frame": "payoff", "ranking": ["$100", "$0"]},
                "singleton_utilities": {"$100": 1.0, "$0": 0.0},
                "model": {"kind": "constant_index", "alpha": 0.8, "beta": 0.7},
            },
        },
    )
    print()
    call(
        base,
        "POST",
        "/compare",
        {"a": "coin-flip", "b": "mystery-urn", "assessment": "wary"},
    )

    print("\nElicitation against a scripted decision maker with u=0.35, v=0.4:")
    made = call(
        base,
        "POST",
        "/sessions",
        {"target": ["$100", "$0"], "epsilon": 0.05},
    )
    sid = made["id"]
    while True:
        query = call(base, "GET", f"/sessions/{sid}/next-query")
        if query.get("query") is None:
            break
        probe = query["query"]["probe_u"]
        if probe <= 0.35:
            answer = "target_preferred"
        elif probe >= 0.6:
            answer = "probe_preferred"
        else:
            answer = "incomparable"
        call(
            base,
            "POST",
            f"/sessions/{sid}/responses",
            {"seq": query["query"]["seq"], "response": answer},
        )
    print()
    call(base, "GET", f"/sessions/{sid}/assessment")

    server.shutdown()
    server.server_close()


if __name__ == "__main__":
    main()
