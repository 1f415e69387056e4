#!/usr/bin/env python3
"""Minimal external objective speaking the hypertune NDJSON protocol.

One JSON request per line on stdin, one response per line on stdout:

    {"id": 1, "params": {"m": 3, "n": 140, "k": 3}}
    {"id": 1, "score": -0.25}

Malformed requests get {"id": ..., "error": "..."}; {"cmd": "shutdown"}
ends the loop. Replace score() with a real training run.
"""

import json
import sys


def score(params):
    m, n, k = params["m"], params["n"], params["k"]
    return -((m - 4) ** 2) - ((n - 128) / 16) ** 2 - (k - 5) ** 2


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError as exc:
            print(json.dumps({"id": None, "error": f"bad json: {exc}"}), flush=True)
            continue
        if req.get("cmd") == "shutdown":
            break
        try:
            reply = {"id": req["id"], "score": float(score(req["params"]))}
        except (KeyError, TypeError) as exc:
            reply = {"id": req.get("id"), "error": f"bad request: {exc}"}
        print(json.dumps(reply), flush=True)


if __name__ == "__main__":
    main()
