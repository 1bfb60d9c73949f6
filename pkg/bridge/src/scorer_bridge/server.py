"""The NDJSON request loop.

One JSON object per input line, one response line per request, in order.
Malformed lines and backend failures produce ok=false responses; nothing
short of a closed stream stops the loop.
"""

import json


def handle_request(request: dict, scorer) -> dict:
    rid = request.get("id")
    op = request.get("op")
    try:
        if op == "info":
            return {"id": rid, "ok": True, "info": scorer.info()}
        if op == "embed":
            texts = request.get("texts")
            if not isinstance(texts, list):
                raise ValueError("embed needs a 'texts' list")
            vectors = scorer.embed([str(t) for t in texts])
            return {"id": rid, "ok": True, "vectors": vectors, "dims": scorer.dims}
        if op == "score":
            hyps = request.get("hyps")
            if not isinstance(hyps, list):
                raise ValueError("score needs a 'hyps' list")
            scores = scorer.score(
                str(request.get("metric")),
                request.get("srcs"),
                [str(h) for h in hyps],
                request.get("refs"),
            )
            return {"id": rid, "ok": True, "scores": scores}
        return {"id": rid, "ok": False, "error": f"unknown op {op!r}"}
    except Exception as exc:  # noqa: BLE001 - the loop must survive anything
        return {"id": rid, "ok": False, "error": str(exc)}


def serve(stdin, stdout, scorer) -> None:
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise json.JSONDecodeError("not an object", line, 0)
        except json.JSONDecodeError as exc:
            response = {"id": None, "ok": False, "error": f"parse error: {exc}"}
        else:
            response = handle_request(request, scorer)
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()
