"""Protocol conformance: randomized request streams in stub mode yield
order-preserving, id-matching responses, and nothing kills the loop."""

import io
import json
import random

from scorer_bridge.server import serve
from scorer_bridge.stub import StubScorer


def run_lines(lines, scorer=None):
    stdin = io.StringIO("\n".join(lines) + "\n")
    stdout = io.StringIO()
    serve(stdin, stdout, scorer or StubScorer())
    out = [json.loads(l) for l in stdout.getvalue().splitlines()]
    return out


def random_request(rng, rid):
    kind = rng.randrange(5)
    if kind == 0:
        return {"id": rid, "op": "info"}
    if kind == 1:
        texts = [f"text {rng.randrange(100)}" for _ in range(rng.randrange(4))]
        return {"id": rid, "op": "embed", "texts": texts}
    if kind == 2:
        n = rng.randrange(1, 4)
        return {
            "id": rid,
            "op": "score",
            "metric": rng.choice(["bertscore", "bleurt20", "luxembedder_qe"]),
            "hyps": [f"hyp {rng.randrange(50)}" for _ in range(n)],
            "refs": [f"ref {rng.randrange(50)}" for _ in range(n)],
        }
    if kind == 3:
        return {"id": rid, "op": "nonsense-op"}
    return {"id": rid, "op": "score", "metric": "not-a-metric", "hyps": ["x"], "refs": ["y"]}


def test_randomized_streams_are_order_preserving_and_id_matching():
    rng = random.Random(1234)
    for trial in range(10):
        requests = [random_request(rng, f"r{trial}-{i}") for i in range(50)]
        lines = [json.dumps(r) for r in requests]
        responses = run_lines(lines)
        assert len(responses) == len(requests)
        for request, response in zip(requests, responses):
            assert response["id"] == request["id"]
            if request["op"] in ("info", "embed") or (
                request["op"] == "score" and request.get("metric") in StubScorer().info()["metrics"]
            ):
                assert response["ok"] is True
            else:
                assert response["ok"] is False
                assert "error" in response


def test_malformed_lines_get_error_responses_and_loop_continues():
    lines = [
        json.dumps({"id": "1", "op": "info"}),
        "this is not json {{{",
        json.dumps({"id": "2", "op": "info"}),
        '"just a string"',
        json.dumps({"id": "3", "op": "embed", "texts": ["a"]}),
    ]
    responses = run_lines(lines)
    assert len(responses) == 5
    assert responses[0]["ok"] and responses[0]["id"] == "1"
    assert responses[1]["ok"] is False and responses[1]["id"] is None
    assert "parse error" in responses[1]["error"]
    assert responses[2]["ok"] and responses[2]["id"] == "2"
    assert responses[3]["ok"] is False
    assert responses[4]["ok"] and len(responses[4]["vectors"]) == 1


def test_info_reports_dims_and_metrics():
    (response,) = run_lines([json.dumps({"id": "i", "op": "info"})], StubScorer(dims=16, seed=3))
    info = response["info"]
    assert info["dims"] == 16
    assert info["mode"] == "stub"
    assert "luxembedder_qe" in info["metrics"]


def test_embed_shapes_and_determinism():
    scorer = StubScorer(dims=8)
    lines = [
        json.dumps({"id": "a", "op": "embed", "texts": ["x", "y", "x"]}),
        json.dumps({"id": "b", "op": "embed", "texts": ["x"]}),
    ]
    first, second = run_lines(lines, scorer)
    assert all(len(v) == 8 for v in first["vectors"])
    assert first["vectors"][0] == first["vectors"][2] == second["vectors"][0]


def test_backend_exception_becomes_error_response():
    class ExplodingScorer(StubScorer):
        def embed(self, texts):
            raise RuntimeError("boom")

    responses = run_lines(
        [json.dumps({"id": "x", "op": "embed", "texts": ["a"]}), json.dumps({"id": "y", "op": "info"})],
        ExplodingScorer(),
    )
    assert responses[0]["ok"] is False and "boom" in responses[0]["error"]
    assert responses[1]["ok"] is True  # the loop survived
