"""Render a candidate-vs-baseline delta report with significance marks
and human-accuracy bands.

Scores are invented for the demo; in a real run they come from `luxkit
score` / `luxkit compare` over your benchmark.
"""

from luxkit import MetricId, build_report, render_report

BASELINE = {
    ("lb-fr", MetricId.LUXEMBEDDER_QE): 92.7,
    ("lb-fr", MetricId.BERTSCORE): 95.2,
    ("lb-fr", MetricId.BLEURT20): 68.5,
    ("lb-fr", MetricId.TER): 56.1,
    ("lb-en", MetricId.LUXEMBEDDER_QE): 93.3,
    ("lb-en", MetricId.BERTSCORE): 88.5,
    ("lb-en", MetricId.BLEURT20): 73.3,
    ("lb-en", MetricId.TER): 50.0,
}

DELTAS = {
    ("lb-fr", MetricId.LUXEMBEDDER_QE): (0.7, True),
    ("lb-fr", MetricId.BERTSCORE): (0.2, True),
    ("lb-fr", MetricId.BLEURT20): (0.9, True),
    ("lb-fr", MetricId.TER): (-1.6, True),
    ("lb-en", MetricId.LUXEMBEDDER_QE): (0.8, True),
    ("lb-en", MetricId.BERTSCORE): (0.4, True),
    ("lb-en", MetricId.BLEURT20): (0.6, True),
    ("lb-en", MetricId.TER): (-0.3, False),
}


def main():
    candidate = {k: v + DELTAS[k][0] for k, v in BASELINE.items()}
    significance = {k: sig for k, (_, sig) in DELTAS.items()}
    metrics = [MetricId.LUXEMBEDDER_QE, MetricId.BERTSCORE, MetricId.BLEURT20, MetricId.TER]
    report = build_report(
        "baseline-model",
        "fine-tuned-model",
        BASELINE,
        candidate,
        significance,
        lps=["lb-fr", "lb-en"],
        metrics=metrics,
    )
    print(render_report(report, "markdown"))
    print("same data as CSV:\n")
    print(render_report(report, "csv"))


if __name__ == "__main__":
    main()
