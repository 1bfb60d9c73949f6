"""Correlate the embedding QE metric against the other metrics, per
language pair, from the checked-in system-score fixture.

Lower-better metrics (TER) are negated before correlating so every column
points in the "higher is better" direction; p-values come from exact
permutation tests (7 systems -> 5040 orderings).
"""

from pathlib import Path

from luxkit import load_score_fixture, system_correlation_matrix

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "appendix_a.tsv"


def main():
    records = load_score_fixture(FIXTURE)
    print(f"fixture: {len(records)} (system, pair, metric) cells\n")
    for lp in ("lb-fr", "lb-en", "lb-de"):
        matrix = system_correlation_matrix(records, lp)
        print(lp)
        print(f"  {'metric':<12} {'rho':>8} {'tau':>8} {'p(rho)':>9} {'p(tau)':>9}")
        for metric, res in matrix.items():
            print(
                f"  {metric.value:<12} {res.rho:8.4f} {res.tau:8.4f} "
                f"{res.p_rho:9.5f} {res.p_tau:9.5f}"
            )
        print()


if __name__ == "__main__":
    main()
