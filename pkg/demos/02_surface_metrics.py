"""Score a toy system with the native surface metrics.

BLEU rewards exact n-gram overlap, chrF2 is gentler (character n-grams),
and TER counts the edits needed to repair the hypothesis, so the three
disagree in instructive ways: watch the swapped-word pair, which TER
repairs with a single block shift.
"""

from luxkit import bleu, chrf2, ter, strip_quotes

REFERENCES = [
    "the cat sat on the mat",
    "she read the report yesterday",
    "results improve with more data",
]

HYPOTHESES = [
    "the cat sat on the mat",          # perfect
    "she read yesterday the report",   # word order: one TER shift
    '"results" improve with data',     # quotes plus a dropped word
]


def main():
    hyps = [strip_quotes(h) for h in HYPOTHESES]
    refs = [strip_quotes(r) for r in REFERENCES]

    for name, fn in (("BLEU", bleu), ("chrF2", chrf2), ("TER", ter)):
        score = fn(hyps, refs)
        print(f"{name:>6}: {score.value:7.3f}   (n={score.n_segments})")

    print("\nper-pair view:")
    for h, r in zip(hyps, refs):
        row = [f"{fn([h], [r]).value:7.2f}" for fn in (bleu, chrf2, ter)]
        print(f"  BLEU={row[0]} chrF2={row[1]} TER={row[2]}  <- {h!r}")


if __name__ == "__main__":
    main()
