"""Walk the benchmark construction pipeline on a tiny synthetic corpus.

Raw documents go in; sentence segmentation, quote standardization,
embedding alignment, length filtering, deduplication, and top-k selection
come out the other side, plus the human-review sheet. The deterministic
mock embedder stands in for a real sentence-embedding model, so this runs
anywhere in milliseconds.
"""

from pathlib import Path
from tempfile import TemporaryDirectory

from luxkit import MockHashProvider, build_benchmark, save_corpus

SOURCE_DOC = (
    "Moien alleguer. "
    "D'Stad Lëtzebuerg huet eng ganz al Festung. "
    "Muer kommen all Leit op de groussen Maart. "
    "Eis Schoul huet eng nei Bibliothéik mat ville Bicher. "
    "Äddi bis muer."
)

# The mock provider embeds identical strings identically, so reusing the
# source text as "translation" self-aligns with similarity 1.0; a real run
# would point the provider at LB and FR documents.
TARGET_DOC = SOURCE_DOC


def main():
    provider = MockHashProvider()
    with TemporaryDirectory() as tmp:
        review_path = Path(tmp) / "review.tsv"
        result = build_benchmark(
            [SOURCE_DOC],
            [TARGET_DOC],
            "lb-fr",
            provider,
            k=2,
            review_path=review_path,
        )
        corpus = result.corpus

        print(f"pipeline stage: {corpus.stage.label}")
        print(f"selected pairs: {len(corpus)} (short sentences were filtered)")
        for pair in corpus:
            print(f"  sim={pair.similarity:.4f}  {pair.source.text!r}")

        print("\nreview sheet (verdict column left for a human):")
        print(review_path.read_text(encoding="utf-8"))

        out = Path(tmp) / "benchmark.jsonl"
        save_corpus(corpus, out, "jsonl")
        print("saved benchmark JSONL:")
        print(out.read_text(encoding="utf-8"))


if __name__ == "__main__":
    main()
