"""Build an instruction-tuning mixture from threshold-filtered corpora.

Each source corpus carries alignment similarities; a per-source threshold
drops low-equivalence pairs, the survivors get prompt-templated, and the
shuffled mixture ships with a manifest that accounts for every record.
"""

import json
import random

from luxkit import LanguagePair, ParallelCorpus, PairOrigin, Segment, SegmentPair
from luxkit.align import PromptTemplate, build_training_mixture


def synthetic_corpus(lp, n, seed, name):
    rng = random.Random(seed)
    lp = LanguagePair.parse(lp)
    pairs = []
    for i in range(n):
        sim = round(rng.uniform(0.9, 1.0), 4)
        pairs.append(
            SegmentPair(
                source=Segment(id=f"s{i}", text=f"Saz nummer {i} op Lëtzebuergesch", lang=lp.source),
                target=Segment(id=f"t{i}", text=f"translation {i} ({lp.target})", lang=lp.target),
                similarity=sim,
                origin=PairOrigin.ALIGNED,
            )
        )
    return ParallelCorpus(lp=lp, pairs=tuple(pairs), meta={"name": name})


def main():
    news_fr = synthetic_corpus("lb-fr", 400, seed=1, name="news-fr")
    news_en = synthetic_corpus("lb-en", 300, seed=2, name="news-en")
    debates_fr = synthetic_corpus("lb-fr", 500, seed=3, name="debates-fr")

    # stricter threshold for the noisy news crawl, looser for 1-to-1 data
    result = build_training_mixture(
        [(news_fr, 0.99), (news_en, 0.99), (debates_fr, 0.98)],
        template=PromptTemplate(),
        seed=2024,
    )

    print(json.dumps(result.manifest, indent=2))
    print("\nfirst three shuffled records:")
    for rec in result.records[:3]:
        print(f"  [{rec.source_name}] {rec.prompt!r} -> {rec.completion!r}")


if __name__ == "__main__":
    main()
