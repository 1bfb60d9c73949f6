import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_PATH = REPO_ROOT / "fixtures" / "appendix_a.tsv"
STUB_SCORER = Path(__file__).resolve().parent / "stub_scorer.py"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return FIXTURE_PATH


@pytest.fixture(scope="session")
def fixture_records():
    from luxkit.corpus import load_score_fixture

    return load_score_fixture(FIXTURE_PATH)


@pytest.fixture(scope="session")
def stub_scorer_cmd() -> list[str]:
    return [sys.executable, str(STUB_SCORER)]


def make_corpus(rows, lp="lb-fr", stage=None, sims=False):
    """Build a ParallelCorpus from (src, tgt) or (src, tgt, sim) tuples."""
    from luxkit.corpus import (
        LanguagePair,
        PairOrigin,
        ParallelCorpus,
        Segment,
        SegmentPair,
    )

    lp_obj = LanguagePair.parse(lp)
    pairs = []
    for i, row in enumerate(rows):
        if len(row) == 3:
            src, tgt, sim = row
        else:
            src, tgt = row
            sim = None
        pairs.append(
            SegmentPair(
                source=Segment(id=f"s{i}", text=src, lang=lp_obj.source),
                target=Segment(id=f"t{i}", text=tgt, lang=lp_obj.target),
                similarity=sim,
                origin=PairOrigin.ALIGNED if sim is not None else PairOrigin.GIVEN,
            )
        )
    kwargs = {}
    if stage is not None:
        kwargs["stage"] = stage
    return ParallelCorpus(lp=lp_obj, pairs=tuple(pairs), **kwargs)
