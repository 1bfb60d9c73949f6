"""scorer-bridge entry point: serve the NDJSON protocol on stdio."""

import argparse
import sys

from .server import serve
from .stub import StubScorer


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="scorer-bridge", description="NDJSON embedding/metric scorer on stdio"
    )
    parser.add_argument("--mode", choices=["stub", "real"], default="stub")
    parser.add_argument("--models", help="model path or id (real mode)")
    parser.add_argument("--dims", type=int, default=32, help="embedding dims (stub mode)")
    parser.add_argument("--seed", type=int, default=0, help="hash seed (stub mode)")
    args = parser.parse_args(argv)

    if args.mode == "stub":
        scorer = StubScorer(dims=args.dims, seed=args.seed)
    else:
        if not args.models:
            parser.error("--mode real needs --models")
        from .real import RealScorer

        try:
            scorer = RealScorer(args.models)
        except RuntimeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    serve(sys.stdin, sys.stdout, scorer)
    return 0


if __name__ == "__main__":
    sys.exit(main())
