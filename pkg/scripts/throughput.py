#!/usr/bin/env python
"""Soft throughput / memory probe for ``birthday-moments estimate``.

DEV-ONLY tool.  Writes a binary stream of 10⁷ tokens drawn from uniform(2¹⁶)
to a temporary file, runs the ``estimate`` subcommand on it with ``--timing``
and prints the throughput and the largest per-batch distinct-symbol count.
The 10⁶ tokens/s target is reported, not asserted::

    python scripts/throughput.py [--tokens 10000000] [--workers 4]
"""
from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
import tempfile

import yaml

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)

sys.path.insert(0, os.path.join(ROOT, "src"))

TARGET_TOKENS_PER_S = 1e6
SUPPORT = 1 << 16


def main() -> None:
    from birthday_moments import distributions as dist
    from birthday_moments.cli import main as cli_main
    from birthday_moments.ingest import encode_binary

    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tokens", type=int, default=10 ** 7)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    tokens = dist.sample(dist.uniform(SUPPORT), args.tokens, seed=args.seed)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "tokens.bin")
        with open(path, "wb") as fh:
            fh.write(encode_binary(tokens))
        del tokens

        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = cli_main(["estimate", "--input", path, "--binary", "--timing",
                             "--workers", str(args.workers)])
    if code != 0:
        raise SystemExit(f"ERROR: estimate exited with {code}")

    doc = yaml.safe_load(out.getvalue())
    stats = doc["stats"]
    rate = stats["tokens_per_s"] or 0.0
    peak = stats["peak_distinct_symbols"]
    print(f"tokens used        : {doc['result']['estimate']['n_used']}")
    print(f"wall clock         : {stats['wall_clock_s']:.2f} s")
    print(f"throughput         : {rate:,.0f} tokens/s "
          f"({'meets' if rate >= TARGET_TOKENS_PER_S else 'below'} the 1e6 target)")
    print(f"peak distinct/batch: {peak} (support {SUPPORT})")
    print(f"p_hat              : {doc['result']['estimate']['p_hat']:.6g} "
          f"(exact {1 / SUPPORT:.6g})")


if __name__ == "__main__":
    main()
