#!/usr/bin/env python3
"""Generate every dataset variant over the bundled corpus and tabulate shapes.

Covers the two skip-tree sampling strategies, the no-mask and small
ablations, and the three skip-sequence span variants; prints example counts,
token totals, and mean input/output lengths per variant.

Usage: python scripts/dataset_stats_sweep.py [--seed N]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from holmask.sexpr import bundled_corpus_path, load_corpus
from holmask.skipgen import GenConfig, GenMode, generate

VARIANTS = [
    ("skip-tree (weighted)", GenConfig(GenMode.SKIP_TREE_WEIGHTED, mask_count=2)),
    ("skip-tree (uniform)", GenConfig(GenMode.SKIP_TREE_UNIFORM, mask_count=2)),
    ("skip-tree (small)", GenConfig(GenMode.SKIP_TREE_WEIGHTED, mask_count=2, samples_per_statement=20)),
    ("skip-tree (no mask)", GenConfig(GenMode.SKIP_TREE_WEIGHTED, mask_count=0)),
    ("skip-seq (long)", GenConfig(GenMode.SKIP_SEQ_LONG)),
    ("skip-seq (medium)", GenConfig(GenMode.SKIP_SEQ_MEDIUM)),
    ("skip-seq (short)", GenConfig(GenMode.SKIP_SEQ_SHORT)),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    corpus = load_corpus(bundled_corpus_path())
    print(f"{'variant':22s} {'examples':>9s} {'in tokens':>10s} {'out tokens':>10s} {'avg in':>7s} {'avg out':>8s}")
    for name, base in VARIANTS:
        cfg = GenConfig(
            mode=base.mode,
            mask_count=base.mask_count,
            samples_per_statement=base.samples_per_statement,
            seed=args.seed,
        )
        start = time.monotonic()
        _, stats, _ = generate(corpus, cfg)
        print(
            f"{name:22s} {stats.example_count:9d} {stats.input_token_total:10d} "
            f"{stats.output_token_total:10d} {stats.mean_input_len:7.1f} "
            f"{stats.mean_output_len:8.1f}   ({time.monotonic() - start:.1f}s)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
