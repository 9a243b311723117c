#!/usr/bin/env python3
"""End-to-end demo over the bundled corpus.

Runs the whole pipeline in a scratch directory: typecheck the corpus,
generate a skip-tree dataset with statistics, extract every evaluation task
family, build the novelty index, fabricate oracle beams (ground truth first,
one distractor behind it), and score them. Prints the report at the end.

Usage: python scripts/run_pipeline_demo.py [--workdir DIR]
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from holmask.cli import run
from holmask.sexpr import bundled_corpus_path


def sh(args: list[str]) -> None:
    print("+ holmask", " ".join(args))
    code = run(args)
    if code != 0:
        raise SystemExit(code)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default=None)
    args = parser.parse_args()

    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="holmask-demo-"))
    workdir.mkdir(parents=True, exist_ok=True)
    corpus = workdir / "corpus.jsonl"
    shutil.copy(bundled_corpus_path(), corpus)
    print(f"working in {workdir}")

    sh(["typecheck", "--in", str(corpus), "--out", str(workdir / "verdicts.jsonl")])
    sh(
        [
            "gen",
            "--mode",
            "skip-tree-weighted",
            "--k",
            "2",
            "--n",
            "100",
            "--seed",
            "7",
            "--workers",
            "2",
            "--in",
            str(corpus),
            "--out",
            str(workdir / "dataset.jsonl"),
            "--stats",
            str(workdir / "stats.json"),
        ]
    )
    sh(["stats", "--in", str(workdir / "dataset.jsonl"), "--out", str(workdir / "stats2.json")])
    sh(["index", "--in", str(corpus), "--out", str(workdir / "train.idx")])

    all_tasks = []
    for task in ("type", "type-hard", "assumptions", "equalities"):
        out = workdir / f"tasks.{task}.jsonl"
        sh(["eval-extract", "--task", task, "--seed", "7", "--in", str(corpus), "--out", str(out)])
        all_tasks.extend(json.loads(line) for line in out.read_text().splitlines())

    tasks_path = workdir / "tasks.jsonl"
    tasks_path.write_text("".join(json.dumps(t, sort_keys=True) + "\n" for t in all_tasks))
    with open(workdir / "beams.jsonl", "w") as handle:
        for task in all_tasks:
            beams = [
                ["<START>", *task["ground_truth"], "<END>"],
                ["<START>", "(", "v", "(", "bool", ")", "distractor", ")", "<END>"],
            ]
            handle.write(json.dumps({"task_id": task["task_id"], "beams": beams}) + "\n")

    sh(
        [
            "score",
            "--tasks",
            str(tasks_path),
            "--beams",
            str(workdir / "beams.jsonl"),
            "--index",
            str(workdir / "train.idx"),
            "--report",
            str(workdir / "report.json"),
            "--verdicts",
            str(workdir / "score_verdicts.jsonl"),
        ]
    )

    print((workdir / "report.json").read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
