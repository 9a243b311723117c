"""Command-line entry point wiring corpus I/O, config, and the subcommands.

Subcommands: ``gen`` (training datasets), ``eval-extract`` (evaluation
prompts), ``score`` (beam predictions against tasks), ``stats`` (recompute
dataset shape statistics), ``typecheck`` (per-statement verdicts), and
``index`` (novelty index from the training split).

Data goes to ``--out`` files; logs go to standard error as structured
``level key=value`` lines. Every output file is written atomically
(temp-then-rename) and accompanied by a run manifest that echoes the
semantic configuration, so a rerun with the same manifest reproduces the
outputs byte for byte. Split discipline is enforced here: ``gen`` consumes
only training statements and ``eval-extract`` refuses non-validation
statements unless ``--allow-split`` says otherwise.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path as FsPath
from typing import Iterable, Sequence

from . import __version__
from .evaltasks import TaskKind, extract_corpus_tasks, task_from_record, task_record
from .scorer import AlignmentError, CorpusIndex, score
from .sexpr import (
    CorpusError,
    Split,
    Statement,
    iter_corpus,
)
from .skipgen import (
    DatasetStats,
    GenConfig,
    GenCounters,
    GenMode,
    dataset_record,
    iter_batches,
)
from .typecheck import ArityTable, TypecheckError, check_statement


def log(level: str, **fields: object) -> None:
    parts = " ".join(f"{key}={value}" for key, value in fields.items())
    print(f"{level} {parts}", file=sys.stderr)


class CliError(Exception):
    """Input-level failure: bad flags, bad files, misaligned inputs."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise CliError(message)


def atomic_write_text(path: str | FsPath, text: str) -> None:
    path = FsPath(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or FsPath("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_jsonl(path: str | FsPath, records: Iterable[dict]) -> int:
    count = 0
    chunks = []
    for record in records:
        chunks.append(json.dumps(record, sort_keys=True, ensure_ascii=False))
        count += 1
    atomic_write_text(path, "".join(chunk + "\n" for chunk in chunks))
    return count


def read_jsonl(path: str | FsPath) -> list[dict]:
    records = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise CliError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise CliError(str(exc)) from exc
    return records


def _sha256(path: str | FsPath) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(
    primary_output: str,
    subcommand: str,
    config: dict,
    inputs: dict[str, int],
    outputs: dict[str, int],
    skipped: int = 0,
    errors: int = 0,
) -> str:
    """Write `<primary_output>.manifest.json` describing the run.

    Only semantic configuration is recorded (worker count, for one, is not:
    it cannot change the outputs), so equal manifests mean equal outputs.
    """
    manifest = {
        "format_version": 1,
        "tool": "holmask",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "inputs": [{"path": path, "records": count} for path, count in inputs.items()],
        "outputs": [
            {"path": path, "records": count, "sha256": _sha256(path)}
            for path, count in outputs.items()
        ],
        "skipped": skipped,
        "errors": errors,
    }
    path = f"{primary_output}.manifest.json"
    atomic_write_text(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def _load_corpus_lenient(path: str) -> tuple[list[Statement], int]:
    errors = 0

    def on_error(lineno: int, exc: CorpusError) -> None:
        nonlocal errors
        errors += 1
        log("warn", event="bad_record", line=lineno, error=str(exc))

    try:
        statements = list(iter_corpus(path, on_error=on_error))
    except OSError as exc:
        raise CliError(str(exc)) from exc
    return statements, errors


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = GenConfig(
        mode=GenMode(args.mode),
        mask_count=args.k,
        samples_per_statement=args.n,
        max_input_tokens=args.max_in,
        max_output_tokens=args.max_out,
        seed=args.seed,
    )
    statements, errors = _load_corpus_lenient(args.input)
    stats = DatasetStats()
    counters = GenCounters()
    counters.statements_skipped = sum(1 for s in statements if s.split is not Split.TRAIN)
    lines: list[str] = []
    for batch, batch_counters in iter_batches(statements, cfg, workers=args.workers):
        counters.merge(batch_counters)
        for example in batch:
            stats.add(example)
            if args.tsv:
                lines.append(" ".join(example.input) + "\t" + " ".join(example.target))
            else:
                lines.append(json.dumps(dataset_record(example), sort_keys=True))
    atomic_write_text(args.out, "".join(line + "\n" for line in lines))
    outputs = {args.out: stats.example_count}
    if args.stats:
        stats_doc = {"format_version": 1, "mode": cfg.mode.value, **stats.as_dict()}
        atomic_write_text(args.stats, json.dumps(stats_doc, sort_keys=True, indent=2) + "\n")
        outputs[args.stats] = 1
    config = {
        "mode": cfg.mode.value,
        "k": cfg.mask_count,
        "n": cfg.samples_per_statement,
        "max_in": cfg.max_input_tokens,
        "max_out": cfg.max_output_tokens,
        "seed": cfg.seed,
        "tsv": bool(args.tsv),
        "in": args.input,
        "out": args.out,
        "stats": args.stats,
    }
    dropped = counters.dropped_target_too_long + counters.dropped_predict_truncated
    write_manifest(
        args.out,
        "gen",
        config,
        inputs={args.input: len(statements)},
        outputs=outputs,
        skipped=counters.statements_skipped + dropped,
        errors=errors,
    )
    log(
        "info",
        event="gen_done",
        examples=stats.example_count,
        statements=counters.statements_used,
        skipped_non_train=counters.statements_skipped,
        dropped_target_too_long=counters.dropped_target_too_long,
        dropped_predict_truncated=counters.dropped_predict_truncated,
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    stats = DatasetStats()
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                if line.lstrip().startswith("{"):
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise CliError(f"{args.input}:{lineno}: invalid JSON ({exc})") from exc
                    input_len, output_len = len(record["input"]), len(record["target"])
                else:
                    left, tab, right = line.partition("\t")
                    if not tab:
                        raise CliError(f"{args.input}:{lineno}: neither a JSON record nor TSV")
                    input_len, output_len = len(left.split()), len(right.split())
                stats.example_count += 1
                stats.input_token_total += input_len
                stats.output_token_total += output_len
    except OSError as exc:
        raise CliError(str(exc)) from exc
    stats_doc = {"format_version": 1, **stats.as_dict()}
    atomic_write_text(args.out, json.dumps(stats_doc, sort_keys=True, indent=2) + "\n")
    write_manifest(
        args.out,
        "stats",
        {"in": args.input, "out": args.out},
        inputs={args.input: stats.example_count},
        outputs={args.out: 1},
    )
    log("info", event="stats_done", examples=stats.example_count)
    return 0


def cmd_typecheck(args: argparse.Namespace) -> int:
    statements, errors = _load_corpus_lenient(args.input)
    arities = ArityTable()  # learned per file, shared across its statements
    records = []
    ok_count = 0
    for stmt in statements:
        try:
            check_statement(stmt, arities)
            records.append({"format_version": 1, "id": stmt.source_id, "ok": True})
            ok_count += 1
        except TypecheckError as exc:
            records.append(
                {"format_version": 1, "id": stmt.source_id, "ok": False, "error": str(exc)}
            )
    write_jsonl(args.out, records)
    write_manifest(
        args.out,
        "typecheck",
        {"in": args.input, "out": args.out},
        inputs={args.input: len(statements)},
        outputs={args.out: len(records)},
        errors=errors,
    )
    log("info", event="typecheck_done", statements=len(statements), ok=ok_count)
    return 0


def cmd_eval_extract(args: argparse.Namespace) -> int:
    statements, errors = _load_corpus_lenient(args.input)
    kind = TaskKind(args.task)
    skips = 0

    def on_skip(stmt: Statement, reason: str) -> None:
        nonlocal skips
        skips += 1
        log("warn", event="statement_skipped", id=stmt.source_id, reason=reason)

    sites = None if args.sites_per_statement == "all" else int(args.sites_per_statement)
    tasks = extract_corpus_tasks(
        statements,
        kind,
        seed=args.seed,
        sites_per_statement=sites,
        require_split=None if args.allow_split else Split.VALID,
        on_skip=on_skip,
    )
    if not tasks:
        log("warn", event="no_tasks", task=args.task, hint="no eligible validation statements")
    write_jsonl(args.out, [task_record(t) for t in tasks])
    write_manifest(
        args.out,
        "eval-extract",
        {
            "task": args.task,
            "seed": args.seed,
            "sites_per_statement": args.sites_per_statement,
            "allow_split": bool(args.allow_split),
            "in": args.input,
            "out": args.out,
        },
        inputs={args.input: len(statements)},
        outputs={args.out: len(tasks)},
        skipped=skips,
        errors=errors,
    )
    log("info", event="eval_extract_done", task=args.task, tasks=len(tasks))
    return 0


def cmd_index(args: argparse.Namespace) -> int:
    statements, errors = _load_corpus_lenient(args.input)
    train = [s for s in statements if s.split is Split.TRAIN]
    index = CorpusIndex.build(train, granularity=args.granularity)
    index.save(args.out)
    write_manifest(
        args.out,
        "index",
        {"granularity": args.granularity, "in": args.input, "out": args.out},
        inputs={args.input: len(statements)},
        outputs={args.out: len(index.statements) + len(index.expressions)},
        skipped=len(statements) - len(train),
        errors=errors,
    )
    log(
        "info",
        event="index_done",
        statements=len(index.statements),
        expressions=len(index.expressions),
    )
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    tasks = [task_from_record(r) for r in read_jsonl(args.tasks)]
    beams: dict[str, list[list[str]]] = {}
    for record in read_jsonl(args.beams):
        task_id = record.get("task_id")
        if task_id is None or "beams" not in record:
            raise CliError(f"{args.beams}: beam records need 'task_id' and 'beams'")
        if task_id in beams:
            raise CliError(f"{args.beams}: duplicate beams for task {task_id!r}")
        beams[task_id] = record["beams"]
    index = None
    if args.index:
        try:
            index = CorpusIndex.load(args.index)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    try:
        report, verdicts = score(tasks, beams, index)
    except AlignmentError as exc:
        raise CliError(f"AlignmentError: {exc}") from exc
    atomic_write_text(args.report, json.dumps(report, sort_keys=True, indent=2) + "\n")
    outputs = {args.report: 1}
    if args.verdicts:
        write_jsonl(args.verdicts, [v.as_dict() for v in verdicts])
        outputs[args.verdicts] = len(verdicts)
    inputs = {args.tasks: len(tasks), args.beams: len(beams)}
    if args.index:
        inputs[args.index] = 1
    write_manifest(
        args.report,
        "score",
        {
            "tasks": args.tasks,
            "beams": args.beams,
            "index": args.index,
            "report": args.report,
            "verdicts": args.verdicts,
        },
        inputs=inputs,
        outputs=outputs,
    )
    log("info", event="score_done", tasks=len(tasks))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holmask", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a masked-prediction training dataset")
    gen.add_argument("--mode", required=True, choices=[m.value for m in GenMode])
    gen.add_argument("--k", type=int, default=2, help="subtrees hidden behind <MASK> (skip-tree)")
    gen.add_argument("--n", type=int, default=100, help="samples per statement")
    gen.add_argument("--max-in", type=int, default=1024, help="input length cap in tokens")
    gen.add_argument("--max-out", type=int, default=512, help="target length cap in tokens")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--workers", type=int, default=1, help="parallel statement workers")
    gen.add_argument("--tsv", action="store_true", help="two tab-separated token columns")
    gen.add_argument("--in", dest="input", required=True, metavar="CORPUS")
    gen.add_argument("--out", required=True, metavar="DATASET")
    gen.add_argument("--stats", default=None, metavar="STATS_JSON")
    gen.set_defaults(func=cmd_gen)

    extract = sub.add_parser("eval-extract", help="extract evaluation tasks from a corpus")
    extract.add_argument("--task", required=True, choices=[k.value for k in TaskKind])
    extract.add_argument("--seed", type=int, default=0)
    extract.add_argument(
        "--sites-per-statement",
        default="1",
        help="type-prompt sites sampled per statement, or 'all'",
    )
    extract.add_argument(
        "--allow-split",
        action="store_true",
        help="extract from any split, not only validation",
    )
    extract.add_argument("--in", dest="input", required=True, metavar="CORPUS")
    extract.add_argument("--out", required=True, metavar="TASKS")
    extract.set_defaults(func=cmd_eval_extract)

    scorecmd = sub.add_parser("score", help="score beam predictions against tasks")
    scorecmd.add_argument("--tasks", required=True)
    scorecmd.add_argument("--beams", required=True)
    scorecmd.add_argument("--index", default=None, help="novelty index file (from `index`)")
    scorecmd.add_argument("--report", required=True)
    scorecmd.add_argument("--verdicts", default=None)
    scorecmd.set_defaults(func=cmd_score)

    stats = sub.add_parser("stats", help="recompute shape statistics of a dataset file")
    stats.add_argument("--in", dest="input", required=True, metavar="DATASET")
    stats.add_argument("--out", required=True, metavar="STATS_JSON")
    stats.set_defaults(func=cmd_stats)

    typecheck = sub.add_parser("typecheck", help="per-statement typecheck verdicts")
    typecheck.add_argument("--in", dest="input", required=True, metavar="CORPUS")
    typecheck.add_argument("--out", required=True, metavar="VERDICTS")
    typecheck.set_defaults(func=cmd_typecheck)

    index = sub.add_parser("index", help="build the novelty index from the training split")
    index.add_argument("--in", dest="input", required=True, metavar="CORPUS")
    index.add_argument("--out", required=True, metavar="INDEX_BIN")
    index.add_argument(
        "--granularity", choices=["expressions", "statements"], default="expressions"
    )
    index.set_defaults(func=cmd_index)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Dispatch a command line; returns the process exit code."""
    sys.setrecursionlimit(20000)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        log("error", error=str(exc))
        return 1
    except (CorpusError, FileNotFoundError) as exc:
        log("error", error=str(exc))
        return 1
    except Exception as exc:  # internal failures
        log("error", internal=type(exc).__name__, error=str(exc))
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
