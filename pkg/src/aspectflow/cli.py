"""Command-line front end: train / analyze / evaluate / report.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  All output
files are written atomically (temp file + rename), and every command is
deterministic for fixed inputs and flags, whatever the worker count.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from .corpus import Document, POLARITY_ORDER, gold_aspect_set, load_review_file, parse_liu_file
from .evaluation import MatchMode, curves_to_csv, default_factors, sweep_curves
from .graph import build_hierarchy, filter_by_importance, graph_to_json, pagerank
from .pipeline import build_graph
from .sentiment import (
    DEFAULT_VOCAB_SIZE,
    TrainConfig,
    load_model,
    model_to_json,
    seed_corpus_path,
    train,
)

logger = logging.getLogger(__name__)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_documents(path: str) -> list[Document]:
    p = Path(path)
    if p.is_dir():
        files = sorted(p.glob("*.txt"))
        if not files:
            raise FileNotFoundError(f"no .txt dataset files in {p}")
        docs: list[Document] = []
        for f in files:
            docs.extend(parse_liu_file(f))
        return docs
    if not p.is_file():
        raise FileNotFoundError(f"input not found: {p}")
    return parse_liu_file(p)


def _fraction(value: str) -> float:
    try:
        f = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")
    if not 0.0 < f <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1]: {value}")
    return f


def _sweep(value: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(part) for part in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {value!r}")
    if not (0.0 < lo <= hi <= 1.0 and step > 0.0):
        raise argparse.ArgumentTypeError(f"bad sweep bounds: {value}")
    return lo, hi, step


def _prepare_out(path: Path, directory: bool = False) -> Path:
    """Fail on unusable output locations before any expensive work runs."""
    target = path if directory else path.parent
    target.mkdir(parents=True, exist_ok=True)
    if not os.access(target, os.W_OK):
        raise PermissionError(f"output location not writable: {target}")
    return path


def cmd_train(args: argparse.Namespace) -> int:
    _prepare_out(Path(args.out))
    corpus_path = seed_corpus_path() if args.corpus == "seed" else Path(args.corpus)
    reviews = load_review_file(corpus_path)
    if not reviews:
        raise ValueError(f"no usable reviews in {corpus_path}")
    config = TrainConfig(learning_rate=args.lr, l2=args.l2, epochs=args.epochs)
    model = train(reviews, config, max_vocab=args.vocab_size)

    out = Path(args.out)
    _atomic_write(out, model_to_json(model) + "\n")
    loss_log = out.with_name(out.stem + ".losses.csv")
    lines = ["epoch,loss"] + [f"{i},{loss:.10f}" for i, loss in enumerate(model.loss_history)]
    _atomic_write(loss_log, "\n".join(lines) + "\n")

    print(f"trained on {len(reviews)} reviews, vocabulary size {len(model.vocab)}")
    print(f"model written to {out}")
    print(f"loss log written to {loss_log}")
    return 0


def _ranked_csv(ranked) -> str:
    lines = ["aspect,score"]
    lines += [f"{r.aspect},{r.score:.17g}" for r in ranked]
    return "\n".join(lines) + "\n"


def cmd_analyze(args: argparse.Namespace) -> int:
    _prepare_out(Path(args.out), directory=True)
    model = load_model(args.model)
    docs = _load_documents(args.input)
    if not docs:
        raise ValueError(f"no documents parsed from {args.input}")

    sentiment_filter = not args.no_sentiment_filter
    graph, snippets, no_aspect = build_graph(
        docs, model, sentiment_filter, workers=args.workers)
    ranked = pagerank(graph) if graph.nodes else []
    kept = filter_by_importance(ranked, args.factor) if ranked else []
    if kept:
        hierarchy = build_hierarchy(graph, kept)
        hierarchy_payload = {
            "root": hierarchy.root,
            "children": {a: list(kids) for a, kids in hierarchy.children.items()},
        }
    else:
        hierarchy_payload = {"root": None, "children": {}}
    report_payload = {
        "aspects": snippets,
        "no_aspect_edus": {"counts": no_aspect.counts, "examples": no_aspect.examples},
    }

    out = Path(args.out)
    _atomic_write(out / "graph.json", graph_to_json(graph, ranked) + "\n")
    _atomic_write(out / "ranked.csv", _ranked_csv(ranked))
    _atomic_write(out / "kept.txt", "".join(a + "\n" for a in kept))
    _atomic_write(out / "hierarchy.json",
                  json.dumps(hierarchy_payload, indent=2, sort_keys=True) + "\n")
    _atomic_write(out / "snippets.json",
                  json.dumps(report_payload, indent=2, sort_keys=True) + "\n")

    print(f"analyzed {len(docs)} documents "
          f"(sentiment filter {'on' if sentiment_filter else 'off'})")
    print(f"graph: {len(graph.nodes)} aspects, {len(graph.edges)} edges; "
          f"kept {len(kept)} at factor {args.factor}")
    print(f"outputs in {out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    _prepare_out(Path(args.out))
    model = load_model(args.model)
    docs = _load_documents(args.gold)
    gold = gold_aspect_set(docs)
    if not gold:
        raise ValueError(f"no gold aspect annotations found in {args.gold}")

    mode = MatchMode.exact() if args.match == "exact" else MatchMode.jaro_winkler(args.jw_threshold)
    factors = default_factors(*args.sweep)
    filtered, unfiltered = sweep_curves(docs, model, factors, mode, workers=args.workers)

    _atomic_write(Path(args.out), curves_to_csv(filtered, unfiltered))
    print(f"evaluated {len(docs)} documents against {len(gold)} gold aspects "
          f"({args.match} matching), {2 * len(factors)} curve rows -> {args.out}")

    if args.table:
        print(f"{'mode':<11}{'factor':>7}{'kept':>7}{'prec':>8}{'rec':>8}{'f1':>8}")
        for name, points in (("filtered", filtered), ("unfiltered", unfiltered)):
            for p in points:
                print(f"{name:<11}{p.factor:>7.2f}{p.n_predicted:>7}"
                      f"{p.precision:>8.3f}{p.recall:>8.3f}{p.f1:>8.3f}")

    # headline comparison: dropping the sentiment filter is reported in the
    # source analysis to roughly double precision
    mean_f = sum(p.precision for p in filtered) / len(filtered)
    mean_u = sum(p.precision for p in unfiltered) / len(unfiltered)
    if mean_f > 0:
        print(f"precision ratio unfiltered/filtered (mean over sweep): {mean_u / mean_f:.3f}")
    else:
        print("precision ratio unfiltered/filtered (mean over sweep): n/a "
              "(filtered precision is zero)")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    analysis = Path(args.analysis)
    graph_payload = json.loads((analysis / "graph.json").read_text("utf-8"))
    kept = [line.strip() for line in (analysis / "kept.txt").read_text("utf-8").splitlines()
            if line.strip()]
    snippets_path = analysis / "snippets.json"
    payload = json.loads(snippets_path.read_text("utf-8")) if snippets_path.exists() else {}
    snippets = payload.get("aspects", {})
    no_aspect = payload.get("no_aspect_edus", {})

    stats = {node["aspect"]: node for node in graph_payload["nodes"]}
    top = args.top
    if top > len(kept):
        print(f"requested top {top} but only {len(kept)} aspects kept; showing all")
        top = len(kept)

    for position, aspect in enumerate(kept[:top], start=1):
        node = stats.get(aspect, {})
        score = node.get("pagerank", 0.0)
        counts = node.get("sentiment_counts", [0, 0, 0])
        total = sum(counts)
        if total:
            shares = [
                f"{polarity.value} {100.0 * count / total:.0f}%"
                for polarity, count in zip(POLARITY_ORDER, counts)
                if count
            ]
            sentiment = ", ".join(shares)
        else:
            sentiment = "no scored occurrences"
        print(f"#{position} {aspect}  (pagerank {score:.6f}, mentions {total})")
        print(f"   sentiment: {sentiment}")
        for text in snippets.get(aspect, [])[:3]:
            print(f'   - "{text}"')

    counts = no_aspect.get("counts", {})
    scored = sum(counts.values())
    if scored:
        parts = ", ".join(f"{label} {n}" for label, n in counts.items() if n)
        print(f"\nscored EDUs without aspects: {scored} ({parts})")
        for text in no_aspect.get("examples", []):
            print(f'   - "{text}"')
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspectflow",
        description="Discourse-aware aspect mining and sentiment analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train the sentiment model")
    p_train.add_argument("--corpus", required=True,
                         help="JSONL review file with text/stars fields, or 'seed' "
                              "for the bundled corpus")
    p_train.add_argument("--out", required=True, help="output model JSON path")
    p_train.add_argument("--vocab-size", type=int, default=DEFAULT_VOCAB_SIZE)
    p_train.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p_train.add_argument("--l2", type=float, default=TrainConfig.l2)
    p_train.add_argument("--lr", type=float, default=TrainConfig.learning_rate)
    p_train.set_defaults(func=cmd_train)

    p_analyze = sub.add_parser("analyze", help="run the aspect pipeline over a dataset")
    p_analyze.add_argument("--model", required=True)
    p_analyze.add_argument("--input", required=True,
                           help="Liu-format dataset file or directory of .txt files")
    p_analyze.add_argument("--factor", type=_fraction, default=1.0,
                           help="importance factor: fraction of ranked aspects kept")
    p_analyze.add_argument("--no-sentiment-filter", action="store_true",
                           help="keep neutral EDUs active")
    p_analyze.add_argument("--workers", type=int, default=1)
    p_analyze.add_argument("--out", required=True, help="output directory")
    p_analyze.set_defaults(func=cmd_analyze)

    p_eval = sub.add_parser("evaluate", help="precision/recall sweep against gold aspects")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--gold", required=True,
                        help="annotated Liu-format dataset file or directory")
    p_eval.add_argument("--sweep", type=_sweep, default=(0.05, 1.0, 0.05),
                        metavar="LO:HI:STEP")
    p_eval.add_argument("--match", choices=("exact", "jw"), default="exact")
    p_eval.add_argument("--jw-threshold", type=_fraction, default=0.90)
    p_eval.add_argument("--workers", type=int, default=1)
    p_eval.add_argument("--out", required=True, help="output CSV path")
    p_eval.add_argument("--table", action="store_true", help="print a plain-text table")
    p_eval.set_defaults(func=cmd_evaluate)

    p_report = sub.add_parser("report", help="summarize an analyze run")
    p_report.add_argument("--analysis", required=True, help="analyze output directory")
    p_report.add_argument("--top", type=int, default=10)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
