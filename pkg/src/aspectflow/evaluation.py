"""Aspect agreement scoring against gold annotations.

Predicted and gold sets are distinct normalized terms per corpus.  Exact
matching is the default; Jaro-Winkler matching treats a pair as equal
once similarity reaches the threshold (0.90 unless overridden).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Document, gold_aspect_set
from .graph import filter_by_importance, pagerank
from .pipeline import build_graph
from .sentiment import SentimentModel

DEFAULT_JW_THRESHOLD = 0.90


@dataclass(frozen=True)
class MatchMode:
    kind: str  # "exact" or "jw"
    threshold: float = DEFAULT_JW_THRESHOLD

    def __post_init__(self):
        if self.kind not in ("exact", "jw"):
            raise ValueError(f"unknown match mode {self.kind!r}")
        if self.kind == "jw" and not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"jw threshold must be in (0, 1], got {self.threshold}")

    @classmethod
    def exact(cls) -> "MatchMode":
        return cls("exact")

    @classmethod
    def jaro_winkler(cls, threshold: float = DEFAULT_JW_THRESHOLD) -> "MatchMode":
        return cls("jw", threshold)


@dataclass(frozen=True)
class EvalPoint:
    factor: float
    n_predicted: int
    precision: float
    recall: float
    f1: float
    sentiment_filter: bool


def jaro_winkler(a: str, b: str) -> float:
    """Jaro similarity plus the prefix boost j + l*0.1*(1-j), l capped at 4."""
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0

    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0
    matched_a = [False] * la
    matched_b = [False] * lb
    matches = 0
    for i, ch in enumerate(a):
        lo = max(0, i - window)
        hi = min(lb - 1, i + window)
        for j in range(lo, hi + 1):
            if not matched_b[j] and b[j] == ch:
                matched_a[i] = matched_b[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0

    seq_a = [a[i] for i in range(la) if matched_a[i]]
    seq_b = [b[j] for j in range(lb) if matched_b[j]]
    transpositions = sum(1 for x, y in zip(seq_a, seq_b) if x != y) / 2

    jaro = (matches / la + matches / lb + (matches - transpositions) / matches) / 3
    prefix = 0
    for x, y in zip(a, b):
        if x != y or prefix == 4:
            break
        prefix += 1
    return jaro + prefix * 0.1 * (1.0 - jaro)


def evaluate_sets(
    predicted: Iterable[str],
    gold: Iterable[str],
    mode: MatchMode = MatchMode("exact"),
) -> tuple[float, float]:
    """(precision, recall) of predicted vs gold distinct-term sets."""
    predicted = set(predicted)
    gold = set(gold)
    if not gold:
        raise ValueError("gold aspect set is empty; nothing to evaluate against")
    if not predicted:
        return 0.0, 0.0

    if mode.kind == "exact":
        hits = len(predicted & gold)
        return hits / len(predicted), hits / len(gold)

    matched_pred = sum(
        1 for p in predicted if any(jaro_winkler(p, g) >= mode.threshold for g in gold)
    )
    matched_gold = sum(
        1 for g in gold if any(jaro_winkler(p, g) >= mode.threshold for p in predicted)
    )
    return matched_pred / len(predicted), matched_gold / len(gold)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def default_factors(lo: float = 0.05, hi: float = 1.0, step: float = 0.05) -> list[float]:
    if step <= 0:
        raise ValueError("sweep step must be positive")
    factors = []
    k = 0
    while True:
        value = round(lo + k * step, 9)
        if value > hi + 1e-9:
            break
        factors.append(min(value, 1.0))
        k += 1
    if not factors:
        raise ValueError("sweep produced no factors")
    return factors


def sweep_curves(
    corpus: Sequence[Document],
    model: SentimentModel,
    factors: Sequence[float],
    mode: MatchMode = MatchMode("exact"),
    workers: int = 1,
) -> tuple[list[EvalPoint], list[EvalPoint]]:
    """Precision/recall sweep, once with sentiment filtering and once without.

    The pipeline and PageRank run one time per filter mode; each factor then
    just truncates the ranked list.
    """
    gold = set(gold_aspect_set(corpus))
    if not gold:
        raise ValueError("corpus has no gold aspect annotations to evaluate against")
    curves: list[list[EvalPoint]] = []
    for sentiment_filter in (True, False):
        arrg, _, _ = build_graph(corpus, model, sentiment_filter, workers=workers)
        ranked = pagerank(arrg) if arrg.nodes else []
        points = []
        for factor in factors:
            kept = filter_by_importance(ranked, factor) if ranked else []
            if kept:
                precision, recall = evaluate_sets(kept, gold, mode)
            else:
                precision, recall = 0.0, 0.0
            points.append(EvalPoint(
                factor=factor,
                n_predicted=len(kept),
                precision=precision,
                recall=recall,
                f1=f1_score(precision, recall),
                sentiment_filter=sentiment_filter,
            ))
        # growing the kept set can only add matches
        recalls = [p.recall for p in points]
        assert recalls == sorted(recalls), "recall must be non-decreasing in the factor"
        curves.append(points)
    return curves[0], curves[1]


def curves_to_csv(filtered: Sequence[EvalPoint], unfiltered: Sequence[EvalPoint]) -> str:
    """CSV rows sorted by (mode, factor); reals as 6-decimal fixed point."""
    lines = ["mode,factor,n_predicted,precision,recall,f1"]
    labeled = [("filtered", p) for p in filtered] + [("unfiltered", p) for p in unfiltered]
    labeled.sort(key=lambda item: (item[0], item[1].factor))
    for mode_name, p in labeled:
        lines.append(
            f"{mode_name},{p.factor:.6f},{p.n_predicted},"
            f"{p.precision:.6f},{p.recall:.6f},{p.f1:.6f}"
        )
    return "\n".join(lines) + "\n"
