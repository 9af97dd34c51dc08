"""Document pipeline: segment, tree, annotate, relate, merge.

Documents are independent up to the final graph merge, which is a
commutative counter sum applied in document order, so results never
depend on the worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .adt import AspectEDU, annotate_tree, iter_units
from .corpus import Document, POLARITY_ORDER
from .discourse import build_discourse_tree, segment_edus
from .graph import ARRG, AspectRelation, extract_relations, merge_into_graph
from .sentiment import SentimentModel

logger = logging.getLogger(__name__)

SNIPPETS_PER_ASPECT = 3


@dataclass
class DocAnalysis:
    doc_id: str
    relations: list[AspectRelation]
    active_units: list[AspectEDU]


def analyze_document(doc: Document, model: SentimentModel, sentiment_filter: bool) -> DocAnalysis:
    edus = segment_edus(doc)
    if not edus:
        logger.warning("document %s produced no EDUs, skipped", doc.id)
        return DocAnalysis(doc.id, [], [])
    tree = build_discourse_tree(edus, doc.id)
    adt = annotate_tree(tree, model, sentiment_filter)
    relations = extract_relations(adt)
    active_units = [unit for unit in iter_units(adt.root) if unit.active]
    return DocAnalysis(doc.id, relations, active_units)


_worker_model: SentimentModel | None = None
_worker_filter: bool = True


def _init_worker(model: SentimentModel, sentiment_filter: bool) -> None:
    global _worker_model, _worker_filter
    _worker_model = model
    _worker_filter = sentiment_filter


def _analyze_in_worker(doc: Document) -> DocAnalysis:
    assert _worker_model is not None
    return analyze_document(doc, _worker_model, _worker_filter)


@dataclass
class NoAspectSentiments:
    """Active EDUs that carry sentiment but no aspect candidates."""
    counts: dict[str, int]
    examples: list[str]


def build_graph(
    docs: Sequence[Document],
    model: SentimentModel,
    sentiment_filter: bool = True,
    workers: int = 1,
) -> tuple[ARRG, dict[str, list[str]], NoAspectSentiments]:
    """Analyze every document and merge into one graph.

    Also returns example EDU snippets per aspect (first few active
    occurrences in corpus order) and a tally of aspect-less scored EDUs,
    both consumed by the report command.
    """
    if workers <= 1:
        analyses = [analyze_document(doc, model, sentiment_filter) for doc in docs]
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(model, sentiment_filter),
        ) as executor:
            analyses = list(executor.map(_analyze_in_worker, docs, chunksize=16))

    graph = ARRG()
    snippets: dict[str, list[str]] = {}
    no_aspect = NoAspectSentiments(
        counts={p.value: 0 for p in POLARITY_ORDER}, examples=[])
    for analysis in analyses:
        merge_into_graph(graph, analysis.relations, analysis.active_units)
        for unit in analysis.active_units:
            if not unit.aspects:
                no_aspect.counts[unit.polarity.value] += 1
                if len(no_aspect.examples) < SNIPPETS_PER_ASPECT:
                    no_aspect.examples.append(unit.edu.text)
                continue
            for candidate in unit.aspects:
                bucket = snippets.setdefault(candidate.normalized, [])
                if len(bucket) < SNIPPETS_PER_ASPECT:
                    bucket.append(unit.edu.text)
    return graph, snippets, no_aspect
