"""Discourse-aware aspect mining and sentiment analysis for review corpora."""

from .adt import AspectDiscourseTree, AspectEDU, annotate_tree
from .aspects import AspectCandidate, TaggedToken, extract_aspects, tag_pos
from .corpus import (
    AnnotatedSentence,
    Document,
    GoldAspect,
    LabeledReview,
    Polarity,
    gold_aspect_set,
    load_review_corpus,
    normalize_term,
    parse_liu_corpus,
    parse_liu_file,
)
from .discourse import (
    EDU,
    DiscourseTree,
    RelationLabel,
    build_discourse_tree,
    head_edu,
    segment_edus,
)
from .evaluation import EvalPoint, MatchMode, evaluate_sets, jaro_winkler, sweep_curves
from .graph import (
    ARRG,
    AspectHierarchyTree,
    AspectRelation,
    RankedAspect,
    build_hierarchy,
    extract_relations,
    filter_by_importance,
    merge_into_graph,
    pagerank,
)
from .pipeline import build_graph
from .sentiment import (
    SentimentModel,
    TrainConfig,
    Vocabulary,
    build_vocabulary,
    load_model,
    predict,
    save_model,
    seed_corpus_path,
    train,
    vectorize,
)

__version__ = "0.1.0"
