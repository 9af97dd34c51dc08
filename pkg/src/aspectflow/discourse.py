"""Rule-based discourse segmentation and tree building (RST-lite).

Documents are cut into elementary discourse units (EDUs) at connective
boundaries, then each document gets a binary nucleus/satellite tree:
within a sentence adjacent EDUs fold right-to-left, with the relation
label taken from the second unit's leading connective; sentence subtrees
then fold left-to-right under multinuclear Joint nodes.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence, Union

from .corpus import Document

logger = logging.getLogger(__name__)


class RelationLabel(Enum):
    ELABORATION = "Elaboration"
    CONTRAST = "Contrast"
    CAUSE = "Cause"
    CONDITION = "Condition"
    TEMPORAL = "Temporal"
    ATTRIBUTION = "Attribution"
    JOINT = "Joint"
    SAME_UNIT = "SameUnit"


# nuclearity: which child is the nucleus (NN = multinuclear)
NS, SN, NN = "NS", "SN", "NN"


@dataclass(frozen=True)
class EDU:
    id: int
    sentence_index: int
    span: tuple[int, int]
    text: str


@dataclass(frozen=True)
class Leaf:
    edu: EDU


@dataclass(frozen=True)
class Internal:
    relation: RelationLabel
    nuclearity: str
    left: "DiscourseNode"
    right: "DiscourseNode"


DiscourseNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class DiscourseTree:
    doc_id: str
    root: DiscourseNode


@lru_cache(maxsize=1)
def connective_lexicon() -> dict[str, tuple[RelationLabel, bool]]:
    """connective -> (relation, is_subordinating), from the bundled data file."""
    text = resources.files("aspectflow.data").joinpath("connectives.tsv").read_text("utf-8")
    lexicon: dict[str, tuple[RelationLabel, bool]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, relation, kind = line.split("\t")
        lexicon[word] = (RelationLabel(relation), kind == "sub")
    return lexicon


_WORD_RE = re.compile(r"[A-Za-z0-9']+")
_TOKEN_RE = re.compile(r"[A-Za-z0-9']+|[^\sA-Za-z0-9']")
_SENT_BOUNDARY_RE = re.compile(r"[.!?]+\s+(?=[\"'A-Z])")
_ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "prof", "st", "vs", "etc", "e.g", "i.e",
    "inc", "ltd", "co", "jr", "sr", "fig", "no", "approx",
})

MIN_SEGMENT_WORDS = 2


def _subsentence_spans(text: str) -> list[tuple[int, int]]:
    """Safety-net sentence split; most dataset lines are single sentences."""
    boundaries = []
    for m in _SENT_BOUNDARY_RE.finditer(text):
        before = re.search(r"[\w.']+$", text[: m.start()])
        if before is not None:
            word = before.group().rstrip(".").lower()
            if word in _ABBREVIATIONS or len(word) == 1:
                continue
        boundaries.append(m.end())
    spans = []
    start = 0
    for b in boundaries:
        spans.append((start, b))
        start = b
    spans.append((start, len(text)))
    # fold word-less pieces (e.g. stray punctuation) into a neighbour
    merged: list[tuple[int, int]] = []
    for s, e in spans:
        if merged and (not _WORD_RE.search(text[s:e])
                       or not _WORD_RE.search(text[merged[-1][0]:merged[-1][1]])):
            merged[-1] = (merged[-1][0], e)
        else:
            merged.append((s, e))
    return merged


def _edu_spans(text: str, start: int, end: int) -> list[tuple[int, int]]:
    """Split one sub-sentence at connective boundaries.

    Boundary triggers: a comma/semicolon immediately followed by a known
    connective, or a subordinating connective at word position >= 2 of the
    running segment.  A split is dropped when either side would keep fewer
    than MIN_SEGMENT_WORDS word tokens.
    """
    lexicon = connective_lexicon()
    tokens = [(m.group(), m.start() + start, m.end() + start)
              for m in _TOKEN_RE.finditer(text[start:end])]
    is_word = [bool(_WORD_RE.fullmatch(t[0])) for t in tokens]
    words_after = [0] * (len(tokens) + 1)
    for k in range(len(tokens) - 1, -1, -1):
        words_after[k] = words_after[k + 1] + (1 if is_word[k] else 0)

    boundaries: list[int] = []
    words_in_segment = 0
    for k, (tok, tok_start, tok_end) in enumerate(tokens):
        split_at = None
        left_words = words_in_segment
        right_words = 0
        if tok in {",", ";"} and k + 1 < len(tokens) and is_word[k + 1] \
                and tokens[k + 1][0].lower() in lexicon:
            split_at = tok_end
            right_words = words_after[k + 1]
        elif is_word[k]:
            entry = lexicon.get(tok.lower())
            if entry is not None and entry[1] and words_in_segment >= 2:
                split_at = tok_start
                right_words = words_after[k]
        if split_at is not None and left_words >= MIN_SEGMENT_WORDS \
                and right_words >= MIN_SEGMENT_WORDS:
            boundaries.append(split_at)
            words_in_segment = 0
        if is_word[k]:
            words_in_segment += 1

    spans = []
    prev = start
    for b in boundaries:
        spans.append((prev, b))
        prev = b
    spans.append((prev, end))
    return spans


def segment_edus(doc: Document) -> list[EDU]:
    """Segment every sentence of a document into EDUs, in text order."""
    edus: list[EDU] = []
    for sent_idx, sentence in enumerate(doc.sentences):
        text = sentence.text
        if not _WORD_RE.search(text):
            logger.warning("%s sentence %d has no word tokens, skipped", doc.id, sent_idx)
            continue
        for sub_start, sub_end in _subsentence_spans(text):
            for span_start, span_end in _edu_spans(text, sub_start, sub_end):
                edus.append(EDU(
                    id=len(edus),
                    sentence_index=sent_idx,
                    span=(span_start, span_end),
                    text=text[span_start:span_end].strip(),
                ))
    return edus


def leading_connective(text: str) -> tuple[RelationLabel, bool] | None:
    m = _WORD_RE.search(text)
    if m is None:
        return None
    return connective_lexicon().get(m.group().lower())


def build_discourse_tree(edus: Sequence[EDU], doc_id: str = "") -> DiscourseTree:
    """Fold EDUs into a binary tree; leaf order equals input order."""
    if not edus:
        raise ValueError("cannot build a discourse tree from zero EDUs")

    # consecutive runs of the same sentence index
    sentence_groups: list[list[EDU]] = []
    for edu in edus:
        if sentence_groups and sentence_groups[-1][-1].sentence_index == edu.sentence_index:
            sentence_groups[-1].append(edu)
        else:
            sentence_groups.append([edu])

    sentence_trees: list[DiscourseNode] = []
    for group in sentence_groups:
        node: DiscourseNode = Leaf(group[-1])
        for i in range(len(group) - 2, -1, -1):
            entry = leading_connective(group[i + 1].text)
            if entry is None:
                relation, subordinating = RelationLabel.ELABORATION, False
            else:
                relation, subordinating = entry
            node = Internal(
                relation=relation,
                nuclearity=NS if subordinating else NN,
                left=Leaf(group[i]),
                right=node,
            )
        sentence_trees.append(node)

    root = sentence_trees[0]
    for subtree in sentence_trees[1:]:
        root = Internal(RelationLabel.JOINT, NN, root, subtree)
    return DiscourseTree(doc_id=doc_id, root=root)


def head_edu(node: DiscourseNode) -> EDU:
    """Descend into the nucleus (right only for SN) down to a leaf."""
    while isinstance(node, Internal):
        node = node.right if node.nuclearity == SN else node.left
    return node.edu


def iter_leaves(node: DiscourseNode) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        yield from iter_leaves(node.left)
        yield from iter_leaves(node.right)


def node_to_dict(node: DiscourseNode) -> dict:
    if isinstance(node, Leaf):
        e = node.edu
        return {"kind": "edu", "id": e.id, "sentence": e.sentence_index,
                "span": list(e.span), "text": e.text}
    return {"kind": "rel", "relation": node.relation.value,
            "nuclearity": node.nuclearity,
            "left": node_to_dict(node.left), "right": node_to_dict(node.right)}


def tree_to_json(tree: DiscourseTree) -> str:
    payload = {"doc_id": tree.doc_id, "root": node_to_dict(tree.root)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
