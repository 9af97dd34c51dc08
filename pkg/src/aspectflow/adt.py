"""Aspect-annotated discourse trees.

Every leaf gets a sentiment prediction and its noun-phrase aspect
candidates.  With sentiment filtering on, neutral leaves are flagged
inactive instead of being removed, so tree shape and EDU order survive
for relation extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

from .aspects import AspectCandidate, extract_aspects, tag_pos
from .corpus import Polarity
from .discourse import EDU, SN, DiscourseTree, Internal, Leaf, RelationLabel, node_to_dict
from .sentiment import SentimentModel, predict


@dataclass(frozen=True)
class AspectEDU:
    edu: EDU
    polarity: Polarity
    probabilities: tuple[float, float, float]
    aspects: tuple[AspectCandidate, ...]
    active: bool


@dataclass(frozen=True)
class ALeaf:
    unit: AspectEDU


@dataclass(frozen=True)
class AInternal:
    relation: RelationLabel
    nuclearity: str
    left: "ADTNode"
    right: "ADTNode"


ADTNode = Union[ALeaf, AInternal]


@dataclass(frozen=True)
class AspectDiscourseTree:
    doc_id: str
    root: ADTNode


def annotate_tree(
    tree: DiscourseTree,
    model: SentimentModel,
    sentiment_filter: bool = True,
) -> AspectDiscourseTree:
    """Copy the tree, scoring and aspect-tagging every leaf."""

    def convert(node) -> ADTNode:
        if isinstance(node, Leaf):
            polarity, probs = predict(model, node.edu.text)
            aspects = tuple(extract_aspects(tag_pos(node.edu.text)))
            active = not (sentiment_filter and polarity is Polarity.NEUTRAL)
            return ALeaf(AspectEDU(
                edu=node.edu,
                polarity=polarity,
                probabilities=probs,
                aspects=aspects,
                active=active,
            ))
        assert isinstance(node, Internal)
        return AInternal(node.relation, node.nuclearity, convert(node.left), convert(node.right))

    return AspectDiscourseTree(doc_id=tree.doc_id, root=convert(tree.root))


def head_unit(node: ADTNode) -> AspectEDU:
    """Nucleus-path leaf of an annotated subtree (right child only for SN)."""
    while isinstance(node, AInternal):
        node = node.right if node.nuclearity == SN else node.left
    return node.unit


def iter_units(node: ADTNode) -> Iterator[AspectEDU]:
    """Leaves in text order."""
    if isinstance(node, ALeaf):
        yield node.unit
    else:
        yield from iter_units(node.left)
        yield from iter_units(node.right)


def adt_node_to_dict(node: ADTNode) -> dict:
    if isinstance(node, ALeaf):
        unit = node.unit
        payload = node_to_dict(Leaf(unit.edu))
        payload.update({
            "polarity": unit.polarity.value,
            "probabilities": list(unit.probabilities),
            "aspects": [c.normalized for c in unit.aspects],
            "active": unit.active,
        })
        return payload
    return {"kind": "rel", "relation": node.relation.value,
            "nuclearity": node.nuclearity,
            "left": adt_node_to_dict(node.left), "right": adt_node_to_dict(node.right)}


def adt_to_json(tree: AspectDiscourseTree) -> str:
    payload = {"doc_id": tree.doc_id, "root": adt_node_to_dict(tree.root)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
