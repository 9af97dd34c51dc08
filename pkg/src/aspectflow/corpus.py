"""Review corpus ingestion.

Two input formats are supported:

1. The annotated review format used by Bing Liu's customer review datasets.
   A line starting with ``[t]`` opens a new document, the rest of the line
   being its title.  Every other non-empty line is ``annotations##sentence``
   where ``annotations`` is a comma-separated list of ``term[+n]`` /
   ``term[-n]`` items (strength 1..3), each optionally followed by modifier
   tags ``[u]``, ``[p]``, ``[s]``, ``[cc]``, ``[cs]``.  Unannotated sentences
   start directly with ``##``.  Blank lines and lines starting with ``*``
   are ignored.

2. Star-labeled review records for sentiment training: one JSON object per
   line with fields ``text`` and ``stars``.  Only 1/3/5-star records are
   kept and mapped to negative/neutral/positive.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, TextIO

logger = logging.getLogger(__name__)

MODIFIER_TAGS = frozenset({"u", "p", "s", "cc", "cs"})

# one annotation item: term, bracketed signed strength, optional modifier tags
_ANNOTATION_RE = re.compile(
    r"^\s*(?P<term>[^\[\]]+?)\s*\[(?P<strength>[+-]\d+)\]"
    r"(?P<mods>(?:\[(?:u|p|s|cc|cs)\])*)\s*$"
)
_MOD_RE = re.compile(r"\[([a-z]+)\]")


class Polarity(Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"

    @property
    def index(self) -> int:
        return POLARITY_ORDER.index(self)


# fixed label order used everywhere a polarity triple appears
POLARITY_ORDER = (Polarity.NEGATIVE, Polarity.NEUTRAL, Polarity.POSITIVE)

STARS_TO_POLARITY = {1: Polarity.NEGATIVE, 3: Polarity.NEUTRAL, 5: Polarity.POSITIVE}


@dataclass(frozen=True)
class GoldAspect:
    """A manually annotated aspect: term, signed strength, modifier tags."""

    term: str
    strength: int
    modifiers: frozenset[str] = field(default_factory=frozenset)

    @property
    def polarity(self) -> Polarity:
        return Polarity.POSITIVE if self.strength > 0 else Polarity.NEGATIVE


@dataclass(frozen=True)
class AnnotatedSentence:
    text: str
    gold: tuple[GoldAspect, ...] = ()


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    sentences: tuple[AnnotatedSentence, ...]


@dataclass(frozen=True)
class LabeledReview:
    text: str
    label: Polarity


def normalize_term(term: str) -> str:
    """Shared aspect normalization: lowercase, trim, collapse whitespace."""
    return " ".join(term.lower().split())


def _parse_annotations(raw: str) -> tuple[GoldAspect, ...] | None:
    """Parse the annotation half of a line; None if any item is malformed."""
    gold: list[GoldAspect] = []
    for item in raw.split(","):
        if not item.strip():
            continue
        m = _ANNOTATION_RE.match(item)
        if m is None:
            return None
        strength = int(m.group("strength"))
        if strength == 0 or abs(strength) > 3:
            return None
        mods = frozenset(_MOD_RE.findall(m.group("mods")))
        gold.append(GoldAspect(m.group("term").strip(), strength, mods))
    return tuple(gold)


def parse_liu_corpus(stream: Iterable[str], dataset_id: str) -> list[Document]:
    """Parse a Liu-format annotation stream into documents.

    One document per ``[t]`` marker; sentence lines attach to the most
    recent document.  Sentence lines seen before any title open a synthetic
    document with an empty title.  Malformed annotations degrade the line
    to an unannotated sentence (with a warning) rather than failing.
    Documents that end up with no sentences are dropped.
    """
    raw_docs: list[tuple[str, list[AnnotatedSentence]]] = []

    def current() -> list[AnnotatedSentence]:
        if not raw_docs:
            raw_docs.append(("", []))
        return raw_docs[-1][1]

    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n").rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("*"):
            continue
        if stripped.startswith("[t]"):
            raw_docs.append((stripped[3:].strip(), []))
            continue
        ann_part, sep, text = line.partition("##")
        if not sep:
            # no separator at all: treat the whole line as sentence text
            logger.warning("%s line %d: missing '##' separator", dataset_id, lineno)
            ann_part, text = "", line
        text = text.strip()
        if not text:
            logger.warning("%s line %d: empty sentence text, skipped", dataset_id, lineno)
            continue
        gold: tuple[GoldAspect, ...] = ()
        if ann_part.strip():
            parsed = _parse_annotations(ann_part)
            if parsed is None:
                logger.warning(
                    "%s line %d: malformed annotation %r, sentence kept unannotated",
                    dataset_id, lineno, ann_part,
                )
            else:
                gold = parsed
        current().append(AnnotatedSentence(text=text, gold=gold))

    docs: list[Document] = []
    for title, sentences in raw_docs:
        if not sentences:
            logger.warning("%s: dropping document %r with no sentences", dataset_id, title)
            continue
        docs.append(
            Document(
                id=f"{dataset_id}-{len(docs)}",
                title=title,
                sentences=tuple(sentences),
            )
        )
    return docs


def parse_liu_file(path: str | Path, dataset_id: str | None = None) -> list[Document]:
    path = Path(path)
    if dataset_id is None:
        dataset_id = path.stem
    with open(path, encoding="utf-8", errors="replace") as fh:
        return parse_liu_corpus(fh, dataset_id)


def gold_aspect_set(
    docs: Iterable[Document],
    norm: Callable[[str], str] = normalize_term,
) -> dict[str, int]:
    """Distinct normalized gold terms with total occurrence counts."""
    counts: Counter[str] = Counter()
    for doc in docs:
        for sentence in doc.sentences:
            for aspect in sentence.gold:
                counts[norm(aspect.term)] += 1
    return dict(counts)


def load_review_corpus(stream: Iterable[str] | TextIO) -> list[LabeledReview]:
    """Load star-labeled reviews from JSON lines with ``text`` and ``stars``.

    Records with ratings outside {1, 3, 5}, missing fields, or broken JSON
    are skipped; a single warning reports how many were dropped.
    """
    reviews: list[LabeledReview] = []
    skipped = 0
    for line in stream:
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            text = record["text"]
            stars = record["stars"]
        except (json.JSONDecodeError, KeyError, TypeError):
            skipped += 1
            continue
        if not isinstance(stars, int) or isinstance(stars, bool) \
                or stars not in STARS_TO_POLARITY:
            skipped += 1
            continue
        reviews.append(LabeledReview(text=str(text), label=STARS_TO_POLARITY[stars]))
    if skipped:
        logger.warning("skipped %d review records (bad fields or rating not in {1,3,5})", skipped)
    return reviews


def load_review_file(path: str | Path) -> list[LabeledReview]:
    with open(path, encoding="utf-8", errors="replace") as fh:
        return load_review_corpus(fh)
