"""Lightweight POS tagging and noun-phrase aspect extraction.

The tagger is a lexicon + suffix heuristic, good enough to find noun
runs; anything it cannot place defaults to NOUN, so unseen product
vocabulary ("trackpad", "firmware") lands in the right class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .corpus import normalize_term

POS_TAGS = ("NOUN", "ADJ", "VERB", "ADV", "DET", "PRON", "PREP", "CONJ", "NUM", "OTHER")

_TOKEN_RE = re.compile(r"[A-Za-z0-9']+|[^\sA-Za-z0-9']")
_ALPHA_RE = re.compile(r"[A-Za-z']+")
_DIGIT_RE = re.compile(r"[0-9]+")

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able")


@dataclass(frozen=True)
class TaggedToken:
    text: str
    tag: str


@dataclass(frozen=True)
class AspectCandidate:
    surface: str
    normalized: str
    head: str


@lru_cache(maxsize=1)
def pos_lexicon() -> dict[str, str]:
    text = resources.files("aspectflow.data").joinpath("pos_lexicon.tsv").read_text("utf-8")
    lexicon: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lexicon[word] = tag
    return lexicon


@lru_cache(maxsize=1)
def aspect_stoplist() -> frozenset[str]:
    text = resources.files("aspectflow.data").joinpath("aspect_stoplist.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def tag_pos(text: str) -> list[TaggedToken]:
    """Tag tokens via closed-class lexicon, then suffix rules, then defaults."""
    lexicon = pos_lexicon()
    tagged: list[TaggedToken] = []
    for m in _TOKEN_RE.finditer(text):
        token = m.group()
        lower = token.lower()
        prev_tag = tagged[-1].tag if tagged else None

        if not _ALPHA_RE.fullmatch(token) and not _DIGIT_RE.fullmatch(token):
            if _ALPHA_RE.search(token) or _DIGIT_RE.search(token):
                tag = "NOUN"  # mixed alnum like "mp3"
            else:
                tag = "OTHER"  # punctuation
        elif lower in lexicon:
            tag = lexicon[lower]
        elif _DIGIT_RE.fullmatch(token):
            tag = "NUM"
        elif lower.endswith(_ADJ_SUFFIXES) and len(lower) > 5:
            tag = "ADJ"
        elif lower.endswith("ly") and len(lower) > 3:
            tag = "ADV"
        elif lower.endswith(("ing", "ed")) and len(lower) > 4:
            tag = "ADJ" if prev_tag in ("DET", "ADJ") else "VERB"
        else:
            tag = "NOUN"
        tagged.append(TaggedToken(token, tag))
    return tagged


def extract_aspects(tokens: list[TaggedToken]) -> list[AspectCandidate]:
    """Emit the noun core of every maximal (ADJ|NOUN)* NOUN+ run.

    Leading adjectives and determiners are not part of the surface: gold
    annotations are bare terms ("colors", not "changing colors").  The
    stoplist and purely numeric strings are dropped; duplicates within one
    token list collapse to the first occurrence.
    """
    stoplist = aspect_stoplist()
    candidates: list[AspectCandidate] = []
    seen: set[str] = set()

    run: list[TaggedToken] = []

    def flush() -> None:
        nonlocal run
        block, run = run, []
        # the pattern match ends at the block's last NOUN; its core is the
        # last contiguous NOUN group
        end = len(block) - 1
        while end >= 0 and block[end].tag != "NOUN":
            end -= 1
        if end < 0:
            return
        i = end
        while i > 0 and block[i - 1].tag == "NOUN":
            i -= 1
        nouns = block[i:end + 1]
        surface = " ".join(t.text for t in nouns)
        normalized = normalize_term(surface)
        if not normalized or normalized in stoplist:
            return
        if normalized.replace(" ", "").isdigit():
            return
        if normalized in seen:
            return
        seen.add(normalized)
        candidates.append(AspectCandidate(
            surface=surface,
            normalized=normalized,
            head=normalize_term(nouns[-1].text),
        ))

    for token in tokens:
        if token.tag in ("ADJ", "NOUN"):
            run.append(token)
        else:
            flush()
    flush()
    return candidates
