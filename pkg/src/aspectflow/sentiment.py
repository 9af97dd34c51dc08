"""Bag-of-words sentiment classification over {negative, neutral, positive}.

Multinomial logistic regression trained by full-batch gradient descent on
raw token counts.  The vocabulary keeps the most frequent terms (default
cap 50,000) with lexicographic tie-breaking so builds are deterministic.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .corpus import POLARITY_ORDER, LabeledReview, Polarity

MODEL_FORMAT_VERSION = 1
DEFAULT_VOCAB_SIZE = 50_000

_TOKEN_RE = re.compile(r"[a-z]+(?:'[a-z]+)*")


def tokenize(text: str) -> list[str]:
    """Lowercased alphabetic runs, apostrophes allowed inside a token."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    max_size: int = DEFAULT_VOCAB_SIZE

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __getstate__(self):
        return {"terms": self.terms, "max_size": self.max_size}

    def __setstate__(self, state):
        object.__setattr__(self, "terms", state["terms"])
        object.__setattr__(self, "max_size", state["max_size"])
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(state["terms"])})

    def __len__(self) -> int:
        return len(self.terms)

    def index(self, term: str) -> int | None:
        return self._index.get(term)


@dataclass
class TrainConfig:
    learning_rate: float = 0.5
    l2: float = 1e-4
    epochs: int = 200


@dataclass
class SentimentModel:
    vocab: Vocabulary
    weights: np.ndarray  # 3 x (|vocab| + 1); last column is the bias
    config: TrainConfig
    label_order: tuple[str, ...] = tuple(p.value for p in POLARITY_ORDER)
    loss_history: list[float] = field(default_factory=list)


def build_vocabulary(corpus: Sequence[LabeledReview], max_size: int = DEFAULT_VOCAB_SIZE) -> Vocabulary:
    """Top max_size terms by corpus frequency, ties broken lexicographically."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    counts: Counter[str] = Counter()
    for review in corpus:
        counts.update(tokenize(review.text))
    if not counts:
        raise ValueError("corpus contains no tokens")
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Vocabulary(terms=tuple(t for t, _ in ordered[:max_size]), max_size=max_size)


def vectorize(text: str, vocab: Vocabulary) -> np.ndarray:
    """Count vector over the vocabulary; out-of-vocabulary tokens ignored."""
    vec = np.zeros(len(vocab), dtype=np.float64)
    for token in tokenize(text):
        idx = vocab.index(token)
        if idx is not None:
            vec[idx] += 1.0
    return vec


def _design_matrix(corpus: Sequence[LabeledReview], vocab: Vocabulary) -> sparse.csr_matrix:
    data, indices, indptr = [], [], [0]
    for review in corpus:
        row: Counter[int] = Counter()
        for token in tokenize(review.text):
            idx = vocab.index(token)
            if idx is not None:
                row[idx] += 1
        for idx in sorted(row):
            indices.append(idx)
            data.append(float(row[idx]))
        indptr.append(len(indices))
    return sparse.csr_matrix((data, indices, indptr), shape=(len(corpus), len(vocab)))


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def loss_and_gradient(
    weights: np.ndarray,
    features: sparse.csr_matrix,
    labels: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray]:
    """Mean softmax cross-entropy plus (l2/2)*||W||^2, bias excluded.

    ``weights`` is 3 x (n_features + 1) with the bias in the last column;
    ``labels`` holds class indices.
    """
    n = features.shape[0]
    scores = features @ weights[:, :-1].T + weights[:, -1]
    probs = _softmax(scores)
    eps = 1e-300
    loss = -float(np.mean(np.log(probs[np.arange(n), labels] + eps)))
    loss += 0.5 * l2 * float(np.sum(weights[:, :-1] ** 2))

    delta = probs.copy()
    delta[np.arange(n), labels] -= 1.0
    grad = np.empty_like(weights)
    grad[:, :-1] = (features.T @ delta).T / n + l2 * weights[:, :-1]
    grad[:, -1] = delta.sum(axis=0) / n
    return loss, grad


def train(
    corpus: Sequence[LabeledReview],
    config: TrainConfig | None = None,
    max_vocab: int = DEFAULT_VOCAB_SIZE,
) -> SentimentModel:
    """Full-batch gradient descent from zero weights (convex objective)."""
    config = config or TrainConfig()
    classes = {review.label for review in corpus}
    if len(classes) < 2:
        raise ValueError("training corpus must contain at least two classes")

    vocab = build_vocabulary(corpus, max_vocab)
    features = _design_matrix(corpus, vocab)
    labels = np.array([review.label.index for review in corpus], dtype=np.intp)

    weights = np.zeros((len(POLARITY_ORDER), len(vocab) + 1), dtype=np.float64)
    losses: list[float] = []
    for _ in range(config.epochs):
        loss, grad = loss_and_gradient(weights, features, labels, config.l2)
        losses.append(loss)
        weights -= config.learning_rate * grad

    return SentimentModel(vocab=vocab, weights=weights, config=config, loss_history=losses)


def predict(model: SentimentModel, text: str) -> tuple[Polarity, tuple[float, float, float]]:
    """Class and probability triple; ties resolve to the earliest label."""
    x = vectorize(text, model.vocab)
    scores = model.weights[:, :-1] @ x + model.weights[:, -1]
    probs = _softmax(scores)
    best = int(np.argmax(probs))
    return POLARITY_ORDER[best], (float(probs[0]), float(probs[1]), float(probs[2]))


def training_accuracy(model: SentimentModel, corpus: Iterable[LabeledReview]) -> float:
    total = hits = 0
    for review in corpus:
        total += 1
        if predict(model, review.text)[0] is review.label:
            hits += 1
    return hits / total if total else 0.0


def model_to_json(model: SentimentModel) -> str:
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "hyperparams": {
            "learning_rate": model.config.learning_rate,
            "l2": model.config.l2,
            "epochs": model.config.epochs,
        },
        "label_order": list(model.label_order),
        "vocabulary": {"terms": list(model.vocab.terms), "max_size": model.vocab.max_size},
        "weights": model.weights.tolist(),
        "loss_history": [float(x) for x in model.loss_history],
    }
    return json.dumps(payload)


def save_model(model: SentimentModel, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: str | Path) -> SentimentModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format: {payload.get('format_version')!r}")
    expected = [p.value for p in POLARITY_ORDER]
    if payload["label_order"] != expected:
        raise ValueError(f"unexpected label order {payload['label_order']!r}")
    vocab = Vocabulary(
        terms=tuple(payload["vocabulary"]["terms"]),
        max_size=int(payload["vocabulary"]["max_size"]),
    )
    hp = payload["hyperparams"]
    config = TrainConfig(learning_rate=hp["learning_rate"], l2=hp["l2"], epochs=hp["epochs"])
    weights = np.array(payload["weights"], dtype=np.float64)
    if weights.shape != (len(POLARITY_ORDER), len(vocab) + 1):
        raise ValueError(f"weight matrix shape {weights.shape} does not match vocabulary")
    return SentimentModel(
        vocab=vocab, weights=weights, config=config,
        loss_history=list(payload.get("loss_history", [])),
    )


def seed_corpus_path() -> Path:
    """Path of the bundled synthetic training corpus."""
    return Path(str(resources.files("aspectflow.data").joinpath("seed_reviews.jsonl")))
