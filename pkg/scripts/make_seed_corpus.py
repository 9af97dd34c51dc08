#!/usr/bin/env python3
"""Regenerate the bundled seed training corpus (deterministic).

Builds ~300 short star-labeled review sentences from polarity word lists,
balanced across 1/3/5 stars, and writes them to
src/aspectflow/data/seed_reviews.jsonl.  Shared sentence frames keep
function words class-neutral so the classifier keys on polarity terms.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "aspectflow" / "data" / "seed_reviews.jsonl"

NOUNS = [
    "monitor", "screen", "keyboard", "battery", "speaker", "router",
    "printer", "laptop", "camera", "mouse", "charger", "display",
    "company", "service", "price", "quality", "sound", "design",
    "stand", "button",
]

POSITIVE = [
    "great", "excellent", "superb", "fantastic", "amazing", "wonderful",
    "awesome", "perfect", "impressive", "outstanding", "solid", "crisp",
    "comfortable", "reliable", "sturdy", "vibrant", "gorgeous", "superior",
]
POSITIVE_ADV = ["flawlessly", "smoothly", "beautifully", "perfectly", "wonderfully"]

NEGATIVE = [
    "terrible", "awful", "horrible", "disappointing", "broken", "defective",
    "useless", "poor", "flimsy", "noisy", "slow", "ugly", "faulty",
    "unreliable", "dreadful", "shoddy", "unusable", "miserable",
]

DAYS = ["monday", "tuesday", "wednesday", "thursday", "friday"]
NEUTRAL_ITEMS = ["manual", "cable", "adapter", "warranty card", "driver disc"]

N_PER_CLASS = 100


def positive_sentence(rng):
    noun, other = rng.sample(NOUNS, 2)
    frames = [
        f"The {noun} is {rng.choice(POSITIVE)}.",
        f"We are well pleased with the {noun} and the {other}.",
        f"I love the {noun}, and it works {rng.choice(POSITIVE_ADV)}.",
        f"This {noun} is {rng.choice(POSITIVE)} and the {other} is {rng.choice(POSITIVE)}.",
        f"Absolutely {rng.choice(POSITIVE)}, I would recommend this {noun}.",
        f"The {noun} looks {rng.choice(POSITIVE)} and feels {rng.choice(POSITIVE)}.",
    ]
    return rng.choice(frames)


def negative_sentence(rng):
    noun, other = rng.sample(NOUNS, 2)
    frames = [
        f"The {noun} is {rng.choice(NEGATIVE)}.",
        f"I hate the {noun}, and it is {rng.choice(NEGATIVE)}.",
        f"This {noun} stopped responding and the {other} is {rng.choice(NEGATIVE)}.",
        f"I returned it because the {noun} was {rng.choice(NEGATIVE)}.",
        f"I want a refund for this {rng.choice(NEGATIVE)} {noun}.",
        f"The {noun} looks {rng.choice(NEGATIVE)} and feels {rng.choice(NEGATIVE)}.",
    ]
    return rng.choice(frames)


def neutral_sentence(rng):
    noun, other = rng.sample(NOUNS, 2)
    frames = [
        f"I purchased this {noun} as a gift.",
        f"The box includes a {rng.choice(NEUTRAL_ITEMS)} and a {rng.choice(NEUTRAL_ITEMS)}.",
        f"It arrived on {rng.choice(DAYS)}.",
        f"I ordered the {noun} from the store last {rng.choice(DAYS)}.",
        f"The {noun} comes in a standard version.",
        f"I plugged the {noun} into the {other}.",
    ]
    return rng.choice(frames)


def main():
    rng = random.Random(7)
    records = []
    for _ in range(N_PER_CLASS):
        records.append({"text": positive_sentence(rng), "stars": 5})
        records.append({"text": neutral_sentence(rng), "stars": 3})
        records.append({"text": negative_sentence(rng), "stars": 1})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
