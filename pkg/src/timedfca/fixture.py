"""Synthetic burst stream, gazetteer and gold summary for end-to-end runs.

The stream has a flat daily baseline and three injected bursts, so the only
local maxima of the daily counts are the injection days recorded in
``ground_truth.json``.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

START = 1338508800  # 2012-06-01T00:00:00Z
DAYS = 40
BASELINE = 10
BURST_TOPS = (8, 20, 32)
# extra records per day, starting the day before the top
BURST_PROFILE = (30, 90, 50, 20, 10)

GAZETTEER = [
    ("obama", "Barack_Obama", 0.9),
    ("president obama", "Barack_Obama", 0.95),
    ("health care", "Health_care", 0.8),
    ("health care law", "Patient_Protection_and_Affordable_Care_Act", 0.9),
    ("obamacare", "Patient_Protection_and_Affordable_Care_Act", 0.95),
    ("congress", "United_States_Congress", 0.7),
    ("insurance", "Health_insurance", 0.6),
    ("supreme court", "Supreme_Court_of_the_United_States", 0.95),
    ("oral arguments", "Oral_argument", 0.85),
    ("individual mandate", "Individual_mandate", 0.9),
    ("john roberts", "John_Roberts", 0.95),
    ("chief justice", "John_Roberts", 0.7),
    ("constitutional", "Constitutionality", 0.8),
    ("tax", "Tax", 0.7),
    ("mitt romney", "Mitt_Romney", 0.95),
    ("romney", "Mitt_Romney", 0.85),
    ("repeal", "Repeal", 0.8),
    ("election", "United_States_presidential_election_2012", 0.85),
]

GENERIC = ["Obama", "health care", "Congress", "insurance", "Obamacare"]
BURST_PHRASES = [
    ["Supreme Court", "oral arguments", "individual mandate"],
    ["John Roberts", "constitutional", "individual mandate", "tax", "Chief Justice"],
    ["Mitt Romney", "repeal", "election", "Romney"],
]
FILLERS = ["breaking", "wow", "just now", "big day", "read this", "thoughts", "#hcr", "news"]
VERBS = ["talks about", "and", "vs", "meets", "on", "after"]

GOLD = [
    "Supreme Court begins hearing oral arguments on individual mandate of health care law",
    "Supreme Court upholds individual mandate as a tax in ruling by John Roberts",
    "Mitt Romney vows repeal of health care law ahead of election",
]


def _daily_counts() -> list[int]:
    counts = [BASELINE] * DAYS
    for top in BURST_TOPS:
        for k, extra in enumerate(BURST_PROFILE):
            counts[top - 1 + k] += extra
    return counts


def _text(rng: random.Random, phrases: list[str]) -> str:
    picked = rng.sample(phrases, rng.randint(1, min(2, len(phrases))))
    parts = [rng.choice(FILLERS)]
    for i, p in enumerate(picked):
        if i:
            parts.append(rng.choice(VERBS))
        parts.append(p)
    if rng.random() < 0.5:
        parts.append(rng.choice(GENERIC))
    return " ".join(parts)


def generate_records(seed: int = 7) -> list[dict]:
    rng = random.Random(seed)
    counts = _daily_counts()
    burst_days = {}
    for b, top in enumerate(BURST_TOPS):
        for k in range(len(BURST_PROFILE)):
            burst_days[top - 1 + k] = b
    records = []
    for day, n in enumerate(counts):
        for k in range(n):
            ts = START + day * 86400 + rng.randrange(86400)
            if k >= BASELINE and day in burst_days:
                text = _text(rng, BURST_PHRASES[burst_days[day]])
            else:
                text = _text(rng, GENERIC)
            records.append({"id": f"r{len(records):04d}", "timestamp": ts, "text": text})
    return records


def write_fixture(out_dir, seed: int = 7) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "stream": out / "stream.jsonl",
        "gazetteer": out / "gazetteer.tsv",
        "gold": out / "gold.txt",
        "ground_truth": out / "ground_truth.json",
    }
    with open(paths["stream"], "w", encoding="utf-8") as fh:
        for rec in generate_records(seed):
            fh.write(json.dumps(rec) + "\n")
    paths["gazetteer"].write_text(
        "".join(f"{s}\t{t}\t{r}\n" for s, t, r in GAZETTEER), encoding="utf-8")
    paths["gold"].write_text("\n".join(GOLD) + "\n", encoding="utf-8")
    paths["ground_truth"].write_text(json.dumps({
        "seed": seed,
        "bin_minutes": 1440,
        "injection_bins": list(BURST_TOPS),
        "daily_counts": _daily_counts(),
    }, indent=2) + "\n", encoding="utf-8")
    return paths
