#!/usr/bin/env python3
"""Regenerates the bundled sample dataset and the surrogate training corpus.

Everything is seeded, so the files are reproducible byte for byte. The bundle
covers 65 ISO weeks starting Monday 2022-01-03 and embeds a 3-week lead of the
online signals (posts, trends) over reported cases, plus two outbreak waves.
"""
import json
import math
import random
from datetime import date, timedelta
from pathlib import Path

HERE = Path(__file__).resolve().parent
SAMPLE = HERE / "sample"
START = date(2022, 1, 3)  # a Monday
WEEKS = 65
LEAD = 3  # online activity precedes cases by this many weeks


def week_start(w: int) -> date:
    return START + timedelta(weeks=w)


def posts_activity(w: int) -> float:
    """Latent post volume; dominated by the spring wave."""
    return 30.0 * math.exp(-((w - 15) ** 2) / 18.0) + 6.0 * math.exp(-((w - 49) ** 2) / 14.0)


def trends_activity(w: int) -> float:
    """Latent search interest; dominated by the autumn wave."""
    return 8.0 * math.exp(-((w - 15) ** 2) / 18.0) + 22.0 * math.exp(-((w - 49) ** 2) / 14.0)


RELEVANT_WORDS = [
    "bird", "flu", "h5n1", "outbreak", "poultry", "avian", "influenza", "farm",
    "culling", "detected", "cases", "surveillance", "virus", "infection", "wild", "geese",
]
IRRELEVANT_WORDS = [
    "game", "music", "movie", "pizza", "weather", "traffic", "holiday", "football",
    "concert", "funny", "meme", "cat", "dog", "school", "work", "coffee",
]
SHARED_WORDS = ["news", "today", "update", "canada", "week", "report", "local", "morning"]

LOCATIONS = [
    "Toronto, Ontario", "toronto", "Ottawa", "Vancouver BC", "London Ontario",
    "Guelph", "the 6ix", "worldwide", "earth", "Trno",  # last one only fuzz-matches
]


def make_sentence(rng: random.Random, relevant: bool, hard: bool) -> str:
    n = rng.randint(5, 9)
    words = []
    for _ in range(n):
        if hard:
            pool = SHARED_WORDS
        elif rng.random() < 0.25:
            pool = SHARED_WORDS
        else:
            pool = RELEVANT_WORDS if relevant else IRRELEVANT_WORDS
        words.append(rng.choice(pool))
    return " ".join(words)


def gen_gazetteer() -> None:
    rows = [
        "name,aliases,country,region,lat,lon",
        "Toronto,toronto on|the 6ix|yyz,Canada,Ontario,43.65,-79.38",
        "Ottawa,ottawa on|bytown,Canada,Ontario,45.42,-75.70",
        "London,london on,Canada,Ontario,42.98,-81.25",
        "Guelph,guelph on,Canada,Ontario,43.55,-80.25",
        "Vancouver,vancouver bc|van city,Canada,British Columbia,49.28,-123.12",
        "Victoria,victoria bc,Canada,British Columbia,48.43,-123.37",
        "London,london uk,United Kingdom,England,51.51,-0.13",
        "Ames,ames ia,United States,Iowa,42.03,-93.62",
    ]
    (HERE / "gazetteer.csv").write_text("\n".join(rows) + "\n")
    (HERE / "exclusions.txt").write_text("the internet\nmilky way\nyour heart\n")


def gen_cases(rng: random.Random) -> None:
    lines = ["date,country,region,cases"]
    for w in range(WEEKS):
        lead = 0.8 * posts_activity(w - LEAD) + 0.8 * trends_activity(w - LEAD)
        weekly_total = max(0, round(5.0 + lead + rng.gauss(0.0, 1.0)))
        # spread the weekly total over 2-3 report days
        days = sorted(rng.sample(range(7), rng.randint(2, 3)))
        remaining = weekly_total
        for i, d in enumerate(days):
            part = remaining if i == len(days) - 1 else rng.randint(0, remaining)
            remaining -= part
            day = week_start(w) + timedelta(days=d)
            region = "Ontario" if rng.random() < 0.8 else "British Columbia"
            lines.append(f"{day.isoformat()},Canada,{region},{part}")
        # occasional unknown-count report, kept but flagged downstream
        if w % 16 == 7:
            day = week_start(w) + timedelta(days=5)
            lines.append(f"{day.isoformat()},Canada,Ontario,")
    (SAMPLE / "cases.csv").write_text("\n".join(lines) + "\n")


def gen_trends(rng: random.Random) -> None:
    peak = max(trends_activity(w) for w in range(WEEKS))
    lines = ["week_start,region,score"]
    for w in range(WEEKS):
        score = round(100.0 * trends_activity(w) / peak + rng.gauss(0.0, 2.0))
        score = min(100, max(0, score))
        lines.append(f"{week_start(w).isoformat()},Canada,{score}")
    (SAMPLE / "trends.csv").write_text("\n".join(lines) + "\n")


def gen_posts(rng: random.Random) -> None:
    lines = []
    labels = ["post_id,label"]
    pid = 0
    for w in range(WEEKS):
        n_rel = max(0, round(3.0 + 0.8 * posts_activity(w) + rng.gauss(0.0, 1.0)))
        n_irr = 4 + w % 3
        for relevant in [True] * n_rel + [False] * n_irr:
            pid += 1
            day = week_start(w) + timedelta(days=rng.randint(0, 6))
            text = make_sentence(rng, relevant, hard=False)
            if relevant and rng.random() < 0.3:
                text = "#birdflu " + text
            post = {
                "id": f"p{pid:05d}",
                "timestamp": f"{day.isoformat()}T{rng.randint(6, 22):02d}:00:00Z",
                "text": text,
                "lang": "en",
                "user_location": rng.choice(LOCATIONS),
            }
            lines.append(json.dumps(post, sort_keys=True))
            if rng.random() < 0.25:
                labels.append(f"p{pid:05d},{'relevant' if relevant else 'irrelevant'}")
            # occasional verbatim repost under a new id, removed by dedupe
            if rng.random() < 0.05:
                pid += 1
                dup = dict(post)
                dup["id"] = f"p{pid:05d}"
                lines.append(json.dumps(dup, sort_keys=True))
    (SAMPLE / "posts.jsonl").write_text("\n".join(lines) + "\n")
    (SAMPLE / "labels.csv").write_text("\n".join(labels) + "\n")


def gen_waves() -> None:
    rows = [
        "label,start,end",
        f"wave-spring,{week_start(15).isoformat()},{week_start(25).isoformat()}",
        f"wave-autumn,{week_start(48).isoformat()},{week_start(60).isoformat()}",
    ]
    (SAMPLE / "waves.csv").write_text("\n".join(rows) + "\n")


def gen_corpus(rng: random.Random) -> None:
    # class balance mirrors the reference surveillance corpus: 1,647 relevant
    # and 2,552 irrelevant posts; ~20% of items use only ambiguous vocabulary
    items = []
    for _ in range(1647):
        items.append((make_sentence(rng, True, rng.random() < 0.2), "relevant"))
    for _ in range(2552):
        items.append((make_sentence(rng, False, rng.random() < 0.2), "irrelevant"))
    rng.shuffle(items)
    lines = ["text,label"] + [f"{text},{label}" for text, label in items]
    (HERE / "corpus.csv").write_text("\n".join(lines) + "\n")


def gen_config() -> None:
    cfg = [
        "# sample pipeline configuration; paths are relative to the repo root",
        "cases=data/sample/cases.csv",
        "trends=data/sample/trends.csv",
        "posts=data/sample/posts.jsonl",
        "gazetteer=data/gazetteer.csv",
        "exclusions=data/exclusions.txt",
        "corpus=data/corpus.csv",
        "waves=data/sample/waves.csv",
        "ablate_lag=-3",
        "eval_weeks=13",
        "runs=30",
    ]
    (SAMPLE / "run.cfg").write_text("\n".join(cfg) + "\n")


def main() -> None:
    SAMPLE.mkdir(exist_ok=True)
    gen_gazetteer()
    gen_cases(random.Random(101))
    gen_trends(random.Random(202))
    gen_posts(random.Random(303))
    gen_waves()
    gen_corpus(random.Random(404))
    gen_config()
    print("sample data written")


if __name__ == "__main__":
    main()
