#!/usr/bin/env python3
# Copyright 2026 The Datavoid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates fixtures/: a small labeled corpus, knowledge base and topics.

Deterministic: the same script always writes the same bytes.
"""

import argparse
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

SOURCES = [
    ("s01", "The New York Times", "News, analysis and opinion", "page"),
    ("s02", "Fox News", "Breaking news and commentary", "page"),
    ("s03", "Breitbart", "", "page"),
    ("s04", "Texas Forum", "Political discussion for Texans", "group"),
    ("s05", "Republican Party of Texas", "Official page", "page"),
    ("s06", "Democrats Abroad", "Voters living overseas", "group"),
    ("s07", "Latinos Conservadores", "Comunidad y valores", "group"),
    ("s08", "Neighbors of Houston", "Local news and events from neighbors", "group"),
    ("s09", "Daily Deals Hub", "Best offers every day", "page"),
    ("s10", "Health Moms Network", "Parents sharing tips", "group"),
    ("s11", "Teachers United", "A community of educators", "group"),
    ("s12", "Promo Blast", "", "page"),
    ("s13", "NYT en Espanol", "Noticias en espanol", "page"),
]
HUMAN_SOURCES = ["s01", "s02", "s03", "s04", "s05", "s06", "s07", "s08",
                 "s10", "s11", "s13"]
BOT_SOURCES = ["s09", "s12"]

TOPICS = {
    "immigration": ["immigration", "border", "asylum", "migrants", "deportation"],
    "economy": ["economy", "inflation", "jobs", "taxes", "wages"],
    "health": ["vaccine", "health", "hospital", "covid", "insurance"],
    "education": ["school", "teachers", "students", "education", "college"],
    "climate": ["climate", "wildfire", "emissions"],
}

WEBSITES = [
    ("nytimes.com", -0.6, "the new york times"),
    ("foxnews.com", 0.7, "fox news"),
    ("breitbart.com", 0.9, "breitbart"),
    ("cnn.com", -0.5, ""),
    ("washingtonpost.com", -0.55, ""),
]
ACTORS = [
    ("joe biden", -0.8), ("donald trump", 0.9), ("greg abbott", 0.8),
    ("kamala harris", -0.7), ("ted cruz", 0.85), ("alexandria ocasio-cortez", -0.9),
]
LEXICON = [
    ("good", 0.6), ("great", 0.8), ("support", 0.5), ("love", 0.7),
    ("proud", 0.6), ("bad", -0.6), ("terrible", -0.8), ("hate", -0.7),
    ("failed", -0.6), ("corrupt", -0.8), ("disaster", -0.8), ("wrong", -0.5),
]
FILLER = ["people", "today", "this", "week", "our", "city", "we", "talked",
          "about", "the", "news", "again", "what", "do", "you", "think"]


def human_text(rng, topic):
    words = rng.sample(FILLER, 5)
    words += rng.sample(TOPICS[topic], rng.choice([1, 2]))
    roll = rng.random()
    if roll < 0.35:
        words.append(rng.choice(ACTORS)[0])
    elif roll < 0.55:
        words.append("see " + rng.choice(WEBSITES)[0] + "/story")
    if rng.random() < 0.7:
        words.append(rng.choice(LEXICON)[0])
    rng.shuffle(words)
    return " ".join(words).capitalize() + "."


def bot_text(rng, topic):
    promo = rng.choice(["BUY NOW", "FREE GIFT", "CLICK HERE", "LIMITED OFFER"])
    tag = rng.choice(["#deal", "#win", "#free"])
    url = "http://promo.example/" + str(rng.randrange(1000))
    kw = rng.choice(TOPICS[topic])
    return f"{promo} {promo} {kw} {url} {tag} {tag} @followers {promo}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    (out / "kb").mkdir(parents=True, exist_ok=True)
    rng = random.Random(20210901)
    start = datetime(2021, 9, 1, tzinfo=timezone.utc)

    posts, labels = [], []
    topics = list(TOPICS)
    n = 0

    def emit(source, text, ts, bot):
        nonlocal n
        n += 1
        pid = f"p{n:04d}"
        posts.append({
            "post_id": pid, "source_id": source, "text": text,
            "created_at": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "likes": rng.randrange(0, 400) if not bot else rng.randrange(0, 5),
            "comments": rng.randrange(0, 120) if not bot else rng.randrange(0, 3),
            "shares": rng.randrange(0, 80) if not bot else rng.randrange(0, 3),
        })
        return pid

    main_topics = topics[:4]
    for i in range(300):
        topic = main_topics[i % len(main_topics)]
        ts = start + timedelta(minutes=rng.randrange(0, 29 * 24 * 60))
        pid = emit(rng.choice(HUMAN_SOURCES), human_text(rng, topic), ts, False)
        if i < 80:
            labels.append({"post_id": pid, "is_bot": False})
    # A thin, one-sided topic: few posts, all from pages tied to one website.
    for i in range(12):
        ts = start + timedelta(minutes=rng.randrange(0, 29 * 24 * 60))
        emit(rng.choice(["s01", "s13"]), human_text(rng, "climate"), ts, False)
    for i in range(20):
        ts = start + timedelta(minutes=rng.randrange(0, 29 * 24 * 60))
        emit(rng.choice(HUMAN_SOURCES), " ".join(rng.sample(FILLER, 6)).capitalize() + ".",
             ts, False)
    # Bots post in bursts of four, seconds apart.
    for burst in range(20):
        source = BOT_SOURCES[burst % 2]
        base = start + timedelta(minutes=rng.randrange(0, 29 * 24 * 60))
        for j in range(4):
            topic = main_topics[(burst + j) % len(main_topics)]
            pid = emit(source, bot_text(rng, topic), base + timedelta(seconds=7 * j), True)
            labels.append({"post_id": pid, "is_bot": True})

    rng.shuffle(posts)
    with open(out / "posts.jsonl", "w") as f:
        for p in posts:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")
        # Two malformed records land in the rejects report.
        f.write(json.dumps({"source_id": "s01", "text": "no id",
                            "created_at": "2021-09-02T00:00:00Z",
                            "likes": 0, "comments": 0, "shares": 0}) + "\n")
        f.write(json.dumps({"post_id": "bad1", "source_id": "s01", "text": "negative",
                            "created_at": "2021-09-02T00:00:00Z",
                            "likes": 0, "comments": -1, "shares": 0}) + "\n")
    with open(out / "sources.jsonl", "w") as f:
        for sid, name, desc, kind in SOURCES:
            f.write(json.dumps({"source_id": sid, "name": name, "description": desc,
                                "kind": kind}, ensure_ascii=False) + "\n")
    with open(out / "bot_labels.jsonl", "w") as f:
        for l in labels:
            f.write(json.dumps(l) + "\n")
    with open(out / "topics.json", "w") as f:
        json.dump({"topics": [{"name": t, "keywords": k} for t, k in TOPICS.items()]},
                  f, indent=2)
        f.write("\n")
    with open(out / "page_websites.csv", "w") as f:
        f.write("source_name,domain\nNYT en Espanol,nytimes.com\n")

    kb = out / "kb"
    with open(kb / "websites.csv", "w") as f:
        f.write("domain,score,display_name\n")
        for d, s, name in WEBSITES:
            f.write(f"{d},{s},{name}\n")
    with open(kb / "actors.csv", "w") as f:
        f.write("name,score\n")
        for a, s in ACTORS:
            f.write(f"{a},{s}\n")
    with open(kb / "news_sites.txt", "w") as f:
        f.write("\n".join(["the new york times", "fox news", "breitbart", "cnn",
                           "the washington post", "univision"]) + "\n")
    with open(kb / "parties_actors.txt", "w") as f:
        f.write("\n".join(["republican party", "democratic party", "democrats",
                           "republicans"] + [a for a, _ in ACTORS]) + "\n")
    with open(kb / "sentiment_lexicon.csv", "w") as f:
        f.write("token,weight\n")
        for t, w in LEXICON:
            f.write(f"{t},{w}\n")


if __name__ == "__main__":
    main()
