"""Regenerate the derived data fixtures under src/ensemblechat/data/.

Deterministic; run from the repo root:

    python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from ensemblechat.hashing import Lcg64, derive_seed  # noqa: E402
from ensemblechat.nlu.forest import TOPICS  # noqa: E402

DATA = ROOT / "src" / "ensemblechat" / "data"

COMMON_WORDS = """
the a an and or but if then than is are was were be been am do does did done
have has had having i you he she it we they me him her them my your his its
our their this that these those to of in on at by for with from as so not no
yes all any both each few more most other some such only own same too very
just now here there when where why how what which who whom will would can
could should may might must shall about above after again against before
below between during into through under until up down out off over once
day days week weeks month months year years time times morning night evening
good great best better bad worse new old young long short big small high low
first last next early late man woman men women people person child children
friend friends family home house school work job world country city town
street road water food coffee tea dinner lunch breakfast night sleep rest
love like hate want need know think say said see saw look looked come came
go went get got make made take took give gave find found tell told ask asked
feel felt leave left call called keep kept let put read run walk talk play
game games team teams match season player players score goal win won lose
lost ball football basketball baseball tennis movie movies film films music
song songs band show shows actor actors star stars news story stories book
books phone computer internet software data code robot battery screen app
weather rain sun snow wind hot cold warm cool nice happy sad funny laugh
smile cry hope wish dream sleep tired awake busy free open closed right
wrong true false real really sure maybe please sorry thanks thank welcome
hello goodbye bye hey
""".split()


def build_dictionary() -> None:
    words = set(COMMON_WORDS)
    for line in (DATA / "corpus.jsonl").read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        text = json.loads(line)["text"]
        for token in text.split():
            word = "".join(ch for ch in token if ch.isalpha()).lower()
            if word and not any(word[i] == word[i + 1] == word[i + 2] for i in range(len(word) - 2)):
                words.add(word)
    # surviving retrieval example used in tests
    words.update("supreme court regain conservative tilt gorsuch confirmation".split())
    (DATA / "dictionary.txt").write_text("\n".join(sorted(words)) + "\n", encoding="utf-8")
    print(f"dictionary.txt: {len(words)} words")


TOPIC_THEMES = {
    "Politics": (
        "senate election vote congress policy president law government campaign debate "
        "senator tax bill court justice party democracy minister parliament ballot"
    ),
    "Life": (
        "family dinner weekend garden school morning coffee home birthday chores walk "
        "holiday kitchen sleep children neighbor grocery breakfast evening laundry"
    ),
    "Sports": (
        "game team score football coach season player league goal match championship "
        "tournament stadium basketball baseball tennis defense offense playoff referee"
    ),
    "Entertainment": (
        "movie music film actor concert album show theater song band celebrity drama "
        "comedy director festival premiere series episode stage ticket"
    ),
    "Technology": (
        "computer software internet robot phone app code data network device gadget "
        "digital battery screen laptop server program browser chip startup"
    ),
    "General": (
        "thing stuff maybe really today thought idea question answer talk chat wonder "
        "guess sure interesting nice cool okay different random"
    ),
}

DOCS_PER_TOPIC = 40
WORDS_PER_DOC = 8


def build_topic_corpus() -> None:
    rng = Lcg64(derive_seed(7, "shipped-topic-corpus"))
    lines = []
    for topic in TOPICS:
        vocab = TOPIC_THEMES[topic].split()
        assert len(vocab) == 20, (topic, len(vocab))
        for _ in range(DOCS_PER_TOPIC):
            words = [vocab[rng.randrange(len(vocab))] for _ in range(WORDS_PER_DOC)]
            lines.append(json.dumps({"text": " ".join(words), "topic": topic}))
    (DATA / "topic_corpus.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"topic_corpus.jsonl: {len(lines)} docs")


ENGAGING_SNIPPETS = [
    "this is the most fascinating thread i have read all year",
    "brilliant take and the sources are superb",
    "laughed so hard at this clever twist",
    "what a vivid story thanks for sharing",
    "insightful point about the hidden details",
    "the best explanation of this topic anywhere",
    "wonderful write up with remarkable depth",
    "gripping from the first line to the last",
]

DULL_SNIPPETS = [
    "meh",
    "ok i guess",
    "same old same old",
    "whatever works",
    "boring thread tbh",
    "fine",
    "nothing new here",
    "dunno about this",
]

POSTS = [
    "ask anything about the new season",
    "weekly discussion thread for the community",
    "share your favorite story of the week",
    "what did everyone think of the finale",
]


def build_engagement_seed(n: int = 80) -> None:
    rng = Lcg64(derive_seed(7, "shipped-engagement-seed"))
    lines = []
    for i in range(n):
        engaging = i % 2 == 0
        snippet = (ENGAGING_SNIPPETS if engaging else DULL_SNIPPETS)[
            rng.randrange(len(ENGAGING_SNIPPETS if engaging else DULL_SNIPPETS))
        ]
        rec = {
            "comment_text": snippet,
            "comment_score": 300 + rng.randrange(600) if engaging else 0,
            "post_text": POSTS[rng.randrange(len(POSTS))],
            "post_upvotes": 2000 + rng.randrange(8000) if engaging else rng.randrange(400),
            "elapsed_secs": 300 + rng.randrange(3600) if engaging else 3600 + rng.randrange(86400),
        }
        lines.append(json.dumps(rec))
    (DATA / "engagement_seed.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"engagement_seed.jsonl: {len(lines)} examples")


if __name__ == "__main__":
    build_dictionary()
    build_topic_corpus()
    build_engagement_seed()
