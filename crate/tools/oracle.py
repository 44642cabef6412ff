#!/usr/bin/env python3
"""Independent reference computation for the golden corpus.

Recomputes associations and all six feature matrices from the raw JSONL
files and the lexicon data files, using only the Python standard library.
Outputs are the committed golden files the Rust implementation is tested
against.

Usage: oracle.py CORPUS_DIR DATA_DIR OUT_DIR
"""

import json
import math
import re
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

WORD = re.compile(r"\w+(?:['’]\w+)*")
HASHTAG = re.compile(r"#([A-Za-z0-9_]+)")
SENTENCE = re.compile(r"[.!?]+(?:\s+|\Z)|\n")

NEGATORS = set("""not no never none nobody nothing neither nor nowhere cannot without ain't aren't can't
couldn't didn't doesn't don't hadn't hasn't haven't isn't mightn't mustn't needn't shan't shouldn't
wasn't weren't won't wouldn't rarely seldom despite""".split())
UP = ("absolutely amazingly completely deeply enormously entirely especially exceptionally extremely "
      "greatly highly hugely incredibly most particularly purely quite really remarkably so strongly "
      "totally tremendously truly utterly very").split()
DOWN = "almost barely hardly less little marginally occasionally partly scarcely slightly somewhat".split()
BOOSTERS = {**{w: 0.293 for w in UP}, **{w: -0.293 for w in DOWN}}
EMOTIONS = ["anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"]

KEYWORDS = 10
MIN_OVERLAP = 3
MIN_ARTICLES = 5
QUANTILE = 0.9
MAX_ITERATIONS = 3
HISTORY_DAYS = 30
ACTIVE_DAYS = 30
INFLUENTIAL = 1000
TAU = 0.3


def parse_time(s):
    return datetime.fromisoformat(s.replace("Z", "+00:00")).astimezone(timezone.utc)


def read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def data_lines(path):
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n").rstrip("\r")
            if line.strip() and not line.startswith("#"):
                yield line


class Lex:
    def __init__(self, data):
        self.stop = {l.strip().lower() for l in open(data / "stopwords.txt", encoding="utf-8")
                     if l.strip() and not l.strip().startswith("#")}
        self.valence = {}
        for line in data_lines(data / "sentiment_lexicon.tsv"):
            cols = line.split("\t")
            self.valence[cols[0].strip().lower()] = float(cols[1])
        self.emotion = {}
        for line in data_lines(data / "emotion_lexicon.tsv"):
            tok, cat, flag = [c.strip() for c in line.split("\t")]
            if flag == "1" and cat.lower() in EMOTIONS:
                self.emotion.setdefault(tok.lower(), set()).add(cat.lower())


def words(text):
    return WORD.findall(text)


def terms(text, lex):
    out = []
    for w in words(text):
        low = w.lower()
        if low in lex.stop:
            continue
        for suffix in ("'s", "’s"):
            if low.endswith(suffix):
                low = low[: -len(suffix)]
                break
        if len(low) < 3 or low in lex.stop:
            continue
        out.append(low)
    return out


# ---------------------------------------------------------------- sentiment

def word_valence(w, lex):
    low = w.lower()
    if low in NEGATORS or low in BOOSTERS:
        return None
    return lex.valence.get(low)


def compound(text, lex):
    toks = words(text)
    low = [t.lower() for t in toks]
    total = 0.0
    for i, w in enumerate(low):
        if w in NEGATORS or w in BOOSTERS or w not in lex.valence:
            continue
        v = lex.valence[w]
        sign = (v > 0) - (v < 0)
        t = toks[i]
        if any(c.isalpha() for c in t) and not any(c.islower() for c in t):
            v += sign * 0.733
        window = low[max(0, i - 3):i]
        for p in window:
            if p in BOOSTERS:
                v += sign * BOOSTERS[p]
        if any(p in NEGATORS for p in window):
            v *= -0.74
        total += v
    c = total / math.sqrt(total * total + 15.0)
    eps = 2.0 ** -52
    return min(max(c, -1.0 + eps), 1.0 - eps)


def dominant_emotion(text, lex):
    counts = [0] * 8
    for w in words(text):
        for e in lex.emotion.get(w.lower(), ()):
            counts[EMOTIONS.index(e)] += 1
    best = None
    for i, c in enumerate(counts):
        if c > 0 and (best is None or c > counts[best]):
            best = i
    return best


# ---------------------------------------------------------------- association

def associate(articles, tweets, lex):
    docs = {a["id"]: a["title"] + "\n" + a["body"] for a in articles}
    df = {}
    for a in articles:
        for t in set(terms(docs[a["id"]], lex)):
            df[t] = df.get(t, 0) + 1
    n_docs = len(articles)

    def keywords(a):
        ts = terms(docs[a["id"]], lex)
        if not ts:
            return None
        counts = {}
        for t in ts:
            counts[t] = counts.get(t, 0) + 1
        scored = [(t, c / len(ts) * math.log(1.0 + n_docs / df[t])) for t, c in counts.items()]
        scored.sort(key=lambda x: (-x[1], x[0]))
        return {t for t, _ in scored[:KEYWORDS]}

    by_day = {}
    for t in tweets:
        by_day.setdefault(t["day"], []).append(t)
    tweet_by_id = {t["id"]: t for t in tweets}

    seeds = {}
    for a in articles:
        kw = keywords(a)
        s = set()
        if kw is not None:
            for t in by_day.get(a["day"], []):
                if len(set(terms(t["text"], lex)) & kw) >= MIN_OVERLAP:
                    s.add(t["id"])
        seeds[a["id"]] = s

    def harvest(ids):
        return set().union(*[tweet_by_id[i]["hashtags"] for i in ids]) if ids else set()

    def quantile(values, q):
        v = sorted(values)
        pos = q * (len(v) - 1)
        lo, hi = math.floor(pos), math.ceil(pos)
        return v[lo] + (pos - lo) * (v[hi] - v[lo])

    out = []
    for a in articles:
        start = seeds[a["id"]]
        if not start:
            out.append({"article_id": a["id"], "seed_tweet_ids": [], "expanded_tweet_ids": [],
                        "article_specific_hashtags": [], "generic_hashtags": [], "iterations_run": 0})
            continue
        day = a["day"]
        lo = day - timedelta(days=HISTORY_DAYS)
        hist_tags = [harvest(seeds[b["id"]]) for b in articles if lo <= b["day"] < day]
        usage = {}
        for t in tweets:
            if lo <= t["day"] < day:
                for h in t["hashtags"]:
                    usage[h] = usage.get(h, 0) + 1
        empty = not usage and all(not s for s in hist_tags)
        q = quantile(list(usage.values()), QUANTILE) if usage else None

        def generic(h):
            if empty:
                return False
            n_art = sum(1 for s in hist_tags if h in s)
            return n_art >= MIN_ARTICLES or (q is not None and usage.get(h, 0) > q)

        current = set(start)
        iterations = 0
        for rnd in range(1, MAX_ITERATIONS + 1):
            nxt = set(current)
            for h in harvest(current):
                if not generic(h):
                    nxt |= {t["id"] for t in tweets if h in t["hashtags"] and t["day"] == day}
            if nxt == current:
                break
            current = nxt
            iterations = rnd
        tags = harvest(current)
        out.append({
            "article_id": a["id"],
            "seed_tweet_ids": sorted(start),
            "expanded_tweet_ids": sorted(current),
            "article_specific_hashtags": sorted(h for h in tags if not generic(h)),
            "generic_hashtags": sorted(h for h in tags if generic(h)),
            "iterations_run": iterations,
        })
    return out


# ---------------------------------------------------------------- features

def polarity(text, lex):
    ws = words(text)
    if not ws:
        return [0.0] * 11
    pos = [v for v in (word_valence(w, lex) for w in ws) if v is not None and v > 0]
    neg = [v for v in (word_valence(w, lex) for w in ws) if v is not None and v < 0]
    n = len(ws)
    polar = len(pos) + len(neg)

    def mmm(xs):
        return (sum(xs) / len(xs), min(xs), max(xs)) if xs else (0.0, 0.0, 0.0)

    ap, lp, hp = mmm(pos)
    an, ln, hn = mmm(neg)
    return [compound(text, lex), 100.0 * len(pos) / n, 100.0 * len(neg) / n,
            len(pos) / polar if polar else 0.0, len(neg) / polar if polar else 0.0,
            ap, an, lp, hp, ln, hn]


def entities(text, lex):
    sentences = [words(s) for s in SENTENCE.split(text)]
    sentences = [s for s in sentences if s]

    def qualifies(w):
        return w[0].isupper() and w.lower() not in lex.stop

    mid = {w for s in sentences for w in s[1:] if qualifies(w)}
    out = []
    for s in sentences:
        run = []
        for i, w in enumerate(s):
            if qualifies(w) and (i > 0 or w in mid):
                run.append(w)
            elif run:
                out.append(" ".join(run))
                run = []
        if run:
            out.append(" ".join(run))
    return out


def content(text, lex):
    ws = words(text)
    if not ws:
        return [0.0, 0.0, 0.0, 0.0]
    n = len(ws)
    nonstop = sum(1 for w in ws if w.lower() not in lex.stop)
    return [float(n), nonstop / n, float(len(entities(text, lex))), sum(len(w) for w in ws) / n]


def event_stats(articles, lex):
    sigs = []
    for a in articles:
        doc = a["title"] + "\n" + a["body"]
        ents = set()
        for e in entities(doc, lex):
            e = e.lower()
            for suffix in ("'s", "’s"):
                if e.endswith(suffix):
                    e = e[: -len(suffix)]
                    break
            ents.add(e)
        ts = terms(doc, lex)
        bigrams = {ts[i] + " " + ts[i + 1] for i in range(len(ts) - 1)}
        sigs.append((ents, bigrams))

    def jac(x, y):
        u = len(x | y)
        return len(x & y) / u if u else 0.0

    n = len(articles)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if jac(sigs[i][0], sigs[j][0]) >= TAU or jac(sigs[i][1], sigs[j][1]) >= TAU:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    comp = [find(i) for i in range(n)]
    return [(len({articles[k]["day"] for k in range(n) if comp[k] == comp[i]}),
             sum(1 for k in range(n) if comp[k] == comp[i])) for i in range(n)]


def proposed(articles, tweets, users, assocs, lex):
    tweet_by_id = {t["id"]: t for t in tweets}
    user_by_id = {u["user_id"]: u for u in users}
    max_tweets = max((len(a["expanded_tweet_ids"]) for a in assocs), default=0)
    art = {a["id"]: a for a in articles}
    rows = {}
    for asc in assocs:
        ts = [tweet_by_id[i] for i in asc["expanded_tweet_ids"] if i in tweet_by_id]
        if not ts:
            rows[asc["article_id"]] = [0.0] * 8
            continue
        n = len(ts)
        per_user = {}
        for t in ts:
            per_user[t["user_id"]] = per_user.get(t["user_id"], 0) + 1
        since = art[asc["article_id"]]["published"] - timedelta(days=ACTIVE_DAYS)
        infl = 0
        for uid in per_user:
            u = user_by_id.get(uid)
            if u and u["followers_count"] > INFLUENTIAL and parse_time(u["last_active_at"]) >= since:
                infl += 1
        pc = nc = 0
        counts = [0] * 8
        for t in ts:
            c = compound(t["text"], lex)
            if c >= 0.05:
                pc += 1
            elif c <= -0.05:
                nc += 1
            e = dominant_emotion(t["text"], lex)
            if e is not None:
                counts[e] += 1
        sv = 2 * min(pc, nc) / (pc + nc) if pc + nc else 0.0
        mean = sum(counts) / 8.0
        ev = sum((c - mean) ** 2 for c in counts) / 8.0
        rows[asc["article_id"]] = [
            n / max(max_tweets, n),
            sum(t["retweet_count"] for t in ts) / n,
            sum(t["favorite_count"] for t in ts) / n,
            sum(1 for c in per_user.values() if c >= 2) / len(per_user),
            infl / len(per_user),
            float(len(asc["article_specific_hashtags"])),
            sv,
            ev,
        ]
    return rows


POLARITY_NAMES = ["polarity", "positive_rate", "negative_rate", "positive_nonneutral_rate",
                  "negative_nonneutral_rate", "avg_positive_polarity", "avg_negative_polarity",
                  "min_positive_polarity", "max_positive_polarity", "min_negative_polarity",
                  "max_negative_polarity"]


def fmt(v):
    s = "%.6f" % v
    return "0.000000" if s == "-0.000000" else s


def write_csv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(["article_id"] + columns + ["label"]) + "\n")
        for aid, values, label in rows:
            f.write(",".join([aid] + [fmt(v) for v in values] + [str(label)]) + "\n")


def main():
    corpus, data, out = (Path(p) for p in sys.argv[1:4])
    out.mkdir(parents=True, exist_ok=True)
    lex = Lex(data)
    articles = sorted(read_jsonl(corpus / "articles.jsonl"), key=lambda a: a["id"])
    for a in articles:
        a["published"] = parse_time(a["published_at"])
        a["day"] = a["published"].date()
    tweets = sorted(read_jsonl(corpus / "tweets.jsonl"), key=lambda t: t["id"])
    for t in tweets:
        t["day"] = parse_time(t["created_at"]).date()
        t["hashtags"] = {h.lower() for h in HASHTAG.findall(t["text"])} | {
            h.lstrip("#").lower() for h in t.get("hashtags") or []}
    users = read_jsonl(corpus / "users.jsonl")

    assocs = associate(articles, tweets, lex)
    with open(out / "associations.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for a in assocs:
            f.write(json.dumps(a, ensure_ascii=False, separators=(",", ":")) + "\n")

    prop = proposed(articles, tweets, users, assocs, lex)
    events = event_stats(articles, lex)
    schemes = {
        "proposed": (["tweet_count_norm", "avg_retweets", "avg_favorites", "affected_user_fraction",
                      "influential_user_fraction", "article_specific_hashtag_count",
                      "sentiment_variance", "emotion_variance"],
                     lambda i, a: prop[a["id"]]),
        "article_polarity": (["article_" + n for n in POLARITY_NAMES],
                             lambda i, a: polarity(a["body"], lex)),
        "article_content_polarity": (
            ["article_word_count", "article_nonstop_rate", "day_of_week", "is_weekend",
             "article_entity_count", "article_avg_word_length"] + ["article_" + n for n in POLARITY_NAMES],
            lambda i, a: (lambda c, d: [c[0], c[1], float(d), 1.0 if d >= 5 else 0.0, c[2], c[3]])(
                content(a["body"], lex), a["published"].weekday()) + polarity(a["body"], lex)),
        "title_polarity": (["title_" + n for n in POLARITY_NAMES],
                           lambda i, a: polarity(a["title"], lex)),
        "title_content_polarity": (
            ["title_word_count", "title_nonstop_rate", "title_entity_count", "title_avg_word_length"]
            + ["title_" + n for n in POLARITY_NAMES],
            lambda i, a: content(a["title"], lex) + polarity(a["title"], lex)),
        "event_importance": (["event_days", "event_articles"],
                             lambda i, a: [float(events[i][0]), float(events[i][1])]),
    }
    for name, (columns, f) in schemes.items():
        rows = [(a["id"], f(i, a), a["label"]) for i, a in enumerate(articles)]
        write_csv(out / ("features_%s.csv" % name), columns, rows)

    entity_examples = {
        "Obama met Trump": len(entities("Obama met Trump", lex)),
        "GOP blasts Obama's $400M 'secret ransom' paid to Iran":
            len(entities("GOP blasts Obama's $400M 'secret ransom' paid to Iran", lex)),
    }
    with open(out / "entity_counts.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump(entity_examples, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
