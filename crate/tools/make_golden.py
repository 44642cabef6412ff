#!/usr/bin/env python3
"""Build the golden test corpus and its constructed ground truth.

The corpus has one target article on 2016-08-04 whose tweets reach the
hashtags {irandeal, obamabetrayus} (article-specific) and
{whitehouse, trump2016, chicago} (generic: each is carried by the seed
tweets of at least five articles in the preceding 30 days). Expansion
needs two productive rounds: #irandeal tweets, then #obamabetrayus
tweets. Decoys check the same-day rule and that generic hashtags are not
followed.

Usage: make_golden.py OUT_DIR
"""

import json
import random
import sys
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

SEED = 20160804
TARGET_DAY = date(2016, 8, 4)

# (id, day offset from TARGET_DAY, title, body, seed keywords, own hashtag)
HISTORY = [
    ("h01", -29, "Mayor unveils transit budget for Chicago rail lines",
     "Mayor Emanuel unveiled a transit budget on Wednesday. The transit budget adds rail funding for Chicago commuters. "
     "Rail riders and the Transit Authority welcomed the budget.", ["transit", "budget", "rail"], "cta"),
    ("h02", -27, "Senate panel questions Clinton Foundation donors",
     "A Senate panel questioned foundation donors on Tuesday. Senator Grassley said the foundation donors must testify. "
     "The Clinton Foundation denied wrongdoing about donors.", ["foundation", "donors", "panel"], "clintonfoundation"),
    ("h03", -26, "Heat wave grips New York as power demand surges",
     "A heat wave gripped New York and power demand surged. Con Edison asked customers to cut power use during the heat wave. "
     "Cooling centers opened across the city.", ["heat", "wave", "power"], "heatwave"),
    ("h04", -24, "Convention delegates clash over party platform",
     "Convention delegates clashed over the party platform in Cleveland. Delegates argued platform language late into the night. "
     "The convention rules committee met again.", ["convention", "delegates", "platform"], "rnc"),
    ("h05", -22, "Police union endorses candidate after rally",
     "The police union endorsed a candidate after a rally in Ohio. Union leaders said the rally showed support for police. "
     "The endorsement surprised some union members.", ["police", "union", "rally"], "bluelivesmatter"),
    ("h06", -21, "Olympic team arrives in Rio amid Zika fears",
     "The Olympic team arrived in Rio as Zika fears grew. Athletes said Zika precautions were in place before the Olympic games. "
     "Officials in Rio promised safe venues.", ["olympic", "rio", "zika"], "rio2016"),
    ("h07", -19, "Subway fare hike approved by transit board",
     "The transit board approved a subway fare hike. Riders criticized the fare hike at a board hearing. "
     "The subway fare rises next spring.", ["subway", "fare", "hike"], "farehike"),
    ("h08", -18, "Hackers leak party emails before convention",
     "Hackers leaked party emails days before the convention. The leaked emails exposed staff messages and hackers bragged online. "
     "Investigators traced the emails leak.", ["hackers", "emails", "leak"], "dncleak"),
    ("h09", -16, "Governor signs minimum wage increase",
     "Governor Cuomo signed a minimum wage increase into law. The wage increase phases in over five years for minimum earners. "
     "Business groups opposed the increase.", ["governor", "wage", "minimum"], "fightfor15"),
    ("h10", -15, "Chicago shootings spike over holiday weekend",
     "Chicago shootings spiked over the holiday weekend. Police said shootings rose across the South Side during the weekend. "
     "Community leaders called for calm after the shootings.", ["shootings", "weekend", "spike"], "chiraq"),
    ("h11", -13, "Trump campaign shakes up senior staff",
     "The Trump campaign shook up its senior staff. Campaign manager changes followed weak polls and staff departures. "
     "Senior aides defended the campaign strategy.", ["campaign", "staff", "senior"], "shakeup"),
    ("h12", -12, "Yankees trade closer in deadline deal",
     "The Yankees traded their closer in a deadline deal. The closer deal brought prospects from Chicago before the deadline. "
     "Fans debated the trade.", ["yankees", "closer", "deadline"], "yankees"),
    ("h13", -10, "School board votes to delay Chicago budget cuts",
     "The school board voted to delay budget cuts. School principals warned the cuts would hurt classrooms across Chicago. "
     "The board vote passed narrowly.", ["school", "cuts", "principals"], "cps"),
    ("h14", -9, "Flooding closes highway in West Virginia",
     "Flooding closed a highway in West Virginia. Crews cleared highway debris as flooding receded in Greenbrier County. "
     "Residents returned home after the flooding.", ["flooding", "highway", "crews"], "wvflood"),
    ("h15", -7, "Pension fund reports record losses",
     "The pension fund reported record losses this quarter. Fund managers blamed bond markets for pension losses in Illinois. "
     "Retirees worried about the fund.", ["pension", "fund", "losses"], "pensions"),
    ("h16", -6, "Airline outage strands thousands of travelers",
     "An airline outage stranded thousands of travelers. Delta said the outage hit check in systems and stranded travelers overnight. "
     "The airline offered vouchers.", ["airline", "outage", "travelers"], "deltaoutage"),
    ("h17", -5, "Landlord charged in Bronx building collapse",
     "A landlord was charged after a Bronx building collapse. Prosecutors said the landlord ignored building warnings before the collapse. "
     "Tenants sued the landlord.", ["landlord", "collapse", "building"], "bronx"),
    ("h18", -4, "Drone sightings delay flights at Kennedy airport",
     "Drone sightings delayed flights at Kennedy airport. Pilots reported drone sightings near the runway as flights waited. "
     "The FAA opened an inquiry into drone flights.", ["drone", "sightings", "flights"], "jfk"),
    ("h19", -2, "Brooklyn bakery wins national pie contest",
     "A Brooklyn bakery won a national pie contest. The bakery owner said the pie recipe came from her grandmother in Brooklyn. "
     "The contest drew bakers from every state.", ["bakery", "pie", "contest"], "piecontest"),
    ("h20", -1, "Transit workers threaten strike over contract",
     "Transit workers threatened a strike over their contract. Union negotiators said strike talks on the workers contract stalled. "
     "Commuters braced for a strike.", ["workers", "strike", "contract"], "transitstrike"),
]
GENERIC = {
    "whitehouse": ["h01", "h02", "h04", "h05", "h08", "h09", "h11", "h17"],
    "trump2016": ["h04", "h05", "h06", "h08", "h11", "h16", "h20"],
    "chicago": ["h01", "h10", "h12", "h13", "h15", "h19"],
}

TARGET = ("g_target", "GOP blasts Obama's $400M 'secret ransom' paid to Iran",
          "Republicans blasted President Obama on Thursday over a secret cash payment to Iran. "
          "The $400M in cash was paid as American prisoners were released, and critics called the secret payment a ransom. "
          "The White House denied that the cash was ransom. Iran said the cash settled an old arms dispute. "
          "Speaker Ryan said Obama owed Congress answers about the ransom.")
SAME_DAY = [
    ("o1", "Swimmer Michael Phelps carries flag in Rio opening",
     "Michael Phelps carried the flag at the Rio opening ceremony. Phelps said carrying the flag was an honor. "
     "The ceremony drew a huge crowd in Rio.", ["phelps", "flag", "ceremony"], "phelps"),
    ("o2", "Trump gives Post columnist a shout-out",
     "Donald Trump gave a Post columnist a shout out at a rally. The columnist wrote about the rally crowd. "
     "Trump praised the column on stage.", ["columnist", "shout", "column"], None),
    ("o3", "City council approves bike lane expansion",
     "The city council approved a bike lane expansion in Queens. Cyclists cheered the lane vote while drivers complained. "
     "Council members promised new lane signs.", ["bike", "lane", "cyclists"], "bikenyc"),
]
NEXT_DAY = ("n1", "Obama defends Iran cash payment as prisoners return",
            "President Obama defended the Iran cash payment on Friday. Obama said the payment was not a ransom and prisoners were home. "
            "Critics in Congress kept up attacks over the payment.", ["payment", "defended", "prisoners"], None)

POSITIVE = ["good", "great", "love", "happy", "glad", "brave", "hope", "amazing", "GREAT", "very good", "so proud"]
NEGATIVE = ["bad", "awful", "terrible", "hate", "angry", "fear", "disgrace", "not good", "very bad", "BAD", "sad", "crisis"]
NEUTRAL = ["today", "again", "update", "thoughts", "watching", "reading this", "tonight"]
FILLER = ["just", "news", "update", "read", "look", "people", "story", "wow", "here", "now"]


def ts(day, seconds):
    t = datetime(day.year, day.month, day.day, tzinfo=timezone.utc) + timedelta(seconds=seconds)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


class Builder:
    def __init__(self):
        self.rng = random.Random(SEED)
        self.articles = []
        self.tweets = []
        self.users = []
        self.n = 0

    def tone(self):
        r = self.rng.random()
        pool = POSITIVE if r < 0.4 else NEGATIVE if r < 0.8 else NEUTRAL
        return self.rng.choice(pool)

    def user(self):
        if self.rng.random() < 0.01:
            return "u999"
        return "u%03d" % self.rng.randint(1, 60)

    def tweet(self, day, words, tags, user=None):
        self.n += 1
        text = " ".join(words + ["#" + t for t in tags])
        rec = {
            "id": "t%03d" % self.n,
            "text": text,
            "user_id": user or self.user(),
            "created_at": ts(day, self.rng.randint(3600, 86000)),
            "retweet_count": self.rng.randint(0, 120),
            "favorite_count": self.rng.randint(0, 300),
        }
        self.tweets.append(rec)
        return rec["id"]

    def article(self, aid, day, title, body, label):
        self.articles.append({
            "id": aid,
            "title": title,
            "body": body,
            "published_at": ts(day, 8 * 3600 + self.rng.randint(0, 8 * 3600)),
            "label": label,
        })

    def seed_words(self, keywords):
        kw = list(keywords)
        self.rng.shuffle(kw)
        words = kw[:3] + [self.tone(), self.rng.choice(FILLER)]
        self.rng.shuffle(words)
        return words


def build():
    b = Builder()
    rng = b.rng
    for j in range(1, 61):
        b.users.append({
            "user_id": "u%03d" % j,
            "followers_count": [15, 240, 980, 1000, 1001, 5400, 125000][j % 7],
            "last_active_at": ts(TARGET_DAY, -86400 * (j % 45)),
            "verified": j % 9 == 0,
        })

    labels = iter([1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0])
    for aid, off, title, body, kw, tag in HISTORY:
        day = TARGET_DAY + timedelta(days=off)
        b.article(aid, day, title, body, next(labels))
        generic = [g for g, ids in GENERIC.items() if aid in ids]
        for k in range(4):
            tags = [tag] if k % 2 == 0 else []
            if k < len(generic):
                tags.append(generic[k])
            b.tweet(day, b.seed_words(kw), tags)
        for g in generic[4:]:
            b.tweet(day, b.seed_words(kw), [g])
        for _ in range(2):
            b.tweet(day, [b.tone(), rng.choice(FILLER)], [tag])

    # target day
    b.article(TARGET[0], TARGET_DAY, TARGET[1], TARGET[2], next(labels))
    keyword_phrases = [
        ["Obama", "paid", "Iran", "ransom"],
        ["secret", "cash", "ransom", "Iran"],
        ["$400M", "cash", "Iran"],
        ["ransom", "payment", "secret"],
        ["Obama", "secret", "ransom"],
        ["cash", "ransom", "Obama", "paid"],
    ]
    seed_tags = [["irandeal"], ["irandeal", "whitehouse"], ["trump2016"], ["chicago", "irandeal"], [], ["whitehouse"]]
    seeds = []
    repeat_user = "u007"
    for k, (words, tags) in enumerate(zip(keyword_phrases, seed_tags)):
        seeds.append(b.tweet(TARGET_DAY, words + [b.tone()], tags, repeat_user if k < 2 else None))
    round1 = [
        b.tweet(TARGET_DAY, ["unbelievable", b.tone()], ["irandeal"], repeat_user),
        b.tweet(TARGET_DAY, ["congress", "must", "act"], ["irandeal", "obamabetrayus"]),
        b.tweet(TARGET_DAY, [b.tone(), "deal"], ["irandeal"]),
        b.tweet(TARGET_DAY, ["hostages", "NOT", "good"], ["irandeal", "obamabetrayus"]),
        b.tweet(TARGET_DAY, ["so", "angry"], ["irandeal", "whitehouse"]),
    ]
    round2 = [
        b.tweet(TARGET_DAY, [b.tone(), "america"], ["obamabetrayus"]),
        b.tweet(TARGET_DAY, ["shameful", "day"], ["obamabetrayus"]),
        b.tweet(TARGET_DAY, ["betray", "trust", "fear"], ["obamabetrayus"]),
        b.tweet(TARGET_DAY, ["never", "forget"], ["obamabetrayus", "trump2016"]),
    ]
    decoys = [
        b.tweet(TARGET_DAY, ["press", "briefing", "today"], ["whitehouse"]),
        b.tweet(TARGET_DAY, ["lawn", "tour", "photos"], ["whitehouse"]),
        b.tweet(TARGET_DAY, ["rally", "tonight", "great"], ["trump2016"]),
        b.tweet(TARGET_DAY, ["deep", "dish", "pizza"], ["chicago"]),
        b.tweet(TARGET_DAY - timedelta(days=1), ["oil", "markets", "today"], ["irandeal"]),
        b.tweet(TARGET_DAY + timedelta(days=1), ["still", "angry"], ["obamabetrayus"]),
    ]

    for aid, title, body, kw, tag in SAME_DAY:
        b.article(aid, TARGET_DAY, title, body, next(labels))
        for k in range(5):
            tags = [tag] if tag and k % 2 == 0 else []
            b.tweet(TARGET_DAY, b.seed_words(kw), tags)
        if tag:
            b.tweet(TARGET_DAY, [b.tone(), "amazing"], [tag])

    nday = TARGET_DAY + timedelta(days=1)
    b.article(NEXT_DAY[0], nday, NEXT_DAY[1], NEXT_DAY[2], next(labels))
    for k in range(5):
        b.tweet(nday, b.seed_words(NEXT_DAY[3]), ["irandeal"] if k == 0 else [])

    # unrelated chatter up to 200 tweets
    chatter_tags = ["whitehouse", "trump2016", "chicago", "nyc", "mondaymotivation"]
    while len(b.tweets) < 200:
        day = TARGET_DAY + timedelta(days=rng.randint(-29, 1))
        words = [rng.choice(FILLER), b.tone(), rng.choice(FILLER)]
        b.tweet(day, words, [rng.choice(chatter_tags)] if rng.random() < 0.6 else [])

    truth = {
        "article_id": TARGET[0],
        "generic_hashtags": sorted(["whitehouse", "trump2016", "chicago"]),
        "article_specific_hashtags": sorted(["irandeal", "obamabetrayus"]),
        "seed_tweet_ids": sorted(seeds),
        "expanded_tweet_ids": sorted(seeds + round1 + round2),
        "iterations_run": 2,
        "excluded_decoys": sorted(decoys),
    }
    return b, truth


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    b, truth = build()
    assert len(b.tweets) == 200, len(b.tweets)
    write_jsonl(out / "articles.jsonl", b.articles)
    write_jsonl(out / "tweets.jsonl", b.tweets)
    write_jsonl(out / "users.jsonl", b.users)
    with open(out / "truth.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump(truth, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
