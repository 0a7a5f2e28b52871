#!/usr/bin/env python3
"""Writes the synthetic sample inputs under data/.

The real party list is not redistributable here, so these files only mimic its
shape: ten elections, 59 parties, a week of page views before polling day,
attention curves around 2014-05-25 and a turnout table.
"""
import csv
import datetime as dt
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"
RNG = random.Random(20140525)
POLLING = dt.date(2014, 5, 25)

COUNTRIES = [
    ("DE", "de.wikipedia", 7), ("FR", "fr.wikipedia", 6), ("IT", "it.wikipedia", 6),
    ("ES", "es.wikipedia", 6), ("PL", "pl.wikipedia", 6), ("NL", "nl.wikipedia", 6),
    ("SE", "sv.wikipedia", 6), ("AT", "de.wikipedia", 5), ("PT", "pt.wikipedia", 5),
    ("GB", "en.wikipedia", 6),
]
BETA = [1.96, 0.65, -1.15, -4.91, 0.31, 0.12, -0.09]


def parties():
    rows = []
    for country, project, k in COUNTRIES:
        weights = [RNG.lognormvariate(0.0, 0.9) for _ in range(k)]
        news = [max(1, round(60 * w)) for w in weights]
        views = [max(50, round(9000 * w * RNG.lognormvariate(0, 0.5))) for w in weights]
        news_share = [100 * n / sum(news) for n in news]
        wiki_share = [100 * v / sum(views) for v in views]
        ranked = sorted(range(k - 1), key=lambda i: -weights[i])
        # The largest party governs; half the countries add a junior partner.
        incumbents = {ranked[0]}
        if country in ("DE", "IT", "PL", "SE", "PT"):
            incumbents.add(ranked[-1])
        for i in range(k):
            is_new = 1 if i == k - 1 or (i == k - 2 and k > 5 and country in "FR IT ES") else 0
            inc = 1 if i in incumbents else 0
            x = [1, news_share[i], is_new, inc, news_share[i] * inc, wiki_share[i],
                 is_new * wiki_share[i]]
            vote = sum(b * v for b, v in zip(BETA, x)) + RNG.gauss(0, 4.5)
            vote = round(min(max(vote, 0.4), 60.0), 1)
            prev = "" if is_new else round(max(0.5, vote + RNG.gauss(0, 3.0)), 1)
            pid = f"{country}-{i + 1}"
            rows.append(dict(
                country=country, election_date=POLLING.isoformat(), party_id=pid,
                name_english=f"Party {i + 1} of {country}", name_local=f"Partei {i + 1}",
                abbreviation=f"P{i + 1}", is_new=is_new, is_incumbent=inc, vote_share=vote,
                prev_vote_share=prev, news_mentions=news[i], wiki_project=project,
                wiki_page_title=f"{country} Party {i + 1}", _views=views[i]))
    return rows


def write_parties(rows):
    cols = [c for c in rows[0] if not c.startswith("_")]
    with open(OUT / "sample_parties.csv", "w", newline="") as f:
        w = csv.DictWriter(f, cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_pageviews(rows):
    with open(OUT / "sample_pageviews.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["wiki_project", "page_title", "date", "views"])
        for r in rows:
            daily = [RNG.random() + 0.5 for _ in range(7)]
            scale = r["_views"] / sum(daily)
            for d in range(-10, 3):
                day = POLLING + dt.timedelta(days=d)
                share = daily[d + 7] if -7 <= d <= -1 else RNG.random() + 0.5
                w.writerow([r["wiki_project"], r["wiki_page_title"], day.isoformat(),
                            max(0, round(share * scale))])


def write_attention():
    editions = ["en", "de", "fr", "it", "es", "pl", "nl", "sv", "pt", "cs", "hu", "el", "fi", "da"]
    with open(OUT / "sample_attention.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["wiki_project", "page_title", "date", "views"])
        for lang in editions:
            up = RNG.uniform(0.08, 0.15)
            down = RNG.uniform(0.35, 0.6)
            peak = RNG.uniform(2e4, 2e5)
            for d in range(-40, 41):
                rate = up if d <= 0 else down
                mean = peak * math.exp(-rate * abs(d))
                views = round(mean * RNG.lognormvariate(0, 0.05)) + 2
                day = POLLING + dt.timedelta(days=d)
                w.writerow([f"{lang}.wikipedia", "European Parliament election, 2014",
                            day.isoformat(), views])


def write_turnout():
    editions = ["cs", "da", "de", "el", "en", "es", "fi", "fr", "hu", "it", "nl", "pl", "pt", "sv"]
    with open(OUT / "sample_turnout.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["language_edition", "views_prev", "views_curr", "turnout_prev",
                    "turnout_curr", "outlier"])
        for i, lang in enumerate(editions):
            outlier = 1 if lang in ("en", "de") else 0
            dv = RNG.uniform(-0.6, 0.9)
            dt_ = 0.15 * dv + RNG.gauss(0, 0.05) if not outlier else RNG.uniform(-0.3, 0.3)
            vp = round(RNG.uniform(2e4, 4e5))
            tp = round(RNG.uniform(20, 60), 1)
            w.writerow([lang, vp, round(vp * (1 + dv)), tp, round(tp * (1 + dt_), 2), outlier])


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    rows = parties()
    write_parties(rows)
    write_pageviews(rows)
    write_attention()
    write_turnout()
