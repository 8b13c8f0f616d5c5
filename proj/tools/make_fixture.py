# Apache License, Version 2.0, refer to LICENSE.txt
"""Regenerates data/fixtures/tweets200.jsonl.

The fixture is deterministic: a fixed seed drives every choice, so the file
in the repository can be reproduced exactly. 100 misleading and 100
non-misleading tweets, with URLs, mentions, hashtags, vaccine names, and a
10% sprinkle of absent engagement counts.
"""

import json
import random
from pathlib import Path

SEED = 20240816

MISLEADING_TEMPLATES = [
    "They never tell you the truth about the {vax} shot {tag}",
    "My neighbor got the {vax} jab and died two days later {tag} {url}",
    "Wake up people, the {vax} vaccine is poison {tag}",
    "Doctors are hiding how many children the {vax} shot killed {mention}",
    "The deadly {vax} injection changes your DNA forever {tag} {tag2}",
    "Nurses quit because they saw what the {vax} vial really contains {url}",
    "Government paid the media to bury {vax} injury reports {tag} {mention}",
    "Shocking leak shows {vax} trial data was faked {tag}",
    "Why do they censor every {vax} side effect story {tag2}",
    "The {vax} shot sheds and harms the unvaccinated around you {tag}",
    "Magnet sticks to my arm after the {vax} dose, explain that {url}",
    "Insider says the {vax} batch numbers mark who gets the bad doses {mention}",
    "Funeral homes are overwhelmed since the {vax} rollout {tag} {tag2}",
    "They lied about masks and they lie about the {vax} vaccine too {tag}",
    "A friend of a friend is paralyzed from the {vax} booster sooooo scary {tag}",
    "Big pharma counts profits while the {vax} shot fills hospitals {tag} {mention}",
]

NONMISLEADING_TEMPLATES = [
    "Got my second {vax} dose today, feeling grateful and happy {tag}",
    "Trial results show the {vax} vaccine is safe and effective {url}",
    "Our clinic opened more {vax} appointments for this weekend {tag} {mention}",
    "The {vax} shot reduced severe cases across every age group {tag}",
    "Thanks to the nurses who ran the {vax} drive so smoothly {tag} {tag2}",
    "New study finds {vax} protection lasts through the winter {url}",
    "My whole family is vaccinated with {vax} and doing great {tag}",
    "Health officials published the full {vax} safety review today {mention}",
    "Side effects from my {vax} jab were mild and gone in a day {tag}",
    "Appointments for the {vax} booster are free at the city hall {tag} {url}",
    "Science moves fast; the {vax} trial enrolled thousands safely {tag2}",
    "Ask your doctor about the {vax} vaccine if you are unsure {mention}",
    "The {vax} rollout reached rural towns this week, wonderful news {tag}",
    "Vaccination with {vax} protects the people who cannot get the shot {tag}",
    "I read the {vax} fact sheet and the data is reassuring {url} {tag2}",
    "Community center offers {vax} walk-ins every morning {tag} {mention}",
]

VACCINES = ["Pfizer", "Moderna", "AstraZeneca", "Covaxin", "BioNTech", "Janssen"]
MIS_TAGS = ["#truth", "#wakeup", "#bigpharma", "#doyourresearch", "#plandemic"]
NON_TAGS = ["#covid19", "#health", "#science", "#getvaccinated", "#community"]
MENTIONS = ["@who", "@cdcgov", "@local_news", "@healthdept", "@dr_miller"]


def make_url(rng):
    return "https://t.co/" + "".join(rng.choice("abcdefghij0123456789") for _ in range(8))


def build(rng, template, vax, tags):
    text = template.format(
        vax=vax,
        tag=rng.choice(tags),
        tag2=rng.choice(tags),
        mention=rng.choice(MENTIONS),
        url=make_url(rng),
    )
    return text


def record(rng, idx, label, templates, tags):
    rec = {
        "id": f"t{idx:03d}",
        "label": label,
        "text": build(rng, templates[idx % len(templates)], rng.choice(VACCINES), tags),
    }
    for field, span in (("retweet_count", 400), ("reply_count", 80), ("like_count", 900)):
        if rng.random() >= 0.10:
            rec[field] = rng.randrange(span)
    return rec


def main():
    rng = random.Random(SEED)
    out = Path(__file__).resolve().parent.parent / "data" / "fixtures" / "tweets200.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    for i in range(100):
        rows.append(record(rng, i, "Misleading", MISLEADING_TEMPLATES, MIS_TAGS))
    for i in range(100, 200):
        rows.append(record(rng, i, "NonMisleading", NONMISLEADING_TEMPLATES, NON_TAGS))
    with out.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote {len(rows)} records to {out}")


if __name__ == "__main__":
    main()
