#!/usr/bin/env python3
"""Generate a synthetic publication corpus for trying out the pipeline.

Writes publications.jsonl and citations.tsv into the output directory.
The corpus has a few topical blocks with internal citation structure, so
clustering, summaries, maps, and term maps all produce something to look at.

Usage:
    python3 scripts/generate_demo_data.py --out demo_input --topics 4 --per-topic 80
"""

import argparse
import json
import random
from pathlib import Path

VOCAB = {
    "galaxies": ["galaxy", "cluster", "redshift", "survey", "lensing", "halo",
                 "quasar", "starburst", "merger", "luminosity", "spiral", "dwarf"],
    "solar": ["solar", "flare", "corona", "sunspot", "plasma", "wind",
              "heliosphere", "prominence", "chromosphere", "magnetic", "cycle"],
    "compact": ["pulsar", "magnetar", "neutron", "binary", "timing", "glitch",
                "supernova", "remnant", "accretion", "xray", "burst"],
    "planets": ["planet", "exoplanet", "transit", "orbit", "disk", "asteroid",
                "comet", "atmosphere", "migration", "resonance", "moon"],
    "cosmology": ["inflation", "cosmology", "microwave", "background", "dark",
                  "energy", "matter", "spectrum", "perturbation", "universe"],
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("demo_input"))
    parser.add_argument("--topics", type=int, default=4)
    parser.add_argument("--per-topic", type=int, default=80)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    names = list(VOCAB)[: args.topics]
    args.out.mkdir(parents=True, exist_ok=True)

    records = []
    for t, name in enumerate(names):
        vocab = VOCAB[name]
        for i in range(args.per_topic):
            idx = t * args.per_topic + i
            title_words = rng.sample(vocab, min(4, len(vocab)))
            abstract = "We study the " + " ".join(
                rng.choice(vocab) for _ in range(30)) + "."
            records.append({
                "id": f"{name.upper()[:3]}{i:04d}",
                "title": " ".join(title_words).capitalize(),
                "abstract": abstract,
                "authors": [f"Author{(idx * 7) % 29}, {chr(65 + idx % 26)}."],
                "journal": f"Journal of {name.capitalize()}",
                "year": 2003 + (i * 8) // args.per_topic,
            })

    pairs = []
    for t, name in enumerate(names):
        base = t * args.per_topic
        for i in range(1, args.per_topic):
            for _ in range(1 + rng.randrange(4)):
                cited = base + rng.randrange(i)
                pairs.append((records[base + i]["id"], records[cited]["id"]))
        other = (t + 1) % len(names)
        for _ in range(2):
            citing = base + args.per_topic - 1 - rng.randrange(5)
            cited = other * args.per_topic + rng.randrange(5)
            pairs.append((records[citing]["id"], records[cited]["id"]))

    pubs_path = args.out / "publications.jsonl"
    cits_path = args.out / "citations.tsv"
    with open(pubs_path, "w", encoding="utf-8") as out:
        for rec in records:
            out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(cits_path, "w", encoding="utf-8") as out:
        for citing, cited in pairs:
            out.write(f"{citing}\t{cited}\n")
    print(f"wrote {len(records)} publications and {len(pairs)} citation pairs to {args.out}")


if __name__ == "__main__":
    main()
