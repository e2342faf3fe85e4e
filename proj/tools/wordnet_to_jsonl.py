#!/usr/bin/env python3
"""One-shot converter: WordNet -> the sense-corpus record file.

Walks every (lemma, synset) pair in NLTK's WordNet and writes one JSON record
per line with the fields the dataset pipeline ingests:

    {"sense_id": ..., "lemma": ..., "gloss": ..., "synonyms": [...],
     "examples": [...]}

Multi-word lemmas keep their underscores replaced by spaces. Prime filtering
is NOT done here; `nsmeval dataset build` drops prime lemmas at ingest so the
pipeline stays the single source of truth for that rule.

Usage:
    pip install nltk
    python -c "import nltk; nltk.download('wordnet')"
    python tools/wordnet_to_jsonl.py > senses.jsonl
"""

import json
import sys


def main() -> int:
    try:
        from nltk.corpus import wordnet as wn
    except ImportError:
        sys.stderr.write("nltk is required: pip install nltk\n")
        return 1

    count = 0
    for synset in wn.all_synsets():
        lemmas = [l.name().replace("_", " ") for l in synset.lemmas()]
        for lemma in lemmas:
            record = {
                "sense_id": f"{synset.name()}::{lemma}",
                "lemma": lemma,
                "gloss": synset.definition(),
                "synonyms": [other for other in lemmas if other != lemma],
                "examples": list(synset.examples()),
            }
            sys.stdout.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    sys.stderr.write(f"wrote {count} sense records\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
