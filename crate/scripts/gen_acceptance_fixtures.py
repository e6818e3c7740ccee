#!/usr/bin/env python3
"""Writes the canned corpora and fill-mask fixtures used by the CLI tests.

golden/    25 records and the fill-mask answers for the end-to-end run
filter50/  50 targets from the mini lexicon with noisy raw candidate lists
"""
import json
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
WN = os.path.join(ROOT, "crates/core/tests/data/mini-wordnet")
OUT = os.path.join(ROOT, "crates/cli/tests/data")
MASK = "<mask>"
SEP = " </s></s> "


def record(rid, sentence, word, lemma, pos, gold):
    start = sentence.index(word)
    assert sentence.count(word) == 1, (sentence, word)
    return {
        "id": rid,
        "sentence": sentence,
        "target": {
            "surface": word,
            "lemma": lemma,
            "pos": pos,
            "char_start": start,
            "char_end": start + len(word),
        },
        "gold": [{"sub": s, "weight": w} for s, w in gold],
    }


def prompt(sentence, word):
    i = sentence.index(word)
    return sentence[:i] + MASK + sentence[i + len(word):] + SEP + sentence


def fill(sentence, word, tokens):
    preds = [{"token": t, "logprob": round(-0.05 - 0.1 * i, 2)} for i, t in enumerate(tokens)]
    return {"kind": "fill_mask", "text": prompt(sentence, word), "response": {"predictions": preds}}


def write(dirname, records, fills):
    d = os.path.join(OUT, dirname)
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, "records.jsonl"), "w") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open(os.path.join(d, "fill_mask.jsonl"), "w") as f:
        meta = {"kind": "meta", "model_id": "canned", "mask_marker": MASK, "separator": SEP}
        f.write(json.dumps(meta) + "\n")
        for x in fills:
            f.write(json.dumps(x, ensure_ascii=False) + "\n")


def golden():
    recs, fills = [], []

    def add(sentence, word, lemma, pos, gold, tokens):
        rid = "g%02d" % (len(recs) + 1)
        recs.append(record(rid, sentence, word, lemma, pos, gold))
        fills.append(fill(sentence, word, tokens))

    # 1: antonym, same-as-target and morph variant removed
    add("The food was good.", "good", "good", "adj",
        [("great", 2), ("fine", 1), ("nice", 1)],
        ["bad", "great", "Good", "nice", "goods", "tasty"])
    # 2: tied gold, no mode
    add("She felt happy today.", "happy", "happy", "adj",
        [("glad", 1), ("cheerful", 1)],
        ["unhappy", "glad", "happier", "joyful", "content"])
    # 3: eleven survivors, the gold mode is the eleventh
    add("It was a large house.", "large", "large", "adj",
        [("big", 3), ("huge", 1)],
        ["small", "huge", "vast", "giant", "massive", "great", "grand", "wide",
         "broad", "roomy", "ample", "big"])
    # 4-13: perfect first guess
    perfect = [
        ("The meeting ended early.", "ended", "end", "verb", "finished", ["concluded", "stopped"]),
        ("He repaired the old fence.", "repaired", "repair", "verb", "fixed", ["mended", "painted"]),
        ("The road was quiet tonight.", "quiet", "quiet", "adj", "silent", ["calm", "empty"]),
        ("They purchased a new sofa.", "purchased", "purchase", "verb", "bought", ["got", "ordered"]),
        ("The child seemed frightened.", "frightened", "frightened", "adj", "scared", ["upset", "tired"]),
        ("Please shut the window.", "shut", "shut", "verb", "close", ["lock", "open"]),
        ("Our journey took hours.", "journey", "journey", "noun", "trip", ["drive", "flight"]),
        ("The answer was correct.", "correct", "correct", "adj", "right", ["wrong", "clear"]),
        ("She placed the cup down.", "placed", "place", "verb", "put", ["set", "laid"]),
        ("A huge crowd gathered.", "crowd", "crowd", "noun", "throng", ["group", "mob"]),
    ]
    for sentence, word, lemma, pos, gold, rest in perfect:
        add(sentence, word, lemma, pos, [(gold, 1)], [gold] + rest)
    # 14-20: mode at position two
    second = [
        ("The task was difficult.", "difficult", "difficult", "adj", "hard", "tough", ["simple", "odd"]),
        ("He spoke loudly again.", "loudly", "loudly", "adv", "noisily", "aloud", ["clearly", "often"]),
        ("The film was dull.", "dull", "dull", "adj", "boring", "tedious", ["long", "bright"]),
        ("We must begin now.", "begin", "begin", "verb", "start", "commence", ["leave", "eat"]),
        ("The hotel was cheap.", "cheap", "cheap", "adj", "inexpensive", "affordable", ["clean", "old"]),
        ("She wept quietly.", "wept", "weep", "verb", "cried", "sobbed", ["laughed", "slept"]),
        ("The plan seemed clever.", "clever", "clever", "adj", "smart", "shrewd", ["risky", "odd"]),
    ]
    for sentence, word, lemma, pos, mode, other, (first, third) in second:
        add(sentence, word, lemma, pos, [(mode, 2), (other, 1)], [first, mode, third])
    # 21-23: no hit, tied gold
    miss = [
        ("The soup was tasty.", "tasty", "tasty", "adj", ["delicious", "yummy"], ["cold", "thin", "salty"]),
        ("He rarely smiles.", "rarely", "rarely", "adv", ["seldom", "infrequently"], ["never", "often", "always"]),
        ("The dog barked.", "barked", "bark", "verb", ["yelped", "woofed"], ["growled", "howled", "whined"]),
    ]
    for sentence, word, lemma, pos, gold, tokens in miss:
        add(sentence, word, lemma, pos, [(g, 1) for g in gold], tokens)
    # 24: first hit at position four
    add("The lecture was long.", "long", "long", "adj",
        [("lengthy", 3), ("extended", 1)],
        ["dreary", "boring", "late", "lengthy"])
    # 25: nothing survives
    add("They arrived at noon.", "noon", "noon", "noun",
        [("midday", 2)],
        ["##day", ",", "Noon", "noons", "12"])
    assert len(recs) == 25
    write("golden", recs, fills)


def read_index(stem):
    out = {}
    with open(os.path.join(WN, "index." + stem)) as f:
        for line in f:
            if line.startswith(" "):
                continue
            fields = line.split()
            n = int(fields[2])
            out[fields[0]] = (fields[4:4 + int(fields[3])], fields[-n:])
    return out


def read_data(stem):
    out = {}
    with open(os.path.join(WN, "data." + stem)) as f:
        for line in f:
            if line.startswith(" "):
                continue
            fields = line.split(" | ")[0].split()
            n = int(fields[3], 16)
            words = [fields[4 + 2 * i].lower() for i in range(n)]
            p = 4 + 2 * n
            ptrs = []
            for i in range(int(fields[p])):
                b = p + 1 + 4 * i
                ptrs.append((fields[b], fields[b + 1], fields[b + 3]))
            out[fields[0]] = (words, ptrs)
    return out


def antonyms(stem, lemma, index, data):
    found = []
    for off in index[lemma][1]:
        words, ptrs = data[off]
        src = words.index(lemma) + 1
        for sym, target, st in ptrs:
            if sym == "!" and int(st[:2], 16) == src:
                tw = data[target][0][int(st[2:], 16) - 1]
                if "_" not in tw:
                    found.append(tw)
    return found


FILLERS = ["certain", "proper", "usual", "notable", "typical", "ordinary",
           "regular", "special", "general", "modest", "plain", "steady"]

TEMPLATES = {
    "adj": ("It seemed {} to everyone in the room.", "adj"),
    "verb": ("They will {} it tomorrow.", "verb"),
    "adv": ("She walked {} down the hall.", "adv"),
    "noun": ("The {} was mentioned twice.", "noun"),
}


def inflections(w):
    forms = [w + "s", w + "ed", w + "ing", w + "er"]
    if w.endswith("e"):
        forms += [w[:-1] + "ing", w + "d"]
    if w.endswith("y"):
        forms.append(w[:-1] + "ier")
    return forms


def filter50():
    recs, fills = [], []
    for stem, pos in [("adj", "adj"), ("verb", "verb"), ("adv", "adv"), ("noun", "noun")]:
        index, data = read_index(stem), read_data(stem)
        for lemma in sorted(index):
            if "!" not in index[lemma][0] or "_" in lemma or len(recs) == 50:
                continue
            ants = antonyms(stem, lemma, index, data)
            if not ants:
                continue
            template, _ = TEMPLATES[stem]
            sentence = template.format(lemma)
            k = len(recs)
            fill_words = [FILLERS[(k + i) % len(FILLERS)] for i in range(4)]
            forms = inflections(lemma)
            tokens = [
                fill_words[0], ants[0], lemma.capitalize(), forms[k % len(forms)],
                "##" + lemma[:2], fill_words[1], ",", fill_words[1].upper(),
                forms[(k + 1) % len(forms)], "Ġ" + fill_words[2], ants[-1].capitalize(),
                lemma.upper(), "x1", fill_words[3], "'s",
            ]
            rid = "f%02d" % (k + 1)
            recs.append(record(rid, sentence, lemma, lemma, pos, [(fill_words[0], 1)]))
            fills.append(fill(sentence, lemma, tokens))
    assert len(recs) == 50, len(recs)
    write("filter50", recs, fills)


if __name__ == "__main__":
    golden()
    filter50()
    print("fixtures written under", OUT, file=sys.stderr)
