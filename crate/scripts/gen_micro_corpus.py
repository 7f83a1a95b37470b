#!/usr/bin/env python3
"""Writes the micro-corpus fixture used by the golden tests.

Outputs, under crates/core/tests/fixtures/micro/:
  micro.jsonl           three documents, 40 mentions, gold labels
  vectors.txt           hand-built word vectors
  expected_stages.json  partition expected after each stage, by mention id

Run without arguments from the repository root. Also prints the cosine
checks the vector design relies on and the chain count check.
"""

import json
import math
import os
import sys

OUT = os.path.join("crates", "core", "tests", "fixtures", "micro")

STOP = {
    "the", "a", "an", "he", "his", "him", "they", "them", "it", "and", "to",
    "on", "in", "that", "which", "about", "was", "has", "will", "could",
    "also", ",", ".",
}

PERSON = [["noun.person", 1]]
GROUP = [["noun.group", 1], ["noun.person", 2]]
PLACE = [["noun.location", 1], ["noun.group", 2]]


def sentence(words):
    """words: list of (text, lemma, pos)."""
    return [
        {"index": i, "text": t, "lemma": l, "pos": p, "stop": t.lower() in STOP}
        for i, (t, l, p) in enumerate(words)
    ]


def m(mid, sent, start, end, head, gold, ne=None, wiki=None, senses=(), dep=()):
    out = {"id": mid, "sent": sent, "start": start, "end": end, "head": head}
    if ne:
        out["ne"] = ne
    if wiki:
        out["wiki"] = wiki
    out["senses"] = [list(s) for s in senses]
    out["dep"] = [list(d) for d in dep]
    out["struct"] = sorted({head} | {i for d in dep for i in d[:2]})
    out["gold"] = gold
    return out


DOCS = [
    {
        "doc_id": "d1",
        "sentences": [
            sentence([
                ("Donald", "Donald", "NNP"), ("Trump", "Trump", "NNP"), ("said", "say", "VBD"),
                ("he", "he", "PRP"), ("will", "will", "MD"), ("meet", "meet", "VB"),
                ("North", "North", "NNP"), ("Korean", "Korean", "JJ"), ("dictator", "dictator", "NN"),
                ("Kim", "Kim", "NNP"), ("Jong", "Jong", "NNP"), ("Un", "Un", "NNP"),
                ("in", "in", "IN"), ("Singapore", "Singapore", "NNP"), (".", ".", "."),
            ]),
            sentence([
                ("The", "the", "DT"), ("Trump-Kim", "Trump-Kim", "NNP"), ("meeting", "meeting", "NN"),
                ("could", "could", "MD"), ("also", "also", "RB"), ("touch", "touch", "VB"),
                ("on", "on", "IN"), ("the", "the", "DT"), ("Mexico", "Mexico", "NNP"),
                ("border", "border", "NN"), ("wall", "wall", "NN"), (".", ".", "."),
            ]),
            sentence([
                ("His", "his", "PRP$"), ("administration", "administration", "NN"), ("has", "have", "VBZ"),
                ("called", "call", "VBN"), ("them", "they", "PRP"), ("illegal", "illegal", "JJ"),
                ("aliens", "alien", "NNS"), (",", ",", ","), ("reporters", "reporter", "NNS"),
                ("said", "say", "VBD"), (".", ".", "."),
            ]),
            sentence([
                ("The", "the", "DT"), ("United", "United", "NNP"), ("States", "States", "NNPS"),
                ("wants", "want", "VBZ"), ("the", "the", "DT"), ("talks", "talk", "NNS"),
                ("to", "to", "TO"), ("succeed", "succeed", "VB"), (",", ",", ","),
                ("the", "the", "DT"), ("economy", "economy", "NN"), ("depends", "depend", "VBZ"),
                ("on", "on", "IN"), ("it", "it", "PRP"), (".", ".", "."),
            ]),
            sentence([
                ("Kim", "Kim", "NNP"), ("Jong", "Jong", "NNP"), ("Un", "Un", "NNP"),
                ("and", "and", "CC"), ("Moon", "Moon", "NNP"), ("Jae-in", "Jae-in", "NNP"),
                ("want", "want", "VBP"), ("peace", "peace", "NN"), (".", ".", "."),
            ]),
        ],
        "mentions": [
            m("m01", 0, 0, 1, 1, "TRUMP", "PERSON", "Donald_Trump", PERSON, [(1, 0, "compound")]),
            m("m02", 0, 3, 3, 3, "TRUMP"),
            m("m03", 0, 6, 11, 9, "KIM", "PERSON", "Kim_Jong-un", PERSON,
              [(9, 8, "compound"), (8, 7, "amod"), (7, 6, "compound"), (9, 10, "flat"), (9, 11, "flat")]),
            m("m04", 0, 13, 13, 13, "SINGAPORE", "GPE", "Singapore", PLACE),
            m("m05", 1, 0, 2, 2, "MEETING", senses=[["noun.act", 1], ["noun.event", 2]],
              dep=[(2, 0, "det"), (2, 1, "compound")]),
            m("m06", 1, 7, 10, 10, "WALL", "LOC", senses=[["noun.artifact", 1]],
              dep=[(10, 7, "det"), (10, 8, "compound"), (10, 9, "compound")]),
            m("m07", 2, 0, 1, 1, "USA", senses=[["noun.group", 1]], dep=[(1, 0, "nmod:poss")]),
            m("m08", 2, 5, 6, 6, "IMMIGRANTS", senses=GROUP, dep=[(6, 5, "amod")]),
            m("m09", 2, 8, 8, 8, "REPORTERS", senses=PERSON),
            m("m10", 3, 0, 2, 2, "USA", "GPE", "United_States", PLACE,
              [(2, 0, "det"), (2, 1, "compound")]),
            m("m11", 3, 4, 5, 5, "MEETING", senses=[["noun.communication", 1]], dep=[(5, 4, "det")]),
            m("m12", 3, 9, 10, 10, "ECONOMY", senses=[["noun.group", 1]], dep=[(10, 9, "det")]),
            m("m13", 4, 0, 2, 0, "KIM", "PERSON", "Kim_Jong-un", PERSON, [(0, 1, "flat"), (0, 2, "flat")]),
            m("m14", 4, 4, 5, 4, "MOON", "PERSON", "Moon_Jae-in", PERSON, [(4, 5, "flat")]),
            m("m15", 4, 7, 7, 7, "PEACE", senses=[["noun.state", 1]]),
        ],
        "chains": [
            {"id": "d1-c1", "mentions": ["m01", "m02"]},
            {"id": "d1-c2", "mentions": ["m03", "m13"]},
        ],
    },
    {
        "doc_id": "d2",
        "sentences": [
            sentence([
                ("Trump", "Trump", "NNP"), ("met", "meet", "VBD"), ("Kim", "Kim", "NNP"),
                ("on", "on", "IN"), ("Tuesday", "Tuesday", "NNP"), (".", ".", "."),
            ]),
            sentence([
                ("Teresa", "Teresa", "NNP"), ("May", "May", "NNP"), (",", ",", ","),
                ("the", "the", "DT"), ("prime", "prime", "JJ"), ("minister", "minister", "NN"),
                (",", ",", ","), ("said", "say", "VBD"), ("they", "they", "PRP"),
                ("discussed", "discuss", "VBD"), ("an", "an", "DT"), ("issue", "issue", "NN"),
                (".", ".", "."),
            ]),
            sentence([
                ("Senior", "senior", "JJ"), ("American", "American", "JJ"), ("officials", "official", "NNS"),
                ("warned", "warn", "VBD"), ("about", "about", "IN"), ("undocumented", "undocumented", "JJ"),
                ("immigrants", "immigrant", "NNS"), (".", ".", "."),
            ]),
            sentence([
                ("The", "the", "DT"), ("summit", "summit", "NN"), ("in", "in", "IN"),
                ("Singapore", "Singapore", "NNP"), ("was", "be", "VBD"), ("a", "a", "DT"),
                ("historic", "historic", "JJ"), ("meeting", "meeting", "NN"), (",", ",", ","),
                ("Trump", "Trump", "NNP"), ("said", "say", "VBD"), (".", ".", "."),
            ]),
            sentence([
                ("The", "the", "DT"), ("deal", "deal", "NN"), ("pleased", "please", "VBD"),
                ("Kim", "Kim", "NNP"), (".", ".", "."),
            ]),
        ],
        "mentions": [
            m("m16", 0, 0, 0, 0, "TRUMP", "PERSON", "Donald_Trump", PERSON),
            m("m17", 0, 2, 2, 2, "KIM", "PERSON", senses=PERSON),
            m("m18", 0, 4, 4, 4, "TUESDAY", "DATE", senses=[["noun.time", 1]]),
            m("m19", 1, 0, 5, 1, "MAY", "PERSON", "Theresa_May", PERSON,
              [(1, 0, "compound"), (1, 2, "punct"), (1, 5, "appos"), (5, 3, "det"), (5, 4, "amod")]),
            m("m20", 1, 9, 11, 9, "MEETING", senses=[["verb.communication", 1]],
              dep=[(9, 11, "obj"), (11, 10, "det")]),
            m("m21", 2, 0, 2, 2, "USA", senses=GROUP, dep=[(2, 0, "amod"), (2, 1, "amod")]),
            m("m22", 2, 5, 6, 6, "IMMIGRANTS", senses=GROUP, dep=[(6, 5, "amod")]),
            m("m23", 3, 0, 3, 1, "MEETING", senses=[["noun.act", 1]],
              dep=[(1, 0, "det"), (1, 3, "nmod"), (3, 2, "case")]),
            m("m24", 3, 3, 3, 3, "SINGAPORE", "GPE", "Singapore", PLACE),
            m("m25", 3, 5, 7, 7, "MEETING", senses=[["noun.act", 1]], dep=[(7, 5, "det"), (7, 6, "amod")]),
            m("m26", 3, 9, 9, 9, "TRUMP", "PERSON", "Donald_Trump", PERSON),
            m("m27", 4, 0, 1, 1, "DEAL", senses=[["noun.communication", 1]], dep=[(1, 0, "det")]),
            m("m28", 4, 3, 3, 3, "KIM", "PERSON", senses=PERSON),
        ],
        "chains": [
            {"id": "d2-c1", "mentions": ["m16", "m26"]},
            {"id": "d2-c2", "mentions": ["m17", "m28"]},
            {"id": "d2-c3", "mentions": ["m23", "m25"]},
        ],
    },
    {
        "doc_id": "d3",
        "sentences": [
            sentence([
                ("Moon", "Moon", "NNP"), ("Jae-in", "Jae-in", "NNP"), ("said", "say", "VBD"),
                ("Kim", "Kim", "NNP"), ("Jong", "Jong", "NNP"), ("Un", "Un", "NNP"),
                ("wants", "want", "VBZ"), ("the", "the", "DT"), ("summit", "summit", "NN"),
                (",", ",", ","), ("and", "and", "CC"), ("the", "the", "DT"),
                ("president", "president", "NN"), ("believes", "believe", "VBZ"), ("him", "he", "PRP"),
                (".", ".", "."),
            ]),
            sentence([
                ("Donald", "Donald", "NNP"), ("wants", "want", "VBZ"), ("a", "a", "DT"),
                ("new", "new", "JJ"), ("border", "border", "NN"), ("wall", "wall", "NN"),
                (",", ",", ","), ("which", "which", "WDT"), ("the", "the", "DT"),
                ("prime", "prime", "JJ"), ("minister", "minister", "NN"), ("opposes", "oppose", "VBZ"),
                ("and", "and", "CC"), ("migrants", "migrant", "NNS"), ("fear", "fear", "VBP"),
                (".", ".", "."),
            ]),
            sentence([
                ("The", "the", "DT"), ("immigrants", "immigrant", "NNS"), ("and", "and", "CC"),
                ("the", "the", "DT"), ("reporters", "reporter", "NNS"), ("waited", "wait", "VBD"),
                (".", ".", "."),
            ]),
        ],
        "mentions": [
            m("m29", 0, 0, 1, 0, "MOON", "PERSON", "Moon_Jae-in", PERSON, [(0, 1, "flat")]),
            m("m30", 0, 3, 5, 3, "KIM", "PERSON", "Kim_Jong-un", PERSON, [(3, 4, "flat"), (3, 5, "flat")]),
            m("m31", 0, 7, 8, 8, "MEETING", senses=[["noun.act", 1]], dep=[(8, 7, "det")]),
            m("m32", 0, 11, 12, 12, "TRUMP", senses=PERSON, dep=[(12, 11, "det")]),
            m("m33", 0, 14, 14, 14, "KIM"),
            m("m34", 1, 0, 0, 0, "TRUMP", "PERSON", senses=PERSON),
            m("m35", 1, 2, 5, 5, "WALL", senses=[["noun.artifact", 1]],
              dep=[(5, 2, "det"), (5, 3, "amod"), (5, 4, "compound")]),
            m("m36", 1, 8, 10, 10, "MAY", senses=PERSON, dep=[(10, 8, "det"), (10, 9, "amod")]),
            m("m37", 1, 11, 11, 11, "OPPOSE", senses=[["verb.social", 1]]),
            m("m38", 1, 13, 13, 13, "IMMIGRANTS", senses=GROUP),
            m("m39", 2, 0, 1, 1, "IMMIGRANTS", senses=GROUP, dep=[(1, 0, "det")]),
            m("m40", 2, 3, 4, 4, "REPORTERS", senses=PERSON, dep=[(4, 3, "det")]),
        ],
        "chains": [
            # A within-document chain that wrongly joins two linked people.
            {"id": "d3-c1", "mentions": ["m29", "m30", "m33"]},
        ],
    },
]

# Concept axes. Every word also gets a private axis carrying the rest of
# its weight, so words of different concepts are nearly orthogonal.
AXES = ["TRUMP", "KIM", "MAY", "MOON", "GROUP", "USA", "EVENT", "WALL", "OFFICIAL", "FUNCTION"]

WORDS = {
    "donald": {"TRUMP": 1.0},
    "trump": {"TRUMP": 1.0},
    "president": {"TRUMP": 0.9},
    "kim": {"KIM": 1.0},
    "jong": {"KIM": 0.9},
    "un": {"KIM": 0.9},
    "north": {"KIM": 0.5},
    "korean": {"KIM": 0.6},
    "dictator": {"KIM": 0.7},
    "teresa": {"MAY": 1.0},
    "may": {"MAY": 1.0},
    "prime": {"MAY": 0.8},
    "minister": {"MAY": 0.8},
    "moon": {"MOON": 1.0},
    "jae-in": {"MOON": 1.0},
    "illegal": {"GROUP": 0.6},
    "aliens": {"GROUP": 0.9},
    "alien": {"GROUP": 0.9},
    "undocumented": {"GROUP": 0.7},
    "immigrants": {"GROUP": 1.0},
    "immigrant": {"GROUP": 1.0},
    "migrants": {"GROUP": 0.95},
    "migrant": {"GROUP": 0.95},
    "united": {"USA": 0.7},
    "states": {"USA": 1.0},
    "american": {"USA": 0.6},
    "officials": {"OFFICIAL": 1.0},
    "official": {"OFFICIAL": 1.0},
    "senior": {"OFFICIAL": 0.5},
    "trump-kim": {"EVENT": 0.6, "TRUMP": 0.4, "KIM": 0.4},
    "meeting": {"EVENT": 0.95},
    "summit": {"EVENT": 0.9},
    "talks": {"EVENT": 0.85},
    "talk": {"EVENT": 0.85},
    "discussed": {"EVENT": 0.8},
    "discuss": {"EVENT": 0.8},
    "issue": {"EVENT": 0.5},
    "historic": {"EVENT": 0.3},
    "wall": {"WALL": 1.0},
    "border": {"WALL": 0.6},
    "mexico": {"WALL": 0.3},
}
for w in STOP:
    WORDS.setdefault(w, {"FUNCTION": 1.0})


def vocabulary():
    words = set(WORDS)
    for doc in DOCS:
        for sent in doc["sentences"]:
            for tok in sent:
                words.add(tok["text"].lower())
                words.add(tok["lemma"].lower())
    return sorted(words)


def build_vectors():
    vocab = vocabulary()
    dim = len(AXES) + len(vocab)
    vecs = {}
    for i, w in enumerate(vocab):
        v = [0.0] * dim
        weights = WORDS.get(w, {})
        shared = 0.0
        for axis, x in weights.items():
            v[AXES.index(axis)] = x
            shared += x * x
        v[len(AXES) + i] = math.sqrt(max(0.0, 1.0 - shared)) if shared < 1.0 else 0.0
        if w in STOP:
            v[len(AXES) + i] = 0.0
        vecs[w] = v
    return vecs


def cos(a, b):
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return sum(x * y for x, y in zip(a, b)) / (na * nb)


def mean(vs):
    return [sum(c) / len(vs) for c in zip(*vs)]


def weighted(vecs, words, head, k=2.0):
    parts = [[x * (k if w == head else 1.0) for x in vecs[w]] for w in words]
    return [sum(c) / len(words) for c in zip(*parts)]


# Expected partitions after each stage, written as gold-independent groups.
# Anything not listed is a singleton.
INIT = [["m01", "m02"], ["m03", "m13"], ["m16", "m26"], ["m17", "m28"], ["m23", "m25"], ["m30", "m33"]]
S1 = [
    ["m01", "m02", "m16", "m26"],
    ["m03", "m13", "m30", "m33"],
    ["m14", "m29"],
    ["m04", "m24"],
    ["m17", "m28"],
    ["m23", "m25"],
]
S2 = [
    ["m01", "m02", "m16", "m26", "m34"],
    ["m03", "m13", "m30", "m33", "m17", "m28"],
    ["m14", "m29"],
    ["m04", "m24"],
    ["m23", "m25"],
]
S3 = [
    ["m01", "m02", "m16", "m26", "m34", "m32"],
    ["m03", "m13", "m30", "m33", "m17", "m28"],
    ["m14", "m29"],
    ["m04", "m24"],
    ["m23", "m25"],
    ["m19", "m36"],
    ["m06", "m35"],
]
S4 = S3 + [["m08", "m22", "m38", "m39"], ["m10", "m21"]]
S5 = [g for g in S4 if g != ["m23", "m25"]] + [
    ["m05", "m11", "m20", "m23", "m25", "m31"],
    ["m09", "m40"],
]


def all_ids():
    return [mm["id"] for d in DOCS for mm in d["mentions"]]


def partition(groups):
    covered = {x for g in groups for x in g}
    out = [sorted(g) for g in groups] + [[x] for x in all_ids() if x not in covered]
    return sorted(out)


def design_checks(vecs):
    def words_of(*ws):
        return [vecs[w] for w in ws]

    checks = [
        # Non-NE to NE cosine pass: the president joins the Trump chain only.
        ("president~trump chain", cos(vecs["president"], mean(words_of("donald", "trump"))), ">=", 0.5),
        ("president~kim chain", cos(vecs["president"], mean(words_of("north", "korean", "dictator", "kim", "jong", "un"))), "<", 0.5),
        ("prime minister~trump chain", cos(mean(words_of("prime", "minister")), mean(words_of("donald", "trump", "president"))), "<", 0.5),
        ("officials~usa chain", cos(mean(words_of("senior", "american", "officials")), mean(words_of("united", "states"))), "<", 0.5),
        ("country head~group modifier", cos(vecs["states"], vecs["american"]), ">=", 0.5),
        ("singapore~group modifier", cos(vecs["singapore"], vecs["american"]), "<", 0.5),
    ]
    groups = {
        "m08": mean(words_of("illegal", "aliens")),
        "m22": mean(words_of("undocumented", "immigrants")),
        "m38": vecs["migrants"],
        "m39": vecs["immigrants"],
    }
    others = {
        "m21": mean(words_of("senior", "american", "officials")),
        "m12": vecs["economy"],
        "m07": vecs["administration"],
    }
    for a in groups:
        for b in groups:
            if a < b:
                checks.append((f"core edge {a}-{b}", cos(groups[a], groups[b]), ">=", 0.6))
        for o, v in others.items():
            checks.append((f"no assignment {o}->{a}", cos(v, groups[a]), "<", 0.5))

    events = {
        "m05": weighted(vecs, ["trump-kim", "meeting"], "meeting"),
        "m11": vecs["talk"],
        "m20": weighted(vecs, ["discuss", "issue"], "discuss"),
        "m23": weighted(vecs, ["summit", "singapore"], "summit"),
        "m25": weighted(vecs, ["historic", "meeting"], "meeting"),
        "m31": vecs["summit"],
    }
    rest = {
        "peace": vecs["peace"],
        "deal": vecs["deal"],
        "tuesday": vecs["tuesday"],
        "oppose": vecs["oppose"],
        "economy": vecs["economy"],
        "administration": vecs["administration"],
        "reporter": vecs["reporter"],
        "alien": weighted(vecs, ["illegal", "alien"], "alien"),
        "wall": weighted(vecs, ["mexico", "border", "wall"], "wall"),
        "new wall": weighted(vecs, ["new", "border", "wall"], "wall"),
    }
    for a in events:
        for b in events:
            if a < b:
                checks.append((f"event distance {a}-{b}", 1.0 - cos(events[a], events[b]), "<=", 0.4))
        for r, v in rest.items():
            checks.append((f"event apart {a}-{r}", 1.0 - cos(events[a], v), ">", 0.4))
    ok = True
    for name, value, op, bound in checks:
        good = {">=": value >= bound, "<": value < bound, "<=": value <= bound, ">": value > bound}[op]
        ok &= good
        if not good:
            print(f"FAIL {name}: {value:.4f} {op} {bound}")
    print(f"{len(checks)} design checks, {'all hold' if ok else 'some fail'}")
    return ok


def main():
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "micro.jsonl"), "w") as f:
        for doc in DOCS:
            f.write(json.dumps(doc, ensure_ascii=False) + "\n")

    vecs = build_vectors()
    dim = len(next(iter(vecs.values())))
    with open(os.path.join(OUT, "vectors.txt"), "w") as f:
        f.write(f"{len(vecs)} {dim}\n")
        for w, v in vecs.items():
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    stages = {
        "init": partition(INIT),
        "S1": partition(S1),
        "S2": partition(S2),
        "S3": partition(S3),
        "S4": partition(S4),
        "S5": partition(S5),
    }
    with open(os.path.join(OUT, "expected_stages.json"), "w") as f:
        json.dump(stages, f, indent=1)
        f.write("\n")

    mentions = len(all_ids())
    covered = sum(len(c["mentions"]) for d in DOCS for c in d["chains"])
    chains = sum(len(d["chains"]) for d in DOCS)
    print(f"mentions {mentions}, covered {covered}, initial chains {chains}, "
          f"loaded chains {mentions - covered + chains}")
    return 0 if design_checks(vecs) else 1


if __name__ == "__main__":
    sys.exit(main())
