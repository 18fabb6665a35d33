#!/usr/bin/env python3
"""Generate the bundled toy corpus under data/toy/.

A small synthetic language pair with systematic reordering: the source
orders clauses subject-time-location-verb-object while the target is
subject-verb-object-location-time, so the reordering models have real
work to do. Deterministic output; run from the repository root.
"""

import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "toy")

SUBJ = [("renA%d" % i, "manE%d" % i) for i in range(6)]
TIME = [("shiA%d" % i, "timeE%d" % i) for i in range(4)]
LOC = [("diA%d" % i, "placeE%d" % i) for i in range(5)]
VERB = [("zuoA%d" % i, "doesE%d" % i) for i in range(5)]
OBJ = [("wuA%d" % i, "thingE%d" % i) for i in range(6)]
PREP = ("zai", "in")


def full_sentence(rng):
    s = rng.choice(SUBJ)
    t = rng.choice(TIME)
    l = rng.choice(LOC)
    v = rng.choice(VERB)
    o = rng.choice(OBJ)
    # source: subj time prep loc verb obj
    src = [s[0], t[0], PREP[0], l[0], v[0], o[0]]
    # target: subj verb obj in loc time
    tgt = [s[1], v[1], o[1], PREP[1], l[1], t[1]]
    align = [(0, 0), (1, 5), (2, 3), (3, 4), (4, 1), (5, 2)]
    parse = [
        (1, src[0], "NR", 5, "nsubj"),
        (2, src[1], "NT", 5, "tmod"),
        (3, src[2], "P", 5, "prep"),
        (4, src[3], "NR", 3, "pobj"),
        (5, src[4], "VV", 0, "root"),
        (6, src[5], "NN", 5, "dobj"),
    ]
    return src, tgt, align, parse


def short_sentence(rng):
    s = rng.choice(SUBJ)
    v = rng.choice(VERB)
    o = rng.choice(OBJ)
    # source: subj obj verb ; target: subj verb obj
    src = [s[0], o[0], v[0]]
    tgt = [s[1], v[1], o[1]]
    align = [(0, 0), (1, 2), (2, 1)]
    parse = [
        (1, src[0], "NR", 3, "nsubj"),
        (2, src[1], "NN", 3, "dobj"),
        (3, src[2], "VV", 0, "root"),
    ]
    return src, tgt, align, parse


def make(rng):
    return full_sentence(rng) if rng.random() < 0.6 else short_sentence(rng)


def write_lines(path, lines):
    with open(path, "w") as f:
        for line in lines:
            f.write(line + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20240817)

    train = [make(rng) for _ in range(200)]
    write_lines(os.path.join(OUT, "train.src"),
                [" ".join(s[0]) for s in train])
    write_lines(os.path.join(OUT, "train.tgt"),
                [" ".join(s[1]) for s in train])
    write_lines(os.path.join(OUT, "train.align"),
                [" ".join("%d-%d" % a for a in s[2]) for s in train])

    for name, count in (("dev", 20), ("test", 20)):
        sents = [make(rng) for _ in range(count)]
        conll = []
        for s in sents:
            for idx, form, pos, head, label in s[3]:
                conll.append("%d\t%s\t%s\t%d\t%s" % (idx, form, pos, head, label))
            conll.append("")
        write_lines(os.path.join(OUT, name + ".conll"), conll)
        write_lines(os.path.join(OUT, name + ".ref"),
                    [" ".join(s[1]) for s in sents])


if __name__ == "__main__":
    main()
