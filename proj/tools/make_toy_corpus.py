#!/usr/bin/env python3
"""Regenerates the bundled toy corpus under data/toy/.

Two language pairs, 50 segments each, one reference and four system outputs
per pair, plus five-way human rankings. Systems are noisy copies of the
reference; a system's ranking follows how much it was perturbed.
"""

import pathlib
import random

RELATIONS = ["Elaboration", "Attribution", "Background", "Contrast", "Joint",
             "Same-Unit", "Enablement", "Cause", "Condition", "Temporal"]
VOCAB = ("the a of to and in that is was he for it with as his on be at by "
         "said percent government year market new bank minister people "
         "would could not more than after before when while because").split()
SYSTEMS = {"sysA": 0.05, "sysB": 0.2, "sysC": 0.35, "sysD": 0.5}
SEGMENTS = 50
DOC_SIZE = 10


def escape(tok):
    return "".join("\\" + c if c in "():\\ " else c for c in tok)


def make_tree(rng, depth=0):
    if depth >= 2 or rng.random() < 0.35:
        return ("EDU", [rng.choice(VOCAB) for _ in range(rng.randint(1, 5))])
    n = 2 if rng.random() < 0.85 else 3
    kids = [make_tree(rng, depth + 1) for _ in range(n)]
    nucs = ["N"] + ["S" if rng.random() < 0.6 else "N" for _ in range(n - 1)]
    rng.shuffle(nucs)
    return (rng.choice(RELATIONS), list(zip(nucs, kids)))


def perturb(rng, tree, p):
    label, body = tree
    if label == "EDU":
        words = [rng.choice(VOCAB) if rng.random() < p else w for w in body if rng.random() >= p / 3] or body[:1]
        return ("EDU", words)
    if rng.random() < p:
        label = rng.choice(RELATIONS)
    kids = []
    for nuc, kid in body:
        if rng.random() < p / 2:
            nuc = "S" if nuc == "N" else "N"
        kids.append((nuc, perturb(rng, kid, p)))
    return (label, kids)


def render(tree, nuc="R"):
    label, body = tree
    if label == "EDU":
        return "(EDU:%s %s)" % (nuc, " ".join(escape(w) for w in body))
    return "(%s:%s %s)" % (label, nuc, " ".join(render(k, n) for n, k in body))


def main():
    rng = random.Random(20141015)
    root = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"
    rankings = []
    for lp in ("de-en", "fr-en"):
        out = root / lp
        out.mkdir(parents=True, exist_ok=True)
        refs = [make_tree(rng) for _ in range(SEGMENTS)]
        (out / "ref.trees").write_text("".join(render(t) + "\n" for t in refs))
        for name, p in SYSTEMS.items():
            lines = []
            for i, t in enumerate(refs):
                # one unparsable hypothesis in the noisiest system
                lines.append("" if (name == "sysD" and i == 17) else render(perturb(rng, t, p)))
            (out / (name + ".trees")).write_text("".join(l + "\n" for l in lines))
        for seg in range(1, SEGMENTS + 1):
            quality = {s: -p + rng.gauss(0, 0.12) for s, p in SYSTEMS.items()}
            order = sorted(quality, key=quality.get, reverse=True)
            ranks, rank = {}, 0
            for i, s in enumerate(order):
                if i == 0 or quality[order[i - 1]] - quality[s] > 0.03:
                    rank = i + 1
                ranks[s] = rank
            items = ",".join("%s=%d" % (s, ranks[s]) for s in sorted(ranks))
            doc = "doc%02d" % ((seg - 1) // DOC_SIZE + 1)
            rankings.append("%s\t%d\t%s\tj%d\t%s" % (lp, seg, doc, rng.randint(1, 3), items))
    (root / "rankings.tsv").write_text("\n".join(rankings) + "\n")


if __name__ == "__main__":
    main()
