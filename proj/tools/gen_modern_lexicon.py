#!/usr/bin/env python3
"""Build data/modern.dic (the contemporary English tier) from a WordNet 3.0
database directory plus the irregular verb table.

Usage: gen_modern_lexicon.py WORDNET_DICT_DIR [-o data/modern.dic]

Regular lemmas are written once with an FLX paradigm code; lemmas whose
forms do not fit a shipped paradigm (irregular verbs, consonant doubling,
irregular plurals) are written as explicit three-field lines.
"""

import argparse
import collections
import pathlib
import re
import sys

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE.parent / "data"

# Handled by modern_closed.dic with the AUX trait.
SKIP_VERBS = {"be", "have", "do"}
PERSON_LEXFILE = 18  # noun.person
# -man nouns that pluralize regularly.
MAN_REGULAR = {"human", "german", "roman", "shaman", "talisman", "caiman", "cayman",
               "ottoman", "dolman", "hetman", "ataman", "brahman", "desman", "doberman",
               "turkoman", "leman"}


def usable(lemma):
    return (len(lemma) > 1 and re.fullmatch(r"[a-z]+", lemma) is not None)


def read_index(path):
    lemmas = []
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            lemmas.append(line.split(" ", 1)[0])
    return lemmas


def read_exc(path):
    by_base = collections.defaultdict(list)
    with open(path, encoding="latin-1") as f:
        for line in f:
            parts = line.split()
            for base in parts[1:]:
                by_base[base].append(parts[0])
    return by_base


def read_person_nouns(path):
    """Nouns whose first (most frequent) sense lives in noun.person."""
    people = set()
    with open(path, encoding="latin-1") as f:
        for line in f:
            key, _offset, sense_no, _count = line.split()
            lemma, lexsn = key.split("%")
            ss_type, lex_filenum = lexsn.split(":")[:2]
            if ss_type == "1" and sense_no == "1" and int(lex_filenum) == PERSON_LEXFILE:
                people.add(lemma)
    return people


def read_irregulars(path):
    table = {}
    for line in open(path, encoding="utf-8"):
        if not line.strip() or line.startswith("#"):
            continue
        base, pt, pp = line.rstrip("\n").split("\t")
        table[base] = (pt.split("|"), pp.split("|"))
    return table


def syllables(word):
    return len(re.findall(r"[aeiouy]+", word))


def noun_paradigm(lemma):
    if re.search(r"(s|x|z|ch|sh)$", lemma):
        return "N_es", lemma + "es"
    if re.search(r"[^aeiou]y$", lemma):
        return "Nsp_y", lemma[:-1] + "ies"
    return "N_s", lemma + "s"


def verb_paradigm(lemma):
    """Returns (paradigm id, 3sg, past, gerund)."""
    if lemma.endswith("ie"):
        return "V_ie", lemma + "s", lemma + "d", lemma[:-2] + "ying"
    if re.search(r"(ee|oe|ye)$", lemma):
        return "V_ee", lemma + "s", lemma + "d", lemma + "ing"
    if lemma.endswith("e"):
        return "V_e", lemma + "s", lemma + "d", lemma[:-1] + "ing"
    if re.search(r"[^aeiou]y$", lemma):
        return "V_y", lemma[:-1] + "ies", lemma[:-1] + "ied", lemma + "ing"
    if re.search(r"(s|x|z|ch|sh)$", lemma):
        return "V_es", lemma + "es", lemma + "ed", lemma + "ing"
    return "V_reg", lemma + "s", lemma + "ed", lemma + "ing"


def adj_paradigm(lemma):
    if len(lemma) < 3:
        return None
    if re.search(r"[^aeiou]y$", lemma) and syllables(lemma[:-1]) <= 1:
        return "A_y"
    if syllables(lemma) != 1:
        return None
    if lemma.endswith("e"):
        return "A_e"
    if re.search(r"[aeiou][^aeiouwxy]$", lemma) and not re.search(r"[aeiou]{2}[^aeiou]$", lemma):
        # CVC adjectives double the consonant (big/bigger); adj.exc covers them.
        return None
    return "A_er"


def emit_nouns(out, lemmas, exc, people):
    for lemma in lemmas:
        hum = "+Distribution=Hum" if lemma in people else ""
        irregular = [p for p in exc.get(lemma, []) if usable(p)]
        if not irregular and lemma.endswith("man") and len(lemma) > 4 and lemma not in MAN_REGULAR:
            irregular = [lemma[:-3] + "men"]
        if irregular:
            out.append(f"{lemma},N+Nb=s{hum}")
            for plural in irregular:
                if plural != lemma:
                    out.append(f"{plural},{lemma},N+Nb=p{hum}")
                else:
                    out.append(f"{lemma},{lemma},N+Nb=p{hum}")
        else:
            flx, _ = noun_paradigm(lemma)
            out.append(f"{lemma},N+Nb=s{hum}+FLX={flx}")


def emit_adjectives(out, lemmas, exc):
    for lemma in lemmas:
        forms = [f for f in exc.get(lemma, []) if usable(f)]
        if forms:
            out.append(f"{lemma},A")
            for form in forms:
                deg = "+Deg=S" if form.endswith("st") else "+Deg=C" if form.endswith("r") else ""
                out.append(f"{form},{lemma},A{deg}")
            continue
        flx = adj_paradigm(lemma)
        out.append(f"{lemma},A+FLX={flx}" if flx else f"{lemma},A")


def emit_verbs(out, lemmas, exc, irregular):
    for lemma in lemmas:
        if lemma in SKIP_VERBS:
            continue
        flx, s3, past, ger = verb_paradigm(lemma)
        forms = [f for f in exc.get(lemma, []) if usable(f)]
        if lemma not in irregular and not forms:
            out.append(f"{lemma},V+FLX={flx}")
            continue
        pts, pps, gers, s3s = [], [], [], []
        if lemma in irregular:
            pts, pps = list(irregular[lemma][0]), list(irregular[lemma][1])
        for form in forms:
            if form in pts or form in pps:
                continue
            if form.endswith("ing"):
                gers.append(form)
            elif form.endswith("s") and not form.endswith("ss"):
                s3s.append(form)
            else:
                if lemma not in irregular:
                    pts.append(form)
                    pps.append(form)
        pts = pts or [past]
        pps = pps or [past]
        gers = gers or [ger]
        s3s = s3s or [s3]
        out.append(f"{lemma},V+Tense=INF")
        out.append(f"{lemma},{lemma},V+Tense=PR")
        for f in dict.fromkeys(s3s):
            out.append(f"{f},{lemma},V+Tense=PR+Pers=3+Nb=s")
        for f in dict.fromkeys(pts):
            out.append(f"{f},{lemma},V+Tense=PT")
        for f in dict.fromkeys(pps):
            out.append(f"{f},{lemma},V+Tense=PP")
        for f in dict.fromkeys(gers):
            out.append(f"{f},{lemma},V+Tense=G")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("wordnet_dir", type=pathlib.Path)
    ap.add_argument("-o", "--output", type=pathlib.Path, default=DATA / "modern.dic")
    args = ap.parse_args()
    wn = args.wordnet_dir

    nouns = sorted({l for l in read_index(wn / "index.noun") if usable(l)})
    adjs = sorted({l for l in read_index(wn / "index.adj") if usable(l)})
    verbs = sorted({l for l in read_index(wn / "index.verb") if usable(l)})
    advs = sorted({l for l in read_index(wn / "index.adv") if usable(l)})
    irregular = read_irregulars(DATA / "irregular_verbs.tsv")
    verbs = sorted(set(verbs) | set(irregular))

    out = [
        "# version: wordnet-3.0/1",
        "# Contemporary English base lexicon, generated by tools/gen_modern_lexicon.py",
        "# from WordNet 3.0 (Copyright 2006 Princeton University, WordNet license).",
    ]
    out.append("# nouns")
    emit_nouns(out, nouns, read_exc(wn / "noun.exc"), read_person_nouns(wn / "index.sense"))
    out.append("# adjectives")
    emit_adjectives(out, adjs, read_exc(wn / "adj.exc"))
    out.append("# verbs")
    emit_verbs(out, verbs, read_exc(wn / "verb.exc"), irregular)
    out.append("# adverbs")
    out.extend(f"{a},ADV" for a in advs)

    seen = set()
    lines = []
    for line in out:
        if line.startswith("#") or line not in seen:
            seen.add(line)
            lines.append(line)
    args.output.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} lines to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
