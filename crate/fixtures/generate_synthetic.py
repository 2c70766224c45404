#!/usr/bin/env python3
"""Regenerates the synthetic CoNLL-U corpus, label sidecar and lexicon.

The sentences are built from templates whose dependency arcs are written
out by hand, so the output is deterministic and needs no parser:

    python3 fixtures/generate_synthetic.py

writes synthetic.conllu, synthetic.labels.tsv and synthetic.hin.tsv next
to this script.
"""

import itertools
import os

HERE = os.path.dirname(os.path.abspath(__file__))
N_SENTENCES = 240

PEOPLE = ["boy", "girl", "teacher", "doctor", "farmer", "child", "woman", "student", "driver", "singer"]
ADJS = ["cute", "tall", "young", "old", "happy", "clever", "quiet", "busy"]
TRANSITIVE = [("eating", "eat"), ("reading", "read"), ("buying", "buy"), ("washing", "wash"),
              ("cooking", "cook"), ("writing", "write"), ("painting", "paint"), ("carrying", "carry")]
OBJECTS = ["apple", "book", "letter", "rice", "bread", "picture", "bag", "kite"]
PLACES = [("in", "car"), ("at", "station"), ("in", "garden"), ("near", "river"),
          ("on", "bus"), ("at", "market"), ("in", "room"), ("near", "school")]
INTRANSITIVE = [("slept", "sleep"), ("waited", "wait"), ("laughed", "laugh"), ("danced", "dance"),
                ("sang", "sing"), ("played", "play")]
NEEDS = [("Needs", "need"), ("Wants", "want"), ("Asks", "ask")]
CROWDS = [["a", "few"], ["many"], ["some"], ["two"]]
TIMES = ["morning", "evening", "night", "afternoon", "winter", "summer"]
PLURALS = ["men", "women", "children", "students", "birds", "dogs"]

# Full-coverage English -> romanized Hindi word list (case-folded keys).
WORDS = {
    "the": "yeh", "a": "ek", "is": "hai", "are": "hain", "there": "wahan", "to": "ko",
    "and": "aur", "very": "bahut", "someone": "kisiko", "few": "kuch", "many": "anek",
    "some": "thode", "two": "do", "morning": "subah", "evening": "shaam",
    "night": "raat", "afternoon": "dopahar", "winter": "sardi", "summer": "garmi",
    "boy": "ladka", "girl": "ladki", "teacher": "adhyapak", "doctor": "vaidya",
    "farmer": "kisaan", "child": "baccha", "woman": "aurat", "student": "chhatra",
    "driver": "chaalak", "singer": "gaayak",
    "cute": "pyaara", "tall": "lamba", "young": "jawaan", "old": "boodha", "happy": "khush",
    "clever": "chatur", "quiet": "shaant", "busy": "vyast",
    "eating": "khaata", "reading": "padhta", "buying": "khareedta", "washing": "dhota",
    "cooking": "pakaata", "writing": "likhta", "painting": "rangta", "carrying": "uthaata",
    "eat": "khaana", "read": "padhna", "buy": "khareedna", "wash": "dhona", "cook": "pakaana",
    "write": "likhna", "paint": "rangna", "carry": "uthaana",
    "apple": "seb", "book": "kitaab", "letter": "patr", "rice": "chaawal", "bread": "roti",
    "picture": "tasveer", "bag": "thaila", "kite": "patang",
    "in": "mein", "at": "par", "near": "paas", "on": "upar",
    "car": "gaadi", "station": "steshan", "garden": "bageecha", "river": "nadi", "bus": "gaadiyaan",
    "market": "bazaar", "room": "kamra", "school": "vidyalay",
    "slept": "soya", "waited": "ruka", "laughed": "hansa", "danced": "naacha", "sang": "gaaya",
    "played": "khela", "needs": "chahiye", "wants": "chahta", "asks": "poochhta",
    "men": "aadmi", "women": "auratein", "children": "bacche", "students": "chhatron",
    "birds": "panchhi", "dogs": "kutte",
}

# Phrase entries exercise longest-match lookup.
PHRASES = {
    "in the car": "gaadi mein",
    "in the garden": "bageeche mein",
    "at the market": "bazaar mein",
    "is eating": "kha raha hai",
    "is reading": "padh raha hai",
    "there are": "wahan hain",
}


class Sentence:
    def __init__(self):
        self.tokens = []  # (form, lemma, upos, xpos, head, deprel)

    def add(self, form, upos, xpos, head, deprel, lemma=None):
        self.tokens.append((form, lemma or form.lower(), upos, xpos, head, deprel))
        return len(self.tokens)

    def fix_head(self, index, head):
        form, lemma, upos, xpos, _, deprel = self.tokens[index - 1]
        self.tokens[index - 1] = (form, lemma, upos, xpos, head, deprel)


def cap(word, first):
    return word.capitalize() if first else word


def np(s, noun, head, rel, first, adj=None, det="the"):
    """Adds det (adj) noun; returns the noun index. Head of noun is `head`."""
    d = s.add(cap(det, first), "DET", "DT", 0, "det", det)
    a = s.add(adj, "ADJ", "JJ", 0, "amod") if adj else None
    n = s.add(noun, "NOUN", "NN", head, rel)
    s.fix_head(d, n)
    if a:
        s.fix_head(a, n)
    return n


def pp(s, prep, place, head):
    p = s.add(prep, "ADP", "IN", 0, "case")
    n = np(s, place, head, "nmod", False)
    s.fix_head(p, n)


def case1(i, with_pp=True):
    s = Sentence()
    verb, lemma = TRANSITIVE[i % len(TRANSITIVE)]
    subj = np(s, PEOPLE[i % len(PEOPLE)], 0, "nsubj", True, adj=ADJS[i % len(ADJS)])
    aux = s.add("is", "AUX", "VBZ", 0, "aux", "be")
    v = s.add(verb, "VERB", "VBG", 0, "root", lemma)
    s.fix_head(subj, v)
    s.fix_head(aux, v)
    np(s, OBJECTS[(i // 3) % len(OBJECTS)], v, "dobj", False)
    if with_pp:
        prep, place = PLACES[(i // 2) % len(PLACES)]
        pp(s, prep, place, v)
    s.add(".", "PUNCT", ".", v, "punct")
    return s


def case2_copula(i):
    s = Sentence()
    subj = np(s, PEOPLE[(i + 3) % len(PEOPLE)], 0, "nsubj", True)
    cop = s.add("is", "AUX", "VBZ", 0, "cop", "be")
    adv = s.add("very", "ADV", "RB", 0, "advmod")
    adj = s.add(ADJS[(i + 1) % len(ADJS)], "ADJ", "JJ", 0, "root")
    for t in (subj, cop, adv):
        s.fix_head(t, adj)
    s.add(".", "PUNCT", ".", adj, "punct")
    return s


def case2_intransitive(i):
    s = Sentence()
    verb, lemma = INTRANSITIVE[i % len(INTRANSITIVE)]
    subj = np(s, PEOPLE[(i + 5) % len(PEOPLE)], 0, "nsubj", True, adj=ADJS[(i + 2) % len(ADJS)])
    v = s.add(verb, "VERB", "VBD", 0, "root", lemma)
    s.fix_head(subj, v)
    prep, place = PLACES[(i + 3) % len(PLACES)]
    pp(s, prep, place, v)
    s.add(".", "PUNCT", ".", v, "punct")
    return s


def case3(i):
    s = Sentence()
    there = s.add("There", "PRON", "EX", 0, "expl", "there")
    are = s.add("are", "VERB", "VBP", 0, "root", "be")
    s.fix_head(there, are)
    mods = [s.add(w, "ADJ", "JJ", 0, "amod") for w in CROWDS[i % len(CROWDS)]]
    n = s.add(PLURALS[i % len(PLURALS)], "NOUN", "NNS", are, "nsubj")
    for m in mods:
        s.fix_head(m, n)
    prep, place = PLACES[(i + 1) % len(PLACES)]
    pp(s, prep, place, are)
    s.add(".", "PUNCT", ".", are, "punct")
    return s


def case4(i):
    s = Sentence()
    need, lemma = NEEDS[i % len(NEEDS)]
    root = s.add(need, "VERB", "VBZ", 0, "root", lemma)
    s.add("someone", "PRON", "NN", root, "dobj")
    to = s.add("to", "PART", "TO", 0, "mark")
    _, vlemma = TRANSITIVE[(i + 1) % len(TRANSITIVE)]
    v = s.add(vlemma, "VERB", "VB", root, "xcomp")
    s.fix_head(to, v)
    np(s, OBJECTS[(i + 2) % len(OBJECTS)], v, "dobj", False)
    s.add(".", "PUNCT", ".", root, "punct")
    return s


def coordination(i):
    s = Sentence()
    first = case1_clause(s, i, True)
    cc = s.add("and", "CCONJ", "CC", 0, "cc")
    second = case1_clause(s, i + 1, False)
    s.fix_head(cc, second)
    s.fix_head(second, first)
    s.add(".", "PUNCT", ".", first, "punct")
    return s


def case1_clause(s, i, first):
    """Adds `det noun is verb det object`, returns the verb index (head 0 / root)."""
    verb, lemma = TRANSITIVE[(i + 4) % len(TRANSITIVE)]
    subj = np(s, PEOPLE[(i + 7) % len(PEOPLE)], 0, "nsubj", first)
    aux = s.add("is", "AUX", "VBZ", 0, "aux", "be")
    v = s.add(verb, "VERB", "VBG", 0, "root" if first else "conj", lemma)
    s.fix_head(subj, v)
    s.fix_head(aux, v)
    np(s, OBJECTS[(i // 8 + 5) % len(OBJECTS)], v, "dobj", False)
    return v


def fragment(i):
    s = Sentence()
    p = s.add(["In", "At", "On"][i % 3], "ADP", "IN", 0, "case")
    d = s.add("the", "DET", "DT", 0, "det")
    a = s.add(ADJS[(i // 3) % len(ADJS)], "ADJ", "JJ", 0, "amod")
    n = s.add(TIMES[i % len(TIMES)], "NOUN", "NN", 0, "root")
    for t in (p, d, a):
        s.fix_head(t, n)
    s.add(".", "PUNCT", ".", n, "punct")
    return s


TEMPLATES = [
    lambda i: case1(i, True),
    coordination,
    case3,
    case4,
    case2_intransitive,
    case2_copula,
    lambda i: case1(i, True),
    coordination,
    fragment,
    coordination,
]


def main():
    labels = itertools.cycle(["positive", "negative", "neutral"])
    vocab = set()
    with open(os.path.join(HERE, "synthetic.conllu"), "w") as out, \
            open(os.path.join(HERE, "synthetic.labels.tsv"), "w") as lab:
        texts = set()
        seed = 0
        for i in range(N_SENTENCES):
            while True:
                s = TEMPLATES[i % len(TEMPLATES)](seed)
                seed += 1
                assert seed < 100000, "templates cannot produce enough distinct sentences"
                text = " ".join(t[0] for t in s.tokens)
                if text not in texts:
                    texts.add(text)
                    break
            sid = "syn-%04d" % (i + 1)
            out.write("# sent_id = %s\n" % sid)
            out.write("# text = %s\n" % text)
            for k, (form, lemma, upos, xpos, head, rel) in enumerate(s.tokens, 1):
                assert head != k, (sid, form)
                out.write("\t".join([str(k), form, lemma, upos, xpos, "_", str(head), rel, "_", "_"]) + "\n")
                if upos != "PUNCT":
                    vocab.add(form.lower())
            out.write("\n")
            if i % 4 != 3:
                lab.write("%s\t%s\n" % (sid, next(labels)))

    missing = sorted(vocab - set(WORDS))
    assert not missing, missing
    native = set(" ".join(list(WORDS.values()) + list(PHRASES.values())).split())
    clash = native & set(WORDS)
    assert not clash, clash

    with open(os.path.join(HERE, "synthetic.hin.tsv"), "w") as lex:
        lex.write("# Full-coverage romanized lexicon for synthetic.conllu\n")
        for en, hi in sorted(PHRASES.items()):
            lex.write("%s\t%s\n" % (en, hi))
        for en in sorted(vocab):
            lex.write("%s\t%s\n" % (en, WORDS[en]))


if __name__ == "__main__":
    main()
