"""Deterministic synthetic lexicons with Ukrainian-like inflection.

``synthetic_lexicon(n, seed)`` is prefix-stable: the first ``k`` entries of
a larger lexicon equal ``synthetic_lexicon(k, seed)``.  Surfaces of
different stems never collide, so a word's readings do not change as the
lexicon grows.
"""

from __future__ import annotations

import random

from .lexicon.entries import LexiconEntry

PARADIGMS = {
    "n1": ("а", [("а", "nom,sg"), ("и", "gen,sg"), ("і", "dat,sg"), ("у", "acc,sg"),
                 ("ою", "ins,sg"), ("и", "nom,pl"), ("ам", "dat,pl"), ("ами", "ins,pl"),
                 ("ах", "loc,pl")], "noun,fem"),
    "n2": ("", [("", "nom,sg"), ("а", "gen,sg"), ("у", "dat,sg"), ("ом", "ins,sg"),
                ("і", "loc,sg"), ("и", "nom,pl"), ("ів", "gen,pl"), ("ам", "dat,pl"),
                ("ами", "ins,pl")], "noun,masc"),
    "v1": ("ати", [("ати", "inf"), ("аю", "pres,1,sg"), ("аєш", "pres,2,sg"),
                   ("ає", "pres,3,sg"), ("аємо", "pres,1,pl"), ("аєте", "pres,2,pl"),
                   ("ають", "pres,3,pl")], "verb"),
    "a1": ("ий", [("ий", "masc,nom,sg"), ("ого", "masc,gen,sg"), ("ому", "masc,dat,sg"),
                  ("им", "masc,ins,sg"), ("а", "fem,nom,sg"), ("ої", "fem,gen,sg"),
                  ("е", "neut,nom,sg"), ("і", "nom,pl")], "adj"),
}

STANDALONE = [("і", "conj"), ("а", "conj"), ("в", "prep"), ("у", "prep"), ("з", "prep"),
              ("й", "conj"), ("о", "interj")]

CONSONANTS = "бвгджзклмнпрстфхцчшщ"
VOWELS = "аеиіоуюяєї"


def _stem(rng, length):
    out = [rng.choice(CONSONANTS)]
    while len(out) < length:
        out.append(rng.choice(VOWELS if out[-1] in CONSONANTS else CONSONANTS))
    # stems end in a consonant so that endings attach cleanly
    if out[-1] in VOWELS:
        out[-1] = rng.choice(CONSONANTS)
    return "".join(out)


def paradigm_entries(stem, pclass):
    lemma_end, forms, pos = PARADIGMS[pclass]
    lemma = stem + lemma_end
    return [LexiconEntry(stem + e, stem, e, lemma, tuple(f"{pos},{tags}".split(",")), pclass)
            for e, tags in forms]


def iter_entries(seed=0, mean_len=7.0, sd=2.0):
    rng = random.Random(seed)
    for surface, tag in STANDALONE:
        yield LexiconEntry(surface, "", surface, surface, (tag,), "")
    owners = {s: None for s, _ in STANDALONE}
    classes = list(PARADIGMS)
    i = 0
    while True:
        pclass = classes[i % len(classes)]
        length = min(24, max(2, round(rng.gauss(mean_len, sd))))
        stem = _stem(rng, length)
        entries = paradigm_entries(stem, pclass)
        surfaces = {e.surface for e in entries}
        if any(s in owners for s in surfaces):
            continue
        for s in surfaces:
            owners[s] = stem
        i += 1
        yield from entries


def synthetic_lexicon(n, seed=0):
    out = []
    for e in iter_entries(seed):
        if len(out) == n:
            break
        out.append(e)
    return out


def absent_probes(entries, count, seed=1, min_len=3, max_len=12, letters=CONSONANTS + VOWELS):
    """Random strings that are not surfaces of ``entries``."""
    rng = random.Random(seed)
    known = {e.surface.lower() for e in entries}
    out = []
    while len(out) < count:
        w = "".join(rng.choice(letters) for _ in range(rng.randint(min_len, max_len)))
        if w not in known:
            out.append(w)
    return out
