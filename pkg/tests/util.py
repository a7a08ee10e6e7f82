"""Shared builders and randomized document generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

from centering.cda import (Clause, Document, ExpType, GF, Mention, Relation,
                           Sentence, Tense)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIXTURE_NAMES = sorted(p.stem for p in FIXTURES.glob("*.cda"))


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.cda")


def mention(mid, exp, gf, surf="", gend="?", num="?", pers=3, sort=None,
            ent=None, ante=None) -> Mention:
    return Mention(id=mid, exp=ExpType(exp), gf=GF(gf), surface=surf,
                   gender=gend, number=num, person=pers, sort=sort,
                   gold_entity=ent, override_antecedent=ante)


def clause(cid, parent, rel, tense, mentions=(), conn=None) -> Clause:
    return Clause(id=cid, parent=parent, relation=Relation(rel),
                  tense=Tense(tense), connective=conn, mentions=list(mentions))


def document(doc_id, sentences) -> Document:
    doc = Document(id=doc_id,
                   sentences=[Sentence(id=sid, clauses=list(cls))
                              for sid, cls in sentences])
    for sent in doc.sentences:
        for cl in sent.clauses:
            for m in cl.mentions:
                m.clause_id = cl.id
                m.sentence_id = sent.id
    return doc


_SURFACES = ["", "the baker", 'say "hi"', "back\\slash", "café π",
             "a blueberry pie", "Jim's party", "it's"]
_SORTS = [None, None, "person", "thing", "time", "pleo"]


def random_document(rng: random.Random, max_sentences=4, max_clauses=4,
                    max_mentions=3) -> Document:
    """A structurally valid document with adversarial field values; used for
    round-trip checks, so any parseable configuration is fair game."""
    counter = 0
    sentences = []
    all_mention_ids: list[str] = []
    for si in range(rng.randint(1, max_sentences)):
        clauses = []
        ids = []
        for ci in range(rng.randint(1, max_clauses)):
            cid = f"c{ci}"
            if ci == 0:
                rel, parent, tense = "matrix", None, "t"
            else:
                rel = rng.choice(["conj", "adj", "comp-report",
                                  "comp-nonreport", "rel"])
                parent = rng.choice(ids)
                tense = rng.choice(["t", "u", "e"])
            conn = rng.choice([None, "and", "but", "even before"])
            ms = []
            for _ in range(rng.randint(0, max_mentions)):
                counter += 1
                mid = f"m{counter}"
                exp = rng.choice(["zero", "pro", "poss", "def", "indef"])
                gf = "poss" if exp == "poss" else rng.choice(
                    ["subj", "obj", "obj2", "obl", "poss", "other"])
                surf = "" if exp == "zero" else rng.choice(_SURFACES)
                ante = rng.choice(all_mention_ids) if all_mention_ids and \
                    rng.random() < 0.15 else None
                ms.append(mention(
                    mid, exp, gf, surf=surf,
                    gend=rng.choice(["m", "f", "n", "?"]),
                    num=rng.choice(["sg", "pl", "?"]),
                    pers=rng.choice([1, 2, 3]),
                    sort=rng.choice(_SORTS),
                    ent=rng.choice([None, "A", "B", f"E{counter}"]),
                    ante=ante))
                all_mention_ids.append(mid)
            clauses.append(clause(cid, parent, rel, tense, ms, conn))
            ids.append(cid)
        sentences.append((f"s{si}", clauses))
    return document(f"doc{rng.randint(0, 999)}", sentences)


def random_tree_document(rng: random.Random, max_sentences=4,
                         max_clauses=5) -> Document:
    """Documents whose clause order is a preorder walk of the tree, the way
    real annotation comes out; suitable for segmenting and resolving."""
    counter = 0
    sentences = []
    for si in range(rng.randint(1, max_sentences)):
        spine = []
        clauses = []
        for ci in range(rng.randint(1, max_clauses)):
            cid = f"c{ci}"
            if ci == 0:
                rel, parent, tense = "matrix", None, "t"
            else:
                parent = rng.choice(spine)
                spine = spine[:spine.index(parent) + 1]
                rel = rng.choice(["conj", "adj", "comp-report",
                                  "comp-nonreport", "rel"])
                tense = rng.choice(["t", "t", "u", "e"])
            ms = []
            for gi in range(rng.randint(0, 2)):
                counter += 1
                exp = rng.choice(["def", "def", "indef", "pro", "poss", "zero"])
                gf = "poss" if exp == "poss" else (
                    "subj" if gi == 0 else rng.choice(["obj", "obl", "other"]))
                ms.append(mention(
                    f"m{counter}", exp, gf,
                    surf="" if exp == "zero" else f"w{counter}",
                    gend="f", num="sg",
                    ent=rng.choice([None, "A", "B", "C"])))
            clauses.append(clause(cid, parent, rel, tense, ms))
            spine.append(cid)
        sentences.append((f"s{si}", clauses))
    return document("treedoc", sentences)


def random_speech_document(rng: random.Random, n_sentences=6) -> Document:
    """Documents whose quotes realize entities seen nowhere else, for
    stack-opacity checks. Returns (document, {quote_tag: entity labels})."""
    sentences = []
    quote_entities: dict[str, set[str]] = {}
    counter = 0
    for si in range(n_sentences):
        sid = f"s{si}"
        counter += 1
        ms = [mention(f"m{counter}", "def", "subj", surf=f"G{si % 3}",
                      gend="f", num="sg", sort="person", ent=f"G{si % 3}")]
        if si > 0 and rng.random() < 0.7:
            counter += 1
            ms.append(mention(f"m{counter}", "pro", "obj", surf="her",
                              gend="f", num="sg", sort="person"))
        clauses = [clause("c0", None, "matrix", "t", ms)]
        if rng.random() < 0.6:
            tag = f"q{si}"
            quote_entities[tag] = set()
            for qi in range(rng.randint(1, 2)):
                counter += 1
                label = f"Q{si}x{qi}"
                quote_entities[tag].add(label)
                qms = [mention(f"m{counter}", "def", "subj", surf=label,
                               gend="f", num="sg", sort="person", ent=label)]
                if rng.random() < 0.5:
                    counter += 1
                    qms.append(mention(f"m{counter}", "pro", "obj", surf="her",
                                       gend="f", num="sg", sort="person"))
                rel = "comp-report" if qi == 0 else "conj"
                parent = "c0" if qi == 0 else f"c{qi}"
                clauses.append(clause(f"c{qi + 1}", parent, rel, "t", qms,
                                      conn=None if qi == 0 else "and"))
        sentences.append((sid, clauses))
    return document("speechdoc", sentences), quote_entities


def random_simple_document(rng: random.Random, n_sentences=4):
    """Single-clause sentences over two same-featured entities, ending in a
    bare pronoun probe; nothing can prune, so determinacy mirrors the size
    of the input cm."""
    entities = ["A", "B"]
    sentences = []
    counter = 0
    for si in range(n_sentences - 1):
        ms = []
        picks = rng.sample(entities, rng.randint(1, 2))
        for gi, ent in enumerate(picks):
            counter += 1
            exp = "pro" if si > 0 and rng.random() < 0.4 else "def"
            ms.append(mention(f"m{counter}", exp, "subj" if gi == 0 else "obj",
                              surf=ent.lower() if exp == "pro" else ent,
                              gend="f", num="sg", ent=ent))
        sentences.append((f"s{si}", [clause("c0", None, "matrix", "t", ms)]))
    counter += 1
    probe = mention(f"m{counter}", "pro", "subj", surf="she", gend="f", num="sg")
    sentences.append((f"s{n_sentences - 1}",
                      [clause("c0", None, "matrix", "t", [probe])]))
    return document("simple", sentences), probe.id
