"""Reader and writer for the CDA clause/mention annotation format.

A CDA file carries one document: its sentences, each sentence's clause tree,
and the mentions inside each clause. One record per line:

    #DOC <id>
    #SENT <id>
    #CL <id> parent=<id|-> rel=<matrix|conj|adj|comp-report|comp-nonreport|rel>
        tense=<t|u|e> [conn=<word>]
    M <id> exp=<zero|pro|poss|def|indef> gf=<subj|obj|obj2|obl|poss|other>
        [surf="<text>"] [gend=<m|f|n|?>] [num=<sg|pl|?>] [pers=<1|2|3>]
        [sort=<tag>] [ent=<gold-id>] [ante=<mention-id>]

Blank lines and lines starting with ``//`` are ignored. Clause order in the
file is surface order, and so is mention order within a clause; preposed
adjuncts therefore appear before their parent clause, which means parent
references may point forward within a sentence.

Conventions carried by the format rather than by extra keys:

* proper names are annotated ``exp=def`` (names pattern with definite NPs
  for salience purposes);
* ``tense=e`` marks a verb-elided conjunct, which counts as tensed;
* reflexive pronouns are recognized from their surface form (-self/-selves);
* ``ante=`` records an externally decided antecedent (e.g. a commonsense
  inference) as a pointer to an earlier mention; the resolver honors it
  instead of its own preferences and marks the result as an override;
* pleonastic pronouns carry ``sort=pleo`` and no ``ent=``.

Unknown keys are an error in strict mode and are ignored otherwise.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class Relation(Enum):
    MATRIX = "matrix"
    CONJ = "conj"
    ADJ = "adj"
    COMP_REPORT = "comp-report"
    COMP_NONREPORT = "comp-nonreport"
    REL = "rel"


class Tense(Enum):
    TENSED = "t"
    TENSELESS = "u"
    ELIDED = "e"


class ExpType(Enum):
    ZERO = "zero"
    PRONOUN = "pro"
    POSS_PRONOUN = "poss"
    DEF_NP = "def"
    INDEF_NP = "indef"


class GF(Enum):
    SUBJ = "subj"
    OBJ = "obj"
    OBJ2 = "obj2"
    OBLIQUE = "obl"
    POSSESSOR = "poss"
    OTHER = "other"


PRONOMINAL_TYPES = frozenset({ExpType.ZERO, ExpType.PRONOUN, ExpType.POSS_PRONOUN})

UNKNOWN = "?"


class CdaError(Exception):
    """Malformed CDA input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Mention:
    id: str
    exp: ExpType
    gf: GF
    surface: str = ""
    gender: str = UNKNOWN
    number: str = UNKNOWN
    person: int = 3
    sort: Optional[str] = None
    gold_entity: Optional[str] = None
    override_antecedent: Optional[str] = None
    # Derived from position after parse; never serialized.
    clause_id: str = field(default="", compare=False)
    sentence_id: str = field(default="", compare=False)

    @property
    def pronominal(self) -> bool:
        return self.exp in PRONOMINAL_TYPES

    @property
    def pleonastic(self) -> bool:
        return self.sort == "pleo"

    @property
    def reflexive(self) -> bool:
        s = self.surface.lower()
        return s.endswith("self") or s.endswith("selves")


@dataclass
class Clause:
    id: str
    parent: Optional[str]
    relation: Relation
    tense: Tense
    connective: Optional[str] = None
    mentions: list[Mention] = field(default_factory=list)

    @property
    def tensed(self) -> bool:
        """Elided-tensed conjuncts count as tensed."""
        return self.tense in (Tense.TENSED, Tense.ELIDED)


@dataclass
class Sentence:
    id: str
    clauses: list[Clause] = field(default_factory=list)

    def clause(self, clause_id: str) -> Clause:
        for c in self.clauses:
            if c.id == clause_id:
                return c
        raise KeyError(clause_id)


@dataclass
class Document:
    id: str
    sentences: list[Sentence] = field(default_factory=list)

    def mentions(self):
        for sent in self.sentences:
            for clause in sent.clauses:
                yield from clause.mentions


_CL_KEYS = {"parent", "rel", "tense", "conn"}
_M_KEYS = {"exp", "gf", "surf", "gend", "num", "pers", "sort", "ent", "ante"}
_GENDERS = {"m", "f", "n", UNKNOWN}
_NUMBERS = {"sg", "pl", UNKNOWN}


def _enum_value(enum_cls, token, what, line):
    for member in enum_cls:
        if member.value == token:
            return member
    raise CdaError(f"bad {what} value {token!r}", line)


def _split_kv(tokens, allowed, strict, line):
    pairs = {}
    for tok in tokens:
        if "=" not in tok:
            raise CdaError(f"expected key=value, got {tok!r}", line)
        key, value = tok.split("=", 1)
        if key not in allowed:
            if strict:
                raise CdaError(f"unknown key {key!r}", line)
            continue
        if key in pairs:
            raise CdaError(f"duplicate key {key!r}", line)
        pairs[key] = value
    return pairs


def parse_cda(text: str, strict: bool = True) -> Document:
    """Parse CDA text into a Document, or raise CdaError with a line number.

    On any error no partial document is returned.
    """
    doc: Optional[Document] = None
    sent: Optional[Sentence] = None
    clause: Optional[Clause] = None
    mention_ids: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise CdaError(f"cannot tokenize: {exc}", lineno) from None
        tag = tokens[0]

        if tag == "#DOC":
            if doc is not None:
                raise CdaError("second #DOC line; one document per file", lineno)
            if len(tokens) != 2:
                raise CdaError("#DOC takes exactly one id", lineno)
            doc = Document(id=tokens[1])
        elif tag == "#SENT":
            if doc is None:
                raise CdaError("#SENT before #DOC", lineno)
            if len(tokens) != 2:
                raise CdaError("#SENT takes exactly one id", lineno)
            if any(s.id == tokens[1] for s in doc.sentences):
                raise CdaError(f"duplicate sentence id {tokens[1]!r}", lineno)
            sent = Sentence(id=tokens[1])
            doc.sentences.append(sent)
            clause = None
        elif tag == "#CL":
            if sent is None:
                raise CdaError("#CL before #SENT", lineno)
            if len(tokens) < 2:
                raise CdaError("#CL needs an id", lineno)
            cid = tokens[1]
            if any(c.id == cid for c in sent.clauses):
                raise CdaError(f"duplicate clause id {cid!r} in sentence {sent.id!r}", lineno)
            kv = _split_kv(tokens[2:], _CL_KEYS, strict, lineno)
            for req in ("parent", "rel", "tense"):
                if req not in kv:
                    raise CdaError(f"#CL missing required key {req!r}", lineno)
            relation = _enum_value(Relation, kv["rel"], "rel", lineno)
            tense = _enum_value(Tense, kv["tense"], "tense", lineno)
            parent = None if kv["parent"] == "-" else kv["parent"]
            if relation is Relation.MATRIX and parent is not None:
                raise CdaError("matrix clause must have parent=-", lineno)
            if relation is not Relation.MATRIX and parent is None:
                raise CdaError(f"{relation.value} clause needs a parent", lineno)
            clause = Clause(id=cid, parent=parent, relation=relation,
                            tense=tense, connective=kv.get("conn"))
            sent.clauses.append(clause)
        elif tag == "M":
            if clause is None:
                raise CdaError("mention record outside a clause", lineno)
            if len(tokens) < 2:
                raise CdaError("M needs an id", lineno)
            mid = tokens[1]
            if mid in mention_ids:
                raise CdaError(
                    f"duplicate mention id {mid!r} (first on line {mention_ids[mid]})", lineno)
            mention_ids[mid] = lineno
            kv = _split_kv(tokens[2:], _M_KEYS, strict, lineno)
            for req in ("exp", "gf"):
                if req not in kv:
                    raise CdaError(f"M missing required key {req!r}", lineno)
            exp = _enum_value(ExpType, kv["exp"], "exp", lineno)
            gf = _enum_value(GF, kv["gf"], "gf", lineno)
            gender = kv.get("gend", UNKNOWN)
            if gender not in _GENDERS:
                raise CdaError(f"bad gend value {gender!r}", lineno)
            number = kv.get("num", UNKNOWN)
            if number not in _NUMBERS:
                raise CdaError(f"bad num value {number!r}", lineno)
            pers_tok = kv.get("pers", "3")
            if pers_tok not in ("1", "2", "3"):
                raise CdaError(f"bad pers value {pers_tok!r}", lineno)
            surface = kv.get("surf", "")
            if exp is ExpType.ZERO and surface:
                raise CdaError("zero mention must have empty surface", lineno)
            if exp is ExpType.POSS_PRONOUN and gf is not GF.POSSESSOR:
                raise CdaError("possessive pronoun requires gf=poss", lineno)
            m = Mention(id=mid, exp=exp, gf=gf, surface=surface, gender=gender,
                        number=number, person=int(pers_tok), sort=kv.get("sort"),
                        gold_entity=kv.get("ent"),
                        override_antecedent=kv.get("ante"),
                        clause_id=clause.id, sentence_id=sent.id)
            clause.mentions.append(m)
        else:
            raise CdaError(f"unknown record type {tag!r}", lineno)

    if doc is None:
        raise CdaError("no #DOC record found")
    if not doc.sentences:
        raise CdaError("document has no sentences")
    _check_structure(doc, mention_ids)
    return doc


def _check_structure(doc: Document, mention_lines: dict[str, int]):
    for sent in doc.sentences:
        if not sent.clauses:
            raise CdaError(f"sentence {sent.id!r} has no clauses")
        matrix = [c for c in sent.clauses if c.relation is Relation.MATRIX]
        if len(matrix) != 1:
            raise CdaError(
                f"sentence {sent.id!r} has {len(matrix)} matrix clauses, expected exactly 1")
        by_id = {c.id: c for c in sent.clauses}
        for c in sent.clauses:
            if c.parent is not None and c.parent not in by_id:
                raise CdaError(
                    f"clause {c.id!r} in sentence {sent.id!r} references missing parent {c.parent!r}")
        for c in sent.clauses:
            seen = {c.id}
            cur = c
            while cur.parent is not None:
                if cur.parent in seen:
                    raise CdaError(
                        f"parent cycle at clause {c.id!r} in sentence {sent.id!r}")
                seen.add(cur.parent)
                cur = by_id[cur.parent]
    for m in doc.mentions():
        if m.override_antecedent is not None and m.override_antecedent not in mention_lines:
            raise CdaError(
                f"mention {m.id!r} references missing antecedent {m.override_antecedent!r}",
                mention_lines.get(m.id))


def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def serialize_cda(doc: Document) -> str:
    """Render a Document back to CDA text; parse(serialize(doc)) == doc."""
    lines = [f"#DOC {doc.id}"]
    for sent in doc.sentences:
        lines.append(f"#SENT {sent.id}")
        for clause in sent.clauses:
            parts = [f"#CL {clause.id}",
                     f"parent={clause.parent if clause.parent is not None else '-'}",
                     f"rel={clause.relation.value}",
                     f"tense={clause.tense.value}"]
            if clause.connective is not None:
                conn = clause.connective
                parts.append(f"conn={_quote(conn) if ' ' in conn else conn}")
            lines.append(" ".join(parts))
            for m in clause.mentions:
                parts = [f"M {m.id}", f"exp={m.exp.value}", f"gf={m.gf.value}"]
                if m.surface:
                    parts.append(f"surf={_quote(m.surface)}")
                if m.gender != UNKNOWN:
                    parts.append(f"gend={m.gender}")
                if m.number != UNKNOWN:
                    parts.append(f"num={m.number}")
                if m.person != 3:
                    parts.append(f"pers={m.person}")
                if m.sort is not None:
                    parts.append(f"sort={m.sort}")
                if m.gold_entity is not None:
                    parts.append(f"ent={m.gold_entity}")
                if m.override_antecedent is not None:
                    parts.append(f"ante={m.override_antecedent}")
                lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def load_cda(path, strict: bool = True) -> Document:
    with open(path, encoding="utf-8") as handle:
        return parse_cda(handle.read(), strict=strict)
