"""Break annotated sentences into ordered, nested utterance units.

Every tensed (or verb-elided) clause that is a matrix, conjunct, or adjunct
becomes its own unit: conjuncts at the level where their conjunct chain
started, adjuncts at their superordinate clause's level. Tenseless clauses
never head a unit; their mentions merge into the nearest tensed ancestor's
unit. Tensed reported-speech complements open an opaque speech segment;
tensed nonreport complements and relative clauses open accessible embedded
segments. Unit order is surface (file) order, so a preposed adjunct precedes
its matrix clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cda import Clause, Document, Relation, Sentence
from .model import AnnotationError, SegmentKind, UtteranceUnit

_PUSH_KIND = {
    Relation.COMP_REPORT: SegmentKind.SPEECH,
    Relation.COMP_NONREPORT: SegmentKind.COMP,
    Relation.REL: SegmentKind.REL,
}


@dataclass(frozen=True)
class SegmentEvent:
    action: str            # "push" | "pop"
    kind: SegmentKind
    at_unit: str           # push fires before this unit, pop after it


@dataclass
class SegmentedDiscourse:
    doc_id: str
    units: list[UtteranceUnit] = field(default_factory=list)
    events: list[SegmentEvent] = field(default_factory=list)

    def pushes_at(self, unit_id: str) -> list[SegmentEvent]:
        return [e for e in self.events if e.action == "push" and e.at_unit == unit_id]

    def pops_at(self, unit_id: str) -> list[SegmentEvent]:
        return [e for e in self.events if e.action == "pop" and e.at_unit == unit_id]

    def unit_of_mention(self, mention_id: str) -> UtteranceUnit:
        for u in self.units:
            for m in u.mentions:
                if m.id == mention_id:
                    return u
        raise KeyError(mention_id)

    def unit_of_clause(self, sentence_id: str, clause_id: str) -> UtteranceUnit:
        for u in self.units:
            if u.sentence_id == sentence_id and clause_id in u.clause_ids:
                return u
        raise KeyError((sentence_id, clause_id))


def _clause_depth(clause: Clause, by_id: dict[str, Clause]) -> int:
    depth = 0
    cur = clause
    while cur.parent is not None:
        cur = by_id[cur.parent]
        depth += 1
    return depth


def _segment_sentence(sent: Sentence, start_level: int,
                      start_index: int) -> tuple[list[UtteranceUnit], list[SegmentEvent]]:
    by_id = {c.id: c for c in sent.clauses}
    positions = {c.id: i for i, c in enumerate(sent.clauses)}

    for c in sent.clauses:
        if c.relation is Relation.MATRIX and not c.tensed:
            raise AnnotationError(
                f"tenseless matrix clause {c.id!r} in sentence {sent.id!r}")
        if c.relation in _PUSH_KIND and c.parent is None:
            raise AnnotationError(
                f"{c.relation.value} clause {c.id!r} has no parent")

    def host(clause: Clause) -> Clause:
        # Nearest tensed ancestor-or-self; the unit a tenseless clause joins.
        cur = clause
        while not cur.tensed:
            cur = by_id[cur.parent]
        return cur

    levels: dict[str, int] = {}

    def level(clause: Clause) -> int:
        if clause.id in levels:
            return levels[clause.id]
        if clause.relation is Relation.MATRIX:
            lv = start_level
        elif clause.tensed and clause.relation in _PUSH_KIND:
            lv = level(by_id[clause.parent]) + 1
        else:
            # conj stays at the level where its chain started; adj at its
            # superordinate's level; tenseless clauses sit at their host's.
            lv = level(by_id[clause.parent])
        levels[clause.id] = lv
        return lv

    heads = [c for c in sent.clauses if c.tensed]
    units: list[UtteranceUnit] = []
    unit_by_head: dict[str, UtteranceUnit] = {}
    members: dict[str, list[Clause]] = {c.id: [c] for c in heads}
    for c in sent.clauses:
        if not c.tensed:
            members[host(c).id].append(c)

    for i, head in enumerate(heads):
        merged = sorted(members[head.id], key=lambda c: positions[c.id])
        mentions = tuple(m for c in merged for m in c.mentions)
        unit = UtteranceUnit(
            id=f"{sent.id}:{head.id}",
            clause_ids=tuple(c.id for c in merged),
            mentions=mentions,
            level=level(head),
            segment_kind=_enclosing_kind(head, by_id),
            sentence_id=sent.id,
            index=start_index + i,
            head_clause_id=head.id,
            head_relation=head.relation,
        )
        units.append(unit)
        unit_by_head[head.id] = unit

    for unit in units:
        head = by_id[unit.head_clause_id]
        if head.relation is Relation.CONJ:
            prev = host(by_id[head.parent])
            if prev.id in unit_by_head:
                unit.parallel_with = unit_by_head[prev.id].id

    # A segment covers the pushing clause's whole subtree in surface order:
    # push before the subtree's first unit (which may be a preposed adjunct
    # rather than the pushing clause itself), pop after its last.
    pushes_at: dict[str, list[tuple[int, SegmentEvent]]] = {}
    pops_at: dict[str, list[tuple[int, SegmentEvent]]] = {}
    for head in heads:
        if head.relation not in _PUSH_KIND:
            continue
        kind = _PUSH_KIND[head.relation]
        inside = [u for u in units
                  if _descends_from(by_id[u.head_clause_id], head, by_id)]
        first = min(inside, key=lambda u: positions[u.head_clause_id])
        last = max(inside, key=lambda u: positions[u.head_clause_id])
        depth = _clause_depth(head, by_id)
        pushes_at.setdefault(first.id, []).append(
            (depth, SegmentEvent("push", kind, first.id)))
        pops_at.setdefault(last.id, []).append(
            (depth, SegmentEvent("pop", kind, last.id)))

    # Outer segments push first and pop last when several share a unit.
    events: list[SegmentEvent] = []
    for unit in units:
        for _, e in sorted(pushes_at.get(unit.id, []), key=lambda d: d[0]):
            events.append(e)
        for _, e in sorted(pops_at.get(unit.id, []), key=lambda d: -d[0]):
            events.append(e)
    return units, events


def _enclosing_kind(clause: Clause, by_id: dict[str, Clause]) -> SegmentKind:
    cur = clause
    while cur is not None:
        if cur.tensed and cur.relation in _PUSH_KIND:
            return _PUSH_KIND[cur.relation]
        cur = by_id[cur.parent] if cur.parent is not None else None
    return SegmentKind.TOP


def _descends_from(clause: Clause, ancestor: Clause, by_id: dict[str, Clause]) -> bool:
    cur = clause
    while cur is not None:
        if cur.id == ancestor.id:
            return True
        cur = by_id[cur.parent] if cur.parent is not None else None
    return False


def segment_sentence(sent: Sentence, start_level: int = 0,
                     doc_id: str = "") -> SegmentedDiscourse:
    units, events = _segment_sentence(sent, start_level, 0)
    return SegmentedDiscourse(doc_id=doc_id, units=units, events=events)


def segment_document(doc: Document) -> SegmentedDiscourse:
    """Segment every sentence and concatenate the fragments. Segments open
    and close within their sentence (a quotation spanning several surface
    sentences is annotated as one CDA sentence), so each sentence starts at
    the top level."""
    out = SegmentedDiscourse(doc_id=doc.id)
    for sent in doc.sentences:
        units, events = _segment_sentence(sent, 0, len(out.units))
        out.units.extend(units)
        out.events.extend(events)
    return out
