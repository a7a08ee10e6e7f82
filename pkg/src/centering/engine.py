"""Salience-driven centering: state updates, center assignment, and pronoun
resolution over segmented discourse.

The resolver interacts defeasible preferences with hard filters. Candidate
pools are tiered: the maximally salient entities of the input state first,
then the rest of its cf, then older layers by recency, then accessible lower
stack frames. Agreement, binding, and sortal filters prune every tier; the
top surviving tier decides the answer, with the parallelism tie-break
ordering indeterminate ties. Possessive pronouns prefer the nearest
compatible mention to their left inside the unit before falling back to the
tiers, and zero subjects of parallel conjuncts copy the preceding conjunct's
subject. An ``ante=`` annotation overrides everything.

Only third-person, non-pleonastic pronominals are resolution targets and
center-eligible; everything else just realizes its (gold or fresh) entity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cda import GF, Document, ExpType, Mention
from .model import (AnnotationError, AttentionalState, CfEntry, Entity,
                    Features, SegmentKind, SegmentStack, Transition,
                    classify_transition, cm, compatible, exp_rank, gf_rank,
                    sorts_compatible)
from .segmenter import SegmentedDiscourse, segment_document


class EntityRegistry:
    """One entity per gold id; gold-free identity-bearing mentions introduce
    fresh entities keyed by the introducing mention."""

    def __init__(self):
        self._entities: dict[str, Entity] = {}

    def for_gold(self, gold_id: str, m: Mention) -> Entity:
        key = f"ent:{gold_id}"
        if key not in self._entities:
            self._entities[key] = Entity(key, gold_id, Features.of(m), m.sort)
        else:
            self._entities[key].absorb(m)
        return self._entities[key]

    def fresh(self, m: Mention) -> Entity:
        key = f"new:{m.id}"
        if key not in self._entities:
            self._entities[key] = Entity(key, key, Features.of(m), m.sort)
        return self._entities[key]


def is_resolvable(m: Mention) -> bool:
    return m.pronominal and m.person == 3 and not m.pleonastic


def referential(m: Mention) -> bool:
    return not m.pleonastic


@dataclass
class PronounResolution:
    mention: Mention
    unit_id: str
    entity: Entity
    ranked: list[tuple[Entity, str]]      # (candidate, tier label), best first
    strength: str                          # determinate | weak | unresolved
    used_override: bool = False
    para_applied: bool = False
    rule: str = "tiers"                    # tiers | locality | zero-parallel | override
    filters_used: list[str] = field(default_factory=list)
    pool: list[Entity] = field(default_factory=list)
    divergent: bool = False

    @property
    def gold(self) -> Optional[str]:
        return self.mention.gold_entity


@dataclass
class UnitRecord:
    """One trace row per utterance unit, in discourse order."""
    unit_id: str
    index: int
    level: int
    segment_kind: SegmentKind
    sentence_id: str
    cm_in: list[Entity]
    cb_in: Optional[Entity]
    cb_out: Optional[Entity]
    transition: Transition
    pronouns: list[PronounResolution]
    state_in: AttentionalState
    state_out: AttentionalState
    events_before: list[str] = field(default_factory=list)
    events_after: list[str] = field(default_factory=list)


@dataclass
class CenteringTrace:
    doc_id: str
    records: list[UnitRecord]
    assignments: dict[str, Entity]         # mention id -> entity

    def record_for(self, unit_id: str) -> UnitRecord:
        for r in self.records:
            if r.unit_id == unit_id:
                return r
        raise KeyError(unit_id)

    def resolution_for(self, mention_id: str) -> PronounResolution:
        for r in self.records:
            for p in r.pronouns:
                if p.mention.id == mention_id:
                    return p
        raise KeyError(mention_id)


# ---------------------------------------------------------------------------
# hard filters

def agreement_ok(pronoun: Mention, candidate: Entity) -> bool:
    return compatible(Features.of(pronoun), candidate.features)


def sortal_ok(pronoun: Mention, candidate: Entity) -> bool:
    return sorts_compatible(pronoun.sort, candidate.sort)


def binding_ok(pronoun: Mention, candidate: Entity, unit, assignments) -> bool:
    """Clause-scoped disjointness. A non-possessor pronoun cannot corefer
    with a definite NP elsewhere in its clause, nor with a co-argument
    (subject/object/object2) unless the pronoun is reflexive. Possessors are
    exempt on both sides: a possessor does not bind its clause mates."""
    if pronoun.gf is GF.POSSESSOR:
        return True
    argument_gfs = (GF.SUBJ, GF.OBJ, GF.OBJ2)
    for m in unit.mentions:
        if m.id == pronoun.id or m.clause_id != pronoun.clause_id:
            continue
        if m.gf is GF.POSSESSOR:
            continue
        other = assignments.get(m.id)
        if other is None or other is not candidate:
            continue
        if m.exp is ExpType.DEF_NP:
            return False
        if pronoun.gf in argument_gfs and m.gf in argument_gfs and not pronoun.reflexive:
            return False
    return True


_FILTERS = (("agreement", agreement_ok), ("sortal", sortal_ok))


def _filter_candidates(pronoun, entries, unit, assignments, filters_used):
    survivors = []
    for entry in entries:
        ok = True
        for name, check in _FILTERS:
            if not check(pronoun, entry.entity):
                if name not in filters_used:
                    filters_used.append(name)
                ok = False
                break
        if ok and not binding_ok(pronoun, entry.entity, unit, assignments):
            if "binding" not in filters_used:
                filters_used.append("binding")
            ok = False
        if ok:
            survivors.append(entry)
    return survivors


# ---------------------------------------------------------------------------
# candidate tiers

def candidate_tiers(stack: SegmentStack) -> list[tuple[str, list[CfEntry]]]:
    """Pool tiers for the current frame's state: cm, rest of cf, older layers
    by recency, then lower frames top-down. Frames at or below a speech frame
    are never offered: a speech boundary blocks the downward walk. Entities
    repeat only at their best tier."""
    state = stack.top.state
    tiers: list[tuple[str, list[CfEntry]]] = []
    if state.cf:
        cm_entities = cm(state)
        by_entity = {e.entity: e for e in state.cf}
        tiers.append(("cm", [by_entity[e] for e in cm_entities if e in by_entity]))
        rest = [e for e in state.cf if e.entity not in cm_entities]
        if rest:
            tiers.append(("cf", rest))
    for layer in state.older:
        if layer:
            tiers.append(("older", list(layer)))
    for frame in reversed(stack.frames[:-1]):
        if frame.kind is SegmentKind.SPEECH:
            break
        if frame.state.cf:
            tiers.append(("frame", list(frame.state.cf)))
    seen: set[str] = set()
    deduped = []
    for label, entries in tiers:
        fresh = [e for e in entries if e.entity.key not in seen]
        seen.update(e.entity.key for e in fresh)
        if fresh:
            deduped.append((label, fresh))
    return deduped


def _realization_gf(entity: Entity, state: AttentionalState) -> Optional[GF]:
    for entry in state.cf:
        if entry.entity is entity:
            return entry.gf
    for layer in state.older:
        for entry in layer:
            if entry.entity is entity:
                return entry.gf
    return None


def para_tiebreak(tied: list[Entity], pronoun_gf: GF,
                  state: AttentionalState) -> tuple[list[Entity], bool]:
    """Order an indeterminate tie by structural parallelism: entities whose
    most recent realization shares the pronoun's grammatical function come
    first; the rest keep cf order. Returns (ordering, whether PARA decided)."""
    matched = [e for e in tied if _realization_gf(e, state) is pronoun_gf]
    unmatched = [e for e in tied if _realization_gf(e, state) is not pronoun_gf]
    return matched + unmatched, bool(matched) and bool(unmatched)


# ---------------------------------------------------------------------------
# resolution

def _resolve_from_tiers(pronoun, unit, stack, assignments, res: PronounResolution,
                        registry: EntityRegistry):
    tiers = candidate_tiers(stack)
    state = stack.top.state
    survivors_by_tier = []
    for label, entries in tiers:
        kept = _filter_candidates(pronoun, entries, unit, assignments, res.filters_used)
        if kept:
            survivors_by_tier.append((label, kept))
    res.pool = [e.entity for _, entries in survivors_by_tier for e in entries]
    if not survivors_by_tier:
        res.strength = "unresolved"
        res.entity = registry.fresh(pronoun)
        return
    top_label, top = survivors_by_tier[0]
    if len(top) == 1:
        res.strength = "determinate"
        ordered = [top[0].entity]
    else:
        ordered, para = para_tiebreak([e.entity for e in top], pronoun.gf, state)
        res.strength = "weak"
        res.para_applied = para
    res.ranked = [(e, top_label) for e in ordered]
    for label, entries in survivors_by_tier[1:]:
        res.ranked.extend((e.entity, label) for e in entries)
    res.entity = res.ranked[0][0]


def _resolve_possessive(pronoun, unit, stack, assignments, res, registry):
    """Possessive locality: nearest compatible mention to the left within the
    unit wins, regardless of grammatical function; tier fallback otherwise."""
    res.rule = "locality"
    left: list[CfEntry] = []
    for m in unit.mentions:
        if m.id == pronoun.id:
            break
        entity = assignments.get(m.id)
        if entity is not None:
            left.append(CfEntry(entity, m, m.gf))
    left.reverse()  # nearest first
    kept = _filter_candidates(pronoun, left, unit, assignments, res.filters_used)
    seen = set()
    local = []
    for entry in kept:
        if entry.entity.key not in seen:
            seen.add(entry.entity.key)
            local.append(entry.entity)
    if local:
        res.strength = "determinate"
        res.entity = local[0]
        res.ranked = [(e, "local") for e in local]
        res.pool = list(local)
        return
    _resolve_from_tiers(pronoun, unit, stack, assignments, res, registry)
    res.rule = "tiers"


def _resolve_zero_parallel(pronoun, unit, prev_unit_record, res) -> bool:
    """Zero subject of a parallel conjunct copies the preceding conjunct's
    subject entity."""
    if prev_unit_record is None:
        return False
    subject = None
    for m in prev_unit_record["unit"].mentions:
        if m.gf is GF.SUBJ:
            subject = prev_unit_record["assignments"].get(m.id)
            if subject is not None:
                break
    if subject is None:
        return False
    res.rule = "zero-parallel"
    res.strength = "determinate"
    res.entity = subject
    res.ranked = [(subject, "parallel")]
    res.pool = [subject]
    return True


def compute_cb(prev_cb: Optional[Entity], unit, assignments) -> Optional[Entity]:
    """The center of a unit, in the absolute reading: only pronominal
    realizations output it. Chaining wins: if any eligible pronominal
    resolves to the previous center, the center carries over. Otherwise the
    best-placed pronominal's referent is the new center; a possessive only
    provides it when no non-possessive pronominal is present. ``prev_cb``
    here is the current level's center; transition labels are computed
    against the linearly previous unit instead."""
    eligible = [(i, m) for i, m in enumerate(unit.mentions)
                if is_resolvable(m) and assignments.get(m.id) is not None]
    if not eligible:
        return None
    if prev_cb is not None:
        for _, m in eligible:
            if assignments[m.id] is prev_cb:
                return prev_cb
    non_poss = [(i, m) for i, m in eligible if m.exp is not ExpType.POSS_PRONOUN]
    pool = non_poss or eligible
    best = min(pool, key=lambda im: (gf_rank(im[1].gf), im[0]))
    return assignments[best[1].id]


def update_state(prev: AttentionalState, unit, assignments) -> AttentionalState:
    """Fold a unit into the attentional state: cf ordered by grammatical
    function, then expression type, then surface order; entities of the
    previous cf that were not re-realized demote into the older layers."""
    entries: dict[str, tuple] = {}
    for i, m in enumerate(unit.mentions):
        entity = assignments.get(m.id)
        if entity is None:
            continue
        key = (gf_rank(m.gf), exp_rank(m.exp), i)
        if entity.key not in entries or key < entries[entity.key][0]:
            entries[entity.key] = (key, CfEntry(entity, m, m.gf))
    cf = tuple(e for _, e in sorted(entries.values(), key=lambda p: p[0]))
    cf_keys = {e.entity.key for e in cf}
    layers = []
    demoted = tuple(e for e in prev.cf if e.entity.key not in cf_keys)
    if demoted:
        layers.append(demoted)
    for layer in prev.older:
        kept = tuple(e for e in layer if e.entity.key not in cf_keys)
        if kept:
            layers.append(kept)
    cb = compute_cb(prev.cb, unit, assignments)
    return AttentionalState(cf=cf, cb=cb, older=tuple(layers))


# ---------------------------------------------------------------------------
# the discourse fold

def run_discourse(segmented: SegmentedDiscourse) -> CenteringTrace:
    """Left-to-right fold over units and segment events. A push copies the
    current state as the embedded input; popping a speech segment restores
    the pre-push state, while popping a comp or rel segment resumes it with
    the embedded cf appended below as an accessible, demoted layer. The
    transition label compares each unit's center with the linearly previous
    unit's."""
    registry = EntityRegistry()
    stack = SegmentStack()
    assignments: dict[str, Entity] = {}
    records: list[UnitRecord] = []
    unit_info: dict[str, dict] = {}
    prev_cb: Optional[Entity] = None

    for unit in segmented.units:
        events_before = []
        for event in segmented.pushes_at(unit.id):
            stack.push(event.kind)
            events_before.append(f"push {event.kind.value}")
        if stack.depth != unit.level:
            raise AnnotationError(
                f"unit {unit.id!r} at level {unit.level} but stack depth is {stack.depth}")

        state_in = stack.top.state
        cm_in = list(cm(state_in)) if state_in.cf else []

        # Identity-bearing mentions first, so binding sees clause mates.
        for m in unit.mentions:
            if not referential(m):
                continue
            if not is_resolvable(m):
                assignments[m.id] = (registry.for_gold(m.gold_entity, m)
                                     if m.gold_entity else registry.fresh(m))

        pronouns: list[PronounResolution] = []
        prev_conjunct = unit_info.get(unit.parallel_with) if unit.parallel_with else None
        for m in unit.mentions:
            if not is_resolvable(m):
                continue
            res = PronounResolution(mention=m, unit_id=unit.id,
                                    entity=None, ranked=[], strength="unresolved")
            if m.override_antecedent is not None and \
                    m.override_antecedent in assignments:
                res.entity = assignments[m.override_antecedent]
                res.ranked = [(res.entity, "override")]
                res.pool = [res.entity]
                res.strength = "determinate"
                res.used_override = True
                res.rule = "override"
            elif m.exp is ExpType.ZERO and m.gf is GF.SUBJ and \
                    _resolve_zero_parallel(m, unit, prev_conjunct, res):
                pass
            elif m.gf is GF.POSSESSOR:
                _resolve_possessive(m, unit, stack, assignments, res, registry)
            else:
                _resolve_from_tiers(m, unit, stack, assignments, res, registry)
            assignments[m.id] = res.entity
            if res.strength != "unresolved":
                res.entity.absorb(m)
            if m.gold_entity is not None and res.entity.key != f"ent:{m.gold_entity}":
                res.divergent = True
            pronouns.append(res)

        state_out = update_state(state_in, unit, assignments)
        stack.top.state = state_out
        transition = classify_transition(prev_cb, state_out.cb)

        events_after = []
        for event in segmented.pops_at(unit.id):
            frame = stack.pop()
            events_after.append(f"pop {event.kind.value}")
            if frame.accessible_on_pop:
                host = stack.top.state
                host_keys = {e.entity.key for e in host.cf}
                layer = tuple(e for e in frame.state.cf
                              if e.entity.key not in host_keys)
                if layer:
                    stack.top.state = AttentionalState(
                        cf=host.cf, cb=host.cb, older=(layer,) + host.older)

        record = UnitRecord(
            unit_id=unit.id, index=unit.index, level=unit.level,
            segment_kind=unit.segment_kind, sentence_id=unit.sentence_id,
            cm_in=cm_in, cb_in=prev_cb, cb_out=state_out.cb,
            transition=transition, pronouns=pronouns,
            state_in=state_in, state_out=state_out,
            events_before=events_before, events_after=events_after)
        records.append(record)
        unit_info[unit.id] = {"unit": unit, "assignments": assignments}
        prev_cb = state_out.cb

    return CenteringTrace(doc_id=segmented.doc_id, records=records,
                          assignments=assignments)


def analyze(doc: Document) -> CenteringTrace:
    return run_discourse(segment_document(doc))
