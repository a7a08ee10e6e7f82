"""Brennan–Friedman–Pollard reference algorithm over the same utterance
units, plus the per-pronoun divergence report against the salience engine.

The baseline is a flat fold: it ignores segment events and hierarchy. Each
unit's pronouns take referents from the previous cf list; every
filter-passing assignment is scored by the transition it yields
(CONTINUE > RETAIN > SMOOTH-SHIFT > ROUGH-SHIFT) with the center defined the
Constraint-3 way, as the highest-ranked previous-cf member realized in the
unit. Rule 1 (a realized center must be realized by a pronoun when the unit
has any) filters anchors; when it eliminates every candidate anchor the
ranking proceeds without it, which keeps units like a name-plus-pronoun
clause resolvable. Agreement and binding filters are shared with the
salience engine.
"""

from __future__ import annotations

from itertools import product
from dataclasses import dataclass, field
from typing import Optional

from .cda import Document, Mention
from .engine import (CenteringTrace, EntityRegistry, binding_ok,
                     is_resolvable, referential, run_discourse)
from .model import (BFP_ORDER, BfpTransition, Entity, Features, Transition,
                    classify_bfp, compatible, gf_rank, sorts_compatible)
from .segmenter import SegmentedDiscourse, segment_document


@dataclass
class BfpAnchor:
    unit_id: str
    cb: Optional[Entity]
    cp: Optional[Entity]
    cf: list[Entity]
    assignment: dict[str, Entity]          # pronoun mention id -> entity
    transition: Optional[BfpTransition]
    unresolved: list[str] = field(default_factory=list)


@dataclass
class BfpTrace:
    doc_id: str
    records: list[BfpAnchor]
    assignments: dict[str, Entity]

    def resolution_for(self, mention_id: str) -> Optional[Entity]:
        return self.assignments.get(mention_id)


def _passes(pronoun: Mention, entity: Entity) -> bool:
    return (compatible(Features.of(pronoun), entity.features)
            and sorts_compatible(pronoun.sort, entity.sort))


def _cf_of(unit, assignments) -> list[Entity]:
    ranked: dict[str, tuple] = {}
    for i, m in enumerate(unit.mentions):
        entity = assignments.get(m.id)
        if entity is None:
            continue
        key = (gf_rank(m.gf), i)
        if entity.key not in ranked or key < ranked[entity.key][0]:
            ranked[entity.key] = (key, entity)
    return [e for _, e in sorted(ranked.values(), key=lambda p: p[0])]


def bfp_resolve(unit, prev_cf: list[Entity], prev_cb: Optional[Entity],
                registry: EntityRegistry, assignments: dict[str, Entity]) -> BfpAnchor:
    """Pick the unit's highest-ranked anchor. ``assignments`` must already
    cover the unit's non-pronominal mentions and is extended in place."""
    pronouns = [m for m in unit.mentions if is_resolvable(m)]
    anchor = BfpAnchor(unit_id=unit.id, cb=None, cp=None, cf=[],
                       assignment={}, transition=None)

    candidates: dict[str, list[Entity]] = {}
    for p in pronouns:
        candidates[p.id] = [e for e in prev_cf if _passes(p, e)
                            and binding_ok(p, e, unit, assignments)]

    resolvable = [p for p in pronouns if candidates[p.id]]
    anchor.unresolved = [p.id for p in pronouns if not candidates[p.id]]
    for pid in anchor.unresolved:
        pron = next(m for m in pronouns if m.id == pid)
        assignments[pid] = registry.fresh(pron)

    prev_index = {e.key: i for i, e in enumerate(prev_cf)}

    def score(combo: dict[str, Entity], rule1: bool):
        trial = dict(assignments)
        trial.update(combo)
        # pronoun-pronoun disjointness inside a clause
        for p in resolvable:
            if not binding_ok(p, trial[p.id], unit, trial):
                return None
        realized = {e.key for m in unit.mentions
                    if (e := trial.get(m.id)) is not None}
        cb = next((e for e in prev_cf if e.key in realized), None)
        if rule1 and pronouns and cb is not None and \
                cb.key not in {e.key for e in combo.values()}:
            return None
        cf = _cf_of(unit, trial)
        cp = cf[0] if cf else None
        transition = classify_bfp(prev_cb, cb, cp)
        rank = BFP_ORDER.index(transition) if transition else len(BFP_ORDER)
        cb_rank = prev_index.get(cb.key, len(prev_cf)) if cb else len(prev_cf)
        lex = tuple(prev_index.get(combo[p.id].key, len(prev_cf))
                    for p in resolvable)
        return (rank, cb_rank, lex), cb, cp, cf, transition

    combos = [dict(zip([p.id for p in resolvable], picks))
              for picks in product(*(candidates[p.id] for p in resolvable))]
    best = None
    for strict_rule1 in (True, False):
        scored = []
        for combo in combos:
            result = score(combo, rule1=strict_rule1)
            if result is not None:
                scored.append((result, combo))
        if scored:
            best = min(scored, key=lambda sc: sc[0][0])
            break
    if best is None:
        # No pronouns, or nothing survived: state still moves forward.
        for p in resolvable:
            if p.id not in assignments:
                anchor.unresolved.append(p.id)
                assignments[p.id] = registry.fresh(p)
        cf = _cf_of(unit, assignments)
        realized = {e.key for m in unit.mentions
                    if (e := assignments.get(m.id)) is not None}
        anchor.cb = next((e for e in prev_cf if e.key in realized), None)
        anchor.cf = cf
        anchor.cp = cf[0] if cf else None
        anchor.transition = classify_bfp(prev_cb, anchor.cb, anchor.cp)
        return anchor

    (_, cb, cp, cf, transition), combo = best
    assignments.update(combo)
    anchor.assignment = combo
    anchor.cb = cb
    anchor.cp = cp
    anchor.cf = cf
    anchor.transition = transition
    return anchor


def bfp_run(segmented: SegmentedDiscourse) -> BfpTrace:
    registry = EntityRegistry()
    assignments: dict[str, Entity] = {}
    records: list[BfpAnchor] = []
    prev_cf: list[Entity] = []
    prev_cb: Optional[Entity] = None
    for unit in segmented.units:
        for m in unit.mentions:
            if referential(m) and not is_resolvable(m):
                assignments[m.id] = (registry.for_gold(m.gold_entity, m)
                                     if m.gold_entity else registry.fresh(m))
        anchor = bfp_resolve(unit, prev_cf, prev_cb, registry, assignments)
        records.append(anchor)
        prev_cf = anchor.cf
        prev_cb = anchor.cb
    return BfpTrace(doc_id=segmented.doc_id, records=records,
                    assignments=assignments)


# ---------------------------------------------------------------------------
# divergence report

@dataclass
class PronounComparison:
    unit_id: str
    mention_id: str
    surface: str
    salience: str
    strength: str
    bfp: str
    gold: Optional[str]
    divergent: bool


@dataclass
class UnitComparison:
    unit_id: str
    transition: Transition
    bfp_transition: Optional[BfpTransition]


@dataclass
class ComparisonReport:
    doc_id: str
    pronouns: list[PronounComparison]
    units: list[UnitComparison]

    @property
    def divergences(self) -> list[PronounComparison]:
        return [row for row in self.pronouns if row.divergent]


def compare_models(doc: Document) -> ComparisonReport:
    """Run both models over the same segmentation and tabulate, pronoun by
    pronoun, the salience pick (with strength) against the BFP pick and the
    gold annotation."""
    segmented = segment_document(doc)
    salience: CenteringTrace = run_discourse(segmented)
    baseline: BfpTrace = bfp_run(segmented)
    pronouns = []
    for record in salience.records:
        for res in record.pronouns:
            bfp_entity = baseline.resolution_for(res.mention.id)
            bfp_label = bfp_entity.label if bfp_entity is not None else "-"
            pronouns.append(PronounComparison(
                unit_id=record.unit_id,
                mention_id=res.mention.id,
                surface=res.mention.surface or "0",
                salience=res.entity.label,
                strength=res.strength,
                bfp=bfp_label,
                gold=res.mention.gold_entity,
                divergent=res.entity.label != bfp_label))
    units = [UnitComparison(unit_id=r.unit_id, transition=r.transition,
                            bfp_transition=b.transition)
             for r, b in zip(salience.records, baseline.records)]
    return ComparisonReport(doc_id=doc.id, pronouns=pronouns, units=units)
