"""Corpus statistics: antecedent locality at sentence and utterance
granularity, the possessive share of same-utterance antecedents, and a
binary goodness-of-fit chi-square utility.

Counting follows the gold annotation. A counted pronoun is a third-person,
non-pleonastic pronominal with a gold entity id; its antecedent is the
nearest preceding mention of the same gold entity. Nearest-preceding also
yields the coreferring-pronoun rule for free: when a sentence contains a set
of coreferring pronouns, only the first can have an intersentential
antecedent, so the set contributes at most one intersentential dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cda import Document, ExpType, Mention
from .segmenter import SegmentedDiscourse

SENTENCE_CATEGORIES = ("sameSentence", "prevSentence", "secondPrevSentence", "farther")
CLAUSE_CATEGORIES = ("sameUtterance", "prevOrSuperordinateSameSentence",
                     "prevUtterancePrevSentence", "other")


@dataclass
class LocalityHistogram:
    sentence: dict[str, int] = field(
        default_factory=lambda: {c: 0 for c in SENTENCE_CATEGORIES})
    clause: dict[str, int] = field(
        default_factory=lambda: {c: 0 for c in CLAUSE_CATEGORIES})
    discourse_new: int = 0      # gold-bearing pronouns with no preceding mention
    skipped_no_gold: int = 0    # pronominals that could not be counted
    same_utterance_possessive: int = 0

    @property
    def total(self) -> int:
        return sum(self.sentence.values())

    def percentages(self, which: str = "sentence") -> dict[str, float]:
        counts = self.sentence if which == "sentence" else self.clause
        total = self.total
        if total == 0:
            return {c: 0.0 for c in counts}
        return {c: 100.0 * n / total for c, n in counts.items()}

    def merge(self, other: "LocalityHistogram") -> "LocalityHistogram":
        merged = LocalityHistogram()
        for c in SENTENCE_CATEGORIES:
            merged.sentence[c] = self.sentence[c] + other.sentence[c]
        for c in CLAUSE_CATEGORIES:
            merged.clause[c] = self.clause[c] + other.clause[c]
        merged.discourse_new = self.discourse_new + other.discourse_new
        merged.skipped_no_gold = self.skipped_no_gold + other.skipped_no_gold
        merged.same_utterance_possessive = (self.same_utterance_possessive
                                            + other.same_utterance_possessive)
        return merged


def _ordered_mentions(doc: Document) -> list[Mention]:
    return list(doc.mentions())


def locality_histogram(doc: Document,
                       segmented: SegmentedDiscourse) -> LocalityHistogram:
    hist = LocalityHistogram()
    mentions = _ordered_mentions(doc)
    sentence_index = {s.id: i for i, s in enumerate(doc.sentences)}
    unit_of = {}
    for u in segmented.units:
        for m in u.mentions:
            unit_of[m.id] = u
    units_by_index = {u.index: u for u in segmented.units}

    def superordinate(unit) -> Optional[object]:
        sent = next(s for s in doc.sentences if s.id == unit.sentence_id)
        head = sent.clause(unit.head_clause_id)
        if head.parent is None:
            return None
        return segmented.unit_of_clause(unit.sentence_id, hosting_clause(sent, head.parent))

    def hosting_clause(sent, clause_id):
        clause = sent.clause(clause_id)
        while not clause.tensed:
            clause = sent.clause(clause.parent)
        return clause.id

    for i, m in enumerate(mentions):
        if not (m.pronominal and m.person == 3 and not m.pleonastic):
            continue
        if m.gold_entity is None:
            hist.skipped_no_gold += 1
            continue
        antecedent = None
        for j in range(i - 1, -1, -1):
            prior = mentions[j]
            if prior.gold_entity == m.gold_entity:
                antecedent = prior
                break
        if antecedent is None:
            hist.discourse_new += 1
            continue

        dist = sentence_index[m.sentence_id] - sentence_index[antecedent.sentence_id]
        if dist == 0:
            hist.sentence["sameSentence"] += 1
        elif dist == 1:
            hist.sentence["prevSentence"] += 1
        elif dist == 2:
            hist.sentence["secondPrevSentence"] += 1
        else:
            hist.sentence["farther"] += 1

        unit = unit_of[m.id]
        ante_unit = unit_of[antecedent.id]
        if ante_unit.index == unit.index:
            hist.clause["sameUtterance"] += 1
            if m.exp is ExpType.POSS_PRONOUN:
                hist.same_utterance_possessive += 1
        else:
            prev_unit = units_by_index.get(unit.index - 1)
            super_unit = superordinate(unit)
            same_sentence = ante_unit.sentence_id == unit.sentence_id
            is_prev = prev_unit is not None and ante_unit.index == prev_unit.index
            is_super = super_unit is not None and ante_unit.index == super_unit.index
            if same_sentence and (is_prev or is_super):
                hist.clause["prevOrSuperordinateSameSentence"] += 1
            elif is_prev and dist == 1:
                hist.clause["prevUtterancePrevSentence"] += 1
            else:
                hist.clause["other"] += 1
    return hist


def possessive_share(doc: Document,
                     segmented: SegmentedDiscourse) -> Optional[float]:
    """Fraction of same-utterance-antecedent pronouns that are possessive;
    None (undefined) when there are no same-utterance cases."""
    hist = locality_histogram(doc, segmented)
    denominator = hist.clause["sameUtterance"]
    if denominator == 0:
        return None
    return hist.same_utterance_possessive / denominator


_BANDS = (
    (10.828, "p<.001"),
    (6.635, "p<.01"),
    (3.841, "p<.05"),
    (2.706, ".05<p<.10"),
)


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    band: str


def chi_square_binary(count_a: int, count_b: int) -> ChiSquare:
    """Goodness of fit of a binary split against a uniform expectation,
    one degree of freedom."""
    total = count_a + count_b
    if total <= 0:
        raise ValueError("chi_square_binary needs a positive total")
    expected = total / 2
    statistic = ((count_a - expected) ** 2 + (count_b - expected) ** 2) / expected
    band = "n.s."
    for threshold, label in _BANDS:
        if statistic >= threshold:
            band = label
            break
    return ChiSquare(statistic=statistic, band=band)
