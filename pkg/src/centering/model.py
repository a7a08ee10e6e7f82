"""Core discourse-model types shared by the segmenter, resolvers, and stats.

Entities, utterance units, attentional states, the segment stack, the two
salience hierarchies (grammatical function and expression type), and the two
transition taxonomies live here. Everything is a plain value; states are
immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .cda import GF, UNKNOWN, ExpType, Mention, Relation


class AnnotationError(Exception):
    """Annotation that is structurally valid CDA but semantically ill-formed."""


# ---------------------------------------------------------------------------
# agreement features

@dataclass(frozen=True)
class Features:
    gender: str = UNKNOWN   # m | f | n | ?
    number: str = UNKNOWN   # sg | pl | ?
    person: int = 3

    @classmethod
    def of(cls, m: Mention) -> "Features":
        return cls(gender=m.gender, number=m.number, person=m.person)


def join_value(a: str, b: str) -> Optional[str]:
    """Join two feature values; unknown is the identity, conflicts yield None."""
    if a == UNKNOWN:
        return b
    if b == UNKNOWN or a == b:
        return a
    return None


def join_features(a: Features, b: Features) -> Optional[Features]:
    gender = join_value(a.gender, b.gender)
    number = join_value(a.number, b.number)
    if gender is None or number is None or a.person != b.person:
        return None
    return Features(gender=gender, number=number, person=a.person)


def compatible(a: Features, b: Features) -> bool:
    return join_features(a, b) is not None


def sorts_compatible(a: Optional[str], b: Optional[str]) -> bool:
    return a is None or b is None or a == b


# ---------------------------------------------------------------------------
# entities

class Entity:
    """A discourse entity. Identity is the key; features accumulate by
    joining the features of every mention resolved to the entity."""

    __slots__ = ("key", "label", "features", "sort")

    def __init__(self, key: str, label: str, features: Features,
                 sort: Optional[str] = None):
        self.key = key
        self.label = label
        self.features = features
        self.sort = sort

    def absorb(self, m: Mention):
        joined = join_features(self.features, Features.of(m))
        if joined is None:
            raise AnnotationError(
                f"mention {m.id!r} has features incompatible with entity {self.label!r}")
        if not sorts_compatible(self.sort, m.sort):
            raise AnnotationError(
                f"mention {m.id!r} sort {m.sort!r} conflicts with entity {self.label!r} ({self.sort!r})")
        self.features = joined
        if self.sort is None:
            self.sort = m.sort

    def __repr__(self):
        return f"<{self.label}>"


# ---------------------------------------------------------------------------
# salience hierarchies

_GF_RANK = {
    GF.SUBJ: 0,
    GF.OBJ: 1,
    GF.OBJ2: 2,
    GF.OBLIQUE: 3,
    GF.POSSESSOR: 3,
    GF.OTHER: 3,
}

_EXP_RANK = {
    ExpType.ZERO: 0,
    ExpType.PRONOUN: 1,
    ExpType.POSS_PRONOUN: 1,
    ExpType.DEF_NP: 2,
    ExpType.INDEF_NP: 3,
}


def gf_rank(gf: GF) -> int:
    """SUBJECT > OBJECT > OBJECT2 > others; lower is more salient.
    The 'others' bucket ties and is broken by surface order downstream."""
    return _GF_RANK[gf]


def exp_rank(exp: ExpType) -> int:
    """Zero pronominal > pronoun (incl. possessive) > definite NP > indefinite NP."""
    return _EXP_RANK[exp]


# ---------------------------------------------------------------------------
# utterance units

class SegmentKind(Enum):
    TOP = "top"
    SPEECH = "speech"
    COMP = "comp"
    REL = "rel"


@dataclass
class UtteranceUnit:
    """A center-updating unit: one tensed (or verb-elided) clause plus any
    tenseless clauses merged into it, with mentions in surface order."""

    id: str
    clause_ids: tuple[str, ...]
    mentions: tuple[Mention, ...]
    level: int
    segment_kind: SegmentKind
    sentence_id: str
    index: int
    head_clause_id: str
    head_relation: Relation
    # Unit id of the immediately preceding conjunct when this unit heads a
    # conjunct; drives the zero-subject parallelism rule.
    parallel_with: Optional[str] = None

    def mention_clause(self, m: Mention) -> str:
        return m.clause_id


# ---------------------------------------------------------------------------
# attentional state

@dataclass(frozen=True)
class CfEntry:
    entity: Entity
    mention: Mention
    gf: GF


@dataclass(frozen=True)
class AttentionalState:
    """Salience snapshot after an utterance: the cf of that utterance, its
    center, and recency-ordered layers of entities from older utterances at
    the same level."""

    cf: tuple[CfEntry, ...] = ()
    cb: Optional[Entity] = None
    older: tuple[tuple[CfEntry, ...], ...] = ()

    def cf_entities(self) -> list[Entity]:
        return [e.entity for e in self.cf]


def cm(state: AttentionalState) -> tuple[Entity, ...]:
    """The maximally salient entities: the top-GF entity, plus the center
    when it is a different entity. Size is 1 or 2."""
    if not state.cf:
        raise ValueError("cm is undefined for an empty cf")
    top = state.cf[0].entity
    if state.cb is not None and state.cb is not top:
        return (top, state.cb)
    return (top,)


# ---------------------------------------------------------------------------
# transitions

class Transition(Enum):
    CHAIN = "CHAIN"
    ESTABLISH = "ESTABLISH"
    NULL = "NULL"


def classify_transition(prev_cb: Optional[Entity], cur_cb: Optional[Entity]) -> Transition:
    if cur_cb is None:
        return Transition.NULL
    if prev_cb is not None and prev_cb is cur_cb:
        return Transition.CHAIN
    return Transition.ESTABLISH


class BfpTransition(Enum):
    CONTINUE = "CONTINUE"
    RETAIN = "RETAIN"
    SMOOTH_SHIFT = "SMOOTH-SHIFT"
    ROUGH_SHIFT = "ROUGH-SHIFT"


BFP_ORDER = (BfpTransition.CONTINUE, BfpTransition.RETAIN,
             BfpTransition.SMOOTH_SHIFT, BfpTransition.ROUGH_SHIFT)


def classify_bfp(prev_cb: Optional[Entity], cur_cb: Optional[Entity],
                 cp: Optional[Entity]) -> Optional[BfpTransition]:
    """Four-way BFP label; a transition from a none Cb counts as a shift.
    Undefined (None) when the current utterance has no Cb."""
    if cur_cb is None:
        return None
    same_cb = prev_cb is not None and prev_cb is cur_cb
    same_cp = cp is not None and cp is cur_cb
    if same_cb:
        return BfpTransition.CONTINUE if same_cp else BfpTransition.RETAIN
    return BfpTransition.SMOOTH_SHIFT if same_cp else BfpTransition.ROUGH_SHIFT


# ---------------------------------------------------------------------------
# segment stack

@dataclass
class Frame:
    state: AttentionalState
    kind: SegmentKind
    accessible_on_pop: bool


@dataclass
class SegmentStack:
    """Simultaneously open centering levels. The bottom frame is the
    top-level discourse; speech frames are opaque once popped, comp and rel
    frames stay accessible (demoted)."""

    frames: list[Frame] = field(default_factory=lambda: [
        Frame(AttentionalState(), SegmentKind.TOP, True)])

    @property
    def top(self) -> Frame:
        return self.frames[-1]

    @property
    def depth(self) -> int:
        return len(self.frames) - 1

    def push(self, kind: SegmentKind):
        accessible = kind is not SegmentKind.SPEECH
        self.frames.append(Frame(self.top.state, kind, accessible))

    def pop(self) -> Frame:
        if len(self.frames) == 1:
            raise AnnotationError("segment pop with no open segment")
        return self.frames.pop()
