import itertools

import pytest

from centering.cda import ExpType, GF, UNKNOWN
from centering.model import (AttentionalState, BfpTransition, CfEntry, Entity,
                             Features, SegmentKind, SegmentStack, Transition,
                             classify_bfp, classify_transition, cm, exp_rank,
                             gf_rank, join_features, join_value)
from util import mention


def ent(label, gend="f", num="sg"):
    return Entity(f"ent:{label}", label, Features(gender=gend, number=num))


def entry(entity, gf="subj", exp="def", mid="mx"):
    return CfEntry(entity, mention(mid, exp, gf, surf=entity.label), GF(gf))


# ---------------------------------------------------------------------------
# hierarchies

def test_gf_order():
    assert gf_rank(GF.SUBJ) == 0
    assert gf_rank(GF.OBJ) == 1
    assert gf_rank(GF.OBJ2) == 2
    assert gf_rank(GF.OBLIQUE) == gf_rank(GF.POSSESSOR) == gf_rank(GF.OTHER)
    assert gf_rank(GF.OBJ2) < gf_rank(GF.OBLIQUE)


def test_exp_order():
    assert exp_rank(ExpType.ZERO) == 0
    assert exp_rank(ExpType.PRONOUN) == 1
    assert exp_rank(ExpType.POSS_PRONOUN) == exp_rank(ExpType.PRONOUN)
    assert exp_rank(ExpType.DEF_NP) == 2
    assert exp_rank(ExpType.INDEF_NP) == 3


# ---------------------------------------------------------------------------
# feature join

def test_join_unknown_is_identity():
    for v in ("m", "f", "n", UNKNOWN):
        assert join_value(UNKNOWN, v) == v
        assert join_value(v, UNKNOWN) == v


def test_join_properties():
    values = ("m", "f", "n", UNKNOWN)
    for a, b in itertools.product(values, repeat=2):
        assert join_value(a, b) == join_value(b, a)          # commutative
        assert join_value(a, a) == a                          # idempotent
    for a, b, c in itertools.product(values, repeat=3):
        left = join_value(a, b)
        right = join_value(b, c)
        lhs = join_value(left, c) if left is not None else None
        rhs = join_value(a, right) if right is not None else None
        assert lhs == rhs                                     # associative


def test_join_conflict():
    assert join_value("m", "f") is None
    assert join_features(Features(gender="m"), Features(gender="f")) is None
    assert join_features(Features(number="sg"), Features(number="pl")) is None
    assert join_features(Features(person=1), Features(person=3)) is None
    joined = join_features(Features(gender="f"), Features(number="pl"))
    assert joined == Features(gender="f", number="pl")


# ---------------------------------------------------------------------------
# cm

def test_cm_subject_center_converges():
    babar = ent("Babar", gend="m")
    baker = ent("Baker", gend="m")
    state = AttentionalState(cf=(entry(babar, "subj", "pro"),
                                 entry(baker, "obj")), cb=babar)
    assert cm(state) == (babar,)


def test_cm_nonsubject_center_diverges():
    babar = ent("Babar", gend="m")
    baker = ent("Baker", gend="m")
    state = AttentionalState(cf=(entry(baker, "subj"),
                                 entry(babar, "obj", "pro")), cb=babar)
    assert cm(state) == (baker, babar)


def test_cm_singleton_without_cb():
    x = ent("X")
    assert cm(AttentionalState(cf=(entry(x),), cb=None)) == (x,)


def test_cm_empty_cf_is_an_error():
    with pytest.raises(ValueError):
        cm(AttentionalState())


def test_cm_determinacy_rule():
    a, b = ent("A"), ent("B")
    converged = AttentionalState(cf=(entry(a, "subj"), entry(b, "obj")), cb=a)
    assert len(cm(converged)) == 1
    diverged = AttentionalState(cf=(entry(a, "subj"), entry(b, "obj")), cb=b)
    assert len(cm(diverged)) == 2


# ---------------------------------------------------------------------------
# transitions

def test_transition_table_exhaustive():
    a, b = ent("A"), ent("B")
    cases = {
        (None, None): Transition.NULL,
        (None, a): Transition.ESTABLISH,
        (a, None): Transition.NULL,
        (a, a): Transition.CHAIN,
        (a, b): Transition.ESTABLISH,
        (b, a): Transition.ESTABLISH,
    }
    for (prev, cur), expected in cases.items():
        assert classify_transition(prev, cur) is expected


def test_bfp_transition_table_exhaustive():
    a, b = ent("A"), ent("B")
    # (cb equal to prev?, cb equal to cp?)
    assert classify_bfp(a, a, a) is BfpTransition.CONTINUE
    assert classify_bfp(a, a, b) is BfpTransition.RETAIN
    assert classify_bfp(b, a, a) is BfpTransition.SMOOTH_SHIFT
    assert classify_bfp(b, a, b) is BfpTransition.ROUGH_SHIFT
    # transitions from a none cb count as shifts
    assert classify_bfp(None, a, a) is BfpTransition.SMOOTH_SHIFT
    assert classify_bfp(None, a, b) is BfpTransition.ROUGH_SHIFT
    assert classify_bfp(a, None, a) is None


# ---------------------------------------------------------------------------
# segment stack

def test_stack_speech_frames_are_opaque():
    stack = SegmentStack()
    assert stack.depth == 0 and stack.top.kind is SegmentKind.TOP
    stack.push(SegmentKind.SPEECH)
    assert stack.top.accessible_on_pop is False
    stack.push(SegmentKind.COMP)
    assert stack.top.accessible_on_pop is True
    stack.push(SegmentKind.REL)
    assert stack.top.accessible_on_pop is True
    assert stack.depth == 3
    for _ in range(3):
        stack.pop()
    with pytest.raises(Exception):
        stack.pop()
