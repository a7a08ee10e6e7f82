"""Clause-based centering: segmentation of complex sentences into
center-updating utterance units, salience-driven pronoun resolution with
hard linguistic filters, a Brennan–Friedman–Pollard baseline, and
antecedent-locality statistics, all over the CDA annotation format."""

from .cda import (CdaError, Clause, Document, ExpType, GF, Mention, Relation,
                  Sentence, Tense, load_cda, parse_cda, serialize_cda)
from .model import (AnnotationError, AttentionalState, BfpTransition, CfEntry,
                    Entity, Features, SegmentKind, SegmentStack, Transition,
                    UtteranceUnit, classify_bfp, classify_transition, cm,
                    exp_rank, gf_rank)
from .segmenter import (SegmentedDiscourse, SegmentEvent, segment_document,
                        segment_sentence)
from .engine import (CenteringTrace, PronounResolution, UnitRecord, analyze,
                     compute_cb, para_tiebreak, run_discourse, update_state)
from .bfp import BfpAnchor, BfpTrace, ComparisonReport, bfp_run, compare_models
from .stats import (ChiSquare, LocalityHistogram, chi_square_binary,
                    locality_histogram, possessive_share)

__version__ = "0.1.0"
