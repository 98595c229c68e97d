"""Exact persistence modules over gap-ordered parameters, with contact-flavoured fixtures."""

from .bottleneck import bottleneck_distance, candidate_costs
from .contact import (ContactEnvelope, FeketeBracket, NotSubadditiveError, check_triangle,
                      concatenate, fekete_limit, iterate, m_hg, osc, osc_pair, oscbar, tilde_c)
from .exact import (INF, Field, Matrix, ShapeError, compose, format_rational, in_column_span,
                    inverse, parse_rational, rank)
from .gapped import (GappedModule, GappedSequence, cbar_spectral_invariant, check_gapped,
                     gapped_spectral_invariant, index_shift, is_admissible_sequence,
                     is_almost_optimal, is_normalized, leq_gap, normalize_sequence,
                     normalized_sequences, restrict, restriction_spectral_invariant,
                     shift_gapped, validate_gapped)
from .persistence import (COLIMIT, Barcode, Interval, PersistenceModule, ValidationError,
                          Violation, barcode, check, composite_map, dual, mirror, rank_invariant,
                          shift_values, spectral_invariant, validate, verify_interleaving)
from .s2 import S2FixtureSpec, build_s2_fixture, s2_reference

__all__ = [
    "INF", "COLIMIT", "Field", "Matrix", "ShapeError", "ValidationError", "Violation",
    "rank", "compose", "in_column_span", "inverse", "parse_rational", "format_rational",
    "PersistenceModule", "Interval", "Barcode", "validate", "check", "composite_map",
    "rank_invariant", "barcode", "mirror", "dual", "shift_values", "spectral_invariant",
    "verify_interleaving", "bottleneck_distance", "candidate_costs",
    "GappedModule", "GappedSequence", "leq_gap", "validate_gapped", "check_gapped",
    "is_admissible_sequence", "is_almost_optimal", "is_normalized", "index_shift",
    "normalize_sequence", "restrict", "normalized_sequences", "gapped_spectral_invariant",
    "restriction_spectral_invariant", "cbar_spectral_invariant", "shift_gapped",
    "ContactEnvelope", "osc", "osc_pair", "m_hg", "oscbar", "concatenate", "iterate",
    "tilde_c", "check_triangle", "fekete_limit", "FeketeBracket", "NotSubadditiveError",
    "S2FixtureSpec", "build_s2_fixture", "s2_reference",
]
