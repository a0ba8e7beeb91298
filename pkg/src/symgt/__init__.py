"""Symmetric group testing: ternary observations, design criteria, codes and decoders."""

from .decoding_sim import AmbiguityError, ErrorRateReport, TrialConfig, decode_exhaustive, decode_inclusion, run_trials
from .design_bounds import AlphaResult, BoundReport, alpha, alpha_opt
from .info_measures import AGT, GGT, SGT, TestModel, mi_oracle, mutual_information
from .superimposed_codes import bch_parity_check, min_distance_at_least_5, verify_disjunct, verify_separable
from .ternary_algebra import is_included, observation, word_sum

__version__ = "0.1.0"
