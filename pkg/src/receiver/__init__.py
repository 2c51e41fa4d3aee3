"""
Receiver Module

MMSE and zero-forcing combining, SINR evaluation and the gain-matrix
reformulation used by power control.
"""

from src.receiver.combining import (
    Combiner,
    CombinerKind,
    SinrReport,
    build_A_b,
    mmse_combiner,
    normalized_signal_interference,
    sinr_from_terms,
    sinr_report,
    split_sinr_terms,
    zf_combiner,
)


__all__ = [
    "Combiner",
    "CombinerKind",
    "SinrReport",
    "build_A_b",
    "mmse_combiner",
    "normalized_signal_interference",
    "sinr_from_terms",
    "sinr_report",
    "split_sinr_terms",
    "zf_combiner",
]
