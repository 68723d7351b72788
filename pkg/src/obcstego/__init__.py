"""Optimal binary prefix codes for q-state data embedding."""

from .codebook import (
    Codebook,
    Codeword,
    build_obc,
    codeword_of_index,
    expected_length,
    index_of_codeword,
    min_redundancy,
    optimal_expected_length,
    state_probabilities,
)
from .coder import embed_bits, embed_message, extract_bits, extract_message, match_next_codeword
from .cover import CoverObject, StegoObject, apply_embedding, block_state, load_cover, realize_state

__version__ = "0.1.0"

__all__ = [
    "Codebook",
    "Codeword",
    "CoverObject",
    "StegoObject",
    "apply_embedding",
    "block_state",
    "build_obc",
    "codeword_of_index",
    "embed_bits",
    "embed_message",
    "expected_length",
    "extract_bits",
    "extract_message",
    "index_of_codeword",
    "load_cover",
    "match_next_codeword",
    "min_redundancy",
    "optimal_expected_length",
    "realize_state",
    "state_probabilities",
]
