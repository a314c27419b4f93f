from negatives.io import file_checksum, read_negative_sets, write_negative_sets
from negatives.sampler import (
    NegativeDraw,
    NegativeSet,
    Provenance,
    bucket_of,
    gen_random_negatives,
    gen_tmn,
    generate_negative_sets,
)

__all__ = [
    "NegativeDraw",
    "NegativeSet",
    "Provenance",
    "bucket_of",
    "file_checksum",
    "gen_random_negatives",
    "gen_tmn",
    "generate_negative_sets",
    "read_negative_sets",
    "write_negative_sets",
]
