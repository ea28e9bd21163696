"""Mid-air gesture authentication: DTW template features and per-user SVMs."""

import json as _json

from ._airgate import (
    AuthSystem,
    DataError,
    Sample,
    UsageError,
    compute_eer,
    content_hash,
    detect_corners,
    dtw_distance,
    dtw_distance_1d,
    feature_names,
    gestures,
    kfold_eer,
    read_samples,
    set_thread_count,
    write_samples,
)
from ._airgate import generate_corpus as _generate_corpus

__all__ = [
    "AuthSystem",
    "DataError",
    "Sample",
    "UsageError",
    "compute_eer",
    "content_hash",
    "detect_corners",
    "dtw_distance",
    "dtw_distance_1d",
    "feature_names",
    "generate_corpus",
    "gestures",
    "kfold_eer",
    "read_samples",
    "set_thread_count",
    "write_samples",
]


def generate_corpus(seed=42, **config):
    """Synthetic corpus. Keyword arguments are generator config keys, e.g. n_users=4."""
    return _generate_corpus(_json.dumps(config), seed)
