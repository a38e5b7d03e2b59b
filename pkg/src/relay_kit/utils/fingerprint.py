# relay-kit/src/relay_kit/utils/fingerprint.py

"""
Content hashes and seed derivation for reproducible runs.
"""

import hashlib
import json
from typing import TYPE_CHECKING, Any

import numpy as np

if TYPE_CHECKING:
    from ..schemas.network import Network


def canonical_json(payload: Any) -> str:
    """Serializes `payload` with sorted keys and no insignificant whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def content_hash(payload: Any) -> str:
    hasher = hashlib.sha256()
    hasher.update(canonical_json(payload).encode("utf-8"))
    return f"sha256:{hasher.hexdigest()}"


def network_hash(net: "Network") -> str:
    """
    A deterministic, content-addressable key for a network.

    Two networks hash equal iff their canonical documents are identical, so
    the hash together with a seed identifies a channel realization.
    """
    return content_hash(net.to_document().model_dump(mode="json"))


def derive_seed(seed: int, index: int) -> int:
    """
    The seed of Monte Carlo sample `index` within a run seeded by `seed`.

    Uses `SeedSequence` spawning keys, so streams for different indices are
    independent and the value does not depend on evaluation order.
    """
    sequence = np.random.SeedSequence([seed, index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
