# relay-kit/tests/test_utils.py

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from conftest import make_network

from relay_kit.contracts.errors import PreconditionError
from relay_kit.schemas.context import AnalysisContext
from relay_kit.utils.fingerprint import canonical_json, content_hash, derive_seed, network_hash
from relay_kit.utils.linalg import block_toeplitz, exact_rank
from relay_kit.utils.serialization import safe_serialize
from relay_kit.utils.templating import render_report


# ==============================================================================
# Exact rank
# ==============================================================================


@pytest.mark.parametrize(
    "matrix, rank",
    [
        ([[1, 0], [0, 1]], 2),
        ([[1, 2], [2, 4]], 1),
        ([[0, 0], [0, 0]], 0),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], 2),
        ([[0, 1, 0], [0, 0, 1], [0, 0, 0], [1, 0, 0]], 3),
        ([[2, 4, 6, 8]], 1),
        ([], 0),
    ],
)
def test_exact_rank_of_small_integer_matrices(matrix, rank):
    assert exact_rank(matrix) == rank


def test_exact_rank_accepts_integer_arrays_and_integral_floats():
    perm = np.eye(50, dtype=np.int64)[::-1]
    assert exact_rank(perm) == 50
    assert exact_rank(np.array([[1.0, 2.0], [3.0, 6.0]])) == 1


def test_exact_rank_of_the_hilbert_matrix():
    # Ill-conditioned in floating point, full rank over the rationals.
    n = 12
    hilbert = [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]
    assert exact_rank(hilbert) == n
    hilbert[-1] = [2 * x for x in hilbert[0]]
    assert exact_rank(hilbert) == n - 1


def test_exact_rank_rejects_non_integral_floats():
    with pytest.raises(PreconditionError, match="integral"):
        exact_rank([[0.5, 1.0]])
    with pytest.raises(PreconditionError):
        exact_rank([[1 + 1j]])


def test_block_toeplitz_layout():
    blocks = [np.full((2, 1), 1), np.full((2, 1), 2)]
    out = block_toeplitz(blocks, 3)
    assert out.shape == (6, 3)
    assert out[:, 0].tolist() == [1, 1, 2, 2, 0, 0]
    assert out[:, 1].tolist() == [0, 0, 1, 1, 2, 2]
    assert out[:, 2].tolist() == [0, 0, 0, 0, 1, 1]
    with pytest.raises(PreconditionError):
        block_toeplitz([], 2)


# ==============================================================================
# Fingerprints
# ==============================================================================


def test_canonical_json_and_hash():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    assert content_hash({"a": 1}) == content_hash({"a": 1})
    assert content_hash({"a": 1}).startswith("sha256:")


def test_network_hash_tracks_content(chain_net):
    same = make_network([4, 2, 4], [(1, 2), (0, 1)])
    other = make_network([4, 3, 4], [(0, 1), (1, 2)])
    assert network_hash(chain_net) == network_hash(same)
    assert network_hash(chain_net) != network_hash(other)


def test_derive_seed():
    assert derive_seed(0, 0) == derive_seed(0, 0)
    seeds = {derive_seed(0, i) for i in range(100)}
    assert len(seeds) == 100
    assert derive_seed(1, 0) != derive_seed(0, 1)


# ==============================================================================
# Serialization and templates
# ==============================================================================


def test_safe_serialize_numeric_types():
    data = {
        (0, 1): np.array([[1 + 2j, 3 + 0j]]),
        "ints": np.arange(3),
        "scalar": np.float64(1.5),
        "ratio": Fraction(3, 4),
        "whole": Fraction(4, 2),
        "set": {3, 1, 2},
        "path": Path("a/b"),
        "context": AnalysisContext(run_id="abc", command="mux"),
    }
    assert safe_serialize(data) == {
        "0,1": [[{"re": 1.0, "im": 2.0}, 3.0]],
        "ints": [0, 1, 2],
        "scalar": 1.5,
        "ratio": "3/4",
        "whole": 2,
        "set": [1, 2, 3],
        "path": "a/b",
        "context": {"run_id": "abc", "command": "mux", "network_hash": None, "seed": None},
    }


def test_context_is_frozen_with_a_short_run_id():
    context = AnalysisContext(command="mux")
    assert len(context.run_id) == 12
    assert AnalysisContext(command="mux").run_id != context.run_id
    with pytest.raises(ValueError):
        context.seed = 4


def test_render_report():
    text = render_report(
        "multicast", {"destinations": [4, 5], "gain": 3, "pairwise": {"4": 5, "5": 3}}
    )
    assert text.splitlines() == ["multicast gain to {4, 5} = 3", "  4: 5", "  5: 3"]
    with pytest.raises(ValueError, match="No text template"):
        render_report("teleport", {})
    with pytest.raises(ValueError, match="failed"):
        render_report("mux", {})
