# relay-kit/tests/conftest.py

import itertools
import random
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pytest

from relay_kit.schemas.network import Network


def make_network(
    antennas: Sequence[int],
    edges: Iterable[Tuple[int, int]],
    source: int = 0,
    destination: Optional[int] = None,
    **extra,
) -> Network:
    """Nodes are numbered 0..len(antennas)-1; the destination defaults to the last."""
    return Network(
        nodes={i: n for i, n in enumerate(antennas)},
        edges=tuple(edges),
        source=source,
        destination=len(antennas) - 1 if destination is None else destination,
        **extra,
    )


def reaches(
    nodes: Iterable[int], edges: Iterable[Tuple[int, int]], start: int, goal: int, removed=()
) -> bool:
    """Plain DFS, independent of networkx."""
    removed = set(removed)
    if start in removed or goal in removed:
        return False
    adjacency: Dict[int, List[int]] = {v: [] for v in nodes}
    for tx, rx in edges:
        adjacency[tx].append(rx)
    seen, stack = {start}, [start]
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        for nxt in adjacency[node]:
            if nxt not in seen and nxt not in removed:
                seen.add(nxt)
                stack.append(nxt)
    return False


def brute_force_min_vertex_cut(net: Network) -> int:
    """min over every vertex cut-set C of sum_{v in C} N_v, by subset enumeration."""
    best = None
    nodes = list(net.nodes)
    for size in range(1, len(nodes) + 1):
        for subset in itertools.combinations(nodes, size):
            is_cut = (
                net.source in subset
                or net.destination in subset
                or not reaches(nodes, net.edges, net.source, net.destination, removed=subset)
            )
            if is_cut:
                capacity = sum(net.antennas(v) for v in subset)
                best = capacity if best is None else min(best, capacity)
    return best


def random_network(rng: random.Random, max_nodes: int = 8, max_antennas: int = 4) -> Network:
    """A random digraph with a source -> destination path; cycles allowed."""
    count = rng.randint(2, max_nodes)
    antennas = [rng.randint(1, max_antennas) for _ in range(count)]
    edges = {
        (u, v)
        for u in range(count)
        for v in range(count)
        if u != v and rng.random() < 0.35
    }
    if not reaches(range(count), edges, 0, count - 1):
        hops = [0] + rng.sample(range(1, count - 1), k=min(count - 2, rng.randint(0, 2))) + [count - 1]
        edges.update(zip(hops, hops[1:]))
    return make_network(antennas, sorted(edges))


def random_layered_network(rng: random.Random, max_width: int = 3, max_antennas: int = 3) -> Network:
    """A layered DAG with 2-4 layers in total; every relay lies on a route."""
    relay_layers = rng.randint(0, 2)
    layers: List[List[int]] = [[0]]
    next_id = 1
    for _ in range(relay_layers):
        width = rng.randint(1, max_width)
        layers.append(list(range(next_id, next_id + width)))
        next_id += width
    layers.append([next_id])

    edges = set()
    for upper, lower in zip(layers, layers[1:]):
        for v in lower:
            edges.add((rng.choice(upper), v))
        for u in upper:
            edges.add((u, rng.choice(lower)))
        for u in upper:
            for v in lower:
                if rng.random() < 0.5:
                    edges.add((u, v))

    antennas = [rng.randint(1, max_antennas) for _ in range(next_id + 1)]
    return make_network(antennas, sorted(edges))


def random_unlayered_network(rng: random.Random, max_nodes: int = 6, max_antennas: int = 3) -> Network:
    from relay_kit.toolkit.network import is_layered

    while True:
        net = random_network(rng, max_nodes=max_nodes, max_antennas=max_antennas)
        if not is_layered(net):
            return net


# ==============================================================================
# Fixture networks
# ==============================================================================


@pytest.fixture
def fig1_net() -> Network:
    """Antennas 6, 3, 2, 4, 6; a route through node 1 and a longer one through 2 and 3."""
    return make_network([6, 3, 2, 4, 6], [(0, 1), (0, 2), (1, 4), (2, 3), (3, 4)])


@pytest.fixture
def chain_net() -> Network:
    return make_network([4, 2, 4], [(0, 1), (1, 2)])


@pytest.fixture
def direct_net() -> Network:
    return make_network([2, 3], [(0, 1)])


@pytest.fixture
def diamond_net() -> Network:
    return make_network([2, 1, 1, 2], [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture
def two_sender_net() -> Network:
    """Two 2-antenna senders, each linked straight to a 3-antenna destination."""
    return Network(
        nodes={0: 2, 1: 2, 2: 3},
        edges=((0, 2), (1, 2)),
        source=0,
        destination=2,
        senders=(0, 1),
    )


@pytest.fixture
def two_sink_net() -> Network:
    """Gain 5 to node 4 and 3 to node 5."""
    return Network(
        nodes={0: 6, 1: 3, 2: 2, 3: 4, 4: 6, 5: 3},
        edges=((0, 1), (0, 2), (1, 4), (2, 3), (3, 4), (1, 5)),
        source=0,
        destination=4,
        destinations=(4, 5),
    )


FIG1_DOCUMENT = """\
nodes:
  - {id: 0, antennas: 6}
  - {id: 1, antennas: 3}
  - {id: 2, antennas: 2}
  - {id: 3, antennas: 4}
  - {id: 4, antennas: 6}
edges: [[0, 1], [0, 2], [1, 4], [2, 3], [3, 4]]
source: 0
destination: 4
"""

CHAIN_DOCUMENT = """\
nodes:
  - {id: 0, antennas: 4}
  - {id: 1, antennas: 2}
  - {id: 2, antennas: 4}
edges: [[0, 1], [1, 2]]
source: 0
destination: 2
"""

DIRECT_DOCUMENT = """\
{"nodes": [{"id": 0, "antennas": 2}, {"id": 1, "antennas": 3}],
 "edges": [[0, 1]], "source": 0, "destination": 1}
"""
