# relay-kit/tests/test_mincut.py

import itertools
import random

import pytest
from conftest import brute_force_min_vertex_cut, make_network, random_network, reaches

from relay_kit.contracts.errors import PreconditionError
from relay_kit.schemas.flow import SINK_TERMINAL, SOURCE_TERMINAL
from relay_kit.schemas.network import Network
from relay_kit.toolkit.mincut import (
    max_flow,
    min_vertex_cut,
    multiaccess_region,
    multicast_gain,
    multicast_gains,
    multiplexing_gain,
    region_contains,
    split_graph,
    subset_gain,
    vertex_disjoint_paths,
)
from relay_kit.toolkit.network import is_vertex_cut


def test_split_graph_shape(fig1_net):
    split = split_graph(fig1_net)
    # s, t, six source b-nodes, six destination a-nodes, an a/b pair per relay antenna
    assert split.node_count == 2 + 6 + 6 + 2 * (3 + 2 + 4)
    assert len(split.edges_of_kind("terminal")) == 12
    assert len(split.edges_of_kind("inner")) == 9
    assert len(split.relay_inner_edges()) == 9
    assert len(split.edges_of_kind("outer")) == 6 * 3 + 6 * 2 + 3 * 6 + 2 * 4 + 4 * 6
    for u, v in split.edges_of_kind("outer"):
        assert "capacity" not in split.graph.edges[u, v]


def test_split_graph_drops_links_into_source_and_out_of_destination():
    net = make_network([1, 1, 1], [(0, 1), (1, 2), (2, 1), (1, 0)])
    split = split_graph(net)
    outer = split.edges_of_kind("outer")
    assert (("b", 1, 1), ("a", 2, 1)) in outer
    assert not any(v[1] == 0 or u[1] == 2 for u, v in outer)


@pytest.mark.parametrize(
    "fixture_name, gain",
    [("fig1_net", 5), ("chain_net", 2), ("direct_net", 2), ("diamond_net", 2)],
)
def test_multiplexing_gain_of_fixtures(request, fixture_name, gain):
    net = request.getfixturevalue(fixture_name)
    assert multiplexing_gain(net) == gain
    assert min_vertex_cut(net).capacity == gain


def test_fig1_minimum_cut_is_the_first_relay_layer(fig1_net):
    cut = min_vertex_cut(fig1_net)
    assert cut.members == (1, 2)
    assert cut.capacity == 5


def test_gain_matches_brute_force_on_random_graphs():
    rng = random.Random(20240611)
    for _ in range(200):
        net = random_network(rng)
        expected = brute_force_min_vertex_cut(net)
        assert multiplexing_gain(net) == expected, net
        cut = min_vertex_cut(net)
        assert cut.capacity == expected, net
        assert is_vertex_cut(net, cut.members), net


def test_gain_is_bounded_by_the_endpoints():
    rng = random.Random(7)
    for _ in range(50):
        net = random_network(rng)
        gain = multiplexing_gain(net)
        assert 1 <= gain <= min(net.antennas(net.source), net.antennas(net.destination))


def test_max_flow_is_integral(fig1_net):
    split = split_graph(fig1_net)
    nu, flow = max_flow(split)
    assert nu == 5
    assert all(isinstance(amount, int) for amount in flow.values())
    assert sum(flow[(SOURCE_TERMINAL, v)] for v in split.graph.successors(SOURCE_TERMINAL)) == 5


# ==============================================================================
# Vertex-disjoint paths
# ==============================================================================


def _check_family(net: Network, family) -> None:
    assert family.nu == multiplexing_gain(net)
    assert list(family.first_antennas) == sorted(family.first_antennas)
    for index, path in enumerate(family.paths):
        assert path[0] == SOURCE_TERMINAL and path[-1] == SINK_TERMINAL
        assert path[1] == ("b", net.source, family.first_antennas[index])
        assert path[-2] == ("a", net.destination, family.last_antennas[index])
        route = family.route(index)
        assert route[0] == net.source and route[-1] == net.destination
        assert len(set(route)) == len(route)
        for u, v in zip(route, route[1:]):
            assert (u, v) in net.edges
        assert family.delays[index] == len(route) - 2
    for node_id, count in family.nodes_used().items():
        if node_id not in (net.source, net.destination):
            assert count <= net.antennas(node_id)


def test_fig1_paths(fig1_net):
    family = vertex_disjoint_paths(fig1_net)
    _check_family(fig1_net, family)
    assert sorted(family.delays) == [1, 1, 1, 2, 2]
    assert family.nodes_used() == {0: 5, 1: 3, 2: 2, 3: 2, 4: 5}


def test_paths_on_random_graphs():
    rng = random.Random(99)
    for _ in range(100):
        net = random_network(rng)
        _check_family(net, vertex_disjoint_paths(net))


# ==============================================================================
# Multicast
# ==============================================================================


def test_multicast_gain(two_sink_net):
    assert multicast_gains(two_sink_net, [4, 5]) == {4: 5, 5: 3}
    assert multicast_gain(two_sink_net, [4, 5]) == 3
    assert multicast_gain(two_sink_net, [4]) == 5


def test_multicast_preconditions(two_sink_net):
    with pytest.raises(PreconditionError, match="at least one"):
        multicast_gains(two_sink_net, [])
    with pytest.raises(PreconditionError, match="unknown"):
        multicast_gains(two_sink_net, [4, 42])
    with pytest.raises(PreconditionError, match="is the source"):
        multicast_gains(two_sink_net, [0])

    net = Network(
        nodes={0: 1, 1: 1, 2: 1},
        edges=((0, 1), (2, 0)),
        source=0,
        destination=1,
    )
    with pytest.raises(PreconditionError, match="unreachable"):
        multicast_gains(net, [1, 2])


# ==============================================================================
# Multi-access region
# ==============================================================================


def test_two_sender_region(two_sender_net):
    region = multiaccess_region(two_sender_net, [0, 1], 2)
    assert region.dimension == 2
    assert [c.subset for c in region.constraints] == [(0,), (1,), (0, 1)]
    assert region.bound_for([0]) == 2
    assert region.bound_for([1]) == 2
    assert region.sum_rate_bound == 3
    with pytest.raises(KeyError):
        region.bound_for([2])

    assert region_contains(region, [1.5, 1.5])
    assert region_contains(region, [2, 1])
    assert region_contains(region, [0, 0])
    assert not region_contains(region, [2, 1.5])
    assert not region_contains(region, [2.5, 0])


def test_region_contains_preconditions(two_sender_net):
    region = multiaccess_region(two_sender_net, [0, 1], 2)
    with pytest.raises(PreconditionError, match="Expected 2"):
        region_contains(region, [1.0])
    with pytest.raises(PreconditionError, match="nonnegative"):
        region_contains(region, [-0.5, 1.0])


def test_interfering_senders_do_not_relay():
    # Sender 1 could relay for sender 0 if it were allowed to.
    net = Network(
        nodes={0: 2, 1: 2, 2: 2},
        edges=((0, 1), (1, 2)),
        source=0,
        destination=2,
    )
    assert subset_gain(net, [0], 2) == 2
    assert subset_gain(net, [0], 2, senders=[0, 1]) == 0
    region = multiaccess_region(net, [0, 1], 2)
    assert region.bound_for([0]) == 0
    assert region.bound_for([1]) == 2
    assert region.sum_rate_bound == 2


def test_subset_gain_preconditions(two_sender_net):
    with pytest.raises(PreconditionError, match="empty"):
        subset_gain(two_sender_net, [], 2)
    with pytest.raises(PreconditionError, match="also a sender"):
        subset_gain(two_sender_net, [0, 2], 2)


def test_region_preconditions(two_sender_net):
    with pytest.raises(PreconditionError, match="at least one sender"):
        multiaccess_region(two_sender_net, [], 2)
    with pytest.raises(PreconditionError, match="repeat"):
        multiaccess_region(two_sender_net, [0, 0], 2)
    with pytest.raises(PreconditionError, match="is the destination"):
        multiaccess_region(two_sender_net, [0, 2], 2)
    with pytest.raises(PreconditionError, match="subset cap"):
        multiaccess_region(two_sender_net, [0, 1], 2, max_senders=1)

    net = Network(nodes={0: 1, 1: 1, 2: 1}, edges=((0, 2), (2, 1)), source=0, destination=2)
    with pytest.raises(PreconditionError, match="unreachable from sender 1"):
        multiaccess_region(net, [0, 1], 2)


def _random_multiaccess(rng: random.Random, senders: int = 3) -> Network:
    count = rng.randint(senders + 1, senders + 4)
    destination = count - 1
    edges = {
        (u, v)
        for u in range(count)
        for v in range(count)
        if u != v and rng.random() < 0.4
    }
    for sender in range(senders):
        if not reaches(range(count), edges, sender, destination):
            edges.add((sender, destination))
    return Network(
        nodes={v: rng.randint(1, 3) for v in range(count)},
        edges=tuple(sorted(edges)),
        source=0,
        destination=destination,
        senders=tuple(range(senders)),
    )


def test_region_bounds_are_monotone_and_submodular():
    rng = random.Random(5)
    for _ in range(40):
        net = _random_multiaccess(rng)
        region = multiaccess_region(net, net.senders, net.destination)
        positions = range(region.dimension)
        subsets = [
            frozenset(c) for size in range(1, region.dimension + 1)
            for c in itertools.combinations(positions, size)
        ]

        def bound(subset):
            return region.bound_for(subset) if subset else 0

        for a in subsets:
            for b in subsets:
                if a <= b:
                    assert bound(a) <= bound(b)
                assert bound(a | b) + bound(a & b) <= bound(a) + bound(b)


def _brute_force_subset_cut(net: Network, subset, senders) -> int:
    """Cheapest node set that separates every sender of `subset` from the destination."""
    interferers = set(senders) - set(subset)
    nodes = [v for v in net.nodes if v not in interferers]
    edges = [(u, v) for u, v in net.edges if u in nodes and v in nodes]
    best = None
    for size in range(len(nodes) + 1):
        for cut in itertools.combinations(nodes, size):
            separated = all(
                sender in cut or not reaches(nodes, edges, sender, net.destination, removed=cut)
                for sender in subset
            )
            if separated:
                capacity = sum(net.antennas(v) for v in cut)
                best = capacity if best is None else min(best, capacity)
    return best


def test_region_matches_brute_force_cuts():
    rng = random.Random(23)
    for _ in range(25):
        net = _random_multiaccess(rng)
        region = multiaccess_region(net, net.senders, net.destination)
        for constraint in region.constraints:
            expected = _brute_force_subset_cut(net, constraint.members, net.senders)
            assert constraint.bound == expected, (net, constraint)


def test_multicast_is_the_minimum_of_independent_unicast_gains():
    rng = random.Random(41)
    for _ in range(30):
        net = random_network(rng)
        destinations = [
            v for v in net.nodes if v != net.source and reaches(net.nodes, net.edges, net.source, v)
        ]
        pairwise = {d: multiplexing_gain(net.with_endpoints(destination=d)) for d in destinations}
        assert multicast_gains(net, destinations) == pairwise
        assert multicast_gain(net, destinations) == min(pairwise.values())


def test_adding_an_edge_or_an_antenna_never_lowers_the_gain():
    rng = random.Random(13)
    for _ in range(50):
        net = random_network(rng)
        gain = multiplexing_gain(net)
        missing = [
            (u, v) for u in net.nodes for v in net.nodes if u != v and (u, v) not in net.edges
        ]
        if missing:
            grown = Network(
                nodes=net.nodes,
                edges=net.edges + (rng.choice(missing),),
                source=net.source,
                destination=net.destination,
            )
            assert multiplexing_gain(grown) >= gain
        node = rng.choice(list(net.nodes))
        boosted = Network(
            nodes={**net.nodes, node: net.nodes[node] + 1},
            edges=net.edges,
            source=net.source,
            destination=net.destination,
        )
        assert multiplexing_gain(boosted) >= gain
