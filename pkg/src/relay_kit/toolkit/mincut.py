# relay-kit/src/relay_kit/toolkit/mincut.py

"""
Minimum vertex cuts of relay networks through the split graph Ĝ.

Every antenna of every relay becomes a capacity-1 inner edge, links become
complete bipartite blocks of uncapacitated outer edges, and the source and
destination antennas hang off capacity-1 terminal edges. A minimum edge cut
of Ĝ therefore consists of whole antenna bundles, and its value is the
minimum vertex-cut capacity of G, the multiplexing gain.
"""

import itertools
import math
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import structlog

from ..contracts.errors import PreconditionError
from ..schemas.flow import (
    SINK_TERMINAL,
    SOURCE_TERMINAL,
    DisjointPathFamily,
    MuxRegion,
    RegionConstraint,
    SplitGraph,
    SplitNode,
    receive_node,
    transmit_node,
)
from ..schemas.network import Network, VertexCut

logger = structlog.get_logger(__name__)

FlowAssignment = Dict[Tuple[SplitNode, SplitNode], int]

REGION_TOLERANCE = 1e-9


# ==============================================================================
# SECTION 1: SPLIT GRAPH
# ==============================================================================


def _build_split(
    net: Network,
    transmitters: Sequence[int],
    receiver: int,
    removed: Iterable[int] = (),
) -> SplitGraph:
    """
    Builds Ĝ for a set of transmitting nodes and one receiving node.

    Transmitters get transmit-side nodes only, the receiver gets receive-side
    nodes only, and `removed` nodes are left out entirely.
    """
    import networkx as nx  # Lazy import for this heavy dependency

    transmitters = tuple(transmitters)
    removed = set(removed)
    graph = nx.DiGraph()
    graph.add_node(SOURCE_TERMINAL)
    graph.add_node(SINK_TERMINAL)

    for node_id, antennas in net.nodes.items():
        if node_id in removed:
            continue
        for j in range(1, antennas + 1):
            if node_id in transmitters:
                graph.add_edge(SOURCE_TERMINAL, transmit_node(node_id, j), kind="terminal", capacity=1)
            elif node_id == receiver:
                graph.add_edge(receive_node(node_id, j), SINK_TERMINAL, kind="terminal", capacity=1)
            else:
                graph.add_edge(
                    receive_node(node_id, j), transmit_node(node_id, j), kind="inner", capacity=1
                )

    for tx, rx in net.edges:
        if tx in removed or rx in removed or tx == receiver or rx in transmitters:
            continue
        # No `capacity` attribute: networkx treats the edge as uncapacitated.
        for i in range(1, net.antennas(tx) + 1):
            for j in range(1, net.antennas(rx) + 1):
                graph.add_edge(transmit_node(tx, i), receive_node(rx, j), kind="outer")

    return SplitGraph(graph=graph, transmitters=transmitters, receiver=receiver)


def split_graph(net: Network) -> SplitGraph:
    """The split graph Ĝ between the network's source and destination."""
    return _build_split(net, (net.source,), net.destination)


# ==============================================================================
# SECTION 2: FLOW AND CUTS
# ==============================================================================


def max_flow(split: SplitGraph) -> Tuple[int, FlowAssignment]:
    """
    An integral maximum s -> t flow of Ĝ by augmenting paths.

    Returns:
        The flow value ν and the flow on every edge of Ĝ.
    """
    import networkx as nx
    from networkx.algorithms.flow import edmonds_karp

    value, flow_dict = nx.maximum_flow(
        split.graph, split.source_node, split.sink_node, flow_func=edmonds_karp
    )
    flow = {
        (u, v): int(round(amount))
        for u, targets in flow_dict.items()
        for v, amount in targets.items()
    }
    nu = int(round(value))
    logger.debug("mincut.max_flow", nu=nu, split_nodes=split.node_count)
    return nu, flow


def _edge_owner(u: SplitNode, v: SplitNode) -> int:
    """The G-node whose antenna bundle a capacity-1 edge of Ĝ belongs to."""
    return v[1] if u == SOURCE_TERMINAL else u[1]


def min_vertex_cut(net: Network) -> VertexCut:
    """
    A minimum-capacity vertex cut of G.

    Taken from the source-side minimal minimum cut of Ĝ: the nodes reachable
    from s in the residual graph. Every crossing edge is a capacity-1 edge and
    crossing edges always form whole antenna bundles, so their owners are the
    cut.
    """
    import networkx as nx
    from networkx.algorithms.flow import edmonds_karp

    split = split_graph(net)
    residual = edmonds_karp(split.graph, split.source_node, split.sink_node)
    nu = int(round(residual.graph["flow_value"]))

    open_graph = nx.DiGraph()
    open_graph.add_node(split.source_node)
    open_graph.add_edges_from(
        (u, v) for u, v, d in residual.edges(data=True) if d["capacity"] - d["flow"] > 0
    )
    reachable = nx.descendants(open_graph, split.source_node) | {split.source_node}

    members: Set[int] = {
        _edge_owner(u, v)
        for u, v, d in split.graph.edges(data=True)
        if u in reachable and v not in reachable and "capacity" in d
    }
    cut = VertexCut(members=members, capacity=sum(net.antennas(v) for v in members))
    if cut.capacity != nu:
        raise RuntimeError(
            f"Vertex cut {cut.members} has capacity {cut.capacity} but the max flow is {nu}."
        )
    logger.debug("mincut.vertex_cut", members=list(cut.members), capacity=cut.capacity)
    return cut


def multiplexing_gain(net: Network) -> int:
    """m_G, the minimum vertex-cut capacity between source and destination."""
    nu, _ = max_flow(split_graph(net))
    return nu


# ==============================================================================
# SECTION 3: VERTEX-DISJOINT PATHS
# ==============================================================================


def _shortcut_revisits(path: List[SplitNode]) -> List[SplitNode]:
    """
    Removes loops through a G-node visited on two different antennas.

    The later receive/transmit pair is kept and the detour between the two
    visits is dropped; outer edges are complete per link, so the predecessor
    of the first visit also links to the later antenna.
    """
    while True:
        first_seen: Dict[int, int] = {}
        for index, label in enumerate(path):
            if label[0] != "a":
                continue
            node_id = label[1]
            if node_id in first_seen:
                path = path[: first_seen[node_id]] + path[index:]
                break
            first_seen[node_id] = index
        else:
            return path


def vertex_disjoint_paths(net: Network) -> DisjointPathFamily:
    """
    Decomposes a maximum flow of Ĝ into ν vertex-disjoint s -> t paths.

    Every Ĝ node other than s and t carries at most one unit of flow, so
    each path is traced by following the unique outgoing flow edge. Paths
    are ordered by their source antenna.
    """
    split = split_graph(net)
    nu, flow = max_flow(split)

    remaining = {edge: amount for edge, amount in flow.items() if amount > 0}
    successors: Dict[SplitNode, List[SplitNode]] = {}
    for u, v in sorted(remaining):
        successors.setdefault(u, []).append(v)

    paths: List[List[SplitNode]] = []
    for start in list(successors.get(SOURCE_TERMINAL, [])):
        path = [SOURCE_TERMINAL, start]
        current = start
        while current != SINK_TERMINAL:
            current = next(v for v in successors[current] if remaining[(current, v)] > 0)
            remaining[(path[-1], current)] -= 1
            path.append(current)
        paths.append(_shortcut_revisits(path))

    paths.sort(key=lambda p: p[1][2])
    family = DisjointPathFamily(
        paths=tuple(tuple(p) for p in paths),
        first_antennas=tuple(p[1][2] for p in paths),
        last_antennas=tuple(p[-2][2] for p in paths),
        lengths=tuple(len(p) - 1 for p in paths),
    )
    if family.nu != nu:
        raise RuntimeError(f"Flow decomposition found {family.nu} paths for a flow of {nu}.")
    return family


# ==============================================================================
# SECTION 4: MULTICAST AND MULTI-ACCESS
# ==============================================================================


def _require_known(net: Network, node_ids: Iterable[int], role: str) -> None:
    unknown = sorted(set(node_ids) - set(net.nodes))
    if unknown:
        raise PreconditionError(f"The {role} list references unknown nodes {unknown}.")


def multicast_gains(net: Network, destinations: Sequence[int]) -> Dict[int, int]:
    """The unicast gain from the source to each destination."""
    import networkx as nx

    if not destinations:
        raise PreconditionError("Multicast needs at least one destination.")
    _require_known(net, destinations, "destinations")
    graph = net.to_digraph()
    gains: Dict[int, int] = {}
    for dest in destinations:
        if dest == net.source:
            raise PreconditionError(f"Destination {dest} is the source.")
        if not nx.has_path(graph, net.source, dest):
            raise PreconditionError(
                f"Destination {dest} is unreachable from source {net.source}."
            )
        gains[dest] = multiplexing_gain(net.with_endpoints(destination=dest))
    return gains


def multicast_gain(net: Network, destinations: Sequence[int]) -> int:
    """The common-message gain: the minimum unicast gain over all destinations."""
    gain = min(multicast_gains(net, destinations).values())
    logger.debug("mincut.multicast", destinations=list(destinations), gain=gain)
    return gain


def subset_gain(
    net: Network,
    subset: Sequence[int],
    destination: int,
    senders: Optional[Sequence[int]] = None,
) -> int:
    """
    m_G(S, t): the max flow from a super-source over the senders in `subset`.

    Senders listed in `senders` but not in `subset` are removed from the
    network before the flow is computed.
    """
    if not subset:
        raise PreconditionError("A sender subset must not be empty.")
    _require_known(net, [*subset, destination], "senders")
    if destination in subset:
        raise PreconditionError(f"Destination {destination} is also a sender.")
    interferers = set(senders or ()) - set(subset)
    split = _build_split(net, subset, destination, removed=interferers)
    nu, _ = max_flow(split)
    return nu


def multiaccess_region(
    net: Network,
    senders: Sequence[int],
    destination: int,
    max_senders: int = 12,
) -> MuxRegion:
    """
    The multiplexing gain region of a multi-access network.

    One constraint sum_{m in S} r_m <= m_G(S, t) per nonempty subset S of
    senders, ordered by subset size and then lexicographically.

    Raises:
        PreconditionError: If there are no senders or more than `max_senders`
            (the region has 2^M - 1 constraints), a sender repeats or is the
            destination, or the destination is unreachable from a sender.
    """
    import networkx as nx

    senders = tuple(senders)
    if not senders:
        raise PreconditionError("The multi-access region needs at least one sender.")
    if len(senders) > max_senders:
        raise PreconditionError(
            f"{len(senders)} senders exceed the subset cap of {max_senders} "
            f"({2 ** len(senders) - 1} constraints); raise max_senders to allow it."
        )
    if len(set(senders)) != len(senders):
        raise PreconditionError(f"Senders repeat: {list(senders)}.")
    _require_known(net, [*senders, destination], "senders")
    graph = net.to_digraph()
    for sender in senders:
        if sender == destination:
            raise PreconditionError(f"Sender {sender} is the destination.")
        if not nx.has_path(graph, sender, destination):
            raise PreconditionError(
                f"Destination {destination} is unreachable from sender {sender}."
            )

    constraints = []
    for size in range(1, len(senders) + 1):
        for subset in itertools.combinations(range(len(senders)), size):
            members = tuple(senders[i] for i in subset)
            bound = subset_gain(net, members, destination, senders=senders)
            constraints.append(RegionConstraint(subset=subset, members=members, bound=bound))

    region = MuxRegion(senders=senders, destination=destination, constraints=tuple(constraints))
    logger.debug(
        "mincut.region", senders=list(senders), constraints=len(constraints),
        sum_rate_bound=region.sum_rate_bound,
    )
    return region


def region_contains(region: MuxRegion, rates: Sequence[float]) -> bool:
    """
    True iff `rates` satisfies every constraint of the (closed) region.

    Raises:
        PreconditionError: On a dimension mismatch or a negative rate.
    """
    rates = list(rates)
    if len(rates) != region.dimension:
        raise PreconditionError(
            f"Expected {region.dimension} rates, got {len(rates)}."
        )
    if any(r < 0 for r in rates):
        raise PreconditionError("Rates must be nonnegative.")
    return all(
        math.fsum(rates[i] for i in c.subset) <= c.bound + REGION_TOLERANCE
        for c in region.constraints
    )
