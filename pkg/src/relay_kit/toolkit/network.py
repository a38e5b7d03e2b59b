# relay-kit/src/relay_kit/toolkit/network.py

"""
Ingests, serializes and interrogates relay networks.

Documents are YAML or JSON objects (JSON is valid YAML) of the form

    nodes: [{id: 0, antennas: 6}, ...]
    edges: [[0, 1], ...]        # [transmitter, receiver]
    source: 0
    destination: 4
    senders: [...]              # optional, multi-access
    destinations: [...]         # optional, multicast
"""

import json
from pathlib import Path
from typing import Dict, Iterable, Set

import structlog
import yaml
from pydantic import ValidationError

from ..contracts.errors import NetworkValidationError, PreconditionError, SearchLimitError
from ..schemas.network import CutSet, Network, NetworkDocument

logger = structlog.get_logger(__name__)


# ==============================================================================
# SECTION 1: DOCUMENTS
# ==============================================================================


def _describe_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"])
        message = item["msg"].removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def parse_network(text: str) -> Network:
    """
    Parses and validates a network document.

    Args:
        text: The YAML or JSON document.

    Returns:
        The validated `Network`.

    Raises:
        NetworkValidationError: On syntax errors, schema violations, unknown
            node ids, antenna counts below 1, or a missing source ->
            destination path. The message names the offending key.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise NetworkValidationError(f"Network document is not valid YAML/JSON: {e}") from e
    if not isinstance(raw, dict):
        raise NetworkValidationError("Network document must be a mapping at the top level.")

    try:
        document = NetworkDocument.model_validate(raw)
        net = Network.from_document(document)
    except ValidationError as e:
        raise NetworkValidationError(
            f"Invalid network document: {_describe_validation_error(e)}"
        ) from e

    logger.debug(
        "network.parsed", nodes=len(net.nodes), edges=len(net.edges), relays=net.K
    )
    return net


def load_network(path: Path) -> Network:
    """Reads a network file and delegates to `parse_network`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise NetworkValidationError(f"Cannot read network file '{path}': {e}") from e
    return parse_network(text)


def serialize_network(net: Network) -> str:
    """The canonical JSON document of `net` (sorted node ids and edges)."""
    document = net.to_document().model_dump(mode="json", exclude_none=True)
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


# ==============================================================================
# SECTION 2: STRUCTURE
# ==============================================================================


def forward_digraph(net: Network):
    """G without links into the source or out of the destination, which never carry signal."""
    graph = net.to_digraph()
    graph.remove_edges_from(
        [(tx, rx) for tx, rx in net.edges if rx == net.source or tx == net.destination]
    )
    return graph


def useful_nodes(net: Network) -> Set[int]:
    """Nodes lying on some source -> destination walk."""
    import networkx as nx  # Lazy import for this heavy dependency

    graph = forward_digraph(net)
    forward = nx.descendants(graph, net.source) | {net.source}
    backward = nx.ancestors(graph, net.destination) | {net.destination}
    return forward & backward


def source_distances(net: Network) -> Dict[int, int]:
    """Edge-count distance from the source, within the useful subgraph."""
    import networkx as nx

    graph = forward_digraph(net).subgraph(useful_nodes(net))
    return dict(nx.single_source_shortest_path_length(graph, net.source))


def is_layered(net: Network) -> bool:
    """
    True iff every source -> destination walk has the same edge count.

    Equivalently, every edge between useful nodes advances the distance from
    the source by exactly one. On acyclic graphs this is the same as all
    simple paths having equal length.
    """
    useful = useful_nodes(net)
    distance = source_distances(net)
    return all(
        distance[rx] == distance[tx] + 1
        for tx, rx in forward_digraph(net).edges
        if tx in useful and rx in useful
    )


def common_delay(net: Network) -> int:
    """The relay count shared by every route of a layered network."""
    if not is_layered(net):
        raise PreconditionError("Only layered networks have a single common delay.")
    return source_distances(net)[net.destination] - 1


def longest_simple_path(net: Network, max_nodes: int = 20) -> int:
    """
    l_G, the edge count of the longest simple source -> destination path.

    Exhaustive search; only nodes on some source -> destination walk are
    explored.

    Raises:
        SearchLimitError: If more than `max_nodes` nodes would be searched.
    """
    import networkx as nx

    useful = useful_nodes(net)
    if len(useful) > max_nodes:
        raise SearchLimitError(
            f"Longest simple path search over {len(useful)} nodes exceeds the cap of "
            f"{max_nodes}; raise max_path_nodes to allow it."
        )
    graph = forward_digraph(net).subgraph(useful)
    return max(
        len(path) - 1 for path in nx.all_simple_paths(graph, net.source, net.destination)
    )


# ==============================================================================
# SECTION 3: CUTS
# ==============================================================================


def _check_members(net: Network, members: Iterable[int]) -> Set[int]:
    members = set(members)
    unknown = members - set(net.nodes)
    if unknown:
        raise PreconditionError(f"Unknown node ids: {sorted(unknown)}.")
    return members


def edge_cut_weight(net: Network, members: Iterable[int]) -> CutSet:
    """
    The cut-set S and its weight, the sum of N_tx * N_rx over edges leaving S.

    Raises:
        PreconditionError: If the source is not in S, the destination is, or
            S names unknown nodes.
    """
    members = _check_members(net, members)
    if net.source not in members:
        raise PreconditionError("A cut-set must contain the source.")
    if net.destination in members:
        raise PreconditionError("A cut-set must not contain the destination.")

    weight = sum(
        net.antennas(tx) * net.antennas(rx)
        for tx, rx in net.edges
        if tx in members and rx not in members
    )
    return CutSet(members=members, weight=weight)


def is_vertex_cut(net: Network, members: Iterable[int]) -> bool:
    """
    True iff every source -> destination path meets C.

    Any C holding the source or the destination is a vertex cut.
    """
    import networkx as nx

    members = _check_members(net, members)
    if net.source in members or net.destination in members:
        return True
    graph = net.to_digraph()
    graph.remove_nodes_from(members)
    return not nx.has_path(graph, net.source, net.destination)


def vertex_cut_capacity(net: Network, members: Iterable[int]) -> int:
    return sum(net.antennas(v) for v in _check_members(net, members))
