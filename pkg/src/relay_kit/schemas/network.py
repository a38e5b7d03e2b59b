# relay-kit/src/relay_kit/schemas/network.py

"""
Defines the Pydantic models for relay networks: the on-disk document, the
validated in-memory `Network`, and the two kinds of cuts defined over it.

Edges are always (transmitter, receiver). A channel on edge (u, v) is an
N_v x N_u matrix, i.e. receiver rows and transmitter columns.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Annotated, Dict, List, Optional, Tuple

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    StrictInt,
    field_validator,
    model_validator,
)

if TYPE_CHECKING:
    from networkx import DiGraph


# ==============================================================================
# SECTION 1: NETWORK DOCUMENT
# The textual form, exactly as it appears in a YAML or JSON file.
# ==============================================================================


class NodeSpec(BaseModel):
    """A single node entry of a network document."""

    id: StrictInt
    antennas: StrictInt

    model_config = ConfigDict(extra="forbid")


class NetworkDocument(BaseModel):
    """The definitive schema for a network file."""

    nodes: List[NodeSpec] = Field(..., min_length=1)
    edges: List[Tuple[StrictInt, StrictInt]] = Field(
        ..., description="Directed links as [transmitter, receiver] pairs."
    )
    source: StrictInt
    destination: StrictInt
    senders: Optional[List[StrictInt]] = Field(
        None, description="Sender ids for the multi-access mode."
    )
    destinations: Optional[List[StrictInt]] = Field(
        None, description="Destination ids for the multicast mode."
    )

    model_config = ConfigDict(extra="forbid")

    @field_validator("nodes")
    @classmethod
    def unique_node_ids(cls, nodes: List[NodeSpec]) -> List[NodeSpec]:
        seen = set()
        for node in nodes:
            if node.id in seen:
                raise ValueError(f"Node id {node.id} is declared more than once.")
            seen.add(node.id)
        return nodes


# ==============================================================================
# SECTION 2: VALIDATED NETWORK
# ==============================================================================


class Network(BaseModel):
    """
    An immutable, validated multi-antenna relay network G = (V, E).

    Node ids are arbitrary integers; `source` and `destination` designate the
    roles the analysis is performed for. Cycles, parallel routes and links into
    the source or out of the destination are all accepted.
    """

    nodes: Dict[int, int] = Field(..., description="Node id -> antenna count.")
    edges: Tuple[Tuple[int, int], ...] = Field(
        ..., description="Sorted (transmitter, receiver) pairs."
    )
    source: int
    destination: int
    senders: Optional[Tuple[int, ...]] = None
    destinations: Optional[Tuple[int, ...]] = None

    model_config = ConfigDict(frozen=True)

    @field_validator("nodes")
    @classmethod
    def sort_nodes(cls, nodes: Dict[int, int]) -> Dict[int, int]:
        for node_id, antennas in nodes.items():
            if antennas < 1:
                raise ValueError(
                    f"Node {node_id} has antenna count {antennas}; it must be at least 1."
                )
        return dict(sorted(nodes.items()))

    @field_validator("edges")
    @classmethod
    def sort_edges(cls, edges: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        if len(set(edges)) != len(edges):
            duplicates = sorted({e for e in edges if edges.count(e) > 1})
            raise ValueError(f"Duplicate edges: {duplicates}.")
        for tx, rx in edges:
            if tx == rx:
                raise ValueError(f"Self-loop on node {tx} is not allowed.")
        return tuple(sorted(edges))

    @model_validator(mode="after")
    def check_topology(self) -> "Network":
        """Checks endpoint declarations and source -> destination reachability."""
        import networkx as nx  # Lazy import for this heavy dependency

        for tx, rx in self.edges:
            for endpoint in (tx, rx):
                if endpoint not in self.nodes:
                    raise ValueError(
                        f"Edge ({tx}, {rx}) references undeclared node {endpoint}."
                    )
        for role in ("source", "destination"):
            node_id = getattr(self, role)
            if node_id not in self.nodes:
                raise ValueError(f"The {role} {node_id} is not a declared node.")
        if self.source == self.destination:
            raise ValueError("The source and the destination must be different nodes.")
        for role in ("senders", "destinations"):
            for node_id in getattr(self, role) or ():
                if node_id not in self.nodes:
                    raise ValueError(f"The {role} list references undeclared node {node_id}.")

        if not nx.has_path(self.to_digraph(), self.source, self.destination):
            raise ValueError(
                f"No directed path from source {self.source} to destination {self.destination}."
            )
        return self

    # --- Views -----------------------------------------------------------------

    @property
    def relays(self) -> Tuple[int, ...]:
        """All nodes other than the source and the destination (ids 1..K in a K-relay network)."""
        return tuple(v for v in self.nodes if v not in (self.source, self.destination))

    @property
    def K(self) -> int:
        return len(self.nodes) - 2

    def antennas(self, node_id: int) -> int:
        return self.nodes[node_id]

    def predecessors(self, node_id: int) -> Tuple[int, ...]:
        return tuple(tx for tx, rx in self.edges if rx == node_id)

    def successors(self, node_id: int) -> Tuple[int, ...]:
        return tuple(rx for tx, rx in self.edges if tx == node_id)

    def to_digraph(self) -> "DiGraph":
        """Returns G as a `networkx.DiGraph` with an `antennas` node attribute."""
        import networkx as nx

        graph = nx.DiGraph()
        for node_id, antennas in self.nodes.items():
            graph.add_node(node_id, antennas=antennas)
        graph.add_edges_from(self.edges)
        return graph

    def with_endpoints(
        self, source: Optional[int] = None, destination: Optional[int] = None
    ) -> "Network":
        """Returns a revalidated copy with the source and/or destination re-targeted."""
        data = self.model_dump()
        if source is not None:
            data["source"] = source
        if destination is not None:
            data["destination"] = destination
        return Network.model_validate(data)

    # --- Document conversion -----------------------------------------------------

    @classmethod
    def from_document(cls, document: NetworkDocument) -> "Network":
        return cls(
            nodes={node.id: node.antennas for node in document.nodes},
            edges=tuple((tx, rx) for tx, rx in document.edges),
            source=document.source,
            destination=document.destination,
            senders=tuple(document.senders) if document.senders is not None else None,
            destinations=(
                tuple(document.destinations) if document.destinations is not None else None
            ),
        )

    def to_document(self) -> NetworkDocument:
        return NetworkDocument(
            nodes=[NodeSpec(id=v, antennas=n) for v, n in self.nodes.items()],
            edges=[(tx, rx) for tx, rx in self.edges],
            source=self.source,
            destination=self.destination,
            senders=list(self.senders) if self.senders is not None else None,
            destinations=list(self.destinations) if self.destinations is not None else None,
        )


# ==============================================================================
# SECTION 3: CUTS
# ==============================================================================


def _sorted_members(members) -> Tuple[int, ...]:
    return tuple(sorted(set(members)))


MemberSet = Annotated[Tuple[int, ...], BeforeValidator(_sorted_members)]


class CutSet(BaseModel):
    """A source-side node set S and its weight w_G(S) = sum of N_tx * N_rx over crossing edges."""

    members: MemberSet
    weight: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class VertexCut(BaseModel):
    """A vertex cut-set C and its capacity c_G(C) = sum of N_v over C."""

    members: MemberSet
    capacity: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)
