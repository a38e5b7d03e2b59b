# relay-kit/src/relay_kit/schemas/flow.py

"""
Defines the models produced by the minimum-cut analysis: the antenna-level
split graph Ĝ, families of vertex-disjoint paths through it, and the
multi-access multiplexing gain region.

Ĝ node labels are plain tuples so they serialize cleanly:

    ("s",)            the source terminal
    ("t",)            the sink terminal
    ("a", v, j)       receive side of antenna j (1-based) of G-node v
    ("b", v, j)       transmit side of antenna j (1-based) of G-node v
"""

from typing import Any, Dict, Iterable, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

SplitNode = Tuple[Any, ...]
EdgeKind = Literal["inner", "outer", "terminal"]

SOURCE_TERMINAL: SplitNode = ("s",)
SINK_TERMINAL: SplitNode = ("t",)


def receive_node(node_id: int, antenna: int) -> SplitNode:
    return ("a", node_id, antenna)


def transmit_node(node_id: int, antenna: int) -> SplitNode:
    return ("b", node_id, antenna)


# ==============================================================================
# SECTION 1: SPLIT GRAPH
# ==============================================================================


class SplitGraph(BaseModel):
    """
    The per-antenna expansion Ĝ of a network.

    Inner edges (a_{v,i} -> b_{v,i}) and terminal edges carry capacity 1; outer
    edges (b_{u,i} -> a_{v,j}) carry no `capacity` attribute, which networkx
    treats as infinite.
    """

    graph: Any = Field(..., description="The underlying networkx.DiGraph.")
    transmitters: Tuple[int, ...] = Field(
        ..., description="G-nodes attached to the source terminal."
    )
    receiver: int = Field(..., description="G-node attached to the sink terminal.")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def source_node(self) -> SplitNode:
        return SOURCE_TERMINAL

    @property
    def sink_node(self) -> SplitNode:
        return SINK_TERMINAL

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    def edges_of_kind(self, kind: EdgeKind) -> List[Tuple[SplitNode, SplitNode]]:
        return sorted(
            (u, v) for u, v, k in self.graph.edges(data="kind") if k == kind
        )

    def relay_inner_edges(self) -> List[Tuple[SplitNode, SplitNode]]:
        """Inner edges of nodes that are neither a transmitter nor the receiver."""
        return [
            (u, v)
            for u, v in self.edges_of_kind("inner")
            if u[1] not in self.transmitters and u[1] != self.receiver
        ]


# ==============================================================================
# SECTION 2: VERTEX-DISJOINT PATH FAMILY
# ==============================================================================


class DisjointPathFamily(BaseModel):
    """
    A family of ν vertex-disjoint s -> t paths in Ĝ, one per unit of max flow.

    `first_antennas[k]` is β of path k (its source antenna, 1-based) and
    `last_antennas[k]` is γ (its destination antenna).
    """

    paths: Tuple[Tuple[SplitNode, ...], ...]
    first_antennas: Tuple[int, ...]
    last_antennas: Tuple[int, ...]
    lengths: Tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_disjointness(self) -> "DisjointPathFamily":
        count = len(self.paths)
        if not (
            len(self.first_antennas) == len(self.last_antennas) == len(self.lengths) == count
        ):
            raise ValueError("Path attributes must have one entry per path.")
        if len(set(self.first_antennas)) != count:
            raise ValueError("Paths must start on distinct source antennas.")
        if len(set(self.last_antennas)) != count:
            raise ValueError("Paths must end on distinct destination antennas.")

        seen = set()
        for path in self.paths:
            inner = path[1:-1]
            if path[0] != SOURCE_TERMINAL or path[-1] != SINK_TERMINAL:
                raise ValueError(f"Path {path} does not run from s to t.")
            if seen.intersection(inner) or len(set(inner)) != len(inner):
                raise ValueError(f"Path {path} shares a Ĝ node with another path.")
            seen.update(inner)
        return self

    @property
    def nu(self) -> int:
        return len(self.paths)

    @property
    def delays(self) -> Tuple[int, ...]:
        """Relay hops of every path, (l(p) - 3) / 2."""
        return tuple((length - 3) // 2 for length in self.lengths)

    def route(self, index: int) -> Tuple[int, ...]:
        """The G-node sequence visited by path `index`."""
        route: List[int] = []
        for label in self.paths[index][1:-1]:
            if not route or route[-1] != label[1]:
                route.append(label[1])
        return tuple(route)

    def nodes_used(self) -> Dict[int, int]:
        """How many paths pass through each G-node."""
        usage: Dict[int, int] = {}
        for index in range(self.nu):
            for node_id in self.route(index):
                usage[node_id] = usage.get(node_id, 0) + 1
        return usage


# ==============================================================================
# SECTION 3: MULTI-ACCESS REGION
# ==============================================================================


class RegionConstraint(BaseModel):
    """A single constraint sum_{m in S} r_m <= bound of the region."""

    subset: Tuple[int, ...] = Field(..., description="0-based sender positions in S.")
    members: Tuple[int, ...] = Field(..., description="The sender node ids in S.")
    bound: int = Field(..., ge=0, description="m_G(S, t).")

    model_config = ConfigDict(frozen=True)


class MuxRegion(BaseModel):
    """The multiplexing gain region: one constraint per nonempty sender subset."""

    senders: Tuple[int, ...]
    destination: int
    constraints: Tuple[RegionConstraint, ...]

    model_config = ConfigDict(frozen=True)

    @property
    def dimension(self) -> int:
        return len(self.senders)

    def bound_for(self, subset: Iterable[int]) -> int:
        key = tuple(sorted(subset))
        for constraint in self.constraints:
            if constraint.subset == key:
                return constraint.bound
        raise KeyError(f"No constraint for sender subset {key}.")

    @property
    def sum_rate_bound(self) -> int:
        return self.bound_for(range(self.dimension))
