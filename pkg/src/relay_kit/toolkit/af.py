# relay-kit/src/relay_kit/toolkit/af.py

"""
Amplify-and-forward relaying over a quasi-static Rayleigh-fading network.

Each relay that passes the activation test forwards g times what it received
in the previous slot; the source only transmits and the destination only
receives. Slots are 0-based: the source input of slot t1 reaches destination
slot t2 through routes with exactly t2 - t1 relays.

Matrices follow the (transmitter, receiver) edge convention: the channel of
edge (u, v) is N_v x N_u, and every transfer matrix is N_rx x N_tx.
"""

import math
from typing import Dict, List, Optional, Sequence, Set

import numpy as np
import structlog
from scipy.linalg import solve_discrete_lyapunov

from ..contracts.errors import NoiseModelError, PreconditionError, SearchLimitError
from ..schemas.channel import AFConfig, ChannelRealization, EquivalentChannel, NoiseModel
from ..schemas.network import Network
from ..utils.fingerprint import network_hash
from ..utils.linalg import block_toeplitz
from .network import common_delay, is_layered, longest_simple_path

logger = structlog.get_logger(__name__)


# ==============================================================================
# SECTION 1: CHANNEL REALIZATIONS
# ==============================================================================


def sample_channels(
    net: Network, seed: int, net_hash: Optional[str] = None
) -> ChannelRealization:
    """
    Draws every link matrix with i.i.d. CN(0, 1) entries.

    Links are drawn in sorted edge order from `numpy.random.default_rng(seed)`,
    so a (seed, network) pair always reproduces the same realization.
    """
    rng = np.random.default_rng(seed)
    matrices = {}
    for tx, rx in net.edges:
        shape = (net.antennas(rx), net.antennas(tx))
        matrices[(tx, rx)] = (
            rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        ) / math.sqrt(2)
    return ChannelRealization(
        matrices=matrices,
        seed=seed,
        network_hash=net_hash if net_hash is not None else network_hash(net),
    )


def check_realization(real: ChannelRealization, net: Network) -> None:
    """Raises PreconditionError unless `real` has one correctly shaped matrix per edge."""
    if set(real.matrices) != set(net.edges):
        raise PreconditionError("The realization's links do not match the network's edges.")
    for (tx, rx), matrix in real.matrices.items():
        expected = (net.antennas(rx), net.antennas(tx))
        if np.shape(matrix) != expected:
            raise PreconditionError(
                f"Channel of edge ({tx}, {rx}) has shape {np.shape(matrix)}, expected {expected}."
            )


def default_config(
    net: Network,
    power: float,
    time_slots: Optional[int] = None,
    longest_path: Optional[int] = None,
    max_path_nodes: int = 20,
) -> AFConfig:
    """
    The configuration used when the caller does not pick a block length.

    Layered networks without an explicit T use the single-block channel.
    Otherwise T defaults to 4 * l_G, which keeps the edge loss nu(l_G - 1)/T
    below nu/4.
    """
    if time_slots is None and is_layered(net):
        return AFConfig(power=power, single_block=True)
    if time_slots is None:
        if longest_path is None:
            longest_path = longest_simple_path(net, max_nodes=max_path_nodes)
        time_slots = 4 * longest_path
    return AFConfig(power=power, time_slots=time_slots)


# ==============================================================================
# SECTION 2: ACTIVATION
# ==============================================================================


def received_power(real: ChannelRealization, net: Network, node_id: int, power: float) -> float:
    """P * sum of squared Frobenius norms of the incoming links, plus noise power N_v."""
    incoming = math.fsum(
        float(np.sum(np.abs(real.matrix(tx, node_id)) ** 2))
        for tx in net.predecessors(node_id)
        if tx != net.destination
    )
    return power * incoming + net.antennas(node_id)


def relay_active(
    real: ChannelRealization, net: Network, node_id: int, cfg: AFConfig
) -> bool:
    """
    True iff relay `node_id` forwards for this realization.

    The destination does not transmit, so its links do not count toward the
    received power.

    Raises:
        PreconditionError: If `node_id` is the source or the destination.
    """
    if node_id in (net.source, net.destination):
        raise PreconditionError(f"Node {node_id} is not a relay.")
    if node_id not in net.nodes:
        raise PreconditionError(f"Unknown node {node_id}.")
    return received_power(real, net, node_id, cfg.power) <= cfg.effective_threshold


def silenced_relays(
    real: ChannelRealization, net: Network, cfg: AFConfig, relays: Sequence[int]
) -> Set[int]:
    """The relays among `relays` that fail the activation test (none if it is off)."""
    if not cfg.enforce_activation:
        return set()
    return {
        v
        for v in relays
        if received_power(real, net, v, cfg.power) > cfg.effective_threshold
    }


# ==============================================================================
# SECTION 3: LINEAR RECURSION
# ==============================================================================


def _propagate(
    real: ChannelRealization,
    net: Network,
    initial: Dict[int, np.ndarray],
    receiver: int,
    silent: Set[int],
    gain: float,
    lags: int,
) -> List[np.ndarray]:
    """
    Receiver output at lags 0..lags-1 for the given lag-0 transmissions.

    `initial[u]` is what node u transmits at lag 0 (N_u x width). Nodes in
    `silent` never forward; every other non-receiver node forwards `gain`
    times its input one lag later.
    """
    width = next(iter(initial.values())).shape[1]
    rows = net.antennas(receiver)
    state = initial
    outputs: List[np.ndarray] = []
    for _ in range(lags):
        out = np.zeros((rows, width), dtype=complex)
        received: Dict[int, np.ndarray] = {}
        for (tx, rx), matrix in real.matrices.items():
            if tx not in state:
                continue
            if rx == receiver:
                out += matrix @ state[tx]
            elif rx not in silent:
                term = matrix @ state[tx]
                received[rx] = received[rx] + term if rx in received else term
        outputs.append(out)
        state = {v: gain * y for v, y in received.items()}
    return outputs


def sender_transfer_matrices(
    real: ChannelRealization,
    net: Network,
    sender: int,
    cfg: AFConfig,
    destination: Optional[int] = None,
    senders: Optional[Sequence[int]] = None,
    max_delay: Optional[int] = None,
) -> List[np.ndarray]:
    """
    Delay matrices H_0..H_max_delay from any transmitting node to a receiver.

    Nodes in `senders` (default: just `sender`) only transmit their own
    signal and never relay. Activation is tested on every other node except
    the destination.
    """
    destination = net.destination if destination is None else destination
    transmitters = set(senders or ()) | {sender}
    if destination in transmitters:
        raise PreconditionError(f"Node {destination} cannot both send and receive.")
    max_delay = cfg.time_slots - 1 if max_delay is None else max_delay
    relays = [v for v in net.nodes if v not in transmitters and v != destination]
    silent = transmitters | silenced_relays(real, net, cfg, relays)
    return _propagate(
        real,
        net,
        {sender: np.eye(net.antennas(sender), dtype=complex)},
        destination,
        silent,
        cfg.effective_gain,
        max_delay + 1,
    )


def delay_transfer_matrices(
    real: ChannelRealization,
    net: Network,
    cfg: AFConfig,
    max_delay: Optional[int] = None,
) -> List[np.ndarray]:
    """
    H_0..H_max_delay from the source to the destination (default max_delay = T - 1).

    H_d equals the sum over every source -> destination route with d relays
    of g^d times the ordered product of its link matrices.
    """
    return sender_transfer_matrices(real, net, net.source, cfg, max_delay=max_delay)


# ==============================================================================
# SECTION 4: PATH-WEIGHT ORACLE
# ==============================================================================


def path_weight_oracle(
    real: ChannelRealization,
    net: Network,
    cfg: AFConfig,
    t1: int,
    n1: int,
    t2: int,
    n2: int,
    walk_cap: int = 1_000_000,
) -> complex:
    """
    Entry ((t2, n2), (t1, n1)) of the block channel by explicit enumeration.

    Sums, over every antenna-level walk from source antenna n1 to destination
    antenna n2 through exactly t2 - t1 forwarding relay antennas, the product
    of the channel entries on its links, times g^(t2 - t1). Slots and antennas
    are 0-based, as in the block matrix. Exponential cost; meant for tests.

    Raises:
        PreconditionError: If the slots or antennas are out of range.
        SearchLimitError: If more than `walk_cap` partial walks are explored.
    """
    if not 0 <= t1 <= t2 < cfg.time_slots:
        raise PreconditionError(f"Need 0 <= t1 <= t2 < T, got t1={t1}, t2={t2}.")
    if not 0 <= n1 < net.antennas(net.source) or not 0 <= n2 < net.antennas(net.destination):
        raise PreconditionError("Antenna index out of range.")

    hops = t2 - t1
    silent = {net.source} | silenced_relays(real, net, cfg, net.relays)
    gain = cfg.effective_gain
    total = 0j
    explored = 0

    # Each stack entry: (transmitting node, its antenna, relays still to pass, weight so far).
    stack = [(net.source, n1, hops, 1.0 + 0j)]
    while stack:
        node_id, antenna, remaining, weight = stack.pop()
        explored += 1
        if explored > walk_cap:
            raise SearchLimitError(
                f"Path-weight enumeration exceeded {walk_cap} walks; pass a larger walk_cap."
            )
        for rx in net.successors(node_id):
            column = real.matrix(node_id, rx)[:, antenna]
            if rx == net.destination:
                if remaining == 0:
                    total += weight * column[n2]
            elif rx not in silent and remaining > 0:
                for j in range(net.antennas(rx)):
                    if column[j] != 0:
                        stack.append((rx, j, remaining - 1, weight * column[j]))
    return complex(total * gain**hops)


# ==============================================================================
# SECTION 5: EQUIVALENT CHANNEL AND NOISE
# ==============================================================================


def equivalent_channel(
    real: ChannelRealization,
    net: Network,
    cfg: AFConfig,
    longest_path: Optional[int] = None,
    max_path_nodes: int = 20,
) -> EquivalentChannel:
    """
    The end-to-end channel of one realization.

    In block mode the block matrix is T*N_dst x T*N_src, lower block-Toeplitz
    in H_0..H_{T-1}. In single-block mode (layered networks only, T = 1) it
    is H_delta, delta being the relay count shared by every route.

    Args:
        longest_path: l_G if already known; otherwise it is searched for.
        max_path_nodes: Node cap of the l_G search.
    """
    check_realization(real, net)
    if longest_path is None:
        longest_path = longest_simple_path(net, max_nodes=max_path_nodes)

    if cfg.single_block:
        if not is_layered(net):
            raise PreconditionError("single_block mode needs a layered network.")
        delay = common_delay(net)
        delays = delay_transfer_matrices(real, net, cfg, max_delay=delay)
        return EquivalentChannel(
            delay_matrices=tuple(delays),
            block_matrix=delays[delay],
            longest_path=longest_path,
            time_slots=1,
            single_block=True,
            delay=delay,
        )

    delays = delay_transfer_matrices(real, net, cfg)
    return EquivalentChannel(
        delay_matrices=tuple(delays),
        block_matrix=block_toeplitz(delays, cfg.time_slots),
        longest_path=longest_path,
        time_slots=cfg.time_slots,
    )


def _steady_state_noise(
    real: ChannelRealization, net: Network, forwarding: Sequence[int], gain: float
) -> np.ndarray:
    """
    I + C X C^H, where X = A X A^H + I is the stationary covariance of what
    the forwarding relays receive. A maps relay inputs to relay inputs one
    slot later and C maps them to the destination.
    """
    n_dst = net.antennas(net.destination)
    if not forwarding:
        return np.eye(n_dst, dtype=complex)

    offsets: Dict[int, int] = {}
    size = 0
    for v in forwarding:
        offsets[v] = size
        size += net.antennas(v)

    a = np.zeros((size, size), dtype=complex)
    c = np.zeros((n_dst, size), dtype=complex)
    for (tx, rx), matrix in real.matrices.items():
        if tx not in offsets:
            continue
        cols = slice(offsets[tx], offsets[tx] + net.antennas(tx))
        if rx == net.destination:
            c[:, cols] = gain * matrix
        elif rx in offsets:
            a[offsets[rx] : offsets[rx] + net.antennas(rx), cols] = gain * matrix

    radius = float(np.max(np.abs(np.linalg.eigvals(a))))
    if radius >= 1.0:
        raise NoiseModelError(
            f"Relay noise grows without bound around a cycle (spectral radius {radius:.3g}); "
            "use block mode."
        )
    stationary = solve_discrete_lyapunov(a, np.eye(size, dtype=complex))
    return np.eye(n_dst, dtype=complex) + c @ stationary @ c.conj().T


def noise_covariance(
    real: ChannelRealization, net: Network, cfg: AFConfig
) -> NoiseModel:
    """
    The exact covariance of the destination noise over one block.

    Sigma = I + sum over forwarding relays v and injection slots of G G^H,
    where G maps unit noise received by v to the stacked destination output.
    Relay noise received in slot tau leaves the relay in slot tau + 1. In
    single-block mode the covariance is the steady state of the relay
    recursion, solved as a discrete Lyapunov equation.

    Raises:
        NoiseModelError: If relay noise circulating in a cycle never decays.
    """
    check_realization(real, net)
    n_dst = net.antennas(net.destination)
    gain = cfg.effective_gain
    silent = {net.source} | silenced_relays(real, net, cfg, net.relays)
    forwarding = [v for v in net.relays if v not in silent]

    if cfg.single_block:
        covariance = _steady_state_noise(real, net, forwarding, gain)
    else:
        slots = cfg.time_slots
        covariance = np.eye(slots * n_dst, dtype=complex)
        for v in forwarding:
            initial = {v: gain * np.eye(net.antennas(v), dtype=complex)}
            # responses[k] is the output k + 1 slots after the noise was received.
            responses = _propagate(real, net, initial, net.destination, silent, gain, slots - 1)
            for tau in range(slots - 1):
                stacked = np.zeros((slots * n_dst, net.antennas(v)), dtype=complex)
                for t2 in range(tau + 1, slots):
                    stacked[t2 * n_dst : (t2 + 1) * n_dst] = responses[t2 - tau - 1]
                covariance += stacked @ stacked.conj().T

    covariance = (covariance + covariance.conj().T) / 2
    kind = "white" if np.array_equal(covariance, np.eye(covariance.shape[0])) else "colored"
    return NoiseModel(kind=kind, covariance=covariance)
