# relay-kit/src/relay_kit/toolkit/certify.py

"""
Rank certificates for the AF equivalent channel.

A family of ν vertex-disjoint paths of Ĝ defines a 0/1 channel realization:
entry (j2, j1) of link (i1, i2) is 1 iff some path uses b_{i1,j1} -> a_{i2,j2}.
With unit gain the equivalent channel of that realization is a partial
permutation, whose rank is counted exactly: ν for layered networks, and
sum over paths of (T - relays on the path) in block mode.
"""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..contracts.errors import CertificateError, PreconditionError
from ..schemas.channel import AFConfig, ChannelRealization, NoiseModel
from ..schemas.flow import DisjointPathFamily
from ..schemas.network import Network
from ..schemas.results import RankCertificate, RankGainReport
from ..utils.fingerprint import network_hash
from ..utils.linalg import exact_rank
from .af import equivalent_channel
from .capacity import check_power_grid, fit_slope, mutual_information
from .mincut import vertex_disjoint_paths
from .network import is_layered, longest_simple_path

logger = structlog.get_logger(__name__)

DEFAULT_RANK_GAIN_POWERS: Tuple[float, ...] = (1e3, 1e6, 1e9)

# Certificates use unit gain and no activation test; P itself does not enter the rank.
_CERTIFICATE_POWER = 2.0


def certificate_realization(net: Network, paths: DisjointPathFamily) -> ChannelRealization:
    """
    The 0/1 realization carried by a disjoint path family.

    Raises:
        PreconditionError: If a path uses a link or antenna the network lacks.
    """
    matrices: Dict[Tuple[int, int], np.ndarray] = {
        (tx, rx): np.zeros((net.antennas(rx), net.antennas(tx)), dtype=np.int64)
        for tx, rx in net.edges
    }
    for path in paths.paths:
        for u, v in zip(path, path[1:]):
            if u[0] != "b" or v[0] != "a":
                continue
            edge = (u[1], v[1])
            if edge not in matrices:
                raise PreconditionError(f"Path {path} uses link {edge}, which is not in the network.")
            rows, cols = matrices[edge].shape
            if not (1 <= v[2] <= rows and 1 <= u[2] <= cols):
                raise PreconditionError(f"Path {path} uses an antenna outside link {edge}.")
            matrices[edge][v[2] - 1, u[2] - 1] = 1
    return ChannelRealization(matrices=matrices, network_hash=network_hash(net))


def _certificate_config(layered: bool, time_slots: Optional[int], power: float) -> AFConfig:
    if layered and time_slots is None:
        return AFConfig(power=power, gain=1.0, enforce_activation=False, single_block=True)
    return AFConfig(power=power, gain=1.0, enforce_activation=False, time_slots=time_slots)


def _resolve_slots(
    time_slots: Optional[int], longest_path: int, layered: bool
) -> Optional[int]:
    if time_slots is None and not layered:
        raise PreconditionError(
            f"An unlayered network needs an explicit block length T >= l_G = {longest_path}."
        )
    if time_slots is not None and not layered and time_slots < longest_path:
        raise PreconditionError(
            f"T = {time_slots} is below l_G = {longest_path}; the block needs T >= l_G."
        )
    return time_slots


def verify_certificate(
    net: Network,
    time_slots: Optional[int] = None,
    strict: bool = True,
    max_path_nodes: int = 20,
) -> RankCertificate:
    """
    Builds the certificate realization and checks its exact rank.

    A layered network without `time_slots` is checked on its single-delay
    channel, where the rank must equal ν. Otherwise the block channel over T
    slots must have rank sum_v (T - d_v) >= ν (T - l_G + 1), d_v being the
    relay count of path v.

    Raises:
        PreconditionError: If the network is unlayered and T is missing or
            below l_G.
        CertificateError: If `strict` and the rank misses its prediction.
    """
    layered = is_layered(net)
    longest_path = longest_simple_path(net, max_nodes=max_path_nodes)
    time_slots = _resolve_slots(time_slots, longest_path, layered)

    paths = vertex_disjoint_paths(net)
    realization = certificate_realization(net, paths)
    cfg = _certificate_config(layered, time_slots, _CERTIFICATE_POWER)
    eqch = equivalent_channel(realization, net, cfg, longest_path=longest_path)
    support = np.rint(np.real(eqch.block_matrix)).astype(np.int64)
    rank = exact_rank(support)

    nu = paths.nu
    slots = eqch.time_slots
    if cfg.single_block:
        expected = bound = nu
    else:
        expected = sum(max(slots - d, 0) for d in paths.delays)
        bound = nu * (slots - longest_path + 1)
    passed = rank == expected and rank >= bound

    certificate = RankCertificate(
        nu=nu,
        rank=rank,
        bound=bound,
        expected_rank=expected,
        layered=layered,
        time_slots=slots,
        longest_path=longest_path,
        path_delays=paths.delays,
        passed=passed,
        realization=realization,
    )
    logger.info(
        "certify.result", nu=nu, rank=rank, bound=bound, expected=expected, passed=passed
    )
    if strict and not passed:
        raise CertificateError(
            f"Certificate rank {rank} does not match the expected {expected} "
            f"(bound {bound}, nu {nu}, T {slots})."
        )
    return certificate


def af_rate_floor(nu: int, longest_path: int, time_slots: int) -> float:
    """ν - ν (l_G - 1) / T, the per-use multiplexing gain guaranteed over a block of T slots."""
    if time_slots < 1:
        raise PreconditionError("T must be at least 1.")
    return nu - nu * (longest_path - 1) / time_slots


def rank_gain_link(
    net: Network,
    powers: Sequence[float] = DEFAULT_RANK_GAIN_POWERS,
    time_slots: Optional[int] = None,
    realization: Optional[ChannelRealization] = None,
    max_path_nodes: int = 20,
) -> RankGainReport:
    """
    Relates the certificate's rank to the slope of its mutual information.

    The certificate channel is deterministic, so the per-use bits at each
    power are exact and the slope should approach rank / T. Unlayered
    networks default to T = 50 * l_G, where rank / T is close to ν.

    Args:
        realization: Evaluate this realization instead of the certificate's.
    """
    powers = check_power_grid(powers)
    layered = is_layered(net)
    longest_path = longest_simple_path(net, max_nodes=max_path_nodes)
    if time_slots is None and not layered:
        time_slots = 50 * longest_path

    certificate = verify_certificate(net, time_slots=time_slots, max_path_nodes=max_path_nodes)
    real = realization if realization is not None else certificate.realization

    mean_bits = []
    for power in powers:
        cfg = _certificate_config(layered, time_slots, power)
        eqch = equivalent_channel(real, net, cfg, longest_path=longest_path)
        noise = NoiseModel.white(eqch.block_matrix.shape[0])
        mean_bits.append(mutual_information(eqch, noise, cfg))

    slope, _, _ = fit_slope(powers, mean_bits)
    return RankGainReport(
        nu=certificate.nu,
        rank=certificate.rank,
        rank_per_use=certificate.rank / certificate.time_slots,
        slope=slope,
        time_slots=certificate.time_slots,
        layered=layered,
        powers=powers,
        mean_bits=mean_bits,
    )
