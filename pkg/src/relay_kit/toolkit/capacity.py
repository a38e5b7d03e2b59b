# relay-kit/src/relay_kit/toolkit/capacity.py

"""
Mutual information of the AF equivalent channel, its Monte Carlo ergodic
average, and the high-SNR slope that estimates the multiplexing gain.

The source spreads its power P evenly over its antennas, so the per-block
mutual information is log2 det(I + (P / N_src) H^H Sigma^-1 H), reported per
channel use (divided by T).
"""

import math
from typing import List, Optional, Sequence

import numpy as np
import structlog
from scipy import stats
from scipy.linalg import solve_triangular

from ..contracts.errors import NoiseModelError, PreconditionError
from ..schemas.channel import AFConfig, ChannelRealization, EquivalentChannel, NoiseKind, NoiseModel
from ..schemas.network import Network
from ..schemas.results import CapacityEstimate, SlopeEstimate
from ..utils.fingerprint import derive_seed, network_hash
from ..utils.linalg import block_toeplitz
from .af import (
    default_config,
    equivalent_channel,
    noise_covariance,
    relay_active,
    sample_channels,
    sender_transfer_matrices,
)
from .network import longest_simple_path

logger = structlog.get_logger(__name__)


def _log2det(gram: np.ndarray) -> float:
    _, logdet = np.linalg.slogdet(gram)
    return float(logdet) / math.log(2)


def _summarize(values: List[float]) -> tuple:
    """Mean by compensated summation and the standard error of the mean."""
    count = len(values)
    mean = math.fsum(values) / count
    if count == 1 or max(values) == min(values):
        return mean, 0.0
    variance = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
    return mean, math.sqrt(variance / count)


# ==============================================================================
# SECTION 1: MUTUAL INFORMATION
# ==============================================================================


def mutual_information(eqch: EquivalentChannel, noise: NoiseModel, cfg: AFConfig) -> float:
    """
    Bits per channel use of one realization.

    White noise uses log2 det(I + (P/N_src) H^H H); colored noise whitens H
    with the Cholesky factor of Sigma first.

    Raises:
        PreconditionError: If the noise dimension does not match the channel.
        NoiseModelError: If Sigma is not positive definite.
    """
    channel = np.asarray(eqch.block_matrix, dtype=complex)
    if noise.dimension != channel.shape[0]:
        raise PreconditionError(
            f"Noise covariance is {noise.dimension}-dimensional, the channel has "
            f"{channel.shape[0]} outputs."
        )
    if noise.kind == "colored":
        try:
            factor = np.linalg.cholesky(noise.covariance)
        except np.linalg.LinAlgError as e:
            raise NoiseModelError(f"Noise covariance is not positive definite: {e}") from e
        channel = solve_triangular(factor, channel, lower=True)

    snr = cfg.power / eqch.tx_antennas
    gram = np.eye(channel.shape[1]) + snr * (channel.conj().T @ channel)
    return _log2det(gram) / eqch.time_slots


# ==============================================================================
# SECTION 2: MONTE CARLO
# ==============================================================================


def ergodic_capacity(
    net: Network,
    cfg: AFConfig,
    samples: int,
    mode: NoiseKind = "white",
    seed: int = 0,
    realization: Optional[ChannelRealization] = None,
    max_path_nodes: int = 20,
) -> CapacityEstimate:
    """
    Monte Carlo estimate of the ergodic mutual information per channel use.

    Sample i draws its channels with seed `derive_seed(seed, i)`, so equal
    seeds give equal draws at every power. A fixed `realization`, if given,
    replaces the draws.
    """
    if samples < 1:
        raise PreconditionError("samples must be at least 1.")
    longest_path = longest_simple_path(net, max_nodes=max_path_nodes)
    net_hash = network_hash(net)

    values = []
    for index in range(samples):
        if realization is not None:
            real = realization
        else:
            real = sample_channels(net, derive_seed(seed, index), net_hash)
        eqch = equivalent_channel(real, net, cfg, longest_path=longest_path)
        if mode == "colored":
            noise = noise_covariance(real, net, cfg)
        else:
            noise = NoiseModel.white(eqch.block_matrix.shape[0])
        values.append(mutual_information(eqch, noise, cfg))

    mean, stderr = _summarize(values)
    logger.debug(
        "capacity.estimate", power=cfg.power, mode=mode, samples=samples, mean_bits=mean
    )
    return CapacityEstimate(
        mean_bits=mean,
        stderr=stderr,
        samples=samples,
        power=cfg.power,
        mode=mode,
        time_slots=cfg.time_slots,
    )


def fit_slope(powers: Sequence[float], mean_bits: Sequence[float]) -> tuple:
    """Least-squares (slope, intercept) of bits against log2 P, and the endpoint slope."""
    x = np.log2(np.asarray(powers, dtype=float))
    y = np.asarray(mean_bits, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    endpoint = (y[-1] - y[0]) / (x[-1] - x[0])
    return float(slope), float(intercept), float(endpoint)


def check_power_grid(powers: Sequence[float]) -> List[float]:
    powers = [float(p) for p in powers]
    if len(powers) < 2:
        raise PreconditionError("The power grid needs at least two points.")
    if any(p <= 2 for p in powers):
        raise PreconditionError("Every grid power must exceed 2.")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise PreconditionError("The power grid must be strictly increasing.")
    return powers


def mux_gain_estimate(
    net: Network,
    powers: Sequence[float],
    samples: int,
    mode: NoiseKind = "white",
    seed: int = 0,
    cfg: Optional[AFConfig] = None,
    max_path_nodes: int = 20,
) -> SlopeEstimate:
    """
    Estimates the multiplexing gain as the slope of capacity against log2 P.

    Args:
        powers: Strictly increasing linear powers, at least two, all above 2.
        cfg: The protocol configuration to re-power at every grid point;
            `default_config` is used when omitted.

    Raises:
        PreconditionError: On a degenerate grid.
    """
    powers = check_power_grid(powers)
    if cfg is None:
        cfg = default_config(net, powers[0], max_path_nodes=max_path_nodes)

    capacities = []
    for power in powers:
        estimate = ergodic_capacity(
            net, cfg.at_power(power), samples, mode=mode, seed=seed, max_path_nodes=max_path_nodes
        )
        capacities.append(estimate)
        logger.info(
            "capacity.sweep_point", p_db=round(estimate.p_db, 3), mean_bits=estimate.mean_bits,
            stderr=estimate.stderr,
        )

    slope, intercept, endpoint = fit_slope(powers, [c.mean_bits for c in capacities])
    return SlopeEstimate(
        slope=slope,
        intercept=intercept,
        endpoint_slope=endpoint,
        powers=powers,
        capacities=capacities,
    )


def multiaccess_sum_rate(
    net: Network,
    subset: Sequence[int],
    destination: int,
    cfg: AFConfig,
    samples: int,
    seed: int = 0,
    senders: Optional[Sequence[int]] = None,
) -> CapacityEstimate:
    """
    Monte Carlo sum rate of the senders in `subset`, per channel use.

    Each sender spreads P over its own antennas. Senders in `senders` but not
    in `subset` neither transmit nor relay. Only block mode is supported.
    """
    if samples < 1:
        raise PreconditionError("samples must be at least 1.")
    if not subset:
        raise PreconditionError("A sender subset must not be empty.")
    if cfg.single_block:
        raise PreconditionError("The multi-access sum rate is computed in block mode only.")
    all_senders = tuple(senders or subset)
    net_hash = network_hash(net)
    slots = cfg.time_slots
    rows = slots * net.antennas(destination)

    values = []
    for index in range(samples):
        real = sample_channels(net, derive_seed(seed, index), net_hash)
        gram = np.eye(rows, dtype=complex)
        for sender in subset:
            delays = sender_transfer_matrices(
                real, net, sender, cfg, destination=destination, senders=all_senders
            )
            block = block_toeplitz(delays, slots)
            gram += (cfg.power / net.antennas(sender)) * (block @ block.conj().T)
        values.append(_log2det(gram) / slots)

    mean, stderr = _summarize(values)
    return CapacityEstimate(
        mean_bits=mean, stderr=stderr, samples=samples, power=cfg.power, time_slots=slots
    )


# ==============================================================================
# SECTION 3: ACTIVATION PROBABILITY
# ==============================================================================


def activation_probability(
    net: Network,
    power: float,
    samples: int,
    seed: int = 0,
    cfg: Optional[AFConfig] = None,
) -> float:
    """The empirical probability that every relay passes the activation test."""
    if samples < 1:
        raise PreconditionError("samples must be at least 1.")
    if not net.relays:
        return 1.0
    cfg = cfg.at_power(power) if cfg is not None else AFConfig(power=power)
    net_hash = network_hash(net)
    active = 0
    for index in range(samples):
        real = sample_channels(net, derive_seed(seed, index), net_hash)
        active += all(relay_active(real, net, v, cfg) for v in net.relays)
    return active / samples


def activation_probability_exact(
    net: Network, power: float, cfg: Optional[AFConfig] = None
) -> float:
    """
    The closed-form probability that every relay is active.

    The incoming squared norm of relay v is a sum of m_v = N_v * sum_u N_u
    unit-mean exponentials, i.e. Gamma(m_v, 1), and distinct relays see
    disjoint links, so the events are independent.
    """
    cfg = cfg.at_power(power) if cfg is not None else AFConfig(power=power)
    probability = 1.0
    for v in net.relays:
        shape = net.antennas(v) * sum(
            net.antennas(u) for u in net.predecessors(v) if u != net.destination
        )
        limit = (cfg.effective_threshold - net.antennas(v)) / power
        if shape == 0:
            probability *= 1.0 if limit >= 0 else 0.0
        else:
            probability *= float(stats.gamma.cdf(limit, a=shape)) if limit > 0 else 0.0
    return probability
