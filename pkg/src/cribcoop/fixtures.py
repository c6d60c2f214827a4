"""Small shipped channels, families and distributions used by tests and the CLI."""

from __future__ import annotations

import numpy as np

from .info import DeterministicMap, JointPmf
from .regions import LinkCapacities
from .search import Family, FactorizedDist, make_family


def parallel_channel() -> np.ndarray:
    """Y = (X1, X2) on a 4-letter output, P[x1, x2, y]."""
    ch = np.zeros((2, 2, 4))
    for a in range(2):
        for b in range(2):
            ch[a, b, 2 * a + b] = 1.0
    return ch


def and_channel() -> np.ndarray:
    """Binary multiplier, Y = X1 AND X2."""
    ch = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            ch[a, b, a & b] = 1.0
    return ch


def bsc_coupled_channel(q: float = 0.1) -> np.ndarray:
    """Y = X1 XOR X2 XOR N with N ~ Bernoulli(q)."""
    ch = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            ch[a, b, a ^ b] = 1 - q
            ch[a, b, 1 - (a ^ b)] = q
    return ch


def noisy_and_channel(q: float = 0.05) -> np.ndarray:
    """Y = (X1 AND X2) XOR N with N ~ Bernoulli(q)."""
    ch = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            ch[a, b, a & b] = 1 - q
            ch[a, b, 1 - (a & b)] = q
    return ch


def useless_channel(k: int = 2) -> np.ndarray:
    return np.ones((k, k, 1))


IDENTITY2 = DeterministicMap.identity(2)
CONSTANT2 = DeterministicMap.constant(2)


def binary_families(pattern: str = "Thm1A") -> dict[str, Family]:
    """The three binary frontier fixtures with their cribbing maps."""
    return {
        "parallel": make_family(pattern, channel=parallel_channel(),
                                crib_maps={"Z1": IDENTITY2, "Z2": IDENTITY2}),
        "and": make_family(pattern, channel=and_channel(),
                           crib_maps={"Z1": CONSTANT2, "Z2": CONSTANT2}),
        "bsc": make_family(pattern, channel=bsc_coupled_channel(),
                           crib_maps={"Z1": IDENTITY2, "Z2": CONSTANT2}),
    }


FIXTURE_LINKS = {"parallel": LinkCapacities(0.1, 0.05), "and": LinkCapacities(0.0, 0.0),
                 "bsc": LinkCapacities(0.2, 0.0)}


def clean_parallel_dist(crib: bool = False) -> FactorizedDist:
    """Constant U, uniform independent inputs on the parallel channel."""
    maps = {"Z1": IDENTITY2, "Z2": IDENTITY2} if crib else {"Z1": CONSTANT2, "Z2": CONSTANT2}
    fam = make_family("Thm1A", channel=parallel_channel(), crib_maps=maps, cards={"U": 1})
    half = np.full((1, 2), 0.5)
    return FactorizedDist(fam, {"U": np.ones(1), "X1": half, "X2": half})


def clean_parallel_joint(crib: bool = False) -> JointPmf:
    from .search import assemble

    return assemble(clean_parallel_dist(crib))


def interior_sim_dist(q: float = 0.05) -> FactorizedDist:
    """Cloud-center-only fixture for the coding simulation.

    U is a uniform bit, both encoders send it (X1 = X2 = U), there is no
    cribbing, and the channel is a noisy AND. All information flows through
    the conference-fed common layer.
    """
    fam = make_family("Thm1A", channel=noisy_and_channel(q),
                      crib_maps={"Z1": CONSTANT2, "Z2": CONSTANT2}, cards={"U": 2})
    return FactorizedDist(fam, {"U": np.array([0.5, 0.5]), "X1": np.eye(2), "X2": np.eye(2)})


def private_sim_dist() -> FactorizedDist:
    """Constant U, uniform independent inputs, noiseless parallel output."""
    return clean_parallel_dist(crib=False)


INTERIOR_SIM_LINKS = LinkCapacities(0.03, 0.03)
