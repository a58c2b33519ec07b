"""Deterministic seed derivation and portable in-kernel PRNG.

All randomness in the package flows from one master seed.  Streams for
replicas, mesh points, boxes etc. are derived by hashing the master seed
together with integer labels through splitmix64, so worker scheduling can
never change which numbers a logical unit consumes.  numpy-level sampling
uses Philox keyed by the derived value; numba kernels use splitmix64 /
xoshiro-free inline state directly (one uint64 per walk chunk).
"""

import numpy as np
from numba import njit

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def splitmix64(state):
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
    return state, z ^ (z >> np.uint64(31))


def derive_seed(master, *labels):
    """Derive a child seed from a master seed and integer labels.

    The chain is splitmix64 applied to master, then to master^label for each
    label in order; collision-free enough for the stream counts used here
    and reproducible across platforms.
    """
    s = np.uint64(master & 0xFFFFFFFFFFFFFFFF)
    _, s = _derive_step(s)
    for lab in labels:
        s = s ^ np.uint64((int(lab) * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019) & 0xFFFFFFFFFFFFFFFF)
        _, s = _derive_step(s)
    return int(s)


@njit(cache=True)
def _derive_step(s):
    return splitmix64(s)


def generator(master, *labels):
    """numpy Generator on a Philox stream keyed by the derived seed."""
    return np.random.Generator(np.random.Philox(key=derive_seed(master, *labels)))


@njit(cache=True, inline="always")
def uniform01(state):
    """(state, u) with u uniform on [0, 1) using the top 53 bits."""
    state, z = splitmix64(state)
    return state, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, inline="always")
def standard_normal(state):
    """(state, n) via Box-Muller; one normal per call, cosine branch."""
    state, u1 = uniform01(state)
    state, u2 = uniform01(state)
    r = np.sqrt(-2.0 * np.log(1.0 - u1))
    return state, r * np.cos(2.0 * np.pi * u2)


@njit(cache=True, inline="always")
def randint_below(state, n):
    """(state, k) with k uniform on {0,...,n-1}; rejection-free modulo.

    Modulo bias is < n / 2^64, irrelevant at any sample size used here.
    """
    state, z = splitmix64(state)
    return state, z % np.uint64(n)
