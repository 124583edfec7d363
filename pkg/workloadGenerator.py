# coding=utf-8

"""
Goal: Generating the deterministic workloads of the benchmark: key arrays,
      failure sets and node weight vectors.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import hashlib

import numpy as np

from hashFunctions import GOLDEN_GAMMA, MASK64, mix64, mix64Array
from hashingErrors import ConfigurationError, DomainError



###############################################################################
################################ Global variables #############################
###############################################################################

# Default base seed of the experiments
BASE_SEED = 20251226

# Salt separating the failure-set stream from the key stream
FAILURE_SALT = 0x5851F42D4C957F2D

# Supported node weight profiles
weightProfiles = ('uniform', 'bimodal', 'zipf')



###############################################################################
############################### Seeded streams ################################
###############################################################################

def deriveSeed(baseSeed, repeatIndex):
    """Seed of one repeat: mix64(base ^ repeat * golden gamma); (0, 0) -> 0."""
    return mix64((baseSeed ^ (repeatIndex * GOLDEN_GAMMA)) & MASK64)


def splitmixStream(state, count):
    """
    GOAL: First `count` outputs of the splitmix64 generator started at
          `state`: output i = mix64(state + (i + 1) * golden gamma).

    INPUTS: - state: 64-bit generator state.
            - count: Number of outputs.

    OUTPUTS: - values: uint64 array.
    """

    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over='ignore'):
        return mix64Array(np.uint64(state & MASK64) + steps * np.uint64(GOLDEN_GAMMA))


def generateKeys(count, baseSeed=BASE_SEED, repeatIndex=0):
    """
    GOAL: Generate the 64-bit key array of one repeat.

    INPUTS: - count: Number of keys (>= 1).
            - baseSeed: Experiment base seed.
            - repeatIndex: Repeat number.

    OUTPUTS: - keys: uint64 array.
    """

    if count < 1:
        raise ConfigurationError("At least one key must be generated.")
    return splitmixStream(deriveSeed(baseSeed, repeatIndex), count)


def generateFailureSet(nNodes, f, baseSeed=BASE_SEED, repeatIndex=0):
    """
    GOAL: Draw a uniform f-subset of the node ids. The nodes are ranked by a
          seeded hash and the f smallest ranks fail, so the sets of one repeat
          are nested across failure sizes.

    INPUTS: - nNodes: Number of nodes.
            - f: Number of failed nodes (0 <= f < nNodes).
            - baseSeed: Experiment base seed.
            - repeatIndex: Repeat number.

    OUTPUTS: - failed: Sorted tuple of failed node ids.
    """

    if not 0 <= f < nNodes:
        raise ConfigurationError("The failure size must satisfy 0 <= f < nodes (got f=" + str(f) + ").")
    state = deriveSeed(baseSeed ^ FAILURE_SALT, repeatIndex)
    ranks = splitmixStream(state, nNodes)
    order = np.argsort(ranks, kind='stable')
    return tuple(sorted(int(node) for node in order[:f]))


def fingerprint(values):
    """Short BLAKE2b digest of an array or tuple (cross-algorithm fairness checks)."""
    payload = np.ascontiguousarray(np.asarray(values, dtype=np.int64 if isinstance(values, tuple) else None))
    return hashlib.blake2b(payload.tobytes(), digest_size=8).hexdigest()



###############################################################################
########################### Class WorkloadGenerator ###########################
###############################################################################

class WorkloadGenerator:
    """
    GOAL: Generation of every workload of one experiment from its base seed.

    VARIABLES: - baseSeed: Experiment base seed.

    METHODS: - keys: Key array of a repeat.
             - failures: Failure set of a (repeat, f) cell.
             - weights: Node weight vector of a named profile.
    """

    def __init__(self, baseSeed=BASE_SEED):
        self.baseSeed = baseSeed


    def keys(self, count, repeatIndex=0):
        return generateKeys(count, self.baseSeed, repeatIndex)


    def failures(self, nNodes, f, repeatIndex=0):
        return generateFailureSet(nNodes, f, self.baseSeed, repeatIndex)


    def weights(self, nNodes, profile='uniform', exponent=1.0, ratio=4.0):
        """
        GOAL: Generate a node weight vector.

        INPUTS: - nNodes: Number of nodes.
                - profile: 'uniform' (all 1), 'bimodal' (every other node
                           `ratio` times heavier) or 'zipf' (1/rank^exponent,
                           ranks shuffled by the seed).
                - exponent: Zipf exponent.
                - ratio: Heavy/light ratio of the bimodal profile.

        OUTPUTS: - weights: float64 array of positive weights.
        """

        if profile == 'uniform':
            return np.ones(nNodes)
        elif profile == 'bimodal':
            if not ratio > 0:
                raise DomainError("The bimodal weight ratio must be positive.")
            weights = np.ones(nNodes)
            weights[1::2] = ratio
            return weights
        elif profile == 'zipf':
            ranks = np.argsort(splitmixStream(deriveSeed(self.baseSeed, nNodes), nNodes), kind='stable')
            return 1.0 / np.power(ranks + 1.0, exponent)
        raise ConfigurationError("Unsupported weight profile, expected one of: " + ", ".join(weightProfiles))
