# coding=utf-8

"""
Goal: Deterministic 64-bit hashing primitives shared by every placement scheme
      (ring position, per-(key, node) score, probe positions, weighted score).
      The constants are documented in HASHING.md so that ports stay bit-exact.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import hashlib
import math

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hashingErrors import DomainError



###############################################################################
################################ Global variables #############################
###############################################################################

# 64-bit arithmetic
MASK64 = (1 << 64) - 1
TWO64 = 2.0 ** 64

# splitmix64 finalizer constants
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB

# Domain-separation constants
SCORE_DOMAIN = 0xD6E8FEB86659FD93
PROBE_GAMMA = 0xC2B2AE3D27D4EB4F
DOUBLE_HASH_DOMAIN = 0x165667B19E3779F9

# Supported probe generation modes
probeModes = ('mix64', 'double-hash')

# numpy twins of the constants
_U30, _U27, _U31 = np.uint64(30), np.uint64(27), np.uint64(31)
_UMULT1, _UMULT2 = np.uint64(MIX_MULT_1), np.uint64(MIX_MULT_2)
_UGOLDEN = np.uint64(GOLDEN_GAMMA)
_USCORE = np.uint64(SCORE_DOMAIN)
_UPROBE = np.uint64(PROBE_GAMMA)
_UDOUBLE = np.uint64(DOUBLE_HASH_DOMAIN)
_UONE = np.uint64(1)



###############################################################################
################################ Class HashSeed ###############################
###############################################################################

@dataclass(frozen=True)
class HashSeed:
    """
    GOAL: Keying parameter of every hash function. The default mode is the
          unkeyed splitmix64 mixer; providing a secret switches the key
          pre-mix to a keyed BLAKE2b PRF for adversarial settings.

    VARIABLES: - seed: 64-bit unsigned seed.
               - secret: Optional PRF key (at most 64 bytes).
               - offset: Seed-derived additive offset (mix64 of the seed).
    """

    seed: int = 0
    secret: Optional[bytes] = None
    offset: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise DomainError("The hash seed must be a 64-bit unsigned integer.")
        if self.secret is not None and not 0 < len(self.secret) <= 64:
            raise DomainError("The PRF secret must hold between 1 and 64 bytes.")
        object.__setattr__(self, 'offset', mix64(self.seed))

    @property
    def keyed(self):
        return self.secret is not None



###############################################################################
############################## Scalar primitives ##############################
###############################################################################

def mix64(x):
    """
    GOAL: splitmix64 finalizer, a bijection of the 64-bit integers with
          avalanche-quality mixing.

    INPUTS: - x: Integer (reduced modulo 2^64).

    OUTPUTS: - z: Mixed 64-bit unsigned integer.
    """

    z = x & MASK64
    z = ((z ^ (z >> 30)) * MIX_MULT_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MULT_2) & MASK64
    return z ^ (z >> 31)


def _prf(key, secret):
    digest = hashlib.blake2b(key.to_bytes(8, 'little'), key=secret, digest_size=8).digest()
    return int.from_bytes(digest, 'little')


def _preimage(key, seed):
    # Keyed or unkeyed pre-mix shared by every hash of a key
    base = _prf(key & MASK64, seed.secret) if seed.keyed else key
    return (base + GOLDEN_GAMMA + seed.offset) & MASK64


def nodeMix(node):
    """Per-node term of the score hash."""
    return mix64((int(node) + 1) * GOLDEN_GAMMA)


def hashPos(key, seed=HashSeed()):
    """
    GOAL: Ring position of a key (or of an encoded (node, replica) pair).

    INPUTS: - key: 64-bit unsigned integer.
            - seed: HashSeed.

    OUTPUTS: - position: 64-bit unsigned ring position.
    """

    return mix64(_preimage(key, seed))


def hashScore(key, node, seed=HashSeed()):
    """
    GOAL: Rendezvous (HRW) score of a (key, node) pair, mixed in a domain
          separated from hashPos.

    INPUTS: - key: 64-bit unsigned integer.
            - node: Node id.
            - seed: HashSeed.

    OUTPUTS: - score: 64-bit unsigned score (larger wins).
    """

    keyMix = mix64(_preimage(key, seed) ^ SCORE_DOMAIN)
    return mix64(keyMix ^ nodeMix(node))


def unitScore(h):
    """Map a 64-bit hash to (0, 1] as (h + 1) / 2^64, never 0."""
    return (float(h) + 1.0) / TWO64


def weightedScore(key, node, weight, seed=HashSeed()):
    """
    GOAL: Exponential-race score -ln(u)/w of a (key, node) pair. The winner
          of a set is the candidate MINIMIZING this value, which with equal
          weights is the candidate maximizing hashScore.

    INPUTS: - key: 64-bit unsigned integer.
            - node: Node id.
            - weight: Strictly positive node weight.
            - seed: HashSeed.

    OUTPUTS: - score: Non-negative real.
    """

    if not weight > 0:
        raise DomainError("Node weights must be strictly positive.")
    return -math.log(unitScore(hashScore(key, node, seed))) / weight


def probeHash(key, probeIndex, seed=HashSeed(), mode='mix64'):
    """
    GOAL: Position of the probeIndex-th MPCH probe of a key. Probe 0 is
          hashPos(key) in both modes.

    INPUTS: - key: 64-bit unsigned integer.
            - probeIndex: Probe number (>= 0).
            - seed: HashSeed.
            - mode: 'mix64' (full remix per probe) or 'double-hash'
                    (h1 + j * h2 with h2 odd).

    OUTPUTS: - position: 64-bit unsigned probe position.
    """

    if probeIndex < 0:
        raise DomainError("The probe index must be non-negative.")
    pre = _preimage(key, seed)
    if mode == 'mix64':
        return mix64(pre ^ ((probeIndex * PROBE_GAMMA) & MASK64))
    elif mode == 'double-hash':
        h1 = mix64(pre)
        h2 = mix64(pre ^ DOUBLE_HASH_DOMAIN) | 1
        return (h1 + probeIndex * h2) & MASK64
    raise DomainError("Unsupported probe mode, expected one of: " + ", ".join(probeModes))



###############################################################################
############################# Vectorised primitives ###########################
###############################################################################

def _asU64(values):
    return np.asarray(values, dtype=np.uint64)


def mix64Array(x):
    """Vectorised mix64 over a uint64 array."""
    with np.errstate(over='ignore'):
        z = _asU64(x).copy()
        z = (z ^ (z >> _U30)) * _UMULT1
        z = (z ^ (z >> _U27)) * _UMULT2
        return z ^ (z >> _U31)


def _preimageArray(keys, seed):
    keys = _asU64(keys)
    if seed.keyed:
        keys = np.fromiter((_prf(int(k), seed.secret) for k in keys.ravel()),
                           dtype=np.uint64, count=keys.size).reshape(keys.shape)
    with np.errstate(over='ignore'):
        return keys + _UGOLDEN + np.uint64(seed.offset)


def nodeMixArray(nodes):
    with np.errstate(over='ignore'):
        return mix64Array((_asU64(nodes) + _UONE) * _UGOLDEN)


def hashPosArray(keys, seed=HashSeed()):
    """Vectorised hashPos."""
    return mix64Array(_preimageArray(keys, seed))


def keyScoreMixArray(keys, seed=HashSeed()):
    """
    GOAL: Per-key half of the score hash, computed once per key so that the
          scoring of several candidates costs one mix each.
    """

    return mix64Array(_preimageArray(keys, seed) ^ _USCORE)


def combineScoreArray(keyMix, nodeMixes):
    """Score from precomputed key and node terms (broadcasting)."""
    return mix64Array(_asU64(keyMix) ^ _asU64(nodeMixes))


def hashScoreArray(keys, nodes, seed=HashSeed()):
    """Vectorised hashScore; keys and nodes broadcast against each other."""
    return combineScoreArray(keyScoreMixArray(keys, seed), nodeMixArray(nodes))


def unitScoreArray(h):
    return (_asU64(h).astype(np.float64) + 1.0) / TWO64


def weightedScoreArray(scores, weights):
    """
    GOAL: Vectorised -ln(u)/w from precomputed 64-bit scores.

    INPUTS: - scores: uint64 hashScore values.
            - weights: Matching positive weights.

    OUTPUTS: - weighted: float64 array (smaller wins).
    """

    weights = np.asarray(weights, dtype=np.float64)
    if np.any(~(weights > 0)):
        raise DomainError("Node weights must be strictly positive.")
    return -np.log(unitScoreArray(scores)) / weights


def probeHashArray(keys, probeIndex, seed=HashSeed(), mode='mix64', pre=None):
    """
    GOAL: Vectorised probeHash for one probe index over a key array.

    INPUTS: - keys: uint64 keys.
            - probeIndex: Probe number (>= 0).
            - seed: HashSeed.
            - mode: 'mix64' or 'double-hash'.
            - pre: Optional precomputed key pre-images (saves the keyed pass).

    OUTPUTS: - positions: uint64 probe positions.
    """

    if probeIndex < 0:
        raise DomainError("The probe index must be non-negative.")
    if pre is None:
        pre = _preimageArray(keys, seed)
    if mode == 'mix64':
        gamma = np.uint64((probeIndex * PROBE_GAMMA) & MASK64)
        return mix64Array(pre ^ gamma)
    elif mode == 'double-hash':
        h1, h2 = doubleHashBasesArray(pre)
        with np.errstate(over='ignore'):
            return h1 + np.uint64(probeIndex) * h2
    raise DomainError("Unsupported probe mode, expected one of: " + ", ".join(probeModes))


def doubleHashBasesArray(pre):
    """(h1, h2) of double hashing from key pre-images; h2 is forced odd."""
    return mix64Array(pre), mix64Array(pre ^ _UDOUBLE) | _UONE


def probeMatrixArray(keys, probes, seed=HashSeed(), mode='mix64'):
    """
    GOAL: Generate every probe position of every key at once
          (probe generation only, used by the MPCH microbenchmark).

    INPUTS: - keys: uint64 keys.
            - probes: Number of probes P.
            - seed: HashSeed.
            - mode: 'mix64' or 'double-hash'.

    OUTPUTS: - positions: uint64 array of shape (P, len(keys)).
    """

    pre = _preimageArray(keys, seed)
    out = np.empty((probes, pre.size), dtype=np.uint64)
    if mode == 'mix64':
        for j in range(probes):
            out[j] = mix64Array(pre ^ np.uint64((j * PROBE_GAMMA) & MASK64))
    elif mode == 'double-hash':
        h1, h2 = doubleHashBasesArray(pre)
        out[0] = h1
        with np.errstate(over='ignore'):
            for j in range(1, probes):
                out[j] = out[j - 1] + h2
    else:
        raise DomainError("Unsupported probe mode, expected one of: " + ", ".join(probeModes))
    return out


def preimageArray(keys, seed=HashSeed()):
    """Public access to the key pre-images (probe loops reuse them)."""
    return _preimageArray(keys, seed)
