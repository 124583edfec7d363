# coding=utf-8

"""
Goal: Build and query the sorted token ring with next-distinct offsets,
      plus a little-endian binary dump/load so rings can be reused across runs.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import os
import hashlib

from dataclasses import dataclass

import numpy as np

from hashFunctions import HashSeed, hashPosArray, MASK64, TWO64
from hashingErrors import ConfigurationError



###############################################################################
################################ Global variables #############################
###############################################################################

# Binary layout of a dumped ring (little-endian, packed)
RING_MAGIC = b'LRHRING1'
headerLayout = np.dtype([('magic', 'S8'), ('nNodes', '<u4'), ('vnodes', '<u4'),
                         ('seed', '<u8'), ('size', '<u8')])
entryLayout = np.dtype([('token', '<u8'), ('node', '<u4'), ('replica', '<u4'), ('delta', '<u4')])



###############################################################################
################################ Domain types #################################
###############################################################################

@dataclass(frozen=True)
class RingEntry:
    """One token on the ring: (token, node id, next-distinct offset)."""

    token: int
    node: int
    delta: int
    replica: int = 0


@dataclass(frozen=True)
class GapProfile:
    """
    GOAL: Cyclic successor-token gaps normalized by 2^64 (sum to 1).
          gaps[i] is the arc between token i and token i+1; every key in that
          arc has successor index i+1.
    """

    gaps: np.ndarray

    @property
    def size(self):
        return len(self.gaps)



###############################################################################
############################### Class TokenRing ###############################
###############################################################################

class TokenRing:
    """
    GOAL: Immutable sorted array of N.V ring entries with next-distinct
          offsets, stored column-wise (numpy arrays).

    VARIABLES:  - tokens: uint64 ring positions (ascending).
                - nodes: Node id of every entry.
                - replicas: Replica (vnode) index of every entry.
                - deltas: Next-distinct offset of every entry.
                - nodeIds: Sorted distinct node ids present on the ring.
                - vnodes: Tokens per node (V).
                - seed: HashSeed used for the token positions.

    METHODS:    - entry: Return the RingEntry at an index.
                - toBytes: Serialize with the documented binary layout.
    """

    def __init__(self, tokens, nodes, replicas, deltas, vnodes, seed):
        self.tokens = tokens
        self.nodes = nodes
        self.replicas = replicas
        self.deltas = deltas
        self.vnodes = vnodes
        self.seed = seed
        self.nodeIds = np.unique(nodes)
        for array in (self.tokens, self.nodes, self.replicas, self.deltas):
            array.setflags(write=False)


    @property
    def nNodes(self):
        return len(self.nodeIds)


    @property
    def nodeSpan(self):
        """Length of a per-node array able to index every node id."""
        return int(self.nodeIds[-1]) + 1


    @property
    def size(self):
        return len(self.tokens)


    def __len__(self):
        return self.size


    def entry(self, index):
        return RingEntry(int(self.tokens[index]), int(self.nodes[index]),
                         int(self.deltas[index]), int(self.replicas[index]))


    @property
    def entries(self):
        return [self.entry(i) for i in range(self.size)]


    @property
    def nbytes(self):
        return self.size * entryLayout.itemsize


    def toBytes(self):
        """
        GOAL: Serialize the ring with the documented little-endian layout
              (header followed by packed entries).

        INPUTS: /

        OUTPUTS: - payload: bytes.
        """

        header = np.zeros(1, dtype=headerLayout)
        header['magic'] = RING_MAGIC
        header['nNodes'] = self.nNodes
        header['vnodes'] = self.vnodes
        header['seed'] = self.seed.seed
        header['size'] = self.size
        body = np.empty(self.size, dtype=entryLayout)
        body['token'] = self.tokens
        body['node'] = self.nodes
        body['replica'] = self.replicas
        body['delta'] = self.deltas
        return header.tobytes() + body.tobytes()



###############################################################################
############################### Ring operations ###############################
###############################################################################

def buildNextDistinct(nodeSequence):
    """
    GOAL: Fill the next-distinct offsets of a sorted entry sequence with the
          persistent two-pointer scan (O(|R|) time, O(1) extra memory).

    INPUTS: - nodeSequence: Node id of every entry, in ring order.

    OUTPUTS: - deltas: uint32 array, deltas[i] = smallest positive offset
                       (wrapping) to an entry of a different node.
    """

    sequence = np.asarray(nodeSequence).tolist()
    m = len(sequence)
    if m == 0 or len(set(sequence)) < 2:
        raise ConfigurationError("Next-distinct offsets need at least two distinct node ids.")

    deltas = [0] * m
    j = 1
    for i in range(m):
        if j <= i:
            j = i + 1
        node = sequence[i]
        while sequence[j % m] == node:
            j += 1
        deltas[i] = j - i
    return np.asarray(deltas, dtype=np.uint32)


def encodeReplica(nodes, replicas):
    """Pack node id (high 32 bits) and replica index (low 32 bits)."""
    return (np.asarray(nodes, dtype=np.uint64) << np.uint64(32)) | np.asarray(replicas, dtype=np.uint64)


def buildRing(nNodes, vnodes, seed=HashSeed(), nodeIds=None):
    """
    GOAL: Build the token ring of nNodes physical nodes with vnodes tokens
          each. Token of (node n, replica r) = hashPos(n << 32 | r).

    INPUTS: - nNodes: Number of physical nodes (ids 0..nNodes-1).
            - vnodes: Tokens per node (V >= 1).
            - seed: HashSeed.
            - nodeIds: Optional explicit node ids (e.g. the survivors of a
                       failure, keeping their original ids).

    OUTPUTS: - ring: TokenRing.
    """

    if nodeIds is None:
        nodeIds = np.arange(nNodes, dtype=np.int64)
    nodeIds = np.unique(np.asarray(nodeIds, dtype=np.int64))
    if len(nodeIds) < 2:
        raise ConfigurationError("A ring needs at least 2 nodes (next-distinct offsets are undefined otherwise).")
    if vnodes < 1:
        raise ConfigurationError("The number of vnodes per node must be at least 1.")

    nodes = np.repeat(nodeIds, vnodes)
    replicas = np.tile(np.arange(vnodes, dtype=np.int64), len(nodeIds))
    tokens = hashPosArray(encodeReplica(nodes, replicas), seed)

    # Sort by the (token, node, replica) triple so colliding tokens stay ordered
    order = np.lexsort((replicas, nodes, tokens))
    nodes = nodes[order]
    deltas = buildNextDistinct(nodes)
    return TokenRing(tokens[order], nodes, replicas[order].astype(np.uint32), deltas, vnodes, seed)


def lowerBound(ring, h):
    """
    GOAL: Smallest index whose token is >= h, wrapping to 0 past the last token.

    INPUTS: - ring: TokenRing.
            - h: 64-bit ring position.

    OUTPUTS: - index: Ring index.
    """

    index = int(np.searchsorted(ring.tokens, np.uint64(h & MASK64), side='left'))
    return 0 if index == ring.size else index


def lowerBoundArray(ring, positions):
    """Vectorised lowerBound."""
    index = np.searchsorted(ring.tokens, np.asarray(positions, dtype=np.uint64), side='left')
    index[index == ring.size] = 0
    return index


def gapProfile(ring):
    """
    GOAL: Cyclic successor-token gaps of the ring, normalized by 2^64.

    INPUTS: - ring: TokenRing.

    OUTPUTS: - profile: GapProfile with ring.size gaps summing to 1.
    """

    tokens = ring.tokens
    if ring.size == 1:
        return GapProfile(np.ones(1))
    gaps = np.empty(ring.size, dtype=np.float64)
    gaps[:-1] = np.diff(tokens).astype(np.float64) / TWO64
    span = int(tokens[-1]) - int(tokens[0])
    gaps[-1] = float((1 << 64) - span) / TWO64
    return GapProfile(gaps)


def saveRing(ring, path):
    """
    GOAL: Dump a ring to disk with the documented binary layout.

    INPUTS: - ring: TokenRing.
            - path: Destination file.

    OUTPUTS: /
    """

    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, 'wb') as fileHandler:
        fileHandler.write(ring.toBytes())


def loadRing(path, secret=None):
    """
    GOAL: Load a ring dumped by saveRing.

    INPUTS: - path: Source file.
            - secret: PRF secret if the ring was built with a keyed seed.

    OUTPUTS: - ring: TokenRing.
    """

    with open(path, 'rb') as fileHandler:
        payload = fileHandler.read()
    header = np.frombuffer(payload, dtype=headerLayout, count=1)[0]
    if bytes(header['magic']) != RING_MAGIC:
        raise ConfigurationError("The file " + str(path) + " is not a dumped ring.")
    body = np.frombuffer(payload, dtype=entryLayout, count=int(header['size']), offset=headerLayout.itemsize)
    seed = HashSeed(int(header['seed']), secret)
    return TokenRing(body['token'].astype(np.uint64), body['node'].astype(np.int64),
                     body['replica'].astype(np.uint32), body['delta'].astype(np.uint32),
                     int(header['vnodes']), seed)


def cachedRing(nNodes, vnodes, seed, directory):
    """
    GOAL: Load the ring of (nNodes, vnodes, seed) from a cache directory,
          building and dumping it on a miss.

    INPUTS: - nNodes: Number of physical nodes.
            - vnodes: Tokens per node.
            - seed: HashSeed.
            - directory: Cache directory.

    OUTPUTS: - ring: TokenRing.
    """

    tag = 'S' + str(seed.seed)
    if seed.keyed:
        tag += 'K' + hashlib.blake2b(seed.secret, digest_size=4).hexdigest()
    path = os.path.join(directory, 'ring_N' + str(nNodes) + '_V' + str(vnodes) + '_' + tag + '.bin')
    if os.path.exists(path):
        ring = loadRing(path, seed.secret)
        if ring.nNodes == nNodes and ring.vnodes == vnodes:
            return ring
    ring = buildRing(nNodes, vnodes, seed)
    saveRing(ring, path)
    return ring
