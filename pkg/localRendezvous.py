# coding=utf-8

"""
Goal: Local Rendezvous Hashing: a C-way HRW election among the C distinct
      nodes met by walking next-distinct offsets from a key's successor
      entry, with fixed-candidate liveness failover, block-extension
      fallback and a weighted (exponential race) variant.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import os

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hashFunctions import (HashSeed, hashPos, hashScore, weightedScore, hashPosArray,
                           keyScoreMixArray, nodeMixArray, combineScoreArray, weightedScoreArray)
from hashingErrors import ConfigurationError, DomainError, ScanExhaustedError
from tokenRing import lowerBound, lowerBoundArray



###############################################################################
################################ Global variables #############################
###############################################################################

# Default cap on ring entries visited before declaring an availability failure
maxScan = 4096

# Default number of distinct candidates
candidates = 8

# Evaluation semantics supported by assignAll
assignmentModes = ('all-alive', 'fixed-candidate', 'rebuild')



###############################################################################
################################ Domain types #################################
###############################################################################

@dataclass(frozen=True)
class CandidateSet:
    """The C distinct node ids of a key, the ring indices they came from and the
    number of entries the next-distinct walk visited to collect them."""

    nodes: tuple
    entryIndices: tuple
    walkSteps: int = 0


@dataclass(frozen=True)
class LookupResult:
    """Winning node, ring entries visited and block extensions used."""

    node: int
    scanSteps: int
    fallbackBlocks: int = 0


@dataclass
class AssignmentSnapshot:
    """
    GOAL: Result of one full mapping pass: the owner of every key and the
          scan steps each lookup needed.

    VARIABLES: - owners: Node id per key.
               - scanSteps: Ring entries visited per key.
               - fallbackBlocks: Window extensions per key (fixed-candidate).
    """

    owners: np.ndarray
    scanSteps: np.ndarray
    fallbackBlocks: Optional[np.ndarray] = None

    @property
    def kUsed(self):
        return len(self.owners)

    def loads(self, nodeSpan):
        """Number of keys owned by every node id in [0, nodeSpan)."""
        return np.bincount(self.owners, minlength=nodeSpan)

    def sameAs(self, other):
        return np.array_equal(self.owners, other.owners) and np.array_equal(self.scanSteps, other.scanSteps)



###############################################################################
############################## Class LivenessMask #############################
###############################################################################

class LivenessMask:
    """
    GOAL: Per-node alive/dead flags, mutable independently of the ring.

    VARIABLES:  - alive: Boolean flag per node id.

    METHODS:    - allAlive: Mask with every node alive.
                - fromFailed: Mask with a given failure set.
                - fail / recover: Flip one node.
    """

    def __init__(self, alive):
        self.alive = np.asarray(alive, dtype=bool).copy()


    @classmethod
    def allAlive(cls, nNodes):
        return cls(np.ones(nNodes, dtype=bool))


    @classmethod
    def fromFailed(cls, nNodes, failedSet):
        alive = np.ones(nNodes, dtype=bool)
        alive[np.asarray(sorted(failedSet), dtype=np.int64)] = False
        return cls(alive)


    @property
    def nAlive(self):
        return int(self.alive.sum())


    @property
    def nNodes(self):
        return len(self.alive)


    def aliveIds(self):
        return np.flatnonzero(self.alive)


    def failedIds(self):
        return np.flatnonzero(~self.alive)


    def fail(self, node):
        self.alive[node] = False


    def recover(self, node):
        self.alive[node] = True


    def isAlive(self, node):
        return bool(self.alive[node])



###############################################################################
############################### Class WeightTable #############################
###############################################################################

class WeightTable:
    """
    GOAL: Positive weight per node id, kept apart from the ring so that a
          weight update is O(1) and never touches the tokens.
    """

    def __init__(self, weights):
        weights = np.asarray(weights, dtype=np.float64).copy()
        if np.any(~(weights > 0)):
            raise DomainError("Node weights must be strictly positive.")
        self.weights = weights


    @classmethod
    def uniform(cls, nNodes, weight=1.0):
        return cls(np.full(nNodes, weight))


    def setWeight(self, node, weight):
        if not weight > 0:
            raise DomainError("Node weights must be strictly positive.")
        self.weights[node] = weight


    def __getitem__(self, node):
        return float(self.weights[node])


    @property
    def nbytes(self):
        return self.weights.nbytes



###############################################################################
################################ Key partitioning #############################
###############################################################################

def resolveWorkers(workers):
    """0 means one worker per available CPU."""
    return max(1, os.cpu_count() or 1) if not workers else int(workers)


def partitionedMap(function, keys, workers=1):
    """
    GOAL: Apply a per-chunk assignment function over contiguous key ranges
          on a thread pool and concatenate the chunk results in key order,
          so the output does not depend on the worker count.

    INPUTS: - function: Callable(keyChunk) -> AssignmentSnapshot.
            - keys: uint64 key array.
            - workers: Number of workers (0 = auto).

    OUTPUTS: - snapshot: AssignmentSnapshot over every key.
    """

    workers = resolveWorkers(workers)
    keys = np.asarray(keys, dtype=np.uint64)
    if workers == 1 or len(keys) < 2 * workers:
        return function(keys)
    chunks = np.array_split(keys, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(function, chunks))
    blocks = None
    if all(part.fallbackBlocks is not None for part in parts):
        blocks = np.concatenate([part.fallbackBlocks for part in parts])
    return AssignmentSnapshot(np.concatenate([part.owners for part in parts]),
                              np.concatenate([part.scanSteps for part in parts]), blocks)



###############################################################################
############################ Class LocalRendezvous ############################
###############################################################################

class LocalRendezvous:
    """
    GOAL: LRH lookups over a fixed token ring.

    VARIABLES:  - ring: TokenRing (read-only).
                - c: Number of distinct candidates C.
                - seed: HashSeed of the key positions and scores.
                - maxScan: Cap on ring entries visited per failover lookup.

    METHODS:    - candidates: Static candidate set of a key.
                - lookup: HRW winner among the candidates.
                - lookupWeighted: Weighted (exponential race) winner.
                - lookupFixedCandidate: Best alive candidate, with block
                                        extension when all C are dead.
                - assignAll: Map a whole key array under one semantics.
    """

    def __init__(self, ring, c=candidates, seed=None, maxScan=maxScan):
        if c < 1:
            raise ConfigurationError("The candidate count C must be at least 1.")
        if c > ring.nNodes:
            raise ConfigurationError("The candidate count C (" + str(c) + ") exceeds the number of distinct nodes ("
                                     + str(ring.nNodes) + ").")
        if maxScan < c:
            raise ConfigurationError("The scan cap must be at least C.")
        self.ring = ring
        self.c = c
        self.seed = ring.seed if seed is None else seed
        self.maxScan = maxScan
        self._nodes = ring.nodes.astype(np.int64)
        self._deltas = ring.deltas.astype(np.int64)
        self._nodeMix = nodeMixArray(np.arange(ring.nodeSpan))


    # Scalar path

    def _walk(self, key):
        """Yield (entry index, node) along the next-distinct walk from the key's successor."""
        index = lowerBound(self.ring, hashPos(key, self.seed))
        size = self.ring.size
        while True:
            yield index, int(self._nodes[index])
            index = (index + int(self._deltas[index])) % size


    def candidates(self, key):
        """
        GOAL: Compute the static candidate set of a key: the first C distinct
              node ids met along the next-distinct walk (ids already met are
              skipped without being scored).

        INPUTS: - key: 64-bit unsigned key.

        OUTPUTS: - candidateSet: CandidateSet.
        """

        nodes, indices = [], []
        for steps, (index, node) in enumerate(self._walk(key), 1):
            if node not in nodes:
                nodes.append(node)
                indices.append(index)
                if len(nodes) == self.c:
                    return CandidateSet(tuple(nodes), tuple(indices), steps)


    def _best(self, key, nodes):
        # Max hashScore, ties -> smaller node id
        return min(nodes, key=lambda node: (-hashScore(key, node, self.seed), node))


    def _bestWeighted(self, key, nodes, weights):
        # Min -ln(u)/w, ties -> max hashScore -> smaller node id
        return min(nodes, key=lambda node: (weightedScore(key, node, weights[node], self.seed),
                                            -hashScore(key, node, self.seed), node))


    def lookup(self, key):
        """
        GOAL: Select the candidate with the maximum HRW score.

        INPUTS: - key: 64-bit unsigned key.

        OUTPUTS: - result: LookupResult (scanSteps = entries visited).
        """

        candidateSet = self.candidates(key)
        return LookupResult(self._best(key, candidateSet.nodes), candidateSet.walkSteps, 0)


    def lookupWeighted(self, key, weights):
        """
        GOAL: Select the candidate minimizing -ln(u)/w; ties fall back to the
              raw score (then the smaller id), so uniform weights reproduce
              lookup exactly.

        INPUTS: - key: 64-bit unsigned key.
                - weights: WeightTable.

        OUTPUTS: - result: LookupResult.
        """

        candidateSet = self.candidates(key)
        return LookupResult(self._bestWeighted(key, candidateSet.nodes, weights), candidateSet.walkSteps, 0)


    def lookupFixedCandidate(self, key, mask, weights=None):
        """
        GOAL: Among the static candidate set choose the highest-scoring alive
              node. If all C are dead, extend the window by further blocks of
              C distinct candidates (never re-examining an id seen in an
              earlier block) until an alive node is found. When the scan
              cap cuts a block short, the alive members of the partial
              block still compete.

        INPUTS: - key: 64-bit unsigned key.
                - mask: LivenessMask.
                - weights: Optional WeightTable (weighted election).

        OUTPUTS: - result: LookupResult (scanSteps = entries visited).
        """

        if mask.nAlive < 1:
            raise ScanExhaustedError("No alive node: every lookup fails.")
        seen = set()
        examined = 0
        blocks = 0
        walk = self._walk(key)
        totalNodes = self.ring.nNodes
        while True:
            block = []
            while len(block) < self.c and len(seen) < totalNodes and examined < self.maxScan:
                _, node = next(walk)
                examined += 1
                if node not in seen:
                    seen.add(node)
                    block.append(node)
            alive = [node for node in block if mask.isAlive(node)]
            if alive:
                if weights is None:
                    winner = self._best(key, alive)
                else:
                    winner = self._bestWeighted(key, alive, weights)
                return LookupResult(winner, examined, blocks)
            if examined >= self.maxScan:
                raise ScanExhaustedError("Scan cap of " + str(self.maxScan) + " reached for key " + str(key) + ".")
            if len(seen) >= totalNodes:
                raise ScanExhaustedError("Every ring node was examined without finding an alive one.")
            blocks += 1


    # Vectorised path

    def candidateMatrix(self, keys):
        """
        GOAL: Candidate sets of a whole key array.

        INPUTS: - keys: uint64 key array.

        OUTPUTS: - nodes: int64 array (K, C) of candidate ids in walk order.
                 - indices: int64 array (K, C) of the matching ring indices.
        """

        nodes, indices, _ = self.walkMatrix(keys)
        return nodes, indices


    def walkMatrix(self, keys):
        """Candidate ids, ring indices and entries visited (K,) of a whole key array."""
        keys = np.asarray(keys, dtype=np.uint64)
        return self.candidateWalk(lowerBoundArray(self.ring, hashPosArray(keys, self.seed)))


    def candidatesFromIndex(self, startIndices):
        """
        GOAL: Candidate sets of the walks starting at given ring indices (every
              key whose successor is that entry shares the set).

        INPUTS: - startIndices: Ring indices.

        OUTPUTS: - nodes, indices: int64 arrays of shape (len(startIndices), C).
        """

        nodes, indices, _ = self.candidateWalk(startIndices)
        return nodes, indices


    def candidateWalk(self, startIndices):
        """
        GOAL: Run the next-distinct walks from given ring indices in lockstep
              until every walk holds C distinct node ids.

        INPUTS: - startIndices: Ring indices.

        OUTPUTS: - nodes, indices: int64 arrays of shape (len(startIndices), C).
                 - walkSteps: int32 array, entries visited by every walk.
        """

        index = np.array(startIndices, dtype=np.int64)
        count = len(index)
        size = self.ring.size
        nodes = np.full((count, self.c), -1, dtype=np.int64)
        indices = np.full((count, self.c), -1, dtype=np.int64)
        filled = np.zeros(count, dtype=np.int64)
        walkSteps = np.zeros(count, dtype=np.int32)
        active = np.arange(count)
        steps = 0
        while active.size:
            current = index[active]
            node = self._nodes[current]
            walkSteps[active] += 1
            fresh = ~(nodes[active] == node[:, None]).any(axis=1)
            taken = active[fresh]
            slot = filled[taken]
            nodes[taken, slot] = node[fresh]
            indices[taken, slot] = current[fresh]
            filled[taken] += 1
            index[active] = (current + self._deltas[current]) % size
            active = active[filled[active] < self.c]
            steps += 1
            if steps > size:
                raise ConfigurationError("Candidate walk did not collect C distinct nodes.")
        return nodes, indices, walkSteps


    def _electArray(self, keys, nodes, valid, weights=None):
        # Winner per row among valid columns: max score (or min weighted score), ties -> smaller id
        scores = combineScoreArray(keyScoreMixArray(keys, self.seed)[:, None], self._nodeMix[nodes])
        if weights is None:
            best = np.where(valid, scores, np.uint64(0)).max(axis=1)
            winners = valid & (scores == best[:, None])
        else:
            race = np.where(valid, weightedScoreArray(scores, weights.weights[nodes]), np.inf)
            lowest = race.min(axis=1)
            tied = valid & (race == lowest[:, None])
            best = np.where(tied, scores, np.uint64(0)).max(axis=1)
            winners = tied & (scores == best[:, None])
        return np.where(winners, nodes, np.iinfo(np.int64).max).min(axis=1)


    def _assignChunk(self, keys, mask, weights):
        nodes, _, scanSteps = self.walkMatrix(keys)
        blocks = np.zeros(len(keys), dtype=np.int32)
        if mask is None:
            valid = np.ones(nodes.shape, dtype=bool)
            fallback = np.zeros(len(keys), dtype=bool)
        else:
            valid = mask.alive[nodes]
            fallback = ~valid.any(axis=1) | (scanSteps > self.maxScan)
        owners = self._electArray(keys, nodes, valid, weights)

        # All C candidates dead or the first block cut by the cap: scalar path
        for row in np.flatnonzero(fallback):
            result = self.lookupFixedCandidate(int(keys[row]), mask, weights)
            owners[row] = result.node
            scanSteps[row] = result.scanSteps
            blocks[row] = result.fallbackBlocks
        return AssignmentSnapshot(owners, scanSteps, blocks)


    def assignAll(self, keys, mode='all-alive', mask=None, weights=None, workers=1):
        """
        GOAL: Map every key under one evaluation semantics.

        INPUTS: - keys: uint64 key array.
                - mode: 'all-alive', 'fixed-candidate' (original ring + mask)
                        or 'rebuild' (this ring must hold alive nodes only).
                - mask: LivenessMask (fixed-candidate, optional for rebuild).
                - weights: Optional WeightTable.
                - workers: Number of key-range workers (0 = auto).

        OUTPUTS: - snapshot: AssignmentSnapshot.
        """

        if mode not in assignmentModes:
            raise ConfigurationError("Unsupported assignment mode, expected one of: " + ", ".join(assignmentModes))
        if mode == 'fixed-candidate':
            if mask is None:
                raise ConfigurationError("The fixed-candidate mode requires a liveness mask.")
            if mask.nAlive < 1:
                raise ScanExhaustedError("No alive node: every lookup fails.")
            if mask.nNodes < self.ring.nodeSpan:
                raise ConfigurationError("The liveness mask does not cover every ring node.")
        elif mode == 'rebuild' and mask is not None and not mask.alive[self.ring.nodeIds].all():
            raise ConfigurationError("The rebuild mode expects a ring rebuilt over alive nodes only.")
        activeMask = mask if mode == 'fixed-candidate' else None
        return partitionedMap(lambda chunk: self._assignChunk(chunk, activeMask, weights), keys, workers)
