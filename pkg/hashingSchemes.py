# coding=utf-8

"""
Goal: Implementing the reference placement schemes compared against LRH
      (ring consistent hashing, multi-probe CH, Jump, Maglev, full HRW and a
      CRUSH-like two-level rendezvous), each under an explicit failure
      handling semantics.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from hashFunctions import (HashSeed, MASK64, PROBE_GAMMA, hashPosArray, preimageArray, probeHashArray,
                           mix64Array, nodeMixArray, combineScoreArray, keyScoreMixArray)
from hashingErrors import ConfigurationError, ScanExhaustedError
from tokenRing import buildRing, cachedRing, lowerBoundArray
from localRendezvous import LocalRendezvous, LivenessMask, AssignmentSnapshot, LookupResult, partitionedMap



###############################################################################
################################ Global variables #############################
###############################################################################

# Default scheme parameters (full-scale values)
maxScan = 4096
mpProbes = 8
maglevSize = 65537
crushRackSize = 50
crushBucketProbes = 8
crushLeafProbes = 8
crushTries = 16
hrwFullMaxN = 2000
hrwSampleKeys = 2000000

# Jump consistent hash linear congruential multiplier
JUMP_MULTIPLIER = 2862933555777941757

# Salts separating the CRUSH-like rack and leaf score domains
RACK_SALT = 0x8CB92BA72F3D8DD7
LEAF_SALT = 0xA0761D6478BD642F



###############################################################################
################################ Domain types #################################
###############################################################################

@dataclass
class MaglevTable:
    """
    GOAL: Maglev lookup table of prime size M.

    VARIABLES: - table: Node id of every slot.
               - mSize: Prime table size M.
               - nodes: Node ids that populated the table.
               - offsets / skips: Permutation state per node.
               - seed: HashSeed of the key positions.
    """

    table: np.ndarray
    mSize: int
    nodes: np.ndarray
    offsets: np.ndarray
    skips: np.ndarray
    seed: HashSeed

    @property
    def nbytes(self):
        return self.table.nbytes


@dataclass(frozen=True)
class CrushTopology:
    """
    GOAL: Two-level rack model: node n belongs to rack n // rackSize (the
          last rack may be short).
    """

    nNodes: int
    rackSize: int
    bucketProbes: int = crushBucketProbes
    leafProbes: int = crushLeafProbes
    tries: int = crushTries

    def __post_init__(self):
        if self.nNodes < 1 or self.rackSize < 1:
            raise ConfigurationError("A CRUSH-like topology needs at least one node and a positive rack size.")
        if min(self.bucketProbes, self.leafProbes, self.tries) < 1:
            raise ConfigurationError("The CRUSH-like probe and retry counts must be positive.")

    @property
    def nRacks(self):
        return -(-self.nNodes // self.rackSize)

    def rackOf(self, node):
        return node // self.rackSize

    def rackMembers(self, rack):
        return np.arange(rack * self.rackSize, min((rack + 1) * self.rackSize, self.nNodes))

    def rackCounts(self):
        starts = np.arange(self.nRacks, dtype=np.int64) * self.rackSize
        return np.minimum(self.rackSize, self.nNodes - starts)



###############################################################################
############################## Ring with next-alive ###########################
###############################################################################

def _aliveArray(mask):
    return None if mask is None else mask.alive


def nextAliveIndexArray(ring, positions, alive=None, maxScan=maxScan):
    """
    GOAL: Successor entry of every position, stepping entry by entry (+1,
          not next-distinct) past entries whose node is dead.

    INPUTS: - ring: TokenRing.
            - positions: uint64 ring positions.
            - alive: Optional boolean flag per node id.
            - maxScan: Cap on entries examined.

    OUTPUTS: - index: Ring index of the first alive entry.
             - steps: Entries examined per position (1 when the successor is alive).
    """

    index = lowerBoundArray(ring, positions).astype(np.int64)
    steps = np.ones(len(index), dtype=np.int32)
    if alive is None:
        return index, steps
    nodes = ring.nodes
    active = np.flatnonzero(~alive[nodes[index]])
    examined = 1
    while active.size:
        if examined >= maxScan:
            raise ScanExhaustedError("Next-alive scan reached the cap of " + str(maxScan) + " entries.")
        index[active] = (index[active] + 1) % ring.size
        steps[active] += 1
        examined += 1
        active = active[~alive[nodes[index[active]]]]
    return index, steps


def ringAssignArray(ring, keys, alive=None, seed=None, maxScan=maxScan):
    """Vectorised ring next-alive assignment: (owners, steps)."""
    seed = ring.seed if seed is None else seed
    index, steps = nextAliveIndexArray(ring, hashPosArray(keys, seed), alive, maxScan)
    return ring.nodes[index].astype(np.int64), steps


def ringLookupNextAlive(ring, key, mask=None, maxScan=maxScan, seed=None):
    """
    GOAL: Classic ring successor of a key; if its node is dead, step to the
          following entries until an alive node is met.

    INPUTS: - ring: TokenRing.
            - key: 64-bit unsigned key.
            - mask: Optional LivenessMask.
            - maxScan: Cap on entries examined.
            - seed: HashSeed (defaults to the ring's).

    OUTPUTS: - result: LookupResult (scanSteps = entries examined).
    """

    owners, steps = ringAssignArray(ring, np.array([key], dtype=np.uint64), _aliveArray(mask), seed, maxScan)
    return LookupResult(int(owners[0]), int(steps[0]), 0)



###############################################################################
############################ Multi-probe ring (MPCH) ##########################
###############################################################################

def mpchAssignArray(ring, keys, probes, alive=None, seed=None, probeMode='mix64', maxScan=maxScan):
    """
    GOAL: Multi-probe consistent hashing over a key array. Every probe walks
          to its next alive successor; the key goes to the probe with the
          smallest clockwise distance (ties to the lower probe index).

    INPUTS: - ring: TokenRing.
            - keys: uint64 keys.
            - probes: Number of probes P >= 1.
            - alive: Optional boolean flag per node id.
            - seed: HashSeed (defaults to the ring's).
            - probeMode: 'mix64' or 'double-hash'.
            - maxScan: Cap on entries examined per probe.

    OUTPUTS: - owners: int64 node id per key.
             - steps: Entries examined per key over every probe.
    """

    if probes < 1:
        raise ConfigurationError("MPCH needs at least one probe.")
    seed = ring.seed if seed is None else seed
    keys = np.asarray(keys, dtype=np.uint64)
    pre = preimageArray(keys, seed)
    bestDistance = np.full(len(keys), np.iinfo(np.uint64).max, dtype=np.uint64)
    bestIndex = np.zeros(len(keys), dtype=np.int64)
    steps = np.zeros(len(keys), dtype=np.int32)
    for probe in range(probes):
        positions = probeHashArray(keys, probe, seed, probeMode, pre=pre)
        index, probeSteps = nextAliveIndexArray(ring, positions, alive, maxScan)
        with np.errstate(over='ignore'):
            distance = ring.tokens[index] - positions
        closer = distance < bestDistance
        if probe == 0:
            closer[:] = True
        bestDistance[closer] = distance[closer]
        bestIndex[closer] = index[closer]
        steps += probeSteps
    return ring.nodes[bestIndex].astype(np.int64), steps


def mpchLookup(ring, key, probes, mask=None, seed=None, probeMode='mix64', maxScan=maxScan):
    """Single-key MPCH lookup returning a LookupResult."""
    owners, steps = mpchAssignArray(ring, np.array([key], dtype=np.uint64), probes,
                                    _aliveArray(mask), seed, probeMode, maxScan)
    return LookupResult(int(owners[0]), int(steps[0]), 0)



###############################################################################
#################################### Maglev ###################################
###############################################################################

def isPrime(number):
    """Trial division primality test (Maglev table sizes)."""
    if number < 2:
        return False
    if number % 2 == 0:
        return number == 2
    divisor = 3
    while divisor * divisor <= number:
        if number % divisor == 0:
            return False
        divisor += 2
    return True


def maglevBuild(nNodes, mSize=maglevSize, mask=None, seed=HashSeed()):
    """
    GOAL: Populate a Maglev lookup table over the alive nodes: every node
          walks its (offset, skip) preference list and claims its next free
          slot in round-robin order until the table is full.

    INPUTS: - nNodes: Number of configured nodes.
            - mSize: Prime table size M.
            - mask: Optional LivenessMask (dead nodes take no slot).
            - seed: HashSeed.

    OUTPUTS: - table: MaglevTable.
    """

    if not isPrime(mSize):
        raise ConfigurationError("The Maglev table size must be prime, got " + str(mSize) + ".")
    nodes = np.arange(nNodes, dtype=np.int64) if mask is None else mask.aliveIds()
    if len(nodes) == 0:
        raise ConfigurationError("A Maglev table needs at least one alive node.")

    offsets = (hashPosArray(nodes, seed) % np.uint64(mSize)).astype(np.int64)
    skips = (probeHashArray(nodes, 1, seed) % np.uint64(mSize - 1)).astype(np.int64) + 1
    offsetList, skipList, nodeList = offsets.tolist(), skips.tolist(), nodes.tolist()

    entries = [-1] * mSize
    nexts = [0] * len(nodeList)
    filled = 0
    while filled < mSize:
        for i in range(len(nodeList)):
            slot = (offsetList[i] + nexts[i] * skipList[i]) % mSize
            while entries[slot] >= 0:
                nexts[i] += 1
                slot = (offsetList[i] + nexts[i] * skipList[i]) % mSize
            entries[slot] = nodeList[i]
            nexts[i] += 1
            filled += 1
            if filled == mSize:
                break
    return MaglevTable(np.asarray(entries, dtype=np.int32), mSize, nodes, offsets, skips, seed)


def maglevLookup(table, key):
    """table[hashPos(key) mod M]."""
    return int(maglevLookupArray(table, np.array([key], dtype=np.uint64))[0])


def maglevLookupArray(table, keys):
    slots = (hashPosArray(keys, table.seed) % np.uint64(table.mSize)).astype(np.int64)
    return table.table[slots].astype(np.int64)



###############################################################################
############################# Jump consistent hash ############################
###############################################################################

def jumpLookup(key, nBuckets):
    """
    GOAL: Jump consistent hash of a 64-bit key over buckets 0..nBuckets-1.

    INPUTS: - key: 64-bit unsigned key.
            - nBuckets: Number of buckets (>= 1).

    OUTPUTS: - bucket: Bucket id.
    """

    if nBuckets < 1:
        raise ConfigurationError("Jump hashing needs at least one bucket.")
    key &= MASK64
    b, j = -1, 0
    while j < nBuckets:
        b = j
        key = (key * JUMP_MULTIPLIER + 1) & MASK64
        j = int(float(b + 1) * (float(1 << 31) / float((key >> 33) + 1)))
    return b


def jumpAssignArray(keys, nBuckets):
    """Vectorised jumpLookup."""
    if nBuckets < 1:
        raise ConfigurationError("Jump hashing needs at least one bucket.")
    state = np.asarray(keys, dtype=np.uint64).copy()
    buckets = np.full(len(state), -1, dtype=np.int64)
    jumps = np.zeros(len(state), dtype=np.int64)
    active = np.arange(len(state))
    multiplier = np.uint64(JUMP_MULTIPLIER)
    while active.size:
        buckets[active] = jumps[active]
        with np.errstate(over='ignore'):
            state[active] = state[active] * multiplier + np.uint64(1)
        ratio = float(1 << 31) / ((state[active] >> np.uint64(33)).astype(np.float64) + 1.0)
        jumps[active] = ((buckets[active] + 1).astype(np.float64) * ratio).astype(np.int64)
        active = active[jumps[active] < nBuckets]
    return buckets



###############################################################################
############################## Full rendezvous (HRW) ##########################
###############################################################################

def hrwAssignArray(keys, nodes, seed=HashSeed()):
    """
    GOAL: argmax hashScore over a node set for every key (ties to the
          smaller id). O(K.N) scores, computed one node at a time.

    INPUTS: - keys: uint64 keys.
            - nodes: Candidate node ids.
            - seed: HashSeed.

    OUTPUTS: - owners: int64 node id per key.
    """

    keys = np.asarray(keys, dtype=np.uint64)
    nodes = np.sort(np.asarray(nodes, dtype=np.int64))
    keyMix = keyScoreMixArray(keys, seed)
    nodeMixes = nodeMixArray(nodes)
    owners = np.full(len(keys), nodes[0], dtype=np.int64)
    best = combineScoreArray(keyMix, nodeMixes[0])
    for node, mix in zip(nodes[1:], nodeMixes[1:]):
        score = combineScoreArray(keyMix, mix)
        better = score > best
        best[better] = score[better]
        owners[better] = node
    return owners


def hrwLookup(key, mask, nNodes, seed=HashSeed()):
    """Global HRW winner among the alive nodes (all nodes when mask is None)."""
    nodes = np.arange(nNodes) if mask is None else mask.aliveIds()
    return int(hrwAssignArray(np.array([key], dtype=np.uint64), nodes, seed)[0])



###############################################################################
############################## CRUSH-like placement ###########################
###############################################################################

def _probeSalt(index):
    return np.uint64((index * PROBE_GAMMA) & MASK64)


def crushAssignArray(topology, keys, alive=None, seed=HashSeed()):
    """
    GOAL: Two-level rendezvous placement. For every attempt, sample
          bucketProbes racks and keep the best-scoring one, then sample
          leafProbes members of that rack and keep the best-scoring one.
          A dead choice retries with the next attempt salt; after `tries`
          attempts the key falls back to global HRW over the alive nodes.

    INPUTS: - topology: CrushTopology.
            - keys: uint64 keys.
            - alive: Optional boolean flag per node id.
            - seed: HashSeed.

    OUTPUTS: - owners: int64 node id per key.
             - steps: Candidate examinations per key.
    """

    keys = np.asarray(keys, dtype=np.uint64)
    owners = np.full(len(keys), -1, dtype=np.int64)
    steps = np.zeros(len(keys), dtype=np.int32)
    rackCounts = topology.rackCounts().astype(np.uint64)
    nRacks = np.uint64(topology.nRacks)
    bp, lp = topology.bucketProbes, topology.leafProbes
    nodeMixes = nodeMixArray(np.arange(topology.nNodes))
    rackMixes = nodeMixArray(np.arange(topology.nRacks))

    pending = np.arange(len(keys))
    for attempt in range(topology.tries):
        if not pending.size:
            break
        attemptKey = probeHashArray(keys[pending], attempt, seed)

        # Rack level
        rackKey = mix64Array(attemptKey ^ np.uint64(RACK_SALT))
        bestRack = np.zeros(pending.size, dtype=np.int64)
        bestScore = np.zeros(pending.size, dtype=np.uint64)
        for probe in range(bp):
            rack = (mix64Array(attemptKey ^ _probeSalt(probe + 1)) % nRacks).astype(np.int64)
            score = combineScoreArray(rackKey, rackMixes[rack])
            better = (score > bestScore) | ((score == bestScore) & (rack < bestRack)) if probe else np.ones(pending.size, dtype=bool)
            bestRack[better] = rack[better]
            bestScore[better] = score[better]

        # Leaf level
        leafKey = mix64Array(attemptKey ^ np.uint64(LEAF_SALT))
        bestNode = np.zeros(pending.size, dtype=np.int64)
        for probe in range(lp):
            member = (mix64Array(attemptKey ^ _probeSalt(bp + probe + 1)) % rackCounts[bestRack]).astype(np.int64)
            node = bestRack * topology.rackSize + member
            score = combineScoreArray(leafKey, nodeMixes[node])
            better = (score > bestScore) | ((score == bestScore) & (node < bestNode)) if probe else np.ones(pending.size, dtype=bool)
            bestNode[better] = node[better]
            bestScore[better] = score[better]

        steps[pending] += bp + lp
        placed = np.ones(pending.size, dtype=bool) if alive is None else alive[bestNode]
        owners[pending[placed]] = bestNode[placed]
        pending = pending[~placed]

    if pending.size:
        aliveNodes = np.flatnonzero(alive[:topology.nNodes])
        if not aliveNodes.size:
            raise ScanExhaustedError("No alive node left for the CRUSH-like global fallback.")
        owners[pending] = hrwAssignArray(keys[pending], aliveNodes, seed)
        steps[pending] += aliveNodes.size
    return owners, steps


def crushLookup(topology, key, mask=None, seed=HashSeed()):
    """Single-key CRUSH-like lookup returning a LookupResult."""
    owners, steps = crushAssignArray(topology, np.array([key], dtype=np.uint64), _aliveArray(mask), seed)
    return LookupResult(int(owners[0]), int(steps[0]), 0)



###############################################################################
############################ Class hashingScheme ##############################
###############################################################################

class hashingScheme(ABC):
    """
    GOAL: Define the abstract class representing one benchmark row: a
          placement scheme together with its failure-handling semantics.

    VARIABLES: - nNodes: Number of configured nodes.
               - seed: HashSeed shared by every structure of the row.
               - family: Scheme family (Ring, MPCH, LRH, ...).
               - semantics: Failure-handling tag.

    METHODS: - label: Row label, e.g. "LRH(vn=32,C=8)[fixed-cand]".
             - build: Build the structure over a set of node ids.
             - applyFailure: React to a liveness mask (rebuild or nothing).
             - assign: Map a key array, optionally under a liveness mask.
             - sampleKeys: Subset of the keys actually evaluated.
             - memoryBytes: Size of the lookup structure.
    """

    family = None
    semantics = None
    zeroExcess = True

    def __init__(self, nNodes, seed=HashSeed(), maxScan=maxScan):
        self.nNodes = nNodes
        self.seed = seed
        self.maxScan = maxScan


    @property
    @abstractmethod
    def label(self):
        pass


    @abstractmethod
    def build(self, nodeIds=None):
        """
        GOAL: Build the lookup structure over the given node ids.

        INPUTS: - nodeIds: Node ids (None = all configured nodes).

        OUTPUTS: /
        """

        pass


    @abstractmethod
    def _assignChunk(self, keys, mask):
        pass


    def applyFailure(self, mask):
        """
        GOAL: Prepare the failure pass. Liveness schemes keep their structure;
              rebuild schemes override this to rebuild over the survivors.

        INPUTS: - mask: LivenessMask.

        OUTPUTS: - rebuilt: Whether a build was performed.
        """

        return False


    def assign(self, keys, mask=None, workers=1):
        """
        GOAL: Map every key and record the scan steps of each lookup.

        INPUTS: - keys: uint64 keys.
                - mask: Optional LivenessMask (None = all alive).
                - workers: Number of key-range workers (0 = auto).

        OUTPUTS: - snapshot: AssignmentSnapshot.
        """

        return partitionedMap(lambda chunk: self._assignChunk(chunk, mask), keys, workers)


    def sampleKeys(self, keys):
        return keys


    def memoryBytes(self):
        return 0



###############################################################################
################################ Ring schemes #################################
###############################################################################

class RingNextAlive(hashingScheme):
    """
    GOAL: Classic ring consistent hashing; dead owners are skipped at lookup
          time by scanning to the next alive entry.
    """

    family = 'Ring'
    semantics = 'next-alive'

    def __init__(self, nNodes, vnodes, seed=HashSeed(), maxScan=maxScan, ringCache=None):
        super().__init__(nNodes, seed, maxScan)
        self.vnodes = vnodes
        self.ringCache = ringCache
        self.ring = None

    @property
    def label(self):
        return self.family + '(vn=' + str(self.vnodes) + ')[' + self.semantics + ']'

    def build(self, nodeIds=None):
        if nodeIds is None and self.ringCache:
            self.ring = cachedRing(self.nNodes, self.vnodes, self.seed, self.ringCache)
        else:
            self.ring = buildRing(self.nNodes, self.vnodes, self.seed, nodeIds)

    def _assignChunk(self, keys, mask):
        owners, steps = ringAssignArray(self.ring, keys, _aliveArray(mask), self.seed, self.maxScan)
        return AssignmentSnapshot(owners, steps)

    def memoryBytes(self):
        return 0 if self.ring is None else self.ring.nbytes


class RingRebuild(RingNextAlive):
    """Ring rebuilt over the survivors after a failure (no scan reported)."""

    semantics = 'rebuild'

    def applyFailure(self, mask):
        self.build(mask.aliveIds())
        return True

    def _assignChunk(self, keys, mask):
        owners, _ = ringAssignArray(self.ring, keys, None, self.seed, self.maxScan)
        return AssignmentSnapshot(owners, np.zeros(len(owners), dtype=np.int32))


class MpchNextAlive(RingNextAlive):
    """Multi-probe consistent hashing with per-probe next-alive scanning."""

    family = 'MPCH'

    def __init__(self, nNodes, vnodes, probes=mpProbes, seed=HashSeed(), maxScan=maxScan,
                 ringCache=None, probeMode='mix64'):
        super().__init__(nNodes, vnodes, seed, maxScan, ringCache)
        self.probes = probes
        self.probeMode = probeMode

    @property
    def label(self):
        return 'MPCH(ring,vn=' + str(self.vnodes) + ',P=' + str(self.probes) + ')[' + self.semantics + ']'

    def _assignChunk(self, keys, mask):
        owners, steps = mpchAssignArray(self.ring, keys, self.probes, _aliveArray(mask),
                                        self.seed, self.probeMode, self.maxScan)
        return AssignmentSnapshot(owners, steps)


class LrhFixedCandidate(RingNextAlive):
    """LRH with fixed-candidate liveness failover on the original ring."""

    family = 'LRH'
    semantics = 'fixed-cand'

    def __init__(self, nNodes, vnodes, c=8, seed=HashSeed(), maxScan=maxScan, ringCache=None):
        super().__init__(nNodes, vnodes, seed, maxScan, ringCache)
        self.c = c
        self.engine = None

    @property
    def label(self):
        return 'LRH(vn=' + str(self.vnodes) + ',C=' + str(self.c) + ')[' + self.semantics + ']'

    def build(self, nodeIds=None):
        super().build(nodeIds)
        self.engine = LocalRendezvous(self.ring, self.c, self.seed, self.maxScan)

    def _assignChunk(self, keys, mask):
        if mask is None:
            return self.engine.assignAll(keys, 'all-alive')
        return self.engine.assignAll(keys, 'fixed-candidate', mask)


class LrhRebuild(LrhFixedCandidate):
    """LRH with the ring rebuilt over the survivors (excess churn expected)."""

    semantics = 'rebuild'
    zeroExcess = False

    def applyFailure(self, mask):
        self.build(mask.aliveIds())
        return True

    def _assignChunk(self, keys, mask):
        return self.engine.assignAll(keys, 'rebuild')



###############################################################################
############################# Table-based schemes #############################
###############################################################################

class JumpRebuildRenumber(hashingScheme):
    """
    GOAL: Jump consistent hash; after a failure the survivors are renumbered
          contiguously (in node id order) and the bucket count shrinks.
    """

    family = 'Jump'
    semantics = 'rebuild-renum'
    zeroExcess = False

    def __init__(self, nNodes, seed=HashSeed(), maxScan=maxScan):
        super().__init__(nNodes, seed, maxScan)
        self.buckets = None

    @property
    def label(self):
        return 'Jump[' + self.semantics + ']'

    def build(self, nodeIds=None):
        self.buckets = np.arange(self.nNodes, dtype=np.int64) if nodeIds is None else np.sort(np.asarray(nodeIds, dtype=np.int64))

    def applyFailure(self, mask):
        self.build(mask.aliveIds())
        return True

    def _assignChunk(self, keys, mask):
        buckets = jumpAssignArray(hashPosArray(keys, self.seed), len(self.buckets))
        return AssignmentSnapshot(self.buckets[buckets], np.zeros(len(buckets), dtype=np.int32))


class MaglevRebuild(hashingScheme):
    """Maglev lookup table repopulated over the survivors after a failure."""

    family = 'Maglev'
    semantics = 'rebuild'
    zeroExcess = False

    def __init__(self, nNodes, mSize=maglevSize, seed=HashSeed(), maxScan=maxScan):
        super().__init__(nNodes, seed, maxScan)
        if not isPrime(mSize):
            raise ConfigurationError("The Maglev table size must be prime, got " + str(mSize) + ".")
        self.mSize = mSize
        self.table = None

    @property
    def label(self):
        return 'Maglev(M=' + str(self.mSize) + ')[' + self.semantics + ']'

    def build(self, nodeIds=None):
        mask = None
        if nodeIds is not None:
            mask = LivenessMask(np.isin(np.arange(self.nNodes), nodeIds))
        self.table = maglevBuild(self.nNodes, self.mSize, mask, self.seed)

    def applyFailure(self, mask):
        self.build(mask.aliveIds())
        return True

    def _assignChunk(self, keys, mask):
        owners = maglevLookupArray(self.table, keys)
        return AssignmentSnapshot(owners, np.zeros(len(owners), dtype=np.int32))

    def memoryBytes(self):
        return 0 if self.table is None else self.table.nbytes



###############################################################################
############################ Rendezvous schemes ###############################
###############################################################################

class HrwSampled(hashingScheme):
    """
    GOAL: Full HRW over every alive node. Above hrwFullMaxN nodes only a
          deterministic prefix of hrwSampleKeys keys is evaluated.
    """

    family = 'HRW'
    semantics = 'liveness'

    def __init__(self, nNodes, seed=HashSeed(), maxScan=maxScan, fullMaxN=hrwFullMaxN, sampleKeys=hrwSampleKeys):
        super().__init__(nNodes, seed, maxScan)
        self.fullMaxN = fullMaxN
        self.sampleSize = sampleKeys
        self.kUsed = None

    @property
    def label(self):
        if self.nNodes <= self.fullMaxN:
            return 'HRW(full)'
        return 'HRW(sample K=' + str(self.kUsed if self.kUsed is not None else self.sampleSize) + ')'

    def build(self, nodeIds=None):
        pass

    def sampleKeys(self, keys):
        if self.nNodes > self.fullMaxN:
            keys = keys[:self.sampleSize]
        self.kUsed = len(keys)
        return keys

    def _assignChunk(self, keys, mask):
        nodes = np.arange(self.nNodes) if mask is None else mask.aliveIds()
        owners = hrwAssignArray(keys, nodes, self.seed)
        return AssignmentSnapshot(owners, np.zeros(len(owners), dtype=np.int32))


class CrushLike(hashingScheme):
    """CRUSH-like two-level rack rendezvous with salted retries."""

    family = 'CRUSH-like'
    semantics = 'liveness'

    def __init__(self, nNodes, rackSize=crushRackSize, bucketProbes=crushBucketProbes,
                 leafProbes=crushLeafProbes, tries=crushTries, seed=HashSeed(), maxScan=maxScan):
        super().__init__(nNodes, seed, maxScan)
        self.topology = CrushTopology(nNodes, rackSize, bucketProbes, leafProbes, tries)

    @property
    def label(self):
        t = self.topology
        return ('CRUSH-like(rack=' + str(t.rackSize) + ',bp=' + str(t.bucketProbes) + ',lp='
                + str(t.leafProbes) + ',tries=' + str(t.tries) + ')')

    def build(self, nodeIds=None):
        pass

    def _assignChunk(self, keys, mask):
        owners, steps = crushAssignArray(self.topology, keys, _aliveArray(mask), self.seed)
        return AssignmentSnapshot(owners, steps)



###############################################################################
################################ Scheme registry ##############################
###############################################################################

# Table rows in display order: name -> class name
schemes = {
    'Ring[rebuild]': 'RingRebuild',
    'Ring[next-alive]': 'RingNextAlive',
    'MPCH[next-alive]': 'MpchNextAlive',
    'LRH[fixed-cand]': 'LrhFixedCandidate',
    'LRH[rebuild]': 'LrhRebuild',
    'Jump[rebuild-renum]': 'JumpRebuildRenumber',
    'Maglev[rebuild]': 'MaglevRebuild',
    'HRW': 'HrwSampled',
    'CRUSH-like': 'CrushLike',
}
