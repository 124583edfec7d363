# coding=utf-8

import numpy as np
import pytest

from hashFunctions import HashSeed, hashPos
from tokenRing import buildRing, lowerBound
from workloadGenerator import generateKeys


@pytest.fixture
def smallRing():
    return buildRing(10, 4, HashSeed(1))


@pytest.fixture
def tinyRing():
    return buildRing(8, 4, HashSeed(3))


@pytest.fixture
def keys():
    return generateKeys(1000, 0, 0)


def naiveCandidates(ring, key, c, seed=None):
    """Walk the ring entry by entry, skipping ids already met, until c distinct ids are found."""
    seed = ring.seed if seed is None else seed
    index = lowerBound(ring, hashPos(int(key), seed))
    found = []
    while len(found) < c:
        node = int(ring.nodes[index])
        if node not in found:
            found.append(node)
        index = (index + 1) % ring.size
    return found


def naiveWalkSteps(ring, key, c, seed=None):
    """
    Entries a next-distinct walk lands on until c distinct ids are found,
    counted entry by entry: the first entry, then every entry whose node
    differs from the entry before it.
    """
    seed = ring.seed if seed is None else seed
    index = lowerBound(ring, hashPos(int(key), seed))
    found = [int(ring.nodes[index])]
    steps = 1
    while len(found) < c:
        previous = int(ring.nodes[index])
        index = (index + 1) % ring.size
        node = int(ring.nodes[index])
        if node != previous:
            steps += 1
            if node not in found:
                found.append(node)
    return steps


def naiveNextAlive(ring, position, alive=None):
    """Index of the first entry at or after position (wrapping) whose node is alive, and entries examined."""
    tokens = [int(token) for token in ring.tokens]
    index = next((i for i, token in enumerate(tokens) if token >= position), 0)
    steps = 1
    while alive is not None and not alive[int(ring.nodes[index])]:
        index = (index + 1) % ring.size
        steps += 1
    return index, steps


@pytest.fixture
def oracles():
    class Oracles:
        candidates = staticmethod(naiveCandidates)
        nextAlive = staticmethod(naiveNextAlive)
        walkSteps = staticmethod(naiveWalkSteps)
    return Oracles
