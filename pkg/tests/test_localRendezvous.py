# coding=utf-8

import numpy as np
import pytest

from hashFunctions import HashSeed, hashScore
from hashingErrors import ConfigurationError, DomainError, ScanExhaustedError
from hashingPerformance import churn
from hashingSchemes import ringLookupNextAlive, hrwLookup
from localRendezvous import LocalRendezvous, LivenessMask, WeightTable, AssignmentSnapshot, partitionedMap
from tokenRing import buildRing
from workloadGenerator import generateKeys, generateFailureSet


def test_two_node_ring_candidates_are_both_nodes():
    engine = LocalRendezvous(buildRing(2, 1), 2)
    for key in generateKeys(100, 1, 0):
        assert set(engine.candidates(int(key)).nodes) == {0, 1}


def test_candidates_match_naive_skip_scan(smallRing, keys, oracles):
    engine = LocalRendezvous(smallRing, 4)
    for key in keys:
        candidateSet = engine.candidates(int(key))
        assert list(candidateSet.nodes) == oracles.candidates(smallRing, key, 4)
        assert len(set(candidateSet.nodes)) == 4
        assert [int(smallRing.nodes[i]) for i in candidateSet.entryIndices] == list(candidateSet.nodes)


def test_candidate_matrix_matches_scalar_candidates(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    nodes, indices = engine.candidateMatrix(keys)
    assert nodes.shape == (len(keys), 4)
    for row, key in enumerate(keys[:200]):
        candidateSet = engine.candidates(int(key))
        assert nodes[row].tolist() == list(candidateSet.nodes)
        assert indices[row].tolist() == list(candidateSet.entryIndices)


def test_full_candidate_set_is_a_permutation(smallRing, keys):
    engine = LocalRendezvous(smallRing, 10)
    nodes, _ = engine.candidateMatrix(keys)
    assert np.all(np.sort(nodes, axis=1) == np.arange(10))


def test_invalid_candidate_counts():
    ring = buildRing(5, 2)
    with pytest.raises(ConfigurationError):
        LocalRendezvous(ring, 6)
    with pytest.raises(ConfigurationError):
        LocalRendezvous(ring, 0)
    with pytest.raises(ConfigurationError):
        LocalRendezvous(ring, 4, maxScan=3)


def test_single_candidate_is_the_ring_successor(smallRing, keys):
    engine = LocalRendezvous(smallRing, 1)
    for key in keys:
        assert engine.lookup(int(key)).node == ringLookupNextAlive(smallRing, int(key)).node


def test_two_node_lookup_is_the_score_argmax():
    engine = LocalRendezvous(buildRing(2, 1), 2)
    for key in generateKeys(200, 2, 0):
        key = int(key)
        expected = 0 if hashScore(key, 0) >= hashScore(key, 1) else 1
        assert engine.lookup(key).node == expected


def test_all_candidates_reproduce_global_rendezvous(smallRing, keys):
    engine = LocalRendezvous(smallRing, smallRing.nNodes)
    owners = engine.assignAll(keys).owners
    for key, owner in zip(keys, owners):
        assert owner == hrwLookup(int(key), None, 10, smallRing.seed)


def test_lookup_reports_entries_walked(smallRing, keys, oracles):
    engine = LocalRendezvous(smallRing, 3)
    snapshot = engine.assignAll(keys)
    weights = WeightTable.uniform(10)
    for row, key in enumerate(keys[:300]):
        expected = oracles.walkSteps(smallRing, key, 3)
        result = engine.lookup(int(key))
        assert result.scanSteps == expected
        assert result.fallbackBlocks == 0
        assert engine.candidates(int(key)).walkSteps == expected
        assert engine.lookupWeighted(int(key), weights).scanSteps == expected
        assert snapshot.scanSteps[row] == expected
    assert snapshot.scanSteps.min() == 3


def test_uniform_weights_reproduce_lookup(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    weights = WeightTable.uniform(10, 3.0)
    plain = engine.assignAll(keys)
    weighted = engine.assignAll(keys, weights=weights)
    np.testing.assert_array_equal(plain.owners, weighted.owners)
    for key in keys[:200]:
        assert engine.lookupWeighted(int(key), weights).node == engine.lookup(int(key)).node


def test_weighted_vectorised_path_matches_scalar(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    weights = WeightTable(np.arange(1, 11, dtype=float))
    owners = engine.assignAll(keys, weights=weights).owners
    for key, owner in zip(keys[:300], owners[:300]):
        assert owner == engine.lookupWeighted(int(key), weights).node


def test_weighted_two_node_share():
    engine = LocalRendezvous(buildRing(2, 1), 2)
    owners = engine.assignAll(generateKeys(100000, 3, 0), weights=WeightTable([9.0, 1.0])).owners
    assert abs(np.mean(owners == 0) - 0.9) <= 0.01


def test_weight_updates_never_touch_the_ring(smallRing):
    before = smallRing.toBytes()
    weights = WeightTable.uniform(10)
    weights.setWeight(3, 7.5)
    LocalRendezvous(smallRing, 4).lookupWeighted(5, weights)
    assert weights[3] == 7.5
    assert smallRing.toBytes() == before


def test_weight_table_rejects_non_positive_weights():
    with pytest.raises(DomainError):
        WeightTable([1.0, 0.0])
    with pytest.raises(DomainError):
        WeightTable.uniform(3).setWeight(1, -2.0)


def test_fixed_candidate_with_every_node_alive_is_lookup(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    mask = LivenessMask.allAlive(10)
    for key in keys[:200]:
        result = engine.lookupFixedCandidate(int(key), mask)
        assert result.node == engine.lookup(int(key)).node
        assert result.scanSteps == engine.lookup(int(key)).scanSteps
        assert result.fallbackBlocks == 0
    assert engine.assignAll(keys, 'fixed-candidate', mask).sameAs(engine.assignAll(keys))


def test_surviving_winners_never_move(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    mask = LivenessMask.fromFailed(10, {2, 5})
    before = engine.assignAll(keys).owners
    after = engine.assignAll(keys, 'fixed-candidate', mask).owners
    stayed = mask.alive[before]
    np.testing.assert_array_equal(after[stayed], before[stayed])
    nodes, _ = engine.candidateMatrix(keys)
    for row in np.flatnonzero(~stayed):
        assert mask.isAlive(after[row])
        if mask.alive[nodes[row]].any():
            assert after[row] in nodes[row]


def test_single_survivor_is_found_by_block_extension(smallRing, keys, oracles):
    engine = LocalRendezvous(smallRing, 2, maxScan=4096)
    mask = LivenessMask.fromFailed(10, set(range(10)) - {6})
    for key in keys[:100]:
        result = engine.lookupFixedCandidate(int(key), mask)
        assert result.node == 6
        assert result.fallbackBlocks >= 0
        distinct = min(2 * (result.fallbackBlocks + 1), 10)
        assert result.scanSteps == oracles.walkSteps(smallRing, key, distinct)


def test_no_alive_node_is_an_availability_failure(smallRing, keys):
    engine = LocalRendezvous(smallRing, 2)
    mask = LivenessMask(np.zeros(10, dtype=bool))
    with pytest.raises(ScanExhaustedError):
        engine.lookupFixedCandidate(1, mask)
    with pytest.raises(ScanExhaustedError):
        engine.assignAll(keys, 'fixed-candidate', mask)


def test_scan_cap_is_enforced(smallRing):
    engine = LocalRendezvous(smallRing, 2, maxScan=2)
    key = 12345
    mask = LivenessMask.fromFailed(10, set(engine.candidates(key).nodes))
    with pytest.raises(ScanExhaustedError):
        engine.lookupFixedCandidate(key, mask)


def test_scan_cap_inside_a_block_keeps_alive_candidates(oracles):
    ring = buildRing(20, 4, HashSeed(1))
    engine = LocalRendezvous(ring, 4, maxScan=6)
    found = 0
    for key in generateKeys(300, 4, 0):
        key = int(key)
        mask = LivenessMask.fromFailed(20, set(engine.candidates(key).nodes))
        if oracles.walkSteps(ring, key, 5) > 6:
            with pytest.raises(ScanExhaustedError):
                engine.lookupFixedCandidate(key, mask)
            continue
        reached = max(c for c in range(5, 9) if oracles.walkSteps(ring, key, c) <= 6)
        partial = oracles.candidates(ring, key, reached)[4:]
        expected = min(partial, key=lambda node: (-hashScore(key, node, ring.seed), node))
        result = engine.lookupFixedCandidate(key, mask)
        assert (result.node, result.fallbackBlocks, result.scanSteps) == (expected, 1, 6)
        found += 1
    assert found > 0


def test_vectorised_fixed_candidate_matches_scalar_with_fallbacks(smallRing, keys):
    engine = LocalRendezvous(smallRing, 2)
    mask = LivenessMask.fromFailed(10, {0, 1, 2, 3, 4, 5, 6})
    snapshot = engine.assignAll(keys, 'fixed-candidate', mask)
    assert snapshot.fallbackBlocks.max() >= 1
    for row, key in enumerate(keys):
        result = engine.lookupFixedCandidate(int(key), mask)
        assert snapshot.owners[row] == result.node
        assert snapshot.scanSteps[row] == result.scanSteps
        assert snapshot.fallbackBlocks[row] == result.fallbackBlocks


def test_rebuild_mode_equals_the_survivor_ring(keys):
    survivors = [0, 1, 3, 4, 6, 8, 9]
    rebuilt = LocalRendezvous(buildRing(10, 4, HashSeed(1), survivors), 4)
    mask = LivenessMask.fromFailed(10, {2, 5, 7})
    snapshot = rebuilt.assignAll(keys, 'rebuild', mask)
    assert snapshot.sameAs(rebuilt.assignAll(keys))
    assert set(snapshot.owners.tolist()) <= set(survivors)


def test_rebuild_mode_rejects_dead_ring_nodes(smallRing, keys):
    with pytest.raises(ConfigurationError):
        LocalRendezvous(smallRing, 4).assignAll(keys, 'rebuild', LivenessMask.fromFailed(10, {1}))


def test_assign_all_argument_checks(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    with pytest.raises(ConfigurationError):
        engine.assignAll(keys, 'forwarding')
    with pytest.raises(ConfigurationError):
        engine.assignAll(keys, 'fixed-candidate')
    with pytest.raises(ConfigurationError):
        engine.assignAll(keys, 'fixed-candidate', LivenessMask.allAlive(5))


def test_scan_steps_are_measured_and_excess_is_zero(oracles):
    ring = buildRing(50, 16, HashSeed(12))
    engine = LocalRendezvous(ring, 8)
    keys = generateKeys(10000, 12, 0)
    failed = generateFailureSet(50, 5, 12, 0)
    mask = LivenessMask.fromFailed(50, failed)
    init = engine.assignAll(keys)
    fail = engine.assignAll(keys, 'fixed-candidate', mask)
    for row, key in enumerate(keys[:500]):
        assert init.scanSteps[row] == oracles.walkSteps(ring, key, 8)
    assert init.scanSteps.min() == 8
    firstBlockAlive = mask.alive[engine.candidateMatrix(keys)[0]].any(axis=1)
    np.testing.assert_array_equal(fail.scanSteps[firstBlockAlive], init.scanSteps[firstBlockAlive])
    moved = set(np.flatnonzero(init.owners != fail.owners).tolist())
    affected = set(np.flatnonzero(np.isin(init.owners, list(failed))).tolist())
    assert moved == affected
    assert churn(init, fail, failed, mask).excessPct == 0


def test_results_do_not_depend_on_worker_count(smallRing, keys):
    engine = LocalRendezvous(smallRing, 4)
    mask = LivenessMask.fromFailed(10, {3})
    single = engine.assignAll(keys, 'fixed-candidate', mask, workers=1)
    pooled = engine.assignAll(keys, 'fixed-candidate', mask, workers=4)
    assert single.sameAs(pooled)
    np.testing.assert_array_equal(single.fallbackBlocks, pooled.fallbackBlocks)


def test_partitioned_map_keeps_key_order():
    keys = np.arange(101, dtype=np.uint64)
    echo = lambda chunk: AssignmentSnapshot(chunk.astype(np.int64), np.ones(len(chunk), dtype=np.int32))
    snapshot = partitionedMap(echo, keys, workers=3)
    assert snapshot.owners.tolist() == list(range(101))
    assert snapshot.fallbackBlocks is None


def test_liveness_mask_operations():
    mask = LivenessMask.allAlive(4)
    mask.fail(2)
    assert mask.nAlive == 3
    assert mask.failedIds().tolist() == [2]
    assert not mask.isAlive(2)
    mask.recover(2)
    assert mask.aliveIds().tolist() == [0, 1, 2, 3]
    assert LivenessMask.fromFailed(4, ()).nAlive == 4
