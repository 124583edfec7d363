# coding=utf-8

import math

import numpy as np
import pytest

from scipy import stats

from hashFunctions import (HashSeed, MASK64, GOLDEN_GAMMA, mix64, mix64Array, hashPos, hashPosArray, hashScore,
                           hashScoreArray, unitScore, weightedScore, weightedScoreArray, probeHash, probeHashArray,
                           probeMatrixArray)
from hashingErrors import DomainError
from workloadGenerator import generateKeys


def test_mix64_fixes_zero_and_matches_splitmix_output():
    assert mix64(0) == 0
    assert mix64(GOLDEN_GAMMA) == 16294208416658607535


def test_hash_pos_golden_value():
    assert hashPos(0, HashSeed(0)) == 16294208416658607535


def test_hash_pos_is_deterministic():
    assert hashPos(123456789, HashSeed(7)) == hashPos(123456789, HashSeed(7))


def test_vectorised_mix_matches_scalar():
    values = [0, 1, GOLDEN_GAMMA, MASK64, 2 ** 63, 987654321]
    mixed = mix64Array(np.array(values, dtype=np.uint64))
    assert [int(x) for x in mixed] == [mix64(v) for v in values]


def test_hash_pos_depends_on_seed():
    keys = generateKeys(10000, 1, 0)
    differ = hashPosArray(keys, HashSeed(1)) != hashPosArray(keys, HashSeed(2))
    assert differ.mean() >= 0.99


def test_vectorised_hashes_match_scalar():
    keys = generateKeys(50, 3, 0)
    positions = hashPosArray(keys, HashSeed(5))
    scores = hashScoreArray(keys, 17, HashSeed(5))
    for key, position, score in zip(keys, positions, scores):
        assert int(position) == hashPos(int(key), HashSeed(5))
        assert int(score) == hashScore(int(key), 17, HashSeed(5))


def test_hash_score_is_uniform_over_nodes():
    scores = hashScoreArray(np.uint64(12345), np.arange(1000))
    bins = np.bincount((scores >> np.uint64(60)).astype(np.int64), minlength=16)
    assert stats.chisquare(bins).pvalue >= 0.01


def test_hash_score_is_separated_from_hash_pos():
    keys = generateKeys(10000, 4, 0)
    nodes = np.arange(len(keys)) % 97
    scores = hashScoreArray(keys, nodes)
    assert np.mean(scores != hashPosArray(keys)) >= 0.999


def test_unit_score_excludes_zero():
    assert unitScore(0) > 0
    assert unitScore(MASK64) == 1.0


def test_weighted_score_is_zero_when_unit_score_is_one():
    assert unitScore(MASK64) == 1.0
    assert -math.log(unitScore(MASK64)) / 3.0 == 0


def test_weighted_score_rejects_non_positive_weights():
    with pytest.raises(DomainError):
        weightedScore(1, 2, 0.0)
    with pytest.raises(DomainError):
        weightedScore(1, 2, -1.0)
    with pytest.raises(DomainError):
        weightedScoreArray(np.array([1, 2], dtype=np.uint64), np.array([1.0, 0.0]))


def test_equal_weights_preserve_the_score_order():
    keys = generateKeys(500, 5, 0)
    nodes = np.arange(12)
    for key in keys:
        key = int(key)
        byScore = max(nodes, key=lambda n: (hashScore(key, n), -n))
        byWeight = min(nodes, key=lambda n: (weightedScore(key, n, 2.5), n))
        assert byScore == byWeight


def test_weighted_race_share_follows_weights():
    keys = generateKeys(100000, 6, 0)
    scores = hashScoreArray(keys[:, None], np.array([0, 1]))
    race = weightedScoreArray(scores, np.array([9.0, 1.0]))
    share = np.mean(race.argmin(axis=1) == 0)
    assert abs(share - 0.9) <= 0.01


def test_probe_zero_is_the_key_position_in_both_modes():
    for key in (0, 42, MASK64):
        assert probeHash(key, 0, mode='double-hash') == hashPos(key)
        assert probeHash(key, 0, mode='mix64') == hashPos(key)


def test_double_hash_probes_form_an_arithmetic_progression():
    for key in (1, 99, 2 ** 40 + 3):
        probes = [probeHash(key, j, mode='double-hash') for j in range(8)]
        steps = {(probes[j + 1] - probes[j]) & MASK64 for j in range(7)}
        assert len(steps) == 1
        assert steps.pop() % 2 == 1


def test_mix64_probes_are_distinct():
    keys = generateKeys(10000, 7, 0)
    first = probeHashArray(keys, 1)
    second = probeHashArray(keys, 2)
    assert np.mean(first != second) >= 0.999


def test_probe_matrix_matches_single_probes():
    keys = generateKeys(200, 8, 0)
    for mode in ('mix64', 'double-hash'):
        matrix = probeMatrixArray(keys, 6, HashSeed(9), mode)
        for j in range(6):
            np.testing.assert_array_equal(matrix[j], probeHashArray(keys, j, HashSeed(9), mode))
        assert int(matrix[3][0]) == probeHash(int(keys[0]), 3, HashSeed(9), mode)


def test_probe_hash_rejects_bad_arguments():
    with pytest.raises(DomainError):
        probeHash(1, -1)
    with pytest.raises(DomainError):
        probeHash(1, 1, mode='sha')


def test_keyed_mode_changes_positions_deterministically():
    keyed = HashSeed(0, secret=b'cluster-secret')
    keys = generateKeys(1000, 9, 0)
    positions = hashPosArray(keys, keyed)
    np.testing.assert_array_equal(positions, hashPosArray(keys, HashSeed(0, secret=b'cluster-secret')))
    assert np.mean(positions != hashPosArray(keys, HashSeed(0))) >= 0.99
    assert int(positions[0]) == hashPos(int(keys[0]), keyed)


def test_hash_seed_validation():
    with pytest.raises(DomainError):
        HashSeed(-1)
    with pytest.raises(DomainError):
        HashSeed(1 << 64)
    with pytest.raises(DomainError):
        HashSeed(0, secret=b'')
