# coding=utf-8

import itertools
import math

import numpy as np
import pytest

from scipy import stats

from hashFunctions import HashSeed
from hashingErrors import DomainError, ConfigurationError
from localRendezvous import LocalRendezvous
from theoryAnalyser import (TheoryAnalyser, analysisColumns, fluidLoads, coverageCounts, gapCandidates,
                            availabilityIndependent, availabilityHypergeometric, hypergeometricFraction,
                            expectedFallbackBlocks)
from tokenRing import buildRing, gapProfile


# Exact quantities

def test_two_node_fluid_loads_are_halves():
    assert fluidLoads(buildRing(2, 1), 2).l.tolist() == [0.5, 0.5]


def test_fluid_loads_sum_to_one(smallRing):
    for c in (1, 2, 4, 10):
        loads = fluidLoads(smallRing, c).l
        assert np.all(loads >= 0)
        assert abs(loads.sum() - 1.0) <= 1e-9


def test_single_candidate_fluid_load_is_the_ring_share(smallRing):
    gaps = gapProfile(smallRing).gaps
    expected = np.zeros(10)
    for i, gap in enumerate(gaps):
        expected[int(smallRing.nodes[(i + 1) % smallRing.size])] += gap
    np.testing.assert_allclose(fluidLoads(smallRing, 1).l, expected, atol=1e-15)


def test_gap_candidates_are_the_successor_walks(smallRing):
    nodes = gapCandidates(smallRing, 3)
    for i in range(smallRing.size):
        walk, index = [], (i + 1) % smallRing.size
        while len(walk) < 3:
            node = int(smallRing.nodes[index])
            if node not in walk:
                walk.append(node)
            index = (index + 1) % smallRing.size
        assert nodes[i].tolist() == walk


def test_gap_candidates_agree_with_key_lookups(smallRing, keys):
    engine = LocalRendezvous(smallRing, 3)
    nodes = gapCandidates(smallRing, 3)
    _, indices = engine.candidateMatrix(keys)
    for row, key in enumerate(keys[:200]):
        # The gap ending at the key's successor entry
        gap = (int(indices[row, 0]) - 1) % smallRing.size
        assert nodes[gap].tolist() == list(engine.candidates(int(key)).nodes)


def test_coverage_counts(smallRing):
    assert coverageCounts(buildRing(2, 1), 2).d.tolist() == [2, 2]
    coverage = coverageCounts(smallRing, 4)
    assert coverage.d.sum() == smallRing.size * 4
    assert np.all((coverage.d >= 0) & (coverage.d <= smallRing.size))
    brute = np.zeros(10, dtype=np.int64)
    for row in gapCandidates(smallRing, 4):
        for node in set(row.tolist()):
            brute[node] += 1
    np.testing.assert_array_equal(coverage.d, brute)
    assert abs(coverage.conditionalMeans().sum() - 1.0) <= 1e-12


def test_availability_independent():
    assert availabilityIndependent(0.5, 3) == 0.125
    assert availabilityIndependent(0.0, 5) == 0.0
    with pytest.raises(DomainError):
        availabilityIndependent(1.0, 2)


def test_availability_hypergeometric_examples():
    exact, bound = availabilityHypergeometric(5, 2, 2)
    assert exact == pytest.approx(0.1)
    assert bound == pytest.approx(0.16)
    assert availabilityHypergeometric(10, 2, 3) == (0.0, pytest.approx(0.008))


def test_hypergeometric_matches_subset_enumeration():
    for n in range(1, 13):
        for f in range(n + 1):
            for c in range(1, min(n, 8) + 1):
                subsets = list(itertools.combinations(range(n), c))
                inside = sum(1 for subset in subsets if max(subset) < f)
                assert hypergeometricFraction(n, f, c) * len(subsets) == inside


def test_hypergeometric_respects_the_bound():
    for n in range(1, 21):
        for f in range(n + 1):
            for c in range(1, min(n, 8) + 1):
                assert hypergeometricFraction(n, f, c) * math.comb(n, c) == math.comb(f, c)
                exact, bound = availabilityHypergeometric(n, f, c)
                assert exact <= bound


def test_hypergeometric_domain():
    with pytest.raises(DomainError):
        hypergeometricFraction(5, 6, 2)


def test_expected_fallback_blocks():
    assert expectedFallbackBlocks(0.0, 4) == (1.0, 4.0)
    assert expectedFallbackBlocks(0.5, 1) == (2.0, 2.0)
    with pytest.raises(DomainError):
        expectedFallbackBlocks(1.0, 3)


# Monte Carlo validators

@pytest.mark.slow
def test_smoothing_follows_inverse_square_root_of_c():
    analyser = TheoryAnalyser(baseSeed=1)
    table = analyser.smoothingScalingProbe(200, 32, [2, 4, 8], 10)
    sd = dict(zip(table['c'], table['measured_sd']))
    assert abs(sd[8] / sd[2] - 0.5) <= 0.25 * 0.5
    assert list(table['predicted_sd']) == [1 / (200 * math.sqrt(32 * c)) for c in (2, 4, 8)]


@pytest.mark.slow
def test_doubling_vnodes_matches_doubling_c():
    analyser = TheoryAnalyser(baseSeed=2)
    base = analyser.smoothingScalingProbe(200, 32, [2, 4], 10)['measured_sd'].tolist()
    doubledV = analyser.smoothingScalingProbe(200, 64, [2], 10)['measured_sd'].tolist()
    ratioC = base[1] / base[0]
    ratioV = doubledV[0] / base[0]
    assert abs(ratioV - ratioC) <= 0.25 * ratioC


def test_single_candidate_smoothing_is_the_ring_gap_scale():
    analyser = TheoryAnalyser(baseSeed=13)
    table = analyser.smoothingScalingProbe(200, 32, [1], 10)
    predicted = 1 / (200 * math.sqrt(32))
    assert table['predicted_sd'][0] == pytest.approx(predicted)
    assert abs(table['measured_sd'][0] / predicted - 1) <= 0.15
    report = analyser.report()
    assert report['check_name'].tolist() == ['smoothing_sd_c1']
    assert report['pass'].all()


def test_smoothing_probe_requires_ascending_c():
    with pytest.raises(ConfigurationError):
        TheoryAnalyser().smoothingScalingProbe(20, 4, [4, 2], 1)


@pytest.mark.slow
def test_compound_variance_is_small():
    analyser = TheoryAnalyser(baseSeed=3)
    structural, compound, ratio = analyser.varianceDecompositionProbe(400, 16, 4, 5)
    assert structural > 0
    assert ratio == pytest.approx(compound / structural)
    assert ratio <= 10 * 4 ** 2 / 400
    assert analyser.report()['pass'].all()


def test_dirichlet_mean_matches_coverage(smallRing):
    analyser = TheoryAnalyser(baseSeed=4)
    mean, se, expected = analyser.dirichletLoadProbe(smallRing, 3, 2000)
    assert np.all(np.abs(mean - expected) <= 5 * se + 1e-12)
    report = analyser.report()
    assert report['check_name'].tolist() == ['dirichlet_conditional_mean']
    assert report['measured'][0] == pytest.approx(np.abs((mean - expected) / se).max())


@pytest.mark.slow
def test_independent_availability_matches_p_to_the_c():
    analyser = TheoryAnalyser(baseSeed=5)
    measured, sigma, predicted = analyser.simulateIndependentAvailability(200, 16, 4, 0.3, 10000, 100)
    assert predicted == pytest.approx(0.0081)
    assert abs(measured - predicted) <= 3 * sigma


@pytest.mark.slow
def test_fallback_blocks_are_geometric():
    analyser = TheoryAnalyser(baseSeed=6)
    measured, sigma, predicted = analyser.simulateFallbackBlocks(200, 16, 3, 0.4, 5000, 30)
    assert predicted == pytest.approx(1 / (1 - 0.064))
    assert abs(measured - predicted) <= 3 * sigma


@pytest.mark.slow
def test_rack_failure_probability():
    analyser = TheoryAnalyser(baseSeed=7)
    measured, sigma, predicted, hypergeometric = analyser.rackFailureProbe(100, 20, 2, 20)
    assert predicted == pytest.approx(0.04)
    assert hypergeometric == pytest.approx(20 * 19 / (100 * 99))
    assert abs(measured - hypergeometric) <= 3 * sigma + 0.002
    assert measured <= 10 * predicted + 3 * sigma


def test_single_candidate_rack_share():
    measured, _, predicted, _ = TheoryAnalyser(baseSeed=8).rackFailureProbe(10, 5, 1, 20)
    assert predicted == 0.5
    assert abs(measured - 0.5) <= 0.05


def test_large_c_rack_failure_is_rare():
    analyser = TheoryAnalyser(baseSeed=9)
    measured, sigma, predicted, _ = analyser.rackFailureProbe(100, 20, 8, 5)
    assert predicted < 1e-5
    assert measured <= 10 * predicted + 3 * sigma


@pytest.mark.slow
def test_empirical_shares_follow_fluid_loads():
    analyser = TheoryAnalyser(baseSeed=10)
    table = analyser.empiricalShareCheck(buildRing(20, 8, HashSeed(10)), 4, 1000000)
    assert len(table) == 20
    # Family-wise band over 20 nodes, plus a goodness of fit of the z values
    assert table['z'].abs().max() <= 4
    assert stats.chi2.sf((table['z'] ** 2).sum(), 20) >= 0.001


def test_winner_position_is_uniform():
    analyser = TheoryAnalyser(baseSeed=11)
    ring = buildRing(40, 8, HashSeed(11))
    from workloadGenerator import generateKeys
    counts, pValue = analyser.winnerRankTest(ring, 4, generateKeys(50000, 11, 0))
    assert counts.sum() == 50000
    assert pValue >= 0.01


@pytest.mark.slow
def test_key_variance_decomposition():
    analyser = TheoryAnalyser(baseSeed=12)
    result = analyser.keyVarianceProbe(buildRing(100, 16, HashSeed(12)), 4, 100000, 30)
    assert abs(result['sampling'] / result['samplingPredicted'] - 1) <= 0.15
    assert abs(result['total'] - result['totalPredicted']) <= 3 * result['totalSigma']
    assert result['structuralPredicted'] == pytest.approx(100000 ** 2 / (100 ** 2 * 16 * 4))
    assert analyser.report()['check_name'].tolist() == ['key_variance_sampling', 'key_variance_structural',
                                                       'key_variance_total']


def test_key_variance_needs_enough_keys(smallRing):
    with pytest.raises(ConfigurationError):
        TheoryAnalyser().keyVarianceProbe(smallRing, 2, 50, 2)


def test_report_columns():
    analyser = TheoryAnalyser()
    analyser.rackFailureProbe(10, 5, 1, 3)
    table = analyser.report()
    assert list(table.columns) == analysisColumns
    assert table['check_name'].tolist() == ['rack_failure']
