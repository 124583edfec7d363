# coding=utf-8

"""
Goal: Implement a tool to check the analytical behaviour of LRH against
      measurements: fluid loads and their smoothing, availability under
      independent, hypergeometric and rack-correlated failures, fallback
      cost and the variance decompositions of the per-node loads.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import math

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd

from scipy import special, stats
from tabulate import tabulate
from tqdm import tqdm

from hashFunctions import HashSeed
from hashingErrors import DomainError, ConfigurationError
from tokenRing import buildRing, gapProfile
from localRendezvous import LocalRendezvous, LivenessMask
from workloadGenerator import generateKeys, deriveSeed



###############################################################################
################################ Global variables #############################
###############################################################################

# Width of the statistical acceptance bands (in standard deviations)
SIGMAS = 3.0

# Constant of the compound/structural variance ratio bound (ratio <= K.C^2/N)
RATIO_CONSTANT = 10.0

# Slack factor of the whole-rack failure bound (probability <= K.(R/N)^C)
RACK_CONSTANT = 10.0

# Relative band of the approximate scaling laws (smoothing SD, structural key variance)
SCALING_TOLERANCE = 0.25

# Band on the largest per-node z-score of a family of N comparisons
FAMILY_SIGMAS = 4.0

# Columns of the analysis report
analysisColumns = ['check_name', 'predicted', 'measured', 'sigma', 'pass']



###############################################################################
################################ Domain types #################################
###############################################################################

@dataclass
class FluidLoads:
    """Share of the unit circle each node would own with infinitely many keys."""

    l: np.ndarray

    @property
    def sd(self):
        return float(self.l.std())


@dataclass
class CoverageCounts:
    """Number of gaps whose candidate set contains each node."""

    d: np.ndarray
    m: int
    c: int

    def conditionalMeans(self):
        """E[L_n | d_n] = d_n / (C.m) when the gaps are redrawn uniformly."""
        return self.d / (self.c * self.m)



###############################################################################
############################## Exact quantities ###############################
###############################################################################

def gapCandidates(ring, c):
    """Candidate sets (m, C) of the m gaps; gap i shares the candidates of successor i+1."""
    engine = LocalRendezvous(ring, c)
    nodes, _ = engine.candidatesFromIndex((np.arange(ring.size) + 1) % ring.size)
    return nodes


def fluidLoads(ring, c):
    """
    GOAL: Exact fluid load of every node: each gap contributes its length
          evenly to the C members of its candidate set.

    INPUTS: - ring: TokenRing.
            - c: Number of candidates.

    OUTPUTS: - loads: FluidLoads over node ids 0..nodeSpan-1.
    """

    gaps = gapProfile(ring).gaps
    nodes = gapCandidates(ring, c)
    weights = np.repeat(gaps / c, c)
    return FluidLoads(np.bincount(nodes.ravel(), weights=weights, minlength=ring.nodeSpan))


def coverageCounts(ring, c):
    """
    GOAL: Candidate coverage count d_n of every node.

    INPUTS: - ring: TokenRing.
            - c: Number of candidates.

    OUTPUTS: - coverage: CoverageCounts (sum of d equals m.C).
    """

    nodes = gapCandidates(ring, c)
    return CoverageCounts(np.bincount(nodes.ravel(), minlength=ring.nodeSpan), ring.size, c)


def availabilityIndependent(p, c):
    """Probability that all C candidates are down under independent failures: p^C."""
    if not 0 <= p < 1:
        raise DomainError("The failure probability must satisfy 0 <= p < 1.")
    return p ** c


def hypergeometricFraction(nNodes, fFailed, c):
    """Exact probability (as a Fraction) that C distinct candidates all lie in F failed nodes out of N."""
    if not 0 <= fFailed <= nNodes or c > nNodes:
        raise DomainError("Expected 0 <= F <= N and C <= N.")
    return Fraction(special.comb(fFailed, c, exact=True), special.comb(nNodes, c, exact=True))


def availabilityHypergeometric(nNodes, fFailed, c):
    """
    GOAL: Probability that a fixed-size candidate set lies entirely inside
          F failed nodes, and its (F/N)^C bound.

    INPUTS: - nNodes: N.
            - fFailed: F.
            - c: C.

    OUTPUTS: - exact: binom(F, C) / binom(N, C).
             - bound: (F/N)^C (never below exact).
    """

    exact = hypergeometricFraction(nNodes, fFailed, c)
    bound = Fraction(fFailed, nNodes) ** c
    return float(exact), float(bound)


def expectedFallbackBlocks(p, c):
    """
    GOAL: Expected number of candidate blocks (and candidates) examined when
          every node is down independently with probability p.

    INPUTS: - p: Failure probability.
            - c: Block size C.

    OUTPUTS: - blocks: 1 / (1 - p^C).
             - candidates: C / (1 - p^C).
    """

    if not 0 <= p < 1:
        raise DomainError("The failure probability must satisfy 0 <= p < 1.")
    allDown = p ** c
    if allDown >= 1:
        raise DomainError("p^C = 1: the number of blocks diverges.")
    return 1.0 / (1.0 - allDown), c / (1.0 - allDown)



###############################################################################
############################### TheoryAnalyser ################################
###############################################################################

class TheoryAnalyser:
    """
    GOAL: Monte Carlo validation of the analytical predictions.

    VARIABLES:  - baseSeed: Seed from which every ring, key array and mask derives.
                - verbose: Enable progress bars and printed summaries.
                - checks: Accumulated (check_name, predicted, measured, sigma, pass) rows.

    METHODS:    - smoothingScalingProbe: SD of the fluid loads per C vs 1/(N.sqrt(VC)).
                - varianceDecompositionProbe: Structural vs compound variance terms.
                - dirichletLoadProbe: Mean load under redrawn gaps vs d_n/(C.m).
                - simulateIndependentAvailability: All-candidates-dead frequency vs p^C.
                - simulateFallbackBlocks: Blocks examined vs 1/(1-p^C).
                - rackFailureProbe: Whole-rack failure vs (R/N)^C.
                - keyVarianceProbe: Sampling vs structural variance of key counts.
                - empiricalShareCheck: Key shares vs fluid loads.
                - winnerRankTest: Chi-square of the winner position in the candidate set.
                - report: Accumulated checks as a dataframe.
    """

    def __init__(self, baseSeed=0, verbose=False):
        self.baseSeed = baseSeed
        self.verbose = verbose
        self.checks = []


    def _ring(self, nNodes, vnodes, index):
        return buildRing(nNodes, vnodes, HashSeed(deriveSeed(self.baseSeed, index)))


    def _seeds(self, nSeeds, description):
        return tqdm(range(nSeeds), desc=description, disable=not self.verbose)


    def _record(self, name, predicted, measured, sigma, passed):
        self.checks.append([name, float(predicted), float(measured), float(sigma), bool(passed)])
        return passed


    def smoothingScalingProbe(self, nNodes, vnodes, cList, nSeeds):
        """
        GOAL: Measure the SD of the fluid loads for every C of an ascending
              list, averaged over random rings, next to 1/(N.sqrt(VC)).
              C = 1 gives the plain ring gap scale 1/(N.sqrt(V)).

        INPUTS: - nNodes: N.
                - vnodes: V.
                - cList: Ascending candidate counts.
                - nSeeds: Number of random rings.

        OUTPUTS: - table: Dataframe (c, measured_sd, predicted_sd, sigma).
        """

        if list(cList) != sorted(cList):
            raise ConfigurationError("The candidate counts must be ascending.")
        sd = np.zeros((nSeeds, len(cList)))
        for index in self._seeds(nSeeds, 'Smoothing'):
            ring = self._ring(nNodes, vnodes, index)
            for position, c in enumerate(cList):
                sd[index, position] = fluidLoads(ring, c).sd
        measured = sd.mean(axis=0)
        sigma = sd.std(axis=0, ddof=1) / math.sqrt(nSeeds) if nSeeds > 1 else np.zeros(len(cList))
        predicted = [1.0 / (nNodes * math.sqrt(vnodes * c)) for c in cList]
        for c, value, error, target in zip(cList, measured, sigma, predicted):
            self._record('smoothing_sd_c' + str(c), target, value, error,
                         abs(value / target - 1) <= SCALING_TOLERANCE)
        table = pd.DataFrame({'c': list(cList), 'measured_sd': measured, 'predicted_sd': predicted, 'sigma': sigma})
        if self.verbose:
            print(tabulate(table, headers='keys', tablefmt='fancy_grid', showindex=False))
        return table


    def varianceDecompositionProbe(self, nNodes, vnodes, c, nSeeds):
        """
        GOAL: Split the variance of the fluid loads into the structural term
              E[Var(L|d)] = E[d(m-d)] / (C^2 m^2 (m+1)) and the compound term
              Var(E[L|d]) = Var(d) / (C^2 m^2).

        INPUTS: - nNodes: N.
                - vnodes: V.
                - c: C (C^2 << N for the regime of interest).
                - nSeeds: Number of random rings.

        OUTPUTS: - structural: Structural term.
                 - compound: Compound term.
                 - ratio: compound / structural (bounded by K.C^2/N).
        """

        coverage = []
        for index in self._seeds(nSeeds, 'Variance decomposition'):
            coverage.append(coverageCounts(self._ring(nNodes, vnodes, index), c).d)
        d = np.concatenate(coverage).astype(np.float64)
        m = nNodes * vnodes
        structural = float(np.mean(d * (m - d)) / (c * c * m * m * (m + 1)))
        compound = float(np.var(d) / (c * c * m * m))
        ratio = compound / structural
        bound = RATIO_CONSTANT * c * c / nNodes
        self._record('variance_ratio', bound, ratio, 0.0, ratio <= bound)
        return structural, compound, ratio


    def dirichletLoadProbe(self, ring, c, trials):
        """
        GOAL: Keep the candidate structure of a ring fixed and redraw its
              gaps uniformly on the simplex; the mean load of every node must
              approach d_n / (C.m).

        INPUTS: - ring: TokenRing.
                - c: C.
                - trials: Number of gap redraws.

        OUTPUTS: - mean: Mean load per node.
                 - sigma: Standard error per node.
                 - expected: d_n / (C.m).
        """

        rng = np.random.default_rng(deriveSeed(self.baseSeed, trials))
        nodes = gapCandidates(ring, c).ravel()
        loads = np.empty((trials, ring.nodeSpan))
        for trial in range(trials):
            gaps = rng.dirichlet(np.ones(ring.size))
            loads[trial] = np.bincount(nodes, weights=np.repeat(gaps / c, c), minlength=ring.nodeSpan)
        expected = coverageCounts(ring, c).conditionalMeans()
        mean, sigma = loads.mean(axis=0), loads.std(axis=0, ddof=1) / math.sqrt(trials)
        z = np.where(sigma > 0, (mean - expected) / np.where(sigma > 0, sigma, 1), 0.0)
        worst = float(np.abs(z).max())
        self._record('dirichlet_conditional_mean', 0.0, worst, 1.0, worst <= FAMILY_SIGMAS)
        return mean, sigma, expected


    def simulateIndependentAvailability(self, nNodes, vnodes, c, p, nKeys, nMasks):
        """
        GOAL: Fraction of keys whose C candidates are all down when every node
              fails independently with probability p, against p^C.

        INPUTS: - nNodes, vnodes, c: Topology.
                - p: Failure probability.
                - nKeys: Keys per mask.
                - nMasks: Number of random masks.

        OUTPUTS: - measured: Mean frequency over the masks.
                 - sigma: Standard error from the per-mask spread.
                 - predicted: p^C.
        """

        predicted = availabilityIndependent(p, c)
        ring = self._ring(nNodes, vnodes, 0)
        nodes, _ = LocalRendezvous(ring, c).candidateMatrix(generateKeys(nKeys, self.baseSeed, 0))
        rng = np.random.default_rng(deriveSeed(self.baseSeed, nMasks))
        frequencies = np.empty(nMasks)
        for trial in self._seeds(nMasks, 'Independent failures'):
            alive = rng.random(nNodes) >= p
            frequencies[trial] = np.mean(~alive[nodes].any(axis=1))
        measured = frequencies.mean()
        sigma = frequencies.std(ddof=1) / math.sqrt(nMasks)
        self._record('availability_independent', predicted, measured, sigma,
                     abs(measured - predicted) <= SIGMAS * sigma)
        return measured, sigma, predicted


    def simulateFallbackBlocks(self, nNodes, vnodes, c, p, nKeys, nMasks):
        """
        GOAL: Mean number of candidate blocks examined by fixed-candidate
              lookups under independent failures, against 1/(1-p^C).

        INPUTS: - nNodes, vnodes, c: Topology.
                - p: Failure probability.
                - nKeys: Keys per mask.
                - nMasks: Number of random masks.

        OUTPUTS: - measured: Mean blocks per lookup.
                 - sigma: Standard error from the per-mask spread.
                 - predicted: 1/(1-p^C).
        """

        predicted, _ = expectedFallbackBlocks(p, c)
        ring = self._ring(nNodes, vnodes, 0)
        engine = LocalRendezvous(ring, c)
        keys = generateKeys(nKeys, self.baseSeed, 1)
        rng = np.random.default_rng(deriveSeed(self.baseSeed, nMasks + 1))
        means = []
        for _ in self._seeds(nMasks, 'Fallback blocks'):
            alive = rng.random(nNodes) >= p
            if not alive.any():
                continue
            snapshot = engine.assignAll(keys, 'fixed-candidate', LivenessMask(alive))
            means.append(np.mean(snapshot.fallbackBlocks + 1))
        means = np.asarray(means)
        measured = means.mean()
        sigma = means.std(ddof=1) / math.sqrt(len(means))
        self._record('fallback_blocks', predicted, measured, sigma, abs(measured - predicted) <= SIGMAS * sigma)
        return measured, sigma, predicted


    def rackFailureProbe(self, nNodes, rackSize, c, nSeeds, vnodes=16):
        """
        GOAL: Fail one whole rack (nodes [0, R)) and measure the probability
              that a uniform key has its entire candidate set inside it.

        INPUTS: - nNodes: N.
                - rackSize: R.
                - c: C.
                - nSeeds: Number of random rings.
                - vnodes: V.

        OUTPUTS: - measured: Mean probability over the rings.
                 - sigma: Standard error over the rings.
                 - predicted: (R/N)^C.
                 - hypergeometric: Exact value for a uniform C-subset.
        """

        predicted = (rackSize / nNodes) ** c
        hypergeometric = float(hypergeometricFraction(nNodes, rackSize, c))
        probabilities = np.empty(nSeeds)
        for index in self._seeds(nSeeds, 'Rack failures'):
            ring = self._ring(nNodes, vnodes, index)
            inside = (gapCandidates(ring, c) < rackSize).all(axis=1)
            probabilities[index] = gapProfile(ring).gaps[inside].sum()
        measured = probabilities.mean()
        sigma = probabilities.std(ddof=1) / math.sqrt(nSeeds)
        self._record('rack_failure', predicted, measured, sigma,
                     measured <= RACK_CONSTANT * predicted + SIGMAS * sigma)
        return measured, sigma, predicted, hypergeometric


    def keyVarianceProbe(self, ring, c, kKeys, trials):
        """
        GOAL: Decompose the variance of per-node key counts X_n into the
              sampling term K.E[L(1-L)] (keys redrawn on a fixed ring) and the
              structural term K^2.Var(L) (rings redrawn); both redrawn
              together must give their sum.

        INPUTS: - ring: Fixed TokenRing (its N and V drive the redraws).
                - c: C.
                - kKeys: Keys per draw (>= 10.N).
                - trials: Number of draws per estimate.

        OUTPUTS: - result: Dictionary of measured and predicted terms.
        """

        nNodes = ring.nNodes
        if kKeys < 10 * nNodes:
            raise ConfigurationError("The key variance probe needs at least 10 keys per node.")

        # Sampling term: fixed ring, keys redrawn
        fixed = LocalRendezvous(ring, c)
        loads = fluidLoads(ring, c).l
        counts = np.array([fixed.assignAll(generateKeys(kKeys, self.baseSeed, t)).loads(ring.nodeSpan)
                           for t in self._seeds(trials, 'Key redraws')])
        perNode = counts.var(axis=0, ddof=1)
        sampling = float(np.mean(perNode))
        samplingPredicted = float(kKeys * np.mean(loads * (1 - loads)))
        samplingSigma = float(np.std(perNode, ddof=1) / math.sqrt(len(perNode)))
        self._record('key_variance_sampling', samplingPredicted, sampling, samplingSigma,
                     abs(sampling - samplingPredicted) <= SIGMAS * samplingSigma)

        # Structural term and total: rings and keys redrawn together
        fluid, deviations = [], []
        for t in self._seeds(trials, 'Ring redraws'):
            redrawn = self._ring(nNodes, ring.vnodes, t + 1)
            fluid.append(fluidLoads(redrawn, c).l)
            x = LocalRendezvous(redrawn, c).assignAll(generateKeys(kKeys, self.baseSeed, trials + t)).loads(ring.nodeSpan)
            deviations.append(np.mean((x - kKeys / nNodes) ** 2))
        fluid = np.asarray(fluid)
        structural = float(kKeys ** 2 * np.var(fluid))
        structuralPredicted = kKeys ** 2 / (nNodes ** 2 * ring.vnodes * c)
        self._record('key_variance_structural', structuralPredicted, structural, 0.0,
                     abs(structural / structuralPredicted - 1) <= SCALING_TOLERANCE)
        total = float(np.mean(deviations))
        totalSigma = float(np.std(deviations, ddof=1) / math.sqrt(trials))
        totalPredicted = float(kKeys * np.mean(fluid * (1 - fluid))) + structural
        self._record('key_variance_total', totalPredicted, total, totalSigma,
                     abs(total - totalPredicted) <= SIGMAS * totalSigma)
        return {'sampling': sampling, 'samplingPredicted': samplingPredicted, 'samplingSigma': samplingSigma,
                'structural': structural, 'structuralPredicted': structuralPredicted,
                'total': total, 'totalPredicted': totalPredicted, 'totalSigma': totalSigma}


    def empiricalShareCheck(self, ring, c, nKeys):
        """
        GOAL: Compare the key share of every node with its fluid load.

        INPUTS: - ring: TokenRing.
                - c: C.
                - nKeys: Number of uniform keys.

        OUTPUTS: - table: Dataframe (node, fluid, share, sigma, z).
        """

        loads = fluidLoads(ring, c).l
        snapshot = LocalRendezvous(ring, c).assignAll(generateKeys(nKeys, self.baseSeed, 7))
        share = snapshot.loads(ring.nodeSpan) / nKeys
        sigma = np.sqrt(loads * (1 - loads) / nKeys)
        z = np.where(sigma > 0, (share - loads) / np.where(sigma > 0, sigma, 1), 0.0)
        self._record('fluid_shares', 0.0, float(np.abs(z).max()), 1.0, bool(np.all(np.abs(z) <= SIGMAS)))
        return pd.DataFrame({'node': np.arange(ring.nodeSpan), 'fluid': loads, 'share': share, 'sigma': sigma, 'z': z})


    def winnerRankTest(self, ring, c, keys):
        """
        GOAL: Chi-square test that every position of a candidate set wins
              with probability 1/C.

        INPUTS: - ring: TokenRing.
                - c: C.
                - keys: uint64 keys.

        OUTPUTS: - counts: Wins per walk position.
                 - pValue: Chi-square p-value.
        """

        engine = LocalRendezvous(ring, c)
        nodes, _ = engine.candidateMatrix(keys)
        owners = engine.assignAll(keys).owners
        positions = np.argmax(nodes == owners[:, None], axis=1)
        counts = np.bincount(positions, minlength=c)
        pValue = float(stats.chisquare(counts).pvalue)
        self._record('winner_uniformity', 0.01, pValue, 0.0, pValue >= 0.01)
        return counts, pValue


    def report(self):
        table = pd.DataFrame(self.checks, columns=analysisColumns)
        if self.verbose:
            print(tabulate(table, headers='keys', tablefmt='fancy_grid', showindex=False))
        return table
