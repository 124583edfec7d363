# coding=utf-8

"""
Goal: Implement a benchmark simulator to run and compare placement schemes
      under node failures, membership changes and parameter sweeps.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import importlib
import time

from dataclasses import dataclass, field, fields
from typing import List, Optional

import numpy as np
import pandas as pd

from tabulate import tabulate
from tqdm import tqdm

from hashFunctions import HashSeed, probeMatrixArray
from hashingErrors import ConfigurationError, rowErrors
from hashingPerformance import PerformanceEstimator, balance, churn
from hashingSchemes import schemes, isPrime, mpchAssignArray
from localRendezvous import LocalRendezvous, LivenessMask, WeightTable
from reportHandler import ResultRow, ReportHandler, averageRows
from theoryAnalyser import TheoryAnalyser
from tokenRing import buildRing
from workloadGenerator import WorkloadGenerator, deriveSeed, fingerprint



###############################################################################
################################ Global variables #############################
###############################################################################

# Desk-scale profile (runs in seconds)
deskProfile = {
    'nodes': 200,
    'keys': 100000,
    'vnodes': 32,
    'candidates': 8,
    'maglevM': 20011,
    'failList': [1, 5, 20],
    'repeats': 5,
    'warmup': 1,
    'crushRackSize': 20,
    'vnodeList': [8, 16, 32, 64, 128],
    'mpchVnodeList': [1, 16, 32],
    'mpProbeList': [1, 2, 4, 8, 16, 32],
}

# Full-scale profile (hours, large memory)
fullScaleProfile = {
    'nodes': 5000,
    'keys': 50000000,
    'vnodes': 256,
    'candidates': 8,
    'maglevM': 65537,
    'failList': [1, 10, 50],
    'repeats': 5,
    'warmup': 1,
    'crushRackSize': 50,
    'vnodeList': [8, 16, 32, 64, 128, 256, 512, 1024],
    'mpchVnodeList': [1, 16, 256],
    'mpProbeList': [1, 2, 4, 8, 16, 32],
}

# Dictionary listing the supported profiles
profiles = {
    'desk': deskProfile,
    'paper': fullScaleProfile,
}

# Weight profiles of the weighted accuracy evaluation
weightedProfiles = ['uniform', 'bimodal', 'zipf']



###############################################################################
############################# Class ExperimentConfig ##########################
###############################################################################

@dataclass
class ExperimentConfig:
    """
    GOAL: Every parameter of a benchmark run (defaults = desk profile).
    """

    nodes: int = 200
    keys: int = 100000
    vnodes: int = 32
    candidates: int = 8
    maglevM: int = 20011
    failList: List[int] = field(default_factory=lambda: [1, 5, 20])
    repeats: int = 5
    warmup: int = 1
    seed: int = 20251226
    threads: int = 1
    hrwFullMaxN: int = 2000
    hrwSampleKeys: int = 2000000
    maxScan: int = 4096
    mpProbes: int = 8
    crushRackSize: int = 20
    crushBucketProbes: int = 8
    crushLeafProbes: int = 8
    crushTries: int = 16
    membershipPct: float = 1.0
    ablationCList: List[int] = field(default_factory=lambda: [2, 4, 8, 16, 32])
    vnodeList: List[int] = field(default_factory=lambda: [8, 16, 32, 64, 128])
    mpchVnodeList: List[int] = field(default_factory=lambda: [1, 16, 32])
    mpProbeList: List[int] = field(default_factory=lambda: [1, 2, 4, 8, 16, 32])
    reportMemory: bool = False
    reportMpchProbeGen: bool = False
    reportMembership: bool = False
    reportTheory: bool = False
    ringCache: Optional[str] = None
    outputDir: str = 'Results'
    format: str = 'csv'
    profile: str = 'desk'

    @classmethod
    def fromProfile(cls, name='desk', **overrides):
        """
        GOAL: Build a configuration from a named profile, then apply the
              non-None overrides field by field.

        INPUTS: - name: 'desk' or 'paper'.
                - overrides: Field values taking precedence.

        OUTPUTS: - config: Validated ExperimentConfig.
        """

        if name not in profiles:
            print("The profile specified is not valid, only the following profiles are supported:")
            for profile in profiles:
                print("".join(['- ', profile]))
            raise ConfigurationError("Please check the profile specified.")
        known = {item.name for item in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigurationError("Unknown configuration fields: " + ", ".join(sorted(unknown)))
        values = dict(profiles[name], profile=name)
        values.update({key: value for key, value in overrides.items() if value is not None})
        config = cls(**values)
        config.validate()
        return config

    def validate(self):
        counts = {'nodes': self.nodes, 'keys': self.keys, 'vnodes': self.vnodes, 'candidates': self.candidates,
                  'repeats': self.repeats, 'maxScan': self.maxScan, 'mpProbes': self.mpProbes,
                  'crushRackSize': self.crushRackSize, 'crushBucketProbes': self.crushBucketProbes,
                  'crushLeafProbes': self.crushLeafProbes, 'crushTries': self.crushTries,
                  'hrwSampleKeys': self.hrwSampleKeys}
        for name, value in counts.items():
            if value < 1:
                raise ConfigurationError("The parameter " + name + " must be positive (got " + str(value) + ").")
        if self.nodes < 2:
            raise ConfigurationError("At least 2 nodes are required.")
        if self.warmup < 0 or self.threads < 0:
            raise ConfigurationError("The warmup and thread counts cannot be negative.")
        if any(not 0 <= f < self.nodes for f in self.failList):
            raise ConfigurationError("Every failure size must satisfy 0 <= f < nodes.")
        if not isPrime(self.maglevM):
            raise ConfigurationError("The Maglev table size must be prime (got " + str(self.maglevM) + ").")
        if self.candidates > self.nodes or any(c > self.nodes for c in self.ablationCList):
            raise ConfigurationError("The candidate count cannot exceed the number of nodes.")
        if self.maxScan < self.candidates:
            raise ConfigurationError("The scan cap must be at least the candidate count.")
        if not 0 < self.membershipPct < 100:
            raise ConfigurationError("The membership change must satisfy 0 < pct < 100.")
        return True



###############################################################################
########################### Class HashingSimulator ############################
###############################################################################

class HashingSimulator:
    """
    GOAL: Run the benchmark grid of the placement schemes.

    VARIABLES: - config: ExperimentConfig.
               - workload: WorkloadGenerator of the configuration seed.
               - verbose: Enable progress bars and printed tables.

    METHODS:   - createScheme: Instantiate a registered scheme by name.
               - runRow: Evaluate one scheme on one (keys, failure set) cell.
               - runSuite: Every scheme x failure size x repeat.
               - runAblationC: LRH balance and throughput per C.
               - runVnodeSweep: Ring balance, build time and throughput per V.
               - runMpchProbeSweep: MPCH balance and throughput per P.
               - runMpchVnodeSweep: MPCH balance and throughput per V.
               - runMpchProbeMicrobench: Probe generation vs assignment timings.
               - runMembership: Rebuild churn after adding/removing nodes.
               - runWeightedAccuracy: Allocation error of weighted LRH.
               - runMemoryReport: Bytes per lookup structure.
               - runTheoryChecks: Analytical predictions vs measurements.
               - tradeoffPoints: Throughput vs Max/Avg points.
               - emitAll: Run the configured experiments and write the reports.
    """

    def __init__(self, config=None, verbose=False):
        self.config = config if config is not None else ExperimentConfig()
        self.config.validate()
        self.workload = WorkloadGenerator(self.config.seed)
        self.verbose = verbose


    def hashSeed(self, repeat):
        """Hash seed shared by every structure of a repeat."""
        return HashSeed(deriveSeed(self.config.seed, repeat))


    def _schemeParameters(self, className, nNodes, seed, vnodes=None, c=None, probes=None):
        config = self.config
        parameters = {'nNodes': nNodes, 'seed': seed, 'maxScan': config.maxScan}
        if className in ('RingRebuild', 'RingNextAlive', 'MpchNextAlive', 'LrhFixedCandidate', 'LrhRebuild'):
            parameters['vnodes'] = vnodes or config.vnodes
            parameters['ringCache'] = config.ringCache
        if className == 'MpchNextAlive':
            parameters['probes'] = probes or config.mpProbes
        elif className in ('LrhFixedCandidate', 'LrhRebuild'):
            parameters['c'] = c or config.candidates
        elif className == 'MaglevRebuild':
            parameters['mSize'] = config.maglevM
        elif className == 'HrwSampled':
            parameters['fullMaxN'] = config.hrwFullMaxN
            parameters['sampleKeys'] = config.hrwSampleKeys
        elif className == 'CrushLike':
            parameters.update({'rackSize': config.crushRackSize, 'bucketProbes': config.crushBucketProbes,
                               'leafProbes': config.crushLeafProbes, 'tries': config.crushTries})
        return parameters


    def createScheme(self, schemeName, repeat=0, nNodes=None, **knobs):
        """
        GOAL: Instantiate a registered scheme by name.

        INPUTS: - schemeName: Key of the scheme registry.
                - repeat: Repeat number (selects the hash seed).
                - nNodes: Node count (defaults to the configuration).
                - knobs: vnodes, c or probes overrides.

        OUTPUTS: - scheme: hashingScheme instance.
        """

        if schemeName not in schemes:
            print("The scheme specified is not valid, only the following schemes are supported:")
            for scheme in schemes:
                print("".join(['- ', scheme]))
            raise ConfigurationError("Please check the scheme specified.")
        className = schemes[schemeName]
        schemeClass = getattr(importlib.import_module('hashingSchemes'), className)
        nNodes = nNodes or self.config.nodes
        return schemeClass(**self._schemeParameters(className, nNodes, self.hashSeed(repeat), **knobs))


    def runRow(self, scheme, keys, failedSet, failures=0, repeat=0, keyDigest='', failureDigest=''):
        """
        GOAL: Evaluate one scheme on one cell: build, all-alive pass, failure,
              failure pass, metrics. Only the builds and the failure pass are
              timed; masks are allocated outside the timed regions.

        INPUTS: - scheme: hashingScheme.
                - keys: Key array of the cell.
                - failedSet: Failed node ids.
                - failures, repeat: Cell coordinates.
                - keyDigest, failureDigest: Workload fingerprints.

        OUTPUTS: - row: ResultRow.
        """

        workers = self.config.threads
        keys = scheme.sampleKeys(keys)
        mask = LivenessMask.fromFailed(scheme.nNodes, failedSet)

        start = time.perf_counter()
        scheme.build()
        buildSeconds = time.perf_counter() - start
        initSnapshot = scheme.assign(keys, None, workers)

        start = time.perf_counter()
        scheme.applyFailure(mask)
        buildSeconds += time.perf_counter() - start

        start = time.perf_counter()
        failSnapshot = scheme.assign(keys, mask, workers)
        querySeconds = time.perf_counter() - start

        estimator = PerformanceEstimator(initSnapshot, failSnapshot, failedSet, mask)
        estimator.computePerformance()
        b, c = estimator.balanceReport, estimator.churnReport
        throughput = c.kUsed / querySeconds / 1e6 if querySeconds > 0 else float('inf')
        return ResultRow(scheme.label, c.kUsed, 1000 * buildSeconds, 1000 * querySeconds, throughput,
                         b.maxAvg, b.p99Avg, b.cv, c.churnPct, c.excessPct, c.failAffected, c.maxRecvShare,
                         c.concX, c.scanAvg, c.scanMax, failures, repeat, keyDigest, failureDigest)


    def runSuite(self, schemeNames=None):
        """
        GOAL: Run every scheme on every (repeat, failure size) cell. All the
              schemes of a cell consume the same keys and failure set; warmup
              rows are computed and dropped; an error only voids its own row.

        INPUTS: - schemeNames: Registry names (default: all).

        OUTPUTS: - rows: ResultRow list (warmups excluded).
        """

        config = self.config
        schemeNames = list(schemes) if schemeNames is None else schemeNames
        cells = [(repeat, f) for repeat in range(config.repeats) for f in config.failList]

        # Warmup on the first cell, results discarded
        if config.warmup and cells:
            keys = self.workload.keys(config.keys, 0)
            failed = self.workload.failures(config.nodes, cells[0][1], 0)
            for _ in range(config.warmup):
                for name in schemeNames:
                    try:
                        self.runRow(self.createScheme(name, 0), keys, failed)
                    except rowErrors:
                        pass

        rows = []
        for repeat, f in tqdm(cells, desc='Benchmark cells', disable=not self.verbose):
            keys = self.workload.keys(config.keys, repeat)
            failed = self.workload.failures(config.nodes, f, repeat)
            keyDigest, failureDigest = fingerprint(keys), fingerprint(failed)
            for name in schemeNames:
                try:
                    scheme = self.createScheme(name, repeat)
                    rows.append(self.runRow(scheme, keys, failed, f, repeat, keyDigest, failureDigest))
                except rowErrors as error:
                    rows.append(ResultRow(name, failures=f, repeat=repeat, keyFingerprint=keyDigest,
                                          failureFingerprint=failureDigest, error=str(error)))

        if self.verbose:
            overall = averageRows(rows)
            print(tabulate(overall, headers='keys', tablefmt='fancy_grid', showindex=False))
        return rows


    def _balanceSweep(self, schemeName, knob, values, description):
        # All-alive balance and timing of one scheme for every knob value, averaged over repeats
        records = []
        for value in tqdm(values, desc=description, disable=not self.verbose):
            for repeat in range(self.config.repeats):
                keys = self.workload.keys(self.config.keys, repeat)
                scheme = self.createScheme(schemeName, repeat, **{knob: value})
                start = time.perf_counter()
                scheme.build()
                buildSeconds = time.perf_counter() - start
                start = time.perf_counter()
                snapshot = scheme.assign(keys, None, self.config.threads)
                querySeconds = time.perf_counter() - start
                report = balance(snapshot.loads(scheme.nNodes))
                records.append({knob: value, 'label': scheme.label, 'max_avg': report.maxAvg,
                                'p99_avg': report.p99Avg, 'cv': report.cv, 'build_ms': 1000 * buildSeconds,
                                'query_ms': 1000 * querySeconds,
                                'throughput': len(keys) / querySeconds / 1e6 if querySeconds > 0 else float('inf')})
        table = pd.DataFrame(records)
        return table.groupby([knob, 'label'], sort=False).mean(numeric_only=True).reset_index()


    def runAblationC(self, cList=None):
        """
        GOAL: LRH all-alive balance and throughput for every C.

        INPUTS: - cList: Candidate counts (default: configuration list).

        OUTPUTS: - table: Dataframe (c, label, max_avg, p99_avg, cv, build_ms, query_ms, throughput).
        """

        cList = self.config.ablationCList if cList is None else cList
        return self._balanceSweep('LRH[fixed-cand]', 'c', cList, 'C ablation')


    def runVnodeSweep(self, vList=None):
        """Ring (next-alive) balance, build time and throughput for every V."""
        vList = self.config.vnodeList if vList is None else vList
        return self._balanceSweep('Ring[next-alive]', 'vnodes', vList, 'Vnode sweep')


    def runMpchVnodeSweep(self, vList=None):
        """MPCH balance and throughput for every V at the configured P."""
        vList = self.config.mpchVnodeList if vList is None else vList
        return self._balanceSweep('MPCH[next-alive]', 'vnodes', vList, 'MPCH vnode sweep')


    def runMpchProbeSweep(self, pList=None):
        """MPCH balance and throughput for every probe count P."""
        pList = self.config.mpProbeList if pList is None else pList
        return self._balanceSweep('MPCH[next-alive]', 'probes', pList, 'MPCH probe sweep')


    def runMpchProbeMicrobench(self, trials=None):
        """
        GOAL: Time MPCH probe generation alone and the full assignment under
              both probe modes (best of several trials), and compare the
              speedups of double hashing over mix64.

        INPUTS: - trials: Timing trials per measurement (default: repeats).

        OUTPUTS: - table: Dataframe (mode, probe_gen_ms, assign_ms, probe_gen_mkeys, assign_mkeys)
                          with the speedup ratios in its attrs.
        """

        config = self.config
        trials = config.repeats if trials is None else trials
        keys = self.workload.keys(config.keys, 0)
        seed = self.hashSeed(0)
        ring = buildRing(config.nodes, config.vnodes, seed)
        records = []
        for mode in ('mix64', 'double-hash'):
            probeTimes, assignTimes = [], []
            for _ in range(trials):
                start = time.perf_counter()
                probeMatrixArray(keys, config.mpProbes, seed, mode)
                probeTimes.append(time.perf_counter() - start)
                start = time.perf_counter()
                mpchAssignArray(ring, keys, config.mpProbes, None, seed, mode, config.maxScan)
                assignTimes.append(time.perf_counter() - start)
            probeSeconds, assignSeconds = min(probeTimes), min(assignTimes)
            records.append({'mode': mode, 'probe_gen_ms': 1000 * probeSeconds, 'assign_ms': 1000 * assignSeconds,
                            'probe_gen_mkeys': len(keys) / probeSeconds / 1e6,
                            'assign_mkeys': len(keys) / assignSeconds / 1e6})
        table = pd.DataFrame(records)
        table.attrs['probe_gen_speedup'] = table['probe_gen_ms'][0] / table['probe_gen_ms'][1]
        table.attrs['assign_speedup'] = table['assign_ms'][0] / table['assign_ms'][1]
        if self.verbose:
            print(tabulate(table, headers='keys', tablefmt='fancy_grid', showindex=False))
            print("Probe generation speedup: " + "{0:.2f}".format(table.attrs['probe_gen_speedup']) + "x")
            print("Assign-only speedup: " + "{0:.2f}".format(table.attrs['assign_speedup']) + "x")
        return table


    def runMembership(self, pct=None, schemeNames=None):
        """
        GOAL: Rebuild churn after removing or adding pct% of the nodes.
              Removal: the theoretical minimum is the share of keys owned by
              the removed nodes. Addition: it is the token share of the new
              nodes, V.dN / |R'| = dN / (N + dN).

        INPUTS: - pct: Membership change in percent (0 < pct < 100).
                - schemeNames: Registry names (default: rebuild-style schemes).

        OUTPUTS: - table: Dataframe (label, change, churn_pct, minimum_pct, excess_pct)
                          averaged over the repeats.
        """

        config = self.config
        pct = config.membershipPct if pct is None else pct
        if not 0 < pct < 100:
            raise ConfigurationError("The membership change must satisfy 0 < pct < 100.")
        if schemeNames is None:
            schemeNames = ['Ring[rebuild]', 'MPCH[next-alive]', 'LRH[rebuild]', 'Maglev[rebuild]',
                           'Jump[rebuild-renum]', 'HRW']
        delta = max(1, int(round(config.nodes * pct / 100.0)))
        records = []
        for repeat in tqdm(range(config.repeats), desc='Membership', disable=not self.verbose):
            keys = self.workload.keys(config.keys, repeat)
            removed = self.workload.failures(config.nodes, delta, repeat)
            for name in schemeNames:
                # Removal: rebuild over the survivors
                scheme = self.createScheme(name, repeat)
                keysUsed = scheme.sampleKeys(keys)
                scheme.build()
                before = scheme.assign(keysUsed, None, config.threads)
                scheme.build(np.setdiff1d(np.arange(config.nodes), removed))
                mask = LivenessMask.fromFailed(config.nodes, removed)
                after = scheme.assign(keysUsed, mask, config.threads)
                report = churn(before, after, removed, mask)
                records.append({'label': scheme.label, 'change': '-' + str(pct) + '%', 'churn_pct': report.churnPct,
                                'minimum_pct': report.minimumChurnPct, 'excess_pct': report.excessPct})

                # Addition: nodes N..N+dN-1 join
                grown = self.createScheme(name, repeat, nNodes=config.nodes + delta)
                grown.sampleKeys(keys)
                grown.build()
                after = grown.assign(keysUsed, None, config.threads)
                moved = int(np.count_nonzero(before.owners != after.owners))
                churnPct = 100.0 * moved / len(keysUsed)
                minimumPct = 100.0 * delta / (config.nodes + delta)
                records.append({'label': scheme.label, 'change': '+' + str(pct) + '%', 'churn_pct': churnPct,
                                'minimum_pct': minimumPct, 'excess_pct': max(0.0, churnPct - minimumPct)})
        table = pd.DataFrame(records).groupby(['label', 'change'], sort=False).mean().reset_index()
        if self.verbose:
            print(tabulate(table, headers='keys', tablefmt='fancy_grid', showindex=False))
        return table


    def runWeightedAccuracy(self, profiles=None, cList=None):
        """
        GOAL: Allocation error of weighted LRH: per-node key share against
              the target w_n / sum(w), for several weight profiles and C.

        INPUTS: - profiles: Weight profile names.
                - cList: Candidate counts.

        OUTPUTS: - table: Dataframe (profile, c, max_abs_error, mean_abs_error, max_rel_error).
        """

        config = self.config
        profiles = weightedProfiles if profiles is None else profiles
        cList = [2, config.candidates, min(4 * config.candidates, config.nodes)] if cList is None else cList
        keys = self.workload.keys(config.keys, 0)
        ring = buildRing(config.nodes, config.vnodes, self.hashSeed(0))
        records = []
        for profile in profiles:
            weights = WeightTable(self.workload.weights(config.nodes, profile))
            target = weights.weights / weights.weights.sum()
            for c in cList:
                engine = LocalRendezvous(ring, c, maxScan=config.maxScan)
                snapshot = engine.assignAll(keys, 'all-alive', weights=weights, workers=config.threads)
                share = snapshot.loads(config.nodes) / len(keys)
                error = np.abs(share - target)
                records.append({'profile': profile, 'c': c, 'max_abs_error': error.max(),
                                'mean_abs_error': error.mean(), 'max_rel_error': (error / target).max()})
        return pd.DataFrame(records)


    def runMemoryReport(self):
        """Bytes held by every lookup structure of the configuration."""
        config = self.config
        seed = self.hashSeed(0)
        ring = buildRing(config.nodes, config.vnodes, seed)
        maglev = self.createScheme('Maglev[rebuild]')
        maglev.build()
        inMemory = ring.tokens.nbytes + ring.nodes.nbytes + ring.replicas.nbytes + ring.deltas.nbytes
        records = [{'structure': 'ring entries (packed)', 'entries': ring.size, 'bytes': ring.nbytes},
                   {'structure': 'ring arrays (in memory)', 'entries': ring.size, 'bytes': inMemory},
                   {'structure': 'maglev table', 'entries': config.maglevM, 'bytes': maglev.memoryBytes()},
                   {'structure': 'weight table', 'entries': config.nodes,
                    'bytes': WeightTable.uniform(config.nodes).nbytes},
                   {'structure': 'jump', 'entries': 0, 'bytes': 0}]
        return pd.DataFrame(records)


    def runTheoryChecks(self):
        """
        GOAL: Run the analytical checks at desk scale and collect them as
              (check_name, predicted, measured, sigma, pass) rows.
        """

        analyser = TheoryAnalyser(self.config.seed, self.verbose)
        c = min(4, self.config.nodes)
        analyser.smoothingScalingProbe(200, 32, [1, 2, 4, 8], 5)
        analyser.varianceDecompositionProbe(400, 16, 4, 5)
        analyser.dirichletLoadProbe(buildRing(20, 8, self.hashSeed(1)), c, 500)
        analyser.keyVarianceProbe(buildRing(100, 16, self.hashSeed(2)), 4, 20000, 20)
        analyser.simulateIndependentAvailability(200, 16, 4, 0.3, 10000, 100)
        analyser.simulateFallbackBlocks(200, 16, 3, 0.4, 5000, 30)
        analyser.rackFailureProbe(100, 20, 2, 20)
        ring = buildRing(20, 8, self.hashSeed(0))
        analyser.empiricalShareCheck(ring, c, 1000000)
        analyser.winnerRankTest(ring, c, self.workload.keys(100000, 3))
        return analyser.report()


    def tradeoffPoints(self, vnodeSweep=None, ablation=None, probeSweep=None):
        """(label, family, knob, throughput, Max/Avg) for Ring over V, LRH over C and MPCH over P."""
        points = []
        sweeps = [('Ring', 'vnodes', self.runVnodeSweep() if vnodeSweep is None else vnodeSweep),
                  ('LRH', 'c', self.runAblationC() if ablation is None else ablation),
                  ('MPCH', 'probes', self.runMpchProbeSweep() if probeSweep is None else probeSweep)]
        for family, knob, table in sweeps:
            for record in table.to_dict('records'):
                points.append([record['label'], family, record[knob], record['throughput'], record['max_avg']])
        return points


    def emitAll(self, handler=None):
        """
        GOAL: Run the suite plus every enabled extra experiment and write
              the reports.

        INPUTS: - handler: ReportHandler (default: configuration output).

        OUTPUTS: - rows: Suite rows (errors included).
        """

        config = self.config
        handler = handler or ReportHandler(config.outputDir, config.format)
        rows = self.runSuite()
        handler.emitReport(rows)
        handler.emitChurnTable(rows)
        handler.emitConcentration(rows)
        handler.emitErrors(rows)
        ablation, vnodeSweep, probeSweep = self.runAblationC(), self.runVnodeSweep(), self.runMpchProbeSweep()
        handler.dataframeToFile('ablation_c', ablation)
        handler.dataframeToFile('vnode_sweep', vnodeSweep)
        handler.dataframeToFile('mpch_probe_sweep', probeSweep)
        handler.dataframeToFile('mpch_vnode_sweep', self.runMpchVnodeSweep())
        handler.dataframeToFile('weighted_accuracy', self.runWeightedAccuracy())
        handler.emitScatter(self.tradeoffPoints(vnodeSweep, ablation, probeSweep))
        if config.reportMpchProbeGen:
            handler.dataframeToFile('mpch_probe_microbench', self.runMpchProbeMicrobench())
        if config.reportMembership:
            handler.dataframeToFile('membership', self.runMembership())
        if config.reportMemory:
            handler.dataframeToFile('memory', self.runMemoryReport())
        if config.reportTheory:
            handler.dataframeToFile('analysis', self.runTheoryChecks(), format='csv')
        return rows
