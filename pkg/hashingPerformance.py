# coding=utf-8

"""
Goal: Accurately estimating the load balance and the failure churn of a
      placement scheme from its initial and post-failure assignments.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import math

from dataclasses import dataclass, field

import numpy as np

from tabulate import tabulate

from hashingErrors import ConfigurationError, UndefinedMetricsError



###############################################################################
################################ Metric bundles ###############################
###############################################################################

@dataclass
class BalanceReport:
    """Peak-to-average (Max/Avg), P99/Avg and coefficient of variation of the per-node loads."""

    maxAvg: float
    p99Avg: float
    cv: float
    loads: np.ndarray = field(repr=False)


@dataclass
class ChurnReport:
    """
    GOAL: Churn metrics of one (initial, failure) pair of assignments.

    VARIABLES: - kUsed: Keys evaluated.
               - moved: Keys whose owner changed.
               - churnPct: 100 * moved / kUsed.
               - excessPct: Churn beyond the keys of the failed nodes (%).
               - failAffected: Keys initially owned by a failed node.
               - maxRecvShare: Largest share of affected keys received by one node.
               - concX: maxRecvShare relative to an even split over alive nodes.
               - scanAvg / scanMax: Scan steps over both passes.
    """

    kUsed: int
    moved: int
    churnPct: float
    excessPct: float
    failAffected: int
    maxRecvShare: float
    concX: float
    scanAvg: float = 0.0
    scanMax: int = 0

    @property
    def minimumChurnPct(self):
        return 100.0 * self.failAffected / self.kUsed



###############################################################################
############################### Metric functions ##############################
###############################################################################

def nearestRank(sortedValues, percentile):
    """Nearest-rank percentile of an ascending array."""
    rank = max(1, math.ceil(percentile / 100.0 * len(sortedValues)))
    return sortedValues[rank - 1]


def balance(loads):
    """
    GOAL: Compute the balance columns from per-node key counts (zero loads
          of alive nodes included in the mean).

    INPUTS: - loads: Key count per node.

    OUTPUTS: - report: BalanceReport.
    """

    loads = np.asarray(loads, dtype=np.int64)
    if len(loads) == 0 or loads.sum() == 0:
        raise UndefinedMetricsError("Balance metrics are undefined over zero keys.")
    mean = loads.mean()
    ordered = np.sort(loads)
    return BalanceReport(float(ordered[-1] / mean), float(nearestRank(ordered, 99) / mean),
                         float(loads.std() / mean), loads)


def scanStats(snapshot):
    """(ScanAvg, ScanMax) of one assignment pass."""
    steps = snapshot.scanSteps
    if len(steps) == 0:
        return 0.0, 0
    return float(steps.sum(dtype=np.int64) / len(steps)), int(steps.max())


def combinedScanStats(initSnapshot, failSnapshot):
    """(ScanAvg, ScanMax) over the initial and the failure passes together."""
    lookups = initSnapshot.kUsed + failSnapshot.kUsed
    if lookups == 0:
        return 0.0, 0
    total = int(initSnapshot.scanSteps.sum(dtype=np.int64)) + int(failSnapshot.scanSteps.sum(dtype=np.int64))
    return total / lookups, max(scanStats(initSnapshot)[1], scanStats(failSnapshot)[1])


def churn(initSnapshot, failSnapshot, failedSet, mask):
    """
    GOAL: Compute the churn columns from the initial and the post-failure
          assignments of the same key array.

    INPUTS: - initSnapshot: All-alive AssignmentSnapshot.
            - failSnapshot: Post-failure AssignmentSnapshot.
            - failedSet: Failed node ids.
            - mask: LivenessMask of the failure pass.

    OUTPUTS: - report: ChurnReport.
    """

    if initSnapshot.kUsed != failSnapshot.kUsed:
        raise ConfigurationError("Both assignment passes must cover the same keys.")
    kUsed = initSnapshot.kUsed
    if kUsed == 0:
        raise UndefinedMetricsError("Churn metrics are undefined over zero keys.")

    init, fail = initSnapshot.owners, failSnapshot.owners
    moved = int(np.count_nonzero(init != fail))
    affected = np.isin(init, np.asarray(sorted(failedSet), dtype=np.int64))
    failAffected = int(np.count_nonzero(affected))
    churnPct = 100.0 * moved / kUsed
    excessPct = max(0.0, 100.0 * (moved - failAffected) / kUsed)

    # Receivers: alive nodes only, affected keys only
    maxRecvShare, concX = 0.0, 0.0
    if failAffected:
        received = np.bincount(fail[affected], minlength=mask.nNodes)[:mask.nNodes]
        received = np.where(mask.alive, received, 0)
        maxRecvShare = float(received.max() / failAffected)
        concX = maxRecvShare * mask.nAlive

    scanAvg, scanMax = combinedScanStats(initSnapshot, failSnapshot)
    return ChurnReport(kUsed, moved, churnPct, excessPct, failAffected, maxRecvShare, concX, scanAvg, scanMax)


def movedKeys(initSnapshot, failSnapshot):
    """Indices of the keys whose owner changed."""
    return np.flatnonzero(initSnapshot.owners != failSnapshot.owners)


def affectedKeys(initSnapshot, failedSet):
    """Indices of the keys whose initial owner failed."""
    return np.flatnonzero(np.isin(initSnapshot.owners, np.asarray(sorted(failedSet), dtype=np.int64)))



###############################################################################
######################### Class PerformanceEstimator ##########################
###############################################################################

class PerformanceEstimator:
    """
    GOAL: Accurately estimating the performance of a placement scheme, by
          computing every balance and churn indicator of one benchmark row.

    VARIABLES: - initSnapshot: All-alive assignment.
               - failSnapshot: Post-failure assignment.
               - failedSet: Failed node ids.
               - mask: LivenessMask of the failure pass.
               - balanceReport / churnReport: Computed indicators.

    METHODS:   - computeBalance: Max/Avg, P99/Avg and CV (initial pass, all nodes).
               - computeChurn: Churn, excess churn, concentration and scan steps.
               - computePerformance: Compute every indicator.
               - displayPerformance: Display the indicators in a table.
    """

    def __init__(self, initSnapshot, failSnapshot, failedSet, mask):
        self.initSnapshot = initSnapshot
        self.failSnapshot = failSnapshot
        self.failedSet = failedSet
        self.mask = mask


    def computeBalance(self):
        self.balanceReport = balance(self.initSnapshot.loads(self.mask.nNodes))
        return self.balanceReport


    def computeChurn(self):
        self.churnReport = churn(self.initSnapshot, self.failSnapshot, self.failedSet, self.mask)
        return self.churnReport


    def computePerformance(self):
        """
        GOAL: Compute the entire set of performance indicators.

        INPUTS: /

        OUTPUTS: - performanceTable: Table summarizing the performance of
                                     a placement scheme.
        """

        self.computeBalance()
        self.computeChurn()
        b, c = self.balanceReport, self.churnReport
        self.performanceTable = [["K used", "{0:d}".format(c.kUsed)],
                                 ["Max/Avg", "{0:.4f}".format(b.maxAvg)],
                                 ["P99/Avg", "{0:.4f}".format(b.p99Avg)],
                                 ["CV", "{0:.4f}".format(b.cv)],
                                 ["Churn", "{0:.3f}".format(c.churnPct) + '%'],
                                 ["Excess churn", "{0:.3f}".format(c.excessPct) + '%'],
                                 ["Fail affected", "{0:d}".format(c.failAffected)],
                                 ["Max receiver share", "{0:.4f}".format(c.maxRecvShare)],
                                 ["Concentration", "{0:.2f}".format(c.concX) + 'x'],
                                 ["Scan avg/max", "{0:.2f}/{1:d}".format(c.scanAvg, c.scanMax)]]
        return self.performanceTable


    def displayPerformance(self, name):
        """
        GOAL: Compute and display the entire set of performance indicators
              in a table.

        INPUTS: - name: Label of the scheme analysed.

        OUTPUTS: - performanceTable: Table summarizing the performance.
        """

        self.computePerformance()
        headers = ["Performance Indicator", name]
        tabulation = tabulate(self.performanceTable, headers, tablefmt="fancy_grid", stralign="center")
        print(tabulation)
        return self.performanceTable
