# coding=utf-8

"""
Goal: Program Main.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import argparse
import sys

from hashingSimulator import ExperimentConfig, HashingSimulator, profiles
from reportHandler import reportFormats



###############################################################################
################################# Arguments ###################################
###############################################################################

def integerList(text):
    """Comma separated integers, e.g. '1,5,20'."""
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("Expected a comma separated list of integers, got '" + text + "'.")


def parseArguments(argv=None):
    parser = argparse.ArgumentParser(description='Benchmark of consistent placement schemes under node failures.')
    parser.add_argument("--profile", default='desk', choices=list(profiles), help="Parameter profile")
    parser.add_argument("--nodes", type=int, help="Number of nodes N")
    parser.add_argument("--keys", type=int, help="Number of keys K")
    parser.add_argument("--vnodes", type=int, help="Virtual nodes per node V")
    parser.add_argument("--candidates", type=int, help="LRH candidate count C")
    parser.add_argument("--maglev-m", dest='maglevM', type=int, help="Maglev table size (prime)")
    parser.add_argument("--fail-list", dest='failList', type=integerList, help="Failure sizes, e.g. 1,5,20")
    parser.add_argument("--repeats", type=int, help="Measured repeats")
    parser.add_argument("--warmup", type=int, help="Discarded warmup runs")
    parser.add_argument("--seed", type=int, help="Base seed")
    parser.add_argument("--threads", type=int, help="Key-range workers (0 = all cores)")
    parser.add_argument("--hrw-full-max-n", dest='hrwFullMaxN', type=int, help="Largest N evaluated with full HRW")
    parser.add_argument("--hrw-sample-keys", dest='hrwSampleKeys', type=int, help="Sampled keys above that N")
    parser.add_argument("--max-scan", dest='maxScan', type=int, help="Scan step cap")
    parser.add_argument("--mp-probes", dest='mpProbes', type=int, help="MPCH probe count P")
    parser.add_argument("--crush-rack-size", dest='crushRackSize', type=int, help="CRUSH-like rack size")
    parser.add_argument("--crush-bucket-probes", dest='crushBucketProbes', type=int, help="CRUSH-like rack draws")
    parser.add_argument("--crush-leaf-probes", dest='crushLeafProbes', type=int, help="CRUSH-like member draws")
    parser.add_argument("--crush-tries", dest='crushTries', type=int, help="CRUSH-like retry attempts")
    parser.add_argument("--membership-pct", dest='membershipPct', type=float, help="Membership change in percent")
    parser.add_argument("--ablation-c-list", dest='ablationCList', type=integerList, help="C values of the ablation")
    parser.add_argument("--report-memory", dest='reportMemory', action='store_true', default=None)
    parser.add_argument("--report-mpch-probe-gen", dest='reportMpchProbeGen', action='store_true', default=None)
    parser.add_argument("--report-membership", dest='reportMembership', action='store_true', default=None)
    parser.add_argument("--report-theory", dest='reportTheory', action='store_true', default=None)
    parser.add_argument("--ring-cache", dest='ringCache', type=str, help="Directory of cached ring files")
    parser.add_argument("--output", dest='outputDir', type=str, help="Output directory of the reports")
    parser.add_argument("--format", choices=reportFormats, help="Report format")
    parser.add_argument("--verbose", action='store_true', help="Progress bars and printed tables")
    return parser.parse_args(argv)


def main(argv=None):
    """
    GOAL: Run the benchmark described by the command line.

    INPUTS: - argv: Arguments (default: sys.argv).

    OUTPUTS: - status: 0 if every row was computed, 1 otherwise.
    """

    args = vars(parseArguments(argv))
    name, verbose = args.pop('profile'), args.pop('verbose')
    config = ExperimentConfig.fromProfile(name, **args)
    simulator = HashingSimulator(config, verbose)
    rows = simulator.emitAll()
    failed = [row for row in rows if row.failed]
    for row in failed:
        print("Row failed: " + row.label + " (f=" + str(row.failures) + ", repeat=" + str(row.repeat) + "): "
              + row.error, file=sys.stderr)
    return 1 if failed else 0



###############################################################################
##################################### MAIN ####################################
###############################################################################

if(__name__ == '__main__'):

    sys.exit(main())
