# coding=utf-8

"""
Goal: Error vocabulary shared by the hashing library and the benchmark harness.
"""

###############################################################################
############################### Error classes #################################
###############################################################################

class ConfigurationError(SystemError):
    """
    GOAL: Signal an invalid topology or parameter set (e.g. fewer than two
          nodes, more candidates than distinct nodes, non-prime table size).
          Derives from SystemError so that the harness can isolate one row.
    """


class DomainError(ValueError):
    """
    GOAL: Signal an argument outside its numeric domain (e.g. a non-positive
          weight or a failure probability p >= 1).
    """


class ScanExhaustedError(RuntimeError):
    """
    GOAL: Signal that the scan cap was reached before any alive node was
          found, i.e. an availability failure for this key.
    """


class UndefinedMetricsError(ValueError):
    """
    GOAL: Signal that a load metric was requested over zero keys.
    """



###############################################################################
################################# Row isolation ###############################
###############################################################################

# Errors that void a single benchmark row instead of the whole run
rowErrors = (ConfigurationError, DomainError, ScanExhaustedError, UndefinedMetricsError, SystemError, RuntimeError)
