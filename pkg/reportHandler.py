# coding=utf-8

"""
Goal: Converting benchmark rows <-> report files (CSV or markdown), with the
      per failure size tables, the overall average and the figure-ready
      companion files.
"""

###############################################################################
################################### Imports ###################################
###############################################################################

import os

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np
import pandas as pd

from tabulate import tabulate



###############################################################################
################################ Global variables #############################
###############################################################################

# Report columns, in table order
reportColumns = ['Algorithm', 'K_used', 'Build(ms)', 'Query(ms)', 'Thrpt(M/s)', 'Max/Avg', 'P99/Avg', 'CV',
                 'Churn(%)', 'Excess(%)', 'FailAff', 'MaxRecvShare', 'Conc(x)', 'ScanAvg', 'ScanMax']

# Supported report formats
reportFormats = ('csv', 'markdown')

# Numeric precision of the emitted values
precisions = {'Build(ms)': 2, 'Query(ms)': 2, 'Thrpt(M/s)': 2, 'Max/Avg': 4, 'P99/Avg': 4, 'CV': 4,
              'Churn(%)': 3, 'Excess(%)': 3, 'MaxRecvShare': 4, 'Conc(x)': 2, 'ScanAvg': 2}



###############################################################################
################################ Class ResultRow ##############################
###############################################################################

@dataclass
class ResultRow:
    """
    GOAL: One benchmark row: a labelled scheme evaluated on one
          (failure size, repeat) cell.

    VARIABLES: - label: Algorithm label with its semantics tag.
               - kUsed, buildMs, queryMs, throughput: Size and timings.
               - maxAvg, p99Avg, cv: Balance of the initial assignment.
               - churnPct ... scanMax: Churn of the failure pass.
               - failures, repeat: Cell coordinates.
               - keyFingerprint, failureFingerprint: Workload digests.
               - error: Error message if the row could not be computed.
    """

    label: str
    kUsed: int = 0
    buildMs: float = float('nan')
    queryMs: float = float('nan')
    throughput: float = float('nan')
    maxAvg: float = float('nan')
    p99Avg: float = float('nan')
    cv: float = float('nan')
    churnPct: float = float('nan')
    excessPct: float = float('nan')
    failAffected: int = 0
    maxRecvShare: float = float('nan')
    concX: float = float('nan')
    scanAvg: float = float('nan')
    scanMax: int = 0
    failures: int = 0
    repeat: int = 0
    keyFingerprint: str = ''
    failureFingerprint: str = ''
    error: Optional[str] = None

    @property
    def failed(self):
        return self.error is not None

    def toRecord(self):
        values = [self.label, self.kUsed, self.buildMs, self.queryMs, self.throughput, self.maxAvg, self.p99Avg,
                  self.cv, self.churnPct, self.excessPct, self.failAffected, self.maxRecvShare, self.concX,
                  self.scanAvg, self.scanMax]
        return dict(zip(reportColumns, values))

    @classmethod
    def fromRecord(cls, record, failures=0, repeat=0):
        values = [record[column] for column in reportColumns]
        names = [field.name for field in fields(cls)][:len(reportColumns)]
        row = cls(**dict(zip(names, values)), failures=failures, repeat=repeat)
        row.kUsed, row.failAffected, row.scanMax = int(row.kUsed), int(row.failAffected), int(row.scanMax)
        return row



###############################################################################
############################## Row aggregation ################################
###############################################################################

def rowsToDataframe(rows):
    """15-column dataframe of the successful rows, in row order."""
    records = [row.toRecord() for row in rows if not row.failed]
    return pd.DataFrame(records, columns=reportColumns)


def averageRows(rows):
    """
    GOAL: Average rows sharing a label (repeats, failure sizes). K_used,
          FailAff and every ratio are means; ScanMax is the maximum.

    INPUTS: - rows: ResultRow list.

    OUTPUTS: - table: 15-column dataframe, labels in first-seen order.
    """

    table = rowsToDataframe(rows)
    if table.empty:
        return table
    order = list(dict.fromkeys(table['Algorithm']))
    grouped = table.groupby('Algorithm', sort=False)
    averaged = grouped.mean(numeric_only=True)
    averaged['ScanMax'] = grouped['ScanMax'].max()
    averaged['K_used'] = averaged['K_used'].round().astype(np.int64)
    averaged = averaged.loc[order].reset_index()
    return averaged[reportColumns]


def rowsByFailureSize(rows):
    """{f: rows of that failure size} in ascending f."""
    sizes = sorted({row.failures for row in rows})
    return {size: [row for row in rows if row.failures == size] for size in sizes}



###############################################################################
############################## Class ReportHandler ############################
###############################################################################

class ReportHandler:
    """
    GOAL: Converting "benchmark rows / dataframes" <-> "report files".

    VARIABLES: - directory: Output directory.
               - format: 'csv' or 'markdown'.

    METHODS:   - dataframeToFile: Save a dataframe with the selected format.
               - fileToDataframe: Load a CSV report.
               - emitReport: Per failure size tables plus the overall average.
               - emitChurnTable: Churn/Excess per algorithm and failure size.
               - emitConcentration: Conc(x) and MaxRecvShare per failure size.
               - emitScatter: Throughput vs Max/Avg points.
               - emitErrors: Rows that could not be computed.
               - readRows: Parse an emitted CSV report back into rows.
    """

    def __init__(self, directory='Results', format='csv'):
        if format not in reportFormats:
            print("The report format specified is not valid, only the following formats are supported:")
            for supported in reportFormats:
                print("".join(['- ', supported]))
            raise SystemError("Please check the report format specified.")
        self.directory = directory
        self.format = format


    def _path(self, name, format=None):
        extension = '.md' if (format or self.format) == 'markdown' else '.csv'
        return os.path.join(self.directory, name + extension)


    def dataframeToFile(self, name, dataframe, format=None):
        """
        GOAL: Saving a dataframe into a report file.

        INPUTS: - name: File name (without extension).
                - dataframe: Pandas dataframe to be saved.
                - format: Overrides the handler format.

        OUTPUTS: - path: Path of the written file.
        """

        os.makedirs(self.directory, exist_ok=True)
        format = format or self.format
        path = self._path(name, format)
        rounded = dataframe.round({column: digits for column, digits in precisions.items() if column in dataframe})
        if format == 'markdown':
            with open(path, 'w') as fileHandler:
                fileHandler.write(tabulate(rounded, headers=list(rounded.columns), tablefmt='github',
                                           showindex=False, floatfmt='g'))
                fileHandler.write('\n')
        else:
            rounded.to_csv(path, index=False)
        return path


    def fileToDataframe(self, path):
        """Loading a CSV report into a dataframe."""
        return pd.read_csv(path, header=0)


    def emitReport(self, rows, prefix='table'):
        """
        GOAL: Write one table per failure size and the overall average over
              every failure size and repeat (errored rows are skipped).

        INPUTS: - rows: ResultRow list.
                - prefix: File name prefix.

        OUTPUTS: - paths: Written files, overall last.
        """

        paths = []
        for size, sized in rowsByFailureSize(rows).items():
            paths.append(self.dataframeToFile(prefix + '_f' + str(size), averageRows(sized)))
        overall = averageRows(rows)
        if overall.empty:
            overall = pd.DataFrame(columns=reportColumns)
        paths.append(self.dataframeToFile(prefix + '_overall', overall))
        return paths


    def emitChurnTable(self, rows, name='churn_by_f'):
        """Churn% and Excess% per algorithm (rows) and failure size (columns)."""
        table = rowsToDataframe(rows)
        if table.empty:
            return self.dataframeToFile(name, pd.DataFrame(columns=['Algorithm']))
        table['F'] = [row.failures for row in rows if not row.failed]
        pivot = table.pivot_table(index='Algorithm', columns='F', values=['Churn(%)', 'Excess(%)'],
                                  aggfunc='mean', sort=False)
        pivot.columns = [metric + ' F=' + str(size) for metric, size in pivot.columns]
        return self.dataframeToFile(name, pivot.reset_index())


    def emitConcentration(self, rows, name='conc_by_f'):
        """Failover concentration per algorithm and failure size."""
        records = [{'Algorithm': row.label, 'F': row.failures, 'Conc(x)': row.concX,
                    'MaxRecvShare': row.maxRecvShare} for row in rows if not row.failed]
        table = pd.DataFrame(records, columns=['Algorithm', 'F', 'Conc(x)', 'MaxRecvShare'])
        if not table.empty:
            table = table.groupby(['Algorithm', 'F'], sort=False).mean().reset_index()
        return self.dataframeToFile(name, table, format='csv')


    def emitScatter(self, points, name='tradeoff'):
        """Figure-ready (label, family, knob, throughput, Max/Avg) points."""
        table = pd.DataFrame(points, columns=['label', 'family', 'knob', 'throughput', 'max_avg'])
        return self.dataframeToFile(name, table, format='csv')


    def emitErrors(self, rows, name='errors'):
        records = [{'Algorithm': row.label, 'F': row.failures, 'repeat': row.repeat, 'error': row.error}
                   for row in rows if row.failed]
        return self.dataframeToFile(name, pd.DataFrame(records, columns=['Algorithm', 'F', 'repeat', 'error']),
                                    format='csv')


    def readRows(self, path, failures=0):
        """Parse an emitted CSV report back into ResultRow objects."""
        table = self.fileToDataframe(path)
        return [ResultRow.fromRecord(record, failures) for record in table.to_dict('records')]

