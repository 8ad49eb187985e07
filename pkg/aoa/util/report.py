"""Aggregated experiment statistics.

A report has one row per instance class plus an ``ALL`` row over all runs. For every
row it gives the success rate (percentage of runs that reached the optimum), the mean
solution size over successful runs and the mean run time in seconds.

"""
import os
import re
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

ALL_CLASSES = "ALL"
REPORT_COLUMNS = [
    "class",
    "algorithm",
    "success_rate_pct",
    "mean_solution_size",
    "mean_runtime_s",
    "runs",
    "instances",
]
INSTANCE_COLUMNS = [
    "instance_id",
    "class",
    "algorithm",
    "success_rate_pct",
    "mean_solution_size",
    "mean_runtime_s",
    "runs",
]
RUN_COLUMNS = [
    "instance_id",
    "class",
    "algorithm",
    "run",
    "seed",
    "success",
    "solution_size",
    "best_fitness",
    "iterations_used",
    "phase_reached",
    "position_updates",
    "runtime_s",
    "error",
]
FORMATS = ["csv", "json"]

#: number of decimals of the reported statistics
PRECISION = {"success_rate_pct": 1, "mean_solution_size": 2, "mean_runtime_s": 4}


@dataclass
class StatsReport:
    """Statistics of one experiment.

    ``classes`` holds the class rows (columns :data:`REPORT_COLUMNS`, ``ALL`` last),
    ``instances`` the per-instance rows if they are known.

    """

    classes: pd.DataFrame
    instances: Optional[pd.DataFrame] = None

    @staticmethod
    def empty() -> "StatsReport":
        return StatsReport(pd.DataFrame(columns=REPORT_COLUMNS))

    def row(self, class_label: str = ALL_CLASSES, algorithm: str = None) -> dict:
        rows = self.classes[self.classes["class"] == class_label]
        if algorithm is not None:
            rows = rows[rows["algorithm"] == algorithm]
        if len(rows) != 1:
            raise KeyError(
                f"report has {len(rows)} rows for class {class_label}"
                + (f" and algorithm {algorithm}" if algorithm else "")
            )
        return rows.iloc[0].to_dict()

    def success_rate(self, class_label: str = ALL_CLASSES) -> float:
        return float(self.row(class_label)["success_rate_pct"])

    def mean_solution_size(self, class_label: str = ALL_CLASSES) -> float:
        return float(self.row(class_label)["mean_solution_size"])

    def summary(self) -> dict:
        "The ``ALL`` row."
        return self.row(ALL_CLASSES)


def _natural_key(label: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(label))]


def _statistics(runs: pd.DataFrame, size_requires_full_success: bool) -> dict:
    count = len(runs)
    success = runs["success"].astype(bool)
    success_rate = 100.0 * success.sum() / count if count else float("nan")
    sizes = runs.loc[success, "solution_size"].astype(float)
    if len(sizes) == 0 or (size_requires_full_success and success_rate < 100.0):
        solution_size = float("nan")
    else:
        solution_size = float(sizes.mean())
    runtimes = runs["runtime_s"].astype(float)
    return {
        "success_rate_pct": float(success_rate),
        "mean_solution_size": solution_size,
        "mean_runtime_s": float(runtimes.mean()) if runtimes.notna().any() else np.nan,
        "runs": count,
    }


def aggregate(
    runs: pd.DataFrame, algorithm: str = None, size_requires_full_success=True
) -> StatsReport:
    """Aggregates per-run rows (columns :data:`RUN_COLUMNS`) into a report.

    Runs that failed with an error count as unsuccessful. The result does not depend
    on the order of ``runs``. If ``size_requires_full_success`` is set, the mean
    solution size of a row is only reported when its success rate is 100%.

    """
    if algorithm is None:
        algorithm = str(runs["algorithm"].iloc[0]) if len(runs) else ""
    if len(runs) == 0:
        return StatsReport(
            pd.DataFrame(columns=REPORT_COLUMNS),
            pd.DataFrame(columns=INSTANCE_COLUMNS),
        )
    runs = runs.sort_values(["instance_id", "run"], kind="mergesort")
    runs = runs.reset_index(drop=True)

    instance_rows = []
    for instance_id, group in runs.groupby("instance_id", sort=True):
        row = dict(instance_id=instance_id, algorithm=algorithm)
        row["class"] = group["class"].iloc[0]
        row.update(_statistics(group, size_requires_full_success))
        instance_rows.append(row)

    class_rows = []
    labels = sorted(runs["class"].unique(), key=_natural_key)
    for label in labels + [ALL_CLASSES]:
        group = runs if label == ALL_CLASSES else runs[runs["class"] == label]
        row = {"class": label, "algorithm": algorithm}
        row.update(_statistics(group, size_requires_full_success))
        row["instances"] = group["instance_id"].nunique()
        class_rows.append(row)

    return StatsReport(
        pd.DataFrame(class_rows, columns=REPORT_COLUMNS),
        pd.DataFrame(instance_rows, columns=INSTANCE_COLUMNS),
    )


def format_table(df: pd.DataFrame) -> pd.DataFrame:
    "Formats the statistics columns as strings with their fixed precision."
    df = df.copy()
    for column, digits in PRECISION.items():
        if column in df.columns:
            df[column] = [
                "" if pd.isna(v) else "{:.{}f}".format(float(v), digits)
                for v in df[column]
            ]
    return df


def _rounded(df: pd.DataFrame) -> pd.DataFrame:
    df = df.copy()
    for column, digits in PRECISION.items():
        if column in df.columns:
            df[column] = df[column].astype(float).round(digits)
    return df


def write_table(df: pd.DataFrame, filename: str, format: str = None):
    """Writes a report table as CSV or as a JSON list of records.

    The format is derived from the file extension unless given. Missing values are
    written as empty CSV fields and as JSON ``null``.

    """
    if format is None:
        format = os.path.splitext(filename)[1].lstrip(".").lower()
    if format not in FORMATS:
        raise ValueError(f"unknown report format {format}; use one of {FORMATS}")
    try:
        if format == "csv":
            format_table(df).to_csv(filename, index=False)
        else:
            with open(filename, "w") as file:
                if len(df) == 0:
                    file.write("[]\n")
                else:
                    file.write(_rounded(df).to_json(orient="records", indent=2))
                    file.write("\n")
    except OSError as e:
        raise IOError(f"cannot write report {filename}: {e}") from e


def write_report(report: StatsReport, filename: str, format: str = None):
    write_table(report.classes, filename, format)


def read_table(filename: str, columns: List[str] = None) -> pd.DataFrame:
    format = os.path.splitext(filename)[1].lstrip(".").lower()
    if format not in FORMATS:
        raise ValueError(f"unknown report format of {filename}; use one of {FORMATS}")
    if not os.path.isfile(filename):
        raise IOError(f"report {filename} does not exist")
    if format == "csv":
        df = pd.read_csv(filename, dtype={"class": str, "algorithm": str})
    else:
        df = pd.read_json(filename, orient="records", dtype=False)
    if columns is not None:
        df = df.reindex(columns=columns)
    return df


def read_report(filename: str) -> StatsReport:
    df = read_table(filename, REPORT_COLUMNS)
    for column in ["runs", "instances"]:
        df[column] = df[column].astype("int64") if len(df) else df[column]
    for column in PRECISION:
        df[column] = df[column].astype(float)
    return StatsReport(df)


def read_runs(filename: str) -> pd.DataFrame:
    """Reads per-run rows from a ``runs.csv`` file or the ``run_completed`` records
    of a trace file."""
    if filename.endswith(".yaml"):
        from aoa.job.trace import Trace

        runs = Trace(filename).to_dataframe({"event": "run_completed"})
    else:
        try:
            runs = pd.read_csv(filename, dtype={"class": str, "instance_id": str})
        except OSError as e:
            raise IOError(f"cannot read runs from {filename}: {e}") from e
    missing = [c for c in ["instance_id", "class", "run", "success"] if c not in runs]
    if missing:
        raise ValueError(f"{filename} contains no run rows with columns {missing}")
    return runs.reindex(columns=RUN_COLUMNS)


def load_report(source: str, size_requires_full_success=True) -> StatsReport:
    """Loads a report from a report file, a ``runs.csv``/trace file or an experiment
    folder (which must contain ``report.csv``, ``report.json`` or ``runs.csv``)."""
    if os.path.isdir(source):
        for name in ["report.csv", "report.json", "runs.csv", "trace.yaml"]:
            if os.path.isfile(os.path.join(source, name)):
                return load_report(
                    os.path.join(source, name), size_requires_full_success
                )
        raise IOError(f"folder {source} contains no report, runs or trace file")
    name = os.path.basename(source)
    if name.startswith("runs") or name.endswith(".yaml"):
        return aggregate(
            read_runs(source), size_requires_full_success=size_requires_full_success
        )
    return read_report(source)


def merge_reports(reports: List[StatsReport]) -> StatsReport:
    "Stacks the class rows of several reports (for comparison tables)."
    if not reports:
        return StatsReport.empty()
    return StatsReport(
        pd.concat([r.classes for r in reports], ignore_index=True)[REPORT_COLUMNS]
    )


def add_report_parser(subparsers):
    parser = subparsers.add_parser(
        "report",
        help="Convert reports between csv and json, rebuild them from runs or traces "
        "and merge several reports into a comparison table",
    )
    parser.add_argument(
        "sources",
        type=str,
        nargs="+",
        help="Report files (csv/json), runs.csv or trace.yaml files, or experiment "
        "folders",
    )
    parser.add_argument(
        "--output",
        "-o",
        type=str,
        default=None,
        help="Output file; its extension selects the format (default: print csv)",
    )
    parser.add_argument(
        "--keep-partial-sizes",
        action="store_true",
        help="When rebuilding from runs, report mean solution sizes even when the "
        "success rate is below 100%%",
    )


def report(args):
    """Executes the 'report' command."""
    reports = [
        load_report(source, not args.keep_partial_sizes) for source in args.sources
    ]
    merged = merge_reports(reports)
    if args.output is None:
        print(format_table(merged.classes).to_csv(index=False), end="")
    else:
        write_report(merged, args.output)
        print(f"Wrote {len(merged.classes)} rows to {args.output}.")
