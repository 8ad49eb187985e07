import json
import math
import os
import tempfile
import unittest

import pandas as pd

from aoa.util.metric import Metric
from aoa.util.report import (
    REPORT_COLUMNS,
    RUN_COLUMNS,
    StatsReport,
    aggregate,
    merge_reports,
    read_report,
    write_report,
    write_table,
)

NAN = float("nan")


def run_row(instance_id, class_label, run, success, size, runtime, error=""):
    row = dict(
        instance_id=instance_id,
        algorithm="aoa",
        run=run,
        seed=run,
        success=success,
        solution_size=size,
        best_fitness=1.0 if success else 0.5,
        iterations_used=1,
        phase_reached="motion",
        position_updates=0,
        runtime_s=runtime,
        error=error,
    )
    row["class"] = class_label
    return row


def example_runs():
    return pd.DataFrame(
        [
            run_row("a", "conn0", 0, True, 10.0, 1.0),
            run_row("a", "conn0", 1, True, 20.0, 3.0),
            run_row("b", "conn0", 0, True, 30.0, 2.0),
            run_row("b", "conn0", 1, False, NAN, 2.0),
            run_row("c", "conn30", 0, True, 5.0, 0.5),
            run_row("c", "conn30", 1, True, 7.0, 0.5),
        ],
        columns=RUN_COLUMNS,
    )


class TestAggregate(unittest.TestCase):
    def test_class_rows(self):
        report = aggregate(example_runs())
        self.assertEqual(list(report.classes.columns), REPORT_COLUMNS)
        self.assertEqual(list(report.classes["class"]), ["conn0", "conn30", "ALL"])

        conn0 = report.row("conn0")
        self.assertEqual(conn0["success_rate_pct"], 75.0)
        self.assertTrue(math.isnan(conn0["mean_solution_size"]))
        self.assertEqual(conn0["mean_runtime_s"], 2.0)
        self.assertEqual((conn0["runs"], conn0["instances"]), (4, 2))

        conn30 = report.row("conn30")
        self.assertEqual(conn30["success_rate_pct"], 100.0)
        self.assertEqual(conn30["mean_solution_size"], 6.0)
        self.assertEqual(conn30["mean_runtime_s"], 0.5)

        self.assertAlmostEqual(report.success_rate(), 500.0 / 6.0)
        self.assertTrue(math.isnan(report.mean_solution_size()))
        self.assertEqual(report.summary()["mean_runtime_s"], 1.5)
        self.assertEqual(report.summary()["instances"], 3)
        self.assertEqual(report.summary()["algorithm"], "aoa")

    def test_partial_sizes(self):
        report = aggregate(example_runs(), size_requires_full_success=False)
        self.assertEqual(report.mean_solution_size("conn0"), 20.0)
        self.assertAlmostEqual(report.mean_solution_size(), 14.4)

    def test_instance_rows(self):
        instances = aggregate(example_runs()).instances
        self.assertEqual(list(instances["instance_id"]), ["a", "b", "c"])
        self.assertEqual(list(instances["success_rate_pct"]), [100.0, 50.0, 100.0])
        self.assertEqual(instances["mean_solution_size"].iloc[0], 15.0)

    def test_order_independent(self):
        runs = example_runs()
        shuffled = runs.sample(frac=1.0, random_state=3)
        pd.testing.assert_frame_equal(
            aggregate(runs).classes, aggregate(shuffled).classes
        )

    def test_errors_count_as_failures(self):
        runs = example_runs()
        runs.loc[4, ["success", "solution_size", "runtime_s", "error"]] = [
            False,
            NAN,
            NAN,
            "RuntimeError: boom",
        ]
        report = aggregate(runs)
        self.assertEqual(report.success_rate("conn30"), 50.0)
        self.assertEqual(report.row("conn30")["mean_runtime_s"], 0.5)

    def test_natural_class_order(self):
        runs = pd.DataFrame(
            [
                run_row("x", "conn100", 0, True, 1.0, 1.0),
                run_row("y", "conn30", 0, True, 1.0, 1.0),
                run_row("z", "conn0", 0, True, 1.0, 1.0),
            ],
            columns=RUN_COLUMNS,
        )
        self.assertEqual(
            list(aggregate(runs).classes["class"]),
            ["conn0", "conn30", "conn100", "ALL"],
        )

    def test_empty(self):
        report = aggregate(pd.DataFrame(columns=RUN_COLUMNS))
        self.assertEqual(len(report.classes), 0)
        self.assertEqual(list(report.classes.columns), REPORT_COLUMNS)
        with self.assertRaises(KeyError):
            report.summary()


class TestReportFiles(unittest.TestCase):
    def setUp(self):
        self.folder = tempfile.TemporaryDirectory()
        self.report = aggregate(example_runs())

    def tearDown(self):
        self.folder.cleanup()

    def path(self, name):
        return os.path.join(self.folder.name, name)

    def test_csv(self):
        write_report(self.report, self.path("report.csv"))
        with open(self.path("report.csv")) as file:
            lines = file.read().splitlines()
        self.assertEqual(lines[0], ",".join(REPORT_COLUMNS))
        self.assertEqual(lines[1], "conn0,aoa,75.0,,2.0000,4,2")
        self.assertEqual(lines[2], "conn30,aoa,100.0,6.00,0.5000,2,1")
        self.assertEqual(lines[3].split(",")[:3], ["ALL", "aoa", "83.3"])

        read = read_report(self.path("report.csv"))
        self.assertEqual(read.success_rate("conn0"), 75.0)
        self.assertTrue(math.isnan(read.mean_solution_size("conn0")))
        self.assertEqual(read.mean_solution_size("conn30"), 6.0)
        self.assertEqual(read.summary()["runs"], 6)

    def test_json(self):
        write_report(self.report, self.path("report.json"))
        with open(self.path("report.json")) as file:
            records = json.load(file)
        self.assertEqual([r["class"] for r in records], ["conn0", "conn30", "ALL"])
        self.assertIsNone(records[0]["mean_solution_size"])
        self.assertEqual(records[2]["success_rate_pct"], 83.3)
        self.assertEqual(records[2]["runs"], 6)

        read = read_report(self.path("report.json"))
        self.assertEqual(list(read.classes.columns), REPORT_COLUMNS)
        self.assertEqual(read.success_rate("conn30"), 100.0)
        self.assertTrue(math.isnan(read.mean_solution_size()))

    def test_empty_report(self):
        write_report(StatsReport.empty(), self.path("empty.csv"))
        with open(self.path("empty.csv")) as file:
            self.assertEqual(file.read(), ",".join(REPORT_COLUMNS) + "\n")
        write_report(StatsReport.empty(), self.path("empty.json"))
        with open(self.path("empty.json")) as file:
            self.assertEqual(file.read(), "[]\n")

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            write_table(self.report.classes, self.path("report.xml"))
        with self.assertRaises(IOError):
            read_report(self.path("missing.csv"))

    def test_merge(self):
        merged = merge_reports([self.report, self.report])
        self.assertEqual(len(merged.classes), 6)
        self.assertEqual(len(merge_reports([]).classes), 0)


class TestMetric(unittest.TestCase):
    def test_rank(self):
        rows = pd.DataFrame(
            [
                ("c1", 50.0, NAN, 1.0),
                ("c2", 100.0, 12.0, 1.0),
                ("c3", 100.0, 10.0, 2.0),
                ("c4", 100.0, 10.0, 1.0),
                ("c5", 100.0, NAN, 0.1),
            ],
            columns=["cell"] + REPORT_COLUMNS[2:5],
        )
        ranked = Metric().rank(rows)
        self.assertEqual(list(ranked["cell"]), ["c4", "c3", "c2", "c5", "c1"])
        self.assertEqual(list(ranked["rank"]), [1, 2, 3, 4, 5])
        self.assertEqual(list(ranked.columns)[0], "rank")

    def test_ties_keep_order(self):
        row = dict(success_rate_pct=100.0, mean_solution_size=5.0, mean_runtime_s=1.0)
        rows = pd.DataFrame([dict(cell="a", **row), dict(cell="b", **row)])
        self.assertEqual(list(Metric().rank(rows)["cell"]), ["a", "b"])

    def test_better(self):
        metric = Metric()
        good = dict(success_rate_pct=90.0, mean_solution_size=NAN, mean_runtime_s=1.0)
        bad = dict(success_rate_pct=80.0, mean_solution_size=3.0, mean_runtime_s=0.1)
        self.assertTrue(metric.better(good, bad))
        self.assertFalse(metric.better(bad, good))
        self.assertIs(metric.best([bad, good]), good)
