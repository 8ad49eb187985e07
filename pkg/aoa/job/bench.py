import concurrent.futures
import math
import multiprocessing
import os
import time
from typing import Any, Dict, List, Tuple

import pandas as pd

from aoa import Config, Dataset
from aoa.dataset import Instance
from aoa.job import Job
from aoa.util.report import (
    RUN_COLUMNS,
    StatsReport,
    aggregate,
    format_table,
    write_report,
    write_table,
)
from aoa.util.seed import get_master_seed, run_seed


class BenchJob(Job):
    """The repeated-runs statistics protocol.

    Performs ``bench.runs`` seeded runs of the configured algorithm on every instance
    of the dataset and aggregates them into a :class:`StatsReport`. The seed of a run
    only depends on the master seed, the instance id and the run index, so any run can
    be repeated in isolation and the report does not depend on ``bench.num_workers``.

    """

    def __init__(self, config: Config, dataset: Dataset, parent_job: Job = None):
        super().__init__(config, dataset, parent_job)
        self.runs = self.config.get("bench.runs")
        if self.runs < 1:
            raise ValueError(f"bench.runs must be positive, got {self.runs}")
        self.num_workers = max(1, self.config.get("bench.num_workers"))
        self.on_error = self.config.check("bench.on_error", ["abort", "continue"])
        self.formats = self.config.get("bench.report.formats")
        for format in self.formats:
            self.config._check("bench.report.formats", format, ["csv", "json"])

        #: hooks run after every completed instance
        #: signature: job, instance, per-run rows of the instance
        self.post_instance_hooks = []

        if self.__class__ == BenchJob:
            for f in Job.job_created_hooks:
                f(self)

    def _run(self) -> StatsReport:
        master_seed = get_master_seed(self.config)
        instances = self.dataset.instances()
        self.config.log(
            "Running {} with {} runs on each of {} instances (master seed {})".format(
                self.config.get("algorithm"), self.runs, len(instances), master_seed
            )
        )
        start_time = time.time()
        tasks = [
            (
                self.config,
                instance,
                [
                    (r, run_seed(master_seed, instance.instance_id, r))
                    for r in range(self.runs)
                ],
                self.on_error,
            )
            for instance in instances
        ]

        rows: List[Dict[str, Any]] = []
        if self.num_workers == 1:
            for task in tasks:
                rows.extend(self._instance_done(task[1], _run_instance(task)))
        else:
            with concurrent.futures.ProcessPoolExecutor(
                max_workers=self.num_workers,
                mp_context=multiprocessing.get_context("spawn"),
            ) as pool:
                futures = {pool.submit(_run_instance, task): task[1] for task in tasks}
                for future in concurrent.futures.as_completed(futures):
                    rows.extend(self._instance_done(futures[future], future.result()))

        runs = pd.DataFrame(rows, columns=RUN_COLUMNS)
        runs = runs.sort_values(["instance_id", "run"], kind="mergesort")
        runs = runs.reset_index(drop=True)
        report = aggregate(
            runs,
            algorithm=self.config.get("algorithm"),
            size_requires_full_success=self.config.get(
                "bench.report.size_requires_full_success"
            ),
        )
        self._write(report, runs)

        summary = report.summary()
        errors = int((runs["error"] != "").sum())
        self.config.log(
            "Done after {:.1f}s: success rate {:.1f}%, mean solution size {}, "
            "{} failed runs".format(
                time.time() - start_time,
                summary["success_rate_pct"],
                "-"
                if math.isnan(summary["mean_solution_size"])
                else "{:.2f}".format(summary["mean_solution_size"]),
                errors,
            )
        )
        self.config.print(format_table(report.classes).to_string(index=False))
        self.trace(
            event="bench_completed",
            algorithm=self.config.get("algorithm"),
            master_seed=master_seed,
            instances=len(instances),
            runs=len(runs),
            errors=errors,
            classes=format_table(report.classes).to_dict("records"),
        )
        return report

    def _instance_done(
        self, instance: Instance, rows: List[Dict[str, Any]]
    ) -> List[Dict[str, Any]]:
        for row in rows:
            if row["error"]:
                self.config.log(
                    "Warning: run {} on {} failed: {}".format(
                        row["run"], instance.instance_id, row["error"]
                    )
                )
            self.trace(event="run_completed", **row)
        successes = sum(1 for row in rows if row["success"])
        self.config.log(
            "{}: {}/{} runs successful".format(
                instance.instance_id, successes, len(rows)
            ),
            echo=False,
        )
        for f in self.post_instance_hooks:
            f(self, instance, rows)
        return rows

    def _write(self, report: StatsReport, runs: pd.DataFrame):
        folder = self.config.folder
        if folder is None:
            return
        for format in self.formats:
            write_report(report, os.path.join(folder, f"report.{format}"))
        if self.config.get("bench.report.runs"):
            write_table(runs, os.path.join(folder, "runs.csv"))
        if self.config.get("bench.report.instances") and report.instances is not None:
            write_table(report.instances, os.path.join(folder, "instances.csv"))


def _run_instance(
    task: Tuple[Config, Instance, List[Tuple[int, int]], str]
) -> List[Dict[str, Any]]:
    """Performs the given (run, seed) pairs on an instance and returns one row per run.

    With ``on_error`` set to "continue", a failing run yields a row with its error
    message, and every run fails when the search space or optimizer cannot be set
    up; otherwise, the error is raised.

    """
    from aoa.algorithm.optimizer import Optimizer
    from aoa.space.search_space import SearchSpace

    config, instance, runs, on_error = task
    setup_error = None
    try:
        space = SearchSpace.create(config, instance)
        optimizer = Optimizer.create(config, space)
    except Exception as e:
        if on_error == "abort":
            raise
        setup_error = e

    rows = []
    for run, seed in runs:
        row = dict(
            instance_id=instance.instance_id,
            run=run,
            seed=seed,
            algorithm=config.get("algorithm"),
            error="",
        )
        row["class"] = instance.instance_class
        try:
            if setup_error is not None:
                raise setup_error
            result = optimizer.run(seed)
        except Exception as e:
            if on_error == "abort":
                raise
            row.update(
                success=False,
                solution_size=float("nan"),
                best_fitness=float("nan"),
                iterations_used=0,
                phase_reached="",
                position_updates=0,
                runtime_s=float("nan"),
                error=f"{type(e).__name__}: {e}",
            )
        else:
            result_row = result.to_dict(space)
            row.update({k: result_row[k] for k in RUN_COLUMNS if k in result_row})
        rows.append(row)
    return rows
