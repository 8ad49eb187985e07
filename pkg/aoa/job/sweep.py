import itertools
import os
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
import yaml

from aoa import Config, Dataset
from aoa.job import Job
from aoa.misc import filename_in_module
from aoa.util.metric import Metric
from aoa.util.report import REPORT_COLUMNS, StatsReport, format_table, write_table

#: options that change the instances of a bench
_DATASET_KEYS = ("problem.", "dataset.", "maze.", "continuous.")


class Grid:
    """A parameter grid.

    ``parameters`` maps configuration keys to lists of values. A key of the form
    ``a,b`` varies the options ``a`` and ``b`` jointly; each of its values is a list
    with one entry per option. The cells of the grid are the Cartesian product of the
    value lists, in the order of the keys (the last key varies fastest).

    """

    def __init__(self, parameters: Dict[str, List[Any]], cell_prefix: str = "cell"):
        self.parameters = parameters
        self.cell_prefix = cell_prefix
        for key, values in parameters.items():
            if not isinstance(values, list) or not values:
                raise ValueError(f"grid values of {key} must be a non-empty list")
            tied = self.split_key(key)
            if len(tied) > 1:
                for value in values:
                    if not isinstance(value, list) or len(value) != len(tied):
                        raise ValueError(
                            f"every value of {key} must be a list of {len(tied)} "
                            f"values, got {value}"
                        )

    @staticmethod
    def split_key(key: str) -> List[str]:
        return [k.strip() for k in key.split(",")]

    @staticmethod
    def load(name_or_file: str, default_prefix: str = "cell") -> "Grid":
        """Loads a grid file; a name without extension refers to a preset grid."""
        filename = name_or_file
        if not os.path.isfile(filename) and not os.path.splitext(filename)[1]:
            import aoa.grids

            try:
                filename = filename_in_module(aoa.grids, f"{name_or_file}.yaml")
            except FileNotFoundError:
                raise IOError(f"{name_or_file} is neither a grid file nor a preset")
        if not os.path.isfile(filename):
            raise IOError(f"grid file {name_or_file} does not exist")
        with open(filename, "r") as file:
            options = yaml.load(file, Loader=yaml.SafeLoader) or {}
        unknown = set(options) - {"parameters", "cell_prefix"}
        if unknown:
            raise ValueError(f"unknown entries {sorted(unknown)} in grid {filename}")
        return Grid(
            options.get("parameters") or {},
            options.get("cell_prefix", default_prefix),
        )

    def cells(self) -> List[Tuple[str, Dict[str, Any]]]:
        """Returns (name, settings) pairs, one per cell; names are numbered from 1.

        An empty grid has a single cell without settings.

        """
        keys = list(self.parameters.keys())
        result = []
        for i, values in enumerate(
            itertools.product(*[self.parameters[k] for k in keys]), start=1
        ):
            settings = {}
            for key, value in zip(keys, values):
                tied = self.split_key(key)
                if len(tied) == 1:
                    settings[key] = value
                else:
                    settings.update(zip(tied, value))
            result.append((f"{self.cell_prefix}{i}", settings))
        return result

    def changes_instances(self) -> bool:
        return any(
            k.startswith(_DATASET_KEYS)
            for key in self.parameters
            for k in self.split_key(key)
        )


class SweepJob(Job):
    """Runs a bench for every cell of a parameter grid and ranks the cells.

    Cells are ranked by the success rate over all instances; ties are broken in favor
    of the smaller mean solution size and then of the smaller mean run time. Each cell
    runs in its own subfolder named after the cell.

    """

    def __init__(
        self, config: Config, dataset: Optional[Dataset] = None, parent_job: Job = None
    ):
        super().__init__(config, dataset, parent_job)
        grid_name = self.config.get("sweep.grid")
        if grid_name:
            self.grid = Grid.load(grid_name, self.config.get("sweep.cell_prefix"))
        else:
            self.grid = Grid({}, self.config.get("sweep.cell_prefix"))

        # create all cell configurations upfront so that invalid keys or values are
        # reported before any run starts
        self.cells: List[Tuple[str, Dict[str, Any], Config]] = [
            (name, settings, self._cell_config(name, settings))
            for name, settings in self.grid.cells()
        ]

        if self.__class__ == SweepJob:
            for f in Job.job_created_hooks:
                f(self)

    def _cell_config(self, name: str, settings: Dict[str, Any]) -> Config:
        if self.config.folder is None:
            config = self.config.clone()
        else:
            config = self.config.clone(name)
        config.set("job.type", "bench")
        for key, value in settings.items():
            config.set(key, value)
        return config

    def _run(self) -> Dict[str, StatsReport]:
        self.config.log(
            "Sweeping {} cells of grid '{}'...".format(
                len(self.cells), self.config.get("sweep.grid")
            )
        )
        if not self.config.get("sweep.run"):
            for name, _, config in self.cells:
                if config.folder is not None:
                    config.init_folder()
            self.config.log("Created cell configurations; not running them.")
            return {}

        dataset = self.dataset
        if dataset is None and not self.grid.changes_instances():
            dataset = Dataset.create(self.config)

        reports: Dict[str, StatsReport] = {}
        rows = []
        for name, settings, config in self.cells:
            self.config.log(
                "Running cell {}: {}".format(
                    name, ", ".join(f"{k}={v}" for k, v in settings.items())
                )
            )
            if config.folder is not None:
                config.init_folder()
            job = Job.create(config, dataset, parent_job=self)
            report = job.run()
            reports[name] = report
            summary = report.summary()
            row = {"cell": name}
            row.update(settings)
            row.update({c: summary[c] for c in REPORT_COLUMNS if c != "class"})
            rows.append(row)
            self.trace(event="cell_completed", cell=name, settings=settings)

        summary_table = Metric().rank(pd.DataFrame(rows))
        if self.config.folder is not None:
            write_table(summary_table, os.path.join(self.config.folder, "summary.csv"))
        self.config.log("Ranking of the cells (best first):")
        for line in format_table(summary_table).to_string(index=False).splitlines():
            self.config.log(line, prefix="  ")
        best = summary_table.iloc[0].to_dict()
        self.trace(
            event="sweep_completed",
            grid=self.config.get("sweep.grid"),
            cells=len(self.cells),
            best_cell=best["cell"],
            ranking=list(summary_table["cell"]),
        )
        return reports
