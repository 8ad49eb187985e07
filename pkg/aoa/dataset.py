from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional

from aoa import Config, Configurable
from aoa.space.continuous import ContinuousProblem
from aoa.space.maze import Cell, MazeGrid


@dataclass
class Instance:
    """A problem instance: a maze with its start cell or a continuous problem.

    For maze instances, the entrance of ``maze`` is the start cell of the instance.

    """

    instance_id: str
    instance_class: str
    size: str
    maze: Optional[MazeGrid] = None
    problem: Optional[ContinuousProblem] = None
    start: Optional[Cell] = None
    file: str = ""
    #: seed the instance was generated with (-1 if unknown)
    seed: int = -1


class Dataset(Configurable):
    """The instances an experiment runs on.

    Instances come from a dataset folder written by ``aoa generate`` (filtered by
    ``dataset.classes``, ``dataset.sizes`` and ``dataset.max_instances``), from a
    single maze file, or, for continuous problems, from the ``continuous`` options.

    """

    def __init__(self, config: Config, instances: List[Instance], folder=None):
        """Constructor for internal use.

        To load a dataset, use `Dataset.create()`."""
        super().__init__(config, "dataset")

        #: directory in which the dataset is stored (if any)
        self.folder = folder
        self._instances = instances
        self._index: Dict[str, Instance] = {i.instance_id: i for i in instances}
        if len(self._index) != len(instances):
            raise ValueError("dataset contains duplicate instance ids")

    @staticmethod
    def create(config: Config, folder: Optional[str] = None) -> "Dataset":
        """Loads the instances selected by ``config``.

        Raises ``ValueError`` if no instance is selected and ``IOError`` if a
        referenced file does not exist.

        """
        problem_type = config.check("problem.type", ["maze", "continuous"])
        if problem_type == "continuous":
            return Dataset(config, [Dataset._continuous_instance(config)])

        if folder is None:
            folder = config.get("dataset.folder")
        filename = config.get("dataset.file")
        if filename:
            instances = Dataset._file_instances(config, filename)
            folder = os.path.dirname(filename)
        elif folder:
            instances = Dataset._folder_instances(config, folder)
        else:
            raise ValueError(
                "no instances: set dataset.folder (a generated dataset) or "
                "dataset.file (a single maze file)"
            )
        if not instances:
            raise ValueError(
                "no instances match dataset.classes={} and dataset.sizes={}".format(
                    config.get("dataset.classes"), config.get("dataset.sizes")
                )
            )
        dataset = Dataset(config, instances, folder)
        config.log(
            "Loaded {} instances in {} classes{}".format(
                len(dataset),
                len(dataset.classes()),
                f" from {folder}" if folder else "",
            )
        )
        return dataset

    @staticmethod
    def _continuous_instance(config: Config) -> Instance:
        problem = ContinuousProblem(
            objective=config.get("continuous.objective"),
            dimension=config.get("continuous.dimension"),
            lower=float(config.get("continuous.lower")),
            upper=float(config.get("continuous.upper")),
            epsilon=float(config.get("continuous.epsilon")),
        )
        return Instance(
            instance_id=problem.name,
            instance_class=problem.objective,
            size=f"{problem.dimension}d",
            problem=problem,
        )

    @staticmethod
    def _file_instances(config: Config, filename: str) -> List[Instance]:
        from aoa.util.maze_io import read_maze

        if not os.path.isfile(filename):
            raise IOError(f"maze file {filename} does not exist")
        maze = read_maze(filename)
        start = config.get("dataset.start")
        if start:
            if len(start) != 2:
                raise ValueError(f"dataset.start must be [row, col], got {start}")
            starts = [tuple(int(v) for v in start)]
        elif maze.starts:
            starts = list(maze.starts)
        else:
            starts = [maze.entrance]

        stem = os.path.splitext(os.path.basename(filename))[0]
        instances = []
        for j, cell in enumerate(starts, start=1):
            instances.append(
                Instance(
                    instance_id=stem if len(starts) == 1 else f"{stem}_s{j:02d}",
                    instance_class=maze.size_label,
                    size=maze.size_label,
                    maze=maze.with_entrance(cell),
                    start=cell,
                    file=filename,
                )
            )
        return instances

    @staticmethod
    def _folder_instances(config: Config, folder: str) -> List[Instance]:
        from aoa.util.maze_dataset import read_manifest
        from aoa.util.maze_io import read_maze

        manifest = read_manifest(folder)
        classes = config.get("dataset.classes")
        if classes:
            manifest = manifest[manifest["class"].isin([str(c) for c in classes])]
        sizes = config.get("dataset.sizes")
        if sizes:
            manifest = manifest[manifest["size"].isin([str(s) for s in sizes])]
        max_instances = config.get("dataset.max_instances")
        if max_instances >= 0:
            manifest = manifest.head(max_instances)

        mazes: Dict[str, MazeGrid] = {}
        instances = []
        for row in manifest.to_dict("records"):
            if row["file"] not in mazes:
                mazes[row["file"]] = read_maze(os.path.join(folder, row["file"]))
            start = (int(row["start_row"]), int(row["start_col"]))
            instances.append(
                Instance(
                    instance_id=row["instance_id"],
                    instance_class=row["class"],
                    size=row["size"],
                    maze=mazes[row["file"]].with_entrance(start),
                    start=start,
                    file=row["file"],
                    seed=int(row["seed"]),
                )
            )
        return instances

    def __len__(self) -> int:
        return len(self._instances)

    def instances(self) -> List[Instance]:
        return list(self._instances)

    def get(self, instance_id: str) -> Instance:
        try:
            return self._index[instance_id]
        except KeyError:
            raise KeyError(f"dataset has no instance {instance_id}")

    def classes(self) -> List[str]:
        "Instance classes in order of first occurrence."
        return list(dict.fromkeys(i.instance_class for i in self._instances))
