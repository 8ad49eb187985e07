"""Building maze datasets.

A dataset folder contains one subfolder per size and class,
``<size>/<class>/maze_<k>.maze``, a tab-separated ``manifest.del`` with one row per
(maze, start) instance, and a ``dataset.yaml`` describing how it was generated.

"""
from __future__ import annotations

import argparse
import concurrent.futures
import multiprocessing
import os
from dataclasses import asdict, dataclass, field
from typing import List, Tuple

import numpy as np
import pandas as pd
import yaml

from aoa.space.maze import MazeGrid
from aoa.util.maze_generator import choose_starts, generate_maze
from aoa.util.maze_io import write_maze
from aoa.util.seed import derive_seed

MANIFEST_FILE = "manifest.del"
METADATA_FILE = "dataset.yaml"
MANIFEST_COLUMNS = [
    "instance_id",
    "file",
    "class",
    "size",
    "start_row",
    "start_col",
    "seed",
]


def class_label(connectivity_percent: int) -> str:
    return f"conn{connectivity_percent}"


def size_label(size: int) -> str:
    return f"{size}x{size}"


@dataclass
class DatasetSpec:
    """What to generate: every size gets ``mazes_per_class`` mazes per class, each with
    ``starts_per_maze`` start cells."""

    classes: List[int] = field(default_factory=lambda: [0, 30, 60, 100])
    mazes_per_class: int = 10
    starts_per_maze: int = 12
    sizes: List[int] = field(default_factory=lambda: [15])
    density: float = 0.25
    seed: int = 0

    def __post_init__(self):
        for c in self.classes:
            if not 0 <= c <= 100:
                raise ValueError(f"connectivity class must be in [0, 100], got {c}")
        if len(set(self.classes)) != len(self.classes):
            raise ValueError(f"duplicate connectivity classes {self.classes}")
        if self.mazes_per_class < 1:
            raise ValueError(
                f"mazes_per_class must be positive, got {self.mazes_per_class}"
            )
        if self.starts_per_maze < 1:
            raise ValueError(
                f"starts_per_maze must be positive, got {self.starts_per_maze}"
            )
        for s in self.sizes:
            if s < 2:
                raise ValueError(f"maze size must be at least 2, got {s}")

    @property
    def instances_per_class(self) -> int:
        return self.mazes_per_class * self.starts_per_maze

    @property
    def num_instances(self) -> int:
        return len(self.sizes) * len(self.classes) * self.instances_per_class


def _generate_one(task: Tuple[int, int, int, float, int]) -> MazeGrid:
    size, connectivity, starts, density, seed = task
    maze = generate_maze(size, size, connectivity, density, seed=seed)
    rng = np.random.default_rng(derive_seed(seed, "starts"))
    return MazeGrid(
        maze.width,
        maze.height,
        maze.obstacles,
        maze.entrance,
        maze.exit,
        starts=choose_starts(maze, starts, rng),
    )


def build_dataset(spec: DatasetSpec, folder: str, num_workers: int = 1) -> pd.DataFrame:
    """Generates all mazes of ``spec`` into ``folder`` and returns the manifest.

    The output only depends on the spec, so the same spec gives byte-identical folders.

    """
    tasks = []
    for size in spec.sizes:
        for connectivity in spec.classes:
            for k in range(1, spec.mazes_per_class + 1):
                seed = derive_seed(spec.seed, size, connectivity, k)
                tasks.append((size, connectivity, k, seed))
    generate_args = [
        (size, connectivity, spec.starts_per_maze, spec.density, seed)
        for size, connectivity, _, seed in tasks
    ]
    if num_workers > 1:
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=num_workers, mp_context=multiprocessing.get_context("spawn")
        ) as pool:
            mazes = list(pool.map(_generate_one, generate_args))
    else:
        mazes = [_generate_one(args) for args in generate_args]

    rows = []
    for (size, connectivity, k, seed), maze in zip(tasks, mazes):
        relative = os.path.join(
            size_label(size), class_label(connectivity), f"maze_{k:02d}.maze"
        )
        filename = os.path.join(folder, relative)
        try:
            os.makedirs(os.path.dirname(filename), exist_ok=True)
        except OSError as e:
            raise IOError(f"cannot create folder {os.path.dirname(filename)}: {e}")
        write_maze(maze, filename)
        for j, (row, col) in enumerate(maze.starts, start=1):
            rows.append(
                {
                    "instance_id": "{}_{}_m{:02d}_s{:02d}".format(
                        size_label(size), class_label(connectivity), k, j
                    ),
                    "file": relative,
                    "class": class_label(connectivity),
                    "size": size_label(size),
                    "start_row": row,
                    "start_col": col,
                    "seed": seed,
                }
            )

    manifest = pd.DataFrame(rows, columns=MANIFEST_COLUMNS)
    manifest_file = os.path.join(folder, MANIFEST_FILE)
    try:
        manifest.to_csv(manifest_file, sep="\t", index=False)
        with open(os.path.join(folder, METADATA_FILE), "w") as file:
            metadata = asdict(spec)
            metadata["num_instances"] = len(manifest)
            file.write(yaml.dump(dict(dataset=metadata), default_flow_style=None))
    except OSError as e:
        raise IOError(f"cannot write dataset files to {folder}: {e}")
    return manifest


def read_manifest(folder: str) -> pd.DataFrame:
    filename = os.path.join(folder, MANIFEST_FILE)
    if not os.path.isfile(filename):
        raise IOError(f"dataset folder {folder} has no {MANIFEST_FILE}")
    return pd.read_csv(
        filename,
        sep="\t",
        dtype={
            "instance_id": str,
            "file": str,
            "class": str,
            "size": str,
            "start_row": int,
            "start_col": int,
            "seed": np.int64,
        },
    )


def _int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {value}")


def add_generate_parser(subparsers):
    parser = subparsers.add_parser(
        "generate", help="Generate a maze dataset (mazes, starts and a manifest)"
    )
    defaults = DatasetSpec()
    parser.add_argument(
        "--folder", "-f", type=str, required=True, help="Output folder of the dataset"
    )
    parser.add_argument(
        "--classes",
        type=_int_list,
        default=defaults.classes,
        help="Comma-separated connectivity percentages (default: 0,30,60,100)",
    )
    parser.add_argument(
        "--mazes-per-class", type=int, default=defaults.mazes_per_class
    )
    parser.add_argument(
        "--starts-per-maze", type=int, default=defaults.starts_per_maze
    )
    parser.add_argument(
        "--sizes",
        type=_int_list,
        default=defaults.sizes,
        help="Comma-separated side lengths of the square mazes (default: 15)",
    )
    parser.add_argument(
        "--density",
        type=float,
        default=defaults.density,
        help="Fraction of cells that are obstacles",
    )
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument(
        "--num-workers", type=int, default=1, help="Number of worker processes"
    )
    parser.add_argument(
        "--overwrite",
        action="store_true",
        help="Write into the folder even if it exists already",
    )


def generate(args):
    """Executes the 'generate' command."""
    spec = DatasetSpec(
        classes=args.classes,
        mazes_per_class=args.mazes_per_class,
        starts_per_maze=args.starts_per_maze,
        sizes=args.sizes,
        density=args.density,
        seed=args.seed,
    )
    if os.path.exists(os.path.join(args.folder, MANIFEST_FILE)) and not args.overwrite:
        raise ValueError(
            f"{args.folder} already contains a dataset; use --overwrite to replace it"
        )
    print(
        "Generating {} instances into {}...".format(spec.num_instances, args.folder)
    )
    manifest = build_dataset(spec, args.folder, num_workers=args.num_workers)
    print(
        "Wrote {} mazes and {} instances.".format(
            manifest["file"].nunique(), len(manifest)
        )
    )
