from __future__ import annotations

import math
from typing import List, Optional, Set

import numpy as np

from aoa.space.maze import MOVES, Cell, MazeGrid, manhattan


class MazeGenerationError(RuntimeError):
    "The requested obstacle layout could not be produced."


def _grid_neighbors(cell: Cell, width: int, height: int) -> List[Cell]:
    result = []
    for m in MOVES:
        n = m.apply(cell)
        if 0 <= n[0] < height and 0 <= n[1] < width:
            result.append(n)
    return result


def _place_obstacles(
    width: int,
    height: int,
    linked: int,
    isolated: int,
    protected: Set[Cell],
    rng: np.random.Generator,
) -> Optional[Set[Cell]]:
    """One attempt to place ``linked`` clustered and ``isolated`` lone obstacles.

    Clustered obstacles are grown as clusters of at least two cells; lone obstacles
    are placed where no obstacle is orthogonally adjacent. Returns None when an
    attempt gets stuck.

    """
    obstacles: Set[Cell] = set()

    def free(cell):
        return cell not in obstacles and cell not in protected

    remaining = linked
    while remaining > 0:
        size = min(remaining, int(rng.integers(2, 6)))
        if remaining - size == 1:
            size += 1
        candidates = [
            (r, c)
            for r in range(height)
            for c in range(width)
            if free((r, c))
            and any(free(n) for n in _grid_neighbors((r, c), width, height))
        ]
        if not candidates:
            return None
        cluster = [candidates[rng.integers(len(candidates))]]
        obstacles.add(cluster[0])
        while len(cluster) < size:
            frontier = sorted(
                {
                    n
                    for cell in cluster
                    for n in _grid_neighbors(cell, width, height)
                    if free(n)
                }
            )
            if not frontier:
                return None
            cell = frontier[rng.integers(len(frontier))]
            cluster.append(cell)
            obstacles.add(cell)
        remaining -= size

    for _ in range(isolated):
        candidates = [
            (r, c)
            for r in range(height)
            for c in range(width)
            if free((r, c))
            and not any(n in obstacles for n in _grid_neighbors((r, c), width, height))
        ]
        if not candidates:
            return None
        obstacles.add(candidates[rng.integers(len(candidates))])
    return obstacles


def generate_maze(
    width: int,
    height: int,
    connectivity_percent: float,
    obstacle_density: float = 0.25,
    seed: int = 0,
    max_attempts: int = 100,
    tolerance: float = 5.0,
) -> MazeGrid:
    """Generates a solvable maze with the given obstacle connectivity.

    ``floor(obstacle_density * width * height)`` obstacles are placed, of which a
    share of ``connectivity_percent`` has an orthogonally adjacent obstacle. The
    entrance is the top-left cell and the exit the bottom-right cell. Attempts whose
    exit cannot be reached from the entrance or whose measured connectivity is off by
    more than ``tolerance`` points are discarded.

    Raises :class:`MazeGenerationError` if no attempt succeeds.

    """
    if not 0 <= connectivity_percent <= 100:
        raise ValueError(
            f"connectivity must be in [0, 100], got {connectivity_percent}"
        )
    if not 0 <= obstacle_density < 1:
        raise ValueError(f"obstacle density must be in [0, 1), got {obstacle_density}")
    if width * height < 2:
        raise ValueError(f"maze {width}x{height} has no room for entrance and exit")

    entrance, exit = (0, 0), (height - 1, width - 1)
    total = int(math.floor(obstacle_density * width * height))
    linked = int(round(connectivity_percent / 100.0 * total))
    if linked == 1:
        # clusters have at least two cells
        linked = 2 if total >= 2 and connectivity_percent >= 50 else 0
    isolated = total - linked

    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        obstacles = _place_obstacles(
            width, height, linked, isolated, {entrance, exit}, rng
        )
        if obstacles is None:
            continue
        maze = MazeGrid(width, height, obstacles, entrance, exit)
        if not maze.reachable():
            continue
        if obstacles and abs(maze.connectivity() - connectivity_percent) > tolerance:
            continue
        return maze
    raise MazeGenerationError(
        f"could not generate a solvable {height}x{width} maze with density "
        f"{obstacle_density} and connectivity {connectivity_percent}% after "
        f"{max_attempts} attempts"
    )


def choose_starts(
    maze: MazeGrid, count: int, rng: np.random.Generator, min_distance: int = -1
) -> List[Cell]:
    """Draws distinct start cells from which the exit can be reached.

    Start cells have Manhattan distance at least ``min_distance`` to the exit
    (default: ``ceil((width + height) / 4)``).

    """
    if min_distance < 0:
        min_distance = int(math.ceil((maze.width + maze.height) / 4))
    candidates = sorted(
        cell
        for cell in maze.reachable_cells(maze.exit)
        if manhattan(cell, maze.exit) >= min_distance
    )
    if len(candidates) < count:
        raise MazeGenerationError(
            f"maze has only {len(candidates)} admissible start cells, {count} requested"
        )
    chosen = rng.choice(len(candidates), size=count, replace=False)
    return [candidates[i] for i in chosen]
