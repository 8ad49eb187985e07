from __future__ import annotations

import collections
import math
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from aoa.misc import round_half_away
from aoa.space.search_space import SearchSpace

#: a cell of a maze as (row, col)
Cell = Tuple[int, int]


class Move(Enum):
    """The four admissible moves. Values are (row delta, col delta)."""

    LEFT = (0, -1)
    RIGHT = (0, 1)
    UP = (-1, 0)
    DOWN = (1, 0)

    @property
    def reverse(self) -> "Move":
        return _REVERSE[self]

    @property
    def letter(self) -> str:
        return self.name[0]

    @staticmethod
    def from_letter(letter: str) -> "Move":
        return _BY_LETTER[letter]

    def apply(self, cell: Cell) -> Cell:
        return cell[0] + self.value[0], cell[1] + self.value[1]


_REVERSE = {
    Move.LEFT: Move.RIGHT,
    Move.RIGHT: Move.LEFT,
    Move.UP: Move.DOWN,
    Move.DOWN: Move.UP,
}
_BY_LETTER = {m.letter: m for m in Move}

#: fixed move order; random choices index into it
MOVES: Tuple[Move, ...] = (Move.LEFT, Move.RIGHT, Move.UP, Move.DOWN)


class MazeGrid:
    """A rectangular grid of free cells and obstacles with an entrance and an exit.

    ``starts`` holds alternate start cells (as listed in the header of a maze file);
    use :meth:`with_entrance` to obtain the grid of one of them.

    """

    def __init__(
        self,
        width: int,
        height: int,
        obstacles: Iterable[Cell],
        entrance: Cell,
        exit: Cell,
        starts: Sequence[Cell] = (),
        allow_trivial: bool = False,
    ):
        if width < 1 or height < 1:
            raise ValueError(f"invalid maze size {width}x{height}")
        self.width = width
        self.height = height
        self.obstacles: FrozenSet[Cell] = frozenset(tuple(c) for c in obstacles)
        self.entrance: Cell = tuple(entrance)
        self.exit: Cell = tuple(exit)
        self.starts: Tuple[Cell, ...] = tuple(tuple(s) for s in starts)

        self._blocked = np.zeros((height, width), dtype=bool)
        for cell in self.obstacles:
            if not self.in_bounds(cell):
                raise ValueError(f"obstacle {cell} out of bounds")
            self._blocked[cell] = True

        for name, cell in [("entrance", self.entrance), ("exit", self.exit)]:
            if not self.is_free(cell):
                raise ValueError(f"{name} {cell} is out of bounds or an obstacle")
        for cell in self.starts:
            if not self.is_free(cell):
                raise ValueError(f"start {cell} is out of bounds or an obstacle")
        if self.entrance == self.exit and not allow_trivial:
            raise ValueError(f"entrance and exit coincide at {self.entrance}")

    def __eq__(self, other):
        if not isinstance(other, MazeGrid):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.obstacles == other.obstacles
            and self.entrance == other.entrance
            and self.exit == other.exit
            and self.starts == other.starts
        )

    def __repr__(self):
        return (
            f"MazeGrid({self.width}x{self.height}, {len(self.obstacles)} obstacles, "
            f"entrance={self.entrance}, exit={self.exit})"
        )

    @property
    def size_label(self) -> str:
        return f"{self.height}x{self.width}"

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and not self._blocked[cell]

    def neighbors(self, cell: Cell) -> List[Cell]:
        "Free orthogonal neighbors of a cell."
        return [n for n in (m.apply(cell) for m in MOVES) if self.is_free(n)]

    def with_entrance(self, entrance: Cell) -> "MazeGrid":
        """Returns a copy of this grid with the given entrance.

        The entrance may coincide with the exit (a trivial instance).

        """
        return MazeGrid(
            self.width,
            self.height,
            self.obstacles,
            entrance,
            self.exit,
            self.starts,
            allow_trivial=True,
        )

    def reachable_cells(self, source: Cell) -> Set[Cell]:
        "All free cells reachable from ``source`` (breadth-first flood fill)."
        if not self.is_free(source):
            return set()
        seen = {source}
        queue = collections.deque([source])
        while queue:
            cell = queue.popleft()
            for n in self.neighbors(cell):
                if n not in seen:
                    seen.add(n)
                    queue.append(n)
        return seen

    def reachable(self, source: Optional[Cell] = None, target: Optional[Cell] = None):
        "Whether ``target`` (default: exit) can be reached from ``source`` (entrance)."
        source = self.entrance if source is None else tuple(source)
        target = self.exit if target is None else tuple(target)
        return target in self.reachable_cells(source)

    def connectivity(self) -> float:
        """Percentage of obstacle cells with at least one orthogonal obstacle neighbor.

        Returns 0 for a grid without obstacles.

        """
        if not self.obstacles:
            return 0.0
        linked = 0
        for cell in self.obstacles:
            for m in MOVES:
                n = m.apply(cell)
                if self.in_bounds(n) and self._blocked[n]:
                    linked += 1
                    break
        return 100.0 * linked / len(self.obstacles)

    def default_max_length(self) -> int:
        return 4 * (self.width + self.height)


@dataclass(frozen=True)
class SolutionPath:
    """A sequence of moves from a start cell, with its cached terminal cell."""

    start: Cell
    moves: Tuple[Move, ...]
    terminal: Cell
    max_length: int

    @staticmethod
    def empty(start: Cell, max_length: int) -> "SolutionPath":
        return SolutionPath(tuple(start), (), tuple(start), max_length)

    @staticmethod
    def from_moves(
        start: Cell, moves: Sequence[Move], max_length: int
    ) -> "SolutionPath":
        if len(moves) > max_length:
            raise ValueError(
                f"path of length {len(moves)} exceeds maximum length {max_length}"
            )
        return SolutionPath(
            tuple(start), tuple(moves), follow(start, moves), max_length
        )

    def __len__(self):
        return len(self.moves)

    def __str__(self):
        return "".join(m.letter for m in self.moves)

    def cells(self) -> List[Cell]:
        "The cells visited by this path, starting with its start cell."
        result = [self.start]
        for m in self.moves:
            result.append(m.apply(result[-1]))
        return result

    def is_admissible(self, maze: MazeGrid) -> bool:
        "Whether every prefix of this path stays in bounds and off obstacles."
        return len(self) <= self.max_length and all(
            maze.is_free(c) for c in self.cells()
        )


def follow(start: Cell, moves: Iterable[Move]) -> Cell:
    "Cell reached by applying ``moves`` from ``start``."
    row, col = start
    for m in moves:
        row += m.value[0]
        col += m.value[1]
    return row, col


# -- path arithmetic --


def _trail(path: SolutionPath) -> List[Move]:
    "Forward moves of ``path`` still on the way back to its start."
    trail: List[Move] = []
    for m in path.moves:
        if trail and m is trail[-1].reverse:
            trail.pop()
        else:
            trail.append(m)
    return trail


def extend_random(
    path: SolutionPath,
    k: int,
    maze: MazeGrid,
    rng: np.random.Generator,
    target: Optional[Cell] = None,
) -> Tuple[SolutionPath, int, bool]:
    """Append up to ``k`` random admissible moves to ``path``.

    The extension is a depth-first walk: a random move never enters a cell the path
    has visited already. When every neighbor is blocked or visited (a dead end), the
    walk steps back along its last forward move, which counts as a backtracking step.
    If a ``target`` cell is given, moves that bring the terminal closer to it are
    preferred among the unvisited ones. Extension stops at the path's maximum
    length, once the exit is reached, and when the walk is back at its start with
    nothing left to visit.

    Returns the new path, the number of appended moves and whether a backtracking
    step was taken.

    """
    moves = list(path.moves)
    cell = path.terminal
    visited = set(path.cells())
    trail = _trail(path)
    appended = 0
    backtracked = False
    while appended < k and len(moves) < path.max_length and cell != maze.exit:
        options = [
            m
            for m in MOVES
            if maze.is_free(m.apply(cell)) and m.apply(cell) not in visited
        ]
        if options and target is not None and cell != target:
            closer = [
                m
                for m in options
                if manhattan(m.apply(cell), target) < manhattan(cell, target)
            ]
            options = closer or options
        if options:
            move = options[rng.integers(len(options))]
            trail.append(move)
        elif trail:
            move = trail.pop().reverse
            backtracked = True
        else:
            # nothing left to visit from the start cell
            break
        moves.append(move)
        cell = move.apply(cell)
        visited.add(cell)
        appended += 1

    if appended == 0:
        return path, 0, False
    return (
        SolutionPath(path.start, tuple(moves), cell, path.max_length),
        appended,
        backtracked,
    )


def truncate(path: SolutionPath, k: int) -> SolutionPath:
    "Remove the last ``min(k, len(path))`` moves."
    if k <= 0:
        return path
    moves = path.moves[: max(len(path) - k, 0)]
    return SolutionPath(path.start, moves, follow(path.start, moves), path.max_length)


def replicate(path: SolutionPath, k: int, maze: MazeGrid) -> SolutionPath:
    """Append ``k - 1`` copies of the move sequence of ``path``.

    Appending stops at the first inadmissible move, at the maximum length, or once the
    exit is reached.

    """
    if k < 1:
        raise ValueError(f"replication factor must be positive, got {k}")
    moves = list(path.moves)
    cell = path.terminal
    for _ in range(k - 1):
        for m in path.moves:
            if len(moves) >= path.max_length or cell == maze.exit:
                break
            n = m.apply(cell)
            if not maze.is_free(n):
                break
            moves.append(m)
            cell = n
        else:
            continue
        break
    return SolutionPath(path.start, tuple(moves), cell, path.max_length)


def manhattan(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def manhattan_fitness(path: SolutionPath, maze: MazeGrid) -> float:
    return 1.0 / (1.0 + manhattan(path.terminal, maze.exit))


def discrete_distance(x: SolutionPath, y: SolutionPath) -> float:
    "Manhattan distance between the terminal cells of two paths."
    return float(manhattan(x.terminal, y.terminal))


def cut_points(sol_size: int, clans: int) -> List[int]:
    """Sizes of the clan base paths derived from an initial path.

    The first clan keeps the full path. Each further size is ``s // (clans - 1) + 1``
    of the previous size ``s``, capped at ``s - 1`` and floored at 1.

    """
    if clans < 2:
        raise ValueError(f"cut points need at least 2 clans, got {clans}")
    if sol_size < 1:
        raise ValueError(f"cut points need a path of length >= 1, got {sol_size}")
    sizes = [sol_size]
    for _ in range(clans - 1):
        s = sizes[-1]
        sizes.append(max(1, min(s - 1, s // (clans - 1) + 1)))
    return sizes


def build_maze_population(
    initial_path: SolutionPath, shape, maze: MazeGrid, rng: np.random.Generator
) -> List[List[List[SolutionPath]]]:
    """Derive the paths of a community from an initial path.

    Clan bases are prefixes of the initial path with lengths given by
    :func:`cut_points`. Pod bases extend their clan base by ``ceil(2s/3)`` random moves
    and individuals extend their pod base by up to ``ceil(s/3)`` random moves, where
    ``s`` is the length of the initial path.

    """
    sol_size = len(initial_path)
    if sol_size == 0:
        # the start cell is the only prefix
        sizes = [0] * shape.clans
    elif shape.clans == 1:
        sizes = [sol_size]
    else:
        sizes = cut_points(sol_size, shape.clans)
    pod_moves = math.ceil(2 * sol_size / 3)
    individual_moves = math.ceil(sol_size / 3)

    clans = []
    for size in sizes:
        clan_base = truncate(initial_path, sol_size - size)
        pods = []
        for _ in range(shape.pods_per_clan):
            pod_base, _, _ = extend_random(clan_base, pod_moves, maze, rng)
            individuals = []
            for _ in range(shape.individuals_per_pod):
                k = int(rng.integers(0, individual_moves, endpoint=True))
                individual, _, _ = extend_random(pod_base, k, maze, rng)
                individuals.append(individual)
            pods.append(individuals)
        clans.append(pods)
    return clans


class MazeSpace(SearchSpace):
    """Search space of admissible move sequences from the entrance of a maze.

    Positive displacements append random moves, negative displacements remove
    trailing moves; displacements are rounded half away from zero. Appended moves
    head for the terminal cell of the anchor, if one is given.

    """

    tolerance = 0.0
    min_radius = 1.0

    def __init__(self, maze: MazeGrid, max_length: int = -1):
        self.maze = maze
        self.max_length = maze.default_max_length() if max_length < 0 else max_length
        if self.max_length < 1:
            raise ValueError("maximum path length must be positive")

    def empty_path(self) -> SolutionPath:
        return SolutionPath.empty(self.maze.entrance, self.max_length)

    def distance(self, x: SolutionPath, y: SolutionPath) -> float:
        return discrete_distance(x, y)

    def translate(self, x, k, anchor=None, rng=None):
        steps = round_half_away(k)
        if steps > 0:
            target = None if anchor is None else anchor.terminal
            return extend_random(x, steps, self.maze, rng, target=target)[0]
        elif steps < 0:
            return truncate(x, -steps)
        return x

    def random_position(self, rng):
        length = int(rng.integers(1, self.max_length, endpoint=True))
        return extend_random(self.empty_path(), length, self.maze, rng)[0]

    def max_distance_jump(self, x, rng):
        keep = int(rng.integers(0, len(x), endpoint=True))
        prefix = truncate(x, len(x) - keep)
        return extend_random(prefix, self.max_length - len(prefix), self.maze, rng)[0]

    def fitness(self, x):
        return manhattan_fitness(x, self.maze)

    def is_optimal(self, x):
        return x.terminal == self.maze.exit

    def positions_equal(self, x, y, tolerance=0.0):
        return x.terminal == y.terminal and len(x) == len(y)

    def projection(self, x):
        return float(len(x))

    def derive_population(self, seed_position, shape, rng):
        return build_maze_population(seed_position, shape, self.maze, rng)

    def validate(self, x):
        if not isinstance(x, SolutionPath):
            raise ValueError(f"expected a SolutionPath, got {type(x).__name__}")
        if x.start != self.maze.entrance:
            raise ValueError(
                f"path starts at {x.start}, not at the entrance {self.maze.entrance}"
            )
        if not x.is_admissible(self.maze):
            raise ValueError(f"path {x} is not admissible")

    def solution_size(self, x):
        return float(len(x))

    def format_position(self, x):
        return str(x)
