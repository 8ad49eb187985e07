from aoa.space.search_space import SearchSpace, Position
from aoa.space.maze import (
    Move,
    MazeGrid,
    SolutionPath,
    MazeSpace,
    extend_random,
    truncate,
    replicate,
    manhattan_fitness,
    discrete_distance,
    cut_points,
    build_maze_population,
)
from aoa.space.continuous import ContinuousProblem, ContinuousSpace
