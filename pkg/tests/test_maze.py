import math
import os
import unittest

import numpy as np

from aoa.algorithm.community import PopulationShape
from aoa.space.maze import (
    MazeGrid,
    MazeSpace,
    Move,
    SolutionPath,
    build_maze_population,
    cut_points,
    discrete_distance,
    extend_random,
    manhattan_fitness,
    replicate,
    truncate,
)


def open_grid(size=15):
    return MazeGrid(size, size, [], (0, 0), (size - 1, size - 1))


def reference_cut_points(sol_size, clans):
    sizes = [sol_size]
    while len(sizes) < clans:
        s = sizes[-1]
        candidate = int(s / (clans - 1)) + 1
        if candidate >= s:
            candidate = s - 1
        if candidate < 1:
            candidate = 1
        sizes.append(candidate)
    return sizes


class TestMazeGrid(unittest.TestCase):
    def test_rejects_invalid_grids(self):
        with self.assertRaises(ValueError):
            MazeGrid(3, 3, [(0, 0)], (0, 0), (2, 2))
        with self.assertRaises(ValueError):
            MazeGrid(3, 3, [], (0, 0), (3, 3))
        with self.assertRaises(ValueError):
            MazeGrid(3, 3, [], (1, 1), (1, 1))
        trivial = MazeGrid(3, 3, [], (1, 1), (1, 1), allow_trivial=True)
        self.assertEqual(trivial.entrance, trivial.exit)

    def test_reachability(self):
        blocked = MazeGrid(3, 3, [(0, 1), (1, 0), (1, 1)], (0, 0), (2, 2))
        self.assertFalse(blocked.reachable())
        self.assertTrue(open_grid(3).reachable())
        self.assertEqual(len(open_grid(4).reachable_cells((0, 0))), 16)

    def test_connectivity(self):
        # two linked obstacles and one lone obstacle
        maze = MazeGrid(5, 5, [(0, 2), (1, 2), (3, 0)], (0, 0), (4, 4))
        self.assertAlmostEqual(maze.connectivity(), 200.0 / 3.0)
        self.assertEqual(open_grid(5).connectivity(), 0.0)

    def test_with_entrance(self):
        maze = open_grid(5).with_entrance((4, 4))
        self.assertEqual(maze.entrance, maze.exit)
        self.assertEqual(maze.default_max_length(), 40)


class TestPathOperations(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_moves(self):
        self.assertEqual(Move.LEFT.reverse, Move.RIGHT)
        self.assertEqual(Move.UP.reverse, Move.DOWN)
        self.assertEqual(Move.from_letter("D"), Move.DOWN)
        self.assertEqual(Move.RIGHT.apply((2, 2)), (2, 3))

    def test_from_moves(self):
        path = SolutionPath.from_moves((0, 0), [Move.RIGHT, Move.DOWN, Move.DOWN], 10)
        self.assertEqual(path.terminal, (2, 1))
        self.assertEqual(str(path), "RDD")
        self.assertEqual(path.cells(), [(0, 0), (0, 1), (1, 1), (2, 1)])
        with self.assertRaises(ValueError):
            SolutionPath.from_moves((0, 0), [Move.RIGHT] * 3, 2)

    def test_extend_empty_path(self):
        maze = open_grid(15)
        path, appended, backtracked = extend_random(
            SolutionPath.empty((0, 0), 120), 5, maze, self.rng
        )
        self.assertEqual(len(path), 5)
        self.assertEqual(appended, 5)
        self.assertFalse(backtracked)
        self.assertTrue(path.is_admissible(maze))

    def test_extend_does_not_revisit_cells(self):
        maze = open_grid(15)
        for _ in range(20):
            path, _, _ = extend_random(
                SolutionPath.empty((7, 7), 1000), 100, maze, self.rng
            )
            visited = {path.start}
            trail = []
            cell = path.start
            for move in path.moves:
                cell = move.apply(cell)
                if trail and move is trail[-1].reverse:
                    # stepping back out of a dead end
                    trail.pop()
                else:
                    self.assertNotIn(cell, visited)
                    trail.append(move)
                visited.add(cell)

    def test_extend_reaches_reachable_exit(self):
        # a serpentine maze with 17 free cells
        obstacles = [(1, c) for c in range(4)] + [(3, c) for c in range(1, 5)]
        maze = MazeGrid(5, 5, obstacles, (0, 0), (4, 0))
        for _ in range(20):
            path, appended, _ = extend_random(
                SolutionPath.empty((0, 0), 1000), 1000, maze, self.rng
            )
            self.assertEqual(path.terminal, maze.exit)
            self.assertLessEqual(appended, 2 * 17)
            self.assertTrue(path.is_admissible(maze))

    def test_extend_heads_for_target(self):
        maze = open_grid(15)
        start = SolutionPath.empty((7, 7), 120)
        path, _, _ = extend_random(start, 7, maze, self.rng, target=(7, 14))
        self.assertEqual(path.moves, (Move.RIGHT,) * 7)
        path, _, _ = extend_random(start, 6, maze, self.rng, target=(10, 10))
        self.assertEqual(path.terminal, (10, 10))
        # past the target the walk goes on at random
        path, appended, _ = extend_random(start, 8, maze, self.rng, target=(10, 10))
        self.assertEqual(appended, 8)
        self.assertLessEqual(abs(path.terminal[0] - 10) + abs(path.terminal[1] - 10), 2)

    def test_extend_backtracks_at_dead_end(self):
        maze = MazeGrid(3, 3, [(0, 2), (1, 0), (1, 1), (1, 2)], (0, 0), (2, 0))
        path = SolutionPath.from_moves((0, 0), [Move.RIGHT], 10)
        extended, appended, backtracked = extend_random(path, 1, maze, self.rng)
        self.assertEqual(extended.moves, (Move.RIGHT, Move.LEFT))
        self.assertEqual(extended.terminal, (0, 0))
        self.assertEqual(appended, 1)
        self.assertTrue(backtracked)

    def test_extend_walled_in_start(self):
        maze = MazeGrid(3, 3, [(0, 1), (1, 0)], (0, 0), (2, 2))
        path = SolutionPath.empty((0, 0), 10)
        self.assertEqual(extend_random(path, 3, maze, self.rng), (path, 0, False))

    def test_extend_stops_at_exit_and_max_length(self):
        maze = MazeGrid(2, 1, [], (0, 0), (0, 1))
        path, appended, _ = extend_random(
            SolutionPath.empty((0, 0), 10), 5, maze, self.rng
        )
        self.assertEqual(path.terminal, (0, 1))
        self.assertEqual(appended, 1)
        path, _, _ = extend_random(
            SolutionPath.empty((0, 0), 3), 10, open_grid(15), self.rng
        )
        self.assertEqual(len(path), 3)

    def test_truncate(self):
        path = SolutionPath.from_moves((0, 0), [Move.RIGHT, Move.DOWN, Move.RIGHT], 10)
        self.assertEqual(truncate(path, 1).terminal, (1, 1))
        self.assertEqual(len(truncate(path, 10)), 0)
        self.assertEqual(truncate(path, 10).terminal, (0, 0))
        self.assertIs(truncate(path, 0), path)

    def test_replicate(self):
        maze = open_grid(15)
        path = SolutionPath.from_moves((0, 0), [Move.RIGHT, Move.DOWN], 100)
        tripled = replicate(path, 3, maze)
        self.assertEqual(str(tripled), "RDRDRD")
        self.assertEqual(tripled.terminal, (3, 3))
        self.assertEqual(replicate(path, 1, maze), path)
        with self.assertRaises(ValueError):
            replicate(path, 0, maze)

        # stops in front of an obstacle
        walled = MazeGrid(15, 15, [(0, 3)], (0, 0), (14, 14))
        right = SolutionPath.from_moves((0, 0), [Move.RIGHT], 100)
        self.assertEqual(replicate(right, 5, walled).terminal, (0, 2))

    def test_fitness_and_distance(self):
        maze = MazeGrid(2, 1, [], (0, 0), (0, 1))
        self.assertEqual(manhattan_fitness(SolutionPath.empty((0, 0), 4), maze), 0.5)
        done = SolutionPath.from_moves((0, 0), [Move.RIGHT], 4)
        self.assertEqual(manhattan_fitness(done, maze), 1.0)
        self.assertEqual(
            discrete_distance(done, SolutionPath.empty((0, 0), 4)), 1.0
        )

    def test_random_operation_sequences_stay_admissible(self):
        maze = MazeGrid(
            10,
            10,
            [(1, 1), (1, 2), (2, 1), (5, 5), (5, 6), (7, 2), (8, 8)],
            (0, 0),
            (9, 9),
        )
        space = MazeSpace(maze)
        runs = 100000 if os.environ.get("AOA_LONG_TESTS") else 2000
        path = space.empty_path()
        for _ in range(runs):
            op = self.rng.integers(4)
            if op == 0:
                path = space.translate(path, self.rng.uniform(-5, 5), None, self.rng)
            elif op == 1:
                path = replicate(path, int(self.rng.integers(1, 4)), maze)
            elif op == 2:
                path = space.max_distance_jump(path, self.rng)
            else:
                path = truncate(path, int(self.rng.integers(0, 5)))
            self.assertTrue(path.is_admissible(maze), msg=str(path))
            self.assertLessEqual(len(path), space.max_length)


class TestCutPoints(unittest.TestCase):
    def test_worked_example(self):
        self.assertEqual(cut_points(8, 3), [8, 5, 3])

    def test_matches_reference(self):
        for sol_size in range(1, 101):
            for clans in range(2, 7):
                sizes = cut_points(sol_size, clans)
                self.assertEqual(
                    sizes, reference_cut_points(sol_size, clans), msg=(sol_size, clans)
                )
                self.assertEqual(len(sizes), clans)
                self.assertEqual(sizes[0], sol_size)
                for previous, size in zip(sizes, sizes[1:]):
                    self.assertGreaterEqual(size, 1)
                    if previous > 1:
                        self.assertLess(size, previous)

    def test_rejects_invalid_arguments(self):
        with self.assertRaises(ValueError):
            cut_points(8, 1)
        with self.assertRaises(ValueError):
            cut_points(0, 3)


class TestMazePopulation(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.maze = open_grid(15)
        self.initial = SolutionPath.from_moves(
            (0, 0), [Move.RIGHT, Move.DOWN] * 4, 120
        )

    def test_clan_bases_follow_cut_points(self):
        clans = build_maze_population(
            self.initial, PopulationShape(3, 1, 1), self.maze, self.rng
        )
        self.assertEqual(len(clans), 3)
        for clan, base_length in zip(clans, [8, 5, 3]):
            individual = clan[0][0]
            self.assertEqual(
                individual.moves[:base_length], self.initial.moves[:base_length]
            )
            # pod base extension plus at most the individual extension
            self.assertLessEqual(len(individual), base_length + 6 + 3)
            self.assertGreaterEqual(len(individual), base_length + 6)

    def test_individuals_share_pod_base(self):
        clans = build_maze_population(
            self.initial, PopulationShape(1, 1, 4), self.maze, self.rng
        )
        pod = clans[0][0]
        base_length = len(self.initial) + math.ceil(2 * len(self.initial) / 3)
        prefix = pod[0].moves[:base_length]
        for individual in pod:
            self.assertEqual(individual.moves[:base_length], prefix)

    def test_empty_initial_path(self):
        shape = PopulationShape(2, 2, 2)
        clans = build_maze_population(
            SolutionPath.empty((0, 0), 120), shape, self.maze, self.rng
        )
        self.assertEqual(sum(len(pod) for clan in clans for pod in clan), shape.size)
        for clan in clans:
            for pod in clan:
                for individual in pod:
                    self.assertEqual(len(individual), 0)


class TestMazeSpace(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(1)
        self.space = MazeSpace(open_grid(15))

    def test_translate_rounds_half_away_from_zero(self):
        path = SolutionPath.from_moves((0, 0), [Move.RIGHT, Move.RIGHT], 120)
        self.assertEqual(len(self.space.translate(path, 0.5, None, self.rng)), 3)
        self.assertEqual(len(self.space.translate(path, -0.5, None, self.rng)), 1)
        self.assertEqual(len(self.space.translate(path, 1.5, None, self.rng)), 4)
        self.assertIs(self.space.translate(path, 0.4, None, self.rng), path)

    def test_translate_heads_for_anchor(self):
        moves = [Move.DOWN] * 4 + [Move.RIGHT] * 3
        anchor = SolutionPath.from_moves((0, 0), moves, 120)
        moved = self.space.translate(self.space.empty_path(), 7, anchor, self.rng)
        self.assertEqual(moved.terminal, anchor.terminal)
        self.assertEqual(self.space.distance(moved, anchor), 0.0)
        # shrinking ignores the anchor
        shrunk = self.space.translate(moved, -3, anchor, self.rng)
        self.assertEqual(shrunk.moves, moved.moves[:4])

    def test_random_position(self):
        for _ in range(50):
            path = self.space.random_position(self.rng)
            self.assertGreaterEqual(len(path), 1)
            self.assertTrue(path.is_admissible(self.space.maze))

    def test_max_distance_jump_extends_to_max_length(self):
        path = self.space.random_position(self.rng)
        for _ in range(20):
            jumped = self.space.max_distance_jump(path, self.rng)
            self.assertTrue(jumped.is_admissible(self.space.maze))
            self.assertTrue(
                len(jumped) == self.space.max_length
                or jumped.terminal == self.space.maze.exit
            )

    def test_validate(self):
        self.space.validate(self.space.empty_path())
        with self.assertRaises(ValueError):
            self.space.validate(SolutionPath.empty((1, 1), 120))
        with self.assertRaises(ValueError):
            self.space.validate(SolutionPath.from_moves((0, 0), [Move.UP], 120))
        with self.assertRaises(ValueError):
            self.space.validate("RRDD")
