import os
import unittest

import numpy as np

from aoa.algorithm.ba import BaParams, run_ba
from aoa.algorithm.community import PopulationShape
from aoa.algorithm.orca import AlgorithmParams, PhaseBudgets, run_aoa
from aoa.algorithm.pso import PsoParams, run_pso
from aoa.space.continuous import ContinuousProblem, ContinuousSpace
from aoa.space.maze import MazeSpace
from aoa.util.maze_generator import choose_starts, generate_maze

LONG_TESTS = bool(os.environ.get("AOA_LONG_TESTS"))
CLASSES = [0, 30, 60, 100]


def maze_instances(size, connectivity, mazes=3, starts=3):
    instances = []
    for m in range(mazes):
        maze = generate_maze(size, size, connectivity, seed=1000 * connectivity + m)
        rng = np.random.default_rng(m)
        for start in choose_starts(maze, starts, rng):
            instances.append(maze.with_entrance(start))
    return instances


def maze_runs(run, size, connectivity, seeds=10):
    results = []
    for maze in maze_instances(size, connectivity):
        space = MazeSpace(maze)
        results.extend(run(space, seed) for seed in range(seeds))
    return results


def aoa(space, seed, budgets=PhaseBudgets()):
    return run_aoa(space, AlgorithmParams(), PopulationShape(4, 2, 5), budgets, seed)


def pso(space, seed):
    return run_pso(space, PsoParams(swarm_size=40, iterations=550), seed)


def ba(space, seed):
    return run_ba(space, BaParams(swarm_size=40, iterations=550), seed)


def success_rate(results):
    return sum(r.success for r in results) / len(results)


def mean_solution_size(results):
    return float(np.mean([r.solution_size for r in results if r.success]))


@unittest.skipUnless(LONG_TESTS, "set AOA_LONG_TESTS=1 to run")
class TestMazeSuccess(unittest.TestCase):
    def test_15x15(self):
        for connectivity in CLASSES:
            with self.subTest(connectivity=connectivity):
                results = maze_runs(aoa, 15, connectivity)
                self.assertGreaterEqual(success_rate(results), 0.95)

    def test_30x30(self):
        sizes = {}
        for connectivity in CLASSES:
            results = maze_runs(aoa, 30, connectivity)
            self.assertGreaterEqual(
                success_rate(results), 0.9, msg=f"connectivity {connectivity}"
            )
            sizes[connectivity] = mean_solution_size(results)
        # fully connected obstacles make the longest detours
        self.assertEqual(max(sizes, key=sizes.get), 100, msg=str(sizes))

    def test_baselines_on_connectivity_100(self):
        # equal budgets: 40 individuals for 550 rounds each
        aoa_size = mean_solution_size(maze_runs(aoa, 15, 100))
        ba_size = mean_solution_size(maze_runs(ba, 15, 100))
        pso_size = mean_solution_size(maze_runs(pso, 15, 100))
        self.assertLess(aoa_size, ba_size)
        self.assertLessEqual(aoa_size, 1.1 * pso_size)


@unittest.skipUnless(LONG_TESTS, "set AOA_LONG_TESTS=1 to run")
class TestContinuousSmoke(unittest.TestCase):
    #: the success threshold holds over exactly these seeds
    SEEDS = range(50)

    def test_sphere_10d(self):
        space = ContinuousSpace(ContinuousProblem("sphere", 10, -5.0, 5.0, 1e-2))
        # the default budget with four times the rounds per phase
        budgets = PhaseBudgets(5, 200, 120, 120)
        self.assertEqual(budgets.total, 4 * PhaseBudgets().total)
        results = [aoa(space, seed, budgets) for seed in self.SEEDS]
        self.assertGreaterEqual(success_rate(results), 0.9)
        for result in results:
            space.validate(result.best_position)
