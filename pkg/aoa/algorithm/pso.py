from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from aoa.algorithm.optimizer import (
    Optimizer,
    RunResult,
    RunTracker,
    fair_iterations,
)
from aoa.config import Config
from aoa.space.search_space import SearchSpace


@dataclass(frozen=True)
class PsoParams:
    swarm_size: int = 40
    iterations: int = 550
    inertia: float = 0.7
    cognitive: float = 1.5
    social: float = 1.5
    #: velocity clamp; NaN disables it
    max_velocity: float = float("nan")

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError(f"swarm_size must be at least 2, got {self.swarm_size}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be positive, got {self.iterations}")
        for name in ["inertia", "cognitive", "social"]:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not math.isnan(self.max_velocity) and not self.max_velocity > 0:
            raise ValueError(
                f"max_velocity must be positive or .nan, got {self.max_velocity}"
            )

    @staticmethod
    def from_config(config: Config, key: str = "pso") -> "PsoParams":
        swarm_size = config.get(f"{key}.swarm_size")
        iterations = config.get(f"{key}.iterations")
        if iterations < 0:
            iterations = fair_iterations(config, swarm_size)
        return PsoParams(
            swarm_size=swarm_size,
            iterations=iterations,
            inertia=config.get(f"{key}.inertia"),
            cognitive=config.get(f"{key}.cognitive"),
            social=config.get(f"{key}.social"),
            max_velocity=config.get(f"{key}.max_velocity"),
        )


def run_pso(space: SearchSpace, params: PsoParams, seed: int) -> RunResult:
    """One run of particle swarm optimization over a search space.

    Velocities are scalars: inertia plus randomly weighted distances to the particle's
    best and the swarm's best position. A particle moves by its velocity toward the
    swarm's best position.

    """
    start_time = time.perf_counter()
    rng = np.random.default_rng(seed)
    tracker = RunTracker(space)

    positions = [space.random_position(rng) for _ in range(params.swarm_size)]
    fitness = [space.fitness(x) for x in positions]
    velocities = np.zeros(params.swarm_size)
    personal = list(positions)
    personal_fitness = list(fitness)
    for x, f in zip(positions, fitness):
        tracker.observe(x, f)
    tracker.end_round()
    g = int(np.argmax(personal_fitness))
    global_best, global_fitness = personal[g], personal_fitness[g]

    iterations_used = 1
    if not tracker.success:
        for iteration in range(1, params.iterations + 1):
            iterations_used = iteration
            for j in range(params.swarm_size):
                r1, r2 = rng.random(), rng.random()
                v = (
                    params.inertia * velocities[j]
                    + params.cognitive * r1 * space.distance(personal[j], positions[j])
                    + params.social * r2 * space.distance(global_best, positions[j])
                )
                if not math.isnan(params.max_velocity):
                    v = float(np.clip(v, -params.max_velocity, params.max_velocity))
                velocities[j] = v
                positions[j] = space.translate(positions[j], v, global_best, rng)
                fitness[j] = space.fitness(positions[j])
                tracker.position_updates += 1
                tracker.observe(positions[j], fitness[j])
                if fitness[j] > personal_fitness[j]:
                    personal[j], personal_fitness[j] = positions[j], fitness[j]
                    if fitness[j] > global_fitness:
                        global_best, global_fitness = positions[j], fitness[j]
            tracker.end_round()
            if tracker.success:
                break

    return tracker.result(
        seed=seed,
        wall_time=time.perf_counter() - start_time,
        iterations_used=iterations_used,
        algorithm="pso",
    )


class ParticleSwarmOptimization(Optimizer):
    def __init__(self, config: Config, space: SearchSpace, configuration_key="pso"):
        super().__init__(config, space, configuration_key)
        self.params = PsoParams.from_config(config, configuration_key)

    def run(self, seed: int) -> RunResult:
        result = run_pso(self.space, self.params, seed)
        result.algorithm = self.name
        return result
