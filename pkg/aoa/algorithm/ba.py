from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from aoa.algorithm.optimizer import Optimizer, RunResult, RunTracker, fair_iterations
from aoa.algorithm.orca import decay_loudness, draw_frequency
from aoa.config import Config
from aoa.space.search_space import SearchSpace


@dataclass(frozen=True)
class BaParams:
    swarm_size: int = 40
    iterations: int = 550
    f_min: float = 0.0
    f_max: float = 2.0
    a0: float = 1.0
    a_min: float = 0.0
    delta: float = 0.25
    #: pulse rate r0; the rate of a bat grows as r0 * (1 - exp(-pulse_growth * t))
    pulse_rate: float = 0.5
    pulse_growth: float = 0.9
    #: scale of the random walk around the best position
    local_step: float = 1.0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError(f"swarm_size must be at least 2, got {self.swarm_size}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be positive, got {self.iterations}")
        if not self.f_min < self.f_max:
            raise ValueError(
                f"f_min must be smaller than f_max, got ({self.f_min}, {self.f_max})"
            )
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0,1), got {self.delta}")
        if not 0.0 <= self.a_min < self.a0:
            raise ValueError(
                f"loudness range must satisfy 0 <= a_min < a0, got "
                f"({self.a_min}, {self.a0})"
            )
        for name in ["pulse_rate", "pulse_growth", "local_step"]:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @staticmethod
    def from_config(config: Config, key: str = "ba") -> "BaParams":
        swarm_size = config.get(f"{key}.swarm_size")
        iterations = config.get(f"{key}.iterations")
        if iterations < 0:
            iterations = fair_iterations(config, swarm_size)
        return BaParams(
            swarm_size=swarm_size,
            iterations=iterations,
            **{
                name: float(config.get(f"{key}.{name}"))
                for name in [
                    "f_min",
                    "f_max",
                    "a0",
                    "a_min",
                    "delta",
                    "pulse_rate",
                    "pulse_growth",
                    "local_step",
                ]
            },
        )

    def pulse_rate_at(self, t: int) -> float:
        return self.pulse_rate * (1.0 - math.exp(-self.pulse_growth * t))


def run_ba(space: SearchSpace, params: BaParams, seed: int) -> RunResult:
    """One run of the bat algorithm over a search space.

    Frequencies and loudness follow the same laws as the orca algorithm's echolocation
    (:func:`draw_frequency`, :func:`decay_loudness`); loudness decays every round. A
    bat whose pulse rate is exceeded tries a random walk around the best position
    instead of its own move. Improving candidates are accepted with probability equal
    to the bat's loudness.

    """
    start_time = time.perf_counter()
    rng = np.random.default_rng(seed)
    tracker = RunTracker(space)

    positions = [space.random_position(rng) for _ in range(params.swarm_size)]
    fitness = [space.fitness(x) for x in positions]
    velocities = np.zeros(params.swarm_size)
    loudness = np.full(params.swarm_size, params.a0)
    pulse = np.full(params.swarm_size, params.pulse_rate)
    for x, f in zip(positions, fitness):
        tracker.observe(x, f)
    tracker.end_round()
    b = int(np.argmax(fitness))
    best, best_fitness = positions[b], fitness[b]

    iterations_used = 1
    if not tracker.success:
        for t in range(1, params.iterations + 1):
            iterations_used = t
            mean_loudness = float(loudness.mean())
            for j in range(params.swarm_size):
                frequency = draw_frequency(params, rng)
                velocities[j] += space.distance(positions[j], best) * frequency
                candidate = space.translate(positions[j], velocities[j], best, rng)
                if rng.random() > pulse[j]:
                    step = rng.uniform(-1.0, 1.0) * mean_loudness * params.local_step
                    candidate = space.translate(best, step, None, rng)
                candidate_fitness = space.fitness(candidate)
                tracker.position_updates += 1
                tracker.observe(candidate, candidate_fitness)

                if candidate_fitness > fitness[j] and rng.random() < loudness[j]:
                    positions[j], fitness[j] = candidate, candidate_fitness
                    pulse[j] = params.pulse_rate_at(t)
                if candidate_fitness > best_fitness:
                    best, best_fitness = candidate, candidate_fitness
                loudness[j] = decay_loudness(loudness[j], params)
            tracker.end_round()
            if tracker.success:
                break

    return tracker.result(
        seed=seed,
        wall_time=time.perf_counter() - start_time,
        iterations_used=iterations_used,
        algorithm="ba",
    )


class BatAlgorithm(Optimizer):
    def __init__(self, config: Config, space: SearchSpace, configuration_key="ba"):
        super().__init__(config, space, configuration_key)
        self.params = BaParams.from_config(config, configuration_key)

    def run(self, seed: int) -> RunResult:
        result = run_ba(self.space, self.params, seed)
        result.algorithm = self.name
        return result
