from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from aoa.config import Config, Configurable
from aoa.misc import init_from
from aoa.space.search_space import Position, SearchSpace


class Phase(str, Enum):
    MOTION = "motion"
    ECHOLOCATION = "echolocation"
    HUNTING = "hunting"
    EXPLORATION = "exploration"


@dataclass
class RunResult:
    """Outcome of a single seeded run.

    ``phase_reached`` is the phase in which the optimum was found, or the last phase
    executed if it was not found. ``fitness_trace`` holds the best fitness seen so far
    after every evaluated round and is non-decreasing.

    """

    success: bool
    best_position: Position
    best_fitness: float
    iterations_used: int
    phase_reached: str
    wall_time: float
    seed: int
    fitness_trace: List[float] = field(default_factory=list)
    position_updates: int = 0
    solution_size: float = float("nan")
    taboo_saturations: int = 0
    algorithm: str = ""

    def to_dict(self, space: Optional[SearchSpace] = None) -> Dict[str, Any]:
        "Flat representation for trace entries and result tables."
        return dict(
            algorithm=self.algorithm,
            seed=self.seed,
            success=bool(self.success),
            solution_size=float(self.solution_size),
            best_fitness=float(self.best_fitness),
            iterations_used=int(self.iterations_used),
            phase_reached=str(self.phase_reached),
            position_updates=int(self.position_updates),
            taboo_saturations=int(self.taboo_saturations),
            runtime_s=float(self.wall_time),
            best_position=(
                space.format_position(self.best_position)
                if space is not None
                else str(self.best_position)
            ),
        )


class RunTracker:
    """Keeps the incumbent of a run across all populations it creates.

    Every evaluated position should be passed to :meth:`observe`; the tracker notices
    the first optimal position and remembers the phase in which it was found.

    """

    def __init__(self, space: SearchSpace):
        self.space = space
        self.best_position: Position = None
        self.best_fitness = -math.inf
        self.success = False
        self.phase: str = Phase.MOTION.value
        self.phase_reached: Optional[str] = None
        self.fitness_trace: List[float] = []
        self.position_updates = 0

    def observe(self, position: Position, fitness: float) -> bool:
        """Offer an evaluated position; returns whether the optimum has been found."""
        if fitness > self.best_fitness:
            self.best_position = position
            self.best_fitness = fitness
        if not self.success and self.space.is_optimal(position):
            self.success = True
            self.phase_reached = self.phase
            self.best_position = position
            self.best_fitness = max(self.best_fitness, fitness)
        return self.success

    def end_round(self):
        self.fitness_trace.append(self.best_fitness)

    def result(
        self,
        seed: int,
        wall_time: float,
        iterations_used: int,
        algorithm: str,
        taboo_saturations: int = 0,
    ) -> RunResult:
        return RunResult(
            success=self.success,
            best_position=self.best_position,
            best_fitness=self.best_fitness,
            iterations_used=iterations_used,
            phase_reached=self.phase_reached if self.success else self.phase,
            wall_time=wall_time,
            seed=seed,
            fitness_trace=list(self.fitness_trace),
            position_updates=self.position_updates,
            solution_size=self.space.solution_size(self.best_position),
            taboo_saturations=taboo_saturations,
            algorithm=algorithm,
        )


def fair_iterations(config: Config, swarm_size: int) -> int:
    """Number of iterations giving a swarm the same number of position updates as a
    run of the orca algorithm with the configured population and budgets."""
    from aoa.algorithm.community import PopulationShape
    from aoa.algorithm.orca import PhaseBudgets

    total = PopulationShape.from_config(config).size * PhaseBudgets.from_config(
        config
    ).total
    return int(math.ceil(total / swarm_size))


class Optimizer(Configurable):
    """Base class of all optimizers.

    An optimizer runs on a search space and is configured by the options under its
    configuration key (the algorithm name). Use :meth:`create` to obtain the optimizer
    selected by the ``algorithm`` option.

    """

    def __init__(
        self, config: Config, space: SearchSpace, configuration_key: str = None
    ):
        super().__init__(config, configuration_key)
        self.space = space

    @staticmethod
    def create(config: Config, space: SearchSpace) -> "Optimizer":
        """Factory method for optimizer creation."""
        algorithm = config.get("algorithm")
        try:
            class_name = config.get(f"{algorithm}.class_name")
        except KeyError:
            raise ValueError(
                f"unknown algorithm {algorithm}; make sure {algorithm}.yaml is "
                "in one of the configured modules"
            )
        return init_from(
            class_name, config.modules(), config, space, configuration_key=algorithm
        )

    @property
    def name(self) -> str:
        return self.configuration_key

    def run(self, seed: int) -> RunResult:
        "Performs one run whose random stream is fully determined by ``seed``."
        raise NotImplementedError

    def log(self, msg: str):
        self.config.log(msg)

    @staticmethod
    def make_rng(seed: int) -> np.random.Generator:
        return np.random.default_rng(seed)
