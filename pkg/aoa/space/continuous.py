from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from aoa.space.search_space import SearchSpace


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x ** 2))


def rastrigin(x: np.ndarray) -> float:
    return float(10.0 * x.size + np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x)))


#: benchmark objectives by name; all have their minimum 0 at the origin
OBJECTIVES: Dict[str, Callable[[np.ndarray], float]] = {
    "sphere": sphere,
    "rastrigin": rastrigin,
}


@dataclass(frozen=True)
class ContinuousProblem:
    """Minimize a benchmark objective over a box.

    ``lower`` and ``upper`` are scalars applied to every coordinate.

    """

    objective: str = "sphere"
    dimension: int = 10
    lower: float = -5.0
    upper: float = 5.0
    epsilon: float = 1e-2

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(
                "unknown objective {}; expected one of {}".format(
                    self.objective, list(OBJECTIVES)
                )
            )
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        if not self.lower < self.upper:
            raise ValueError(f"invalid bounds [{self.lower}, {self.upper}]")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def name(self) -> str:
        return f"{self.objective}-{self.dimension}d"

    def objective_value(self, x: np.ndarray) -> float:
        return OBJECTIVES[self.objective](x)


class ContinuousSpace(SearchSpace):
    """Real vectors within a box, clamped to its bounds after every move.

    Positive displacements move along the unit direction toward the anchor but never
    past it; negative ones move away from it. Positions are never modified in place.

    """

    #: number of random directions tried when a circle point leaves the box
    encircle_retries = 20

    #: resamples of a clan base before the separation rule is given up
    separation_retries = 100

    def __init__(
        self,
        problem: ContinuousProblem,
        separation: float = 0.1,
        tolerance: float = 1e-6,
        log: Callable[[str], None] = None,
    ):
        self.problem = problem
        self.lower = np.full(problem.dimension, float(problem.lower))
        self.upper = np.full(problem.dimension, float(problem.upper))
        self.diameter = float(np.linalg.norm(self.upper - self.lower))
        self.separation = separation * self.diameter
        self.tolerance = tolerance
        self.log = log

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def _random_direction(self, rng: np.random.Generator) -> np.ndarray:
        direction = rng.normal(size=self.problem.dimension)
        norm = np.linalg.norm(direction)
        while norm == 0.0:
            direction = rng.normal(size=self.problem.dimension)
            norm = np.linalg.norm(direction)
        return direction / norm

    def _reach(self, x: np.ndarray, direction: np.ndarray) -> float:
        "Largest step along ``direction`` from ``x`` that stays in the box."
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.where(
                direction > 0,
                (self.upper - x) / direction,
                np.where(direction < 0, (self.lower - x) / direction, np.inf),
            )
        return max(float(np.min(steps)), 0.0)

    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError(f"dimension mismatch: {x.shape} vs. {y.shape}")
        return float(np.linalg.norm(x - y))

    def translate(self, x, k, anchor=None, rng=None):
        if k == 0:
            return x
        direction = None
        if anchor is not None:
            direction = anchor - x
            norm = np.linalg.norm(direction)
            if norm > 0 and k >= norm:
                return self.clamp(np.array(anchor, dtype=float))
            direction = direction / norm if norm > 0 else None
        if direction is None:
            direction = self._random_direction(rng)
        return self.clamp(x + k * direction)

    def random_position(self, rng):
        return rng.uniform(self.lower, self.upper)

    def max_distance_jump(self, x, rng):
        return rng.uniform(self.lower, self.upper)

    def objective_value(self, x) -> float:
        return self.problem.objective_value(x)

    def fitness(self, x):
        return 1.0 / (1.0 + self.objective_value(x))

    def is_optimal(self, x):
        return self.objective_value(x) <= self.problem.epsilon

    def positions_equal(self, x, y, tolerance=None):
        tolerance = self.tolerance if tolerance is None else tolerance
        return self.distance(x, y) <= tolerance

    def projection(self, x):
        return x

    def perturb(self, x, offset, rng):
        return self.clamp(x + offset)

    def encircle(self, x, center, radius, rng):
        """Places ``x`` on the circle of the given radius around ``center``.

        The circle point on the ray from the center through ``x`` is where a move by
        ``d - r`` toward the center lands. If it lies outside the box, the opposite
        point is tried, then points in random directions. If none fits, the radius
        shrinks to the largest in-box step along the ray. Returns the placed position
        and the radius actually used.

        """
        center = np.asarray(center, dtype=float)
        offset = np.asarray(x, dtype=float) - center
        norm = np.linalg.norm(offset)
        ray = offset / norm if norm > 0 else self._random_direction(rng)
        for attempt in range(self.encircle_retries + 2):
            if attempt == 0:
                direction = ray
            elif attempt == 1:
                direction = -ray
            else:
                direction = self._random_direction(rng)
            placed = center + radius * direction
            if self.contains(placed):
                return placed, radius
        radius = min(radius, self._reach(center, ray))
        return self.clamp(center + radius * ray), radius

    def derive_population(self, seed_position, shape, rng):
        """Clan bases are separated by at least the separation distance.

        The first clan is based at the seed position; further bases are resampled (up
        to ``separation_retries`` times) until they keep the separation to all earlier
        bases, else the last sample is kept with a warning. Pod bases lie at 2/3 of
        the separation from their clan base and individuals within 1/3 of it around
        their pod base.

        """
        bases = [np.asarray(seed_position, dtype=float)]
        for clan in range(1, shape.clans):
            for _ in range(self.separation_retries):
                candidate = self.random_position(rng)
                if all(self.distance(candidate, b) >= self.separation for b in bases):
                    break
            else:
                if self.log is not None:
                    self.log(
                        f"Warning: clan {clan} keeps a base closer than the separation "
                        f"{self.separation:.4g} to another clan after "
                        f"{self.separation_retries} resamples"
                    )
            bases.append(candidate)

        pod_offset = 2.0 * self.separation / 3.0
        individual_offset = self.separation / 3.0
        clans = []
        for base in bases:
            pods = []
            for _ in range(shape.pods_per_clan):
                pod_base = self.clamp(base + pod_offset * self._random_direction(rng))
                individuals = []
                for _ in range(shape.individuals_per_pod):
                    step = rng.uniform(0.0, individual_offset)
                    individuals.append(
                        self.clamp(pod_base + step * self._random_direction(rng))
                    )
                pods.append(individuals)
            clans.append(pods)
        return clans

    def validate(self, x):
        x = np.asarray(x)
        if x.shape != (self.problem.dimension,):
            raise ValueError(
                f"expected a position of dimension {self.problem.dimension}, "
                f"got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("position has non-finite coordinates")
        if np.any(x < self.lower) or np.any(x > self.upper):
            raise ValueError("position lies outside the bounds")

    def format_position(self, x):
        return np.array2string(np.asarray(x), precision=6, separator=", ")
