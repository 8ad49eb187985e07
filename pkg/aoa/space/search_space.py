from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, List, Optional, Tuple

import numpy as np

from aoa.config import Config

if TYPE_CHECKING:
    from aoa.algorithm.community import PopulationShape
    from aoa.dataset import Instance

#: A position of a search space. Its representation is space-defined.
Position = Any


class SearchSpace(ABC):
    """Base class of all search spaces.

    A search space defines how positions are represented, how far apart two positions
    are, and how a position is moved by a signed scalar displacement. All optimizers
    work on this contract only; they never look into a position.

    Fitness values are quality scores: they are finite, non-negative and higher is
    better. Minimization problems report ``1 / (1 + objective)``.

    """

    #: equality tolerance used by the exploration taboo list
    tolerance: float = 0.0

    #: lower bound on the upper end of the hunting radius range
    min_radius: float = 0.0

    @staticmethod
    def create(config: Config, instance: "Instance") -> "SearchSpace":
        """Factory method for the search space of an instance."""
        problem_type = config.check("problem.type", ["maze", "continuous"])
        if problem_type == "maze":
            from aoa.space.maze import MazeSpace

            return MazeSpace(instance.maze, max_length=config.get("maze.max_length"))
        else:
            from aoa.space.continuous import ContinuousSpace

            return ContinuousSpace(
                instance.problem,
                separation=config.get("continuous.separation"),
                tolerance=config.get("continuous.tolerance"),
                log=config.log,
            )

    # -- core contract --

    @abstractmethod
    def distance(self, x: Position, y: Position) -> float:
        raise NotImplementedError

    @abstractmethod
    def translate(
        self,
        x: Position,
        k: float,
        anchor: Optional[Position] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> Position:
        """Apply the signed scalar displacement ``k`` to ``x``.

        A positive displacement moves toward ``anchor`` (continuous spaces) or grows
        the position (discrete spaces); a negative one moves away or shrinks it.

        """
        raise NotImplementedError

    @abstractmethod
    def random_position(self, rng: np.random.Generator) -> Position:
        raise NotImplementedError

    @abstractmethod
    def max_distance_jump(self, x: Position, rng: np.random.Generator) -> Position:
        """Jump from ``x`` as far as the space allows (exploration)."""
        raise NotImplementedError

    @abstractmethod
    def fitness(self, x: Position) -> float:
        raise NotImplementedError

    @abstractmethod
    def is_optimal(self, x: Position) -> bool:
        raise NotImplementedError

    @abstractmethod
    def positions_equal(self, x: Position, y: Position, tolerance: float) -> bool:
        raise NotImplementedError

    # -- hooks with default implementations --

    def projection(self, x: Position):
        """Scalar (or per-coordinate) projection of a position used by the wave move."""
        return 0.0

    def perturb(self, x: Position, offset, rng: np.random.Generator) -> Position:
        """Apply a wave offset as computed from :meth:`projection`."""
        return self.translate(x, float(offset), None, rng)

    def encircle(
        self, x: Position, center: Position, radius: float, rng: np.random.Generator
    ) -> Tuple[Position, float]:
        """Place ``x`` with respect to the circle of the given radius around ``center``.

        The displacement is ``d - r`` when ``x`` lies outside the circle and ``r - d``
        otherwise, where ``d`` is the distance of ``x`` to ``center``. Returns the new
        position and the radius of the circle it was placed on, which spaces may
        shrink to stay within their bounds.

        """
        d = self.distance(x, center)
        if d > radius:
            return self.translate(x, d - radius, center, rng), radius
        else:
            return self.translate(x, radius - d, center, rng), radius

    @abstractmethod
    def derive_population(
        self,
        seed_position: Position,
        shape: "PopulationShape",
        rng: np.random.Generator,
    ) -> List[List[List[Position]]]:
        """Derive the initial positions of a community from a seed position.

        Returns a nested list indexed by clan, pod and individual.

        """
        raise NotImplementedError

    def validate(self, x: Position):
        """Raise :class:`ValueError` if ``x`` is not a valid position of this space."""
        pass

    def solution_size(self, x: Position) -> float:
        """Size of the solution represented by ``x`` (NaN if not applicable)."""
        return float("nan")

    def format_position(self, x: Position) -> str:
        return str(x)
