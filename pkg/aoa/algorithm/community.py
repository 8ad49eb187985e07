from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from aoa.config import Config
from aoa.space.search_space import Position, SearchSpace


@dataclass(frozen=True)
class PopulationShape:
    """Number of clans, pods per clan and individuals per pod."""

    clans: int
    pods_per_clan: int
    individuals_per_pod: int

    def __post_init__(self):
        for name in ["clans", "pods_per_clan", "individuals_per_pod"]:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.size < 2:
            raise ValueError(
                f"population must hold at least 2 individuals, shape {self} holds "
                f"{self.size}"
            )

    @property
    def size(self) -> int:
        return self.clans * self.pods_per_clan * self.individuals_per_pod

    @staticmethod
    def from_config(config: Config, key: str = "aoa.population") -> "PopulationShape":
        return PopulationShape(
            clans=config.get(f"{key}.clans"),
            pods_per_clan=config.get(f"{key}.pods_per_clan"),
            individuals_per_pod=config.get(f"{key}.individuals_per_pod"),
        )


@dataclass
class Orca:
    position: Position
    velocity: float = 0.0
    frequency: float = float("nan")
    loudness: float = float("nan")
    fitness: float = float("nan")


class Community:
    """Clans of pods of orcas, with the matriarch of every pod, clan and overall.

    Matriarch indexes are the fitness argmax of their scope; ties go to the lowest
    (clan, pod, individual) index. They are only current after
    :func:`update_matriarchs`, which also keeps the best position every pod and clan
    has reached so far. These remembered positions are the anchors the orcas move
    toward.

    """

    def __init__(self, clans: List[List[List[Orca]]]):
        self.clans = clans
        #: per clan and pod, index of the best individual within the pod
        self.pod_matriarch: List[List[int]] = []
        #: per clan, (pod, individual) of its best individual
        self.clan_matriarch: List[Tuple[int, int]] = []
        #: (clan, pod, individual) of the best individual
        self.global_matriarch: Tuple[int, int, int] = (0, 0, 0)
        #: per clan and pod, best position (and its fitness) reached by the pod
        self.pod_memory: List[List[Orca]] = [
            [Orca(position=None, fitness=-math.inf) for _ in clan] for clan in clans
        ]
        #: per clan, best position (and its fitness) reached by the clan
        self.clan_memory: List[Orca] = [
            Orca(position=None, fitness=-math.inf) for _ in clans
        ]

    @property
    def size(self) -> int:
        return sum(len(pod) for clan in self.clans for pod in clan)

    def orcas(self) -> Iterator[Orca]:
        for clan in self.clans:
            for pod in clan:
                yield from pod

    def indexed_orcas(self) -> Iterator[Tuple[int, int, int, Orca]]:
        for c, clan in enumerate(self.clans):
            for p, pod in enumerate(clan):
                for i, orca in enumerate(pod):
                    yield c, p, i, orca

    def pod_matriarch_orca(self, clan: int, pod: int) -> Orca:
        return self.clans[clan][pod][self.pod_matriarch[clan][pod]]

    def clan_matriarch_orca(self, clan: int) -> Orca:
        pod, individual = self.clan_matriarch[clan]
        return self.clans[clan][pod][individual]

    def pod_anchor(self, clan: int, pod: int) -> Position:
        return self.pod_memory[clan][pod].position

    def clan_anchor(self, clan: int) -> Position:
        return self.clan_memory[clan].position

    def best(self) -> Orca:
        clan, pod, individual = self.global_matriarch
        return self.clans[clan][pod][individual]

    def evaluate(self, space: SearchSpace):
        for orca in self.orcas():
            orca.fitness = space.fitness(orca.position)

    def any_optimal(self, space: SearchSpace) -> bool:
        return any(space.is_optimal(orca.position) for orca in self.orcas())


def _remember(memory: Orca, orca: Orca) -> Orca:
    if orca.fitness > memory.fitness:
        return Orca(position=orca.position, fitness=orca.fitness)
    return memory


def update_matriarchs(community: Community) -> Community:
    """Recompute the matriarch indexes from the cached fitness values.

    The pod and clan memories take over the position of their matriarch when it is
    better than the one remembered.

    """
    community.pod_matriarch = []
    community.clan_matriarch = []
    best_clan, best_fitness = 0, None
    for c, clan in enumerate(community.clans):
        pod_matriarchs = [
            int(np.argmax([orca.fitness for orca in pod])) for pod in clan
        ]
        community.pod_matriarch.append(pod_matriarchs)
        # the clan's best is the best of its pod matriarchs; argmax keeps the first
        p = int(np.argmax([pod[i].fitness for pod, i in zip(clan, pod_matriarchs)]))
        community.clan_matriarch.append((p, pod_matriarchs[p]))
        fitness = clan[p][pod_matriarchs[p]].fitness
        if best_fitness is None or fitness > best_fitness:
            best_clan, best_fitness = c, fitness
    community.global_matriarch = (best_clan,) + community.clan_matriarch[best_clan]

    for c, clan in enumerate(community.clans):
        for p in range(len(clan)):
            community.pod_memory[c][p] = _remember(
                community.pod_memory[c][p], community.pod_matriarch_orca(c, p)
            )
        community.clan_memory[c] = _remember(
            community.clan_memory[c], community.clan_matriarch_orca(c)
        )
    return community


def create_population(
    seed_position: Position,
    shape: PopulationShape,
    space: SearchSpace,
    rng: np.random.Generator,
) -> Community:
    """Build a community around a seed position.

    Positions are derived by the space (see :meth:`SearchSpace.derive_population`);
    velocities start at 0, frequency and loudness stay unset until echolocation.

    """
    space.validate(seed_position)
    layout = space.derive_population(seed_position, shape, rng)
    community = Community(
        [
            [[Orca(position=position) for position in pod] for pod in clan]
            for clan in layout
        ]
    )
    community.evaluate(space)
    return update_matriarchs(community)


class TabooList:
    """Exploration launch positions that may not be used again."""

    def __init__(self, space: SearchSpace, tolerance: float = None):
        self.space = space
        self.tolerance = space.tolerance if tolerance is None else tolerance
        self.entries: List[Position] = []
        #: number of explorations that could not find a non-taboo position
        self.saturations = 0

    def __len__(self):
        return len(self.entries)

    def __contains__(self, position: Position) -> bool:
        return any(
            self.space.positions_equal(position, entry, self.tolerance)
            for entry in self.entries
        )

    def add(self, position: Position) -> bool:
        "Adds the position unless it is taboo already; returns whether it was added."
        if position in self:
            return False
        self.entries.append(position)
        return True
