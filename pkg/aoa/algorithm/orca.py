from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from aoa.algorithm.community import (
    Community,
    PopulationShape,
    TabooList,
    create_population,
    update_matriarchs,
)
from aoa.algorithm.optimizer import Optimizer, Phase, RunResult, RunTracker
from aoa.config import Config
from aoa.space.search_space import Position, SearchSpace

#: speed of sound in water (m/s); a wave lasts one iteration, so this is also the
#: wave length
SOUND_SPEED = 1481.0

#: share of the frequency range above f_min below which echolocation frequencies are
#: floored
FREQUENCY_FLOOR = 0.1


@dataclass(frozen=True)
class AlgorithmParams:
    w0: float = 0.25
    gamma: float = 0.5
    delta: float = 0.25
    alpha: float = 0.75
    f_min: float = 0.0
    f_max: float = 2.0
    a0: float = 1.0
    a_min: float = 0.01
    sound_speed: float = SOUND_SPEED

    def __post_init__(self):
        if not 0.0 <= self.w0 <= 1.0:
            raise ValueError(f"w0 must be in [0,1], got {self.w0}")
        if not self.gamma >= 0.0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0,1), got {self.delta}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0,1], got {self.alpha}")
        if not self.f_min < self.f_max:
            raise ValueError(
                f"f_min must be smaller than f_max, got ({self.f_min}, {self.f_max})"
            )
        if not 0.0 <= self.a_min < self.a0:
            raise ValueError(
                f"loudness range must satisfy 0 <= a_min < a0, got "
                f"({self.a_min}, {self.a0})"
            )
        if not self.sound_speed > 0.0:
            raise ValueError(f"sound_speed must be positive, got {self.sound_speed}")

    @staticmethod
    def from_config(config: Config, key: str = "aoa") -> "AlgorithmParams":
        return AlgorithmParams(
            **{
                name: float(config.get(f"{key}.{name}"))
                for name in [
                    "w0",
                    "gamma",
                    "delta",
                    "alpha",
                    "f_min",
                    "f_max",
                    "a0",
                    "a_min",
                    "sound_speed",
                ]
            }
        )


@dataclass(frozen=True)
class PhaseBudgets:
    max_iter: int = 5
    max_motions: int = 50
    max_echo_motions: int = 30
    max_hunt_motions: int = 30

    def __post_init__(self):
        for name in ["max_iter", "max_motions", "max_echo_motions", "max_hunt_motions"]:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def total(self) -> int:
        "Rounds per run summed over all phases and iterations."
        return self.max_iter * (
            self.max_motions + self.max_echo_motions + self.max_hunt_motions
        )

    @staticmethod
    def from_config(config: Config, key: str = "aoa.budgets") -> "PhaseBudgets":
        return PhaseBudgets(
            max_iter=config.get(f"{key}.max_iter"),
            max_motions=config.get(f"{key}.max_motions"),
            max_echo_motions=config.get(f"{key}.max_echo_motions"),
            max_hunt_motions=config.get(f"{key}.max_hunt_motions"),
        )


# -- update rules --


def frequency(params, beta: float) -> float:
    "Frequency interpolated between f_min and f_max."
    return params.f_min + (params.f_max - params.f_min) * beta


def draw_frequency(params, rng: np.random.Generator) -> float:
    """Draws a frequency; a zero frequency is redrawn since velocities divide by it."""
    f = frequency(params, rng.random())
    while f == 0.0:
        f = frequency(params, rng.random())
    return f


def decay_loudness(loudness: float, params) -> float:
    "Decays the loudness by delta, never below a_min."
    return max(params.delta * loudness, params.a_min)


def echolocation_velocity(loudness: float, f: float, params) -> float:
    """Loudness over frequency.

    The frequency is floored at a tenth of the frequency range above ``f_min`` so
    that velocities stay bounded by ``10 * a0 / (f_max - f_min)`` for ``f_min = 0``.

    """
    floor = params.f_min + FREQUENCY_FLOOR * (params.f_max - params.f_min)
    return loudness / max(f, floor)


def motion_velocity(
    velocity: float, w0: float, w_pod: float, d_pod: float, w_clan: float, d_clan: float
) -> float:
    "Inertia plus attraction to the pod and clan anchors."
    return w0 * velocity + w_pod * d_pod + w_clan * d_clan


def wave_offset(projection, velocity: float, gamma: float, sound_speed=SOUND_SPEED):
    """Offset of the wave move for a given projection of a position.

    The wave length is the sound speed (one-iteration waves) and the crossing time is
    wave length over speed, so the time term reduces to ``2*pi / |velocity|``.

    """
    wavelength = sound_speed
    return gamma * np.sin(
        2.0 * np.pi / wavelength * projection - 2.0 * np.pi / abs(velocity)
    )


def wave_perturbation(
    position: Position,
    velocity: float,
    gamma: float,
    space: SearchSpace,
    rng: np.random.Generator,
    sound_speed: float = SOUND_SPEED,
) -> Position:
    """Applies the wave move as an additive perturbation.

    Skipped for a resting orca (the crossing time is undefined) and for zero amplitude.

    """
    if velocity == 0.0 or gamma == 0.0:
        return position
    offset = wave_offset(space.projection(position), velocity, gamma, sound_speed)
    return space.perturb(position, offset, rng)


def narrowing_step(radius: float, u: float) -> Tuple[float, float]:
    """One step of the narrowing circle.

    Returns the displacement ``r - a`` with ``a = u * r`` and the decremented radius
    ``r - a`` (floored at 0).

    """
    a = u * radius
    return radius - a, max(radius - a, 0.0)


def spiral_step(l: float) -> float:
    "Displacement of one spiral step (moves away from the clan anchor)."
    return -2.0 * math.pi * l


# -- phases --


def _end_round(
    community: Community, space: SearchSpace, tracker: Optional[RunTracker]
) -> bool:
    """Re-derives the matriarchs and reports whether any orca is optimal."""
    update_matriarchs(community)
    solved = False
    for orca in community.orcas():
        if tracker is not None:
            solved = tracker.observe(orca.position, orca.fitness) or solved
        elif space.is_optimal(orca.position):
            solved = True
    if tracker is not None:
        tracker.end_round()
    return solved


def _move(orca, position, space: SearchSpace, tracker: Optional[RunTracker]):
    orca.position = position
    orca.fitness = space.fitness(position)
    if tracker is not None:
        tracker.position_updates += 1


def collective_motion_phase(
    community: Community,
    params: AlgorithmParams,
    space: SearchSpace,
    max_motions: int,
    rng: np.random.Generator,
    tracker: Optional[RunTracker] = None,
) -> Community:
    """Moves every orca toward the best positions of its pod and clan, then applies the
    wave move.

    The attraction weights are the orca's share of the total fitness of its pod and
    clan, taken before the round.

    """
    for _ in range(max_motions):
        for c, clan in enumerate(community.clans):
            clan_anchor = community.clan_anchor(c)
            clan_total = sum(orca.fitness for pod in clan for orca in pod)
            for p, pod in enumerate(clan):
                pod_anchor = community.pod_anchor(c, p)
                pod_total = sum(orca.fitness for orca in pod)
                for orca in pod:
                    w_pod = orca.fitness / pod_total if pod_total > 0 else 0.0
                    w_clan = orca.fitness / clan_total if clan_total > 0 else 0.0
                    orca.velocity = motion_velocity(
                        orca.velocity,
                        params.w0,
                        w_pod,
                        space.distance(pod_anchor, orca.position),
                        w_clan,
                        space.distance(clan_anchor, orca.position),
                    )
                    position = space.translate(
                        orca.position, orca.velocity, clan_anchor, rng
                    )
                    position = wave_perturbation(
                        position,
                        orca.velocity,
                        params.gamma,
                        space,
                        rng,
                        params.sound_speed,
                    )
                    _move(orca, position, space, tracker)
        if _end_round(community, space, tracker):
            break
    return community


def echolocation_phase(
    community: Community,
    params: AlgorithmParams,
    space: SearchSpace,
    max_echo_motions: int,
    rng: np.random.Generator,
    tracker: Optional[RunTracker] = None,
) -> Community:
    """Frequency and loudness driven moves toward the best positions of the clans.

    Loudness is reset to ``a0`` on entry and decays every round, so step sizes shrink.

    """
    for orca in community.orcas():
        orca.loudness = params.a0
    for _ in range(max_echo_motions):
        for c, clan in enumerate(community.clans):
            anchor = community.clan_anchor(c)
            for pod in clan:
                for orca in pod:
                    orca.frequency = draw_frequency(params, rng)
                    orca.loudness = decay_loudness(orca.loudness, params)
                    orca.velocity = echolocation_velocity(
                        orca.loudness, orca.frequency, params
                    )
                    _move(
                        orca,
                        space.translate(orca.position, orca.velocity, anchor, rng),
                        space,
                        tracker,
                    )
        if _end_round(community, space, tracker):
            break
    return community


def hunting_phase(
    community: Community,
    params: AlgorithmParams,
    space: SearchSpace,
    max_hunt_motions: int,
    rng: np.random.Generator,
    tracker: Optional[RunTracker] = None,
) -> Community:
    """Carousel hunting around the best positions of the clans.

    Each orca is first placed on a circle of random radius around its clan's anchor;
    the radius is drawn from ``[0, max(d_max, space.min_radius))`` where ``d_max`` is
    the largest distance of an orca to its clan anchor. The placement counts as a
    round. Then, every round, each orca either narrows its circle (probability alpha)
    or takes a spiral step.

    """
    anchors = [community.clan_anchor(c) for c in range(len(community.clans))]
    d_max = max(
        space.distance(orca.position, anchors[c])
        for c, _, _, orca in community.indexed_orcas()
    )
    upper = max(d_max, space.min_radius)
    radii = []
    for c, _, _, orca in community.indexed_orcas():
        orca.position, radius = space.encircle(
            orca.position, anchors[c], rng.uniform(0.0, upper), rng
        )
        orca.fitness = space.fitness(orca.position)
        radii.append(radius)
    if _end_round(community, space, tracker):
        return community

    for _ in range(max_hunt_motions):
        anchors = [community.clan_anchor(c) for c in range(len(community.clans))]
        for index, (c, _, _, orca) in enumerate(community.indexed_orcas()):
            if rng.random() < params.alpha:
                displacement, radii[index] = narrowing_step(radii[index], rng.random())
            else:
                displacement = spiral_step(rng.random())
            _move(
                orca,
                space.translate(orca.position, displacement, anchors[c], rng),
                space,
                tracker,
            )
        if _end_round(community, space, tracker):
            break
    return community


def exploration_jump(
    community: Community,
    taboo: TabooList,
    space: SearchSpace,
    shape: PopulationShape,
    rng: np.random.Generator,
    retries: int = 100,
) -> Community:
    """Replaces the community by one built around a far jump from a clan anchor.

    The jump is redrawn while it hits the taboo list. After ``retries`` redraws the last
    candidate is used anyway and ``taboo.saturations`` is incremented; otherwise the
    candidate is added to the taboo list.

    """
    clan = int(rng.integers(len(community.clans)))
    launch = community.clan_anchor(clan)
    candidate = space.max_distance_jump(launch, rng)
    attempts = 0
    while candidate in taboo:
        if attempts >= retries:
            taboo.saturations += 1
            break
        candidate = space.max_distance_jump(launch, rng)
        attempts += 1
    else:
        taboo.add(candidate)
    return create_population(candidate, shape, space, rng)


def run_aoa(
    space: SearchSpace,
    params: AlgorithmParams,
    shape: PopulationShape,
    budgets: PhaseBudgets,
    seed: int,
    taboo_retries: int = 100,
    log: Callable[[str], None] = None,
) -> RunResult:
    """One run of the orca algorithm.

    Starts from a population around a random position. Each iteration runs collective
    motion, then (while the optimum has not been found) echolocation, hunting and an
    exploration jump. The result carries the best position seen in any population.

    """
    start_time = time.perf_counter()
    rng = np.random.default_rng(seed)
    tracker = RunTracker(space)
    taboo = TabooList(space)

    community = create_population(space.random_position(rng), shape, space, rng)
    iterations_used = 0
    for iteration in range(1, budgets.max_iter + 1):
        iterations_used = iteration
        tracker.phase = Phase.MOTION.value
        community.evaluate(space)
        if _end_round(community, space, tracker):
            break

        collective_motion_phase(
            community, params, space, budgets.max_motions, rng, tracker
        )
        if tracker.success:
            break

        tracker.phase = Phase.ECHOLOCATION.value
        echolocation_phase(
            community, params, space, budgets.max_echo_motions, rng, tracker
        )
        if tracker.success:
            break

        tracker.phase = Phase.HUNTING.value
        hunting_phase(community, params, space, budgets.max_hunt_motions, rng, tracker)
        if tracker.success:
            break

        tracker.phase = Phase.EXPLORATION.value
        saturations = taboo.saturations
        community = exploration_jump(
            community, taboo, space, shape, rng, retries=taboo_retries
        )
        if taboo.saturations > saturations and log is not None:
            log(
                "Warning: exploration found no position outside the taboo list after "
                f"{taboo_retries} retries (seed {seed}, iteration {iteration})"
            )
        if _end_round(community, space, tracker):
            break

    return tracker.result(
        seed=seed,
        wall_time=time.perf_counter() - start_time,
        iterations_used=iterations_used,
        algorithm="aoa",
        taboo_saturations=taboo.saturations,
    )


class ArtificialOrcaAlgorithm(Optimizer):
    """The orca algorithm, configured by the options under ``aoa``."""

    def __init__(self, config: Config, space: SearchSpace, configuration_key="aoa"):
        super().__init__(config, space, configuration_key)
        self.params = AlgorithmParams.from_config(config, configuration_key)
        self.shape = PopulationShape.from_config(
            config, f"{configuration_key}.population"
        )
        self.budgets = PhaseBudgets.from_config(config, f"{configuration_key}.budgets")
        self.taboo_retries = self.get_option("taboo_retries")

    def run(self, seed: int) -> RunResult:
        result = run_aoa(
            self.space,
            self.params,
            self.shape,
            self.budgets,
            seed,
            taboo_retries=self.taboo_retries,
            log=self.log,
        )
        result.algorithm = self.name
        return result
