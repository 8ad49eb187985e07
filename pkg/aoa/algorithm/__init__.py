from aoa.algorithm.optimizer import (
    Optimizer,
    Phase,
    RunResult,
    RunTracker,
    fair_iterations,
)
from aoa.algorithm.community import (
    PopulationShape,
    Orca,
    Community,
    TabooList,
    create_population,
    update_matriarchs,
)
from aoa.algorithm.orca import (
    AlgorithmParams,
    PhaseBudgets,
    ArtificialOrcaAlgorithm,
    draw_frequency,
    decay_loudness,
    wave_perturbation,
    collective_motion_phase,
    echolocation_phase,
    hunting_phase,
    exploration_jump,
    run_aoa,
)
from aoa.algorithm.pso import PsoParams, ParticleSwarmOptimization, run_pso
from aoa.algorithm.ba import BaParams, BatAlgorithm, run_ba
