import hashlib

import numpy as np


def derive_seed(master_seed: int, *parts) -> int:
    """Derives a 63-bit seed from a master seed and further identifying parts.

    The parts are hashed with MD5 so that different (instance, run) pairs get
    unrelated seeds while any pair can be re-run in isolation.

    """
    key = ":".join(str(p) for p in (master_seed,) + parts)
    return int(hashlib.md5(key.encode()).hexdigest(), 16) & 0x7FFFFFFFFFFFFFFF


def run_seed(master_seed: int, instance_id: str, run: int) -> int:
    "Seed of run ``run`` on the given instance."
    return derive_seed(master_seed, instance_id, run)


def get_master_seed(config) -> int:
    """Returns ``random_seed.default``; if unset (negative), draws a fresh one.

    The drawn seed is stored in the configuration so that it ends up in the saved
    configuration and trace of the job.

    """
    seed = config.get("random_seed.default")
    if seed < 0:
        seed = int(np.random.SeedSequence().entropy & 0x7FFFFFFF)
        config.set("random_seed.default", seed, log=True)
    return seed
