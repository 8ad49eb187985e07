from aoa.util.seed import derive_seed, run_seed, get_master_seed
from aoa.util.metric import Metric
