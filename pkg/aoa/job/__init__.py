from aoa.job.trace import Trace
from aoa.job.job import Job
from aoa.job.solve import SolveJob
from aoa.job.bench import BenchJob
from aoa.job.sweep import SweepJob, Grid
