import yaml

from aoa import Config, Dataset
from aoa.algorithm.optimizer import Optimizer, RunResult
from aoa.job import Job
from aoa.space.search_space import SearchSpace
from aoa.util.seed import get_master_seed, run_seed


class SolveJob(Job):
    """A single seeded run of the configured algorithm on a single instance.

    If the dataset holds several instances, the first one is used. The seed is
    ``solve.seed`` or, if unset, the seed run 0 of the instance would get in a bench.

    """

    def __init__(self, config: Config, dataset: Dataset, parent_job: Job = None):
        super().__init__(config, dataset, parent_job)

        if self.__class__ == SolveJob:
            for f in Job.job_created_hooks:
                f(self)

    def _run(self) -> RunResult:
        instances = self.dataset.instances()
        if len(instances) > 1:
            self.config.log(
                "Warning: dataset has {} instances; solving only {}".format(
                    len(instances), instances[0].instance_id
                )
            )
        instance = instances[0]
        seed = self.config.get("solve.seed")
        if seed < 0:
            seed = run_seed(get_master_seed(self.config), instance.instance_id, 0)

        space = SearchSpace.create(self.config, instance)
        optimizer = Optimizer.create(self.config, space)
        self.config.log(
            "Solving {} with {} (seed {})...".format(
                instance.instance_id, optimizer.name, seed
            )
        )
        result = optimizer.run(seed)

        row = result.to_dict(space)
        self.trace(
            event="run_completed",
            instance_id=instance.instance_id,
            run=0,
            **{"class": instance.instance_class},
            **row,
        )
        self.config.print(yaml.dump(row, sort_keys=False, default_flow_style=False))
        return result
