import math
from typing import Iterable, List, Mapping, Tuple

import pandas as pd


def _or_inf(value) -> float:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return math.inf
    return float(value)


class Metric:
    """Utility class for comparing report rows.

    A row is better if it has a higher success rate; ties are broken in favor of the
    smaller mean solution size and then of the smaller mean run time. Missing sizes
    and run times rank last.

    """

    def __init__(
        self,
        success_rate="success_rate_pct",
        solution_size="mean_solution_size",
        runtime="mean_runtime_s",
    ):
        self.columns = (success_rate, solution_size, runtime)

    def key(self, row: Mapping) -> Tuple[float, float, float]:
        "Sort key; smaller is better."
        success_rate, solution_size, runtime = (row[c] for c in self.columns)
        missing = _or_inf(success_rate) == math.inf
        return (
            math.inf if missing else -float(success_rate),
            _or_inf(solution_size),
            _or_inf(runtime),
        )

    def better(self, row1: Mapping, row2: Mapping) -> bool:
        return self.key(row1) < self.key(row2)

    def best_index(self, rows: List[Mapping]) -> int:
        return min(range(len(rows)), key=lambda i: self.key(rows[i]))

    def best(self, rows: Iterable[Mapping]) -> Mapping:
        rows = list(rows)
        return rows[self.best_index(rows)]

    def rank(self, df: pd.DataFrame) -> pd.DataFrame:
        """Returns ``df`` sorted from best to worst with a 1-based ``rank`` column.

        Rows with equal keys keep their order and get distinct ranks.

        """
        records = df.to_dict("records")
        order = sorted(range(len(records)), key=lambda i: (self.key(records[i]), i))
        result = df.iloc[order].reset_index(drop=True)
        result.insert(0, "rank", range(1, len(result) + 1))
        return result
