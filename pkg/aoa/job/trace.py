import re
from typing import Any, Dict, List

import pandas as pd
import yaml


class Trace:
    """Utility class for handling traces.

    A trace file holds one YAML mapping per line, as written by :meth:`Config.trace`.

    """

    def __init__(self, tracefile=None, regex_filter=None):
        self.entries: List[Dict[str, Any]] = []
        if tracefile:
            self.load(tracefile, regex_filter)

    def load(self, tracefile, regex_filter=None):
        if regex_filter:
            matcher = re.compile(regex_filter)
        try:
            with open(tracefile, "r") as file:
                for line in file:
                    if not line.strip():
                        continue
                    if regex_filter and not matcher.search(line):
                        continue
                    entry = yaml.load(line, Loader=yaml.SafeLoader)
                    self.entries.append(entry)
        except OSError as e:
            raise IOError(f"cannot read trace file {tracefile}: {e}") from e

    def filter(self, filter_dict={}) -> List[Dict[str, Any]]:
        def predicate(entry):
            for key, value in filter_dict.items():
                if key not in entry or value != entry[key]:
                    return False
            return True

        return list(filter(predicate, self.entries))

    def to_dataframe(self, filter_dict={}) -> pd.DataFrame:
        filtered_entries = self.filter(filter_dict)
        return pd.DataFrame(filtered_entries)

    def last(self, filter_dict={}) -> Dict[str, Any]:
        "The last entry matching ``filter_dict``, or an empty dict."
        entries = self.filter(filter_dict)
        return entries[-1] if entries else {}
