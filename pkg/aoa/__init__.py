from aoa.config import Config, Configurable
from aoa.dataset import Dataset, Instance
