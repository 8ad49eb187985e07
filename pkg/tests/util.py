import os

from aoa import Config
from aoa.misc import aoa_base_dir


def create_config(maze_name: str = None, algorithm: str = "aoa") -> Config:
    config = Config()
    config.folder = None
    config.set("console.quiet", True)
    config.set("algorithm", algorithm)
    config._import(algorithm)
    if maze_name is not None:
        config.set("dataset.file", get_maze_file(maze_name))
    return config


def get_data_folder(name: str) -> str:
    return os.path.join(aoa_base_dir(), "tests", "data", name)


def get_maze_file(maze_name: str) -> str:
    return os.path.join(get_data_folder("mazes"), maze_name + ".maze")
