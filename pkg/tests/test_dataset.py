import os
import tempfile
import unittest

from aoa import Dataset
from aoa.util.maze_dataset import DatasetSpec, build_dataset
from tests.util import create_config, get_maze_file


class TestDataset(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmpdir = tempfile.TemporaryDirectory()
        cls.dataset_folder = cls.tmpdir.name
        spec = DatasetSpec(
            classes=[0, 30], mazes_per_class=2, starts_per_maze=2, sizes=[6]
        )
        build_dataset(spec, cls.dataset_folder)

    @classmethod
    def tearDownClass(cls):
        cls.tmpdir.cleanup()

    def setUp(self):
        self.config = create_config()
        self.config.set("dataset.folder", self.dataset_folder)

    def test_load_folder(self):
        dataset = Dataset.create(self.config)
        self.assertEqual(len(dataset), 8)
        self.assertEqual(dataset.classes(), ["conn0", "conn30"])
        instance = dataset.get("6x6_conn30_m02_s01")
        self.assertEqual(instance.instance_class, "conn30")
        self.assertEqual(instance.size, "6x6")
        self.assertEqual(instance.maze.entrance, instance.start)
        self.assertEqual(instance.file, os.path.join("6x6", "conn30", "maze_02.maze"))
        self.assertGreaterEqual(instance.seed, 0)
        with self.assertRaises(KeyError):
            dataset.get("nope")

    def test_filters(self):
        self.config.set("dataset.classes", ["conn30"])
        dataset = Dataset.create(self.config)
        self.assertEqual(len(dataset), 4)
        self.assertEqual(dataset.classes(), ["conn30"])

        self.config.set("dataset.max_instances", 3)
        self.assertEqual(len(Dataset.create(self.config)), 3)

        self.config.set("dataset.sizes", ["15x15"])
        with self.assertRaises(ValueError):
            Dataset.create(self.config)

    def test_missing_data(self):
        config = create_config()
        with self.assertRaises(ValueError):
            Dataset.create(config)
        config.set("dataset.folder", os.path.join(self.dataset_folder, "missing"))
        with self.assertRaises(IOError):
            Dataset.create(config)
        config.set("dataset.file", get_maze_file("missing"))
        with self.assertRaises(IOError):
            Dataset.create(config)


class TestMazeFileDataset(unittest.TestCase):
    def test_single_start(self):
        dataset = Dataset.create(create_config("corridor"))
        self.assertEqual(len(dataset), 1)
        instance = dataset.instances()[0]
        self.assertEqual(instance.instance_id, "corridor")
        self.assertEqual(instance.instance_class, "3x3")
        self.assertEqual(instance.start, (0, 0))

    def test_header_starts(self):
        dataset = Dataset.create(create_config("walls"))
        self.assertEqual(
            [i.instance_id for i in dataset.instances()], ["walls_s01", "walls_s02"]
        )
        self.assertEqual(
            [i.maze.entrance for i in dataset.instances()], [(2, 4), (2, 0)]
        )

    def test_explicit_start(self):
        config = create_config("walls")
        config.set("dataset.start", [4, 0])
        dataset = Dataset.create(config)
        self.assertEqual(len(dataset), 1)
        self.assertEqual(dataset.instances()[0].start, (4, 0))

        config.set("dataset.start", [4])
        with self.assertRaises(ValueError):
            Dataset.create(config)

    def test_start_on_exit(self):
        instance = Dataset.create(create_config("trivial")).instances()[0]
        self.assertEqual(instance.maze.entrance, instance.maze.exit)
