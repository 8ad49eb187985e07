from setuptools import setup

setup(
    name="libaoa",
    version="0.1",
    description="The artificial orca algorithm and a benchmark harness for "
    "maze solving and continuous optimization",
    packages=["aoa", "aoa.algorithm", "aoa.space", "aoa.job", "aoa.util", "aoa.grids"],
    package_data={
        "aoa": ["config-default.yaml"],
        "aoa.algorithm": ["*.yaml"],
        "aoa.grids": ["*.yaml"],
    },
    install_requires=[
        "pyyaml",
        "numpy",
        "pandas",
        "path",
    ],
    python_requires=">=3.7",
    zip_safe=False,
    entry_points={"console_scripts": ["aoa = aoa.cli:main",],},
)
