from setuptools import setup, find_packages

setup(
    name="locc-verify",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "python-dotenv",
        "loguru",
    ],
    entry_points={
        "console_scripts": [
            "locc-verify=src.cli.main:main",
        ],
    },
)
