from setuptools import setup, find_packages


setup(
    name="cantorlab",
    version="0.1.0",
    description="Exact Baire-topology constructions on eventually periodic binary sequences.",
    packages=find_packages(exclude=("tests", "examples*")),
)
