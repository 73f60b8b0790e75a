from setuptools import setup, find_packages

__version__ = '0.1.0'

setup(name='dmxyz',
      version=__version__,
      description='Thermal concurrence of the two-qubit Heisenberg XYZ chain with a DM interaction',
      packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
      python_requires='>=3.8',
      install_requires=['numpy', 'structlog', 'typer', 'rich'],
      extras_require={'test': ['pytest', 'hypothesis']},
      entry_points={'console_scripts': ['dmxyz = dmxyz.cli:app']},
)
