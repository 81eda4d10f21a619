from setuptools import setup, find_packages

setup(
    name="peano_berg",
    version="0.1",
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    py_modules=[
        'peano_berg',
        'cli',
        'config',
        'errors',
        'curve',
        'compact',
        'selection',
        'spectral',
        'calculus',
    ],
    install_requires=[
        'numpy',
        'scipy',
        'PyYAML',
    ],
    entry_points={
        'console_scripts': [
            'peano-berg=peano_berg:main',
        ],
    },
)
