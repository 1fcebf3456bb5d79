from setuptools import setup, find_packages

VERSION = '0.1.0'
DESCRIPTION = 'nilmonoid'
LONG_DESCRIPTION = 'Knapsack and submonoid membership in nilpotent groups of class 2'

# Setting up
setup(
        name="nilmonoid",
        version=VERSION,
        description=DESCRIPTION,
        long_description=LONG_DESCRIPTION,
        packages=find_packages(exclude=['tests']),
        python_requires='>=3.10',
        install_requires=[
            'numpy',
            'matplotlib',
            'pysmt',
        ],
        extras_require={
            'tests': ['pytest', 'hypothesis'],
            'docs': ['mkdocs-material', 'mkdocstrings[python]'],
        },
        entry_points={
            'console_scripts': ['nilmonoid=nilmonoid.cli:main'],
        },

        keywords=['python', 'nilpotent groups', 'knapsack', 'submonoid membership'],
        classifiers= [
            "Development Status :: 3 - Alpha",
            "Intended Audience :: Science/Research",
            "Programming Language :: Python :: 3",
            "Topic :: Scientific/Engineering :: Mathematics",
        ]
)
