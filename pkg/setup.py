from setuptools import setup, find_packages

setup(
    name='ruijsenaars',
    version='0.0.1',
    description='Special functions of the two-particle hyperbolic and complex rational Ruijsenaars models',
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=[
        'numpy<1.24',  # edflow 0.4 uses np.float, removed in numpy 1.24
        'scipy',
        'tqdm',
        'pyyaml',
        'edflow',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': [
            'ruijsenaars = ruijsenaars.cli:main',
        ],
    },
)
