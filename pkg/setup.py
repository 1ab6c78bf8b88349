"""A setuptools based setup module.

See:
https://packaging.python.org/en/latest/distributing.html
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages

import midconv

setup(
    name='midconv',

    # Versions should comply with PEP440.
    version=midconv.__version__,

    description='Middle convolution, rigid Fuchsian systems and p-curvature',
    long_description="Katz middle convolution of matrix tuples and Fuchsian systems in exact "
                     "arithmetic, construction of rigid Fuchsian systems, p-curvature nilpotence "
                     "scans and numerical monodromy checks.",

    license='MIT',

    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        'Development Status :: 4 - Beta',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],

    keywords='middle-convolution fuchsian monodromy p-curvature rigid-local-systems',

    packages=find_packages(exclude=['contrib', 'docs', 'tests']),

    # List run-time dependencies here.  These will be installed by pip when
    # your project is installed.
    install_requires=['numpy', 'scipy', 'sympy'],

    # math.lcm needs Python>=3.9
    python_requires='>=3.9',

    # $ pip install -e .[test]
    extras_require={
        'test': ['pytest'],
    },

    entry_points={
        'console_scripts': [
            'midconv=midconv.__main__:run',
        ],
    },
)
