#
#
#
#
"""
setup.py file for levyhg
"""

from setuptools import find_packages, setup


version_fh = open("src/levyhg/__init__.py", "r")
version = version_fh.readlines()[-1].split("=")[1].strip().split('"')[1]
version_fh.close()
setup(
    name="levyhg",
    version=version,
    license="GNU General Public License v3.0",
    description="Extended hypergeometric Levy processes and stable-process laws",
    long_description=(
        """
        levyhg evaluates the Laplace exponents, Wiener-Hopf factors and Levy densities
        of the extended hypergeometric class of Levy processes, together with the
        Mellin transforms of their exponential functionals.

        The stable-process suite covers the path-censored and radial Lamperti
        transforms, the process conditioned to avoid zero, hitting times of zero and
        exit laws from [-1, 1]. Every closed form is checked by an independent route:
        series against closed form, quadrature, or Monte Carlo simulation.

        Tables are written as CSV or JSON, per-path samples as HDF5 or CSV.
        """
    ),
    install_requires=[
        "click",
        "h5py",
        "numpy",
        "jinja2",
        "scipy",
        "typing_extensions",
    ],
    extras_require={
        "docs": ["mkdocs", "mkdocstring", "mkdocs-click", "mkdocs-material"],
        "tests": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "levyhg=levyhg.cli:main",
        ],
    },
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    package_data={"levyhg": ["resources/templates/*"]},
    include_package_data=True,
    platforms="any",
    classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Natural Language :: English",
        "Intended Audience :: Science/Research",
    ],
)
