from setuptools import setup

requirements = []
with open("requirements.txt") as f:
    for line in f.read().splitlines():
        if line.startswith("#"):
            continue
        requirements.append(line)

setup(
    name="skewprod",
    packages=["skewprod"],
    install_requires=requirements,
    version="0.1.0",
    description="Ergodic analysis of noncommutative skew products on crossed product C*-algebras",
    python_requires=">=3.8.0",
    license="MIT",
    entry_points={"console_scripts": ["skewprod = skewprod.cli:main"]},
    classifiers=[
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
