from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as file:
    long_description = file.read()

setup(
    name="equihyper",
    version="0.1.0",
    description="equihyper is a small library to train equilibrium (fixed-point) hypergraph neural networks with implicit differentiation, and to compare them against stacked hypergraph convolutions.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires=">=3.8.0",
    license="MIT",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.25.2",
        "scikit-learn>=1.3.0",
        "scipy>=1.11.1",
        "torch>=2.0.1",
        "tqdm>=4.65.0",
    ],
    extras_require={
        "dev": [
            "black>=23.7.0",
            "pytest>=7.4.0",
        ]
    },
    entry_points={
        "console_scripts": [
            "equihyper=equihyper.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "Intended Audience :: Education",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Operating System :: Microsoft :: Windows",
        "Operating System :: Unix",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)

# Steps to publish:
# 1. Update version in setup.py
# 2. python setup.py sdist bdist_wheel
# 3. Upload to pypi:
#    twine upload dist/*
