"""Setup script for unruh-filter-lab."""
from setuptools import find_packages, setup

setup(
    name="unruh-filter-lab",
    version="0.1.0",
    description="Negativity of a qubit-qutrit state under Unruh acceleration and local filtering",
    packages=find_packages(include=["app*", "unruh_filter_lab*"]),
    install_requires=[
        "numpy>=1.22",
        "fastapi>=0.95.0",
        "uvicorn>=0.21.1",
        "typer>=0.9.0",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0", "httpx>=0.24.0"],
    },
    entry_points={
        "console_scripts": [
            "unruh-filter-lab=unruh_filter_lab:app",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    python_requires=">=3.9",
)
